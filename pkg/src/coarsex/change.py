"""
Change-of-group functors on spaces: restriction, completion, quotient and
induction, plus instance certificates for the double-coset (Mackey) formula
and the induction/restriction adjunction.

Groups are tiny, so subgroups, normalizers and double cosets are enumerated
outright.  Quotient carriers use the sorted orbit tuple as the point; the
induced carrier Gamma x_H X uses the least pair of each class.
"""

from dataclasses import dataclass, field

from .analysis import analyze_map
from .build import combine_free_union, _validated
from .groups import FiniteGroup, GroupHom
from .spaces import (
    Action,
    Bornology,
    PreconditionError,
    Space,
    SpaceMap,
    ValidationReport,
    point_key,
    saturate,
    thicken,
)


def subgroup_group(group, elements, name=None):
    """Package a subgroup of `group` as its own FiniteGroup (same labels)."""
    elements = [g for g in group.elements if g in frozenset(elements)]
    table = {(a, b): group.mul(a, b) for a in elements for b in elements}
    return FiniteGroup(elements, table, name=name or ("%s-sub%d" % (group.name, len(elements))))


def quotient_group(group, normal_elements, name=None):
    """G / N for a normal subgroup, with cosets as sorted tuples."""
    N = frozenset(normal_elements)
    order = {g: i for i, g in enumerate(group.elements)}
    cosets = {}
    for g in group.elements:
        coset = tuple(sorted((group.mul(g, n) for n in N), key=order.__getitem__))
        cosets[g] = coset
    elements = sorted(set(cosets.values()), key=lambda c: order[c[0]])
    table = {}
    for a in elements:
        for b in elements:
            table[a, b] = cosets[group.mul(a[0], b[0])]
    W = FiniteGroup(elements, table, name=name or (group.name + "/N"))
    return W, cosets


def change_res(space, hom):
    """Restrict the action along hom: H -> Gamma; structures unchanged."""
    if hom.target != space.group:
        raise PreconditionError("restriction needs a space over the target group")
    H = hom.source
    perms = {
        h: dict(space.action.perms[hom(h)]) for h in H.elements
    }
    act = Action(H, space.carrier, perms)
    return Space(
        space.carrier,
        act,
        space.coarse_max,
        space.coarse_generators,
        space.bornology,
        name="Res(%s)" % space.name,
    )


def change_bh(space, hom):
    """H-completion: saturate the bounded generators by iota(H); the result
    is acted on by the normalizer of the image."""
    if hom.target != space.group:
        raise PreconditionError("completion needs a space over the target group")
    G = space.group
    img = hom.image
    born = []
    for B in space.bornology.generators:
        S = set()
        for h in img:
            S |= space.action.translate_set(h, B)
        born.append(frozenset(S))
    N = G.normalizer(img)
    NG = subgroup_group(G, N, name="N_%s" % G.name)
    perms = {n: dict(space.action.perms[n]) for n in NG.elements}
    act = Action(NG, space.carrier, perms)
    return Space(
        space.carrier,
        act,
        space.coarse_max,
        space.coarse_generators,
        Bornology(born),
        name="B_H(%s)" % space.name,
    )


def _orbit_label(points):
    return tuple(sorted(points, key=point_key))


def change_qh(space, hom):
    """Quotient by iota(H): carrier H\\X with the Weyl-group action, minimal
    coarse structure making the projection controlled, maximal bornology
    making it proper from the H-completion."""
    if hom.target != space.group:
        raise PreconditionError("quotient needs a space over the target group")
    G = space.group
    img = hom.image
    N = G.normalizer(img)
    W, coset_of = quotient_group(subgroup_group(G, N), img, name="W_%s" % G.name)

    orbit_of = {}
    for p in space.carrier:
        orbit_of[p] = _orbit_label(
            {space.action.apply(h, p) for h in img}
        )
    carrier = tuple(sorted(set(orbit_of.values()), key=point_key))
    perms = {}
    for w in W.elements:
        n = w[0]
        perms[w] = {
            q: orbit_of[space.action.apply(n, q[0])] for q in carrier
        }
    act = Action(W, carrier, perms)

    projected = frozenset((orbit_of[x], orbit_of[y]) for (x, y) in space.coarse_max)
    cmax = saturate([projected], act, carrier)

    completed = change_bh(space, hom).bornology
    bounded_fibers = frozenset(
        q
        for q in carrier
        if completed.is_bounded(frozenset(p for p in space.carrier if orbit_of[p] == q))
    )
    sp = Space(
        carrier, act, cmax, (projected,), Bornology([bounded_fibers]), name="Q_H(%s)" % space.name
    )
    _validated(sp)
    return sp, orbit_of


def _class_rep(group, hom, pair_order, gamma, x, space):
    """Least member of the class of (gamma, x) in Gamma x_H X."""
    H = hom.source
    members = [
        (group.mul(gamma, group.inv(hom(h))), space.action.apply(h, x))
        for h in H.elements
    ]
    return min(members, key=pair_order)


def change_ind(space, hom):
    """Induction: carrier Gamma x_H X, bornology generated by the images of
    {gamma} x B, coarse structure generated by the images of diag x U."""
    if hom.source != space.group:
        raise PreconditionError("induction needs a space over the source group")
    G = hom.target
    order = {g: i for i, g in enumerate(G.elements)}

    def pair_order(pair):
        return (order[pair[0]], point_key(pair[1]))

    rep = {}
    for gamma in G.elements:
        for x in space.carrier:
            rep[gamma, x] = _class_rep(G, hom, pair_order, gamma, x, space)
    carrier = tuple(sorted(set(rep.values()), key=pair_order))
    perms = {
        g: {c: rep[G.mul(g, c[0]), c[1]] for c in carrier} for g in G.elements
    }
    act = Action(G, carrier, perms)
    gens = tuple(
        frozenset(
            (rep[gamma, x], rep[gamma, y])
            for gamma in G.elements
            for (x, y) in U
        )
        for U in (space.coarse_generators or (frozenset((p, p) for p in space.carrier),))
    )
    cmax = saturate(gens, act, carrier)
    born = [
        frozenset(rep[gamma, x] for x in B)
        for gamma in G.elements
        for B in space.bornology.generators
    ]
    sp = Space(carrier, act, cmax, gens, Bornology(born), name="Ind(%s)" % space.name)
    _validated(sp)
    return sp, rep


def ind_map(hom, f, ind_src=None, ind_tgt=None):
    """Functorial image of f: X -> X' on the induced spaces."""
    src, rep_src = ind_src or change_ind(f.domain, hom)
    tgt, rep_tgt = ind_tgt or change_ind(f.codomain, hom)
    return SpaceMap.from_dict(
        src, tgt, {c: rep_tgt[c[0], f(c[1])] for c in src.carrier}
    )


CHANGE_KINDS = ("res", "bh", "qh", "ind")


def change_group(kind, space, hom):
    if kind == "res":
        return change_res(space, hom)
    if kind == "bh":
        return change_bh(space, hom)
    if kind == "qh":
        return change_qh(space, hom)[0]
    if kind == "ind":
        return change_ind(space, hom)[0]
    raise PreconditionError("unknown change-of-group kind %r" % kind)


# ---------------------------------------------------------------------------
# Mackey double-coset certificate


@dataclass
class MackeyReport:
    double_cosets: list = field(default_factory=list)
    representatives: list = field(default_factory=list)
    orientation: str = "literal"
    isomorphism: bool = False
    flagged: bool = False
    details: ValidationReport = field(default_factory=ValidationReport)


def _try_mackey(X, iota, iota2, conj):
    """Build both sides of the double-coset formula and certify the explicit
    carrier bijection.  `conj` selects the direction of the conjugation
    embedding into the second group."""
    G = iota.target
    H2 = iota2.source
    img1, img2 = iota.image, iota2.image
    order = {g: i for i, g in enumerate(G.elements)}

    Hbar = subgroup_group(G, img1, name="Hbar")
    to_hbar = GroupHom(iota.source, Hbar, dict(iota.mapping))
    X1, rep1 = change_ind(X, to_hbar)  # Ind_H^{Hbar} X ; carrier Hbar x_H X

    left = change_res(change_ind(X, iota)[0], iota2)

    dcs = G.double_cosets(img2, img1)
    reps = [min(dc, key=order.__getitem__) for dc in dcs]

    summands = []
    summand_data = []
    for gamma in reps:
        gi = G.inv(gamma)
        L = sorted(
            (l for l in img1 if G.mul(G.mul(gamma, l), gi) in img2),
            key=order.__getitem__,
        )
        Lg = subgroup_group(G, L, name="L")
        incl = GroupHom(Lg, Hbar, {l: l for l in Lg.elements})
        X2 = change_res(X1, incl)
        H2bar = subgroup_group(G, img2, name="H2bar")
        if conj == "forward":
            emb = {l: G.mul(G.mul(gamma, l), gi) for l in Lg.elements}
        else:
            emb = {l: G.mul(G.mul(gi, l), gamma) for l in Lg.elements}
        try:
            e_gamma = GroupHom(Lg, H2bar, emb)
        except ValueError:
            return None, "embedding not a homomorphism for %r" % (gamma,)
        X3, rep3 = change_ind(X2, e_gamma)
        to_h2bar = GroupHom(H2, H2bar, dict(iota2.mapping))
        summands.append(change_res(X3, to_h2bar))
        summand_data.append((gamma, Lg, rep1, rep3))

    right = combine_free_union(summands, name="mackey_rhs")

    dc_index = {}
    for i, dc in enumerate(dcs):
        for g in dc:
            dc_index[g] = i

    # explicit bijection: factor g = a * gamma * b over the double-coset
    # representative and transport; all factorizations must agree
    mapping = {}
    for cls in left.carrier:
        g, x = cls
        i = dc_index[g]
        gamma = reps[i]
        _, _, r1, r3 = summand_data[i]
        images = set()
        for a in img2:
            for b in img1:
                if G.mul(G.mul(a, gamma), b) == g:
                    images.add((i, r3[a, r1[b, x]]))
        if len(images) != 1:
            return None, "factorization not well-defined at %r (images %r)" % (cls, images)
        mapping[cls] = images.pop()

    if len(set(mapping.values())) != len(mapping) or len(mapping) != len(right.carrier):
        return None, "carrier map is not a bijection"
    fwd = SpaceMap.from_dict(left, right, mapping)
    bwd = SpaceMap.from_dict(right, left, {v: k for k, v in mapping.items()})
    rep_f = analyze_map(fwd)
    rep_b = analyze_map(bwd)
    if not (rep_f.is_morphism and rep_b.is_morphism):
        return None, "transport map failed morphism checks"
    return (reps, fwd, bwd), None


def mackey_check(X, iota, iota2):
    """Certify Res o Ind against the double-coset decomposition for the two
    homomorphisms, recording representatives and the conjugation direction."""
    rep = MackeyReport()
    G = iota.target
    order = {g: i for i, g in enumerate(G.elements)}
    dcs = G.double_cosets(iota2.image, iota.image)
    rep.double_cosets = [sorted(dc, key=order.__getitem__) for dc in dcs]
    rep.representatives = [min(dc, key=order.__getitem__) for dc in dcs]

    got, err = _try_mackey(X, iota, iota2, "forward")
    if got is None:
        rep.details.add("forward conjugation", False, err)
        got, err = _try_mackey(X, iota, iota2, "backward")
        rep.orientation = "backward"
        if got is None:
            rep.details.add("backward conjugation", False, err)
            rep.flagged = True
            return rep
    rep.isomorphism = True
    rep.details.add("double-coset transport is an isomorphism", True)
    return rep


# ---------------------------------------------------------------------------
# induction adjunction certificate


@dataclass
class AdjunctionReport:
    unit_morphism: bool = False
    counit_morphism: bool = False
    triangle_left: bool = False
    triangle_right: bool = False
    details: ValidationReport = field(default_factory=ValidationReport)

    @property
    def ok(self):
        return (
            self.unit_morphism
            and self.counit_morphism
            and self.triangle_left
            and self.triangle_right
        )


def adjunction_check(iota, X, Y):
    """Unit X -> Res Ind X and counit Ind Res Y -> Y, with both triangle
    identities evaluated on the carriers."""
    if iota.source != X.group or iota.target != Y.group:
        raise PreconditionError("adjunction_check needs X over H and Y over Gamma")
    G = iota.target
    e = G.identity
    rep = AdjunctionReport()

    ind_x, rep_x = change_ind(X, iota)
    res_ind_x = change_res(ind_x, iota)
    unit = SpaceMap.from_dict(X, res_ind_x, {x: rep_x[e, x] for x in X.carrier})
    unit_rep = analyze_map(unit)
    rep.unit_morphism = unit_rep.is_morphism
    rep.details.entries.extend(unit_rep.details.entries)

    res_y = change_res(Y, iota)
    ind_res_y, rep_y = change_ind(res_y, iota)
    counit = SpaceMap.from_dict(
        ind_res_y, Y, {c: Y.action.apply(c[0], c[1]) for c in ind_res_y.carrier}
    )
    counit_rep = analyze_map(counit)
    rep.counit_morphism = counit_rep.is_morphism
    rep.details.entries.extend(counit_rep.details.entries)

    # triangle 1: counit_{Ind X} o Ind(unit) = id on Ind X
    ind_unit = ind_map(iota, unit, ind_src=(ind_x, rep_x))
    ind_res_ind_x, rep_xx = change_ind(res_ind_x, iota)
    counit_ind = SpaceMap.from_dict(
        ind_res_ind_x,
        ind_x,
        {c: ind_x.action.apply(c[0], c[1]) for c in ind_res_ind_x.carrier},
    )
    t1 = all(
        counit_ind(ind_unit(c)) == c for c in ind_x.carrier
    )
    rep.triangle_left = t1
    rep.details.add("triangle (counit Ind o Ind unit = id)", t1)

    # triangle 2: Res(counit) o unit_{Res Y} = id on Res Y
    unit_res_y = SpaceMap.from_dict(
        res_y, change_res(ind_res_y, iota), {y: rep_y[e, y] for y in res_y.carrier}
    )
    t2 = all(counit(unit_res_y(y)) == y for y in res_y.carrier)
    rep.triangle_right = t2
    rep.details.add("triangle (Res counit o unit = id)", t2)
    return rep


def bh_equals_restricted_normalizer(space, hom):
    """For finite H the completion agrees with plain restriction to the
    normalizer: same carrier, coarse structure, and bornology closure."""
    bh = change_bh(space, hom)
    G = space.group
    N = G.normalizer(hom.image)
    NG = subgroup_group(G, N)
    res = change_res(space, GroupHom(NG, G, {n: n for n in NG.elements}))
    return (
        bh.carrier == res.carrier
        and bh.coarse_max == res.coarse_max
        and bh.bornology.union == res.bornology.union
    )


def ind_absorbs_kernel_completion(space, hom):
    """Ind_H = Ind_H o B_K for K = ker(iota): certified by an explicit
    isomorphism of the induced spaces."""
    K = hom.kernel
    KG = subgroup_group(hom.source, K, name="K")
    bk = change_bh(space, GroupHom(KG, hom.source, {k: k for k in KG.elements}))
    # restrict the completion back to an H-space (N contains H when K is normal)
    if frozenset(bk.group.elements) != frozenset(hom.source.elements):
        return False
    bk_h = Space(
        bk.carrier,
        space.action,
        bk.coarse_max,
        bk.coarse_generators,
        bk.bornology,
        name=bk.name,
    )
    ind1, rep_a = change_ind(space, hom)
    ind2, rep_b = change_ind(bk_h, hom)
    if ind1.carrier != ind2.carrier:
        return False
    iso = SpaceMap.from_dict(ind1, ind2, {c: c for c in ind1.carrier})
    osi = SpaceMap.from_dict(ind2, ind1, {c: c for c in ind2.carrier})
    return analyze_map(iso).is_morphism and analyze_map(osi).is_morphism
