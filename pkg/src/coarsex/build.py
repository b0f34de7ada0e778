"""
Factories and combinators for equivariant bornological coarse spaces: the
named structures (canonical, min/max, metric, recoarsenings, subspaces),
monoidal/limit/colimit combinations, and the quotient adjunction.

Every constructor returns a Space that passes validate_space; recoarsening
raises ConstructionError when the requested structure is incompatible.
"""

from .analysis import analyze_map, is_coarsely_excisive
from .groups import FiniteGroup, trivial_group
from .spaces import (
    Action,
    Bornology,
    ConstructionError,
    DomainError,
    PreconditionError,
    Space,
    SpaceMap,
    compose,
    diagonal,
    make_space,
    point_key,
    saturate,
    thicken,
    validate_space,
)


def _validated(space):
    rep = validate_space(space)
    if not rep.ok:
        raise ConstructionError("construction produced an invalid space:\n%r" % rep)
    return space


def left_translation_action(group):
    perms = {g: {x: group.mul(g, x) for x in group.elements} for g in group.elements}
    return Action(group, group.elements, perms)


def coset_action(group, sub_elements):
    """Left action on the cosets of a subgroup; coset points are the sorted
    member tuples."""
    cosets = group.cosets(frozenset(sub_elements))
    label = {c: tuple(sorted(c)) for c in cosets}
    points = tuple(sorted(label.values()))
    perms = {}
    for g in group.elements:
        perms[g] = {
            label[c]: label[frozenset(group.mul(g, x) for x in c)] for c in cosets
        }
    return Action(group, points, perms)


def build_can_min(group, name=None):
    """The canonical space of a finite group: carrier the group itself with
    left translation, entourages the translates of B x B, minimal bornology.
    For finite carriers the largest generator B = Gamma already gives the
    full relation."""
    act = left_translation_action(group)
    full = frozenset((x, y) for x in group.elements for y in group.elements)
    singles = [frozenset([x]) for x in group.elements]
    return _validated(
        make_space(group.elements, act, [full], singles, name=name or "%s_can,min" % group.name)
    )


def build_min_min(carrier, action=None, name=None):
    carrier = tuple(carrier)
    act = action or Action.trivial(carrier)
    return _validated(
        make_space(
            carrier,
            act,
            [diagonal(carrier)],
            [frozenset([p]) for p in carrier],
            name=name or "min,min",
        )
    )


def build_max_max(carrier, action=None, name=None):
    carrier = tuple(carrier)
    act = action or Action.trivial(carrier)
    full = frozenset((x, y) for x in carrier for y in carrier)
    return _validated(
        make_space(carrier, act, [full], [frozenset(carrier)], name=name or "max,max")
    )


def build_min_max(carrier, action=None, name=None):
    carrier = tuple(carrier)
    act = action or Action.trivial(carrier)
    return _validated(
        make_space(
            carrier, act, [diagonal(carrier)], [frozenset(carrier)], name=name or "min,max"
        )
    )


def build_metric(carrier, dist, scales, action=None, name=None):
    """Coarse structure of U_r entourages and bornology of metric balls, for
    the supplied finite scale set."""
    carrier = tuple(carrier)
    act = action or Action.trivial(carrier)
    for x in carrier:
        if dist[x, x] != 0:
            raise PreconditionError("distance matrix has nonzero diagonal at %r" % (x,))
        for y in carrier:
            if dist[x, y] != dist[y, x]:
                raise PreconditionError("distance matrix not symmetric at %r" % ((x, y),))
    for g in act.group.elements:
        for x in carrier:
            for y in carrier:
                if dist[act.apply(g, x), act.apply(g, y)] != dist[x, y]:
                    raise PreconditionError("metric not invariant at %r" % ((g, x, y),))
    gens = [
        frozenset((x, y) for x in carrier for y in carrier if dist[x, y] <= r)
        for r in sorted(scales)
    ]
    balls = [
        frozenset(y for y in carrier if dist[x, y] <= r) for x in carrier for r in sorted(scales)
    ]
    return _validated(make_space(carrier, act, gens, balls, name=name or "metric"))


def build_recoarsen(space, entourage, name=None):
    """X_U: keep carrier, action and bornology; regenerate the coarse
    structure from the single invariant entourage U."""
    U = frozenset(entourage)
    if not U <= space.coarse_max:
        raise PreconditionError("recoarsening entourage must belong to the structure")
    if not space.action.is_invariant_pairs(U):
        raise PreconditionError("recoarsening entourage must be invariant")
    new = make_space(
        space.carrier,
        space.action,
        [U],
        space.bornology.generators,
        name=name or (space.name + "_U"),
    )
    rep = validate_space(new)
    if not rep.ok:
        raise ConstructionError(
            "recoarsening incompatible with the bornology:\n%r" % rep.failures()
        )
    return new


def build_subspace(space, Z, name=None):
    """Invariant subset with the induced structures: entourages and bounded
    sets are intersected with Z.  The induced maximal entourage is the
    restriction of the ambient one (not the saturation of restricted
    generators, which can be strictly smaller)."""
    Z = frozenset(Z)
    if not Z <= set(space.carrier):
        raise DomainError("subset not contained in the carrier")
    if not space.subset_invariant(Z):
        raise PreconditionError("subspace needs an invariant subset")
    carrier = tuple(p for p in space.carrier if p in Z)
    perms = {
        g: {p: space.action.apply(g, p) for p in carrier}
        for g in space.group.elements
    }
    act = Action(space.group, carrier, perms)
    zz = frozenset((x, y) for x, y in space.coarse_max if x in Z and y in Z)
    gens = tuple(
        frozenset((x, y) for x, y in G if x in Z and y in Z)
        for G in space.coarse_generators
    )
    born = [B & Z for B in space.bornology.generators if B & Z]
    sub = Space(carrier, act, zz, gens, Bornology(born), name=name or (space.name + "|Z"))
    return _validated(sub)


BUILD_KINDS = ("can_min", "min_min", "max_max", "min_max", "metric", "recoarsen", "subspace")


def build(kind, **params):
    """Dispatcher mirroring the space-specification kinds."""
    if kind == "can_min":
        return build_can_min(params["group"])
    if kind == "min_min":
        return build_min_min(params["carrier"], params.get("action"))
    if kind == "max_max":
        return build_max_max(params["carrier"], params.get("action"))
    if kind == "min_max":
        return build_min_max(params["carrier"], params.get("action"))
    if kind == "metric":
        return build_metric(
            params["carrier"], params["dist"], params["scales"], params.get("action")
        )
    if kind == "recoarsen":
        return build_recoarsen(params["space"], params["entourage"])
    if kind == "subspace":
        return build_subspace(params["space"], params["subset"])
    raise PreconditionError("unknown build kind %r" % kind)


# ---------------------------------------------------------------------------
# combinations


def _require_same_group(spaces):
    g = spaces[0].group
    for s in spaces[1:]:
        if s.group != g:
            raise PreconditionError("spaces must share one group")
    return g


def _product_skeleton(left, right):
    group = _require_same_group([left, right])
    carrier = tuple((a, b) for a in left.carrier for b in right.carrier)
    perms = {
        g: {
            (a, b): (left.action.apply(g, a), right.action.apply(g, b))
            for (a, b) in carrier
        }
        for g in group.elements
    }
    act = Action(group, carrier, perms)
    cmax = frozenset(
        ((a, b), (c, d))
        for (a, c) in left.coarse_max
        for (b, d) in right.coarse_max
    )
    dl, dr = diagonal(left.carrier), diagonal(right.carrier)
    gens = []
    for GL in tuple(left.coarse_generators) + (dl,):
        for GR in tuple(right.coarse_generators) + (dr,):
            gens.append(frozenset(((a, b), (c, d)) for (a, c) in GL for (b, d) in GR))
    return carrier, act, cmax, tuple(gens)


def combine_tensor(left, right, name=None):
    """Product coarse structure with the bornology generated by B' x B."""
    carrier, act, cmax, gens = _product_skeleton(left, right)
    born = [
        frozenset((a, b) for a in BL for b in BR)
        for BL in left.bornology.generators
        for BR in right.bornology.generators
    ]
    sp = Space(carrier, act, cmax, gens, Bornology(born), name=name or "tensor")
    return _validated(sp)


def combine_cartesian(left, right, name=None):
    """Product coarse structure with the limit bornology, generated by the
    preimages of bounded sets under the two projections."""
    carrier, act, cmax, gens = _product_skeleton(left, right)
    born = [
        frozenset((a, b) for a in BL for b in right.carrier)
        for BL in left.bornology.generators
    ] + [
        frozenset((a, b) for a in left.carrier for b in BR)
        for BR in right.bornology.generators
    ]
    sp = Space(carrier, act, cmax, gens, Bornology(born), name=name or "cartesian")
    return _validated(sp)


def combine_free_union(spaces, name=None):
    """Free union of a finite family: tagged disjoint carrier, blockwise
    entourages, bornology generated by the individual bounded sets.  For a
    finite family this is also the coproduct."""
    if not spaces:
        raise PreconditionError("free union of an empty family is not built")
    group = _require_same_group(spaces)
    carrier = tuple((i, p) for i, s in enumerate(spaces) for p in s.carrier)
    perms = {
        g: {(i, p): (i, spaces[i].action.apply(g, p)) for (i, p) in carrier}
        for g in group.elements
    }
    act = Action(group, carrier, perms)
    cmax = frozenset(
        ((i, x), (i, y)) for i, s in enumerate(spaces) for (x, y) in s.coarse_max
    )
    gens = tuple(
        frozenset(((i, x), (i, y)) for (x, y) in G)
        for i, s in enumerate(spaces)
        for G in s.coarse_generators
    )
    born = [
        frozenset((i, p) for p in B)
        for i, s in enumerate(spaces)
        for B in s.bornology.generators
    ]
    sp = Space(carrier, act, cmax, gens, Bornology(born), name=name or "free_union")
    return _validated(sp)


def combine_fiber_product(a, b, name=None):
    """X x_Z Y for maps a: X -> Z, b: Y -> Z, as the structured subset of the
    cartesian product."""
    if a.codomain.carrier != b.codomain.carrier:
        raise PreconditionError("fiber product needs a common target")
    prod = combine_cartesian(a.domain, b.domain)
    Z = frozenset((x, y) for (x, y) in prod.carrier if a(x) == b(y))
    return build_subspace(prod, Z, name=name or "fiber_product")


def combine_pushout_excisive(space, Y, Z, search_bound=8, name=None):
    """Colimit of Y <- Y n Z -> Z for a coarsely excisive pair covering the
    carrier.  The resulting structures are computed from the colimit recipe
    and checked to agree with the ambient space."""
    Y, Z = frozenset(Y), frozenset(Z)
    ok, rep, _ = is_coarsely_excisive(space, Y, Z, search_bound)
    if not ok:
        raise PreconditionError(
            "pair is not coarsely excisive:\n%r" % rep.failures()
        )
    sub_y = build_subspace(space, Y, name="Y")
    sub_z = build_subspace(space, Z, name="Z")
    glued = saturate(
        [sub_y.coarse_max, sub_z.coarse_max], space.action, space.carrier
    )
    if glued != space.coarse_max:
        raise ConstructionError(
            "colimit coarse structure does not reach the ambient one; "
            "missing pair %r" % (next(iter(space.coarse_max - glued)),)
        )
    born = [B for B in sub_y.bornology.generators] + [
        B for B in sub_z.bornology.generators
    ]
    pushout = Space(
        space.carrier,
        space.action,
        glued,
        tuple(space.coarse_generators),
        Bornology(born),
        name=name or "pushout",
    )
    _validated(pushout)
    if pushout.bornology.union != space.bornology.union:
        raise ConstructionError("colimit bornology differs from the ambient one")
    inc_y = SpaceMap.from_dict(sub_y, pushout, {p: p for p in sub_y.carrier})
    inc_z = SpaceMap.from_dict(sub_z, pushout, {p: p for p in sub_z.carrier})
    for inc in (inc_y, inc_z):
        if not analyze_map(inc).is_morphism:
            raise ConstructionError("pushout inclusion failed to be a morphism")
    return pushout, inc_y, inc_z


def _orbit_point(orbit):
    return tuple(sorted(orbit, key=point_key))


def _h_orbits(carrier, h_action):
    seen = set()
    orbits = []
    for p in carrier:
        if p in seen:
            continue
        orb = h_action.orbit(p)
        seen |= orb
        orbits.append(orb)
    return orbits


def combine_coequalizer_h(space, h_action, result_group=None, result_perms=None, name=None):
    """Coequalizer of projection and action maps (H_min,max x X)_max-B =>
    B_H(X), computed from the colimit recipe: carrier H\\X, coarse structure
    the saturation of the projected entourages, bornology the sets whose
    pullbacks have bounded H-completions.

    The H-invariant-cofinality hypothesis (the maximal entourage is fixed by
    H) is verified.  The result carries the supplied group action (trivial
    by default)."""
    for h in h_action.group.elements:
        if h_action.translate_pairs(h, space.coarse_max) != space.coarse_max:
            raise PreconditionError(
                "H-invariant entourages are not cofinal: %r moves the maximal entourage" % (h,)
            )
    orbits = _h_orbits(space.carrier, h_action)
    proj = {p: _orbit_point(orb) for orb in orbits for p in orb}
    carrier = tuple(sorted({proj[p] for p in space.carrier}, key=point_key))
    group = result_group or trivial_group()
    if result_perms is None:
        act = Action.trivial(carrier, group)
    else:
        act = Action(group, carrier, result_perms)
    projected = frozenset((proj[x], proj[y]) for (x, y) in space.coarse_max)
    cmax = saturate([projected], act, carrier)

    # H-completed bornology upstairs decides boundedness downstairs
    h_completed = Bornology(
        [h_action.orbit_of_set(B) for B in space.bornology.generators]
    )
    born = []
    for q in carrier:
        fiber = frozenset(p for p in space.carrier if proj[p] == q)
        if h_completed.is_bounded(thicken(space.coarse_max, fiber)):
            born.append(frozenset([q]))
    sp = Space(carrier, act, cmax, (projected,), Bornology(born), name=name or "coeq")
    _validated(sp)
    projection = SpaceMap.from_dict(space, sp, proj) if group == space.group else None
    return sp, proj, projection


COMBINE_KINDS = (
    "tensor",
    "cartesian",
    "coproduct",
    "free_union",
    "fiber_product",
    "pushout_excisive",
    "coequalizer_H",
)


def combine(kind, *args, **kwargs):
    if kind == "tensor":
        return combine_tensor(*args, **kwargs)
    if kind == "cartesian":
        return combine_cartesian(*args, **kwargs)
    if kind in ("coproduct", "free_union"):
        # finite families: the free union is the coproduct
        return combine_free_union(*args, **kwargs)
    if kind == "fiber_product":
        return combine_fiber_product(*args, **kwargs)
    if kind == "pushout_excisive":
        return combine_pushout_excisive(*args, **kwargs)
    if kind == "coequalizer_H":
        return combine_coequalizer_h(*args, **kwargs)
    raise PreconditionError("unknown combine kind %r" % kind)


# ---------------------------------------------------------------------------
# quotient adjunction and completion


def gamma_completion_space(space, name=None):
    """(X, C, B_Gamma): enlarge the bornology by the orbit saturations."""
    born = [space.action.orbit_of_set(B) for B in space.bornology.generators]
    sp = Space(
        space.carrier,
        space.action,
        space.coarse_max,
        space.coarse_generators,
        Bornology(born),
        name=name or (space.name + "_completed"),
    )
    return _validated(sp)


def quotient_adjunction(space):
    """Quotient by the whole group action: returns (quotient space with the
    trivial action, unit projection, Gamma-completion).

    The quotient carries the maximal bornology making the projection proper
    from the completion and the minimal coarse structure making it
    controlled; the unit is certified to be a morphism."""
    completion = gamma_completion_space(space)
    quotient, proj, _ = combine_coequalizer_h(space, space.action, name="quotient")

    # the unit lives in Gamma-spaces: give the quotient the trivial
    # Gamma-action so the projection can be equivariant
    triv_perms = {g: {q: q for q in quotient.carrier} for g in space.group.elements}
    quotient_as_gamma = Space(
        quotient.carrier,
        Action(space.group, quotient.carrier, triv_perms),
        quotient.coarse_max,
        quotient.coarse_generators,
        quotient.bornology,
        name=quotient.name,
    )
    unit = SpaceMap.from_dict(space, quotient_as_gamma, proj)
    rep = analyze_map(unit)
    if not rep.is_morphism:
        raise ConstructionError("quotient unit failed to be a morphism:\n%r" % rep.details)
    return quotient, unit, completion


def swap_map(tensor_xy, tensor_yx):
    """The canonical swap between X (x) Y and Y (x) X."""
    return SpaceMap.from_dict(
        tensor_xy, tensor_yx, {(a, b): (b, a) for (a, b) in tensor_xy.carrier}
    )
