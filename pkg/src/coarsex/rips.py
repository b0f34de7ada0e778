"""
Rips complexes of entourages: clique simplicial complexes with the group
action, the associated bornological coarse space on the vertex set (path
metric scales, bounded generators from the underlying space), Dirac-map
equivalence certificates, functoriality, plain simplicial homology, and the
strongly-bounded-geometry check.

The complex of finite entourage-bounded probability measures is represented
by its simplicial model with vertex set the carrier: every measure lies
within path distance one of a vertex of its support, so the closeness and
equivalence certificates only ever need the vertices.
"""

from dataclasses import dataclass, field
from itertools import combinations

from . import snf
from .analysis import analyze_map
from .build import build_recoarsen, combine_tensor
from .homology import CoarseComplex, homology_groups
from .spaces import (
    Action,
    DomainError,
    PreconditionError,
    Space,
    SpaceMap,
    ValidationReport,
    diagonal,
    invert,
    make_space,
    point_key,
    saturate,
)

DEFAULT_MAX_DIM = 4


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple
    simplices: tuple        # per dimension: tuple of sorted vertex tuples
    action: Action = None

    def dim(self):
        return len(self.simplices) - 1

    def counts(self):
        return [len(s) for s in self.simplices]

    def has_simplex(self, t):
        t = tuple(sorted(t, key=point_key))
        d = len(t) - 1
        return 0 <= d < len(self.simplices) and t in set(self.simplices[d])

    def check_closed(self):
        """Downward closure and invariance of the simplex set."""
        sets = [set(level) for level in self.simplices]
        for d in range(1, len(self.simplices)):
            for s in self.simplices[d]:
                for face in combinations(s, d):
                    if tuple(face) not in sets[d - 1]:
                        return False, ("missing face", face)
        if self.action is not None:
            for g in self.action.group.elements:
                for d, level in enumerate(self.simplices):
                    for s in level:
                        gs = tuple(sorted(self.action.apply_tuple(g, s), key=point_key))
                        if gs not in sets[d]:
                            return False, ("orbit escapes", g, s)
        return True, None


def _cliques(neighbors, vertices, max_size):
    """All cliques of size <= max_size: ordered growth with candidate
    intersection pruning."""
    order = sorted(vertices, key=point_key)
    pos = {v: i for i, v in enumerate(order)}
    out = [[] for _ in range(max_size)]

    def grow(clique, candidates):
        size = len(clique)
        out[size - 1].append(tuple(clique))
        if size == max_size:
            return
        for v in sorted(candidates, key=lambda u: pos[u]):
            grow(clique + [v], [u for u in candidates if pos[u] > pos[v] and u in neighbors[v]])

    for v in order:
        grow([v], [u for u in order if pos[u] > pos[v] and u in neighbors[v]])
    return out


def rips_complex(space, U, max_dim=DEFAULT_MAX_DIM):
    """Clique complex of the symmetrized entourage, with the vertex-model
    bornological coarse space P_U(X)_bd."""
    U = frozenset(U)
    if not space.action.is_invariant_pairs(U):
        raise PreconditionError("entourage must be invariant")
    if not U <= space.coarse_max:
        raise PreconditionError("entourage must belong to the coarse structure")
    missing = next((p for p in space.carrier if (p, p) not in U), None)
    if missing is not None:
        raise PreconditionError("entourage must contain the diagonal; missing %r" % (missing,))
    sym = U & invert(U)
    neighbors = {v: set() for v in space.carrier}
    for (x, y) in sym:
        if x != y:
            neighbors[x].add(y)
            neighbors[y].add(x)
    levels = _cliques(neighbors, space.carrier, max_dim + 1)
    K = SimplicialComplex(tuple(space.carrier), tuple(tuple(l) for l in levels), space.action)
    ok, witness = K.check_closed()
    assert ok, witness
    return K, rips_space(space, U)


def _path_metric(neighbors, vertices):
    dist = {}
    for v in vertices:
        dist[v, v] = 0
        frontier = [v]
        d = 0
        seen = {v}
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for w in neighbors[u]:
                    if w not in seen:
                        seen.add(w)
                        dist[v, w] = d
                        nxt.append(w)
            frontier = nxt
    return dist


def rips_space(space, U, name=None):
    """P_U(X)_bd in the vertex model: carrier X, coarse structure from the
    path-metric scale set {1, ..., diameter}, bounded generators inherited."""
    sym = (U & invert(U)) | diagonal(space.carrier)
    neighbors = {v: set() for v in space.carrier}
    for (x, y) in sym:
        if x != y:
            neighbors[x].add(y)
    dist = _path_metric(neighbors, space.carrier)
    diam = max((d for d in dist.values()), default=0)
    gens = [
        frozenset((x, y) for (x, y), d in dist.items() if d <= r)
        for r in range(1, max(diam, 1) + 1)
    ] or [diagonal(space.carrier)]
    return make_space(
        space.carrier,
        space.action,
        gens,
        space.bornology.generators,
        name=name or ("P_U(%s)" % (space.name or "X")),
    )


def rips_filtration(space, entourages, max_dim=DEFAULT_MAX_DIM):
    """Complexes along an increasing entourage chain, with the inclusion
    maps; the finite-scale shadow of the Rips colimit."""
    chain = [frozenset(U) for U in entourages]
    for a, b in zip(chain, chain[1:]):
        if not a <= b:
            raise PreconditionError("entourage chain must be increasing")
    complexes = [rips_complex(space, U, max_dim) for U in chain]
    inclusions = []
    for (K1, _), (K2, _) in zip(complexes, complexes[1:]):
        for d, level in enumerate(K1.simplices):
            for s in level:
                assert K2.has_simplex(s), "filtration not monotone at %r" % (s,)
        inclusions.append({v: v for v in K1.vertices})
    return complexes, inclusions


@dataclass
class DiracReport:
    hypothesis: str = ""
    section_is_left_inverse: bool = False
    composite_close_to_identity: bool = False
    equivalence: bool = False
    details: ValidationReport = field(default_factory=ValidationReport)


def dirac_equivalence(space, U, Q=None, max_dim=DEFAULT_MAX_DIM):
    """delta: X_U -> P_U(X)_bd (vertex model), with the equivariant section
    g; twisted by a free Q when the group has torsion."""
    rep = DiracReport()
    group = space.group
    has_torsion = group.order > 1  # any nontrivial finite group has torsion
    if Q is None:
        if has_torsion:
            raise PreconditionError(
                "the untwisted Dirac lemma needs a torsion-free group acting freely; "
                "finite-scale version requires the trivial group, or supply a free Q"
            )
        rep.hypothesis = "untwisted: trivial group"
        src = build_recoarsen(space, saturate([U], space.action, space.carrier))
        tgt = rips_space(space, U)
        delta = SpaceMap.from_dict(src, tgt, {p: p for p in src.carrier})
        g = SpaceMap.from_dict(tgt, src, {p: p for p in tgt.carrier})
    else:
        for q in Q.carrier:
            if len(Q.action.stabilizer(q)) != 1:
                raise PreconditionError("Q must be a free Gamma-set; %r has stabilizer" % (q,))
        rep.hypothesis = "twisted by a free Q"
        src = combine_tensor(
            build_recoarsen(space, saturate([U], space.action, space.carrier)), Q
        )
        tgt = combine_tensor(rips_space(space, U), Q)
        delta = SpaceMap.from_dict(src, tgt, {p: p for p in src.carrier})
        # orbit representatives of (measure, q); in the vertex model the
        # support point of a vertex measure is the vertex itself, extended
        # equivariantly (the identity assignment is equivariant already)
        g = SpaceMap.from_dict(tgt, src, {p: p for p in tgt.carrier})

    d_rep = analyze_map(delta)
    g_rep = analyze_map(g)
    rep.details.entries.extend(d_rep.details.entries)
    rep.details.entries.extend(g_rep.details.entries)
    gd = g.compose_with(delta)
    rep.section_is_left_inverse = all(gd(p) == p for p in src.carrier)
    from .analysis import certifies_equivalence, maps_close

    dg = delta.compose_with(g)
    rep.composite_close_to_identity = maps_close(dg, SpaceMap.identity(tgt))
    rep.equivalence = certifies_equivalence(delta, g)
    return delta, g, rep


def rips_functorial(f, U, U2, max_dim=DEFAULT_MAX_DIM):
    """Push a controlled-on-U map through the complexes: simplicial on the
    nose, and a morphism of the vertex-model spaces."""
    U, U2 = frozenset(U), frozenset(U2)
    witness = next(((x, y) for (x, y) in U if (f(x), f(y)) not in U2), None)
    if witness is not None:
        raise PreconditionError("(f x f)(U) escapes U2 at %r" % (witness,))
    K1, P1 = rips_complex(f.domain, U, max_dim)
    K2, P2 = rips_complex(f.codomain, U2, max_dim)
    for level in K1.simplices:
        for s in level:
            image = tuple(sorted({f(v) for v in s}, key=point_key))
            assert K2.has_simplex(image), "image of %r is not a simplex" % (s,)
    vertex_map = SpaceMap.from_dict(P1, P2, {v: f(v) for v in P1.carrier})
    rep = analyze_map(vertex_map)
    if not rep.is_morphism:
        raise PreconditionError("vertex map is not a morphism of the Rips spaces")
    return {v: f(v) for v in K1.vertices}, vertex_map


def simplicial_homology(K, N):
    """Oriented simplicial homology over Z (sorted-vertex orientation,
    boundary signs by position)."""
    ok, witness = K.check_closed()
    if not ok:
        raise PreconditionError("complex is not downward closed: %r" % (witness,))
    top = min(N + 1, len(K.simplices) - 1) if K.simplices else 0
    gens = [list(K.simplices[d]) if d < len(K.simplices) else [] for d in range(top + 1)]
    boundaries = []
    for d in range(1, top + 1):
        cols = {}
        for s in gens[d]:
            col = {}
            for i in range(d + 1):
                face = s[:i] + s[i + 1 :]
                col[face] = -1 if i % 2 else 1
            cols[s] = col
        boundaries.append(cols)
    cx = CoarseComplex(None, top, gens, boundaries)
    cx.sparse().check_dd_zero()
    out = homology_groups(cx, min(N, top))
    while len(out) < N + 1:
        out.append((0, ()))
    return out[: N + 1]


@dataclass
class SbgReport:
    minimal_bornology: bool = False
    generator_bounds: dict = field(default_factory=dict)
    bound: int = 0
    component_bound: int = 0
    details: ValidationReport = field(default_factory=ValidationReport)


def sbg_check(space):
    """Strongly bounded geometry: minimal bornology (all generators are
    singletons) plus a uniform bound on entourage balls, reported per
    declared generator; the maximal entourage gives the component bound."""
    rep = SbgReport()
    rep.minimal_bornology = all(len(B) == 1 for B in space.bornology.generators)
    rep.details.add("bornology generated by singletons", rep.minimal_bornology)
    for i, U in enumerate(space.coarse_generators):
        counts = {}
        for (x, y) in U | diagonal(space.carrier):
            counts[x] = counts.get(x, 0) + 1
        rep.generator_bounds[i] = max(counts.values(), default=0)
    counts = {}
    for (x, y) in space.coarse_max:
        counts[x] = counts.get(x, 0) + 1
    rep.component_bound = max(counts.values(), default=0)
    rep.bound = max(rep.generator_bounds.values(), default=rep.component_bound)
    rep.details.add("uniform ball bound (declared generators)", True, rep.bound)
    return rep


def export_complex(K):
    """One simplex per line, vertices space separated, dimension-grouped."""
    lines = []
    for level in K.simplices:
        for s in level:
            lines.append(" ".join(str(v) for v in s))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_complex(text):
    levels = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        s = tuple(sorted(line.split()))
        levels.setdefault(len(s) - 1, set()).add(s)
    if not levels:
        return SimplicialComplex((), ())
    top = max(levels)
    vertices = tuple(sorted({v for s in levels.get(0, ()) for v in s}))
    simplices = tuple(
        tuple(sorted(levels.get(d, ()), key=lambda s: tuple(point_key(v) for v in s)))
        for d in range(top + 1)
    )
    return SimplicialComplex(vertices, simplices)
