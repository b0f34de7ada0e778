"""
Finite equivariant bornological coarse spaces.

A Space is a finite carrier with a group action, a coarse structure and a
bornology.  The coarse structure is stored by its maximal entourage: on a
finite carrier the generated structure is the downward closure of the
saturation of the generators, so membership of an entourage is just
containment in the maximum.  The saturation of a generating family always
contains the diagonal, by convention.

Entourages are frozensets of ordered point pairs; bounded-set generators are
frozensets of points.  Points are opaque hashables (strings from documents;
tuples from product constructions).
"""

from dataclasses import dataclass, field
from functools import cached_property

from .groups import FiniteGroup, trivial_group


class CoarsexError(Exception):
    pass


class DomainError(CoarsexError):
    """An argument refers to points outside the relevant carrier."""


class PreconditionError(CoarsexError):
    """A stated precondition of an operation is violated."""


class ConstructionError(CoarsexError):
    """A space construction cannot produce a valid space."""


class ResourceError(CoarsexError):
    """A configured size cap was exceeded."""


def point_key(p):
    """Total order on heterogeneous points (strings, ints, tuples)."""
    if isinstance(p, tuple):
        return (2, tuple(point_key(x) for x in p))
    if isinstance(p, int):
        return (0, p)
    return (1, str(p))


def pair_key(pair):
    return (point_key(pair[0]), point_key(pair[1]))


def diagonal(points):
    return frozenset((p, p) for p in points)


def compose(U, V):
    """U o V = {(x, z) | exists y: (x, y) in U, (y, z) in V}."""
    by_left = {}
    for y, z in V:
        by_left.setdefault(y, []).append(z)
    out = set()
    for x, y in U:
        for z in by_left.get(y, ()):
            out.add((x, z))
    return frozenset(out)


def invert(U):
    return frozenset((y, x) for x, y in U)


def thicken(U, B):
    """{x | exists b in B: (x, b) in U}."""
    B = frozenset(B)
    return frozenset(x for x, b in U if b in B)


class Action:
    """A group acting on a carrier by permutations, one per element."""

    def __init__(self, group, carrier, perms):
        self.group = group
        self.carrier = tuple(carrier)
        self.perms = {g: dict(perms[g]) for g in group.elements}
        cset = set(self.carrier)
        for g in group.elements:
            pg = self.perms[g]
            if set(pg) != cset or set(pg.values()) != cset:
                raise DomainError("element %r does not act by a permutation of the carrier" % (g,))
        e = group.identity
        if any(self.perms[e][p] != p for p in self.carrier):
            raise DomainError("identity element does not act as the identity")
        for a in group.elements:
            for b in group.elements:
                ab = group.mul(a, b)
                for p in self.carrier:
                    if self.perms[ab][p] != self.perms[a][self.perms[b][p]]:
                        raise DomainError("action is not a homomorphism at (%r, %r)" % (a, b))

    @classmethod
    def trivial(cls, carrier, group=None):
        group = group or trivial_group()
        perms = {g: {p: p for p in carrier} for g in group.elements}
        return cls(group, carrier, perms)

    def apply(self, g, p):
        return self.perms[g][p]

    def apply_tuple(self, g, t):
        pg = self.perms[g]
        return tuple(pg[p] for p in t)

    def translate_set(self, g, S):
        pg = self.perms[g]
        return frozenset(pg[p] for p in S)

    def translate_pairs(self, g, U):
        pg = self.perms[g]
        return frozenset((pg[x], pg[y]) for x, y in U)

    def orbit(self, p):
        return frozenset(self.perms[g][p] for g in self.group.elements)

    def orbit_of_set(self, S):
        out = set()
        for g in self.group.elements:
            out |= self.translate_set(g, S)
        return frozenset(out)

    @cached_property
    def orbits(self):
        seen = set()
        out = []
        for p in self.carrier:
            if p in seen:
                continue
            orb = self.orbit(p)
            seen |= orb
            out.append(orb)
        return out

    def orbit_reps(self):
        return [min(orb, key=point_key) for orb in self.orbits]

    def stabilizer(self, p):
        return [g for g in self.group.elements if self.perms[g][p] == p]

    def is_invariant_set(self, S):
        S = frozenset(S)
        return all(self.translate_set(g, S) == S for g in self.group.elements)

    def is_invariant_pairs(self, U):
        U = frozenset(U)
        return all(self.translate_pairs(g, U) == U for g in self.group.elements)


def saturate(generators, action, carrier=None):
    """Least entourage containing the generators and the diagonal, closed
    under inversion, composition and group translation.

    On a finite carrier this fixed-point iteration terminates and the result
    is an invariant equivalence relation on the carrier (the relation of
    being in the same coarse component).
    """
    carrier = tuple(carrier if carrier is not None else action.carrier)
    pts = set(carrier)
    for U in generators:
        for x, y in U:
            if x not in pts or y not in pts:
                raise DomainError("entourage endpoint %r not in carrier" % ((x, y),))
    # translates of generators, symmetrized, as a graph; then transitive
    # closure via union-find over the carrier
    parent = {p: p for p in carrier}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def union(p, q):
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[rp] = rq

    for U in generators:
        for g in action.group.elements:
            pg = action.perms[g]
            for x, y in U:
                union(pg[x], pg[y])
    classes = {}
    for p in carrier:
        classes.setdefault(find(p), []).append(p)
    out = set()
    for members in classes.values():
        for x in members:
            for y in members:
                out.add((x, y))
    return frozenset(out)


def entourage_algebra(op, *args, action=None, carrier=None):
    """Dispatcher for the entourage operations.

    compose(U, V); invert(U); thicken(U, B); saturate(generators) with an
    Action supplied.
    """
    if op == "compose":
        return compose(*args)
    if op == "invert":
        return invert(*args)
    if op == "thicken":
        return thicken(*args)
    if op == "saturate":
        (gens,) = args
        if action is None:
            raise PreconditionError("saturate needs an Action")
        return saturate(gens, action, carrier)
    raise PreconditionError("unknown entourage op %r" % op)


class Bornology:
    """Generated bornology: all subsets of finite unions of the generators."""

    def __init__(self, generators):
        gens = sorted(
            {frozenset(B) for B in generators if B}, key=lambda B: sorted(B, key=point_key)
        )
        self.generators = tuple(gens)

    @cached_property
    def union(self):
        out = set()
        for B in self.generators:
            out |= B
        return frozenset(out)

    def is_bounded(self, S):
        # with finitely many generators the closure is exactly the power set
        # of their union
        return frozenset(S) <= self.union

    def covers(self, carrier):
        return set(carrier) <= self.union

    def gamma_completion(self, action):
        return Bornology([action.orbit_of_set(B) for B in self.generators])

    def __repr__(self):
        return "Bornology(%d generators)" % len(self.generators)


@dataclass(frozen=True)
class Space:
    """A finite equivariant bornological coarse space."""

    carrier: tuple
    action: Action
    coarse_max: frozenset
    coarse_generators: tuple
    bornology: Bornology
    name: str = ""

    @property
    def group(self):
        return self.action.group

    @cached_property
    def components(self):
        """Coarse components: the classes of the maximal entourage."""
        neigh = {}
        for x, y in self.coarse_max:
            neigh.setdefault(x, set()).add(y)
        seen = set()
        comps = []
        for p in self.carrier:
            if p in seen:
                continue
            comp = frozenset(neigh.get(p, {p}))
            seen |= comp
            comps.append(comp)
        return comps

    def related(self, x, y):
        return (x, y) in self.coarse_max

    def is_bounded(self, S):
        return self.bornology.is_bounded(S)

    def subset_invariant(self, S):
        return self.action.is_invariant_set(S)

    def __repr__(self):
        return "Space(%s: %d points, group %s, %d components)" % (
            self.name or "?",
            len(self.carrier),
            self.group.name,
            len(self.components),
        )

    def __hash__(self):
        return hash((self.carrier, self.coarse_max))

    def __eq__(self, other):
        return (
            isinstance(other, Space)
            and self.carrier == other.carrier
            and self.group == other.group
            and self.action.perms == other.action.perms
            and self.coarse_max == other.coarse_max
            and self.bornology.generators == other.bornology.generators
        )


def make_space(carrier, action, coarse_generators, bornology_generators, name=""):
    """Assemble and saturate a Space; cheap sanity checks only.

    Run validate_space for the full report.
    """
    carrier = tuple(carrier)
    if len(set(carrier)) != len(carrier):
        raise DomainError("duplicate carrier points")
    gens = tuple(frozenset(U) for U in coarse_generators)
    cmax = saturate(gens, action, carrier)
    born = Bornology(bornology_generators)
    for B in born.generators:
        if not B <= set(carrier):
            raise DomainError("bornology generator leaves the carrier")
    return Space(carrier, action, cmax, gens, born, name=name)


def step_entourage(space):
    """One-step thickening relation: diagonal plus all translates of the
    declared generators and their inverses.  Iterating it exhausts the
    maximal entourage."""
    out = set(diagonal(space.carrier))
    for U in space.coarse_generators:
        for g in space.group.elements:
            t = space.action.translate_pairs(g, U)
            out |= t
            out |= invert(t)
    return frozenset(out)


@dataclass
class CheckEntry:
    name: str
    ok: bool
    witness: object = None

    def __repr__(self):
        mark = "ok" if self.ok else "FAIL"
        if self.ok or self.witness is None:
            return "[%s] %s" % (mark, self.name)
        return "[%s] %s (witness: %r)" % (mark, self.name, self.witness)


@dataclass
class ValidationReport:
    entries: list = field(default_factory=list)

    def add(self, name, ok, witness=None):
        self.entries.append(CheckEntry(name, bool(ok), witness))

    @property
    def ok(self):
        return all(e.ok for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e.ok]

    def __repr__(self):
        return "\n".join(repr(e) for e in self.entries)


def validate_space(space):
    """Check every axiom of the space model; failures carry witnesses."""
    rep = ValidationReport()
    carrier = set(space.carrier)
    U = space.coarse_max

    bad = next(((x, y) for x, y in U if x not in carrier or y not in carrier), None)
    rep.add("entourage endpoints in carrier", bad is None, bad)

    missing = next((p for p in space.carrier if (p, p) not in U), None)
    rep.add("coarse structure contains the diagonal", missing is None, missing)

    asym = next(((x, y) for x, y in U if (y, x) not in U), None)
    rep.add("maximal entourage symmetric", asym is None, asym)

    comp_bad = None
    if compose(U, U) <= U:
        pass
    else:
        comp_bad = next(iter(compose(U, U) - U))
    rep.add("maximal entourage closed under composition", comp_bad is None, comp_bad)

    inv_bad = next(
        (g for g in space.group.elements if space.action.translate_pairs(g, U) != U), None
    )
    rep.add("maximal entourage invariant", inv_bad is None, inv_bad)

    gen_bad = next(
        (i for i, G in enumerate(space.coarse_generators) if not G <= U), None
    )
    rep.add("generators inside the maximal entourage", gen_bad is None, gen_bad)

    rep.add(
        "bornology covers carrier",
        space.bornology.covers(space.carrier),
        sorted(carrier - space.bornology.union, key=point_key) or None,
    )

    born_bad = None
    for B in space.bornology.generators:
        for g in space.group.elements:
            if not space.is_bounded(space.action.translate_set(g, B)):
                born_bad = (g, sorted(B, key=point_key))
                break
        if born_bad:
            break
    rep.add("bornology invariant as a set of subsets", born_bad is None, born_bad)

    compat_bad = next(
        (
            sorted(B, key=point_key)
            for B in space.bornology.generators
            if not space.is_bounded(thicken(U, B))
        ),
        None,
    )
    rep.add("thickenings of bounded sets bounded", compat_bad is None, compat_bad)
    return rep


@dataclass(frozen=True)
class SpaceMap:
    """A point function between spaces; analyze_map certifies its properties."""

    domain: Space
    codomain: Space
    assignment: tuple  # sorted tuple of (point, image) pairs

    @classmethod
    def from_dict(cls, domain, codomain, mapping):
        mapping = dict(mapping)
        if set(mapping) != set(domain.carrier):
            raise DomainError("map not total on the domain carrier")
        cod = set(codomain.carrier)
        bad = next((p for p, q in mapping.items() if q not in cod), None)
        if bad is not None:
            raise DomainError("image of %r not in codomain" % (bad,))
        items = tuple(sorted(mapping.items(), key=lambda kv: point_key(kv[0])))
        return cls(domain, codomain, items)

    @classmethod
    def from_function(cls, domain, codomain, fn):
        return cls.from_dict(domain, codomain, {p: fn(p) for p in domain.carrier})

    @classmethod
    def identity(cls, space):
        return cls.from_dict(space, space, {p: p for p in space.carrier})

    @cached_property
    def mapping(self):
        return dict(self.assignment)

    def __call__(self, p):
        return self.mapping[p]

    def compose_with(self, other):
        """self o other (other applied first)."""
        if other.codomain.carrier != self.domain.carrier:
            raise DomainError("composition carrier mismatch")
        return SpaceMap.from_dict(
            other.domain, self.codomain, {p: self(other(p)) for p in other.domain.carrier}
        )

    def graph_with(self, other):
        """Closeness graph {(f(x), g(x))} of two maps with one domain."""
        return frozenset((self(p), other(p)) for p in self.domain.carrier)


@dataclass(frozen=True)
class BigFamily:
    """Increasing invariant stages; stabilized means the last stage absorbs
    thickening by the maximal entourage."""

    stages: tuple
    stabilized: bool = False

    def __post_init__(self):
        for a, b in zip(self.stages, self.stages[1:]):
            if not frozenset(a) <= frozenset(b):
                raise PreconditionError("big family stages not increasing")

    @property
    def last(self):
        return self.stages[-1]


def generated_big_family(space, A):
    """The family {A}: iterate the one-step entourage until the stages
    stabilize.  The fixed point is the union of components meeting A."""
    A = frozenset(A)
    if not A <= set(space.carrier):
        raise DomainError("subset not in carrier")
    step = step_entourage(space)
    stages = [A]
    while True:
        nxt = thicken(step, stages[-1]) | stages[-1]
        if nxt == stages[-1]:
            break
        stages.append(nxt)
    return BigFamily(tuple(stages), stabilized=True)


def point_space(name="*"):
    carrier = (name,)
    return make_space(
        carrier, Action.trivial(carrier), [diagonal(carrier)], [frozenset(carrier)],
        name="pt",
    )
