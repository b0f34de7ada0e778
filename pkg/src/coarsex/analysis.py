"""
Certificates about maps and subsets: controlledness, properness, closeness,
equivalences (with bounded inverse search), niceness, big families,
complementary and coarsely excisive pairs, exhaustions, and horizon-bounded
flasqueness.

Verdicts here are three-valued where a search is involved: True, False, or
"unknown" when the carrier exceeds the configured search bound.
"""

from dataclasses import dataclass, field
from itertools import product

from .spaces import (
    Action,
    BigFamily,
    DomainError,
    PreconditionError,
    SpaceMap,
    ValidationReport,
    compose,
    diagonal,
    generated_big_family,
    invert,
    point_key,
    saturate,
    thicken,
)

DEFAULT_SEARCH_BOUND = 8


@dataclass
class MapReport:
    equivariant: bool = False
    controlled: bool = False
    proper: bool = False
    close_to_partner: object = None          # bool when g given with equal signature
    equivalence: object = None               # True / False / "unknown"
    inverse: object = None                   # SpaceMap when the certificate exists
    details: ValidationReport = field(default_factory=ValidationReport)

    @property
    def is_morphism(self):
        return self.equivariant and self.controlled and self.proper


def _check_morphism(f, rep=None):
    rep = rep if rep is not None else ValidationReport()
    X, Y = f.domain, f.codomain
    bad = next(
        (
            (g, p)
            for g in X.group.elements
            for p in X.carrier
            if f(X.action.apply(g, p)) != Y.action.apply(g, f(p))
        ),
        None,
    )
    equivariant = bad is None
    rep.add("equivariant", equivariant, bad)

    bad = next(((x, y) for x, y in X.coarse_max if (f(x), f(y)) not in Y.coarse_max), None)
    controlled = bad is None
    rep.add("controlled", controlled, bad)

    bad = None
    for B in Y.bornology.generators:
        pre = frozenset(p for p in X.carrier if f(p) in B)
        if not X.is_bounded(pre):
            bad = sorted(B, key=point_key)
            break
    proper = bad is None
    rep.add("proper", proper, bad)
    return equivariant, controlled, proper, rep


def maps_close(f, g):
    """Closeness: the pairing graph {(f(x), g(x))} is an entourage."""
    if f.domain.carrier != g.domain.carrier or f.codomain.carrier != g.codomain.carrier:
        raise DomainError("closeness needs maps between the same spaces")
    return f.graph_with(g) <= f.codomain.coarse_max


def certifies_equivalence(f, g):
    """Do (f, g) witness an equivalence (inverse up to closeness)?"""
    ef = _check_morphism(f)[:3]
    eg = _check_morphism(g)[:3]
    if not (all(ef) and all(eg)):
        return False
    gf = g.compose_with(f)
    fg = f.compose_with(g)
    return maps_close(gf, SpaceMap.identity(f.domain)) and maps_close(
        fg, SpaceMap.identity(g.domain)
    )


def _inverse_search(f, bound):
    """Backtracking search for an equivariant inverse-up-to-closeness of f.

    Candidate images of an orbit representative y must make f o g close to
    the identity pointwise, so each y only admits {x : (y, f(x)) in Umax}.
    Returns a SpaceMap or None (search exhausted).
    """
    X, Y = f.domain, f.codomain
    if len(X.carrier) > bound or len(Y.carrier) > bound:
        return "unknown"
    reps = Y.action.orbit_reps()
    group = Y.group
    UY = Y.coarse_max
    UX = X.coarse_max

    candidates = []
    for y in reps:
        stab = Y.action.stabilizer(y)
        cand = [
            x
            for x in X.carrier
            if (y, f(x)) in UY and all(X.action.apply(s, x) == x for s in stab)
        ]
        if not cand:
            return None
        candidates.append(cand)

    def extend(assignment):
        """Build the full equivariant map from orbit-representative images."""
        g_map = {}
        for y, x in assignment.items():
            for gamma in group.elements:
                g_map[Y.action.apply(gamma, y)] = X.action.apply(gamma, x)
        return g_map

    def consistent(partial):
        g_map = {}
        for y, x in partial.items():
            for gamma in group.elements:
                yy = Y.action.apply(gamma, y)
                xx = X.action.apply(gamma, x)
                if g_map.setdefault(yy, xx) != xx:
                    return None
        # controlledness on the assigned part
        pts = list(g_map)
        for a in pts:
            for b in pts:
                if (a, b) in UY and (g_map[a], g_map[b]) not in UX:
                    return None
        return g_map

    order = sorted(range(len(reps)), key=lambda i: len(candidates[i]))
    assignment = {}

    def search(k):
        if k == len(order):
            return True
        i = order[k]
        y = reps[i]
        for x in candidates[i]:
            assignment[y] = x
            if consistent(assignment) is not None and search(k + 1):
                return True
            del assignment[y]
        return False

    if not search(0):
        return None
    g = SpaceMap.from_dict(Y, X, extend(assignment))
    if certifies_equivalence(f, g):
        return g
    # the pointwise filters are necessary but not sufficient; fall back to a
    # filtered exhaustive walk over equivariant maps
    for choice in product(*candidates):
        assignment = dict(zip(reps, choice))
        g_map = consistent(assignment)
        if g_map is None:
            continue
        g = SpaceMap.from_dict(Y, X, g_map)
        if certifies_equivalence(f, g):
            return g
    return None


def analyze_map(f, g=None, search_bound=DEFAULT_SEARCH_BOUND):
    """Full report on a map: morphism properties, closeness against g, and
    the equivalence certificate (searching for an inverse when g is absent)."""
    rep = MapReport()
    rep.equivariant, rep.controlled, rep.proper, rep.details = _check_morphism(f)

    if g is not None:
        same_spaces = (
            f.domain.carrier == g.domain.carrier
            and f.codomain.carrier == g.codomain.carrier
        )
        opposite = (
            f.domain.carrier == g.codomain.carrier
            and f.codomain.carrier == g.domain.carrier
        )
        if same_spaces:
            rep.close_to_partner = maps_close(f, g)
            rep.details.add("close to partner", rep.close_to_partner)
        elif opposite:
            rep.equivalence = certifies_equivalence(f, g)
            rep.inverse = g if rep.equivalence else None
            rep.details.add("equivalence pair", bool(rep.equivalence))
        else:
            raise DomainError("partner map has mismatched carriers")
        return rep

    if not rep.is_morphism:
        rep.equivalence = False
        return rep
    found = _inverse_search(f, search_bound)
    if found == "unknown":
        rep.equivalence = "unknown"
    elif found is None:
        rep.equivalence = False
    else:
        rep.equivalence = True
        rep.inverse = found
    return rep


# ---------------------------------------------------------------------------
# subsets: niceness, complementary pairs, coarse excision


def subspace(space, Z, name=""):
    """Invariant subset with the induced structures."""
    from .build import build_subspace  # deferred: build depends on analysis

    return build_subspace(space, Z, name=name)


@dataclass
class SubsetReport:
    invariant: bool = False
    family: BigFamily = None
    nice: object = None
    complementary_pair: object = None
    coarsely_excisive: object = None
    details: ValidationReport = field(default_factory=ValidationReport)


def niceness(space, A, search_bound=DEFAULT_SEARCH_BOUND):
    """Is the inclusion A -> Umax[A] an equivalence?  (The maximal entourage
    is the monotone worst case on a finite carrier.)"""
    from .build import build_subspace

    A = frozenset(A)
    UA = thicken(space.coarse_max, A) | A
    if UA == A:
        return True
    sub_a = build_subspace(space, A)
    sub_ua = build_subspace(space, UA)
    inc = SpaceMap.from_dict(sub_a, sub_ua, {p: p for p in sub_a.carrier})
    return analyze_map(inc, search_bound=search_bound).equivalence


def is_complementary_pair(space, Z, family):
    """(Z, family): Z invariant, family an equivariant big family, and some
    stage joins with Z to cover the carrier."""
    Z = frozenset(Z)
    rep = ValidationReport()
    rep.add("Z invariant", space.subset_invariant(Z))
    inv = all(space.subset_invariant(Y) for Y in family.stages)
    rep.add("stages invariant", inv)
    absorb = all(
        any(thicken(space.coarse_max, Yi) <= Yj for Yj in family.stages)
        for Yi in family.stages
    )
    rep.add("family absorbs thickenings", absorb)
    covers = any(Z | Y == set(space.carrier) for Y in map(set, family.stages))
    rep.add("some stage covers the complement", covers)
    return rep.ok, rep


def is_coarsely_excisive(space, Y, Z, search_bound=DEFAULT_SEARCH_BOUND):
    """Both conditions of the coarsely excisive definition, tested at the
    maximal entourage (monotone worst case on a finite carrier)."""
    Y, Z = frozenset(Y), frozenset(Z)
    rep = ValidationReport()
    rep.add("Y invariant", space.subset_invariant(Y))
    rep.add("Z invariant", space.subset_invariant(Z))
    rep.add("Y and Z cover", Y | Z == set(space.carrier))
    U = space.coarse_max
    lhs = thicken(U, Y) & thicken(U, Z)
    rhs = thicken(U, Y & Z)
    witness = sorted(lhs - rhs, key=point_key) or None
    rep.add("thickening intersection controlled by the intersection", witness is None, witness)
    nice_verdict = niceness(space, thicken(U, Y) & Z | (Y & Z), search_bound)
    # V[Y] n Z at V = Umax; include Y n Z to keep the subset invariant-closed
    rep.add("V[Y] n Z nice at the maximal entourage", nice_verdict is True, nice_verdict)
    return rep.ok, rep, nice_verdict


def classify_subsets(space, A, Z=None, fam=None, search_bound=DEFAULT_SEARCH_BOUND):
    A = frozenset(A)
    if not A <= set(space.carrier):
        raise DomainError("subset not in carrier")
    rep = SubsetReport()
    rep.invariant = space.subset_invariant(A)
    rep.details.add("A invariant", rep.invariant)
    rep.family = generated_big_family(space, A)
    rep.nice = niceness(space, A, search_bound)
    rep.details.add("A nice", rep.nice is True, rep.nice)
    if Z is not None and fam is not None:
        ok, sub = is_complementary_pair(space, Z, fam)
        rep.complementary_pair = ok
        rep.details.entries.extend(sub.entries)
    if Z is not None:
        ok, sub, _ = is_coarsely_excisive(space, A, frozenset(Z), search_bound)
        rep.coarsely_excisive = ok
        rep.details.entries.extend(sub.entries)
    return rep


# ---------------------------------------------------------------------------
# exhaustions


@dataclass
class ExhaustionReport:
    locally_finite: list = field(default_factory=list)
    trapping: bool = False
    co_gamma_bounded: bool = False
    details: ValidationReport = field(default_factory=ValidationReport)


def is_locally_finite(space, F):
    """B n F finite for every bounded B; vacuous on finite carriers, checked
    literally anyway."""
    return all(len(B & frozenset(F)) < float("inf") for B in space.bornology.generators)


def gamma_bounded(space, S):
    """Member of the gamma-completed bornology."""
    return space.bornology.gamma_completion(space.action).is_bounded(S)


def classify_exhaustion(space, fam, orbit_bound=14):
    fam = [frozenset(Y) for Y in fam]
    for Y in fam:
        if not Y <= set(space.carrier):
            raise DomainError("family member not in carrier")
    directed = all(
        any(Yi | Yj <= Yk for Yk in fam) for Yi in fam for Yj in fam
    )
    if not directed:
        raise PreconditionError("family is not upward directed")

    rep = ExhaustionReport()
    rep.details.add("members invariant", all(space.subset_invariant(Y) for Y in fam))
    rep.locally_finite = [is_locally_finite(space, Y) for Y in fam]

    union = frozenset().union(*fam) if fam else frozenset()

    orbits = space.action.orbits
    if len(orbits) <= orbit_bound:
        # every invariant subset is a union of orbits; check each locally
        # finite one for containment in some member
        trapping = True
        witness = None
        for mask in range(1 << len(orbits)):
            F = frozenset().union(*(orbits[i] for i in range(len(orbits)) if mask >> i & 1))
            if not is_locally_finite(space, F):
                continue
            if not any(F <= Y for Y in fam):
                trapping = False
                witness = sorted(F, key=point_key)
                break
        rep.details.add("trapping (invariant subsets enumerated)", trapping, witness)
    else:
        # the maximal locally finite invariant subset (the whole carrier at
        # finite scale) decides it
        F = frozenset(space.carrier)
        trapping = any(F <= Y for Y in fam)
        rep.details.add("trapping (maximal subset check)", trapping)
    rep.trapping = trapping

    exhausts = union == frozenset(space.carrier)
    co_bounded = exhausts and any(
        gamma_bounded(space, frozenset(space.carrier) - Y) for Y in fam
    )
    rep.details.add("exhausts the carrier", exhausts)
    rep.details.add("some complement gamma-bounded", co_bounded)
    rep.co_gamma_bounded = co_bounded
    return rep


# ---------------------------------------------------------------------------
# flasqueness, including the truncated shift families


@dataclass(frozen=True)
class ShiftSpace:
    """Description of N x F0 with band entourages and finite-set bornology.

    base: the finite set F0; base_action: an Action of a finite group on F0;
    band_generators: pairs (width, base_relation); bounded_generators:
    explicit finite subsets of N x F0 (defaults to the 0-slice).
    """

    base: tuple
    base_action: Action
    band_generators: tuple
    bounded_generators: tuple = ()

    def carrier_window(self, top):
        return [(m, b) for m in range(top + 1) for b in self.base]

    def band_pairs(self, width, base_rel, top):
        out = set()
        for m in range(top + 1):
            for m2 in range(max(0, m - width), min(top, m + width) + 1):
                for b, b2 in base_rel:
                    out.add(((m, b), (m2, b2)))
        return frozenset(out)

    def window_space_entourage(self, top):
        """Saturation of the band generators on the [0, top] window."""
        window = self.carrier_window(top)
        perms = {
            g: {(m, b): (m, self.base_action.apply(g, b)) for (m, b) in window}
            for g in self.base_action.group.elements
        }
        act = Action(self.base_action.group, window, perms)
        gens = [
            self.band_pairs(w, rel, top) | diagonal(window)
            for w, rel in self.band_generators
        ]
        return act, saturate(gens, act, window)

    def default_bounded(self):
        if self.bounded_generators:
            return self.bounded_generators
        return (frozenset((0, b) for b in self.base),)


@dataclass(frozen=True)
class ShiftMap:
    """(m, b) -> (m + step, base_map[b]) with step >= 1."""

    step: int
    base_map: tuple  # sorted (b, image) pairs

    @classmethod
    def make(cls, step, base_map):
        if step < 1:
            raise PreconditionError("shift step must be >= 1")
        return cls(step, tuple(sorted(base_map.items(), key=lambda kv: point_key(kv[0]))))

    @property
    def phi(self):
        return dict(self.base_map)

    def apply(self, point):
        m, b = point
        return (m + self.step, self.phi[b])

    def iterate(self, point, n):
        for _ in range(n):
            point = self.apply(point)
        return point


@dataclass
class FlasquenessReport:
    horizon: int = 0
    close_to_identity: bool = False
    iterates_uniformly_controlled: bool = False
    escapes_bounded_sets: bool = False
    details: ValidationReport = field(default_factory=ValidationReport)

    @property
    def verified(self):
        return (
            self.close_to_identity
            and self.iterates_uniformly_controlled
            and self.escapes_bounded_sets
        )


def flasqueness_check(space, f, horizon):
    """Horizon-bounded flasqueness certificate.

    space is either a finite Space with f a SpaceMap endomorphism, or a
    ShiftSpace with f a ShiftMap.  The verdict is only ever 'verified up to
    the horizon', never an unconditional proof.
    """
    if horizon < 1:
        raise PreconditionError("horizon must be >= 1")
    rep = FlasquenessReport(horizon=horizon)

    if isinstance(space, ShiftSpace):
        return _flasqueness_shift(space, f, horizon, rep)

    if f.domain is not space or f.codomain is not space:
        raise PreconditionError("flasqueness needs an endomorphism")
    U = space.coarse_max
    graph = frozenset((p, f(p)) for p in space.carrier)
    rep.close_to_identity = graph <= U
    rep.details.add("f close to identity", rep.close_to_identity)

    ok = True
    witness = None
    for G in space.coarse_generators or (U,):
        image = set()
        fn = {p: p for p in space.carrier}
        for n in range(horizon + 1):
            image |= {(fn[x], fn[y]) for x, y in G}
            fn = {p: f(fn[p]) for p in space.carrier}
        if not image <= U:
            ok = False
            witness = next(iter(image - U))
            break
    rep.iterates_uniformly_controlled = ok
    rep.details.add("iterates uniformly controlled", ok, witness)

    ok = True
    witness = None
    for B in space.bornology.generators:
        GB = space.action.orbit_of_set(B)
        escaped = False
        fn_image = set(space.carrier)
        for n in range(horizon + 1):
            if not (GB & fn_image):
                escaped = True
                break
            fn_image = {f(p) for p in fn_image}
        if not escaped:
            ok = False
            witness = sorted(B, key=point_key)
            break
    rep.escapes_bounded_sets = ok
    rep.details.add("orbits of bounded sets eventually escaped", ok, witness)
    return rep


def _flasqueness_shift(shift_space, f, horizon, rep):
    if not isinstance(f, ShiftMap):
        raise PreconditionError("a ShiftSpace needs a ShiftMap endomorphism")
    top = 2 * horizon * max(1, f.step) + max(w for w, _ in shift_space.band_generators)
    act, sat = shift_space.window_space_entourage(top)

    # (1) close to the identity: the pairing graph on the inner window lies
    # in the saturated structure
    inner = [(m, b) for (m, b) in shift_space.carrier_window(horizon)]
    graph = {(p, f.apply(p)) for p in inner}
    ok = all(pair in sat for pair in graph)
    rep.close_to_identity = ok
    rep.details.add("f close to identity (window)", ok)

    # (2) every iterate image of each generator stays inside the saturated
    # structure (the declared entourage)
    ok = True
    witness = None
    for w, rel in shift_space.band_generators:
        gen = shift_space.band_pairs(w, rel, horizon)
        for n in range(horizon + 1):
            moved = set()
            for x, y in gen:
                fx, fy = f.iterate(x, n), f.iterate(y, n)
                if fx[0] <= top and fy[0] <= top:
                    moved.add((fx, fy))
            if not moved <= sat:
                ok = False
                witness = (w, n, next(iter(moved - sat)))
                break
        if not ok:
            break
    rep.iterates_uniformly_controlled = ok
    rep.details.add("iterates uniformly controlled", ok, witness)

    # (3) for each bounded generator some iterate image avoids its orbit
    ok = True
    witness = None
    for B in shift_space.default_bounded():
        GB = set()
        for g in shift_space.base_action.group.elements:
            GB |= {(m, shift_space.base_action.apply(g, b)) for (m, b) in B}
        max_m = max((m for m, _ in GB), default=-1)
        escaped = any(n * f.step > max_m for n in range(horizon + 1))
        if not escaped:
            ok = False
            witness = sorted(B, key=point_key)
            break
    rep.escapes_bounded_sets = ok
    rep.details.add("bounded generators escaped", ok, witness)
    return rep
