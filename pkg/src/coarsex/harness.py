"""
Random instances and the axiom test suite.

Generation is driven by SplitMix64, a 64-bit splittable generator (Steele,
Lea, Flood 2014): identical seeds and configuration reproduce identical
streams on any platform, so machine reports are byte-identical up to the
timing fields, which stay outside the hashed portion.
"""

import hashlib
import json
import time
from dataclasses import dataclass, field, asdict

from . import analysis, build, change, ctrl, homology, snf
from .groups import GROUP_MENU, group_by_name
from .spaces import (
    Action,
    PreconditionError,
    Space,
    SpaceMap,
    diagonal,
    make_space,
    point_key,
    saturate,
    validate_space,
)

MASK = (1 << 64) - 1


class SplitMix64:
    """The SplitMix64 stream: next() yields 64-bit words; fork(tag) derives
    an independent child stream deterministically."""

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + self.GAMMA) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def randint(self, lo, hi):
        """Uniform-ish integer in [lo, hi] (span is tiny here)."""
        return lo + self.next() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.next() % len(seq)]

    def fork(self, tag):
        mixed = hashlib.sha256(
            ("%d|%s" % (self.state, tag)).encode()
        ).digest()
        return SplitMix64(int.from_bytes(mixed[:8], "big"))


@dataclass
class SuiteConfig:
    seed: int = 42
    trials: int = 100
    size_min: int = 2
    size_max: int = 6
    groups: tuple = ("1", "Z2", "Z3", "Z4", "S3")
    max_degree: int = 2
    flasque_horizon: int = 20
    sigma_horizon: int = 10
    search_bound: int = 8

    def __post_init__(self):
        if self.trials < 1:
            raise PreconditionError("trials must be positive")
        if self.max_degree > 4:
            raise PreconditionError("max degree capped at 4")


def _random_action(rng, group, size):
    """Random permutation action: partition the carrier into coset orbits of
    random subgroups."""
    carrier = []
    perms = {g: {} for g in group.elements}
    remaining = size
    orbit_idx = 0
    subgroups = group.subgroups
    while remaining > 0:
        fitting = [H for H in subgroups if group.order // len(H) <= remaining]
        H = rng.choice(fitting)
        cosets = group.cosets(H)
        order = {g: i for i, g in enumerate(group.elements)}
        cosets = sorted(cosets, key=lambda c: min(order[x] for x in c))
        names = {}
        for i, c in enumerate(cosets):
            name = "p%d_%d" % (orbit_idx, i)
            names[frozenset(c)] = name
            carrier.append(name)
        for g in group.elements:
            for c in cosets:
                image = frozenset(group.mul(g, x) for x in c)
                perms[g][names[frozenset(c)]] = names[image]
        remaining -= len(cosets)
        orbit_idx += 1
    return tuple(carrier), Action(group, tuple(carrier), perms)


def gen_space(seed, cfg):
    """Deterministic pseudorandom valid space. Same seed, same space."""
    rng = seed if isinstance(seed, SplitMix64) else SplitMix64(seed)
    size = rng.randint(cfg.size_min, cfg.size_max)
    group = group_by_name(rng.choice(list(cfg.groups)))
    carrier, act = _random_action(rng, group, size)

    n_pairs = rng.randint(0, max(1, size // 2))
    pairs = set()
    for _ in range(n_pairs):
        x = rng.choice(carrier)
        y = rng.choice(carrier)
        pairs.add((x, y))
    gen = frozenset(pairs) | diagonal(carrier)
    inv_gen = set()
    for g in group.elements:
        inv_gen |= act.translate_pairs(g, gen)
    gens = [frozenset(inv_gen)]

    style = rng.randint(0, 2)
    if style == 0:
        born = [frozenset([p]) for p in carrier]
    elif style == 1:
        born = [frozenset(carrier)]
    else:
        born = [frozenset([p]) for p in carrier]
        extra = frozenset(
            p for p in carrier if rng.randint(0, 1)
        )
        if extra:
            born.append(act.orbit_of_set(extra))
    sp = make_space(carrier, act, gens, born, name="gen")
    rep = validate_space(sp)
    assert rep.ok, "generator produced an invalid space:\n%r" % rep
    return sp


@dataclass
class CheckResult:
    check: str
    trial: int
    verdict: str           # "pass" / "fail" / "unknown"
    witness: str = ""
    seconds: float = 0.0


@dataclass
class SuiteReport:
    config: dict
    results: list = field(default_factory=list)

    def add(self, check, trial, ok, witness="", seconds=0.0):
        verdict = "pass" if ok is True else ("unknown" if ok == "unknown" else "fail")
        self.results.append(
            CheckResult(check, trial, verdict, str(witness) if witness else "", seconds)
        )

    @property
    def ok(self):
        return all(r.verdict == "pass" for r in self.results)

    def failures(self):
        return [r for r in self.results if r.verdict != "pass"]

    def summary(self):
        by_check = {}
        for r in self.results:
            agg = by_check.setdefault(r.check, [0, 0, 0.0])
            agg[0] += 1
            agg[1] += r.verdict == "pass"
            agg[2] += r.seconds
        return by_check

    def content_hash(self):
        """Deterministic digest of everything except the timings."""
        payload = [
            (r.check, r.trial, r.verdict, r.witness)
            for r in sorted(self.results, key=lambda r: (r.check, r.trial))
        ]
        blob = json.dumps([self.config, payload], sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def to_doc(self):
        return {
            "format": "coarsex/1",
            "kind": "suite-report",
            "config": self.config,
            "hash": self.content_hash(),
            "results": [asdict(r) for r in self.results],
        }


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def _coarse_invariance(space, N):
    two = build.build_max_max(
        ("0", "1"), Action.trivial(("0", "1"), space.group)
    )
    T = build.combine_tensor(two, space)
    proj = SpaceMap.from_dict(T, space, {(a, x): x for (a, x) in T.carrier})
    section = SpaceMap.from_dict(space, T, {x: ("0", x) for x in space.carrier})
    cols_p, cx_t, cx_x = homology.induced_map(proj, N + 1)
    cols_s, _, _ = homology.induced_map(section, N + 1, cx_x, cx_t)
    hd_t = homology.HomologyData(cx_t, N)
    hd_x = homology.HomologyData(cx_x, N)
    return homology.mutually_inverse_on_homology(hd_t, hd_x, cols_p, cols_s, N)


def _random_invariant_subset(rng, space, proper=True):
    orbits = sorted(
        space.action.orbits, key=lambda o: point_key(min(o, key=point_key))
    )
    for _ in range(16):
        chosen = [o for o in orbits if rng.randint(0, 1)]
        if not chosen:
            continue
        A = frozenset().union(*chosen)
        if proper and A == frozenset(space.carrier) and len(orbits) > 1:
            continue
        return A
    return frozenset(orbits[0])


def _excision_trial(rng, space, N):
    A = _random_invariant_subset(rng, space)
    fam = analysis.generated_big_family(space, A)
    j = rng.randint(0, len(fam.stages) - 1)
    Z = frozenset(space.carrier) - frozenset(fam.stages[j])
    if not Z:
        Z = frozenset(space.carrier)
    ok, _ = analysis.is_complementary_pair(space, Z, fam)
    if not ok:
        return False, "complementary-pair preconditions failed"
    rep = homology.mayer_vietoris(space, Z, fam, N)
    return rep.ok, rep.witness


def _u_continuity(space, N, drop_pair=False):
    """Recoarsening by generator prefixes stabilizes to the space's own
    homology; optionally sabotage the generators to prove sensitivity."""
    gens = list(space.coarse_generators)
    if drop_pair:
        for i, U in enumerate(gens):
            off_diag = sorted(
                ((x, y) for (x, y) in U if x != y), key=lambda p: (point_key(p[0]), point_key(p[1]))
            )
            if off_diag:
                removed = set(U)
                pair = off_diag[0]
                removed.discard(pair)
                removed.discard((pair[1], pair[0]))
                # drop the whole orbit of the pair so the saturation cannot
                # silently restore it
                for g in space.group.elements:
                    gp = (space.action.apply(g, pair[0]), space.action.apply(g, pair[1]))
                    removed.discard(gp)
                    removed.discard((gp[1], gp[0]))
                gens[i] = frozenset(removed)
                break
    target = homology.homology_groups(space, N)
    prefix = []
    last = None
    for U in gens:
        prefix.append(U)
        sat = saturate(prefix, space.action, space.carrier)
        rec = Space(
            space.carrier,
            space.action,
            sat,
            tuple(prefix),
            space.bornology,
            name="prefix",
        )
        last = homology.homology_groups(rec, N)
    return (last == target), (last, target)


def _continuity_trial(space, N):
    rep = homology.hx_cont(space, N)
    return rep.agrees, (rep.colimit_value, rep.space_value)


def _additivity_trial(rng, cfg, N):
    group_name = rng.choice(list(cfg.groups))
    child = rng.fork("additivity-members")
    spaces = []
    for k in range(rng.randint(1, 3)):
        sub = child.fork("member-%d" % k)
        sub_cfg = SuiteConfig(
            seed=0,
            trials=1,
            size_min=cfg.size_min,
            size_max=max(cfg.size_min, min(cfg.size_max, 4)),
            groups=(group_name,),
            max_degree=N,
        )
        spaces.append(gen_space(sub, sub_cfg))
    rep = homology.additivity_factorization(spaces, N)
    return rep.basis_bijection and rep.chain_isomorphism, rep.dims


def _flasqueness_fixture(cfg):
    shift = analysis.ShiftSpace(
        base=("p",),
        base_action=Action.trivial(("p",)),
        band_generators=((1, frozenset([("p", "p")])),),
    )
    f = analysis.ShiftMap.make(1, {"p": "p"})
    rep1 = analysis.flasqueness_check(shift, f, cfg.flasque_horizon)
    rep2 = ctrl.flasque_sigma_check(shift, f, cfg.sigma_horizon)
    return rep1, rep2


def _phi_psi_sweep(cfg, N):
    out = []
    for name in cfg.groups:
        G = group_by_name(name)
        S = Action.trivial(("*",), G)
        _, _, rep = homology.phi_psi(G, S, min(N, 2))
        out.append((name, rep))
    return out


def _band_fixture(n=5):
    carrier = tuple(str(i) for i in range(n))
    act = Action.trivial(carrier)
    gen = frozenset(
        (str(i), str(j)) for i in range(n) for j in range(n) if abs(i - j) <= 1
    )
    return make_space(carrier, act, [gen], [frozenset([p]) for p in carrier])


def _flip_sign_fixture(N):
    """Flip one boundary sign where d o d provably breaks; the suite's own
    chain assertions must catch it."""
    sp = _band_fixture()
    cx = homology.chain_complex(sp, N + 1)
    flipped = False
    for n in range(2, cx.top + 1):
        lower = cx.boundaries[n - 2]
        for c, col in cx.boundaries[n - 1].items():
            for r in col:
                if lower.get(r):
                    col[r] = -col[r]
                    flipped = True
                    break
            if flipped:
                break
        if flipped:
            break
    if not flipped:
        return False, "no qualifying entry to flip"
    try:
        homology.HomologyData(cx, N)
    except AssertionError as err:
        return False, "boundary corruption detected: %s" % err
    return True, "corruption went unnoticed"


def _drop_pair_fixture(N):
    """Deleting the orbit of one generator pair before saturation splits a
    coarse component; the u-continuity comparison must notice."""
    sp = _band_fixture()
    return _u_continuity(sp, N, drop_pair=True)


def _ctrl_fixture(mutate=None):
    """Deterministic controlled-object checks; break_cocycle corrupts one
    entry and must surface as a failure with a witness."""
    G = group_by_name("Z2")
    sp = build.build_can_min(G)
    dims = {x: 1 for x in sp.carrier}
    cocycle = {
        ("e", "e"): [[1]],
        ("e", "g"): [[1]],
        ("g", "e"): [[-1]],
        ("g", "g"): [[-1]],
    }
    if mutate == "break_cocycle":
        cocycle[("g", "g")] = [[1]]
    try:
        obj = ctrl.ctrl_object(sp, sp.carrier, dims, cocycle)
    except PreconditionError as err:
        return False, str(err)
    lat = ctrl.HomLattice(obj, obj)
    return lat.rank() > 0, "hom rank %d" % lat.rank()


MUTATIONS = ("flip_boundary_sign", "drop_entourage_pair", "break_cocycle")


def axiom_suite(cfg, mutate=None):
    """The empirical coarse-homology-axiom suite.

    Per trial: coarse invariance, excision (Mayer-Vietoris), u-continuity
    and continuity; plus per-run flasqueness horizons, additivity on random
    families, and the phi/psi sweep over the group menu.  `mutate` injects
    one deliberate defect to prove the suite is not vacuous."""
    if mutate is not None and mutate not in MUTATIONS:
        raise PreconditionError("unknown mutation %r" % mutate)
    report = SuiteReport(config={**asdict(cfg), "mutate": mutate})
    root = SplitMix64(cfg.seed)
    N = cfg.max_degree

    for trial in range(cfg.trials):
        rng = root.fork("trial-%d" % trial)
        sp = gen_space(rng.fork("space"), cfg)

        (res, secs) = _timed(lambda: _coarse_invariance(sp, N))
        ok, witness = res
        report.add("coarse-invariance", trial, ok, witness, secs)

        (res, secs) = _timed(lambda: _excision_trial(rng.fork("excision"), sp, N))
        ok, witness = res
        report.add("excision-mayer-vietoris", trial, ok, witness, secs)

        (res, secs) = _timed(lambda: _u_continuity(sp, N))
        ok, witness = res
        report.add("u-continuity", trial, ok, witness if not ok else "", secs)

        (res, secs) = _timed(lambda: _continuity_trial(sp, N))
        ok, witness = res
        report.add("continuity", trial, ok, witness if not ok else "", secs)

        (res, secs) = _timed(lambda: _additivity_trial(rng.fork("additivity"), cfg, N))
        ok, witness = res
        report.add("additivity", trial, ok, witness if not ok else "", secs)

    (res, secs) = _timed(lambda: _flasqueness_fixture(cfg))
    rep1, rep2 = res
    report.add("flasqueness-horizon", 0, rep1.verified, repr(rep1.details), secs)
    report.add("flasque-sigma", 0, rep2.verified, repr(rep2.details), 0.0)

    (res, secs) = _timed(lambda: _phi_psi_sweep(cfg, N))
    for name, rep in res:
        ok = (
            rep.psi_phi_identity
            and rep.phi_psi_identity
            and rep.chain_map
            and rep.homology_agrees
        )
        report.add("phi-psi-%s" % name, 0, ok, "", secs / max(1, len(res)))

    (res, secs) = _timed(lambda: _ctrl_fixture(mutate))
    ok, witness = res
    report.add("controlled-objects", 0, ok, witness, secs)

    # deliberate-defect fixtures: each mutation must surface as a failure
    if mutate == "flip_boundary_sign":
        (res, secs) = _timed(lambda: _flip_sign_fixture(N))
        ok, witness = res
        report.add("excision-mayer-vietoris", -1, ok, witness, secs)
    elif mutate == "drop_entourage_pair":
        (res, secs) = _timed(lambda: _drop_pair_fixture(N))
        ok, witness = res
        report.add("u-continuity", -1, ok, witness, secs)
    return report
