"""Acceptance criteria, one test per criterion, exact over the integers.

Each test prints a single pass/fail line (run pytest with -s to see them);
stated runtime budgets are asserted.
"""

import time

import pytest

from coarsex import analysis, build, change, ctrl, harness, homology, rips
from coarsex.groups import (
    GroupHom,
    cyclic_group,
    inclusion_hom,
    symmetric_group_3,
    trivial_group,
)
from coarsex.spaces import (
    Action,
    SpaceMap,
    diagonal,
    make_space,
    point_space,
)

Z = (1, ())
ZERO = (0, ())


def _report(n, ok, detail=""):
    print("[criterion %d] %s%s" % (n, "PASS" if ok else "FAIL", " - " + detail if detail else ""))
    assert ok, "criterion %d failed: %s" % (n, detail)


class Budget:
    def __init__(self, seconds):
        self.limit = seconds
        self.start = time.perf_counter()

    @property
    def elapsed(self):
        return time.perf_counter() - self.start

    def check(self):
        assert self.elapsed < self.limit, "runtime %.1fs exceeds %.0fs" % (
            self.elapsed,
            self.limit,
        )


def test_criterion_1_point_computation():
    budget = Budget(1.0)
    got = homology.homology_groups(point_space(), 4)
    budget.check()
    ok = got == [Z, ZERO, ZERO, ZERO, ZERO]
    _report(1, ok, "H(pt) = %s in %.2fs" % (got, budget.elapsed))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_criterion_2_group_homology_oracle(m):
    budget = Budget(10.0)
    G = cyclic_group(m)
    cx = homology.standard_group_complex(G, Action.trivial(("*",), G), 4)
    got = homology.homology_groups(cx, 3)
    oracle = homology.cyclic_resolution_homology(m, 3)
    budget.check()
    ok = got == oracle == [Z, (0, (m,)), ZERO, (0, (m,))]
    _report(2, ok, "Z/%d: %s in %.1fs" % (m, got, budget.elapsed))


def _subgroup_class_reps(G):
    """One subgroup per conjugacy class."""
    order = {g: i for i, g in enumerate(G.elements)}
    classes = []
    seen = set()
    for H in G.subgroups:
        if H in seen:
            continue
        conj = set()
        for g in G.elements:
            gi = G.inv(g)
            conj.add(frozenset(G.mul(G.mul(g, h), gi) for h in H))
        seen |= conj
        classes.append(min(conj, key=lambda c: sorted(order[x] for x in c)))
    return classes


def test_criterion_3_phi_psi_isomorphism():
    budget = Budget(60.0)
    checked = 0
    for G in [cyclic_group(2), cyclic_group(3), symmetric_group_3()]:
        sets = [("pt", Action.trivial(("*",), G))]
        for H in _subgroup_class_reps(G):
            if len(H) == G.order:
                continue  # Gamma/Gamma is the point, already listed
            act = build.coset_action(G, H)
            sets.append(("%s/%d" % (G.name, len(H)), act))
        for name, S in sets:
            _, _, rep = homology.phi_psi(G, S, 3)
            ok = (
                rep.psi_phi_identity
                and rep.phi_psi_identity
                and rep.chain_map
                and rep.homology_agrees
            )
            assert ok, "phi/psi failed for %s, S = %s" % (G.name, name)
            checked += 1
    budget.check()
    # Z/2 and Z/3 contribute {pt, regular} each; S3 contributes {pt, Gamma/e,
    # Gamma/C2, Gamma/C3} (Gamma/Gamma is the point and is deduplicated)
    _report(3, checked == 8, "%d (group, set) pairs in %.1fs" % (checked, budget.elapsed))


def test_criterion_4_axiom_suite():
    budget = Budget(300.0)
    cfg = harness.SuiteConfig(seed=42, trials=100, size_min=2, size_max=6, max_degree=2)
    rep = harness.axiom_suite(cfg)
    budget.check()
    ok = rep.ok
    detail = "100 trials, %d checks, hash %s, %.0fs" % (
        len(rep.results),
        rep.content_hash()[:12],
        budget.elapsed,
    )
    if not ok:
        detail += " failures: %r" % [(f.check, f.trial) for f in rep.failures()][:5]
    _report(4, ok, detail)


def test_criterion_5_flasqueness():
    budget = Budget(10.0)
    shift = analysis.ShiftSpace(
        base=("p",),
        base_action=Action.trivial(("p",)),
        band_generators=((1, frozenset([("p", "p")])),),
    )
    f = analysis.ShiftMap.make(1, {"p": "p"})
    rep20 = analysis.flasqueness_check(shift, f, horizon=20)
    rep10 = ctrl.flasque_sigma_check(shift, f, horizon=10)

    carrier = ("a", "b")
    finite = build.build_min_min(carrier)
    rep_id = analysis.flasqueness_check(finite, SpaceMap.identity(finite), horizon=20)
    budget.check()
    ok = rep20.verified and rep10.verified and not rep_id.escapes_bounded_sets
    _report(
        5,
        ok,
        "shift verified at 20, sigma at 10, identity fails condition (3); %.1fs"
        % budget.elapsed,
    )


def test_criterion_6_mackey():
    budget = Budget(5.0)
    results = []
    G = symmetric_group_3()
    iota = inclusion_hom({"e", "(12)"}, G)
    pt_h = change.change_group(
        "res",
        build.build_min_min(("*",)),
        GroupHom(iota.source, trivial_group(), {h: "e" for h in iota.source.elements}),
    )
    rep = change.mackey_check(pt_h, iota, iota)
    results.append((len(rep.double_cosets) == 2 and rep.isomorphism and not rep.flagged, "S3"))

    G4 = cyclic_group(4)
    iota4 = inclusion_hom({"e", "g2"}, G4)
    pt_h4 = change.change_group(
        "res",
        build.build_min_min(("*",)),
        GroupHom(iota4.source, trivial_group(), {h: "e" for h in iota4.source.elements}),
    )
    rep4 = change.mackey_check(pt_h4, iota4, iota4)
    results.append((len(rep4.double_cosets) == 2 and rep4.isomorphism, "Z4"))
    budget.check()
    ok = all(r for r, _ in results)
    _report(6, ok, "both instances certified in %.1fs" % budget.elapsed)


def test_criterion_7_induction_adjunction():
    budget = Budget(5.0)
    G = cyclic_group(4)
    iota = inclusion_hom({"e", "g2"}, G)
    H = iota.source
    rename = GroupHom(H, cyclic_group(2), {"e": "e", "g2": "g"})
    cfg = harness.SuiteConfig(seed=9, trials=1, size_min=2, size_max=4, groups=("Z2",))
    root = harness.SplitMix64(2024)
    passed = 0
    for k in range(3):
        raw = harness.gen_space(root.fork("adj-%d" % k), cfg)
        # transport the generated Z/2-space onto the subgroup {e, g2}
        X = change.change_group("res", raw, rename)
        cfg_y = harness.SuiteConfig(seed=9, trials=1, size_min=2, size_max=4, groups=("Z4",))
        Y = harness.gen_space(root.fork("adj-y-%d" % k), cfg_y)
        rep = change.adjunction_check(iota, X, Y)
        assert rep.ok, repr(rep.details)
        passed += 1
    budget.check()
    _report(7, passed == 3, "unit/counit and both triangles on 3 random spaces; %.1fs" % budget.elapsed)


def test_criterion_8_rips():
    budget = Budget(5.0)
    carrier = tuple(str(i) for i in range(5))
    dist = {
        (str(i), str(j)): min((i - j) % 5, (j - i) % 5)
        for i in range(5)
        for j in range(5)
    }
    c5 = build.build_metric(carrier, dist, scales=[1, 2])
    U1, U2 = c5.coarse_generators
    K1, _ = rips.rips_complex(c5, U1, 3)
    K2, _ = rips.rips_complex(c5, U2, 4)
    h1 = rips.simplicial_homology(K1, 1)[1]
    h2 = rips.simplicial_homology(K2, 1)[1]

    band = make_space(
        carrier,
        Action.trivial(carrier),
        [frozenset((a, b) for a in carrier for b in carrier if abs(int(a) - int(b)) <= 1)],
        [frozenset([p]) for p in carrier],
    )
    _, _, d_rep = rips.dirac_equivalence(band, band.coarse_generators[0] | diagonal(carrier))

    G = cyclic_group(2)
    X = build.build_min_max(("*",), Action.trivial(("*",), G))
    Q = build.build_min_min(
        ("q0", "q1"),
        Action(G, ("q0", "q1"), {"e": {"q0": "q0", "q1": "q1"}, "g": {"q0": "q1", "q1": "q0"}}),
    )
    _, _, t_rep = rips.dirac_equivalence(X, diagonal(("*",)), Q=Q)
    budget.check()
    ok = h1 == (1, ()) and h2 == (0, ()) and d_rep.equivalence and t_rep.equivalence
    _report(
        8,
        ok,
        "H1(P_U1 C5) = Z, H1(P_U2 C5) = 0, both Dirac certificates; %.1fs" % budget.elapsed,
    )


def test_criterion_9_controlled_categories():
    budget = Budget(60.0)
    # convolution functor for S3 over the coset set
    G = symmetric_group_3()
    S = build.coset_action(G, {"e", "(12)"})
    X = build.build_min_max(S.carrier, S)
    space = build.combine_tensor(X, build.build_can_min(G))
    pts = S.carrier
    samples = [
        ctrl.conv_preimage_object(space, {pts[0]: 1, pts[1]: 1, pts[2]: 1}),
        ctrl.conv_preimage_object(space, {pts[0]: 1}),
        ctrl.conv_preimage_object(space, {pts[0]: 2, pts[1]: 1}),
        ctrl.conv_preimage_object(space, {pts[1]: 1, pts[2]: 1}),
    ]
    conv = ctrl.conv_equivalence_report(space, samples, hom_samples=10)
    conv_ok = (
        conv.sampled_pairs >= 10
        and conv.faithful
        and conv.full
        and conv.essentially_surjective
    )

    # bh round trips for Z/2
    G2 = cyclic_group(2)
    sp2 = build.build_min_min(tuple(G2.elements), build.left_translation_action(G2))
    sign = ctrl.ctrl_object(
        sp2,
        sp2.carrier,
        {x: 1 for x in sp2.carrier},
        {
            ("e", "e"): [[1]],
            ("e", "g"): [[1]],
            ("g", "e"): [[-1]],
            ("g", "g"): [[-1]],
        },
    )
    bh = ctrl.bh_equivalence_report(sp2, G2, [ctrl.free_object(sp2), sign])
    bh_ok = bh.round_trip_1 and bh.round_trip_2

    # 20 random Karoubi completions over band-space big families
    carrier = tuple(str(i) for i in range(6))
    band = make_space(
        carrier,
        Action.trivial(carrier),
        [frozenset((a, b) for a in carrier for b in carrier if abs(int(a) - int(b)) <= 1)],
        [frozenset([p]) for p in carrier],
    )
    fam = analysis.generated_big_family(band, frozenset({"0"}))
    band1 = frozenset(
        (a, b) for a in carrier for b in carrier if abs(int(a) - int(b)) <= 1
    )
    rng = harness.SplitMix64(77)
    failures = 0
    for k in range(20):
        C = ctrl.free_object(band, rank=rng.randint(1, 2))
        stage = fam.stages[rng.randint(0, min(2, len(fam.stages) - 1))]
        A = ctrl.free_object(band, rank=1, support=tuple(sorted(stage)))
        B = ctrl.free_object(band, rank=1, support=tuple(sorted(stage)))
        f_blocks = {}
        for x in A.support:
            for y in band.carrier:
                if (x, y) in band1 and rng.randint(0, 1):
                    f_blocks[(y, x)] = [[rng.randint(-2, 2)] for _ in range(C.dim(y))]
        g_blocks = {}
        for y in band.carrier:
            for z in B.support:
                if (y, z) in band1 and rng.randint(0, 1):
                    g_blocks[(z, y)] = [[rng.randint(-2, 2) for _ in range(C.dim(y))]]
        f = ctrl.ctrl_morphism(A, C, f_blocks, control=band1)
        g = ctrl.ctrl_morphism(C, B, g_blocks, control=band1)
        diagram = ctrl.karoubi_complete(f, g, fam)
        if not diagram.commutes:
            failures += 1
    budget.check()
    ok = conv_ok and bh_ok and failures == 0
    _report(
        9,
        ok,
        "convolution %d pairs, bh round trips, karoubi 20/20; %.1fs"
        % (conv.sampled_pairs, budget.elapsed),
    )


@pytest.mark.parametrize("mutation", harness.MUTATIONS)
def test_criterion_10_mutation_sensitivity(mutation):
    cfg = harness.SuiteConfig(seed=42, trials=1, max_degree=2)
    rep = harness.axiom_suite(cfg, mutate=mutation)
    fails = rep.failures()
    ok = bool(fails) and any(f.witness for f in fails)
    _report(10, ok, "%s -> %d failure(s), witness: %s" % (
        mutation, len(fails), (fails[0].witness[:60] if fails else "none")))
