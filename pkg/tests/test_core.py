"""Core space model: entourage algebra, validation, map analysis, subsets,
exhaustions, flasqueness."""

import pytest
from hypothesis import given, settings, strategies as st

from coarsex import analysis, build, spaces
from coarsex.groups import cyclic_group, symmetric_group_3, trivial_group
from coarsex.spaces import (
    Action,
    DomainError,
    PreconditionError,
    SpaceMap,
    compose,
    diagonal,
    invert,
    make_space,
    saturate,
    thicken,
    validate_space,
)


def band_space(n, width=1, group=None):
    """{0..n-1} with |i-j| <= width entourage, minimal bornology."""
    carrier = tuple(str(i) for i in range(n))
    act = Action.trivial(carrier, group)
    gen = frozenset(
        (str(i), str(j)) for i in range(n) for j in range(n) if abs(i - j) <= width
    )
    return make_space(carrier, act, [gen], [frozenset([p]) for p in carrier], name="band")


def swap_space(coarse="min"):
    """{a, b} with the Z/2 swap action."""
    G = cyclic_group(2)
    carrier = ("a", "b")
    perms = {"e": {"a": "a", "b": "b"}, "g": {"a": "b", "b": "a"}}
    act = Action(G, carrier, perms)
    if coarse == "min":
        gens = [diagonal(carrier)]
    else:
        gens = [frozenset((x, y) for x in carrier for y in carrier)]
    return make_space(carrier, act, gens, [frozenset([p]) for p in carrier])


def test_entourage_compose_invert_thicken():
    U = frozenset([("a", "b")])
    V = frozenset([("b", "c")])
    assert compose(U, V) == frozenset([("a", "c")])
    assert invert(U) == frozenset([("b", "a")])
    five = band_space(5)
    band = next(iter(five.coarse_generators))
    assert thicken(band, {"2"}) == frozenset({"1", "2", "3"})


def test_saturate_fixed_point_closure():
    carrier = ("0", "1", "2")
    act = Action.trivial(carrier)
    got = saturate([frozenset([("0", "1")])], act, carrier)
    expect = frozenset(
        [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1"), ("2", "2")]
    )
    assert got == expect


def test_saturate_idempotent():
    sp = band_space(6, 2)
    again = saturate([sp.coarse_max], sp.action, sp.carrier)
    assert again == sp.coarse_max


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_thicken_compose_compatible(data):
    n = data.draw(st.integers(min_value=1, max_value=6))
    pts = [str(i) for i in range(n)]
    pairs = st.tuples(st.sampled_from(pts), st.sampled_from(pts))
    U = frozenset(data.draw(st.lists(pairs, max_size=8)))
    V = frozenset(data.draw(st.lists(pairs, max_size=8)))
    B = frozenset(data.draw(st.lists(st.sampled_from(pts), max_size=4)))
    assert thicken(compose(U, V), B) == thicken(U, thicken(V, B))


def test_validate_point_space():
    assert validate_space(spaces.point_space()).ok


def test_validate_saturation_adds_swap_diagonal():
    # generator {(a,a)} on the swap space: saturation adds (b,b)
    G = cyclic_group(2)
    carrier = ("a", "b")
    act = Action(G, carrier, {"e": {"a": "a", "b": "b"}, "g": {"a": "b", "b": "a"}})
    sp = make_space(carrier, act, [frozenset([("a", "a")])], [frozenset(["a"]), frozenset(["b"])])
    assert validate_space(sp).ok
    assert ("b", "b") in sp.coarse_max


def test_validate_noncovering_bornology_fails():
    carrier = ("a", "b")
    act = Action.trivial(carrier)
    sp = spaces.Space(
        carrier,
        act,
        diagonal(carrier),
        (diagonal(carrier),),
        spaces.Bornology([frozenset(["a"])]),
    )
    rep = validate_space(sp)
    assert not rep.ok
    assert any("covers carrier" in e.name for e in rep.failures())


def test_analyze_identity_map():
    sp = band_space(4)
    rep = analysis.analyze_map(SpaceMap.identity(sp))
    assert rep.is_morphism
    assert rep.equivalence is True


def test_projection_from_tensor_is_equivalence():
    X = band_space(3)
    two = build.build_max_max(("0", "1"))
    T = build.combine_tensor(two, X)
    proj = SpaceMap.from_dict(T, X, {(a, x): x for (a, x) in T.carrier})
    rep = analysis.analyze_map(proj)
    assert rep.is_morphism
    assert rep.equivalence is True
    # the explicit section also certifies it
    section = SpaceMap.from_dict(X, T, {x: ("0", x) for x in X.carrier})
    rep2 = analysis.analyze_map(proj, section)
    assert rep2.equivalence is True


def test_no_equivariant_inverse_fixed_point_obstruction():
    # Z/2 swaps {a, b}; including into {a, b, c} with c fixed has no
    # equivariant inverse up to closeness for the minimal structures
    G = cyclic_group(2)
    two = swap_space("min")
    carrier = ("a", "b", "c")
    act = Action(
        G,
        carrier,
        {"e": {p: p for p in carrier}, "g": {"a": "b", "b": "a", "c": "c"}},
    )
    three = make_space(
        carrier, act, [diagonal(carrier)], [frozenset([p]) for p in carrier]
    )
    inc = SpaceMap.from_dict(two, three, {"a": "a", "b": "b"})
    rep = analysis.analyze_map(inc)
    assert rep.is_morphism
    assert rep.equivalence is False


def test_equivalence_symmetric():
    X = band_space(3)
    two = build.build_max_max(("0", "1"))
    T = build.combine_tensor(two, X)
    proj = SpaceMap.from_dict(T, X, {(a, x): x for (a, x) in T.carrier})
    rep = analysis.analyze_map(proj)
    g = rep.inverse
    assert g is not None
    assert analysis.certifies_equivalence(g, proj)


def test_closeness_is_equivalence_relation():
    sp = band_space(5)
    f = SpaceMap.identity(sp)
    g = SpaceMap.from_function(sp, sp, lambda p: str(min(int(p) + 1, 4)))
    h = SpaceMap.from_function(sp, sp, lambda p: str(min(int(p) + 2, 4)))
    assert analysis.maps_close(f, f)
    assert analysis.maps_close(f, g) == analysis.maps_close(g, f)
    # band-2 saturation keeps transitivity inside the same component
    assert analysis.maps_close(f, g) and analysis.maps_close(g, h)
    assert analysis.maps_close(f, h)


def test_classify_subsets_band():
    sp = band_space(5)
    rep = analysis.classify_subsets(sp, {"0"})
    stages = [sorted(s) for s in rep.family.stages]
    assert stages[0] == ["0"]
    assert stages[1] == ["0", "1"]
    assert stages[-1] == ["0", "1", "2", "3", "4"]
    assert rep.family.stabilized
    # the last stage absorbs the maximal entourage
    last = rep.family.last
    assert thicken(sp.coarse_max, last) <= last


def test_classify_subsets_whole_carrier_nice():
    sp = band_space(4)
    rep = analysis.classify_subsets(sp, set(sp.carrier))
    assert len(rep.family.stages) == 1
    assert rep.nice is True


def test_coarsely_excisive_band_halves():
    sp = band_space(5)
    Y = {"0", "1", "2"}
    Z = {"2", "3", "4"}
    ok, rep, _ = analysis.is_coarsely_excisive(sp, Y, Z)
    assert ok, repr(rep)


def test_not_excisive_disjoint_cover_same_component():
    sp = band_space(4)
    Y = {"0", "1"}
    Z = {"2", "3"}
    ok, rep, _ = analysis.is_coarsely_excisive(sp, Y, Z)
    assert not ok


def test_classify_exhaustion_trapping():
    sp = build.build_min_max(tuple("abc"))
    fam = [frozenset("a"), frozenset("ab"), frozenset("abc")]
    rep = analysis.classify_exhaustion(sp, fam)
    assert rep.trapping
    assert rep.co_gamma_bounded
    rep2 = analysis.classify_exhaustion(sp, fam[:2])
    assert not rep2.trapping


def test_classify_exhaustion_needs_directed():
    sp = build.build_min_max(tuple("abc"))
    with pytest.raises(PreconditionError):
        analysis.classify_exhaustion(sp, [frozenset("a"), frozenset("b")])


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_co_gamma_bounded_implies_trapping(data):
    n = data.draw(st.integers(min_value=1, max_value=5))
    sp = band_space(n)
    k = data.draw(st.integers(min_value=1, max_value=n))
    chain = [frozenset(str(i) for i in range(j + 1)) for j in range(k)]
    if data.draw(st.booleans()):
        chain.append(frozenset(sp.carrier))
    rep = analysis.classify_exhaustion(sp, chain)
    if rep.co_gamma_bounded:
        assert rep.trapping


def test_flasqueness_shift_family():
    shift = analysis.ShiftSpace(
        base=("p",),
        base_action=Action.trivial(("p",)),
        band_generators=((1, frozenset([("p", "p")])),),
    )
    f = analysis.ShiftMap.make(1, {"p": "p"})
    rep = analysis.flasqueness_check(shift, f, horizon=20)
    assert rep.verified, repr(rep.details)


def test_flasqueness_identity_fails_condition_three():
    sp = band_space(3)
    rep = analysis.flasqueness_check(sp, SpaceMap.identity(sp), horizon=5)
    assert not rep.escapes_bounded_sets
    assert rep.close_to_identity


def test_flasqueness_horizon_precondition():
    sp = band_space(2)
    with pytest.raises(PreconditionError):
        analysis.flasqueness_check(sp, SpaceMap.identity(sp), horizon=0)


# ---------------------------------------------------------------------------
# constructions


def test_build_can_min_z2():
    sp = build.build_can_min(cyclic_group(2))
    assert len(sp.carrier) == 2
    assert sp.coarse_max == frozenset(
        (x, y) for x in sp.carrier for y in sp.carrier
    )
    assert sp.bornology.is_bounded(set(sp.carrier))


def test_build_min_max():
    sp = build.build_min_max(("x", "y", "z"))
    assert sp.coarse_max == diagonal(sp.carrier)
    assert sp.bornology.is_bounded(set(sp.carrier))


def test_build_metric_cycle():
    carrier = tuple(str(i) for i in range(5))
    dist = {}
    for i in range(5):
        for j in range(5):
            d = min((i - j) % 5, (j - i) % 5)
            dist[str(i), str(j)] = d
    sp = build.build_metric(carrier, dist, scales=[1])
    U1 = sp.coarse_generators[0]
    assert ("0", "1") in U1 and ("0", "4") in U1 and ("0", "2") not in U1
    assert validate_space(sp).ok


def test_recoarsen_diagonal():
    sp = band_space(4)
    re = build.build_recoarsen(sp, diagonal(sp.carrier))
    assert re.coarse_max == diagonal(sp.carrier)
    with pytest.raises(PreconditionError):
        build.build_recoarsen(
            sp, frozenset([("0", "0"), ("9", "9")])
        )


def test_subspace_induced_structure():
    sp = band_space(5)
    sub = build.build_subspace(sp, {"0", "2"})
    # induced maximal entourage is the restriction: both points share the
    # ambient component even though no generator joins them inside Z
    assert ("0", "2") in sub.coarse_max


def test_free_union_of_two_points():
    pt = spaces.point_space()
    un = build.combine_free_union([pt, pt])
    assert len(un.carrier) == 2
    assert un.coarse_max == diagonal(un.carrier)
    assert un.bornology.is_bounded(set(un.carrier))
    assert build.combine("coproduct", [pt, pt]).carrier == un.carrier


def test_tensor_unit_and_symmetry():
    pt = spaces.point_space()
    X = band_space(3)
    T = build.combine_tensor(pt, X)
    proj = SpaceMap.from_dict(T, X, {(a, x): x for (a, x) in T.carrier})
    rep = analysis.analyze_map(proj)
    assert rep.equivalence is True
    TXY = build.combine_tensor(X, X)
    sw = build.swap_map(TXY, TXY)
    assert analysis.analyze_map(sw).is_morphism


def test_tensor_vs_cartesian_bornology_generators():
    X = band_space(2)
    Y = band_space(3)
    t = build.combine_tensor(X, Y)
    c = build.combine_cartesian(X, Y)
    assert t.coarse_max == c.coarse_max
    assert {len(B) for B in t.bornology.generators} == {1}
    assert {len(B) for B in c.bornology.generators} == {2, 3}


def test_min_max_identity_morphisms():
    carrier = ("a", "b")
    mm = build.build_min_max(carrier)
    xx = build.build_max_max(carrier)
    nn = build.build_min_min(carrier)
    to_max = SpaceMap.from_dict(mm, xx, {p: p for p in carrier})
    to_min = SpaceMap.from_dict(mm, nn, {p: p for p in carrier})
    assert analysis.analyze_map(to_max).is_morphism
    assert analysis.analyze_map(to_min).is_morphism


def test_fiber_product_of_identities_is_diagonal():
    X = band_space(3)
    idm = SpaceMap.identity(X)
    fp = build.combine_fiber_product(idm, idm)
    assert sorted(fp.carrier) == sorted((x, x) for x in X.carrier)


def test_pushout_excisive():
    sp = band_space(5)
    Y = frozenset({"0", "1", "2"})
    Z = frozenset({"2", "3", "4"})
    pushout, inc_y, inc_z = build.combine_pushout_excisive(sp, Y, Z)
    assert pushout.coarse_max == sp.coarse_max
    assert inc_y.codomain is pushout
    # square commutes on Y n Z
    for p in Y & Z:
        assert inc_y(p) == inc_z(p)
    with pytest.raises(PreconditionError):
        build.combine_pushout_excisive(band_space(4), {"0", "1"}, {"2", "3"})


def test_quotient_adjunction_trivial_action():
    sp = band_space(3)
    quotient, unit, completion = build.quotient_adjunction(sp)
    assert len(quotient.carrier) == 3
    assert completion.bornology.union == sp.bornology.union


def test_quotient_adjunction_swap():
    sp = swap_space("min")
    quotient, unit, completion = build.quotient_adjunction(sp)
    assert len(quotient.carrier) == 1
    assert analysis.analyze_map(unit).is_morphism


def test_quotient_of_can_min_is_point():
    G = symmetric_group_3()
    sp = build.build_can_min(G)
    quotient, unit, completion = build.quotient_adjunction(sp)
    assert len(quotient.carrier) == 1
