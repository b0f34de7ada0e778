"""Rips complexes, Dirac equivalences, simplicial homology, bounded geometry."""

import pytest

from coarsex import build, rips
from coarsex.groups import cyclic_group
from coarsex.spaces import (
    Action,
    PreconditionError,
    SpaceMap,
    diagonal,
    make_space,
    point_space,
)


def cycle_space(n=5, scales=(1,)):
    carrier = tuple(str(i) for i in range(n))
    dist = {
        (str(i), str(j)): min((i - j) % n, (j - i) % n)
        for i in range(n)
        for j in range(n)
    }
    return build.build_metric(carrier, dist, scales=list(scales))


def band_space(n, width=1):
    carrier = tuple(str(i) for i in range(n))
    act = Action.trivial(carrier)
    gen = frozenset(
        (str(i), str(j)) for i in range(n) for j in range(n) if abs(i - j) <= width
    )
    return make_space(carrier, act, [gen], [frozenset([p]) for p in carrier])


def test_rips_cycle_u1_is_the_cycle_graph():
    sp = cycle_space(5, scales=(1, 2))
    U1 = sp.coarse_generators[0]
    K, P = rips.rips_complex(sp, U1, max_dim=4)
    assert K.counts() == [5, 5, 0, 0, 0]


def test_rips_cycle_u2_is_full_simplex():
    sp = cycle_space(5, scales=(1, 2))
    U2 = sp.coarse_generators[1]
    K, P = rips.rips_complex(sp, U2, max_dim=4)
    # all pairwise distances on C5 are <= 2: the full 4-simplex
    assert K.counts() == [5, 10, 10, 5, 1]


def test_rips_diagonal_zero_dimensional():
    sp = band_space(4)
    K, P = rips.rips_complex(sp, diagonal(sp.carrier), max_dim=3)
    assert K.counts()[0] == 4
    assert all(c == 0 for c in K.counts()[1:])


def test_rips_filtration_monotone():
    sp = cycle_space(5, scales=(1, 2))
    (K1, _), (K2, _) = [
        rips.rips_complex(sp, U, 3) for U in sp.coarse_generators
    ]
    complexes, inclusions = rips.rips_filtration(sp, sp.coarse_generators, 3)
    assert len(complexes) == 2 and len(inclusions) == 1


def test_simplicial_homology_cycle():
    sp = cycle_space(5)
    K, _ = rips.rips_complex(sp, sp.coarse_generators[0], 3)
    assert rips.simplicial_homology(K, 2) == [(1, ()), (1, ()), (0, ())]


def test_simplicial_homology_full_simplex():
    sp = cycle_space(5, scales=(1, 2))
    K, _ = rips.rips_complex(sp, sp.coarse_generators[1], 4)
    assert rips.simplicial_homology(K, 3) == [(1, ()), (0, ()), (0, ()), (0, ())]


def test_simplicial_homology_empty():
    K = rips.SimplicialComplex((), ())
    assert rips.simplicial_homology(K, 2) == [(0, ()), (0, ()), (0, ())]


def test_dirac_equivalence_trivial_group():
    sp = band_space(5)
    U = sp.coarse_generators[0] | diagonal(sp.carrier)
    delta, g, rep = rips.dirac_equivalence(sp, U)
    assert rep.section_is_left_inverse
    assert rep.composite_close_to_identity
    assert rep.equivalence


def test_dirac_twisted_z2():
    G = cyclic_group(2)
    carrier = ("*",)
    X = build.build_min_max(carrier, Action.trivial(carrier, G))
    q_carrier = ("q0", "q1")
    Q = build.build_min_min(
        q_carrier,
        Action(G, q_carrier, {"e": {"q0": "q0", "q1": "q1"}, "g": {"q0": "q1", "q1": "q0"}}),
    )
    U = diagonal(carrier)
    delta, g, rep = rips.dirac_equivalence(X, U, Q=Q)
    assert rep.equivalence


def test_dirac_rejected_with_torsion_and_no_q():
    G = cyclic_group(2)
    carrier = ("a", "b")
    act = Action(G, carrier, {"e": {"a": "a", "b": "b"}, "g": {"a": "b", "b": "a"}})
    sp = build.build_min_min(carrier, act)
    with pytest.raises(PreconditionError):
        rips.dirac_equivalence(sp, diagonal(carrier))


def test_rips_functorial_identity_inclusion():
    sp = cycle_space(5, scales=(1, 2))
    U1, U2 = sp.coarse_generators
    vmap, morphism = rips.rips_functorial(SpaceMap.identity(sp), U1, U2)
    assert vmap == {v: v for v in sp.carrier}


def test_rips_functorial_rotation_automorphism():
    sp = cycle_space(5)
    U1 = sp.coarse_generators[0]
    rot = SpaceMap.from_function(sp, sp, lambda p: str((int(p) + 1) % 5))
    vmap, morphism = rips.rips_functorial(rot, U1, U1)
    K, _ = rips.rips_complex(sp, U1, 2)
    for level in K.simplices:
        for s in level:
            assert K.has_simplex(tuple(vmap[v] for v in s))


def test_rips_functorial_containment_failure():
    sp = cycle_space(5, scales=(1, 2))
    U1, U2 = sp.coarse_generators
    with pytest.raises(PreconditionError):
        rips.rips_functorial(SpaceMap.identity(sp), U2, U1)


def test_sbg_point():
    rep = rips.sbg_check(point_space())
    assert rep.minimal_bornology
    assert rep.bound == 1


def test_sbg_band_ten():
    rep = rips.sbg_check(band_space(10))
    assert rep.minimal_bornology
    assert rep.bound == 3


def test_sbg_max_max_fails():
    sp = build.build_max_max(("a", "b", "c", "d"))
    rep = rips.sbg_check(sp)
    assert not rep.minimal_bornology


def test_export_parse_roundtrip():
    sp = cycle_space(5)
    K, _ = rips.rips_complex(sp, sp.coarse_generators[0], 2)
    text = rips.export_complex(K)
    K2 = rips.parse_complex(text)
    assert K2.counts()[:2] == K.counts()[:2]
    assert rips.simplicial_homology(K2, 1) == rips.simplicial_homology(K, 1)


def test_rips_rejects_noninvariant_entourage():
    G = cyclic_group(2)
    carrier = ("a", "b")
    act = Action(G, carrier, {"e": {"a": "a", "b": "b"}, "g": {"a": "b", "b": "a"}})
    full = frozenset((x, y) for x in carrier for y in carrier)
    sp = make_space(carrier, act, [full], [frozenset([p]) for p in carrier])
    U = frozenset([("a", "a"), ("b", "b"), ("a", "b")])
    with pytest.raises(PreconditionError):
        rips.rips_complex(sp, U, 2)
