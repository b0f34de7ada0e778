"""Change-of-group functors, Mackey formula, induction adjunction."""

import pytest

from coarsex import build, change
from coarsex.groups import (
    GroupHom,
    cyclic_group,
    identity_hom,
    inclusion_hom,
    symmetric_group_3,
    trivial_group,
)
from coarsex.spaces import point_space, validate_space


def z2_in_z4():
    G = cyclic_group(4)
    return inclusion_hom({"e", "g2"}, G), G


def z2_point():
    H = cyclic_group(2)
    carrier = ("*",)
    from coarsex.spaces import Action, make_space, diagonal

    act = Action.trivial(carrier, H)
    return make_space(carrier, act, [diagonal(carrier)], [frozenset(carrier)], name="pt_H")


def test_res_along_identity():
    sp = build.build_can_min(cyclic_group(2))
    out = change.change_group("res", sp, identity_hom(sp.group))
    assert out.carrier == sp.carrier
    assert out.coarse_max == sp.coarse_max
    assert out.bornology.generators == sp.bornology.generators


def test_qh_of_can_min_by_whole_group_is_point():
    G = cyclic_group(3)
    sp = build.build_can_min(G)
    out = change.change_group("qh", sp, identity_hom(G))
    assert len(out.carrier) == 1
    assert validate_space(out).ok


def test_ind_of_point_is_coset_space():
    iota, G = z2_in_z4()
    pt = z2_point()
    # the point space over H = Z/2 inside Z/4: induction gives (G/H)_min,min
    pt_h = change.change_group("res", build.build_min_min(("*",)), GroupHom(iota.source, trivial_group(), {h: "e" for h in iota.source.elements}))
    ind = change.change_group("ind", pt_h, iota)
    assert len(ind.carrier) == 2  # [G : H] cosets
    assert validate_space(ind).ok
    # minimal coarse structure: only the diagonal survives
    assert all(x == y for (x, y) in ind.coarse_max)


def test_bh_equals_restriction_for_finite_subgroup():
    G = symmetric_group_3()
    sp = build.build_can_min(G)
    iota = inclusion_hom({"e", "(12)"}, G)
    assert change.bh_equals_restricted_normalizer(sp, iota)


def test_ind_absorbs_kernel_completion():
    H = cyclic_group(4)
    G = cyclic_group(2)
    # surjection Z/4 -> Z/2 with kernel {e, g2}
    hom = GroupHom(H, G, {"e": "e", "g": "g", "g2": "e", "g3": "g"})
    sp = build.build_can_min(H)
    assert change.ind_absorbs_kernel_completion(sp, hom)


def test_mackey_identity_case():
    G = cyclic_group(2)
    sp = build.build_can_min(G)
    rep = change.mackey_check(sp, identity_hom(G), identity_hom(G))
    assert len(rep.double_cosets) == 1
    assert rep.isomorphism


def test_mackey_s3_transposition():
    G = symmetric_group_3()
    iota = inclusion_hom({"e", "(12)"}, G)
    pt_h = change.change_group(
        "res",
        build.build_min_min(("*",)),
        GroupHom(iota.source, trivial_group(), {h: "e" for h in iota.source.elements}),
    )
    rep = change.mackey_check(pt_h, iota, iota)
    assert len(rep.double_cosets) == 2
    assert rep.isomorphism, repr(rep.details)
    assert not rep.flagged


def test_mackey_z4():
    iota, G = z2_in_z4()
    pt_h = change.change_group(
        "res",
        build.build_min_min(("*",)),
        GroupHom(iota.source, trivial_group(), {h: "e" for h in iota.source.elements}),
    )
    rep = change.mackey_check(pt_h, iota, iota)
    assert len(rep.double_cosets) == 2
    assert rep.isomorphism


def test_adjunction_identity():
    G = cyclic_group(2)
    sp = build.build_can_min(G)
    rep = change.adjunction_check(identity_hom(G), sp, sp)
    assert rep.ok


def test_adjunction_z2_in_z4():
    iota, G = z2_in_z4()
    pt_h = change.change_group(
        "res",
        build.build_min_min(("*",)),
        GroupHom(iota.source, trivial_group(), {h: "e" for h in iota.source.elements}),
    )
    Y = build.build_can_min(G)
    rep = change.adjunction_check(iota, pt_h, Y)
    assert rep.ok, repr(rep.details)
