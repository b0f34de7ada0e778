"""Rips complexes of the five-cycle; Dirac equivalences; horizon-bounded
flasqueness of the shift family."""

from coarsex import (
    Action,
    ShiftMap,
    ShiftSpace,
    SpaceMap,
    build_metric,
    dirac_equivalence,
    flasqueness_check,
    group_str,
    rips_complex,
    sbg_check,
    simplicial_homology,
)
from coarsex.ctrl import flasque_sigma_check
from coarsex.rips import export_complex
from coarsex.spaces import diagonal, make_space, point_space

# --- the five-cycle at two scales ----------------------------------------------

carrier = tuple(str(i) for i in range(5))
dist = {(str(i), str(j)): min((i - j) % 5, (j - i) % 5)
        for i in range(5) for j in range(5)}
c5 = build_metric(carrier, dist, scales=[1, 2])
U1, U2 = c5.coarse_generators

K1, P1 = rips_complex(c5, U1, 3)
K2, P2 = rips_complex(c5, U2, 4)
print("P_U1(C5) simplex counts:", K1.counts(), "-> the cycle graph")
print("P_U2(C5) simplex counts:", K2.counts(), "-> the full 4-simplex")
print("H_*(P_U1):", [group_str(g) for g in simplicial_homology(K1, 2)])
print("H_*(P_U2):", [group_str(g) for g in simplicial_homology(K2, 2)])
print("the hole fills in as the scale grows")
print()
print("export of the cycle complex:")
print(export_complex(K1))

# --- Dirac equivalence -----------------------------------------------------------

band = make_space(carrier, Action.trivial(carrier),
                  [frozenset((a, b) for a in carrier for b in carrier
                             if abs(int(a) - int(b)) <= 1)],
                  [frozenset([p]) for p in carrier])
delta, g, rep = dirac_equivalence(band, band.coarse_generators[0] | diagonal(carrier))
print("Dirac map on the band space: g o delta = id:", rep.section_is_left_inverse,
      " delta o g close to id:", rep.composite_close_to_identity)

# --- bounded geometry --------------------------------------------------------------

big_band = make_space(tuple(str(i) for i in range(10)), Action.trivial(tuple(str(i) for i in range(10))),
                      [frozenset((str(i), str(j)) for i in range(10) for j in range(10)
                                 if abs(i - j) <= 1)],
                      [frozenset([str(i)]) for i in range(10)])
rep = sbg_check(big_band)
print()
print("strongly bounded geometry of the 10-point band:")
print("  minimal bornology:", rep.minimal_bornology,
      " ball bound of the declared generator:", rep.bound)

# --- flasqueness up to a horizon ----------------------------------------------------

shift_family = ShiftSpace(base=("p",), base_action=Action.trivial(("p",)),
                          band_generators=((1, frozenset([("p", "p")])),))
shift = ShiftMap.make(1, {"p": "p"})
rep = flasqueness_check(shift_family, shift, horizon=20)
print()
print("the N-shift family at horizon 20:")
print("  close to id:", rep.close_to_identity,
      " iterates controlled:", rep.iterates_uniformly_controlled,
      " escapes bounded sets:", rep.escapes_bounded_sets)
sigma = flasque_sigma_check(shift_family, shift, horizon=10)
print("  Eilenberg-swindle fiber ranks agree in the window:", sigma.ranks_agree)

pt = point_space()
rep = flasqueness_check(pt, SpaceMap.identity(pt), horizon=5)
print("identity on the point fails the escape condition:",
      not rep.escapes_bounded_sets)
