"""Change-of-group functors with their certificates.

Restriction, completion, quotients and induction on spaces; the Mackey
double-coset decomposition; the induction/restriction adjunction.
"""

from coarsex import (
    GroupHom,
    adjunction_check,
    build_can_min,
    build_min_min,
    change_group,
    cyclic_group,
    mackey_check,
    symmetric_group_3,
    trivial_group,
)
from coarsex.groups import identity_hom, inclusion_hom

# --- the four functors on a small example ------------------------------------

G = cyclic_group(4)
iota = inclusion_hom({"e", "g2"}, G)   # Z/2 inside Z/4
H = iota.source

pt_h = change_group(
    "res", build_min_min(("*",)),
    GroupHom(H, trivial_group(), {h: "e" for h in H.elements}),
)
print("H-point induced up to Z/4:")
ind = change_group("ind", pt_h, iota)
print("  carrier (cosets):", ind.carrier)

can = build_can_min(G)
print("quotient of Z/4_can,min by the whole group:")
q = change_group("qh", can, identity_hom(G))
print("  carrier:", q.carrier, " acting group:", q.group.name)

bh = change_group("bh", can, iota)
print("H-completion keeps the carrier, enlarges bounded generators:")
print("  generator sizes:", sorted(len(B) for B in bh.bornology.generators))

# --- the Mackey formula -------------------------------------------------------

print()
S3 = symmetric_group_3()
iota_s3 = inclusion_hom({"e", "(12)"}, S3)
pt = change_group(
    "res", build_min_min(("*",)),
    GroupHom(iota_s3.source, trivial_group(), {h: "e" for h in iota_s3.source.elements}),
)
rep = mackey_check(pt, iota_s3, iota_s3)
print("Mackey for S3, H = H' = <(12)>, X = point:")
print("  double cosets:", len(rep.double_cosets), " representatives:", rep.representatives)
print("  transport is an isomorphism:", rep.isomorphism)
print("  (Res Ind(pt) = S3/C2 splits into H'-orbits of sizes 1 and 2)")

# --- the adjunction -----------------------------------------------------------

print()
Y = build_can_min(G)
rep = adjunction_check(iota, pt_h, Y)
print("induction adjunction for Z/2 <= Z/4:")
print("  unit is a morphism:", rep.unit_morphism)
print("  counit is a morphism:", rep.counit_morphism)
print("  triangle identities:", rep.triangle_left, rep.triangle_right)
