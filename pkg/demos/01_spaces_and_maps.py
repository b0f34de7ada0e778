"""Building finite equivariant coarse spaces and certifying maps.

Walks through: entourage algebra, the saturated maximal entourage, space
validation, and the three-valued equivalence search.
"""

from coarsex import (
    Action,
    SpaceMap,
    analyze_map,
    build_max_max,
    build_min_min,
    combine_tensor,
    cyclic_group,
    entourage_algebra,
    make_space,
    validate_space,
)
from coarsex.spaces import diagonal

# --- entourage algebra on a 5-point band -----------------------------------

carrier = tuple(str(i) for i in range(5))
band1 = frozenset(
    (a, b) for a in carrier for b in carrier if abs(int(a) - int(b)) <= 1
)
print("thicken the band around {2}:",
      sorted(entourage_algebra("thicken", band1, {"2"})))
print("band o band reaches distance 2:",
      ("0", "2") in entourage_algebra("compose", band1, band1))

# saturation of a single generator is the coarse-component relation
act = Action.trivial(("0", "1", "2"))
sat = entourage_algebra("saturate", [frozenset([("0", "1")])], action=act)
print("saturate {(0,1)} on three points:", sorted(sat))

# --- a band space, validated ------------------------------------------------

space = make_space(carrier, Action.trivial(carrier), [band1],
                   [frozenset([p]) for p in carrier], name="band5")
print()
print(space)
print(validate_space(space))

# --- the swap space: saturation repairs a lopsided generator ----------------

G = cyclic_group(2)
two = ("a", "b")
swap = Action(G, two, {"e": {"a": "a", "b": "b"}, "g": {"a": "b", "b": "a"}})
lopsided = make_space(two, swap, [frozenset([("a", "a")])],
                      [frozenset(["a"]), frozenset(["b"])])
print()
print("swap space from the generator {(a,a)} alone:")
print("  (b,b) added by saturation:", ("b", "b") in lopsided.coarse_max)

# --- equivalences: projection off a bounded factor --------------------------

X = build_min_min(carrier)
T = combine_tensor(build_max_max(("0", "1")), X)
proj = SpaceMap.from_dict(T, X, {(a, x): x for (a, x) in T.carrier})
# ten carrier points: the default search bound of 8 would answer "unknown"
report = analyze_map(proj, search_bound=12)
print()
print("projection {0,1}_max,max (x) X -> X:")
print("  morphism:", report.is_morphism, " equivalence:", report.equivalence)
print("  found inverse sends 0 to:", report.inverse("0") if report.inverse else None)

# --- an inclusion with no equivariant inverse -------------------------------

three = ("a", "b", "c")
act3 = Action(G, three, {"e": {p: p for p in three},
                         "g": {"a": "b", "b": "a", "c": "c"}})
big = make_space(three, act3, [diagonal(three)], [frozenset([p]) for p in three])
small = make_space(two, swap, [diagonal(two)], [frozenset([p]) for p in two])
inc = SpaceMap.from_dict(small, big, {"a": "a", "b": "b"})
print()
print("Z/2-inclusion {a,b} -> {a,b,c} with c fixed, minimal structures:")
print("  equivalence:", analyze_map(inc).equivalence,
      "(the fixed point c has no equivariant image)")
