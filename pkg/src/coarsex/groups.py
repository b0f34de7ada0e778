"""
Finite groups given by explicit multiplication tables, and homomorphisms
between them.

Elements are opaque strings.  All group-theoretic data (inverses, subgroups,
normalizers, double cosets) is found by plain enumeration; every group in
this package is tiny.
"""

from functools import cached_property
from itertools import product


class FiniteGroup:
    """A finite group: elements plus a full multiplication table.

    The table is a dict (a, b) -> a*b.  Associativity, identity and inverse
    laws are checked on construction.
    """

    def __init__(self, elements, table, name=None):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate group elements")
        self.table = dict(table)
        self.name = name or "G%d" % len(self.elements)
        self._check()

    def _check(self):
        els = self.elements
        for a, b in product(els, repeat=2):
            if (a, b) not in self.table or self.table[a, b] not in els:
                raise ValueError("multiplication table is not total on %r" % ((a, b),))
        identity = None
        for e in els:
            if all(self.table[e, a] == a and self.table[a, e] == a for a in els):
                identity = e
                break
        if identity is None:
            raise ValueError("no identity element")
        self.identity = identity
        inv = {}
        for a in els:
            for b in els:
                if self.table[a, b] == identity and self.table[b, a] == identity:
                    inv[a] = b
                    break
            else:
                raise ValueError("element %r has no inverse" % a)
        self._inv = inv
        for a, b, c in product(els, repeat=3):
            if self.table[self.table[a, b], c] != self.table[a, self.table[b, c]]:
                raise ValueError("associativity fails at %r" % ((a, b, c),))

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self._inv[a]

    @property
    def order(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return "FiniteGroup(%s, order %d)" % (self.name, self.order)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroup)
            and self.elements == other.elements
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.elements, tuple(sorted(self.table.items()))))

    def is_trivial(self):
        return self.order == 1

    def subgroup_closure(self, gens):
        """Smallest subset containing gens, the identity, closed under * and inverse."""
        els = {self.identity}
        els.update(gens)
        frontier = list(els)
        while frontier:
            new = []
            for a in list(els):
                for b in frontier:
                    for c in (self.table[a, b], self.table[b, a]):
                        if c not in els:
                            els.add(c)
                            new.append(c)
            for a in frontier:
                c = self._inv[a]
                if c not in els:
                    els.add(c)
                    new.append(c)
            frontier = new
        return frozenset(els)

    @cached_property
    def subgroups(self):
        """All subgroups, as a sorted list of frozensets of elements."""
        found = set()
        els = self.elements
        # closures of subsets of size <= 2 generate every subgroup of a
        # group of order <= 8; go to size 3 to stay safe for S3 x C2 scale
        from itertools import combinations

        for k in range(0, 3):
            for gens in combinations(els, k):
                found.add(self.subgroup_closure(gens))
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def normalizer(self, sub):
        """Normalizer of the subgroup given as an element set."""
        sub = frozenset(sub)
        out = []
        for g in self.elements:
            gi = self._inv[g]
            if frozenset(self.table[self.table[g, h], gi] for h in sub) == sub:
                out.append(g)
        return frozenset(out)

    def cosets(self, sub, side="left"):
        """Partition into cosets of a subgroup; each coset a frozenset."""
        sub = frozenset(sub)
        seen = set()
        out = []
        for g in self.elements:
            if g in seen:
                continue
            if side == "left":
                coset = frozenset(self.table[g, h] for h in sub)
            else:
                coset = frozenset(self.table[h, g] for h in sub)
            out.append(coset)
            seen.update(coset)
        return out

    def double_cosets(self, left_sub, right_sub):
        """Double cosets L\\G/R, each a frozenset; order by least member."""
        left_sub, right_sub = frozenset(left_sub), frozenset(right_sub)
        seen = set()
        out = []
        for g in self.elements:
            if g in seen:
                continue
            dc = frozenset(
                self.table[self.table[a, g], b]
                for a in left_sub
                for b in right_sub
            )
            out.append(dc)
            seen.update(dc)
        return out


class GroupHom:
    """A homomorphism between finite groups, as an explicit element map."""

    def __init__(self, source, target, mapping):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        for a in source.elements:
            if a not in self.mapping or self.mapping[a] not in target.elements:
                raise ValueError("element map not total at %r" % a)
        for a, b in product(source.elements, repeat=2):
            lhs = self.mapping[source.mul(a, b)]
            rhs = target.mul(self.mapping[a], self.mapping[b])
            if lhs != rhs:
                raise ValueError("not a homomorphism at %r" % ((a, b),))
        self.kernel = frozenset(
            a for a in source.elements if self.mapping[a] == target.identity
        )
        self.image = frozenset(self.mapping.values())

    def __call__(self, a):
        return self.mapping[a]

    def is_injective(self):
        return len(self.kernel) == 1

    def __repr__(self):
        return "GroupHom(%s -> %s)" % (self.source.name, self.target.name)


def identity_hom(group):
    return GroupHom(group, group, {a: a for a in group.elements})


def inclusion_hom(sub_elements, group, name=None):
    """Subgroup inclusion, with the subgroup packaged as its own FiniteGroup."""
    sub = frozenset(sub_elements)
    table = {(a, b): group.mul(a, b) for a in sub for b in sub}
    H = FiniteGroup(sorted(sub), table, name=name or ("sub(%s)" % group.name))
    return GroupHom(H, group, {a: a for a in H.elements})


def trivial_group():
    return FiniteGroup(["e"], {("e", "e"): "e"}, name="1")


def cyclic_group(n):
    """Z/n with elements e, g, g2, ..."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return trivial_group()
    names = ["e"] + ["g" if k == 1 else "g%d" % k for k in range(1, n)]
    table = {}
    for i in range(n):
        for j in range(n):
            table[names[i], names[j]] = names[(i + j) % n]
    return FiniteGroup(names, table, name="Z%d" % n)


_S3_PERMS = {
    "e": (0, 1, 2),
    "(12)": (1, 0, 2),
    "(13)": (2, 1, 0),
    "(23)": (0, 2, 1),
    "(123)": (1, 2, 0),
    "(132)": (2, 0, 1),
}


def symmetric_group_3():
    """S3 acting on {0,1,2}; composition convention (ab)(x) = a(b(x))."""
    names = list(_S3_PERMS)
    def compose(p, q):
        return tuple(p[q[i]] for i in range(3))
    by_perm = {v: k for k, v in _S3_PERMS.items()}
    table = {}
    for a in names:
        for b in names:
            table[a, b] = by_perm[compose(_S3_PERMS[a], _S3_PERMS[b])]
    return FiniteGroup(names, table, name="S3")


GROUP_MENU = {
    "1": trivial_group,
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "Z4": lambda: cyclic_group(4),
    "S3": symmetric_group_3,
}


def group_by_name(name):
    try:
        return GROUP_MENU[name]()
    except KeyError:
        raise ValueError("unknown group %r (choose from %s)" % (name, sorted(GROUP_MENU)))
