"""
Exact integer linear algebra: Smith normal form, kernel lattices, integral
solving, finitely presented abelian groups, and Morse-style reduction of
integer chain complexes.

Everything runs over Python ints, so there is no overflow and no rounding.
Dense routines (lists of lists) carry the unimodular transforms; the sparse
routines (dict-of-dict columns) are used for the large, very sparse boundary
matrices where only ranks and invariant factors are needed.
"""

from math import gcd


# ---------------------------------------------------------------------------
# dense matrices: list of rows, each a list of ints


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def eye(n):
    M = zeros(n, n)
    for i in range(n):
        M[i][i] = 1
    return M


def mat_mul(A, B):
    m, k = len(A), (len(A[0]) if A else 0)
    n = len(B[0]) if B else 0
    assert len(B) == k, "shape mismatch"
    out = zeros(m, n)
    for i in range(m):
        Ai = A[i]
        oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(n):
                    if Bt[j]:
                        oi[j] += a * Bt[j]
    return out


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v) if a and x) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def mat_eq(A, B):
    return A == B


def det(A):
    """Determinant by fraction-free Bareiss elimination (exact)."""
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]


# ---------------------------------------------------------------------------
# Smith normal form with transforms


def smith_normal_form(mat):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns (S, P, Q) with S = P * mat * Q, P and Q unimodular, S diagonal
    with nonnegative entries d_1 | d_2 | ... (zeros last).
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [[int(x) for x in row] for row in mat]
    P = eye(m)
    Q = eye(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        Ai, Aj = A[i], A[j]
        for k in range(n):
            if Aj[k]:
                Ai[k] -= q * Aj[k]
        Pi, Pj = P[i], P[j]
        for k in range(m):
            if Pj[k]:
                Pi[k] -= q * Pj[k]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in A:
            if r[j]:
                r[i] -= q * r[j]
        for r in Q:
            if r[j]:
                r[i] -= q * r[j]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in Q:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        P[i] = [-x for x in P[i]]

    def find_pivot(t):
        best = None
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                v = Ai[j]
                if v:
                    a = abs(v)
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            return best
        return best

    t = 0
    while True:
        piv = find_pivot(t)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != t:
            row_swap(pi, t)
        if pj != t:
            col_swap(pj, t)
        # clear column t and row t; pivot may change, so loop
        while True:
            pivot = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // pivot
                    row_op(i, t, q)
                    if A[i][t]:  # remainder became the smaller entry
                        row_swap(i, t)
                        done = False
                        break
            if not done:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // pivot
                    col_op(j, t, q)
                    if A[t][j]:
                        col_swap(j, t)
                        done = False
                        break
            if done:
                break
        t += 1
        if t >= min(m, n):
            break

    # sign normalization
    for i in range(min(m, n)):
        if A[i][i] < 0:
            row_neg(i)

    # enforce the divisibility chain d_i | d_j for i < j
    r = sum(1 for i in range(min(m, n)) if A[i][i])
    changed = True
    while changed:
        changed = False
        for i in range(r):
            for j in range(i + 1, r):
                a, b = A[i][i], A[j][j]
                if b % a:
                    # mix the two diagonal positions and re-reduce the 2x2
                    col_op(i, j, -1)  # col_i += col_j  -> entry b appears at (j, i)
                    g = gcd(a, b)
                    # euclid on rows i, j within columns i, j
                    while A[j][i]:
                        q = A[i][i] // A[j][i]
                        row_op(i, j, q)
                        row_swap(i, j)
                    # now A[i][i] = g (up to sign), clear fill at (i, j)
                    if A[i][i] < 0:
                        row_neg(i)
                    if A[i][j]:
                        col_op(j, i, A[i][j] // A[i][i])
                    if A[j][j] < 0:
                        row_neg(j)
                    assert abs(A[i][i]) == g
                    changed = True
    return A, P, Q


def diagonal_of(S):
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]


def invariant_factors(mat):
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    S, _, _ = smith_normal_form(mat)
    return [d for d in diagonal_of(S) if d]


def rank(mat):
    return len(invariant_factors(mat))


def kernel_basis(mat):
    """Basis of the lattice {x : mat @ x = 0}, as a list of column vectors."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    if n == 0:
        return []
    S, P, Q = smith_normal_form(mat)
    r = len([d for d in diagonal_of(S) if d])
    return [[Q[i][j] for i in range(n)] for j in range(r, n)]


def solve_int(mat, b):
    """One integer solution x of mat @ x = b, or None if none exists."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    S, P, Q = smith_normal_form(mat)
    c = mat_vec(P, b)
    d = diagonal_of(S)
    r = len([x for x in d if x])
    y = [0] * n
    for i in range(m):
        if i < r:
            if c[i] % d[i]:
                return None
            y[i] = c[i] // d[i]
        elif c[i]:
            return None
    return mat_vec(Q, y) if n else ([] if all(x == 0 for x in b) else None)


class ColumnSolver:
    """Repeatedly solve M @ x = b for a fixed integer matrix M."""

    def __init__(self, mat):
        self.m = len(mat)
        self.n = len(mat[0]) if self.m else 0
        self.S, self.P, self.Q = smith_normal_form(mat) if self.m else ([], [], eye(0))
        self.d = diagonal_of(self.S)
        self.r = len([x for x in self.d if x])

    def solve(self, b):
        if self.m == 0:
            return [0] * self.n
        c = mat_vec(self.P, b)
        y = [0] * self.n
        for i in range(self.m):
            if i < self.r:
                if c[i] % self.d[i]:
                    return None
                y[i] = c[i] // self.d[i]
            elif c[i]:
                return None
        return mat_vec(self.Q, y)


def columns_to_matrix(cols, nrows):
    """Stack column vectors into an nrows x len(cols) dense matrix."""
    M = zeros(nrows, len(cols))
    for j, col in enumerate(cols):
        for i, v in enumerate(col):
            M[i][j] = v
    return M


def solution_lattice(G, B):
    """Generators of the lattice {x : G @ x lies in the column lattice of B}.

    G is m x a, B is m x k (dense).  Returns a list of length-a vectors.
    """
    a = len(G[0]) if G else 0
    k = len(B[0]) if B else 0
    m = len(G)
    if a == 0:
        return []
    stacked = [G[i] + [B[i][j] for j in range(k)] for i in range(m)]
    gens = []
    for vec in kernel_basis(stacked):
        x = vec[:a]
        if any(x):
            gens.append(x)
    return gens


def inverse_unimodular(M):
    """Inverse of a square integer matrix with determinant +-1."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("not square")
    S, P, Q = smith_normal_form(M)
    if diagonal_of(S) != [1] * n:
        raise ValueError("matrix is not unimodular")
    return mat_mul(Q, P)


# ---------------------------------------------------------------------------
# sparse Smith form (invariant factors only)


def invariant_factors_sparse(cols, nrows=None):
    """Invariant factors of a sparse integer matrix.

    `cols` maps column keys to {row key: value} dicts.  Unit pivots are
    eliminated exactly with a dirty-column worklist (no global rescans);
    whatever residue without unit entries remains is handed to the dense
    routine.
    """
    cols = {c: dict(col) for c, col in cols.items() if col}
    rows = {}
    for c, col in cols.items():
        for r, v in col.items():
            rows.setdefault(r, set()).add(c)

    def kill_entry(r, c):
        col = cols[c]
        del col[r]
        rows[r].discard(c)
        if not rows[r]:
            del rows[r]
        if not col:
            del cols[c]

    ones = 0
    dirty = list(cols)
    in_dirty = set(dirty)
    while dirty:
        c = dirty.pop()
        in_dirty.discard(c)
        col = cols.get(c)
        if not col:
            continue
        best = None
        for r, v in col.items():
            if v in (1, -1):
                fill = (len(col) - 1) * (len(rows[r]) - 1)
                if best is None or fill < best[0]:
                    best = (fill, r, v)
                if fill == 0:
                    break
        if best is None:
            continue
        _, r, eps = best
        pivot_col = dict(col)
        for c2 in list(rows.get(r, ())):
            if c2 == c:
                continue
            q = cols[c2][r] * eps  # cols[c2][r] / eps with eps = +-1
            col2 = cols[c2]
            for r2, v in pivot_col.items():
                if r2 == r:
                    continue
                nv = col2.get(r2, 0) - q * v
                if nv:
                    col2[r2] = nv
                    rows.setdefault(r2, set()).add(c2)
                else:
                    if r2 in col2:
                        del col2[r2]
                        rows[r2].discard(c2)
                        if not rows[r2]:
                            del rows[r2]
            kill_entry(r, c2)
            if c2 in cols and c2 not in in_dirty:
                dirty.append(c2)
                in_dirty.add(c2)
        for r2 in list(pivot_col):
            if r2 != r and c in cols and r2 in cols[c]:
                kill_entry(r2, c)
        if c in cols and r in cols.get(c, {}):
            kill_entry(r, c)
        ones += 1

    if not cols:
        return [1] * ones
    row_index = {r: i for i, r in enumerate(sorted(rows, key=repr))}
    col_index = {c: j for j, c in enumerate(sorted(cols, key=repr))}
    dense = zeros(len(row_index), len(col_index))
    for c, col in cols.items():
        for r, v in col.items():
            dense[row_index[r]][col_index[c]] = v
    return [1] * ones + invariant_factors(dense)


def sparse_rank(cols):
    return len(invariant_factors_sparse(cols))


# ---------------------------------------------------------------------------
# finitely presented abelian groups


class FPAbelian:
    """An abelian group presented as Z^n modulo the column lattice of rels.

    rels is a list of length-n relation vectors.  The canonical form
    (free rank, torsion divisor chain) is what tests compare.
    """

    def __init__(self, ngens, rels=()):
        self.ngens = ngens
        self.rels = [list(r) for r in rels]
        for r in self.rels:
            assert len(r) == ngens

    @property
    def rel_matrix(self):
        return columns_to_matrix(self.rels, self.ngens)

    def canonical(self):
        if self.ngens == 0:
            return (0, ())
        facs = invariant_factors(self.rel_matrix) if self.rels else []
        torsion = tuple(d for d in facs if d > 1)
        return (self.ngens - len(facs), torsion)

    def is_trivial(self):
        rank_, torsion = self.canonical()
        return rank_ == 0 and not torsion

    def contains_in_relations(self, vec):
        """Does vec lie in the relation lattice (i.e. represent 0)?"""
        if self.ngens == 0:
            return True
        if not self.rels:
            return all(x == 0 for x in vec)
        return solve_int(self.rel_matrix, list(vec)) is not None

    def quotient_by(self, extra_cols):
        return FPAbelian(self.ngens, self.rels + [list(c) for c in extra_cols])

    def __repr__(self):
        r, t = self.canonical()
        return "FPAbelian(rank=%d, torsion=%s)" % (r, list(t))


def group_str(canonical_form):
    """Pretty form like 'Z^2 + Z/2 + Z/4' for a (rank, torsion) pair."""
    r, torsion = canonical_form
    parts = []
    if r == 1:
        parts.append("Z")
    elif r > 1:
        parts.append("Z^%d" % r)
    parts.extend("Z/%d" % d for d in torsion)
    return " + ".join(parts) if parts else "0"


def maps_equal_mod(target, M1, M2):
    """Are two maps into a presented group equal (columnwise, mod relations)?"""
    n = len(M1[0]) if M1 and M1[0] is not None else 0
    if len(M1) != len(M2):
        return False
    cols1 = transpose(M1) if M1 else []
    cols2 = transpose(M2) if M2 else []
    if len(cols1) != len(cols2):
        return False
    for c1, c2 in zip(cols1, cols2):
        diff = [a - b for a, b in zip(c1, c2)]
        if not target.contains_in_relations(diff):
            return False
    return True


def subgroup_canonical(gens, ambient):
    """Canonical form of the subgroup of `ambient` generated by gens.

    gens: list of vectors in the ambient generators.  The subgroup is
    (lattice of gens + relations) / relations.
    """
    if not gens:
        return (0, ())
    m = len(gens)
    L = columns_to_matrix(gens, ambient.ngens)
    rel_gens = solution_lattice(L, ambient.rel_matrix if ambient.rels else zeros(ambient.ngens, 0))
    return FPAbelian(m, rel_gens).canonical()


def kernel_subgroup_gens(G, source, target):
    """Generators (in source coordinates) of ker(G: source -> target)."""
    if source.ngens == 0:
        return []
    B = target.rel_matrix if target.rels else zeros(target.ngens, 0)
    gens = solution_lattice(G, B)
    gens.extend(source.rels)
    return gens


# ---------------------------------------------------------------------------
# chain complexes of free Z-modules, with Morse-style reduction


class SparseComplex:
    """Boundary data of a based integer chain complex up to degree N.

    boundaries[n] (1 <= n <= N) is a sparse matrix sending degree-n
    generators to degree-(n-1) chains: {col: {row: value}}.
    gens[n] is the list of generator keys in degree n.
    """

    def __init__(self, gens, boundaries):
        self.N = len(gens) - 1
        self.gens = [list(g) for g in gens]
        self.boundaries = [None] + [
            {c: dict(col) for c, col in bd.items()} for bd in boundaries
        ]
        assert len(self.boundaries) == self.N + 1

    def dims(self):
        return [len(g) for g in self.gens]

    def check_dd_zero(self):
        for n in range(2, self.N + 1):
            lower = self.boundaries[n - 1]
            for c, col in self.boundaries[n].items():
                acc = {}
                for r, v in col.items():
                    for r2, v2 in lower.get(r, {}).items():
                        acc[r2] = acc.get(r2, 0) + v * v2
                if any(acc.values()):
                    raise AssertionError("dd != 0 at degree %d, column %r" % (n, c))
        return True

    def boundary_dense(self, n):
        """Dense matrix of boundary_n : C_n -> C_{n-1} in the listed bases."""
        rows = {g: i for i, g in enumerate(self.gens[n - 1])}
        cols = {g: j for j, g in enumerate(self.gens[n])}
        M = zeros(len(rows), len(cols))
        for c, col in self.boundaries[n].items():
            for r, v in col.items():
                M[rows[r]][cols[c]] = v
        return M


def reduce_complex(cx, track=False):
    """Cancel unit-pivot pairs of a SparseComplex until none remain.

    Homology is preserved.  With track=True also returns, per degree,
    the inclusion iota (reduced generator -> chain in original basis) and
    projection pi (original generator -> chain in reduced basis), both as
    dicts of sparse vectors; pi o iota = id is asserted.
    """
    cx.check_dd_zero()
    N = cx.N
    gens = [dict.fromkeys(g) for g in cx.gens]  # ordered sets
    cols = [None] + [
        {c: dict(col) for c, col in cx.boundaries[n].items()} for n in range(1, N + 1)
    ]
    rows = [None] + [{} for _ in range(N)]
    for n in range(1, N + 1):
        for c, col in cols[n].items():
            for r, v in col.items():
                rows[n].setdefault(r, {})[c] = v

    if track:
        iota = [{g: {g: 1} for g in gs} for gs in gens]
        pi = [{g: {g: 1} for g in gs} for gs in gens]

    def remove_entry(n, r, c):
        col = cols[n].get(c)
        if col and r in col:
            del col[r]
            if not col:
                del cols[n][c]
        row = rows[n].get(r)
        if row and c in row:
            del row[c]
            if not row:
                del rows[n][r]

    def set_entry(n, r, c, v):
        if v:
            cols[n].setdefault(c, {})[r] = v
            rows[n].setdefault(r, {})[c] = v
        else:
            remove_entry(n, r, c)

    def find_unit(n):
        best = None
        for c, col in cols[n].items():
            for r, v in col.items():
                if v in (1, -1):
                    fill = (len(col) - 1) * (len(rows[n][r]) - 1)
                    if best is None or fill < best[0]:
                        best = (fill, r, c, v)
                    if fill == 0:
                        return best
        return best

    progress = True
    while progress:
        progress = False
        for n in range(1, N + 1):
            while True:
                found = find_unit(n)
                if found is None:
                    break
                _, r, c, eps = found
                progress = True
                pivot_col = dict(cols[n][c])   # boundary of c
                pivot_row = dict(rows[n][r])   # occurrences of r

                if track:
                    ic = iota[n].pop(c)
                    for y, vy in pivot_row.items():
                        if y == c:
                            continue
                        q = vy * eps
                        tgt = iota[n][y]
                        for k, v in ic.items():
                            nv = tgt.get(k, 0) - q * v
                            if nv:
                                tgt[k] = nv
                            elif k in tgt:
                                del tgt[k]
                    pr = pi[n - 1].pop(r)
                    for x, vx in pivot_col.items():
                        if x == r:
                            continue
                        q = vx * eps
                        tgt = pi[n - 1][x]
                        for k, v in pr.items():
                            nv = tgt.get(k, 0) - q * v
                            if nv:
                                tgt[k] = nv
                            elif k in tgt:
                                del tgt[k]
                    iota[n - 1].pop(r, None)
                    pi[n].pop(c, None)

                # d[x,y] -= d[x,c] * d[r,y] / eps  for remaining x, y
                for y, vy in pivot_row.items():
                    if y == c:
                        continue
                    q = vy * eps
                    for x, vx in pivot_col.items():
                        if x == r:
                            continue
                        cur = cols[n].get(y, {}).get(x, 0)
                        set_entry(n, x, y, cur - q * vx)
                # remove pivot row/col in degree n
                for y in list(pivot_row):
                    remove_entry(n, r, y)
                for x in list(pivot_col):
                    remove_entry(n, x, c)
                # remove r as a column of boundary_{n-1} and c as a row of boundary_{n+1}
                if n - 1 >= 1 and r in cols[n - 1]:
                    for x in list(cols[n - 1][r]):
                        remove_entry(n - 1, x, r)
                if n + 1 <= N and c in rows[n + 1]:
                    for y in list(rows[n + 1][c]):
                        remove_entry(n + 1, c, y)
                del gens[n][c]
                del gens[n - 1][r]

    reduced = SparseComplex(
        [list(g) for g in gens],
        [cols[n] for n in range(1, N + 1)],
    )
    reduced.check_dd_zero()
    if track:
        # pi o iota = id on reduced generators; pi[n][g] is the row of the
        # projection matrix belonging to the reduced generator g
        for n in range(N + 1):
            for g in reduced.gens[n]:
                ig = iota[n][g]
                acc = {}
                for g2, row in pi[n].items():
                    s = sum(v * row.get(k, 0) for k, v in ig.items())
                    if s:
                        acc[g2] = s
                assert acc == {g: 1}, "pi o iota != id at degree %d" % n
        return reduced, iota, pi
    return reduced
