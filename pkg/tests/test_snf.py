"""Exercise the exact integer linear algebra kernel."""

import random

from hypothesis import given, settings, strategies as st

from coarsex import snf


def check_snf(M):
    S, P, Q = snf.smith_normal_form(M)
    m, n = len(M), len(M[0]) if M else 0
    assert snf.mat_eq(S, snf.mat_mul(snf.mat_mul(P, M), Q))
    assert abs(snf.det(P)) == 1
    assert abs(snf.det(Q)) == 1
    diag = snf.diagonal_of(S)
    for i in range(m):
        for j in range(n):
            if i != j:
                assert S[i][j] == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    # zeros trail the nonzero part
    assert diag[: len(nz)] == nz
    return diag


def test_examples_hand_computed():
    assert check_snf([[2, 0], [0, 3]]) == [1, 6]
    assert check_snf([[0, 0], [0, 0]]) == [0, 0]
    assert check_snf([[1, 1], [1, 1]]) == [1, 0]


def test_zero_and_empty_shapes():
    S, P, Q = snf.smith_normal_form([[0, 0, 0]])
    assert S == [[0, 0, 0]]
    check_snf([[5]])
    check_snf([[0], [7], [0]])


small_ints = st.integers(min_value=-9, max_value=9)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=1, max_value=5),
    st.data(),
)
def test_snf_random(m, n, data):
    M = [[data.draw(small_ints) for _ in range(n)] for _ in range(m)]
    check_snf(M)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=1, max_value=5),
    st.data(),
)
def test_kernel_and_solve(m, n, data):
    M = [[data.draw(small_ints) for _ in range(n)] for _ in range(m)]
    K = snf.kernel_basis(M)
    for col in K:
        assert all(v == 0 for v in snf.mat_vec(M, col))
    # kernel basis spans: rank(M) + len(K) == n
    assert snf.rank(M) + len(K) == n
    # solving M x = M v recovers a valid solution
    v = [data.draw(small_ints) for _ in range(n)]
    b = snf.mat_vec(M, v)
    x = snf.solve_int(M, b)
    assert x is not None
    assert snf.mat_vec(M, x) == b


def test_solve_unsolvable():
    assert snf.solve_int([[2]], [1]) is None
    assert snf.solve_int([[2, 0], [0, 0]], [2, 1]) is None


def test_fp_abelian_canonical():
    G = snf.FPAbelian(2, [[2, 0], [0, 3]])
    assert G.canonical() == (0, (6,))
    H = snf.FPAbelian(3, [[2, 0, 0]])
    assert H.canonical() == (2, (2,))
    assert snf.FPAbelian(0).canonical() == (0, ())
    assert snf.group_str((1, (2,))) == "Z + Z/2"
    assert snf.group_str((0, ())) == "0"


def test_sparse_invariant_factors_matches_dense():
    rng = random.Random(7)
    for _ in range(25):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
        cols = {}
        for j in range(n):
            col = {i: M[i][j] for i in range(m) if M[i][j]}
            if col:
                cols[j] = col
        assert snf.invariant_factors_sparse(cols) == snf.invariant_factors(M)


def _complex_homology_via_dense(gens, boundaries, n):
    cx = snf.SparseComplex(gens, boundaries)
    c_n = len(cx.gens[n])
    if n >= 1 and len(cx.gens[n - 1]) > 0:
        K = snf.kernel_basis(cx.boundary_dense(n))
    else:
        K = [[1 if i == j else 0 for i in range(c_n)] for j in range(c_n)]
    rels = []
    if n + 1 <= cx.N and K:
        Kmat = snf.columns_to_matrix(K, c_n)
        solver = snf.ColumnSolver(Kmat)
        for col in snf.transpose(cx.boundary_dense(n + 1)) if cx.gens[n + 1] else []:
            sol = solver.solve(col)
            assert sol is not None
            rels.append(sol)
    return snf.FPAbelian(len(K), rels).canonical()


def test_reduce_complex_preserves_homology():
    # circle-like complex: two vertices, two edges, no 2-cells
    gens = [["v0", "v1"], ["a", "b"]]
    boundaries = [{"a": {"v0": -1, "v1": 1}, "b": {"v0": -1, "v1": 1}}]
    for n, expect in [(0, (1, ())), (1, (1, ()))]:
        assert _complex_homology_via_dense(gens, boundaries, n) == expect
    reduced, iota, pi = snf.reduce_complex(snf.SparseComplex(gens, boundaries), track=True)
    for n, expect in [(0, (1, ())), (1, (1, ()))]:
        assert _complex_homology_via_dense(reduced.gens, reduced.boundaries[1:], n) == expect


def test_reduce_complex_torsion():
    # projective-plane-like: Z/2 in degree 1
    gens = [["v"], ["e"], ["f"]]
    boundaries = [{"e": {}}, {"f": {"e": 2}}]
    cx = snf.SparseComplex(gens, boundaries)
    reduced = snf.reduce_complex(cx)
    assert _complex_homology_via_dense(reduced.gens, reduced.boundaries[1:], 1) == (0, (2,))
    assert _complex_homology_via_dense(reduced.gens, reduced.boundaries[1:], 0) == (1, ())


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_reduce_complex_random(data):
    # random 3-term complex built to satisfy dd = 0: boundary_2 maps into ker(boundary_1)
    n0 = data.draw(st.integers(min_value=1, max_value=4))
    n1 = data.draw(st.integers(min_value=1, max_value=5))
    d1 = [[data.draw(small_ints) for _ in range(n1)] for _ in range(n0)]
    K = snf.kernel_basis(d1)
    n2 = data.draw(st.integers(min_value=0, max_value=3))
    cols2 = []
    for _ in range(n2):
        coeffs = [data.draw(st.integers(min_value=-2, max_value=2)) for _ in K]
        col = [0] * n1
        for c, k in zip(coeffs, K):
            for i in range(n1):
                col[i] += c * k[i]
        cols2.append(col)
    gens = [list(range(n0)), [("e", j) for j in range(n1)], [("f", j) for j in range(n2)]]
    b1 = {("e", j): {i: d1[i][j] for i in range(n0) if d1[i][j]} for j in range(n1)}
    b2 = {
        ("f", j): {("e", i): cols2[j][i] for i in range(n1) if cols2[j][i]}
        for j in range(n2)
    }
    cx = snf.SparseComplex(gens, [b1, b2])
    cx.check_dd_zero()
    reduced, iota, pi = snf.reduce_complex(cx, track=True)
    for n in range(3):
        assert _complex_homology_via_dense(
            reduced.gens, reduced.boundaries[1:], n
        ) == _complex_homology_via_dense(gens, [b1, b2], n)
