import itertools
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from engelkit.zmatrix import (IntMatrix, RowLattice, bareiss_determinant, hermite_normal_form,
                              smith_normal_form, solve_congruence)


def minors_gcd(rows, k):
    """gcd of all k x k minors, computed by brute force."""
    m, n = len(rows), len(rows[0])
    g = 0
    for ri in itertools.combinations(range(m), k):
        for ci in itertools.combinations(range(n), k):
            g = gcd(g, bareiss_determinant([[rows[i][j] for j in ci] for i in ri]))
    return g


def naive_det(rows):
    n = len(rows)
    if n == 0:
        return 1
    return sum((-1) ** j * rows[0][j] * naive_det([r[:j] + r[j + 1:] for r in rows[1:]])
               for j in range(n))


matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


def test_hnf_identity():
    H, U = hermite_normal_form(IntMatrix.identity(2))
    assert H == IntMatrix.identity(2) and U == IntMatrix.identity(2)


def test_hnf_hand_example():
    H, U = hermite_normal_form(IntMatrix([[2, 4], [6, 8]]))
    assert H.tolist() == [[2, 0], [0, 4]]


def test_hnf_zero():
    H, U = hermite_normal_form(IntMatrix.zeros(2, 3))
    assert H.is_zero() and U == IntMatrix.identity(2)


def test_snf_examples():
    assert smith_normal_form(IntMatrix.diagonal([4, 6]))[0].tolist() == [[2, 0], [0, 12]]
    assert smith_normal_form(IntMatrix.zeros(2, 2))[0].is_zero()
    assert smith_normal_form(IntMatrix([[-5]]))[0].tolist() == [[5]]


def test_solve_congruence_examples():
    s = solve_congruence(IntMatrix([[2]]), [4], 0)
    assert s.particular == [2] and s.kernel == []
    assert solve_congruence(IntMatrix([[2]]), [1], 0) is None
    s = solve_congruence(IntMatrix([[2]]), [1], 3)
    assert s.particular == [2] and s.kernel == [[3]]


def test_bareiss_matches_cofactor():
    rows = [[3, -1, 4, 1], [5, 9, -2, 6], [5, 3, 5, -8], [9, 7, 9, 3]]
    assert bareiss_determinant(rows) == naive_det(rows)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_hnf_properties(rows):
    A = IntMatrix(rows)
    H, U = hermite_normal_form(A)
    assert U @ A == H
    assert abs(U.determinant()) == 1
    # echelon with positive pivots, reduced entries above pivots
    last = -1
    for i in range(H.rows):
        r = H.row(i)
        nz = [j for j, x in enumerate(r) if x]
        if not nz:
            assert all(not any(H.row(k)) for k in range(i, H.rows))
            break
        c = nz[0]
        assert c > last and r[c] > 0
        assert all(0 <= H[k, c] < r[c] for k in range(i))
        last = c


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_properties(rows):
    A = IntMatrix(rows)
    S, U, V = smith_normal_form(A)
    assert U @ A @ V == S
    assert abs(U.determinant()) == 1 and abs(V.determinant()) == 1
    d = [S[i, i] for i in range(min(S.rows, S.cols))]
    assert all(S[i, j] == 0 for i in range(S.rows) for j in range(S.cols) if i != j)
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)
    # determinantal divisors
    prod = 1
    for k, x in enumerate(d, start=1):
        if x == 0:
            break
        prod *= x
        assert prod == minors_gcd(rows, k)


@settings(max_examples=100, deadline=None)
@given(matrices, st.integers(0, 12), st.data())
def test_solve_congruence_solutions(rows, m, data):
    A = IntMatrix(rows)
    x0 = data.draw(st.lists(st.integers(-5, 5), min_size=A.cols, max_size=A.cols))
    b = A.apply(x0)
    sol = solve_congruence(A, b, m)
    assert sol is not None
    def ok(x):
        r = A.apply(x)
        return all((u - v) % m == 0 if m else u == v for u, v in zip(r, b))
    assert ok(sol.particular)
    for k in sol.kernel:
        assert ok([a + c for a, c in zip(sol.particular, k)])


def test_solve_congruence_kernel_spans():
    # all solutions mod 6 of 2x + 4y = 2
    A = IntMatrix([[2, 4]])
    sol = solve_congruence(A, [2], 6)
    sols = {(x, y) for x in range(6) for y in range(6) if (2 * x + 4 * y - 2) % 6 == 0}
    lat = RowLattice(2)
    for k in sol.kernel:
        lat.add(k)
    got = set()
    for x in range(6):
        for y in range(6):
            if lat.contains([x - sol.particular[0], y - sol.particular[1]]):
                got.add((x, y))
    assert got == sols


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_row_lattice_matches_hnf(rows):
    n = len(rows[0])
    lat = RowLattice(n)
    for r in rows:
        lat.add(r)
    ech = lat.echelon()
    H, _ = hermite_normal_form(IntMatrix(rows))
    dense = [[r.get(j, 0) for j in range(n)] for r in ech]
    assert dense == [r for r in H.tolist() if any(r)]
    for r in rows:
        assert lat.contains(r)


def test_row_lattice_full_rank_modular():
    lat = RowLattice(2)
    lat.add([4, 0])
    lat.add([0, 6])
    assert lat.determinant() == 24
    lat.add([10 ** 30 + 2, 10 ** 20 * 3])
    ech = lat.echelon()
    H, _ = hermite_normal_form(IntMatrix([[4, 0], [0, 6], [10 ** 30 + 2, 10 ** 20 * 3]]))
    assert [[r.get(j, 0) for j in range(2)] for r in ech] == [r for r in H.tolist() if any(r)]
    red = lat.reduce([5, 7])
    vec = [red.get(0, 0), red.get(1, 0)]
    assert lat.contains([5 - vec[0], 7 - vec[1]])
    for r in ech:
        c = min(r)
        assert 0 <= vec[c] < r[c]
