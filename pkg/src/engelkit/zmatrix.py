"""Exact integer linear algebra: Hermite and Smith normal forms.

All routines work over Python integers, so results are exact.  The Hermite
form is row-style: ``U @ A == H`` with ``U`` unimodular and ``H`` in row
echelon form (positive pivots, entries above a pivot reduced into
``[0, pivot)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class IntMatrix:
    """Dense integer matrix with fixed dimensions."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence[int]] = (), rows: Optional[int] = None,
                 cols: Optional[int] = None):
        data = [list(map(int, r)) for r in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("ragged or mis-sized matrix data")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> List[int]:
        return list(self._data[i])

    def column(self, j: int) -> List[int]:
        return [r[j] for r in self._data]

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self._data]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([list(c) for c in zip(*self._data)] if self.rows else [],
                         self.cols, self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = list(zip(*other._data)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(r, c)) for c in ot] for r in self._data]
        return IntMatrix(out, self.rows, other.cols)

    def apply(self, vec: Sequence[int]) -> List[int]:
        """Matrix times column vector."""
        return [sum(a * b for a, b in zip(r, vec)) for r in self._data]

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self._data == other._data)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self._data))))

    def __repr__(self) -> str:
        return f"IntMatrix({self._data!r})"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_determinant(self._data)


def bareiss_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g >= 0.

    When ``a`` divides ``b`` the trivial combination is returned, which keeps
    eliminations from disturbing an already good pivot.
    """
    if a and b % a == 0:
        return (a, 1, 0) if a > 0 else (-a, -1, 0)
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _combine_rows(h, u, i, k, col):
    """Replace rows i,k so that row i holds gcd at ``col`` and row k holds 0 there."""
    a, b = h[i][col], h[k][col]
    g, s, t = _xgcd(a, b)
    x, y = a // g, b // g
    ri, rk = h[i], h[k]
    h[i] = [s * p + t * q for p, q in zip(ri, rk)]
    h[k] = [-y * p + x * q for p, q in zip(ri, rk)]
    ui, uk = u[i], u[k]
    u[i] = [s * p + t * q for p, q in zip(ui, uk)]
    u[k] = [-y * p + x * q for p, q in zip(ui, uk)]


def hermite_normal_form(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.  Returns ``(H, U)`` with ``U @ A == H``."""
    m, n = A.rows, A.cols
    h = A.tolist()
    u = IntMatrix.identity(m).tolist()
    r = 0
    for col in range(n):
        if r == m:
            break
        for k in range(r + 1, m):
            if h[k][col] != 0:
                _combine_rows(h, u, r, k, col)
        if h[r][col] == 0:
            continue
        if h[r][col] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][col]
        for k in range(r):
            q = h[k][col] // piv
            if q:
                h[k] = [x - q * y for x, y in zip(h[k], h[r])]
                u[k] = [x - q * y for x, y in zip(u[k], u[r])]
        r += 1
    return IntMatrix(h, m, n), IntMatrix(u, m, m)


def smith_normal_form(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form.  Returns ``(S, U, V)`` with ``U @ A @ V == S``."""
    m, n = A.rows, A.cols
    s = A.tolist()
    u = IntMatrix.identity(m).tolist()
    v = IntMatrix.identity(n).tolist()

    def col_op(j, k, a, b, c, d):
        # columns (j, k) <- (a*cj + b*ck, c*cj + d*ck)
        for mat in (s, v):
            for row in mat:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + d * y

    def row_op(i, k, a, b, c, d):
        for mat in (s, u):
            x, y = mat[i], mat[k]
            mat[i] = [a * p + b * q for p, q in zip(x, y)]
            mat[k] = [c * p + d * q for p, q in zip(x, y)]

    t = 0
    while t < min(m, n):
        # choose the smallest nonzero entry of the remaining block as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            s[t], s[i] = s[i], s[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            col_op(t, j, 0, 1, 1, 0)
        while True:
            done = True
            for k in range(t + 1, m):
                if s[k][t]:
                    a, b = s[t][t], s[k][t]
                    g, x, y = _xgcd(a, b)
                    row_op(t, k, x, y, -b // g, a // g)
            for k in range(t + 1, n):
                if s[t][k]:
                    a, b = s[t][t], s[t][k]
                    g, x, y = _xgcd(a, b)
                    col_op(t, k, x, y, -b // g, a // g)
                    done = False
            if done and all(s[k][t] == 0 for k in range(t + 1, m)):
                piv = s[t][t]
                bad = next(((k, l) for k in range(t + 1, m) for l in range(t + 1, n)
                            if s[k][l] % piv), None)
                if bad is None:
                    break
                # fold the offending row into the pivot row and repeat
                row_op(t, bad[0], 1, 1, 0, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return IntMatrix(s, m, n), IntMatrix(u, m, m), IntMatrix(v, n, n)


def smith_invariants(A: IntMatrix) -> List[int]:
    S, _, _ = smith_normal_form(A)
    return [S[i, i] for i in range(min(S.rows, S.cols))]


@dataclass
class CongruenceSolution:
    """Solutions of ``A x = b (mod m)``: ``particular + span(kernel)``."""

    particular: List[int]
    kernel: List[List[int]]
    modulus: int = 0


def solve_congruence(A: IntMatrix, b: Sequence[int], m: int = 0) -> Optional[CongruenceSolution]:
    """Solve ``A x = b`` over Z (``m == 0``) or modulo ``m``.

    Returns ``None`` when the system has no solution.  For ``m > 0`` the
    kernel lattice contains ``m * e_i`` and the particular solution is reduced
    into ``[0, m)``.
    """
    if m < 0:
        raise ValueError("modulus must be >= 0")
    rows, n = A.rows, A.cols
    if len(b) != rows:
        raise ValueError("right-hand side has wrong length")
    if m:
        aug = IntMatrix([A.row(i) + [m if k == i else 0 for k in range(rows)]
                         for i in range(rows)], rows, n + rows)
        sol = solve_congruence(aug, b, 0)
        if sol is None:
            return None
        gens = [k[:n] for k in sol.kernel] + [[m if j == i else 0 for j in range(n)]
                                              for i in range(n)]
        basis = [r for r in hermite_normal_form(IntMatrix(gens, len(gens), n))[0].tolist()
                 if any(r)]
        x = [c % m for c in sol.particular[:n]]
        return CongruenceSolution(x, basis, m)
    S, U, V = smith_normal_form(A)
    c = U.apply(b)
    y = [0] * n
    for i in range(rows):
        d = S[i, i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    x = V.apply(y)
    kernel = [V.column(j) for j in range(n) if j >= rows or S[j, j] == 0]
    return CongruenceSolution(x, kernel, 0)


class RowLattice:
    """Incrementally maintained integer row lattice in Hermite form.

    Rows are sparse dicts ``column -> value``.  Once the lattice has full
    rank its determinant ``D`` is known and every row may be reduced modulo
    ``D`` (``D * Z^n`` lies inside a full-rank lattice), which keeps entries
    small during long elimination runs.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: Dict[int, Dict[int, int]] = {}
        self._det: Optional[int] = None

    def __len__(self) -> int:
        return len(self.pivots)

    @property
    def full_rank(self) -> bool:
        return len(self.pivots) == self.ncols

    def determinant(self) -> Optional[int]:
        if not self.full_rank:
            return None
        d = 1
        for c, r in self.pivots.items():
            d *= r[c]
        return d

    def _mod(self, row: Dict[int, int]) -> Dict[int, int]:
        if self._det is None:
            return row
        D = self._det
        return {c: v % D for c, v in row.items() if v % D}

    def add(self, vec) -> bool:
        """Insert a vector (dense list or sparse dict).  Returns True if the lattice grew."""
        row = dict(vec) if isinstance(vec, dict) else {i: v for i, v in enumerate(vec) if v}
        row = self._mod({c: v for c, v in row.items() if v})
        grew = False
        while row:
            col = min(row)
            prow = self.pivots.get(col)
            if prow is None:
                if row[col] < 0:
                    row = {c: -v for c, v in row.items()}
                self.pivots[col] = row
                grew = True
                break
            a, b = prow[col], row[col]
            if b % a == 0:
                q = b // a
                new = dict(row)
                for c, v in prow.items():
                    w = new.get(c, 0) - q * v
                    if w:
                        new[c] = w
                    else:
                        new.pop(c, None)
                row = self._mod(new)
                continue
            g, s, t = _xgcd(a, b)
            x, y = a // g, b // g
            keys = set(prow) | set(row)
            new_p, rest = {}, {}
            for c in keys:
                pv, rv = prow.get(c, 0), row.get(c, 0)
                w1 = s * pv + t * rv
                w2 = -y * pv + x * rv
                if w1:
                    new_p[c] = w1
                if w2:
                    rest[c] = w2
            if self._det is not None:
                D = self._det
                new_p = {k: (v if k == col else v % D) for k, v in new_p.items()
                         if k == col or v % D}
            self.pivots[col] = new_p
            grew = True
            row = self._mod(rest)
        if grew and self._det is None and self.full_rank:
            self._det = self.determinant()
            self._reduce_all_mod()
        return grew

    def _reduce_all_mod(self):
        D = self._det
        for c in list(self.pivots):
            r = self.pivots[c]
            piv = r[c]
            self.pivots[c] = {k: (v if k == c else v % D) for k, v in r.items()
                              if k == c or v % D}
            assert piv > 0

    def echelon(self) -> List[Dict[int, int]]:
        """Fully reduced Hermite basis rows, sorted by pivot column."""
        cols = sorted(self.pivots)
        rows = {}
        for c in cols:
            r = dict(self.pivots[c])
            if r[c] < 0:
                r = {k: -v for k, v in r.items()}
            rows[c] = r
        for c in cols:
            r = rows[c]
            for c2 in cols:
                if c2 <= c:
                    continue
                q = r.get(c2, 0) // rows[c2][c2]
                if q:
                    for k, v in rows[c2].items():
                        w = r.get(k, 0) - q * v
                        if w:
                            r[k] = w
                        else:
                            r.pop(k, None)
        self.pivots = rows
        return [rows[c] for c in cols]

    def reduce(self, vec) -> Dict[int, int]:
        """Canonical representative of ``vec`` modulo the lattice (needs echelon())."""
        row = dict(vec) if isinstance(vec, dict) else {i: v for i, v in enumerate(vec) if v}
        row = self._mod({c: v for c, v in row.items() if v})
        for c in sorted(self.pivots):
            v = row.get(c, 0)
            if not v:
                continue
            prow = self.pivots[c]
            q = v // prow[c]
            if q:
                for k, w in prow.items():
                    x = row.get(k, 0) - q * w
                    if x:
                        row[k] = x
                    else:
                        row.pop(k, None)
        return row

    def contains(self, vec) -> bool:
        """Membership test (works in any state, no echelon call needed)."""
        row = dict(vec) if isinstance(vec, dict) else {i: v for i, v in enumerate(vec) if v}
        row = self._mod({c: v for c, v in row.items() if v})
        while row:
            col = min(row)
            prow = self.pivots.get(col)
            if prow is None or row[col] % prow[col]:
                return False
            q = row[col] // prow[col]
            for k, w in prow.items():
                x = row.get(k, 0) - q * w
                if x:
                    row[k] = x
                else:
                    row.pop(k, None)
        return True


def lattice_from_rows(rows: Iterable[Sequence[int]], ncols: int) -> RowLattice:
    lat = RowLattice(ncols)
    for r in rows:
        lat.add(r)
    return lat
