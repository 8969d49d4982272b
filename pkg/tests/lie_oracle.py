"""Independent model of the scaled Lie lattices and their Engel quotients.

Lie elements are associative polynomials in a, b, c truncated above degree 5.
The lattice K is s times the Z-span of all left-normed commutators of a/s, b/s, c/s.
Lattice bases come from sympy's Hermite normal form, and the Engel ideal is
computed modulo a prime power with a valuation echelon.
"""
import copy
import itertools
from fractions import Fraction
from functools import lru_cache

from sympy import Matrix, ilcm
from sympy.matrices.normalforms import hermite_normal_form

W = 5
LETTERS = "abc"


def mul(x, y):
    out = {}
    for u, cu in x.items():
        for v, cv in y.items():
            if len(u) + len(v) <= W:
                w = u + v
                out[w] = out.get(w, 0) + cu * cv
    return {k: v for k, v in out.items() if v}


def add(x, y, c=1):
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) + c * v
        if not out[k]:
            del out[k]
    return out


def bracket(x, y):
    return add(mul(x, y), mul(y, x), -1)


def left_normed(word):
    acc = {(word[0],): 1}
    for ch in word[1:]:
        acc = bracket(acc, {(ch,): 1})
    return acc


def multidegree(word):
    return tuple(word.count(ch) for ch in LETTERS)


def in_family(md):
    na, nb, nc = md
    return na >= 2 or nb >= 3 or nc >= 3 or md == (0, 2, 2)


def all_words():
    for k in range(1, W + 1):
        yield from ("".join(t) for t in itertools.product(LETTERS, repeat=k))


def _key(w):
    return (len(w), w)


class RRef:
    """Fully reduced row echelon form over Q on sparse dict vectors."""

    def __init__(self):
        self.rows = {}
        self.tags = {}

    def reduce(self, v, tag=None):
        v = dict(v)
        tag = dict(tag or {})
        for piv in [k for k in v if k in self.rows]:
            c = v.get(piv, 0)
            if c:
                v = add(v, self.rows[piv], -c)
                tag = add(tag, self.tags[piv], -c)
        return v, tag

    def insert(self, v, tag=None):
        v, tag = self.reduce(v, tag)
        if not v:
            return False
        piv = min(v, key=_key)
        c = Fraction(v[piv])
        v = {k: x / c for k, x in v.items()}
        tag = {k: x / c for k, x in tag.items()}
        for q in self.rows:
            d = self.rows[q].get(piv, 0)
            if d:
                self.rows[q] = add(self.rows[q], v, -d)
                self.tags[q] = add(self.tags[q], tag, -d)
        self.rows[piv] = v
        self.tags[piv] = tag
        return True


@lru_cache(maxsize=None)
def quotient(reading):
    """Echelon form of I and a homogeneous Q-basis of L = F/I (as letter words)."""
    I = RRef()
    for w in all_words():
        if reading == "ideal":
            hit = any(in_family(multidegree(w[:k])) for k in range(1, len(w) + 1))
        else:
            hit = in_family(multidegree(w))
        if hit:
            I.insert(left_normed(w))
    basis, span = [], RRef()
    for w in all_words():
        v, _ = I.reduce(left_normed(w))
        if span.insert(v, {len(basis): 1}):
            basis.append(w)
    return I, span, basis


class Model:
    def __init__(self, reading):
        self.I, self.span, self.basis = quotient(reading)
        self.dim = len(self.basis)

    def coords(self, poly):
        v, _ = self.I.reduce(poly)
        rest, tag = self.span.reduce(v)
        assert not rest
        # span tags record -coefficients of the reduction, the original vector is sum of them
        return [-Fraction(tag.get(i, 0)) for i in range(self.dim)]

    def poly(self, coords):
        out = {}
        for i, c in enumerate(coords):
            if c:
                out = add(out, left_normed(self.basis[i]), c)
        return out

    def gamma_dimension(self, k):
        return sum(len(w) >= k for w in self.basis)


def _hnf_rows(vectors, denom):
    A = Matrix([[int(x * denom) for x in v] for v in vectors])
    H = hermite_normal_form(A.T)
    return sorted(tuple(Fraction(int(x), denom) for x in H[:, j]) for j in range(H.shape[1]))


def lattice_basis(model, scale, words):
    vecs = [[Fraction(x, scale ** (len(w) - 1)) for x in model.coords(left_normed(w))]
            for w in words]
    denom = int(ilcm(*[x.denominator for v in vecs for x in v], 1))
    return _hnf_rows(vecs, denom), vecs, denom


class ScaledLattice:
    """K = s * M with structure constants in its HNF basis."""

    def __init__(self, reading, scale):
        self.model = Model(reading)
        self.scale = scale
        rows, _, self.denom = lattice_basis(self.model, scale, list(all_words()))
        # order basis by weight, i.e. by first nonzero Q-coordinate
        self.rows = sorted(rows, key=lambda r: next(i for i, x in enumerate(r) if x))
        self.rank = len(self.rows)
        self.B = Matrix(self.rows)
        self.Binv = self.B.inv()
        self.weights = [len(self.model.basis[next(i for i, x in enumerate(r) if x)])
                        for r in self.rows]
        self.table = [[self.k_coords(bracket(self.model.poly(u), self.model.poly(v)))
                       for v in self.rows] for u in self.rows]

    def k_coords(self, poly, scale_div=1):
        q = Matrix([[Fraction(x, scale_div) for x in self.model.coords(poly)]])
        sol = q * self.Binv
        out = []
        for x in sol:
            assert x.q == 1, "element outside K"
            out.append(int(x))
        return out

    def bracket(self, u, v, T):
        out = [0] * self.rank
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    if vj:
                        c = ui * vj
                        for k, t in enumerate(self.table[i][j]):
                            out[k] += c * t
        return [x % T for x in out]


def _val(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class PadicSpan:
    """Submodule of (Z/p^e)^m kept in echelon form with pivots p^v."""

    def __init__(self, p, e, m):
        self.p, self.e, self.T, self.m = p, e, p ** e, m
        self.rows = {}

    def reduce(self, x):
        x = [a % self.T for a in x]
        for col in range(self.m):
            if x[col] and col in self.rows:
                r = self.rows[col]
                v = _val(r[col], self.p)
                if _val(x[col], self.p) >= v:
                    c = x[col] // self.p ** v
                    x = [(a - c * b) % self.T for a, b in zip(x, r)]
        return x

    def insert(self, x):
        grew = False
        pending = [x]
        while pending:
            x = self.reduce(pending.pop())
            if not any(x):
                continue
            grew = True
            col = next(i for i, a in enumerate(x) if a)
            v = _val(x[col], self.p)
            u = pow(x[col] // self.p ** v, -1, self.T)
            x = [a * u % self.T for a in x]
            old = self.rows.get(col)
            self.rows[col] = x
            if old is not None:
                pending.append(old)
            pending.append([a * self.p ** (self.e - v) for a in x])
        return grew

    def contains(self, x):
        return not any(self.reduce(x))

    def order(self, x):
        k = 0
        while not self.contains([a * self.p ** k for a in x]):
            k += 1
        return self.p ** k


def engel_quotient(reading, scale, torsion):
    """Return the lattice and the Engel ideal J of K modulo torsion * K."""
    K = ScaledLattice(reading, scale)
    p = next(q for q in range(2, scale + 1) if scale % q == 0)
    e = _val(torsion, p)
    J = PadicSpan(p, e, K.rank)
    units = [[int(i == j) for j in range(K.rank)] for i in range(K.rank)]
    low = [u for u, w in zip(units, K.weights) if w <= 2]

    def engel(y, x):
        acc = y
        for _ in range(3):
            acc = K.bracket(acc, x, torsion)
        return acc

    # [y,x,x,x] has weight >= 4, so only weight <= 2 parts of x, y contribute; it is linear
    # in y and cubic in x, so its values span the same group as those at points with
    # nonnegative coordinates summing to at most 3
    queue = [[scale ** 5 * a for a in u] for u in units]
    for alpha in itertools.product(range(4), repeat=len(low)):
        if sum(alpha) <= 3:
            x = [sum(a * u[k] for a, u in zip(alpha, low)) for k in range(K.rank)]
            queue += [engel(y, x) for y in low]
    while queue:
        v = queue.pop()
        if J.insert(v):
            queue += [K.bracket(v, u, torsion) for u in units]
    return K, J


def quotient_class(K, J, torsion):
    """Nilpotency class of K/J from the lower central series of spanning sets."""
    units = [[int(i == j) for j in range(K.rank)] for i in range(K.rank)]

    def spanning(vectors):
        S = copy.deepcopy(J)
        return [v for v in vectors if S.insert(v)]

    c = 0
    layer = spanning(units)
    while layer and c <= W:
        c += 1
        layer = spanning([K.bracket(v, u, torsion) for v in layer for u in units])
    return c
