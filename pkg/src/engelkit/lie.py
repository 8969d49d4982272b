"""Free Lie rings of small class, the quotient L = F/I, the lattice K and K/J.

The free Lie algebra on r letters, truncated above weight W, is realised
inside the free associative algebra (bracket = xy - yx).  Coordinates are taken
in the Lyndon basis, a Hall basis whose standard bracketing P(w) equals ``w``
plus lexicographically larger words; this makes coordinate extraction a
triangular sweep with exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce as _fold
from itertools import permutations, product
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .zmatrix import IntMatrix, RowLattice, hermite_normal_form, smith_invariants

Vec = Dict[int, Fraction]


class CertificationError(RuntimeError):
    pass


class PowerfulContainmentError(RuntimeError):
    pass


# -- Hall (Lyndon) basis --------------------------------------------------------

def lyndon_words(r: int, n: int) -> List[Tuple[int, ...]]:
    """All Lyndon words of length <= n over {0..r-1}, in lexicographic order."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[-m])
        while w and w[-1] == r - 1:
            w.pop()
    return out


def _is_lyndon(w: Tuple[int, ...]) -> bool:
    return all(w < w[i:] for i in range(1, len(w)))


def _standard_split(w: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    for i in range(1, len(w)):
        if _is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError("word of length 1 has no factorisation")


def witt_count(r: int, n: int) -> int:
    """Dimension of the weight-n part of the free Lie algebra of rank r."""
    def mobius(k):
        res, d = 1, 2
        while d * d <= k:
            if k % d == 0:
                k //= d
                if k % d == 0:
                    return 0
                res = -res
            d += 1
        return -res if k > 1 else res
    return sum(mobius(d) * r ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


Assoc = Dict[Tuple[int, ...], int]


def _assoc_bracket(x: Assoc, y: Assoc, W: int) -> Assoc:
    out: Assoc = {}
    for u, cu in x.items():
        for v, cv in y.items():
            if len(u) + len(v) > W:
                continue
            out[u + v] = out.get(u + v, 0) + cu * cv
            out[v + u] = out.get(v + u, 0) - cu * cv
    return {k: v for k, v in out.items() if v}


class HallBasis:
    """Lyndon basis of the free Lie algebra of rank ``r`` truncated above weight ``W``."""

    def __init__(self, r: int = 3, W: int = 5, letters: str = "abc"):
        if len(letters) < r:
            raise ValueError("not enough letter names")
        self.r, self.W, self.letters = r, W, letters[:r]
        words = sorted(lyndon_words(r, W), key=lambda w: (len(w), w))
        self.words = words
        self.index = {w: i for i, w in enumerate(words)}
        self.weights = [len(w) for w in words]
        self.multidegrees = [tuple(w.count(k) for k in range(r)) for w in words]
        self._expansion: Dict[int, Assoc] = {}
        self._table: Dict[Tuple[int, int], Dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self.words)

    def counts(self) -> List[int]:
        return [self.weights.count(k) for k in range(1, self.W + 1)]

    def name(self, i: int) -> str:
        return self.tree_text(self.words[i])

    def tree_text(self, w) -> str:
        if len(w) == 1:
            return self.letters[w[0]]
        u, v = _standard_split(w)
        return f"[{self.tree_text(u)},{self.tree_text(v)}]"

    def expansion(self, i: int) -> Assoc:
        e = self._expansion.get(i)
        if e is None:
            w = self.words[i]
            if len(w) == 1:
                e = {w: 1}
            else:
                u, v = _standard_split(w)
                e = _assoc_bracket(self.expansion(self.index[u]),
                                   self.expansion(self.index[v]), self.W)
            self._expansion[i] = e
        return e

    def coordinates(self, poly: Assoc) -> Dict[int, int]:
        """Lyndon coordinates of an associative polynomial that is a Lie element."""
        poly = {k: v for k, v in poly.items() if v}
        out: Dict[int, int] = {}
        while poly:
            w = min(poly)
            i = self.index.get(w)
            if i is None:
                raise ValueError("polynomial is not a Lie element")
            c = poly[w]
            out[i] = c
            for k, v in self.expansion(i).items():
                x = poly.get(k, 0) - c * v
                if x:
                    poly[k] = x
                else:
                    poly.pop(k, None)
        return out

    def bracket_basis(self, i: int, j: int) -> Dict[int, int]:
        key = (i, j)
        r = self._table.get(key)
        if r is None:
            if self.weights[i] + self.weights[j] > self.W or i == j:
                r = {}
            elif (j, i) in self._table:
                r = {k: -v for k, v in self._table[(j, i)].items()}
            else:
                r = self.coordinates(_assoc_bracket(self.expansion(i), self.expansion(j), self.W))
            self._table[key] = r
        return r

    def bracket(self, x: Vec, y: Vec) -> Vec:
        out: Dict[int, Fraction] = {}
        for i, ci in x.items():
            for j, cj in y.items():
                for k, v in self.bracket_basis(i, j).items():
                    out[k] = out.get(k, 0) + ci * cj * v
        return {k: v for k, v in out.items() if v}

    def generator(self, letter: str) -> Vec:
        return {self.index[(self.letters.index(letter),)]: Fraction(1)}

    def left_normed(self, letters: str) -> Vec:
        """[x_1, x_2, ..., x_k] for a string of generator letters."""
        x = self.generator(letters[0])
        for ch in letters[1:]:
            x = self.bracket(x, self.generator(ch))
        return x


def vadd(x: Vec, y: Vec, c=1) -> Vec:
    out = dict(x)
    for k, v in y.items():
        w = out.get(k, 0) + c * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def vscale(x: Vec, c) -> Vec:
    return {k: v * c for k, v in x.items() if v * c}


# -- L = F / I ------------------------------------------------------------------

def _default_family(md: Tuple[int, ...]) -> bool:
    na, nb, nc = md
    return (na + nb + nc >= 6 or na >= 2 or nb >= 3 or nc >= 3
            or (na == 0 and nb == 2 and nc == 2))


class QuotientAlgebra:
    """F/I for a subspace I given by an echelon basis over the rationals."""

    def __init__(self, hall: HallBasis, rows: Dict[int, Vec], reading: str):
        self.hall = hall
        self.rows = rows  # pivot -> row, fully reduced
        self.reading = reading
        self.basis = [i for i in range(len(hall)) if i not in rows]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def dimension_of_weight(self, k: int) -> int:
        return sum(1 for i in self.basis if self.hall.weights[i] == k)

    def gamma_dimension(self, k: int) -> int:
        """dim gamma_k(L); L is graded and generated in weight 1."""
        return sum(1 for i in self.basis if self.hall.weights[i] >= k)

    def reduce(self, x: Vec) -> Vec:
        x = dict(x)
        for piv in sorted(self.rows):
            c = x.get(piv)
            if c:
                x = vadd(x, self.rows[piv], -c)
        return x

    def bracket(self, x: Vec, y: Vec) -> Vec:
        return self.reduce(self.hall.bracket(x, y))

    def contains_zero(self, x: Vec) -> bool:
        return not self.reduce(x)

    def ideal_defects(self) -> List[Tuple[int, str]]:
        """Relation rows whose bracket with a generator leaves the relation span."""
        out = []
        for piv, row in sorted(self.rows.items()):
            for ch in self.hall.letters:
                if self.reduce(self.hall.bracket(row, self.hall.generator(ch))):
                    out.append((piv, ch))
        return out

    @property
    def well_defined(self) -> bool:
        return not self.ideal_defects()


def _echelon_insert(rows: Dict[int, Vec], v: Vec) -> bool:
    for piv in sorted(rows):
        c = v.get(piv)
        if c:
            v = vadd(v, rows[piv], -c)
    if not v:
        return False
    piv = min(v)
    v = vscale(v, Fraction(1) / v[piv])
    for p2 in list(rows):
        c = rows[p2].get(piv)
        if c:
            rows[p2] = vadd(rows[p2], v, -c)
    rows[piv] = v
    return True


def build_L(reading: str = "ideal", family=_default_family, W: int = 5) -> QuotientAlgebra:
    """Quotient of the free Lie algebra on a, b, c by the relator families.

    ``reading="ideal"`` closes the families under brackets (an ideal, so the
    quotient is a Lie algebra).  ``reading="span"`` takes only their linear
    span; the result is a vector space whose bracket may not be well defined.
    """
    if reading not in ("ideal", "span"):
        raise ValueError("reading must be 'ideal' or 'span'")
    H = HallBasis(3, W)
    rows: Dict[int, Vec] = {}
    for i in range(len(H)):
        if family(H.multidegrees[i]):
            _echelon_insert(rows, {i: Fraction(1)})
    if reading == "ideal":
        queue = [dict(r) for r in rows.values()]
        while queue:
            v = queue.pop()
            for ch in H.letters:
                w = H.bracket(v, H.generator(ch))
                if w and _echelon_insert(rows, dict(w)):
                    queue.append(w)
    return QuotientAlgebra(H, rows, reading)


# -- the lattice K ------------------------------------------------------------

BASIS_WORDS = [
    ("a", "a"), ("b", "b"), ("c", "c"),
    ("d1", "ab"), ("d2", "ac"), ("d3", "bc"),
    ("e1", "abb"), ("e2", "abc"), ("e3", "acb"), ("e4", "acc"), ("e5", "bcc"), ("e6", "cbb"),
    ("f1", "abbc"), ("f2", "abcb"), ("f3", "acbb"), ("f4", "accb"), ("f5", "acbc"), ("f6", "abcc"),
    ("g1", "abbcc"), ("g2", "abcbc"), ("g3", "abccb"), ("g4", "accbb"), ("g5", "acbcb"),
    ("g6", "acbbc"),
]
# the 2-adic list prints f6 as [a,c,b,b], a repeat of f3
PRINTED_F6_2ADIC = "acbb"


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class LieLattice:
    """The Z-span K of named scaled elements of L, presented as Z^m / kernel."""

    def __init__(self, L: QuotientAlgebra, scale: int, words: Sequence[Tuple[str, str]]):
        self.L = L
        self.scale = scale
        self.names = [n for n, _ in words]
        self.words = [w for _, w in words]
        self.m = len(words)
        self.weights = [len(w) for w in self.words]
        self.elements = [L.reduce(vscale(L.hall.left_normed(w), Fraction(1, scale ** (len(w) - 1))))
                         for w in self.words]
        cols = L.basis
        self._cols = {c: k for k, c in enumerate(cols)}
        den = 1
        for e in self.elements:
            for v in e.values():
                den = _lcm(den, v.denominator)
        self._den = den
        A = IntMatrix([[int(e.get(c, 0) * den) for c in cols] for e in self.elements],
                      self.m, len(cols))
        Hm, U = hermite_normal_form(A)
        self._H, self._U = [], []
        kernel = []
        for i in range(self.m):
            row = Hm.row(i)
            if any(row):
                piv = next(k for k, v in enumerate(row) if v)
                self._H.append((piv, row))
                self._U.append(U.row(i))
            else:
                kernel.append(U.row(i))
        self.kernel = kernel
        self.rank = len(self._H)
        self._table: Dict[Tuple[int, int], List[int]] = {}

    def index(self, name: str) -> int:
        return self.names.index(name)

    def unit(self, name: str, c: int = 1) -> List[int]:
        v = [0] * self.m
        v[self.index(name)] = c
        return v

    def preimage(self, x: Vec) -> Optional[List[int]]:
        """Integer coordinates on the named generators, or None if x is not in K."""
        x = self.L.reduce(x)
        v = [Fraction(0)] * len(self._cols)
        for k, c in x.items():
            j = self._cols.get(k)
            if j is None:
                raise ValueError("element is not reduced")
            v[j] = c * self._den
        if any(c.denominator != 1 for c in v):
            return None
        v = [int(c) for c in v]
        coeffs = []
        for piv, row in self._H:
            if v[piv] % row[piv]:
                return None
            q = v[piv] // row[piv]
            coeffs.append(q)
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        if any(v):
            return None
        out = [0] * self.m
        for q, u in zip(coeffs, self._U):
            if q:
                out = [a + q * b for a, b in zip(out, u)]
        return out

    def value(self, coords: Sequence[int]) -> Vec:
        out: Vec = {}
        for c, e in zip(coords, self.elements):
            if c:
                out = vadd(out, e, c)
        return out

    def bracket_gens(self, i: int, j: int) -> List[int]:
        key = (i, j)
        r = self._table.get(key)
        if r is None:
            if self.weights[i] + self.weights[j] > self.L.hall.W:
                r = [0] * self.m
            else:
                r = self.preimage(self.L.bracket(self.elements[i], self.elements[j]))
                if r is None:
                    raise PowerfulContainmentError(
                        f"[{self.names[i]},{self.names[j]}] is not in the lattice")
            self._table[key] = r
        return r

    def bracket(self, u: Sequence[int], v: Sequence[int]) -> List[int]:
        out = [0] * self.m
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                r = self.bracket_gens(i, j)
                ab = a * b
                for k, x in enumerate(r):
                    if x:
                        out[k] += ab * x
        return out

    def chain(self, *vs: Sequence[int]) -> List[int]:
        return _fold(self.bracket, vs[1:], list(vs[0]))

    def power_containment(self, t: int) -> List[Tuple[str, str]]:
        """Pairs of generators whose bracket is not in t K."""
        bad = []
        for i in range(self.m):
            for j in range(i + 1, self.m):
                if self.weights[i] + self.weights[j] > self.L.hall.W:
                    continue
                x = self.L.bracket(self.elements[i], self.elements[j])
                if self.preimage(vscale(x, Fraction(1, t))) is None:
                    bad.append((self.names[i], self.names[j]))
        return bad


def basis_words(scale: int, printed_f6: bool = False) -> List[Tuple[str, str]]:
    words = list(BASIS_WORDS)
    if printed_f6:
        words[words.index(("f6", "abcc"))] = ("f6", PRINTED_F6_2ADIC)
    return words


def build_K(scale: int, L: Optional[QuotientAlgebra] = None, printed_f6: bool = False,
            check: bool = True) -> LieLattice:
    L = L or build_L()
    K = LieLattice(L, scale, basis_words(scale, printed_f6))
    if check:
        t = 4 if scale % 2 == 0 else scale
        if K.power_containment(t):
            raise PowerfulContainmentError("powerful containment fails")
    return K


# -- the Engel ideal J and K/J ---------------------------------------------------

def engel_value(K: LieLattice, y: Sequence[int], x: Sequence[int]) -> List[int]:
    return K.chain(y, x, x, x)


def full_linearization(K: LieLattice, y, x1, x2, x3) -> List[int]:
    out = [0] * K.m
    for a, b, c in permutations((x1, x2, x3)):
        out = [u + v for u, v in zip(out, K.chain(y, a, b, c))]
    return out


def partial_linearization(K: LieLattice, y, z, x) -> List[int]:
    """[y,z,x,x]+[y,x,z,x]+[y,x,x,z]+[y,x,z,z]+[y,z,x,z]+[y,z,z,x]."""
    terms = [(z, x, x), (x, z, x), (x, x, z), (x, z, z), (z, x, z), (z, z, x)]
    out = [0] * K.m
    for a, b, c in terms:
        out = [u + v for u, v in zip(out, K.chain(y, a, b, c))]
    return out


def _newton_points(k: int, deg: int):
    """Non-negative integer vectors of length k with coordinate sum <= deg."""
    for c in product(range(deg + 1), repeat=k):
        if sum(c) <= deg:
            yield c


@dataclass
class EngelIdeal:
    K: LieLattice
    torsion: int
    lattice: RowLattice
    generators: int = 0
    rounds: int = 0

    def contains(self, v: Sequence[int]) -> bool:
        return self.lattice.contains(list(v))

    def order(self, v: Sequence[int], p: int) -> int:
        """Order of the image of v in K/J (a power of p)."""
        o, w = 1, list(v)
        while not self.contains(w):
            w = [p * a for a in w]
            o *= p
            if o > self.torsion:
                raise CertificationError("element order exceeds the torsion exponent")
        return o

    def invariants(self) -> List[int]:
        rows = self.lattice.echelon()
        A = IntMatrix([[r.get(j, 0) for j in range(self.K.m)] for r in rows], len(rows), self.K.m)
        return [d for d in smith_invariants(A) if d != 1]


def engel_ideal_J(K: LieLattice, torsion: int, extra_linearizations: bool = False) -> EngelIdeal:
    """Smallest ideal containing ``torsion * K`` and every value [y,x,x,x].

    The values of the cubic map x -> [y,x,x,x] span the same Z-module as its
    values at the points sum(c) <= 3 (Newton interpolation), and y enters
    linearly, so finitely many evaluations suffice.  Generators of weight
    above W // 4 or so never contribute, which the weight check skips.
    """
    m, W = K.m, K.L.hall.W
    lat = RowLattice(m)
    for r in K.kernel:
        lat.add(r)
    for i in range(m):
        lat.add({i: torsion})
    ys = [i for i in range(m) if K.weights[i] + 3 <= W]
    xs = [i for i in range(m) if K.weights[i] + 3 <= W]
    count = 0
    for y in ys:
        for c in _newton_points(len(xs), 3):
            if not any(c):
                continue
            x = [0] * m
            for i, e in zip(xs, c):
                x[i] = e
            v = engel_value(K, [1 if k == y else 0 for k in range(m)], x)
            count += 1
            if any(v):
                lat.add(v)
    if extra_linearizations:
        units = [[1 if k == i else 0 for k in range(m)] for i in range(m)]
        for y in ys:
            for a in xs:
                for b in xs:
                    v = partial_linearization(K, units[y], units[a], units[b])
                    if any(v):
                        lat.add(v)
    # close under brackets with the generators
    rounds = 0
    while True:
        rounds += 1
        grew = False
        for r in list(lat.echelon()):
            vec = [r.get(j, 0) for j in range(m)]
            for i in range(m):
                w = K.bracket(vec, [1 if k == i else 0 for k in range(m)])
                if any(w) and lat.add(w):
                    grew = True
        if not grew:
            break
    return EngelIdeal(K, torsion, lat, count, rounds)


# -- certification ------------------------------------------------------------

WEIGHT5_RELATIONS = [
    # (label, {word: coefficient}) in left-normed commutators of a, b, c
    ("[a,b,c,b,c] = 3[a,b,b,c,c]", {"abcbc": 1, "abbcc": -3}),
    ("[a,b,c,c,b] = -4[a,b,b,c,c]", {"abccb": 1, "abbcc": 4}),
    ("[a,c,b,c,b] = 3[a,b,b,c,c]", {"acbcb": 1, "abbcc": -3}),
    ("[a,c,b,b,c] = -4[a,b,b,c,c]", {"acbbc": 1, "abbcc": 4}),
    ("[a,c,c,b,b] = [a,b,b,c,c]", {"accbb": 1, "abbcc": -1}),
]
SCALED_RELATIONS = [
    # (label, {word: coefficient}, divisor) meaning (1/divisor) * sum
    ("[d1,b,c,c] = 2[d1,c,b,c]", {"abbcc": 1, "abcbc": -2}),
    ("[d1,c,c,b] = -3[d1,c,b,c]", {"abccb": 1, "abcbc": 3}),
    ("[d2,c,b,b] = 2[d2,b,c,b]", {"accbb": 1, "acbcb": -2}),
    ("[d2,b,b,c] = -3[d2,b,c,b]", {"acbbc": 1, "acbcb": 3}),
    ("(1/s)[a,b,c,b,c] = (1/s)[a,c,b,c,b]", {"abcbc": 1, "acbcb": -1}),
]


@dataclass
class RelationCheck:
    label: str
    holds: bool


def _relation_vector(K: LieLattice, coeffs: Dict[str, int], divisor: int) -> Optional[List[int]]:
    x: Vec = {}
    for w, c in coeffs.items():
        x = vadd(x, K.L.hall.left_normed(w), Fraction(c, divisor))
    return K.preimage(x)


def verify_weight5_relators(J: EngelIdeal) -> List[RelationCheck]:
    K = J.K
    s = K.scale
    out = []
    for label, coeffs in WEIGHT5_RELATIONS:
        v = _relation_vector(K, coeffs, 1)
        out.append(RelationCheck(label, v is not None and J.contains(v)))
    v = _relation_vector(K, {"abbcc": s}, 1)
    out.append(RelationCheck("s[a,b,b,c,c] = 0", v is not None and J.contains(v)))
    for label, coeffs in SCALED_RELATIONS:
        v = _relation_vector(K, coeffs, s)
        out.append(RelationCheck(label, v is not None and J.contains(v)))
    return out


@dataclass
class LieCertificate:
    scale: int
    prime: int
    reading: str
    L_dimension: int
    L_gamma5_dimension: int
    L_well_defined: bool
    K_rank: int
    K_generators: int
    power_containment: int
    power_containment_holds: bool
    torsion: int
    g2_order: int
    witness_nonzero: bool
    gamma5_nonzero: bool
    nilpotency_class: int
    multilinear_relators_vanish: bool
    partial_linearizations_vanish: bool
    quotient_powerful: bool
    quotient_invariants: List[int]
    relations: List[RelationCheck] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return not self.failures


def _prime_of(s: int) -> int:
    p = 2
    while s % p:
        p += 1
    return p


def quotient_and_certify(K: LieLattice, J: EngelIdeal, expected_g2_order: Optional[int] = None,
                         expected_class: int = 5) -> LieCertificate:
    s = K.scale
    p = _prime_of(s)
    m = K.m
    units = [[1 if k == i else 0 for k in range(m)] for i in range(m)]
    t = 4 if p == 2 else p
    contain_bad = K.power_containment(t)

    g2 = K.unit("g2")
    g2_order = J.order(g2, p)
    a, b, c = units[K.index("a")], units[K.index("b")], units[K.index("c")]
    witness = K.chain(a, b, c, b, c)
    witness_nonzero = not J.contains(witness)

    gammas = lower_central_lattices(K)
    cls = 0
    for k, G in enumerate(gammas, start=1):
        if any(not J.contains([r.get(j, 0) for j in range(m)]) for r in G.echelon()):
            cls = k
    gamma5_nonzero = cls >= 5

    low = [i for i in range(m) if K.weights[i] + 3 <= K.L.hall.W]
    multi_ok = True
    for y in range(m):
        if K.weights[y] + 3 > K.L.hall.W:
            continue
        for i in low:
            for j in low:
                for l in low:
                    if i <= j <= l and not J.contains(full_linearization(K, units[y], units[i],
                                                                          units[j], units[l])):
                        multi_ok = False
    partial_ok = all(J.contains(partial_linearization(K, units[y], units[z], units[x]))
                     for y in low for z in low for x in low)

    tkj = RowLattice(m)
    for r in J.lattice.echelon():
        tkj.add(r)
    for i in range(m):
        tkj.add({i: t})
    quotient_powerful = all(tkj.contains(K.bracket(units[i], units[j]))
                            for i in range(m) for j in range(i + 1, m))

    L = K.L
    cert = LieCertificate(
        scale=s, prime=p, reading=L.reading,
        L_dimension=L.dimension, L_gamma5_dimension=L.gamma_dimension(5),
        L_well_defined=L.well_defined, K_rank=K.rank, K_generators=K.m,
        power_containment=t, power_containment_holds=not contain_bad,
        torsion=J.torsion, g2_order=g2_order, witness_nonzero=witness_nonzero,
        gamma5_nonzero=gamma5_nonzero, nilpotency_class=cls,
        multilinear_relators_vanish=multi_ok, partial_linearizations_vanish=partial_ok,
        quotient_powerful=quotient_powerful, quotient_invariants=J.invariants(),
        relations=verify_weight5_relators(J))
    if expected_g2_order is not None and g2_order != expected_g2_order:
        cert.failures.append(f"order of g2 is {g2_order}, expected {expected_g2_order}")
    if not witness_nonzero:
        cert.failures.append("[a,b,c,b,c] vanishes in K/J")
    if cls != expected_class:
        cert.failures.append(f"class of K/J is {cls}, expected {expected_class}")
    if not multi_ok:
        cert.failures.append("a multilinear Engel relator survives in K/J")
    if not quotient_powerful:
        cert.failures.append("K/J is not powerful")
    if contain_bad:
        cert.failures.append(f"[K,K] not contained in {t}K")
    return cert


def lower_central_lattices(K: LieLattice) -> List[RowLattice]:
    """gamma_1(K), gamma_2(K), ... (each containing the kernel) until the term is zero."""
    m = K.m
    units = [[1 if k == i else 0 for k in range(m)] for i in range(m)]
    kernel = RowLattice(m)
    for r in K.kernel:
        kernel.add(r)
    cur = RowLattice(m)
    for r in K.kernel:
        cur.add(r)
    for u in units:
        cur.add(u)
    out = []
    while any(not kernel.contains(_dense(r, m)) for r in cur.echelon()):
        out.append(cur)
        nxt = RowLattice(m)
        for r in K.kernel:
            nxt.add(r)
        for r in cur.echelon():
            vec = _dense(r, m)
            for u in units:
                w = K.bracket(vec, u)
                if any(w):
                    nxt.add(w)
        cur = nxt
    return out


def _dense(r: Dict[int, int], m: int) -> List[int]:
    return [r.get(j, 0) for j in range(m)]


def certify_scale(scale: int, torsion: Optional[int] = None, reading: str = "ideal",
                  printed_f6: bool = False) -> LieCertificate:
    """Build L, K and J for ``scale`` (5 or 16) and certify K/J."""
    p = _prime_of(scale)
    L = build_L(reading)
    K = build_K(scale, L, printed_f6=printed_f6, check=False)
    open_pairs = K.power_containment(1)
    if open_pairs:
        x, y = open_pairs[0]
        raise CertificationError(f"listed elements are not closed under the bracket: "
                                 f"[{x},{y}] lies outside their span")
    if torsion is None:
        torsion = scale ** 5 if p != 2 else 4 * scale ** 4
    J = engel_ideal_J(K, torsion, extra_linearizations=(p == 2))
    expected = scale ** 5 if p != 2 else None
    cert = quotient_and_certify(K, J, expected_g2_order=expected)
    if scale not in (5, 16):
        cert.flags.append("experimental scale")
    if p == 2:
        cert.flags.append("f6 printed as [a,c,b,b]; used " +
                          ("the printed word" if printed_f6 else "[a,b,c,c]"))
    if not cert.L_well_defined:
        cert.flags.append("relator span is not an ideal; bracket on L not well defined")
    if K.rank != K.m:
        cert.flags.append(f"listed basis is dependent: rank {K.rank} for {K.m} elements")
    return cert
