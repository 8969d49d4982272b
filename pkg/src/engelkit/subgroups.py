"""Subgroups of pc groups given by induced generating sequences.

A subgroup is stored as an echelonised list of elements with strictly
increasing leading generator; the leading exponent of each element is a power
``p^f`` of ``p``.  Every element of the subgroup is then uniquely a product
``s_1^{k_1} ... s_r^{k_r}`` with ``0 <= k_i < m_i / p^{f_i}``.
"""

from __future__ import annotations

from itertools import product as _cartesian
from typing import Dict, Iterable, Iterator, List, Optional, Sequence

from .pcgroup import Element, PcPresentation


def _lead(x: Element) -> int:
    for i, v in enumerate(x):
        if v:
            return i
    return -1


def _vp(x: int, p: int) -> int:
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


class Subgroup:
    def __init__(self, ambient: PcPresentation, gens: Optional[Dict[int, Element]] = None,
                 certified: bool = True):
        self.ambient = ambient
        self._gens: Dict[int, Element] = dict(gens or {})
        # False when a power subgroup was computed with the sampling fallback
        self.certified = certified

    @property
    def igs(self) -> List[Element]:
        return [self._gens[k] for k in sorted(self._gens)]

    @property
    def leading(self) -> List[int]:
        return sorted(self._gens)

    def leading_exponent(self, ell: int) -> int:
        return self._gens[ell][ell]

    def layer_size(self, ell: int) -> int:
        """|S_ell / S_{ell+1}| for the filtration by leading index."""
        s = self._gens.get(ell)
        if s is None:
            return 1
        return self.ambient.relative_orders[ell] // s[ell]

    def order(self) -> int:
        o = 1
        for ell in self._gens:
            o *= self.layer_size(ell)
        return o

    def log_order(self) -> int:
        return sum(_vp(self.layer_size(ell), self.ambient.p) for ell in self._gens)

    def is_trivial(self) -> bool:
        return not self._gens

    def sift(self, x: Element) -> Element:
        """Residue of ``x``; the identity exactly when ``x`` lies in the subgroup."""
        P = self.ambient
        x = tuple(x)
        for ell in sorted(self._gens):
            if not any(x):
                break
            lx = _lead(x)
            if lx < ell:
                return x
            if lx > ell:
                continue
            s = self._gens[ell]
            a, e = x[ell], s[ell]
            if a % e:
                return x
            x = P.multiply(x, P.power(s, -(a // e)))
        return x

    def member(self, x: Element) -> bool:
        return not any(self.sift(x))

    def __contains__(self, x) -> bool:
        return self.member(x)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(self.member(g) for g in other.igs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and self.order() == other.order()
                and self.contains_subgroup(other))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.ambient.p}^{self.log_order()}, leads={self.leading})"

    def elements(self) -> Iterator[Element]:
        """Iterate over all elements (small subgroups only)."""
        P = self.ambient
        leads = self.leading
        ranges = [range(self.layer_size(l)) for l in leads]
        for ks in _cartesian(*ranges):
            x = P.identity
            for l, k in zip(leads, ks):
                if k:
                    x = P.multiply(x, P.power(self._gens[l], k))
            yield x

    def transversal(self, normal: "Subgroup") -> Iterator[Element]:
        """Coset representatives of ``self`` modulo a normal subgroup ``normal <= self``."""
        P = self.ambient
        leads = self.leading
        ranges = []
        for l in leads:
            ranges.append(range(self.layer_size(l) // normal.layer_size(l)))
        for ks in _cartesian(*ranges):
            x = P.identity
            for l, k in zip(leads, ks):
                if k:
                    x = P.multiply(x, P.power(self._gens[l], k))
            yield x

    def index_in(self, other: "Subgroup") -> int:
        return other.order() // self.order()


def trivial_subgroup(P: PcPresentation) -> Subgroup:
    return Subgroup(P, {})


def whole_group(P: PcPresentation) -> Subgroup:
    return Subgroup(P, {i: P.gen(i) for i in range(P.n)})


def weight_subgroup(P: PcPresentation, k: int) -> Subgroup:
    """Subgroup generated by the pc generators of weight >= k."""
    return Subgroup(P, {i: P.gen(i) for i in range(P.n) if P.weights[i] >= k})


def _normalize(P: PcPresentation, x: Element) -> Element:
    ell = _lead(x)
    m = P.relative_orders[ell]
    a = x[ell]
    f = _vp(a, P.p)
    unit = a // P.p ** f
    inv = pow(unit, -1, m)
    if inv == 1:
        return x
    y = P.power(x, inv)
    assert y[ell] == P.p ** f
    return y


def closure(P: PcPresentation, generators: Iterable[Element], normal: bool = False,
            conjugators: Optional[Sequence[Element]] = None) -> Subgroup:
    """Smallest subgroup containing ``generators``.

    With ``normal=True`` the result is the normal closure under
    ``conjugators`` (the pc generators of ``P`` by default).
    """
    if normal and conjugators is None:
        conjugators = [P.gen(i) for i in range(P.n)]
    conj = list(conjugators or [])
    S = Subgroup(P, {})
    queue = [tuple(g) for g in generators if any(g)]
    while True:
        _saturate(P, S, queue, conj, normal)
        # re-check closure of the final generating sequence
        queue = _closure_defects(P, S, conj, normal)
        if not queue:
            return S


def _saturate(P, S: Subgroup, queue: List[Element], conj, normal: bool) -> None:
    gens = S._gens
    while queue:
        x = queue.pop()
        r = S.sift(x)
        if not any(r):
            continue
        r = _normalize(P, r)
        ell = _lead(r)
        old = gens.get(ell)
        gens[ell] = r
        if old is not None:
            queue.append(old)
        m = P.relative_orders[ell]
        pw = P.power(r, m // r[ell])
        if any(pw):
            queue.append(pw)
        for l2, s in list(gens.items()):
            if l2 != ell:
                c = P.commutator(r, s)
                if any(c):
                    queue.append(c)
        if normal:
            for g in conj:
                c = P.commutator(r, g)
                if any(c):
                    queue.append(c)


def _closure_defects(P, S: Subgroup, conj, normal: bool) -> List[Element]:
    out = []
    items = sorted(S._gens.items())
    for idx, (ell, s) in enumerate(items):
        pw = P.power(s, P.relative_orders[ell] // s[ell])
        if not S.member(pw):
            out.append(pw)
        for _, t in items[idx + 1:]:
            c = P.commutator(s, t)
            if not S.member(c):
                out.append(c)
        if normal:
            for g in conj:
                c = P.commutator(s, g)
                if not S.member(c):
                    out.append(c)
    return out


def normal_closure_in(S: Subgroup, generators: Iterable[Element]) -> Subgroup:
    """Normal closure inside the subgroup ``S``."""
    return closure(S.ambient, generators, normal=True, conjugators=S.igs)


def commutator_subgroup(P: PcPresentation, A: Subgroup, B: Subgroup,
                        ambient_normal: bool = True) -> Subgroup:
    """[A, B], closed normally in the whole group (valid when A, B are normal)."""
    gens = [P.commutator(a, b) for a in A.igs for b in B.igs]
    return closure(P, gens, normal=ambient_normal)


def lower_central_series(P: PcPresentation) -> List[Subgroup]:
    """[gamma_1, gamma_2, ..., gamma_{c+1} = 1]."""
    G = whole_group(P)
    gens = G.igs
    series = [G]
    while not series[-1].is_trivial():
        cur = series[-1]
        nxt = closure(P, [P.commutator(s, g) for s in cur.igs for g in gens], normal=True)
        series.append(nxt)
        if nxt.order() == cur.order():
            raise ValueError("lower central series does not reach 1; is P a p-group?")
    return series


def nilpotency_class(P: PcPresentation) -> int:
    return len(lower_central_series(P)) - 1


def derived_subgroup(P: PcPresentation, S: Optional[Subgroup] = None) -> Subgroup:
    S = S or whole_group(P)
    g = S.igs
    comms = [P.commutator(g[i], g[j]) for i in range(len(g)) for j in range(i + 1, len(g))]
    return closure(P, comms, normal=True, conjugators=g)


def is_metabelian(P: PcPresentation) -> bool:
    return derived_subgroup(P, derived_subgroup(P)).is_trivial()


def agemo(P: PcPresentation, S: Optional[Subgroup], i: int, cap: int = 1 << 16,
          samples: int = 2000, rng=None) -> Subgroup:
    """``S^{p^i}``, the subgroup generated by all ``p^i``-th powers of elements of ``S``.

    Start from the normal closure in ``S`` of the ``p^i``-th powers of the
    generating sequence and enlarge it until ``S/N`` has exponent dividing
    ``p^i``.  While ``|S:N| <= cap`` this is decided exactly on a coset
    transversal.  Above the cap a seeded sample is used instead and the result
    is marked uncertified.
    """
    S = S or whole_group(P)
    q = P.p ** i
    N = normal_closure_in(S, [P.power(s, q) for s in S.igs])
    while True:
        idx = S.order() // N.order()
        if idx <= cap:
            witness = next((t for t in S.transversal(N) if not N.member(P.power(t, q))), None)
            if witness is None:
                N.certified = True
                return N
        else:
            import random
            r = rng or random.Random(0)
            witness = None
            for _ in range(samples):
                x = _random_in(P, S, r)
                if not N.member(P.power(x, q)):
                    witness = x
                    break
            if witness is None:
                N.certified = False
                return N
        N = normal_closure_in(S, N.igs + [P.power(witness, q)])


def _random_in(P: PcPresentation, S: Subgroup, rng) -> Element:
    x = P.identity
    for l in S.leading:
        k = rng.randrange(S.layer_size(l))
        if k:
            x = P.multiply(x, P.power(S._gens[l], k))
    return x


def random_element(P: PcPresentation, S: Subgroup, rng) -> Element:
    return _random_in(P, S, rng)


def frattini_subgroup(P: PcPresentation) -> Subgroup:
    """Phi(G) = G' G^p."""
    gens = [P.gen(i) for i in range(P.n)]
    D = derived_subgroup(P)
    return closure(P, D.igs + [P.power(g, P.p) for g in gens], normal=True)


def rank(P: PcPresentation) -> int:
    """Minimal number of generators, log_p |G : Phi(G)|."""
    return P.log_order() - frattini_subgroup(P).log_order()


def is_powerful(P: PcPresentation, S: Optional[Subgroup] = None) -> bool:
    """G' <= G^p (p odd) or G' <= G^4 (p = 2); for ``S`` the same test inside S."""
    S = S or whole_group(P)
    i = 2 if P.p == 2 else 1
    D = derived_subgroup(P, S)
    # cheap sufficient test first: the normal closure of the powers of the generators
    N = normal_closure_in(S, [P.power(s, P.p ** i) for s in S.igs])
    if N.contains_subgroup(D):
        return True
    return agemo(P, S, i).contains_subgroup(D)
