"""Power-commutator presentations of finite p-groups and collection from the left.

Elements are plain tuples of exponents in collected normal form
``g_1^{a_1} ... g_n^{a_n}`` with ``0 <= a_i < m_i``.

A presentation is given by

* relative orders ``m_i`` (powers of ``p``),
* power relations ``g_i^{m_i} = w_i`` with ``w_i`` over generators of index > i,
* conjugation relations ``g_j^{g_i} = g_j^k * u_ij`` (i < j) with ``k`` prime to ``p``
  (usually 1) and ``u_ij`` over index > j.

Generators may also have relative order 0, meaning infinite order.  This is
only permitted for trailing central generators and exists so that the
nilpotent quotient engine can work with covering groups whose new layer is a
free abelian group.
"""

from __future__ import annotations

import sys
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Element = Tuple[int, ...]

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class PcPresentation:
    """A (possibly inconsistent) power-commutator presentation."""

    def __init__(self, p: int, relative_orders: Sequence[int],
                 power_relations: Optional[Dict[int, Sequence[int]]] = None,
                 conjugation_relations: Optional[Dict[Tuple[int, int], Sequence[int]]] = None,
                 weights: Optional[Sequence[int]] = None,
                 names: Optional[Sequence[str]] = None):
        self.p = p
        self.n = n = len(relative_orders)
        self.relative_orders = tuple(int(m) for m in relative_orders)
        self.weights = tuple(weights) if weights is not None else (1,) * n
        self.names = tuple(names) if names is not None else tuple(f"g{i + 1}" for i in range(n))
        if len(self.weights) != n or len(self.names) != n:
            raise ValueError("weights/names length mismatch")
        if any(b < a for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("weights must be non-decreasing")
        finite = [m for m in self.relative_orders if m]
        for m in finite:
            if not _is_power_of(m, p) or m == 1:
                raise ValueError(f"relative order {m} is not a positive power of {p}")
        self.n_finite = sum(1 for m in self.relative_orders if m)
        if any(m == 0 for m in self.relative_orders[:self.n_finite]):
            raise ValueError("infinite generators must come last")

        power_relations = dict(power_relations or {})
        conjugation_relations = dict(conjugation_relations or {})
        self._power: List[Element] = []
        for i in range(n):
            rhs = self._check_vector(power_relations.get(i, ()), i + 1, f"power relation of {i}")
            if self.relative_orders[i] == 0 and any(rhs):
                raise ValueError("infinite generator with a power relation")
            self._power.append(rhs)
        self._conj: List[Dict[int, Element]] = [dict() for _ in range(n)]
        for (j, i), rhs in conjugation_relations.items():
            if not 0 <= i < j < n:
                raise ValueError(f"conjugation relation needs i < j, got {(j, i)}")
            vec = list(rhs) if len(rhs) == n else None
            if vec is None:
                raise ValueError("relation vector has wrong length")
            if any(vec[:j]) or vec[j] % p == 0:
                raise ValueError(f"conjugate of g{j + 1} by g{i + 1} must start with a "
                                 f"unit power of g{j + 1}")
            full = self._check_vector([0] * j + vec[j:], j, f"conjugation relation {(j, i)}")
            if vec[j] != 1 or any(full[j + 1:]):
                if i >= self.n_finite or j >= self.n_finite:
                    raise ValueError("infinite generators must be central")
                self._conj[i][j] = full
        self._nc: List[List[int]] = [sorted(self._conj[i]) for i in range(n)]
        self._power_chunks = [[(k, v) for k, v in enumerate(w) if v] for w in self._power]
        self._conj_elem_cache: Dict[Tuple[int, int, int], Element] = {}
        self._conj_pow_cache: Dict[Tuple[int, int, int, int], Element] = {}
        self.identity: Element = (0,) * n

    def _check_vector(self, vec, start, what) -> Element:
        n = self.n
        vec = list(vec) if vec else [0] * n
        if len(vec) != n:
            raise ValueError(f"{what}: wrong length")
        if any(vec[:start]):
            raise ValueError(f"{what}: uses generators of too small index")
        for k, v in enumerate(vec):
            m = self.relative_orders[k]
            if m and not 0 <= v < m:
                raise ValueError(f"{what}: exponent {v} of g{k + 1} outside [0, {m})")
        return tuple(vec)

    # -- accessors -----------------------------------------------------
    def power_relation(self, i: int) -> Element:
        return self._power[i]

    def conjugate_relation(self, j: int, i: int) -> Element:
        """Collected form of g_j^{g_i} for i < j."""
        r = self._conj[i].get(j)
        if r is None:
            v = [0] * self.n
            v[j] = 1
            return tuple(v)
        return r

    def conjugation_items(self) -> Iterable[Tuple[Tuple[int, int], Element]]:
        for i in range(self.n):
            for j, r in sorted(self._conj[i].items()):
                yield (j, i), r

    def power_items(self) -> Iterable[Tuple[int, Element]]:
        for i, r in enumerate(self._power):
            if any(r):
                yield i, r

    def order(self) -> int:
        if self.n_finite < self.n:
            raise ValueError("presentation has infinite generators")
        o = 1
        for m in self.relative_orders:
            o *= m
        return o

    def log_order(self) -> int:
        return sum(_log_p(m, self.p) for m in self.relative_orders)

    def gen(self, i: int, e: int = 1) -> Element:
        v = [0] * self.n
        v[i] = 1
        return self.power(tuple(v), e) if e != 1 else tuple(v)

    def is_identity(self, u: Element) -> bool:
        return not any(u)

    def random_element(self, rng) -> Element:
        return tuple(rng.randrange(m) if m else 0 for m in self.relative_orders)

    def elements(self):
        """Iterate over all elements (small groups only)."""
        from itertools import product
        return product(*[range(m) for m in self.relative_orders])

    def __repr__(self) -> str:
        return f"PcPresentation(p={self.p}, n={self.n}, orders={self.relative_orders})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, PcPresentation) and self.p == other.p
                and self.relative_orders == other.relative_orders
                and self._power == other._power and self._conj == other._conj
                and self.weights == other.weights and self.names == other.names)

    def __hash__(self):
        return hash((self.p, self.relative_orders, tuple(self._power)))

    # -- collection ----------------------------------------------------
    def _conj_elem(self, g: int, e: int, j: int) -> Element:
        """g_j conjugated by g^e, collected."""
        key = (g, e, j)
        r = self._conj_elem_cache.get(key)
        if r is not None:
            return r
        if e == 1:
            r = self.conjugate_relation(j, g)
        else:
            a = e // 2
            x = self._conj_elem(g, a, j)
            w = list(x)
            self._collect(w, [(g, e - a)])
            assert w[g] == e - a and not any(w[:g])
            w[g] = 0
            r = tuple(w)
        self._conj_elem_cache[key] = r
        return r

    def _conj_pow(self, g: int, e: int, j: int, k: int) -> Element:
        key = (g, e, j, k)
        r = self._conj_pow_cache.get(key)
        if r is None:
            r = self.power(self._conj_elem(g, e, j), k)
            self._conj_pow_cache[key] = r
        return r

    def _collect(self, w: List[int], stack: List[Tuple[int, int]]) -> None:
        """Multiply the collected word ``w`` in place by the chunks on ``stack``.

        The stack is consumed from the end, so the first chunk to multiply
        must be the last list entry.
        """
        m = self.relative_orders
        nc = self._nc
        conj = self._conj
        nf = self.n_finite
        while stack:
            g, e = stack.pop()
            mg = m[g]
            if mg == 0:
                w[g] += e
                continue
            conflict = False
            for j in nc[g]:
                if w[j]:
                    conflict = True
                    break
            s = w[g] + e
            if not conflict and s < mg:
                w[g] = s
                continue
            suffix = []
            for j in range(g + 1, nf):
                if w[j]:
                    suffix.append((j, w[j]))
                    w[j] = 0
            if s >= mg:
                q, s = divmod(s, mg)
            else:
                q = 0
            w[g] = s
            cg = conj[g] if conflict else None
            for j, k in reversed(suffix):
                if cg is not None and j in cg:
                    x = self._conj_pow(g, e, j, k)
                    for idx in range(nf - 1, j - 1, -1):
                        if x[idx]:
                            stack.append((idx, x[idx]))
                    for idx in range(nf, self.n):
                        if x[idx]:
                            w[idx] += x[idx]
                else:
                    stack.append((j, k))
            if q:
                pw = self._power_chunks[g]
                for _ in range(q):
                    stack.extend(reversed(pw))

    def collect_word(self, word: Sequence[Tuple[int, int]]) -> Element:
        """Collect a word given as (generator, exponent) pairs, exponents >= 0."""
        w = [0] * self.n
        stack = []
        for g, e in reversed(list(word)):
            if e < 0:
                raise ValueError("collect_word expects nonnegative exponents")
            m = self.relative_orders[g]
            while m and e >= m:
                # split large exponents into in-range chunks
                stack.append((g, m - 1))
                e -= m - 1
            if e:
                stack.append((g, e))
        self._collect(w, stack)
        return tuple(w)

    def multiply(self, u: Element, v: Element) -> Element:
        w = list(u)
        stack = [(j, v[j]) for j in range(self.n_finite - 1, -1, -1) if v[j]]
        for j in range(self.n_finite, self.n):
            w[j] += v[j]
        if stack:
            self._collect(w, stack)
        return tuple(w)

    def left_divide(self, u: Element, v: Element) -> Element:
        """The element x with u x = v."""
        w = list(u)
        x = [0] * self.n
        m = self.relative_orders
        for i in range(self.n_finite):
            if w[i] != v[i]:
                k = (v[i] - w[i]) % m[i]
                x[i] = k
                self._collect(w, [(i, k)])
        for i in range(self.n_finite, self.n):
            x[i] = v[i] - w[i]
        return tuple(x)

    def invert(self, u: Element) -> Element:
        return self.left_divide(u, self.identity)

    def power(self, u: Element, k: int) -> Element:
        if k < 0:
            u, k = self.invert(u), -k
        result = self.identity
        base = u
        while k:
            if k & 1:
                result = self.multiply(result, base)
            k >>= 1
            if k:
                base = self.multiply(base, base)
        return result

    def commutator(self, u: Element, v: Element) -> Element:
        """[u, v] = u^-1 v^-1 u v."""
        return self.left_divide(self.multiply(v, u), self.multiply(u, v))

    def comm_chain(self, y: Element, xs: Sequence[Element]) -> Element:
        """Left-normed commutator [y, x_1, ..., x_k]."""
        for x in xs:
            y = self.commutator(y, x)
        return y

    def conjugate(self, u: Element, v: Element) -> Element:
        """u^v = v^-1 u v."""
        return self.left_divide(v, self.multiply(u, v))

    def element_order(self, u: Element) -> int:
        o = 1
        while any(u):
            u = self.power(u, self.p)
            o *= self.p
        return o

    # -- consistency ---------------------------------------------------
    def consistency_check(self) -> List[str]:
        """Run the standard overlap tests; returns descriptions of failures."""
        return [v.description for v in self.consistency_violations()]

    def consistency_violations(self, weight_bound: Optional[int] = None) -> List["Violation"]:
        out: List[Violation] = []
        n, nf = self.n, self.n_finite
        m = self.relative_orders
        gens = [self.gen(i) for i in range(n)]
        nm = self.names
        wt = self.weights

        def add(desc, lhs, rhs):
            if lhs != rhs:
                out.append(Violation(desc, lhs, rhs))

        def ok(*idx):
            return weight_bound is None or sum(wt[i] for i in idx) <= weight_bound

        # g_k (g_j g_i) = (g_k g_j) g_i
        for i in range(nf):
            for j in range(i + 1, nf):
                gji = self.multiply(gens[j], gens[i])
                for k in range(j + 1, nf):
                    if not ok(i, j, k):
                        continue
                    add(f"{nm[k]}({nm[j]} {nm[i]}) != ({nm[k]} {nm[j]}){nm[i]}",
                        self.multiply(gens[k], gji),
                        self.multiply(self.multiply(gens[k], gens[j]), gens[i]))
        # g_j^m g_i = g_j^(m-1) (g_j g_i)
        for i in range(nf):
            for j in range(i + 1, nf):
                if not ok(i, j):
                    continue
                add(f"({nm[j]}^{m[j]}){nm[i]} != {nm[j]}^{m[j] - 1}({nm[j]} {nm[i]})",
                    self.multiply(self._power[j], gens[i]),
                    self.multiply(self._gpow(j, m[j] - 1), self.multiply(gens[j], gens[i])))
        # g_j g_i^m = (g_j g_i) g_i^(m-1)
        for i in range(nf):
            for j in range(i + 1, nf):
                if not ok(i, j):
                    continue
                add(f"{nm[j]}({nm[i]}^{m[i]}) != ({nm[j]} {nm[i]}){nm[i]}^{m[i] - 1}",
                    self.multiply(gens[j], self._power[i]),
                    self.multiply(self.multiply(gens[j], gens[i]), self._gpow(i, m[i] - 1)))
        # g_i g_i^m = g_i^m g_i
        for i in range(nf):
            add(f"{nm[i]}({nm[i]}^{m[i]}) != ({nm[i]}^{m[i]}){nm[i]}",
                self.multiply(gens[i], self._power[i]),
                self.multiply(self._power[i], gens[i]))
        return out

    def _gpow(self, i: int, e: int) -> Element:
        v = [0] * self.n
        v[i] = e
        return tuple(v)

    def is_consistent(self) -> bool:
        return not self.consistency_violations()


class Violation:
    __slots__ = ("description", "lhs", "rhs")

    def __init__(self, description: str, lhs: Element, rhs: Element):
        self.description = description
        self.lhs = lhs
        self.rhs = rhs

    def __repr__(self):
        return f"Violation({self.description!r})"


def _is_power_of(m: int, p: int) -> bool:
    if m < 1:
        return False
    while m % p == 0:
        m //= p
    return m == 1


def _log_p(m: int, p: int) -> int:
    k = 0
    while m > 1:
        m //= p
        k += 1
    return k


# Functional aliases.
def multiply(P: PcPresentation, u: Element, v: Element) -> Element:
    return P.multiply(u, v)


def invert(P: PcPresentation, u: Element) -> Element:
    return P.invert(u)


def power(P: PcPresentation, u: Element, k: int) -> Element:
    return P.power(u, k)


def commutator(P: PcPresentation, u: Element, v: Element) -> Element:
    return P.commutator(u, v)


def comm_chain(P: PcPresentation, y: Element, xs: Sequence[Element]) -> Element:
    return P.comm_chain(y, xs)


def consistency_check(P: PcPresentation) -> List[str]:
    return P.consistency_check()
