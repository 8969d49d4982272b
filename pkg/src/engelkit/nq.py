"""Class-bounded nilpotent quotients of finitely presented groups.

The quotient ``G / gamma_{c+1}(G)`` is built one lower-central layer at a
time.  Given a consistent presentation ``Q`` of ``G / gamma_{c+1}``:

1. every relation of ``Q`` that is not a generator definition, and every
   generator image that is not a definition, receives a free central *tail*
   (a generator of infinite order);
2. the overlap tests of this covering presentation, and the relators of
   ``G`` evaluated at the images, give integer relations among the tails;
3. the Hermite form of those relations describes the new layer
   ``gamma_{c+1}(G) / gamma_{c+2}(G)``.  Columns with a pivot ``p^e > 1`` become
   new generators, refined into ``e`` generators of relative order ``p``;
   columns with pivot 1 are expressed through later ones.

A column without a pivot means the layer is infinite, which is an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .pcgroup import PcPresentation, Element
from .words import FpPresentation, compile_word, evaluate, exponent_sums, format_word
from .zmatrix import RowLattice


class InfiniteLayerError(ValueError):
    """A lower central factor is infinite or not a p-group."""


@dataclass
class NQResult:
    presentation: PcPresentation
    images: Dict[str, Element]
    nilpotency_class: int
    stabilized: bool
    class_bound: int
    layer_exponents: List[int]
    definitions: List[tuple] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "stabilized" if self.stabilized else "class bound reached without stabilization"

    @property
    def order_exponent(self) -> int:
        return sum(self.layer_exponents)


def _is_p_power(d: int, p: int) -> bool:
    while d % p == 0:
        d //= p
    return d == 1


class _State:
    """Mutable bookkeeping for a pc presentation under construction."""

    def __init__(self, p: int):
        self.p = p
        self.orders: List[int] = []
        self.weights: List[int] = []
        self.names: List[str] = []
        self.power: Dict[int, List[int]] = {}
        self.conj: Dict[Tuple[int, int], List[int]] = {}
        self.images: List[List[int]] = []
        self.definitions: List[tuple] = []

    @property
    def n(self) -> int:
        return len(self.orders)

    def presentation(self, extra_infinite: int = 0, tails=None) -> PcPresentation:
        n, T = self.n, extra_infinite
        tails = tails or {}

        def ext(vec, key):
            v = list(vec) + [0] * T
            t = tails.get(key)
            if t is not None:
                v[n + t] += 1
            return v

        power = {}
        for i in range(n):
            base = self.power.get(i, [0] * n)
            power[i] = ext(base, ("power", i))
        conj = {}
        keys = set(self.conj) | {k[1:] for k in tails if k[0] == "conj"}
        for (j, i) in keys:
            base = self.conj.get((j, i))
            if base is None:
                base = [0] * n
                base[j] = 1
            conj[(j, i)] = ext(base, ("conj", j, i))
        names = self.names + [f"t{k + 1}" for k in range(T)]
        c = max(self.weights, default=0) + 1
        return PcPresentation(self.p, self.orders + [0] * T, power, conj,
                              self.weights + [c] * T, names)


def _refine_digits(x: int, p: int, e: int) -> List[int]:
    out = []
    for _ in range(e):
        x, r = divmod(x, p)
        out.append(r)
    return out


def nilpotent_quotient(F: FpPresentation, class_bound: int, p: Optional[int] = None,
                       check: bool = True) -> NQResult:
    """Largest quotient of ``F`` that is nilpotent of class at most ``class_bound``."""
    p = F.p if F.p is not None else p
    if p is None:
        raise ValueError("the prime p must be fixed")
    if class_bound < 1:
        raise ValueError("class bound must be >= 1")
    gens = list(F.generators)
    index = {g: i for i, g in enumerate(gens)}
    relators = [compile_word(w, index, p) for w in F.relators()]
    d = len(gens)

    # -- class 1: the abelianisation
    lat = RowLattice(d)
    for r in relators:
        lat.add(exponent_sums(r, d))
    if not lat.full_rank:
        raise InfiniteLayerError("abelianisation is infinite")
    rows = {min(r): r for r in lat.echelon()}
    st = _State(p)
    colgen: Dict[int, int] = {}
    for col in range(d):
        piv = rows[col][col]
        if piv == 1:
            continue
        if not _is_p_power(piv, p):
            raise InfiniteLayerError(f"abelianisation has torsion {piv} that is not a power of {p}")
        e = _log(piv, p)
        colgen[col] = st.n
        for s in range(e):
            st.orders.append(p)
            st.weights.append(1)
            st.names.append(f"{gens[col]}" if e == 1 and s == 0 else f"{gens[col]}_{s}")
            st.definitions.append(("image", gens[col]) if s == 0 else ("power", st.n - 2))
    _close_layer(st, lat, rows, colgen, range(d), 0)
    for k in range(d):
        st.images.append(_layer_vector(st, lat, rows, colgen, {k: 1}, 0, st.n))
    if st.n == 0:
        P = st.presentation()
        return NQResult(P, {g: P.identity for g in gens}, 0, True, class_bound, [0], [])

    c = 1
    stabilized = False
    while True:
        ext = _next_layer(st, relators, gens, c)
        if ext is None:
            stabilized = True
            break
        if c == class_bound:
            # the extension only witnesses gamma_{c+1} != 1 and is discarded
            break
        st = ext
        c += 1
    P = st.presentation()
    images = {g: tuple(st.images[k]) for k, g in enumerate(gens)}
    result = NQResult(P, images, c, stabilized, class_bound, _layer_logs(P),
                      list(st.definitions))
    if check:
        bad = P.consistency_check()
        if bad:
            raise AssertionError(f"nilpotent quotient is inconsistent: {bad[:3]}")
        rep = epimorphism_check(F, P, images)
        if not rep.ok:
            raise AssertionError(f"relators fail in the quotient: {rep.failures()}")
    return result


def _layer_logs(P: PcPresentation) -> List[int]:
    out: Dict[int, int] = {}
    for m, w in zip(P.relative_orders, P.weights):
        e = 0
        while m > 1:
            m //= P.p
            e += 1
        out[w] = out.get(w, 0) + e
    return [out[w] for w in sorted(out)]


def _log(x: int, p: int) -> int:
    e = 0
    while x > 1:
        x //= p
        e += 1
    return e


def _layer_vector(st: _State, lat: RowLattice, rows, colgen, vec: Dict[int, int],
                  offset: int, total: int) -> List[int]:
    """Refined coordinates (padded to ``total``) of a tail combination."""
    red = lat.reduce(vec)
    out = [0] * total
    for col, x in red.items():
        g = colgen.get(col)
        if g is None:
            raise AssertionError("reduction left a non-generator column")
        e = _log(rows[col][col], st.p)
        for s, dgt in enumerate(_refine_digits(x, st.p, e)):
            out[g + s] = dgt
    return out


def _close_layer(st: _State, lat, rows, colgen, cols, old_n: int) -> None:
    """Power relations inside a freshly added layer."""
    p = st.p
    total = st.n
    for col in cols:
        g = colgen.get(col)
        if g is None:
            continue
        piv = rows[col][col]
        e = _log(piv, p)
        for s in range(e - 1):
            v = [0] * total
            v[g + s + 1] = 1
            st.power[g + s] = v
        rel = {k: -v for k, v in rows[col].items() if k != col}
        st.power[g + e - 1] = _layer_vector(st, lat, rows, colgen, rel, old_n, total)


def _next_layer(st: _State, relators, gens, c: int) -> Optional[_State]:
    """Extension of ``st`` by gamma_{c+1}/gamma_{c+2}, or None if that layer is trivial."""
    n = st.n
    wt = st.weights
    defined = set()
    for dfn in st.definitions:
        if dfn[0] == "image":
            defined.add(("image", dfn[1]))
        elif dfn[0] == "power":
            defined.add(("power", dfn[1]))
        elif dfn[0] == "conj":
            defined.add(("conj", dfn[1], dfn[2]))
    tails: Dict[tuple, int] = {}
    keys: List[tuple] = []
    for k, g in enumerate(gens):
        if ("image", g) not in defined:
            keys.append(("image", g))
    for i in range(n):
        if ("power", i) not in defined:
            keys.append(("power", i))
    conj_keys = []
    for i in range(n):
        for j in range(i + 1, n):
            if wt[i] + wt[j] <= c + 1 and ("conj", j, i) not in defined:
                conj_keys.append(("conj", j, i))
    # later columns tend to survive as layer generators, so commutators of a
    # weight-c generator with a weight-1 generator go last
    conj_keys.sort(key=lambda k: (wt[k[2]] == 1 and wt[k[1]] == c, k[2], k[1]))
    keys.extend(conj_keys)
    for t, key in enumerate(keys):
        tails[key] = t
    T = len(keys)
    cover = st.presentation(T, tails)
    lat = RowLattice(T)
    for v in cover.consistency_violations():
        lhs, rhs = v.lhs, v.rhs
        if lhs[:n] != rhs[:n]:
            raise AssertionError(f"cover inconsistent outside the tails: {v.description}")
        lat.add({k: rhs[n + k] - lhs[n + k] for k in range(T) if rhs[n + k] != lhs[n + k]})
    images = []
    for k, g in enumerate(gens):
        v = list(st.images[k]) + [0] * T
        t = tails.get(("image", g))
        if t is not None:
            v[n + t] = 1
        images.append(tuple(v))
    for r in relators:
        val = evaluate(cover, images, r)
        if any(val[:n]):
            raise AssertionError("relator does not hold in the previous quotient")
        lat.add({k: val[n + k] for k in range(T) if val[n + k]})
    if not lat.full_rank:
        free = [keys[k] for k in range(T) if k not in lat.pivots]
        raise InfiniteLayerError(f"layer {c + 1} is infinite (free tails {free[:4]})")
    ech = lat.echelon()
    rows = {min(r): r for r in ech}
    colgen: Dict[int, int] = {}
    new_defs = []
    for col in range(T):
        piv = rows[col][col]
        if piv == 1:
            continue
        if not _is_p_power(piv, st.p):
            raise InfiniteLayerError(f"layer {c + 1} has torsion {piv}, not a power of {st.p}")
        e = _log(piv, st.p)
        colgen[col] = n + len(new_defs)
        key = keys[col]
        for s in range(e):
            if s == 0:
                new_defs.append(key if key[0] != "image" else ("image", key[1]))
            else:
                new_defs.append(("power", n + len(new_defs) - 1))
    L = len(new_defs)
    if L == 0:
        return None
    st = _copy_state(st)
    total = n + L
    for i in range(L):
        st.orders.append(st.p)
        st.weights.append(c + 1)
        st.names.append(f"g{total - L + i + 1}")
    # extend relations by their tail values
    for key, t in tails.items():
        vec = _layer_vector(st, lat, rows, colgen, {t: 1}, n, total)
        if key[0] == "image":
            k = gens.index(key[1])
            st.images[k] = list(st.images[k]) + vec[n:]
        elif key[0] == "power":
            base = st.power.get(key[1], [0] * n)
            st.power[key[1]] = list(base) + vec[n:]
        else:
            j, i = key[1], key[2]
            base = st.conj.get((j, i))
            if base is None:
                base = [0] * n
                base[j] = 1
            st.conj[(j, i)] = list(base) + vec[n:]
    for k in range(len(gens)):
        if len(st.images[k]) < total:
            st.images[k] = list(st.images[k]) + [0] * (total - len(st.images[k]))
    for i in range(n):
        if i in st.power and len(st.power[i]) < total:
            st.power[i] = list(st.power[i]) + [0] * (total - len(st.power[i]))
    for key in list(st.conj):
        if len(st.conj[key]) < total:
            st.conj[key] = list(st.conj[key]) + [0] * (total - len(st.conj[key]))
    _close_layer(st, lat, rows, colgen, range(T), n)
    st.definitions.extend(new_defs)
    return st


def _copy_state(st: _State) -> _State:
    c = _State(st.p)
    c.orders = list(st.orders)
    c.weights = list(st.weights)
    c.names = list(st.names)
    c.power = {k: list(v) for k, v in st.power.items()}
    c.conj = {k: list(v) for k, v in st.conj.items()}
    c.images = [list(v) for v in st.images]
    c.definitions = list(st.definitions)
    return c


@dataclass
class EpimorphismReport:
    statuses: List[Tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return all(s for _, s in self.statuses)

    def failures(self) -> List[str]:
        return [t for t, s in self.statuses if not s]


def epimorphism_check(F: FpPresentation, P: PcPresentation, images: Dict[str, Element],
                      p: Optional[int] = None) -> EpimorphismReport:
    """Re-evaluate every relator of ``F`` at ``images`` inside ``P``."""
    p = F.p if F.p is not None else p
    index = {g: i for i, g in enumerate(F.generators)}
    imgs = [images[g] for g in F.generators]
    out = []
    for rel in F.relations:
        val = evaluate(P, imgs, compile_word(rel.relator(), index, p))
        out.append((rel.text(), not any(val)))
    return EpimorphismReport(out)
