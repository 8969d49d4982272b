"""Engel testing, commutator identity suites and class/power bound checks.

All checks work on a consistent ``PcPresentation``.  Samplers take a
``random.Random`` instance so that every report is reproducible from a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .pcgroup import Element, PcPresentation
from .subgroups import (Subgroup, agemo, closure, derived_subgroup, is_metabelian,
                        is_powerful, lower_central_series, rank, trivial_subgroup,
                        whole_group)

GRID_SOUNDNESS = "sound modulo degree bound"


class EngelPolicyError(ValueError):
    pass


def _comm(P: PcPresentation, *xs: Element) -> Element:
    return P.comm_chain(xs[0], xs[1:])


def _prod(P: PcPresentation, *xs: Element) -> Element:
    acc = P.identity
    for x in xs:
        acc = P.multiply(acc, x)
    return acc


def engel_word(P: PcPresentation, y: Element, x: Element, n: int) -> Element:
    """[y, x, ..., x] with n copies of x."""
    return P.comm_chain(y, [x] * n)


class Series:
    """Lower central series with lookups past the class."""

    def __init__(self, P: PcPresentation, lcs: Optional[List[Subgroup]] = None):
        self.P = P
        self.terms = lcs if lcs is not None else lower_central_series(P)
        self.nilpotency_class = len(self.terms) - 1

    def gamma(self, k: int) -> Subgroup:
        if k < 1:
            raise ValueError("series index starts at 1")
        if k - 1 < len(self.terms):
            return self.terms[k - 1]
        return trivial_subgroup(self.P)

    def weights(self) -> List[int]:
        """For each pc generator the largest k with g_i in gamma_k."""
        out = []
        for i in range(self.P.n):
            g = self.P.gen(i)
            k = 1
            while k < len(self.terms) and self.terms[k].member(g):
                k += 1
            out.append(k)
        return out


# -- Engel testing ------------------------------------------------------------

@dataclass
class EngelVerdict:
    n: int
    policy: str
    passed: bool
    soundness: str
    witness: Optional[Tuple[Element, Element]] = None
    evaluations: int = 0
    random_samples: int = 0
    parameters: Dict[str, object] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


def _parse_policy(policy) -> Tuple[str, int]:
    if isinstance(policy, tuple):
        return policy[0], int(policy[1])
    if policy.startswith("random"):
        _, _, k = policy.partition(":")
        return "random", int(k) if k else 1000
    if policy not in ("exhaustive", "grid"):
        raise EngelPolicyError(f"unknown Engel policy {policy!r}")
    return policy, 0


def _sample_engel(P, n, samples, rng) -> Tuple[Optional[Tuple[Element, Element]], int]:
    for k in range(samples):
        x, y = P.random_element(rng), P.random_element(rng)
        if any(engel_word(P, y, x, n)):
            return (x, y), k + 1
    return None, samples


def _coset_box(P: PcPresentation, coords: Sequence[int], counts: Sequence[int]) -> Iterator[Element]:
    for vals in product(*[range(k) for k in counts]):
        v = [0] * P.n
        for i, e in zip(coords, vals):
            v[i] = e
        yield tuple(v)


def _weight_one_basis(P: PcPresentation, series: Series) -> List[Element]:
    """Pc generators that generate G modulo gamma_2, picked greedily."""
    chosen: List[Element] = []
    g2 = series.gamma(2).igs
    span = closure(P, g2)
    for i in range(P.n):
        g = P.gen(i)
        if not span.member(g):
            chosen.append(g)
            span = closure(P, span.igs + [g])
    return chosen


def is_n_engel(P: PcPresentation, n: int, policy="grid", cap: int = 1 << 12,
               samples: int = 1000, rng: Optional[random.Random] = None,
               series: Optional[Series] = None, reduce: bool = True) -> EngelVerdict:
    """Decide the n-Engel law [y, x, ..., x] = 1.

    ``exhaustive`` enumerates pairs; with ``reduce`` it uses coset
    representatives modulo gamma_{c-n+1}, which cannot change the Engel word.
    ``grid`` is exact when c <= n+1 and otherwise evaluates a box of
    coordinates whose size follows the degree bound for collection
    polynomials.  ``random:k`` samples k pairs.  The grid policy also runs
    ``samples`` random pairs.
    """
    kind, k = _parse_policy(policy)
    rng = rng or random.Random(0)
    if kind == "random":
        wit, used = _sample_engel(P, n, k, rng)
        return EngelVerdict(n, f"random:{k}", wit is None, "probabilistic", wit,
                            used, used, {"samples": k})

    series = series or Series(P)
    c = series.nilpotency_class
    if kind == "exhaustive":
        return _engel_exhaustive(P, n, cap, series, reduce)

    params: Dict[str, object] = {"class": c}
    if c <= n:
        verdict = EngelVerdict(n, "grid", True, "exact (vacuous: class <= n)", None, 0, 0,
                               dict(params, branch="vacuous"))
    elif c == n + 1:
        verdict = _engel_multilinear(P, n, series, params)
    else:
        verdict = _engel_box(P, n, series, params)
    if verdict.passed and samples:
        wit, used = _sample_engel(P, n, samples, rng)
        verdict.random_samples = used
        if wit is not None:
            verdict.passed, verdict.witness = False, wit
    return verdict


def _engel_exhaustive(P, n, cap, series: Series, reduce: bool) -> EngelVerdict:
    if P.order() > cap:
        raise EngelPolicyError("group too large for exhaustive policy")
    c = series.nilpotency_class
    if reduce:
        G = whole_group(P)
        N = series.gamma(max(c - n + 1, 1))
        reps = list(G.transversal(N))
    else:
        reps = list(P.elements())
    count = 0
    for x in reps:
        for y in reps:
            count += 1
            if any(engel_word(P, y, x, n)):
                return EngelVerdict(n, "exhaustive", False, "exact", (x, y), count, 0,
                                    {"class": c, "representatives": len(reps)})
    return EngelVerdict(n, "exhaustive", True, "exact", None, count, 0,
                        {"class": c, "representatives": len(reps)})


def _engel_multilinear(P, n, series: Series, params) -> EngelVerdict:
    # With gamma_{n+2} = 1 the word is linear in y and a degree-n polynomial
    # map in x modulo gamma_2, so the simplex |alpha| <= n decides it.
    basis = _weight_one_basis(P, series)
    count = 0
    k = len(basis)
    points = [a for a in product(range(n + 1), repeat=k) if sum(a) <= n]
    for y in basis:
        for alpha in points:
            x = _prod(P, *[P.power(h, e) for h, e in zip(basis, alpha) if e])
            count += 1
            if any(engel_word(P, y, x, n)):
                return EngelVerdict(n, "grid", False, "exact", (x, y), count, 0,
                                    dict(params, branch="multilinear", basis=k))
    return EngelVerdict(n, "grid", True, "exact", None, count, 0,
                        dict(params, branch="multilinear", basis=k, points=len(points)))


def grid_counts(P: PcPresentation, weights: Sequence[int], c: int, n: int
                ) -> Tuple[List[int], List[int]]:
    """Coordinates and points per coordinate for the box grid.

    Coordinates of weight above c - n are pinned at 0.  A weight-w coordinate
    enters the collected exponents with degree at most c // w, so c // w + 2
    points leave one point of margin.  Ranges are capped at the relative order.
    """
    coords, counts = [], []
    for i, w in enumerate(weights):
        if w > c - n:
            continue
        m = P.relative_orders[i]
        coords.append(i)
        counts.append(min(m, c // w + 2))
    return coords, counts


def _engel_box(P, n, series: Series, params) -> EngelVerdict:
    c = series.nilpotency_class
    coords, counts = grid_counts(P, series.weights(), c, n)
    box = list(_coset_box(P, coords, counts))
    params = dict(params, branch="box", coordinates=coords, points=counts)
    count = 0
    for x in box:
        for y in box:
            count += 1
            if any(engel_word(P, y, x, n)):
                return EngelVerdict(n, "grid", False, "exact", (x, y), count, 0, params)
    return EngelVerdict(n, "grid", True, GRID_SOUNDNESS, None, count, 0, params)


# -- identity suites ----------------------------------------------------------

@dataclass
class SuiteReport:
    name: str
    samples: int = 0
    checks: int = 0
    violations: List[str] = field(default_factory=list)
    skipped: Optional[str] = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def fail(self, item: str, args: Sequence[Element]) -> None:
        self.violations.append(f"{item}: {tuple(args)}")


def _random_tuples(P, k, samples, rng) -> Iterator[Tuple[Element, ...]]:
    for _ in range(samples):
        yield tuple(P.random_element(rng) for _ in range(k))


def _check_mod(rep: SuiteReport, N: Subgroup, item: str, value: Element, args) -> None:
    rep.checks += 1
    if not N.member(value):
        rep.fail(item, args)


def gn_gamma5_relations(P: PcPresentation, a: Element, b: Element, c: Element
                        ) -> List[Tuple[str, Element]]:
    """Five 3-Engel relations in a, b, c that hold modulo gamma_5."""
    inv, pw = P.invert, P.power
    caab, caba, cbaa = _comm(P, c, a, a, b), _comm(P, c, a, b, a), _comm(P, c, b, a, a)
    cabb, cbab, cbba = _comm(P, c, a, b, b), _comm(P, c, b, a, b), _comm(P, c, b, b, a)
    return [
        ("i", _prod(P, caab, caba, cbaa, cabb, cbab, cbba)),
        ("ii", _prod(P, pw(caab, 2), pw(caba, 2), pw(cbaa, 2))),
        ("iii", _prod(P, _comm(P, b, a, a, c), inv(_prod(P, pw(cbaa, -3), pw(caab, -3))))),
        ("iv", _prod(P, pw(caab, 4), pw(cbaa, 6))),
        ("v", _prod(P, pw(cbaa, 2), pw(caba, -4))),
    ]


def gn_gamma6_relations(P: PcPresentation, a: Element, b: Element, c: Element
                        ) -> List[Tuple[str, Element]]:
    """The relations among w_1, ..., w_6 that hold modulo gamma_6."""
    inv, pw = P.invert, P.power
    w1, w2, w3 = _comm(P, c, a, a, b, b), _comm(P, c, a, b, a, b), _comm(P, c, a, b, b, a)
    w4, w5, w6 = _comm(P, c, b, a, a, b), _comm(P, c, b, a, b, a), _comm(P, c, b, b, a, a)
    w12 = inv(_prod(P, w2, w1))  # w1^-1 w2^-1
    return [
        ("i", _comm(P, c, a, b, a, a)),
        ("ii", _comm(P, c, a, a, b, a)),
        ("iii.a", _prod(P, w3, inv(w12))),
        ("iii.b", _prod(P, w4, inv(w12))),
        ("iii.c", _prod(P, w2, inv(w5))),
        ("iii.d", _prod(P, w1, inv(w6))),
        ("iv", _comm(P, b, a, a, b, c)),
        ("v.a", _prod(P, w2, pw(w1, -3))),
        ("v.b", _prod(P, w3, pw(w1, 4))),
        ("vi", pw(w1, 10)),
    ]


def check_gn_gamma5(P: PcPresentation, triples, series: Optional[Series] = None) -> SuiteReport:
    series = series or Series(P)
    rep = SuiteReport("gn-gamma5")
    N = series.gamma(5)
    for t in triples:
        rep.samples += 1
        for item, value in gn_gamma5_relations(P, *t):
            _check_mod(rep, N, item, value, t)
    return rep


def check_gn_gamma6(P: PcPresentation, triples, series: Optional[Series] = None) -> SuiteReport:
    series = series or Series(P)
    rep = SuiteReport("gn-gamma6")
    N = series.gamma(6)
    for t in triples:
        rep.samples += 1
        for item, value in gn_gamma6_relations(P, *t):
            _check_mod(rep, N, item, value, t)
    return rep


def check_first_entry(P: PcPresentation, tuples, series: Optional[Series] = None) -> SuiteReport:
    """[x_1..x_n, y] lies in <[y, x_s(1), ..., x_s(n)]> gamma_{n+2}.

    Each tuple is (x_1, ..., x_n, y).
    """
    series = series or Series(P)
    rep = SuiteReport("first-entry")
    for t in tuples:
        *xs, y = t
        n = len(xs)
        rep.samples += 1
        gens = [_comm(P, y, *perm) for perm in set(permutations(xs))]
        H = closure(P, gens + series.gamma(n + 2).igs)
        _check_mod(rep, H, f"n={n}", _comm(P, *xs, y), t)
    return rep


def _exponent_divides(P: PcPresentation, S: Subgroup, e: int) -> bool:
    """Every element of S has order dividing e."""
    if S.is_trivial():
        return True
    k = 0
    while e % P.p == 0:
        e //= P.p
        k += 1
    if k == 0:
        return False
    return agemo(P, S, k).is_trivial()


def _first_power_in(P: PcPresentation, x: Element, S: Subgroup) -> int:
    i = 0
    while not S.member(x):
        x = P.power(x, P.p)
        i += 1
    return i


def check_power_commutator_laws(P: PcPresentation, samples: int = 500,
                                rng: Optional[random.Random] = None,
                                series: Optional[Series] = None,
                                engel3: Optional[bool] = None) -> List[SuiteReport]:
    """Power law for commutators into the last term, the gamma_5^2 = gamma_6 = 1
    power law, and the metabelian square law for 2-groups."""
    rng = rng or random.Random(0)
    series = series or Series(P)
    c = series.nilpotency_class
    out = []

    # [x, y_1..y_{n-2}]^{p^{i+1}} = 1 when gamma_n^p = gamma_{n+1} = 1 and x^{p^i} in G'.
    # Applied in G/N with N = gamma_n^p gamma_{n+1}, which satisfies the hypothesis for
    # every n; N <= G' so the condition on x is unchanged.
    rep = SuiteReport("power-in-last-term")
    if c < 2:
        rep.skipped = "needs class at least 2"
    else:
        D = series.gamma(2)
        for n in range(2, c + 1):
            N = closure(P, agemo(P, series.gamma(n), 1).igs + series.gamma(n + 1).igs)
            for t in _random_tuples(P, n - 1, samples, rng):
                rep.samples += 1
                x, ys = t[0], t[1:]
                i = _first_power_in(P, x, D)
                _check_mod(rep, N, f"n={n}", P.power(_comm(P, x, *ys), P.p ** (i + 1)), t)
    out.append(rep)

    # [x^{4k}, a, b, c] = [x, a, b, c]^{4k} when gamma_5^2 = gamma_6 = 1
    rep = SuiteReport("power-law-4k")
    if not (series.gamma(6).is_trivial() and _exponent_divides(P, series.gamma(5), 2)):
        rep.skipped = "needs gamma_5^2 = gamma_6 = 1"
    else:
        for t in _random_tuples(P, 4, samples, rng):
            x, a, b, cc = t
            k = rng.randint(1, 16)
            rep.samples += 1
            rep.checks += 1
            lhs = _comm(P, P.power(x, 4 * k), a, b, cc)
            rhs = P.power(_comm(P, x, a, b, cc), 4 * k)
            if lhs != rhs:
                rep.fail(f"k={k}", t)
    out.append(rep)

    # [a,b,c,d]^2 [a,c,b,d]^2 [a,d,c,b]^2 in gamma_5 for metabelian 3-Engel 2-groups
    rep = SuiteReport("metabelian-squares")
    if P.p != 2:
        rep.skipped = "needs p = 2"
    elif not is_metabelian(P):
        rep.skipped = "needs a metabelian group"
    elif engel3 is False:
        rep.skipped = "needs a 3-Engel group"
    else:
        N = series.gamma(5)
        for t in _random_tuples(P, 4, samples, rng):
            a, b, cc, d = t
            rep.samples += 1
            v = _prod(P, P.power(_comm(P, a, b, cc, d), 2), P.power(_comm(P, a, cc, b, d), 2),
                      P.power(_comm(P, a, d, cc, b), 2))
            _check_mod(rep, N, "square-law", v, t)
    out.append(rep)
    return out


# -- series bounds ------------------------------------------------------------

@dataclass
class BoundCheck:
    name: str
    holds: Optional[bool]
    detail: str = ""

    @property
    def applicable(self) -> bool:
        return self.holds is not None


def class_bound(p: int, r: int, metabelian: bool = False) -> Tuple[int, str]:
    """Largest class allowed for a powerful 3-Engel p-group of rank r."""
    if p not in (2, 5):
        if r == 3:
            bound, label = 3, "p != 2,5, r = 3"
        elif r >= 4:
            bound, label = 4, "p != 2,5, r >= 4"
        else:
            bound, label = 4, "p != 2,5"
    elif r == 3:
        bound, label = (3, "p = 5, r = 3") if p == 5 else (4, "p = 2, r = 3")
    elif 4 <= r <= 5:
        bound, label = 4, "p in {2,5}, 4 <= r <= 5"
    else:
        bound, label = 5, "p in {2,5}"
    if r <= 2:
        # rank <= 2 powerful groups have cyclic derived subgroup: class <= 3
        bound, label = min(bound, 3), "cyclic derived subgroup, n = 3"
    if metabelian and r >= 3:
        mb = 4 if p == 2 else 3
        if mb < bound:
            bound, label = mb, "metabelian, " + ("p = 2" if p == 2 else "p odd")
    return bound, label


def subgroup_power_and_bounds(P: PcPresentation, series: Optional[Series] = None,
                              powerful: Optional[bool] = None,
                              engel3: Optional[bool] = None) -> List[BoundCheck]:
    series = series or Series(P)
    p, c = P.p, series.nilpotency_class
    if powerful is None:
        powerful = is_powerful(P)
    out = []
    g5, g6 = series.gamma(5), series.gamma(6)

    if engel3 is False:
        out.append(BoundCheck("gamma5^20 = 1", None, "needs a 3-Engel group"))
    else:
        out.append(BoundCheck("gamma5^20 = 1", _exponent_divides(P, g5, 20),
                              f"|gamma_5| = {p}^{g5.log_order()}"))
    if powerful and engel3 is not False:
        out.append(BoundCheck("gamma6 = 1", g6.is_trivial(), f"|gamma_6| = {p}^{g6.log_order()}"))
    else:
        out.append(BoundCheck("gamma6 = 1", None, "needs a powerful 3-Engel group"))

    if powerful:
        bad = []
        if p == 2 and not agemo(P, None, 2).contains_subgroup(series.gamma(2)):
            bad.append("gamma_2 <= G^4")
        for m in range(1, c + 1):
            if not agemo(P, series.gamma(m), 1).contains_subgroup(series.gamma(m + 1)):
                bad.append(f"gamma_{m + 1} <= gamma_{m}^{p}")
        out.append(BoundCheck("powerful series", not bad, "; ".join(bad) or f"checked m <= {c}"))
    else:
        out.append(BoundCheck("powerful series", None, "group not powerful"))

    i = 1
    while p ** i < c:
        i += 1
    j = i + 1 if p == 2 else i
    H = agemo(P, None, j)
    out.append(BoundCheck(f"G^{p}^{j} powerful", is_powerful(P, H),
                          f"class {c} <= {p}^{i}, |H| = {p}^{H.log_order()}"
                          + ("" if getattr(H, "certified", True) else ", agemo sampled")))
    return out


def rank_class_check(P: PcPresentation, series: Optional[Series] = None,
                     metabelian: Optional[bool] = None) -> BoundCheck:
    """Compare the class with the bound for the computed rank and prime."""
    series = series or Series(P)
    r = rank(P)
    if metabelian is None:
        metabelian = is_metabelian(P)
    bound, label = class_bound(P.p, r, metabelian)
    c = series.nilpotency_class
    return BoundCheck(f"class bound ({label})", c <= bound,
                      f"rank {r}, class {c}, bound {bound}")
