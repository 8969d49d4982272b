"""Group words, exponent expressions in ``p``, and finite presentations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union


class ExpressionError(ValueError):
    pass


# -- exponent expressions ---------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class PVar:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * ^
    left: "Expr"
    right: "Expr"


Expr = Union[Num, PVar, Neg, BinOp]


def eval_expr(e: Expr, p: Optional[int]) -> int:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, PVar):
        if p is None:
            raise ExpressionError("exponent uses p but no prime is fixed")
        return p
    if isinstance(e, Neg):
        return -eval_expr(e.arg, p)
    a, b = eval_expr(e.left, p), eval_expr(e.right, p)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "^":
        if b < 0:
            raise ExpressionError(f"non-integer exponent expression {a}^{b}")
        return a ** b
    raise ExpressionError(f"unknown operator {e.op}")


def format_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value) if e.value >= 0 else f"({e.value})"
    if isinstance(e, PVar):
        return "p"
    if isinstance(e, Neg):
        return "-" + _expr_atom(e.arg)
    return f"{_expr_atom(e.left)}{e.op}{_expr_atom(e.right)}"


def _expr_atom(e: Expr) -> str:
    s = format_expr(e)
    return s if isinstance(e, (Num, PVar)) else f"({s})"


# -- words ------------------------------------------------------------------

@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Power:
    base: "Word"
    exponent: Expr


@dataclass(frozen=True)
class Product:
    factors: Tuple["Word", ...]


@dataclass(frozen=True)
class Comm:
    """Left-normed commutator [w1, w2, ..., wk]."""
    items: Tuple["Word", ...]


Word = Union[Gen, Power, Product, Comm]

IDENTITY = Product(())


def format_word(w: Word) -> str:
    if isinstance(w, Gen):
        return w.name
    if isinstance(w, Product):
        if not w.factors:
            return "1"
        return " ".join(f"({format_word(f)})" if isinstance(f, Product) else format_word(f)
                        for f in w.factors)
    if isinstance(w, Comm):
        return "[" + ", ".join(format_word(x) for x in w.items) + "]"
    base = format_word(w.base)
    if isinstance(w.base, (Product, Power)):
        base = f"({base})"
    ex = w.exponent
    if isinstance(ex, (PVar,)) or (isinstance(ex, Num) and ex.value >= 0):
        es = format_expr(ex)
    else:
        es = "(" + format_expr(ex) + ")"
    return f"{base}^{es}"


def word_generators(w: Word) -> List[str]:
    if isinstance(w, Gen):
        return [w.name]
    if isinstance(w, Power):
        return word_generators(w.base)
    items = w.factors if isinstance(w, Product) else w.items
    out = []
    for x in items:
        out.extend(word_generators(x))
    return out


@dataclass(frozen=True)
class Relation:
    """``lhs = rhs``; ``rhs`` is None for a bare relator.  ``kind`` is "rel" or "pow"."""
    lhs: Word
    rhs: Optional[Word] = None
    kind: str = "rel"

    def relator(self) -> Word:
        if self.rhs is None:
            return self.lhs
        return Product((self.lhs, Power(self.rhs, Num(-1))))

    def text(self) -> str:
        s = f"{self.kind} {format_word(self.lhs)}"
        if self.rhs is not None:
            s += f" = {format_word(self.rhs)}"
        return s


@dataclass(frozen=True)
class FpPresentation:
    p: Optional[int]
    generators: Tuple[str, ...]
    relations: Tuple[Relation, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("presentation needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        known = set(self.generators)
        for r in self.relations:
            for side in (r.lhs, r.rhs):
                if side is None:
                    continue
                for g in word_generators(side):
                    if g not in known:
                        raise ValueError(f"unknown generator {g!r}")

    def relators(self) -> List[Word]:
        return [r.relator() for r in self.relations]

    def with_p(self, p: int) -> "FpPresentation":
        return FpPresentation(p, self.generators, self.relations)


# -- compiled words (exponents evaluated) -----------------------------------

def compile_word(w: Word, index: Dict[str, int], p: Optional[int]):
    """Turn a word into nested tuples with integer exponents."""
    if isinstance(w, Gen):
        return ("g", index[w.name])
    if isinstance(w, Power):
        return ("pow", compile_word(w.base, index, p), eval_expr(w.exponent, p))
    if isinstance(w, Product):
        return ("prod", tuple(compile_word(x, index, p) for x in w.factors))
    return ("comm", tuple(compile_word(x, index, p) for x in w.items))


def evaluate(P, images: Sequence, cw):
    """Evaluate a compiled word in the pc group ``P``."""
    tag = cw[0]
    if tag == "g":
        return images[cw[1]]
    if tag == "pow":
        return P.power(evaluate(P, images, cw[1]), cw[2])
    if tag == "prod":
        acc = P.identity
        for x in cw[1]:
            acc = P.multiply(acc, evaluate(P, images, x))
        return acc
    vals = [evaluate(P, images, x) for x in cw[1]]
    return P.comm_chain(vals[0], vals[1:])


def exponent_sums(cw, ngens: int) -> List[int]:
    """Image of a compiled word in the free abelian group."""
    tag = cw[0]
    if tag == "g":
        v = [0] * ngens
        v[cw[1]] = 1
        return v
    if tag == "pow":
        return [cw[2] * x for x in exponent_sums(cw[1], ngens)]
    if tag == "prod":
        v = [0] * ngens
        for x in cw[1]:
            v = [a + b for a, b in zip(v, exponent_sums(x, ngens))]
        return v
    return [0] * ngens


def evaluate_word(P, images: Dict[str, tuple], w: Word, p: Optional[int] = None):
    names = list(images)
    cw = compile_word(w, {n: i for i, n in enumerate(names)}, p)
    return evaluate(P, [images[n] for n in names], cw)
