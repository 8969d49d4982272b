"""Text formats.

``.fp`` (finite presentations), one statement per line::

    # comment
    %p 2
    gens a b c
    rel [a,b] = a^(-p^5)
    rel [a,b,b]              # bare relator
    pow a^(p^12) = 1

Words are products of factors separated by blanks or ``*``.  A factor is a
generator, ``[w1, w2, ...]`` (left-normed commutator) or ``(w)``, optionally
followed by ``^e``.  An exponent ``e`` is an integer, ``p``, ``-`` followed by
one of those, or a parenthesised expression over integers and ``p`` with
``+ - * ^``.  ``1`` denotes the empty word.

``.pcp`` (consistent power-commutator presentations)::

    %p 3
    %names b a
    %orders 9 27
    %weights 1 1
    a^b = a^4
    b^9 = 1        # trivial relations may be omitted

Right-hand sides are collected words ``g^k h^l ...`` with exponents in the
canonical range ``[0, m)``.  Conjugation lines read ``g_j^g_i = ...`` with
``i < j``; power lines read ``g_i^m = ...`` with ``m`` the relative order.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .pcgroup import PcPresentation
from .words import (BinOp, Comm, Expr, FpPresentation, Gen, IDENTITY, Neg, Num, Power, Product,
                    PVar, Relation, Word, eval_expr, ExpressionError)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class UnknownGeneratorError(ParseError):
    pass


class ExponentError(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[\^*()\[\],+\-=]))")


class _Lexer:
    def __init__(self, text: str, line: int, offset: int, stop: Optional[str] = None):
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        self.raw_text = text
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                col = offset + pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
                raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r}", line, col)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), offset + m.start(kind) + 1))
            pos = m.end()
        self.i = 0
        self.line = line
        self.end_col = offset + len(text) + 1
        self.stop = stop  # token that ended this span, reported instead of end of line
        if stop:
            self.end_col = offset + len(self.raw_text) + 1

    def peek(self, k: int = 0):
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else ("eof", self.stop or "", self.end_col)

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.next()
        if t[1] != value:
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of line'!r}", self.line, t[2])
        return t

    def error(self, msg: str):
        raise ParseError(msg, self.line, self.peek()[2])


def _parse_expr(lx: _Lexer) -> Expr:
    e = _parse_term(lx)
    while lx.peek()[1] in ("+", "-"):
        op = lx.next()[1]
        e = BinOp(op, e, _parse_term(lx))
    return e


def _parse_term(lx: _Lexer) -> Expr:
    e = _parse_unary(lx)
    while lx.peek()[1] == "*":
        lx.next()
        e = BinOp("*", e, _parse_unary(lx))
    return e


def _parse_unary(lx: _Lexer) -> Expr:
    if lx.peek()[1] == "-":
        lx.next()
        return Neg(_parse_unary(lx))
    base = _parse_primary(lx)
    if lx.peek()[1] == "^":
        lx.next()
        return BinOp("^", base, _parse_unary(lx))
    return base


def _parse_primary(lx: _Lexer) -> Expr:
    kind, val, col = lx.next()
    if kind == "num":
        return Num(int(val))
    if kind == "name" and val == "p":
        return PVar()
    if val == "(":
        e = _parse_expr(lx)
        lx.expect(")")
        return e
    raise ParseError(f"bad exponent expression near {val or 'end of line'!r}", lx.line, col)


def _parse_exponent(lx: _Lexer) -> Expr:
    """Exponent after ``^`` in a word: an atom, optionally negated."""
    if lx.peek()[1] == "-":
        lx.next()
        return Neg(_parse_exponent(lx))
    return _parse_primary(lx)


def _parse_word(lx: _Lexer, gens) -> Word:
    factors = []
    while True:
        t = lx.peek()
        if t[0] == "name" or t[1] in ("[", "(") or (t[0] == "num" and t[1] == "1"):
            factors.append(_parse_factor(lx, gens))
            if lx.peek()[1] == "*":
                lx.next()
            continue
        break
    if not factors:
        lx.error("expected a word")
    factors = [f for f in factors if f != IDENTITY]
    if len(factors) == 1:
        return factors[0]
    return Product(tuple(factors))


def _parse_factor(lx: _Lexer, gens) -> Word:
    kind, val, col = lx.next()
    if kind == "name":
        if val == "p":
            raise ParseError("'p' is reserved for the prime", lx.line, col)
        if gens is not None and val not in gens:
            raise UnknownGeneratorError(f"unknown generator {val!r}", lx.line, col)
        w: Word = Gen(val)
    elif kind == "num" and val == "1":
        w = IDENTITY
    elif val == "[":
        items = [_parse_word(lx, gens)]
        while lx.peek()[1] == ",":
            lx.next()
            items.append(_parse_word(lx, gens))
        lx.expect("]")
        if len(items) < 2:
            raise ParseError("commutator needs at least two entries", lx.line, col)
        w = Comm(tuple(items))
    elif val == "(":
        w = _parse_word(lx, gens)
        lx.expect(")")
        if isinstance(w, (Gen, Comm)):
            pass
    else:
        raise ParseError(f"unexpected token {val!r}", lx.line, col)
    while lx.peek()[1] == "^":
        lx.next()
        w = Power(w, _parse_exponent(lx))
    return w


def parse_word(text: str, gens=None) -> Word:
    lx = _Lexer(text, 1, 0)
    w = _parse_word(lx, gens)
    if lx.peek()[0] != "eof":
        lx.error(f"trailing input {lx.peek()[1]!r}")
    return w


def parse_fp(text: str, p: Optional[int] = None) -> FpPresentation:
    """Parse ``.fp`` text.  A ``%p`` line overrides the ``p`` argument."""
    gens = None
    relations: List[Relation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        offset = len(line) - len(line.lstrip())
        head, _, rest = stripped.partition(" ")
        rest_off = offset + len(head) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if head == "%p":
            if not re.fullmatch(r"\d+", rest):
                raise ParseError("%p expects an integer", lineno, rest_off + 1)
            p = int(rest)
        elif head == "gens":
            names = rest.replace(",", " ").split()
            if not names:
                raise ParseError("empty generator list", lineno, offset + 1)
            for nm in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm) or nm == "p":
                    raise ParseError(f"bad generator name {nm!r}", lineno, offset + 1)
            gens = tuple(names)
        elif head in ("rel", "pow"):
            if gens is None:
                raise ParseError("relation before 'gens' line", lineno, offset + 1)
            lhs_text, eq, rhs_text = rest.partition("=")
            lx = _Lexer(lhs_text, lineno, rest_off, "=" if eq else None)
            lhs = _parse_word(lx, gens)
            if lx.peek()[0] != "eof":
                lx.error(f"unexpected {lx.peek()[1]!r}")
            rhs = None
            if eq:
                lx2 = _Lexer(rhs_text, lineno, rest_off + len(lhs_text) + 1)
                rhs = _parse_word(lx2, gens)
                if lx2.peek()[0] != "eof":
                    lx2.error(f"unexpected {lx2.peek()[1]!r}")
            if head == "pow" and not (isinstance(lhs, Power) and isinstance(lhs.base, Gen)):
                raise ParseError("pow line must start with <gen>^<exponent>", lineno, rest_off + 1)
            relations.append(Relation(lhs, rhs, head))
        else:
            raise ParseError(f"unknown statement {head!r}", lineno, offset + 1)
    if gens is None:
        raise ParseError("missing 'gens' line")
    fp = FpPresentation(p, gens, tuple(relations))
    if p is not None:
        check_exponents(fp)
    return fp


def check_exponents(fp: FpPresentation) -> None:
    """Evaluate every exponent once so bad expressions fail at parse time."""
    def walk(w):
        if isinstance(w, Power):
            try:
                eval_expr(w.exponent, fp.p)
            except ExpressionError as exc:
                raise ExponentError(str(exc)) from None
            walk(w.base)
        elif isinstance(w, Product):
            for f in w.factors:
                walk(f)
        elif isinstance(w, Comm):
            for f in w.items:
                walk(f)
    for r in fp.relations:
        walk(r.lhs)
        if r.rhs is not None:
            walk(r.rhs)


def format_fp(fp: FpPresentation) -> str:
    lines = []
    if fp.p is not None:
        lines.append(f"%p {fp.p}")
    lines.append("gens " + " ".join(fp.generators))
    lines.extend(r.text() for r in fp.relations)
    return "\n".join(lines) + "\n"


# -- .pcp --------------------------------------------------------------------

def format_element(P: PcPresentation, vec) -> str:
    parts = []
    for k, v in enumerate(vec):
        if v:
            parts.append(P.names[k] if v == 1 else f"{P.names[k]}^{v}")
    return " ".join(parts) if parts else "1"


def format_pcp(P: PcPresentation) -> str:
    if P.n_finite != P.n:
        raise ValueError("cannot serialise presentations with infinite generators")
    lines = [f"%p {P.p}", "%names " + " ".join(P.names),
             "%orders " + " ".join(map(str, P.relative_orders)),
             "%weights " + " ".join(map(str, P.weights))]
    for i, rhs in P.power_items():
        lines.append(f"{P.names[i]}^{P.relative_orders[i]} = {format_element(P, rhs)}")
    for (j, i), rhs in P.conjugation_items():
        lines.append(f"{P.names[j]}^{P.names[i]} = {format_element(P, rhs)}")
    return "\n".join(lines) + "\n"


def parse_pcp(text: str) -> PcPresentation:
    p = None
    names = orders = weights = None
    body = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("%"):
            key, _, val = line.partition(" ")
            try:
                if key == "%p":
                    p = int(val)
                elif key == "%names":
                    names = val.split()
                elif key == "%orders":
                    orders = [int(x) for x in val.split()]
                elif key == "%weights":
                    weights = [int(x) for x in val.split()]
                else:
                    raise ParseError(f"unknown directive {key}", lineno, 1)
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(f"bad value for {key}", lineno, len(key) + 2) from None
        else:
            body.append((lineno, line))
    if p is None or orders is None:
        raise ParseError("missing %p or %orders")
    n = len(orders)
    if names is None:
        names = [f"g{i + 1}" for i in range(n)]
    if len(names) != n:
        raise ParseError("%names and %orders differ in length")
    idx = {nm: i for i, nm in enumerate(names)}
    power, conj = {}, {}
    for lineno, line in body:
        lhs, eq, rhs = line.partition("=")
        if not eq:
            raise ParseError("expected '='", lineno, len(line) + 1)
        m = re.fullmatch(r"\s*(\w+)\s*\^\s*(\w+)\s*", lhs)
        if not m or m.group(1) not in idx:
            raise ParseError("bad left-hand side", lineno, 1)
        g = idx[m.group(1)]
        vec = [0] * n
        for tok in rhs.split():
            if tok == "1":
                continue
            mm = re.fullmatch(r"(\w+)(?:\^(\d+))?", tok)
            if not mm or mm.group(1) not in idx:
                raise UnknownGeneratorError(f"bad factor {tok!r}", lineno, line.find(tok) + 1)
            vec[idx[mm.group(1)]] += int(mm.group(2) or 1)
        other = m.group(2)
        if other in idx:
            conj[(g, idx[other])] = vec
        else:
            if int(other) != orders[g]:
                raise ParseError("power exponent differs from relative order", lineno, 1)
            power[g] = vec
    return PcPresentation(p, orders, power, conj, weights, names)
