import pytest
from hypothesis import given, settings, strategies as st

from corpus import build, labels
from engelkit.catalog import catalog
from engelkit.formats import (ExponentError, ParseError, UnknownGeneratorError, format_fp,
                              format_pcp, parse_fp, parse_pcp, parse_word)
from engelkit.words import (BinOp, Comm, FpPresentation, Gen, Neg, Num, Power, Product, PVar,
                            Relation, compile_word, eval_expr, format_word)

GENS = ("a", "b", "c")

exprs = st.recursive(
    st.one_of(st.integers(0, 30).map(Num), st.just(PVar())),
    lambda sub: st.one_of(
        sub.map(Neg),
        st.tuples(st.sampled_from("+-*"), sub, sub).map(lambda t: BinOp(*t)),
        st.tuples(sub, st.one_of(st.integers(0, 4).map(Num), st.just(PVar())))
        .map(lambda t: BinOp("^", *t))),
    max_leaves=4)

words = st.recursive(
    st.sampled_from(GENS).map(Gen),
    lambda sub: st.one_of(
        st.tuples(sub, exprs).map(lambda t: Power(*t)),
        st.lists(sub, min_size=2, max_size=3).map(lambda xs: Product(tuple(xs))),
        st.lists(sub, min_size=2, max_size=3).map(lambda xs: Comm(tuple(xs)))),
    max_leaves=6)


@settings(max_examples=200, deadline=None)
@given(w=words)
def test_word_round_trip(w):
    assert parse_word(format_word(w), GENS) == w


@settings(max_examples=100, deadline=None)
@given(ws=st.lists(st.tuples(words, st.one_of(st.none(), words)), min_size=1, max_size=4))
def test_fp_round_trip(ws):
    fp = FpPresentation(None, GENS, tuple(Relation(l, r) for l, r in ws))
    assert parse_fp(format_fp(fp)) == fp


@pytest.mark.parametrize("spec", [e for e in catalog() if not e.is_lie], ids=lambda e: e.name)
def test_catalog_files_round_trip(spec):
    fp = parse_fp(spec.source)
    again = parse_fp(format_fp(fp))
    assert again == fp
    assert format_fp(again) == format_fp(fp)


@pytest.mark.parametrize("label", labels())
def test_pcp_round_trip(label):
    P = build(label)
    Q = parse_pcp(format_pcp(P))
    assert Q == P
    assert format_pcp(Q) == format_pcp(P)


def test_negative_p_power_exponent():
    fp = parse_fp("%p 2\ngens a b\nrel [a,b] = a^(-p^5)\n")
    rel = fp.relations[0]
    assert rel.rhs == Power(Gen("a"), Neg(BinOp("^", PVar(), Num(5))))
    cw = compile_word(rel.relator(), {"a": 0, "b": 1}, 2)
    # relator is [a,b] (a^-32)^-1
    assert cw == ("prod", (("comm", (("g", 0), ("g", 1))), ("pow", ("pow", ("g", 0), -32), -1)))


def test_plain_p_exponent():
    fp = parse_fp("%p 3\ngens a b d\nrel [b,d] = a^(p)\n")
    cw = compile_word(fp.relations[0].relator(), {"a": 0, "b": 1, "d": 2}, 3)
    assert cw[1][1] == ("pow", ("pow", ("g", 0), 3), -1)


def test_expression_precedence():
    assert eval_expr(parse_word("a^(3*p^6)").exponent, 2) == 192
    assert eval_expr(parse_word("a^(-3*p^7)").exponent, 3) == -3 * 3 ** 7
    assert eval_expr(parse_word("a^(2-3-4)").exponent, 2) == -5


def test_p_argument_and_override():
    assert parse_fp("gens a\nrel a^p\n", p=5).p == 5
    assert parse_fp("%p 3\ngens a\nrel a^p\n", p=5).p == 3


def test_empty_generator_list():
    with pytest.raises(ParseError) as e:
        parse_fp("%p 2\ngens\n")
    assert e.value.line == 2


def test_unknown_generator_position():
    with pytest.raises(UnknownGeneratorError) as e:
        parse_fp("%p 3\ngens x y\nrel x^3\nrel y^3 z\n")
    assert (e.value.line, e.value.column) == (4, 9)


def test_syntax_error_position():
    with pytest.raises(ParseError) as e:
        parse_fp("%p 2\ngens a b\n\n  rel [a,b = a\n")
    assert e.value.line == 4
    assert e.value.column == 12
    assert "found '='" in str(e.value)


def test_bad_character_position():
    with pytest.raises(ParseError) as e:
        parse_fp("%p 2\ngens a b\nrel a^2 $ b\n")
    assert (e.value.line, e.value.column) == (3, 9)


def test_non_integer_exponent():
    with pytest.raises(ExponentError):
        parse_fp("%p 2\ngens a\nrel a^(p^(-1))\n")


def test_unknown_statement_and_missing_gens():
    with pytest.raises(ParseError):
        parse_fp("%p 2\nfoo a\n")
    with pytest.raises(ParseError):
        parse_fp("%p 2\nrel a^2\n")
    with pytest.raises(ParseError):
        parse_fp("# nothing\n")


def test_pow_line_shape():
    with pytest.raises(ParseError):
        parse_fp("%p 2\ngens a b\npow [a,b]^2 = 1\n")


def test_pcp_errors():
    with pytest.raises(ParseError):
        parse_pcp("%orders 2 2\n")
    with pytest.raises(ParseError):
        parse_pcp("%p 2\n%orders 2 2\ng1^4 = g2\n")
    with pytest.raises(UnknownGeneratorError):
        parse_pcp("%p 2\n%orders 2 2\ng2^g1 = g2 g7\n")
