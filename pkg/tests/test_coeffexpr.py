import math

import pytest
from hypothesis import given, strategies as st

from ltvcommute.coeffexpr import (
    BinOp, Call, ClosedForm, DomainError, ExpressionSyntaxError, Neg, NonFiniteResult,
    Num, Pi, Tabulated, UnknownIdentifier, Var, evaluate, parse, pretty, tabulate,
)


def ev(text, k=0):
    return evaluate(parse(text), k)


@pytest.mark.parametrize("text, k, expected", [
    ("(k+1)^2", 2, 9.0),
    ("9 + 3*sin(0.1*pi*k)", 0, 9.0),
    ("exp(k)", 0, 1.0),
    ("2*k^2+4*k+1", 1, 7.0),
    ("2+3*4", 0, 14.0),
    ("2*3^2", 0, 18.0),
    ("-2^2", 0, -4.0),
    ("2^3^2", 0, 512.0),
    ("8/2/2", 0, 2.0),
    ("1-2-3", 0, -4.0),
    ("1.5e2 + .5", 0, 150.5),
    ("--k", 3, 3.0),
    ("cos(pi*k)", 1, -1.0),
    ("0.04^k", 2, 0.04 ** 2),
    ("(k-3)^2", 1, 4.0),
])
def test_evaluate_values(text, k, expected):
    assert ev(text, k) == pytest.approx(expected, rel=1e-15)


def test_parse_tree_shape():
    assert parse("-2^2") == Neg(BinOp("^", Num(2.0), Num(2.0)))
    assert parse("sin(pi*k)") == Call("sin", BinOp("*", Pi(), Var()))


def test_unbalanced_paren_reports_end_of_input():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("2*(k")
    assert info.value.position == len("2*(k")
    assert "end of input" in str(info.value)
    assert "')'" in info.value.expected


@pytest.mark.parametrize("text", ["", "   ", "2*", "k k", "sin k", "()", "2 $ 3", "pi(1)", "3 +"])
def test_syntax_errors(text):
    with pytest.raises(ExpressionSyntaxError):
        parse(text)


@pytest.mark.parametrize("text", ["e^k", "tan(k)", "x + 1", "K"])
def test_unknown_identifier(text):
    with pytest.raises(UnknownIdentifier):
        parse(text)


def test_domain_errors():
    with pytest.raises(DomainError) as info:
        ev("1/k", 0)
    assert info.value.k == 0
    with pytest.raises(DomainError):
        ev("(k-2)^0.5", 0)
    # integer exponent on a negative base is fine
    assert ev("(k-2)^3", 0) == -8.0


def test_non_finite():
    with pytest.raises(NonFiniteResult):
        ev("exp(k)", 1000)
    with pytest.raises(NonFiniteResult):
        ev("10^k", 400)
    with pytest.raises(NonFiniteResult):
        ev("sin(exp(exp(k)))", 7)


def test_tabulate():
    assert tabulate("k", 3).tolist() == [0.0, 1.0, 2.0, 3.0]
    assert tabulate("(k+1)^2", 2).tolist() == [1.0, 4.0, 9.0]
    assert tabulate(Tabulated([5, 6, 7]), 1).tolist() == [5.0, 6.0]
    t = Tabulated([5, 6, 7])
    assert tabulate(Tabulated(tabulate(t, 2)), 2).tolist() == tabulate(t, 2).tolist()


def test_tabulated_outside_horizon():
    t = Tabulated([1.0, 2.0])
    with pytest.raises(DomainError):
        t(2)
    with pytest.raises(DomainError):
        t.tabulate(2)
    with pytest.raises(NonFiniteResult):
        Tabulated([1.0, math.inf])


def test_tabulate_error_carries_k():
    with pytest.raises(DomainError) as info:
        tabulate("1/(k-3)", 5)
    assert info.value.k == 3


def test_pretty_canonical_spacing():
    assert pretty(parse("(k+1)^2")) == "(k + 1) ^ 2"
    assert pretty(parse("2*(3+k)")) == "2 * (3 + k)"
    assert pretty(parse("1-(2-3)")) == "1 - (2 - 3)"
    assert pretty(parse("(1-2)-3")) == "1 - 2 - 3"
    assert pretty(parse("(-2)^2")) == "(-2) ^ 2"
    assert pretty(parse("-(2*k)")) == "-(2 * k)"
    assert pretty(parse("2^(1+k)")) == "2 ^ (1 + k)"
    assert pretty(parse("(2^3)^2")) == "(2 ^ 3) ^ 2"


def test_determinism():
    e = parse("9 + 3*sin(0.1*pi*k) + exp(k/7)^1.3")
    a = [evaluate(e, k) for k in range(50)]
    b = [evaluate(e, k) for k in range(50)]
    assert a == b


# -- round trip ----------------------------------------------------------------

numbers = st.one_of(
    st.integers(0, 1000).map(str),
    st.floats(0, 1e6, allow_nan=False, allow_infinity=False).map(repr),
)
atoms = st.one_of(numbers, st.just("k"), st.just("pi"))


def _extend(children):
    return st.one_of(
        st.tuples(children, st.sampled_from("+-*/^"), children).map(lambda t: f"{t[0]}{t[1]}{t[2]}"),
        children.map(lambda c: f"({c})"),
        children.map(lambda c: f"-{c}"),
        st.tuples(st.sampled_from(["sin", "cos", "exp"]), children).map(lambda t: f"{t[0]}({t[1]})"),
    )


expressions = st.recursive(atoms, _extend, max_leaves=12)


@given(expressions)
def test_pretty_round_trip(text):
    try:
        tree = parse(text)
    except (ExpressionSyntaxError, UnknownIdentifier):
        return  # generator can glue tokens awkwardly, e.g. "1e5" + "k"
    assert parse(pretty(tree)) == tree


def test_closed_form_str():
    assert str(ClosedForm.from_text("2*exp(k)")) == "2 * exp(k)"
