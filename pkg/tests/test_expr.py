import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetacurve import expr as ex
from thetacurve.algebra import (
    S3,
    UNKNOT,
    Kind,
    Label,
    Registry,
    connected_sum_knot,
    flat_knot,
    knot_prime,
    manifold_prime,
    product,
    tau_label,
    tau_manifold,
    theta_prime,
)
from thetacurve.oracle import word_of, word_value
from thetacurve.sampling import default_registry, random_expression

REG = default_registry()


def p(text, **kw):
    return ex.parse(text, REG, **kw)


def test_parse_tree_shapes():
    assert p("A * tau0(k)") == ex.Product((ex.ThetaRef("A"), ex.TauLabel(Label.ZERO, ex.KnotRef("k"))))
    assert p("tau-(k # flat(P))") == ex.TauLabel(
        Label.MINUS, ex.KnotSum((ex.KnotRef("k"), ex.Flat(ex.MfdRef("P"))))
    )
    assert p("tauM(S3)") == ex.TauManifold(ex.S3Expr())
    assert p("1") == ex.TrivialTheta()
    assert p("(A * B) * C") == ex.Product((ex.Product((ex.ThetaRef("A"), ex.ThetaRef("B"))), ex.ThetaRef("C")))


def test_sort_inference():
    assert ex.sort_of(p("k # l")) is Kind.KNOT
    assert ex.sort_of(p("P # Q")) is Kind.MANIFOLD
    assert ex.sort_of(p("flat(P)")) is Kind.KNOT
    assert ex.sort_of(p("S3")) is Kind.MANIFOLD
    assert ex.sort_of(p("unknot")) is Kind.KNOT
    assert ex.sort_of(p("(A)")) is Kind.THETA
    assert p("k", sort="knot") == ex.KnotRef("k")


@pytest.mark.parametrize(
    "text",
    ["A # B", "k * l", "tau0(A)", "tauM(k)", "flat(k)", "tau0(P)", "P * Q", "A * k", "tau+(S3)"],
)
def test_sort_errors(text):
    with pytest.raises(ex.SortError):
        p(text)


@pytest.mark.parametrize(
    "text, pos",
    [("A * ", 4), ("tau0(k", 6), ("A $ B", 2), ("tau0 k", 5), ("", 0), ("A B", 2), ("()", 1)],
)
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ex.ParseError) as info:
        p(text)
    assert not isinstance(info.value, ex.SortError)
    assert info.value.position == pos


def test_undeclared_name():
    with pytest.raises(ex.ParseError, match="undeclared name 'Z'"):
        p("A * Z")
    with pytest.raises(ValueError):
        ex.parse("A")


def test_implicit_names():
    seen = {}
    e = ex.parse("X * tau0(y # flat(W))", implicit=seen)
    assert seen == {"X": Kind.THETA, "y": Kind.KNOT, "W": Kind.MANIFOLD}
    assert ex.evaluate(e) == product(theta_prime("X"), tau_label(Label.ZERO, connected_sum_knot(knot_prime("y"), flat_knot(manifold_prime("W")))))
    # the first position fixes the kind for later parses sharing the dict
    with pytest.raises(ex.SortError):
        ex.parse("y * X", implicit=seen)
    assert ex.sort_of(ex.parse("y", implicit=seen)) is Kind.KNOT


def test_registry_takes_precedence_over_implicit():
    reg = Registry()
    reg.declare_prime("m", "manifold")
    seen = {}
    assert ex.parse("tauM(m)", reg, implicit=seen) == ex.TauManifold(ex.MfdRef("m"))
    assert seen == {}


def test_evaluate_examples():
    ev = lambda t: ex.evaluate(p(t))  # noqa: E731
    assert ev("A * tau0(k)") == ev("tau0(k) * A")
    assert ev("A * B") != ev("B * A")
    assert ev("tau0(k) * tau0(l)") == ev("tau0(k # l)")
    assert ev("tau0(k) * tau+(l)") != ev("tau0(k # l)")
    assert ev("tauM(P) * tauM(Q)") == ev("tauM(P # Q)")
    assert ev("tau0(flat(P))") == tau_manifold(manifold_prime("P"))
    assert ev("tau-(flat(P))") == ev("tau+(flat(P))")
    assert ev("tau0(unknot)") == ev("1") == ev("tauM(S3)")
    assert ev("k # unknot") == knot_prime("k")
    assert ev("S3 # S3") == S3
    assert ev("flat(S3)") == UNKNOT


def test_to_text_parenthesises_nested_operators():
    e = ex.KnotSum((ex.KnotSum((ex.KnotRef("k"), ex.KnotRef("l"))), ex.Unknot()))
    assert ex.to_text(e) == "(k # l) # unknot"
    assert p(ex.to_text(e)) == e
    with pytest.raises(TypeError):
        ex.to_text("k")


def test_prime_total():
    assert ex.prime_total(p("A * tau0(k # flat(P # Q)) * 1")) == 4
    assert ex.prime_total(p("tauM(S3)")) == 0


@given(st.integers(0, 2**32))
@settings(max_examples=300)
def test_print_parse_round_trip(seed):
    e = random_expression(random.Random(seed))
    text = ex.to_text(e)
    back = ex.parse(text, REG, sort=ex.sort_of(e))
    assert back == e
    assert ex.to_text(back) == text
    assert ex.evaluate(back) == ex.evaluate(e)


@given(st.integers(0, 2**32))
@settings(max_examples=200)
def test_evaluate_agrees_with_words(seed):
    e = random_expression(random.Random(seed))
    if ex.sort_of(e) is Kind.THETA:
        assert word_value(word_of(e)) == ex.evaluate(e)
