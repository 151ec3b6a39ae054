import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realforms import (
    Q,
    euclid,
    laurent,
    parse_algebra,
    parse_element,
    parse_field,
    parse_form,
    parse_involution,
    parse_quat,
    parse_sherm,
    quad_ext,
)
from realforms.errors import ParseError
from realforms.fields import to_text
from realforms.quaternions import Canonical, IntUGamma

from strategies import elements

Q2 = quad_ext(Q, 2)
FIELDS = [Q, Q2, laurent(Q), laurent(Q2), euclid(Q), laurent(euclid(Q)), quad_ext(Q2, 3),
          euclid(Q2, Q2.orderings[1])]


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_field_round_trip(F):
    assert parse_field(F.to_text()) == F


@settings(max_examples=150)
@given(st.data())
def test_element_round_trip(data):
    F = data.draw(st.sampled_from(FIELDS))
    x = data.draw(elements(F))
    assert parse_element(to_text(x), F) == x


def test_element_text():
    F = laurent(Q)
    assert to_text(parse_element("-4*t", F)) == "-4*t"
    assert to_text(parse_element("t^-1", F)) == "t^-1"
    assert to_text(parse_element("(1 + sqrt(2))^2", Q2)) == "3 + 2*sqrt(2)"


def test_sqrt_of_square_resolves_to_witness():
    assert parse_element("sqrt(9/4)", Q) == parse_element("3/2", Q)
    with pytest.raises(ParseError):
        parse_element("sqrt(3)", Q)


def test_form_and_algebra_round_trip():
    q = parse_form("form(laurent(quadext(Q, 2)); 1, -t, sqrt(2), sqrt(2)*t)")
    assert parse_form(q.to_text()) == q
    A = parse_algebra("quat(laurent(Q); 2, t)")
    assert parse_algebra(A.to_text()) == A
    x = parse_quat("1 + t*i - 3/2*k", A)
    assert parse_quat(x.to_text(), A) == x
    h = parse_sherm("sherm(quat(laurent(Q); 2, t); j, k)")
    assert parse_sherm(h.to_text()) == h


def test_involutions():
    A = parse_algebra("quat(Q; -1, -1)")
    assert parse_involution("gamma", A) == Canonical()
    assert parse_involution("int_gamma(i)", A) == IntUGamma(A.i)
    assert parse_involution(IntUGamma(A.i).to_text(), A) == IntUGamma(A.i)


@pytest.mark.parametrize("bad", ["quadext(Q)", "foo(Q)", "laurent(Q", "euclid(quadext(Q, 2), *)"])
def test_bad_fields(bad):
    with pytest.raises(ParseError):
        parse_field(bad)


@pytest.mark.parametrize("bad", ["1 +", "x", "2**t", "t^(1/2)", "import os"])
def test_bad_elements(bad):
    with pytest.raises(ParseError):
        parse_element(bad, laurent(Q))
