from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affcat.ring import GaussInt, I, LaurentPoly, RingDescriptor, RingError, parse_poly, PolyParseError

R = RingDescriptor(("q", "z"))
G = R.with_gaussian()


@st.composite
def polys(draw, ring=R, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.integers(-3, 3)) for _ in ring.variables)
        if ring.gaussian:
            c = GaussInt(draw(st.integers(-4, 4)), draw(st.integers(-4, 4)))
        else:
            c = draw(st.integers(-5, 5))
        terms[exps] = c
    return LaurentPoly(ring, terms)


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == R.zero()
    assert a * R.one() == a


@given(polys(G), polys(G))
def test_gaussian_axioms(a, b):
    assert a * b == b * a
    assert (a + b) * (a - b) == a * a - b * b


@given(polys(), polys())
def test_substitution_is_a_homomorphism(a, b):
    q, z = R.gens()
    image = {"q": q**2 * z**-1, "z": -z}
    assert (a * b).subst(image) == a.subst(image) * b.subst(image)
    assert (a + b).subst(image) == a.subst(image) + b.subst(image)


@given(polys())
def test_json_round_trip(a):
    assert LaurentPoly.from_json(a.to_json()) == a


@given(polys(G))
def test_gaussian_json_round_trip(a):
    # the zero polynomial has no terms to reveal its coefficient kind
    back = LaurentPoly.from_json(a.to_json(), coefficient_kind=G.coefficient_kind)
    assert back == a
    assert back.ring.gaussian


@given(polys())
@settings(max_examples=60)
def test_str_parse_round_trip(a):
    assert parse_poly(str(a), R) == a


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1", {(0, 0): 1}),
        ("-q^-2 - q^2", {(-2, 0): -1, (2, 0): -1}),
        ("3*q*z^-1", {(1, -1): 3}),
        ("(q + 1)^2", {(2, 0): 1, (1, 0): 2, (0, 0): 1}),
        ("q^-1*(q - q^-1)", {(0, 0): 1, (-2, 0): -1}),
    ],
)
def test_parse_examples(text, expected):
    assert parse_poly(text, R) == LaurentPoly(R, expected)


@pytest.mark.parametrize("text", ["q +", "w", "q^", "(q", "2**q"])
def test_parse_errors(text):
    with pytest.raises(PolyParseError):
        parse_poly(text, R)


def test_inverse_of_units_only():
    q, z = R.gens()
    assert (-(q**3)).inverse() == -(q**-3)
    with pytest.raises(RingError):
        (q + 1).inverse()
    with pytest.raises(RingError):
        (2 * q).inverse()


def test_substituting_a_non_unit_for_a_negative_power_fails():
    q, z = R.gens()
    with pytest.raises(RingError):
        (q**-1).subst({"q": q + z})
    assert (q**2).subst({"q": q + z}) == q * q + 2 * q * z + z * z


def test_gaussian_unit_arithmetic():
    assert I * I == -1
    assert I.inverse() == GaussInt(0, -1)
    assert (G.const(I) ** 4) == G.one()
    assert str(G.const(I) * G.var("q")) == "i*q"


def test_ring_mismatch_is_an_error():
    with pytest.raises(RingError):
        R.var("q") + RingDescriptor(("q",)).var("q")


def test_lift_into_a_larger_ring():
    small = RingDescriptor(("q",))
    assert small.var("q").lift(R) == R.var("q")
    assert small.var("q").lift(G) == G.var("q")


def test_duplicate_variables_rejected():
    with pytest.raises(RingError):
        RingDescriptor(("q", "q"))
