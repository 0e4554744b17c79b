from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from affcat.term import (
    EMPTY,
    Gen,
    HTensor,
    Id,
    LinearTerm,
    ObjectWord,
    ParseError,
    TermError,
    VCompose,
    apply_generator_map,
    braid_word_term,
    compose_all,
    format_presentation,
    load_preset,
    parse_braid_word,
    parse_presentation,
    simplify,
    typecheck,
    word_braiding,
)
from affcat.tl import STRAND, kb_resolve


@pytest.fixture(scope="module")
def tl():
    return load_preset("tl")


@pytest.fixture(scope="module")
def sig(tl):
    return tl.signature


@pytest.mark.parametrize("name", ["tl", "braid", "hecke", "free"])
def test_presets_round_trip_through_text(name):
    p = load_preset(name)
    again = parse_presentation(format_presentation(p))
    assert again.relation_set() == p.relation_set()
    assert again.signature.generators == p.signature.generators


@pytest.mark.parametrize(
    "text, dom, cod",
    [
        ("cup", 0, 2),
        ("cap ; cup", 2, 2),
        ("(cup @ id(o)) ; (id(o) @ cap)", 1, 1),
        ("s - si", 2, 2),
        ("q^2 * id(o o) + (cap ; cup)", 2, 2),
        ("id()", 0, 0),
    ],
)
def test_parse_types(sig, text, dom, cod):
    t = sig.parse(text)
    assert (len(t.domain), len(t.codomain)) == (dom, cod)


@pytest.mark.parametrize("text", ["cup ; cup", "s + cup", "cap @", "nope", "id(x)", "(s"])
def test_parse_rejects_bad_terms(sig, text):
    with pytest.raises(TermError):
        sig.parse(text)


def test_parse_error_reports_position(sig):
    with pytest.raises(ParseError, match="position"):
        sig.parse("s ; ; s")


def test_format_then_parse_is_identity(sig):
    for text in ["(id(o) @ cup) ; (s @ id(o)) ; (id(o) @ cap)", "-q^-1 * s + 3 * (cap ; cup)", "cup @ cup"]:
        t = sig.parse(text)
        assert sig.parse(str(t)) == t


def test_simplify_drops_units(sig):
    oo = sig.parse_word("o o")
    t = VCompose(Id(oo), HTensor(Id(EMPTY), Gen("s")))
    assert simplify(t) == Gen("s")
    assert simplify(VCompose(Gen("s"), VCompose(Gen("si"), Gen("s")))) == simplify(
        VCompose(VCompose(Gen("s"), Gen("si")), Gen("s"))
    )


def test_typecheck_names_the_failure(sig):
    with pytest.raises(TermError, match="mismatch"):
        typecheck(VCompose(Gen("cup"), Gen("cup")), sig)


def test_linear_term_arithmetic(sig):
    a, b = sig.parse("s"), sig.parse("si")
    assert (a + b) - b == a
    assert (a - a).is_zero()
    with pytest.raises(TermError):
        a + sig.parse("cup")


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=6))
def test_braid_words_round_trip(word):
    text = " ".join(map(str, word))
    assert parse_braid_word(text, 3) == word


@pytest.mark.parametrize("text", ["0", "3", "-3", "a"])
def test_braid_word_rejects(text):
    with pytest.raises(TermError):
        parse_braid_word(text, 3)


def test_word_braiding_shapes(sig):
    o, oo = sig.parse_word("o"), sig.parse_word("o o")
    assert str(word_braiding(o, oo, sig, 1)) == "(s @ id(o)) ; (id(o) @ s)"
    assert str(word_braiding(o, oo, sig, -1)) == "(id(o) @ si) ; (si @ id(o))"
    assert word_braiding(EMPTY, oo, sig, 1) == Id(oo)


def test_word_braiding_inverse_is_inverse(sig):
    x, y = ObjectWord((STRAND,) * 2), ObjectWord((STRAND,))
    pos = LinearTerm.of(word_braiding(x, y, sig, 1), sig)
    neg = LinearTerm.of(word_braiding(x, y, sig, -1), sig)
    ident = LinearTerm.identity(x + y, sig)
    assert kb_resolve(pos.then(neg)) == kb_resolve(ident)


def test_apply_generator_map_is_functorial(sig):
    images = {"s": sig.parse("si"), "si": sig.parse("s")}
    t = sig.parse("(s @ id(o)) ; (id(o) @ si)")
    out = apply_generator_map(t, images, sig, passthrough=True)
    assert out == sig.parse("(si @ id(o)) ; (id(o) @ s)")
    with pytest.raises(TermError):
        apply_generator_map(sig.parse("cup"), images, sig)


def test_braid_word_term_matches_layers(sig):
    t = braid_word_term([1, -2], 3, sig, STRAND)
    assert str(t) == "(s @ id(o)) ; (id(o) @ si)"


def test_compose_all_is_bottom_to_top(sig):
    t = compose_all([Gen("cup"), Gen("s")])
    assert typecheck(t, sig) == (EMPTY, sig.parse_word("o o"))


@pytest.mark.parametrize(
    "text, message",
    [
        ("[objects]\nx dual_pair y\n", "dual"),
        ("[ring]\nvars = q\n[objects]\nq self_dual\n[generators]\nq : q -> q\n", "q"),
        ("[objects]\no self_dual\n[generators]\ns : o o -> o o braid_pos\n", "braid"),
        ("[bogus]\n", "section"),
    ],
)
def test_bad_presentations(text, message):
    with pytest.raises(TermError, match=message):
        parse_presentation(text)
