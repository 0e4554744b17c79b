from __future__ import annotations

import pytest

from affcat.affinize import (
    AffinizeError,
    AffinizeOptions,
    affinize_presentation,
    coil_as_dots,
    flatten_term,
    mate,
)
from affcat.term import Gen, LinearTerm, apply_generator_map, load_preset, parse_presentation
from affcat.tl import tl_presentation
from affcat.traces import aff_tl_evaluate, aff_tl_signature

ANNULAR_BRAID = """\
[objects]
u no_dual

[generators]
s : u u -> u u braid_pos
si : u u -> u u braid_neg
dot_u : u -> u dot_pos
dotinv_u : u -> u dot_neg

[relations]
s ; si = id(u u)
si ; s = id(u u)
(s @ id(u)) ; (id(u) @ s) ; (s @ id(u)) = (id(u) @ s) ; (s @ id(u)) ; (id(u) @ s)
dotinv_u ; dot_u = id(u)
dot_u ; dotinv_u = id(u)
(dot_u @ id(u)) ; si = s ; (id(u) @ dot_u)
"""


@pytest.fixture(scope="module")
def sig():
    return aff_tl_signature()


@pytest.mark.parametrize(
    "name, pivotal, count",
    [("tl", False, 8), ("tl", True, 12), ("braid", False, 6), ("hecke", False, 7), ("free", False, 2), ("free", True, 2)],
)
def test_relation_counts(name, pivotal, count):
    p = affinize_presentation(load_preset(name), AffinizeOptions(pivotal=pivotal))
    assert len(p.relations) == count


def test_braid_affinization_is_the_annular_braid_category():
    ours = affinize_presentation(load_preset("braid"))
    assert ours.relation_set() == parse_presentation(ANNULAR_BRAID).relation_set()


@pytest.mark.parametrize("name", ["braid", "hecke"])
def test_pivotal_needs_duals(name):
    with pytest.raises(AffinizeError, match="duality"):
        affinize_presentation(load_preset(name), AffinizeOptions(pivotal=True))


def test_name_clash_is_reported():
    p = affinize_presentation(load_preset("braid"))
    with pytest.raises(AffinizeError, match="already in use"):
        affinize_presentation(p)


def test_lone_dot_flattens_to_the_twist(sig):
    assert flatten_term(sig.parse("dot_o")) == sig.parse("-q^3 * id(o)")
    assert flatten_term(sig.parse("dotinv_o")) == sig.parse("-q^-3 * id(o)")


@pytest.mark.parametrize(
    "text",
    ["id(o)", "cap ; cup", "s ; (cap ; cup) ; si", "(cup @ id(o)) ; (id(o) @ s) ; (id(o) @ cap)", "q * s - si"],
)
def test_flatten_fixes_dot_free_terms(sig, text):
    # on the base category at the empty pole the action is the identity
    t = sig.parse(text)
    assert flatten_term(t) == t


def test_relations_hold_after_flattening(sig):
    p = affinize_presentation(tl_presentation(), AffinizeOptions(pivotal=True))
    for lhs, rhs in p.relations:
        assert aff_tl_evaluate(lhs, (0, 1, 2)) == aff_tl_evaluate(rhs, (0, 1, 2)), (str(lhs), str(rhs))


def test_coil_as_dots(sig):
    x = sig.parse_word("o")
    assert str(coil_as_dots(x, x, sig, 1)) == "(id(o) @ dot_o) ; s"
    assert str(coil_as_dots(x, x, sig, -1)) == "si ; (id(o) @ dotinv_o)"


def test_coil_and_inverse_cancel(sig):
    x, xx = sig.parse_word("o"), sig.parse_word("o o")
    c, ci = coil_as_dots(x, xx, sig, 1), coil_as_dots(x, xx, sig, -1)
    ident = LinearTerm.identity(x + xx, sig)
    assert aff_tl_evaluate(c.then(ci), (0, 1)) == aff_tl_evaluate(ident, (0, 1))


def test_mate_of_dot(sig):
    x = sig.parse_word("o")
    assert str(mate(Gen("dot_o"), x[0], sig)) == "(cup @ id(o)) ; (id(o) @ dot_o @ id(o)) ; (id(o) @ cap)"


def test_racoon_relation(sig):
    # rewrite the crossing slide through the bracket and rearrange
    slide_lhs = sig.parse("(dot_o @ id(o)) ; si")
    slide_rhs = sig.parse("s ; (id(o) @ dot_o)")
    images = {"s": sig.parse("q * id(o o) + q^-1 * (cap ; cup)"), "si": sig.parse("q^-1 * id(o o) + q * (cap ; cup)")}
    lhs = apply_generator_map(slide_lhs, images, sig, passthrough=True)
    rhs = apply_generator_map(slide_rhs, images, sig, passthrough=True)
    racoon_lhs = sig.parse("q * (id(o) @ dot_o) - q^-1 * (dot_o @ id(o))")
    racoon_rhs = sig.parse("q * ((dot_o @ id(o)) ; cap ; cup) - q^-1 * (cap ; cup ; (id(o) @ dot_o))")
    assert ((lhs - rhs) + (racoon_lhs - racoon_rhs)).simplified().is_zero()
    assert aff_tl_evaluate(racoon_lhs, (0, 1, 2)) == aff_tl_evaluate(racoon_rhs, (0, 1, 2))
