from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affcat.affinize import coil_as_dots
from affcat.term import EMPTY, LinearTerm
from affcat.tl import TLElement, braid_element, e_element, kb_loop, random_tl_element
from affcat.towers import random_hecke
from affcat.traces import (
    HtrMorphism,
    TraceError,
    aff_tl_evaluate,
    aff_tl_signature,
    golf_census,
    hecke_commutator,
    htr_compose,
    htr_equivalent,
    htr_identity,
    htr_tensor,
    qtrace,
    random_aff_tl_term,
    theta,
    theta_coil,
    theta_prime,
    tl_commutator,
    vtrace_cocenter,
)

Q = kb_loop().ring
q = Q.var("q")
delta = -(q**2) - q**-2


@pytest.fixture(scope="module")
def sig():
    return aff_tl_signature()


@pytest.fixture(scope="module")
def tl_cocenter():
    return vtrace_cocenter("tl", 4)


@pytest.fixture(scope="module")
def hecke_cocenter():
    return vtrace_cocenter("hecke", 4)


# -- horizontal trace ----------------------------------------------------------------------------


def test_representative_type_is_checked(sig):
    o = sig.parse_word("o")
    with pytest.raises(TraceError, match="expected"):
        HtrMorphism(o, o, o, LinearTerm.identity(o, sig))


def test_theta_prime_of_a_plain_representative_is_literal(sig):
    for text in ["s", "cap ; cup", "q * id(o) ", "(cup @ id(o)) ; (id(o) @ cap)"]:
        f = sig.parse(text)
        assert theta_prime(HtrMorphism(f.domain, f.codomain, EMPTY, f)) == f.simplified()


def test_theta_coil_matches_dots(sig):
    o = sig.parse_word("o")
    for sign in (1, -1):
        lhs = theta_prime(theta_coil(o, o, sig, sign))
        assert aff_tl_evaluate(lhs, (0, 1)) == aff_tl_evaluate(coil_as_dots(o, o, sig, sign), (0, 1))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 100_000))
def test_theta_prime_inverts_theta(seed):
    t = random_aff_tl_term(random.Random(seed))
    assert aff_tl_evaluate(theta_prime(theta(t))) == aff_tl_evaluate(t)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 100_000))
def test_compose_is_respected(seed):
    rng = random.Random(seed)
    sig = aff_tl_signature()
    a = random_aff_tl_term(rng, 2, 2)
    b = random_aff_tl_term(rng, 2, 2)
    if a.codomain != b.domain:
        b = LinearTerm.identity(a.codomain, sig)
    composed = theta_prime(htr_compose(theta(b), theta(a)))
    assert aff_tl_evaluate(composed, (0, 1)) == aff_tl_evaluate(a.then(b), (0, 1))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 100_000))
def test_tensor_is_respected(seed):
    rng = random.Random(seed)
    a = random_aff_tl_term(rng, 2, 2)
    b = random_aff_tl_term(rng, 1, 2)
    tensored = theta_prime(htr_tensor(theta(a), theta(b)))
    assert aff_tl_evaluate(tensored, (0, 1)) == aff_tl_evaluate(a.tensor(b), (0, 1))


def test_identity_is_a_unit(sig):
    o = sig.parse_word("o")
    m = theta(sig.parse("dot_o"))
    assert htr_equivalent(htr_compose(m, htr_identity(o, sig)), m)
    assert htr_equivalent(htr_compose(htr_identity(o, sig), m), m)


def test_sliding_relation(sig):
    # [Z, (g @ 1) f] and [Z', f (1 @ g)] name one class for g : Z' -> Z in the base category
    o, oo = sig.parse_word("o"), sig.parse_word("o o")
    f = sig.parse("(s @ id(o)) ; (id(o) @ si)")
    for text in ["s", "cap ; cup", "q * id(o o) - si"]:
        g = sig.parse(text)
        left = HtrMorphism(o, o, oo, f.then(g.tensor(LinearTerm.identity(o, sig))))
        right = HtrMorphism(o, o, oo, LinearTerm.identity(o, sig).tensor(g).then(f))
        assert htr_equivalent(left, right)


def test_distinct_classes_are_separated(sig):
    o = sig.parse_word("o")
    assert not htr_equivalent(theta(sig.parse("dot_o")), htr_identity(o, sig))


def test_compose_type_mismatch(sig):
    o = sig.parse_word("o")
    with pytest.raises(TraceError, match="cannot compose"):
        htr_compose(htr_identity(o, sig), htr_identity(o + o, sig))


# -- vertical trace -------------------------------------------------------------------------------


@pytest.mark.parametrize("n, dim", [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
def test_tl_cocenter_dimension(n, dim):
    assert vtrace_cocenter("tl", n).dimension == dim


@pytest.mark.parametrize("n, dim", [(0, 1), (1, 2), (2, 4), (3, 7), (4, 12)])
def test_hecke_cocenter_dimension(n, dim):
    # one class per partition of each k <= n
    assert vtrace_cocenter("hecke", n).dimension == dim


def test_cocenter_is_stable_under_shuffling():
    base = vtrace_cocenter("hecke", 3)
    shuffled = vtrace_cocenter("hecke", 3, shuffle=random.Random(11))
    assert (base.dimension, base.rank) == (shuffled.dimension, shuffled.rank)


def test_cocenter_bounds():
    with pytest.raises(TraceError):
        vtrace_cocenter("tl", 6)
    with pytest.raises(TraceError, match="unknown model"):
        vtrace_cocenter("bmw", 2)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_tl_projection_kills_commutators(seed, tl_cocenter):
    rng = random.Random(seed)
    m = rng.randint(0, 4)
    n = rng.choice([k for k in range(5) if (k - m) % 2 == 0])
    f, g = random_tl_element(m, n, rng), random_tl_element(n, m, rng)
    assert tl_cocenter.project(tl_commutator(f, g)) == {}


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_hecke_projection_kills_commutators(seed, hecke_cocenter):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    assert hecke_cocenter.project(hecke_commutator(random_hecke(n, rng), random_hecke(n, rng))) == {}


def test_projection_keeps_nonzero_classes(tl_cocenter):
    # e_1 and id_2 are different classes in the cocenter, so e_1 - id_2 survives
    e = e_element(1, 2, kb_loop())
    vec = {pm: c for pm, c in e.items()}
    for pm, c in TLElement.identity(2, kb_loop()).items():
        vec[pm] = vec.get(pm, 0 * c) - c
    assert tl_cocenter.project({(2, pm): c for pm, c in vec.items()}) != {}


# -- quantum trace --------------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(5))
def test_qtrace_of_identity(n):
    assert qtrace(TLElement.identity(n)) == delta**n


def test_qtrace_of_crossing():
    assert qtrace(braid_element([1], 2)) == q + q**5


def test_qtrace_needs_an_endomorphism():
    with pytest.raises(TraceError, match="endomorphism"):
        qtrace(random_tl_element(0, 2, random.Random(0)))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 100_000))
def test_qtrace_is_cyclic(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    f, g = random_tl_element(n, n, rng), random_tl_element(n, n, rng)
    assert qtrace(f.compose(g)) == qtrace(g.compose(f))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 100_000))
def test_qtrace_is_multiplicative(seed):
    rng = random.Random(seed)
    a, b = rng.randint(0, 2), rng.randint(1, 2)
    f, g = random_tl_element(a, a, rng), random_tl_element(b, b, rng)
    assert qtrace(f.tensor(g)) == qtrace(f) * qtrace(g)


# -- golf census ----------------------------------------------------------------------------------


@pytest.mark.parametrize("k", range(6))
def test_golf_census(k):
    r = golf_census(k)
    assert r.htr_end_unit == k + 1
    assert r.aff_end_unit == 1
    assert r.aff_end_strand == 2 * k + 1
    assert r.aff_end_strand_invertible
    assert r.htr_end_strand_monoid


def test_golf_depth_must_be_non_negative():
    with pytest.raises(TraceError):
        golf_census(-1)
