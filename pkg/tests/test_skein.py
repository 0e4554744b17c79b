from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affcat.ring import RingDescriptor
from affcat.skein import (
    ZT_RING,
    LinkDiagram,
    SkeinError,
    braid_closure_pd,
    braid_corpus,
    canonical_key,
    closure_classes,
    curl,
    homflypt_pd,
    jones_pd,
    kauffman_delta,
    kauffman_framed,
    kauffman_poly,
    lickorish_check,
    oriented_smoothing,
    relabel,
    switch,
    unlink,
)
from affcat.tl import jones
from affcat.towers import homflypt_braid

z, t = ZT_RING.var("z"), ZT_RING.var("t")
TREFOIL = [1, 1, 1]
FIGURE_EIGHT = [1, -2, 1, -2]

words = st.integers(2, 4).flatmap(
    lambda n: st.tuples(
        st.lists(st.sampled_from([s * i for i in range(1, n) for s in (1, -1)]), max_size=5),
        st.just(n),
    )
)


def test_json_round_trip(tmp_path):
    d = braid_closure_pd(FIGURE_EIGHT, 3)
    path = tmp_path / "fig8.json"
    path.write_text(json.dumps(d.to_json()))
    assert LinkDiagram.load(str(path)) == d


@pytest.mark.parametrize(
    "data, message",
    [
        ({"crossings": [[0, 1, 2, 3]], "signs": [1, 1]}, "one sign"),
        ({"crossings": [[0, 1, 2, 3]], "signs": [2]}, "signs"),
        ({"crossings": [[0, 1, 2]], "signs": [1]}, "four slots"),
        ({"crossings": [[0, 1, 2, 4]], "signs": [1]}, "exactly twice"),
        ({"signs": []}, "malformed"),
        (
            {"crossings": [[0, 1, 1, 0]], "signs": [1], "orient": {"components": [[0], [1]]}},
            "orientation",
        ),
    ],
)
def test_bad_pd_data(data, message):
    with pytest.raises(SkeinError, match=message):
        LinkDiagram.from_json(data)


@pytest.mark.parametrize(
    "word, n, components, writhe",
    [([], 1, 1, 0), ([], 3, 3, 0), (TREFOIL, 2, 1, 3), ([1, 1], 2, 2, 2), (FIGURE_EIGHT, 3, 1, 0), ([1, -2, 3], 4, 1, 1)],
)
def test_braid_closure_shape(word, n, components, writhe):
    d = braid_closure_pd(word, n)
    assert d.component_count() == components
    assert d.writhe() == writhe
    assert len(d.crossings) == len(word)


def test_switch_and_smoothing():
    d = braid_closure_pd(TREFOIL, 2)
    assert switch(d, 0).signs == (-1, 1, 1)
    smoothed = oriented_smoothing(d, 0)
    assert len(smoothed.crossings) == 2
    assert smoothed.component_count() == 2


@pytest.mark.parametrize("word, n", [(TREFOIL, 2), (FIGURE_EIGHT, 3), ([1, -2, 3, 2], 4)])
def test_canonical_key_ignores_rotation_and_labels(word, n):
    keys = {canonical_key(braid_closure_pd(word[i:] + word[:i], n)) for i in range(len(word))}
    assert len(keys) == 1
    d = braid_closure_pd(word, n)
    assert canonical_key(relabel(d)) == canonical_key(d)


def test_corpus_sizes():
    corpus = braid_corpus(3, 3)
    assert len(corpus) == len({(tuple(w), n) for w, n in corpus})
    assert ([], 1) in corpus
    classes = closure_classes(corpus)
    assert sum(len(v) for v in classes.values()) == len(corpus)


# -- HOMFLYPT -------------------------------------------------------------------------------


def test_unknot_and_unlink():
    assert homflypt_pd(unlink(1)) == ZT_RING.one()
    assert homflypt_pd(unlink(2)) == (t - t**-1) * z**-1
    assert homflypt_pd(curl(1)) == ZT_RING.one()
    assert homflypt_pd(curl(-1)) == ZT_RING.one()


@settings(max_examples=60, deadline=None)
@given(words)
def test_homflypt_two_ways(wn):
    w, n = wn
    assert homflypt_pd(braid_closure_pd(w, n)) == homflypt_braid(w, n)


@settings(max_examples=30, deadline=None)
@given(words)
def test_homflypt_base_point_independent(wn):
    d = braid_closure_pd(*wn)
    assert homflypt_pd(d, memo=False, reverse=True) == homflypt_pd(d, memo=False)


def test_conway_skein_relation():
    # t P(+) - t^-1 P(-) = z P(0) on the trefoil's first crossing
    d = braid_closure_pd(TREFOIL, 2)
    lhs = t * homflypt_pd(d) - t**-1 * homflypt_pd(switch(d, 0))
    assert lhs == z * homflypt_pd(oriented_smoothing(d, 0))


# -- Jones -------------------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(words)
def test_jones_two_ways(wn):
    w, n = wn
    assert jones_pd(braid_closure_pd(w, n)) == jones(w, n)


def test_jones_unknot():
    assert jones_pd(unlink(1)) == RingDescriptor(("q",)).one()


# -- Kauffman and Dubrovnik ---------------------------------------------------------------------


def test_kauffman_trefoil_matches_tables():
    # table value -2a^2 - a^4 + (a^3 + a^5) z + (a^2 + a^4) z^2 with a = t^-1
    a = t**-1
    expected = -2 * a**2 - a**4 + (a**3 + a**5) * z + (a**2 + a**4) * z**2
    assert kauffman_poly(braid_closure_pd(TREFOIL, 2), 1) == expected


@pytest.mark.parametrize("eps", [1, -1])
def test_curl_identities(eps):
    assert kauffman_framed(curl(1), eps) == t
    assert kauffman_framed(curl(-1), eps) == t**-1
    assert kauffman_poly(curl(1), eps) == ZT_RING.one()


@pytest.mark.parametrize("eps", [1, -1])
def test_loop_value(eps):
    assert kauffman_framed(unlink(2), eps) == kauffman_delta(eps)
    assert z * (kauffman_delta(eps) + eps) == t + eps * t**-1


@pytest.mark.parametrize("eps", [1, -1])
def test_unoriented_skein_relation(eps):
    # X + eps X' = z (A + eps B) at the first crossing of the trefoil: A is the
    # oriented smoothing (a Hopf link); B is an unknot with two curls, and with one
    # strand reversed both curls are negative, so B = t^-2
    d = braid_closure_pd(TREFOIL, 2)
    x = kauffman_framed(d, eps) + eps * kauffman_framed(switch(d, 0), eps)
    assert x == z * (kauffman_framed(oriented_smoothing(d, 0), eps) + eps * t**-2)


@settings(max_examples=40, deadline=None)
@given(words)
def test_lickorish_identity(wn):
    assert lickorish_check(braid_closure_pd(*wn)).equal


def test_lickorish_on_the_trefoil():
    report = lickorish_check(braid_closure_pd(TREFOIL, 2))
    assert report.equal
    assert (report.writhe, report.components) == (3, 1)


def test_framed_base_point_independent():
    rng = random.Random(7)
    for _ in range(10):
        n = rng.randint(2, 4)
        w = [rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(rng.randint(0, 5))]
        d = braid_closure_pd(w, n)
        for eps in (1, -1):
            assert kauffman_framed(d, eps, memo=False, reverse=True) == kauffman_framed(d, eps, memo=False)
