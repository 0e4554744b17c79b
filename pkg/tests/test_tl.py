from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affcat.ring import RingDescriptor
from affcat.tl import (
    TL_RING,
    PlanarMatching,
    TLElement,
    TLError,
    braid_element,
    cap_element,
    cup_element,
    e_element,
    generic_loop,
    jones,
    kb_loop,
    random_tl_element,
    tl_basis,
    tl_close,
)

Q = RingDescriptor(("q",))
q = Q.var("q")
CATALAN = [1, 1, 2, 5, 14, 42, 132, 429]


def brute_force_noncrossing(size: int) -> set[frozenset[tuple[int, int]]]:
    """All noncrossing perfect matchings of `size` points on a circle, by filtering every matching."""

    def matchings(points):
        if not points:
            yield []
            return
        first, rest = points[0], points[1:]
        for k, other in enumerate(rest):
            for m in matchings(rest[:k] + rest[k + 1 :]):
                yield [(first, other)] + m

    out = set()
    for m in matchings(list(range(size))):
        if all(not (a < c < b < d or c < a < d < b) for (a, b), (c, d) in combinations(m, 2)):
            out.add(frozenset(m))
    return out


def boundary_arcs(pm: PlanarMatching) -> frozenset[tuple[int, int]]:
    pos = {pm._point(c): c for c in range(pm.bottom + pm.top)}
    return frozenset(tuple(sorted((pos[i], pos[j]))) for i, j in pm.arcs())


@pytest.mark.parametrize("n", range(8))
def test_basis_size_is_catalan(n):
    assert len(tl_basis(n, n)) == CATALAN[n]


@pytest.mark.parametrize("m, n", [(0, 0), (1, 1), (2, 2), (3, 3), (4, 4), (2, 4), (1, 3), (0, 6)])
def test_basis_matches_brute_force(m, n):
    assert {boundary_arcs(pm) for pm in tl_basis(m, n)} == brute_force_noncrossing(m + n)


def test_odd_shapes_are_rejected():
    with pytest.raises(TLError, match="odd"):
        tl_basis(1, 2)


def test_crossing_matching_rejected():
    with pytest.raises(TLError):
        PlanarMatching(2, 2, (3, 2, 1, 0))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_temperley_lieb_relations(n):
    loop = generic_loop()
    delta = TL_RING.var("delta")
    for i in range(1, n):
        e = e_element(i, n, loop)
        assert e.compose(e) == e.scale(delta)
        if i + 1 < n:
            f = e_element(i + 1, n, loop)
            assert e.compose(f).compose(e) == e
            assert f.compose(e).compose(f) == f
        for j in range(i + 2, n):
            g = e_element(j, n, loop)
            assert e.compose(g) == g.compose(e)


def test_zigzag():
    loop = generic_loop()
    ident = TLElement.identity(1, loop)
    left = cup_element(loop).tensor(ident)
    right = ident.tensor(cap_element(loop))
    assert right.compose(left) == ident


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    a, b, c = (random_tl_element(2, 2, rng) for _ in range(3))
    assert a.compose(b).compose(c) == a.compose(b.compose(c))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_interchange_law(seed):
    rng = random.Random(seed)
    a, b = random_tl_element(2, 2, rng), random_tl_element(2, 2, rng)
    c, d = random_tl_element(1, 3, rng), random_tl_element(3, 1, rng)
    assert a.compose(b).tensor(d.compose(c)) == a.tensor(d).compose(b.tensor(c))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_braid_relations_in_tl(n):
    one = TLElement.identity(n, kb_loop())
    for i in range(1, n):
        assert braid_element([i, -i], n) == one
        if i + 1 < n:
            assert braid_element([i, i + 1, i], n) == braid_element([i + 1, i, i + 1], n)


def test_close_of_identity_counts_loops():
    delta = TL_RING.var("delta")
    assert tl_close(TLElement.identity(3)) == delta**3


# Jones values from standard knot tables, with V(t) read at t = q^-4.
def t_(k: int):
    return q ** (-4 * k)


@pytest.mark.parametrize(
    "word, n, expected",
    [
        ([], 1, Q.one()),
        ([1], 2, Q.one()),
        ([1, 1, 1], 2, t_(1) + t_(3) - t_(4)),  # right-handed trefoil
        ([-1, -1, -1], 2, t_(-1) + t_(-3) - t_(-4)),  # left-handed trefoil
        ([1, -2, 1, -2], 3, t_(-2) - t_(-1) + Q.one() - t_(1) + t_(2)),  # figure eight
        ([1, 1, 1, 1, 1], 2, t_(2) + t_(4) - t_(5) + t_(6) - t_(7)),  # cinquefoil
    ],
)
def test_jones_against_tables(word, n, expected):
    assert jones(word, n) == expected


def test_jones_hopf_link():
    # -t^(1/2) - t^(5/2) for the positive Hopf link; in q that is -q^-2 - q^-10
    assert jones([1, 1], 2) == -(q**-2) - q**-10


def test_unlink_of_two():
    assert jones([], 2) == -(q**2) - q**-2
