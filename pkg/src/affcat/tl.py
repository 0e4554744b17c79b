"""Temperley-Lieb categories in the planar-matching basis.

A morphism m -> n is a linear combination of noncrossing perfect matchings of
m bottom points and n top points.  Composition glues matchings and multiplies by
the loop value for every closed component.  The braiding is the Kauffman bracket
``s = q id + q^-1 e`` and the twist is ``-q^3``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .ring import LaurentPoly, RingDescriptor
from .term import (
    BRAID_NEG,
    BRAID_POS,
    CAP,
    CUP,
    NONE,
    Gen,
    HTensor,
    Id,
    LinearTerm,
    Presentation,
    Signature,
    Term,
    TermError,
    VCompose,
    braid_word_term,
    load_preset,
    typecheck,
)

TL_RING = RingDescriptor(("q", "delta"))
Q_RING = RingDescriptor(("q",))
STRAND = ("o", NONE)


class TLError(ValueError):
    pass


def kb_loop() -> LaurentPoly:
    """Loop value forced by the Kauffman bracket, ``-q^2 - q^-2``."""
    q = TL_RING.var("q")
    return -(q**2) - q**-2


def generic_loop() -> LaurentPoly:
    return TL_RING.var("delta")


# -- matchings ----------------------------------------------------------------


@dataclass(frozen=True)
class PlanarMatching:
    """Noncrossing perfect matching; points 0..m-1 on the bottom, then m..m+n-1 on top."""

    bottom: int
    top: int
    pairing: tuple[int, ...]

    def __post_init__(self) -> None:
        size = self.bottom + self.top
        if len(self.pairing) != size or size % 2:
            raise TLError(f"bad matching size for ({self.bottom}, {self.top})")
        for i, j in enumerate(self.pairing):
            if not 0 <= j < size or j == i or self.pairing[j] != i:
                raise TLError(f"pairing {self.pairing} is not a perfect matching")
        # walk the boundary circle; a noncrossing matching closes arcs in stack order
        stack: list[int] = []
        for c in range(size):
            p = self._point(c)
            if stack and self.pairing[p] == stack[-1]:
                stack.pop()
            else:
                stack.append(p)
        if stack:
            raise TLError(f"pairing {self.pairing} has crossing arcs")

    def _point(self, c: int) -> int:
        """Boundary point at cyclic position c (bottom left to right, then top right to left)."""
        return c if c < self.bottom else self.bottom + self.top - 1 - (c - self.bottom)

    @classmethod
    def identity(cls, n: int) -> PlanarMatching:
        return cls(n, n, tuple(range(n, 2 * n)) + tuple(range(n)))

    @classmethod
    def cup(cls) -> PlanarMatching:
        return cls(0, 2, (1, 0))

    @classmethod
    def cap(cls) -> PlanarMatching:
        return cls(2, 0, (1, 0))

    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.pairing) if i < j]

    def tensor(self, other: PlanarMatching) -> PlanarMatching:
        m1, n1, m2, n2 = self.bottom, self.top, other.bottom, other.top
        m = m1 + m2

        def left(p: int) -> int:
            return p if p < m1 else m + (p - m1)

        def right(p: int) -> int:
            return m1 + p if p < m2 else m + n1 + (p - m2)

        out = [0] * (m + n1 + n2)
        for i, j in enumerate(self.pairing):
            out[left(i)] = left(j)
        for i, j in enumerate(other.pairing):
            out[right(i)] = right(j)
        return PlanarMatching(m, n1 + n2, tuple(out))

    def compose(self, lower: PlanarMatching) -> tuple[PlanarMatching, int]:
        """(self after lower, number of closed loops)."""
        if lower.top != self.bottom:
            raise TLError(f"shape mismatch: {lower.top} top points vs {self.bottom} bottom points")
        return _compose(self, lower)


@lru_cache(maxsize=1 << 16)
def _compose(g: PlanarMatching, f: PlanarMatching) -> tuple[PlanarMatching, int]:
    m, n, p = f.bottom, f.top, g.top
    out = [-1] * (m + p)
    seen = [False] * n

    def walk_from_f(x: int) -> int:
        # enter f at point x, return the outer endpoint reached (result indexing)
        while True:
            y = f.pairing[x]
            if y < m:
                return y
            j = y - m
            seen[j] = True
            y2 = g.pairing[j]
            if y2 >= n:
                return m + (y2 - n)
            seen[y2] = True
            x = m + y2

    def walk_from_g(x: int) -> int:
        while True:
            y = g.pairing[x]
            if y >= n:
                return m + (y - n)
            seen[y] = True
            y2 = f.pairing[m + y]
            if y2 < m:
                return y2
            j = y2 - m
            seen[j] = True
            x = j

    for i in range(m):
        if out[i] < 0:
            end = walk_from_f(i)
            out[i], out[end] = end, i
    for k in range(p):
        if out[m + k] < 0:
            end = walk_from_g(n + k)
            out[m + k], out[end] = end, m + k
    loops = 0
    for j in range(n):
        if not seen[j]:
            loops += 1
            x = j
            while not seen[x]:
                seen[x] = True
                y = f.pairing[m + x] - m
                seen[y] = True
                x = g.pairing[y]
    return PlanarMatching(m, p, tuple(out)), loops


def tl_basis(m: int, n: int) -> list[PlanarMatching]:
    """All noncrossing perfect matchings of m bottom and n top points."""
    if (m + n) % 2:
        raise TLError(f"odd number of boundary points: {m} + {n}")
    size = m + n

    def point(c: int) -> int:
        return c if c < m else m + n - 1 - (c - m)

    out = []
    for arcs in _noncrossing(0, size):
        pairing = [0] * size
        for a, b in arcs:
            pa, pb = point(a), point(b)
            pairing[pa], pairing[pb] = pb, pa
        out.append(PlanarMatching(m, n, tuple(pairing)))
    return sorted(out, key=lambda pm: pm.pairing)


def _noncrossing(lo: int, hi: int) -> list[list[tuple[int, int]]]:
    if lo >= hi:
        return [[]]
    out = []
    for mid in range(lo + 1, hi, 2):
        for inner in _noncrossing(lo + 1, mid):
            for outer in _noncrossing(mid + 1, hi):
                out.append([(lo, mid)] + inner + outer)
    return out


# -- linear combinations ---------------------------------------------------------


class TLElement:
    """Linear combination of planar matchings sharing one shape."""

    __slots__ = ("bottom", "top", "loop", "_terms")

    def __init__(
        self,
        bottom: int,
        top: int,
        terms: Mapping[PlanarMatching, LaurentPoly] | None = None,
        loop: LaurentPoly | None = None,
    ):
        self.bottom = bottom
        self.top = top
        self.loop = generic_loop() if loop is None else loop
        self._terms = {pm: c for pm, c in (terms or {}).items() if c}
        for pm in self._terms:
            if (pm.bottom, pm.top) != (bottom, top):
                raise TLError("matching shape differs from element shape")

    @property
    def ring(self) -> RingDescriptor:
        return self.loop.ring

    @classmethod
    def from_matching(cls, pm: PlanarMatching, loop: LaurentPoly | None = None, coeff=1) -> TLElement:
        loop = generic_loop() if loop is None else loop
        c = coeff if isinstance(coeff, LaurentPoly) else loop.ring.const(coeff)
        return cls(pm.bottom, pm.top, {pm: c}, loop)

    @classmethod
    def identity(cls, n: int, loop: LaurentPoly | None = None) -> TLElement:
        return cls.from_matching(PlanarMatching.identity(n), loop)

    @classmethod
    def zero(cls, bottom: int, top: int, loop: LaurentPoly | None = None) -> TLElement:
        return cls(bottom, top, {}, loop)

    def items(self) -> list[tuple[PlanarMatching, LaurentPoly]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].pairing)

    def coefficient(self, pm: PlanarMatching) -> LaurentPoly:
        return self._terms.get(pm, self.ring.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def _like(self, terms: Mapping[PlanarMatching, LaurentPoly], bottom=None, top=None) -> TLElement:
        return TLElement(self.bottom if bottom is None else bottom, self.top if top is None else top, terms, self.loop)

    def __add__(self, other: TLElement) -> TLElement:
        if (self.bottom, self.top) != (other.bottom, other.top):
            raise TLError("shape mismatch in addition")
        out = dict(self._terms)
        for pm, c in other._terms.items():
            out[pm] = out[pm] + c if pm in out else c
        return self._like(out)

    def __neg__(self) -> TLElement:
        return self.scale(-1)

    def __sub__(self, other: TLElement) -> TLElement:
        return self + (-other)

    def scale(self, c) -> TLElement:
        return self._like({pm: v * c for pm, v in self._terms.items()})

    def compose(self, lower: TLElement) -> TLElement:
        """self after lower."""
        if lower.top != self.bottom:
            raise TLError(f"shape mismatch: ({lower.bottom},{lower.top}) then ({self.bottom},{self.top})")
        out: dict[PlanarMatching, LaurentPoly] = {}
        powers: dict[int, LaurentPoly] = {}
        for pf, cf in lower._terms.items():
            for pg, cg in self._terms.items():
                pm, loops = pg.compose(pf)
                if loops not in powers:
                    powers[loops] = self.loop**loops
                c = cf * cg * powers[loops]
                out[pm] = out[pm] + c if pm in out else c
        return self._like(out, lower.bottom, self.top)

    def tensor(self, other: TLElement) -> TLElement:
        out: dict[PlanarMatching, LaurentPoly] = {}
        for p1, c1 in self._terms.items():
            for p2, c2 in other._terms.items():
                pm = p1.tensor(p2)
                out[pm] = out[pm] + c1 * c2 if pm in out else c1 * c2
        return self._like(out, self.bottom + other.bottom, self.top + other.top)

    def map_coefficients(self, fn) -> TLElement:
        return self._like({pm: fn(c) for pm, c in self._terms.items()})

    def specialize(self) -> TLElement:
        """Substitute the Kauffman-bracket loop value for delta everywhere."""
        loop = kb_loop()
        out = {pm: c.subst({"delta": loop}, TL_RING) for pm, c in self._terms.items()}
        return TLElement(self.bottom, self.top, out, loop)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TLElement):
            return NotImplemented
        return (self.bottom, self.top) == (other.bottom, other.top) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.bottom, self.top, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{pm.pairing}" for pm, c in self.items()) or "0"
        return f"TLElement({self.bottom}->{self.top}: {body})"


def tl_compose(g: TLElement, f: TLElement) -> TLElement:
    return g.compose(f)


def tl_tensor(f: TLElement, g: TLElement) -> TLElement:
    return f.tensor(g)


def cup_element(loop: LaurentPoly | None = None) -> TLElement:
    return TLElement.from_matching(PlanarMatching.cup(), loop)


def cap_element(loop: LaurentPoly | None = None) -> TLElement:
    return TLElement.from_matching(PlanarMatching.cap(), loop)


def e_element(i: int, n: int, loop: LaurentPoly | None = None) -> TLElement:
    """The generator e_i = cup after cap on strands i, i+1 (1-based) of n."""
    if not 1 <= i < n:
        raise TLError(f"e_{i} out of range for {n} strands")
    e = cup_element(loop).compose(cap_element(loop))
    return TLElement.identity(i - 1, loop).tensor(e).tensor(TLElement.identity(n - i - 1, loop))


def tl_close(f: TLElement) -> LaurentPoly:
    """Trace closure: top point i joins bottom point i around the right side."""
    if f.bottom != f.top:
        raise TLError(f"closure needs a square shape, got ({f.bottom}, {f.top})")
    n = f.bottom
    total = f.ring.zero()
    for pm, c in f._terms.items():
        parent = list(range(2 * n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in pm.arcs():
            parent[find(a)] = find(b)
        for i in range(n):
            parent[find(i)] = find(n + i)
        loops = len({find(x) for x in range(2 * n)})
        total = total + c * f.loop**loops
    return total


# -- evaluation of terms -------------------------------------------------------


def tl_presentation() -> Presentation:
    return load_preset("tl")


def tl_signature() -> Signature:
    return tl_presentation().signature


def kb_resolve(
    t: LinearTerm,
    specialize: bool = True,
    extra: Mapping[str, TLElement] | None = None,
) -> TLElement:
    """Evaluate a term over a braided TL signature in the matching basis.

    Crossings resolve by the Kauffman bracket.  With ``specialize`` the loop value
    is ``-q^2 - q^-2``; otherwise it stays the formal variable ``delta``.  Plain
    generators may be given explicit images through ``extra``.
    """
    loop = kb_loop() if specialize else generic_loop()
    q = TL_RING.var("q")
    qi = q**-1
    ident2 = TLElement.identity(2, loop)
    e = cup_element(loop).compose(cap_element(loop))
    sig = t.sig
    images: dict[str, TLElement] = {}
    for g in sig.generators:
        if g.tag == CUP:
            images[g.name] = cup_element(loop)
        elif g.tag == CAP:
            images[g.name] = cap_element(loop)
        elif g.tag == BRAID_POS:
            images[g.name] = ident2.scale(q) + e.scale(qi)
        elif g.tag == BRAID_NEG:
            images[g.name] = ident2.scale(qi) + e.scale(q)
    for name, img in (extra or {}).items():
        images[name] = img if img.loop == loop else TLElement(img.bottom, img.top, img._terms, loop)

    widths: dict[Term, tuple[int, int]] = {}

    def width(s: Term) -> tuple[int, int]:
        hit = widths.get(s)
        if hit is None:
            d, c = typecheck(s, sig)
            hit = widths[s] = (len(d), len(c))
        return hit

    def layers(s: Term, left: int, right: int, out: list[tuple[int, str, int]]) -> None:
        # (A @ B) = (A @ 1) ; (1 @ B), so every term is a chain of padded generators
        if isinstance(s, Id):
            for name, orient in s.word:
                if sig.object(name).duality != "self_dual":
                    raise TLError(f"object {name!r} is not the self-dual TL strand")
        elif isinstance(s, Gen):
            if s.name not in images:
                raise TLError(f"generator {s.name!r} ({sig.generator(s.name).tag}) has no Temperley-Lieb image")
            out.append((left, s.name, right))
        elif isinstance(s, VCompose):
            layers(s.lower, left, right, out)
            layers(s.upper, left, right, out)
        elif isinstance(s, HTensor):
            layers(s.left, left, right + width(s.right)[0], out)
            layers(s.right, left + width(s.left)[1], right, out)
        else:
            raise TypeError(s)

    padded: dict[tuple[int, str, int], TLElement] = {}

    def layer(key: tuple[int, str, int]) -> TLElement:
        hit = padded.get(key)
        if hit is None:
            left, name, right = key
            hit = TLElement.identity(left, loop).tensor(images[name]).tensor(TLElement.identity(right, loop))
            padded[key] = hit
        return hit

    def ev(s: Term) -> TLElement:
        chain: list[tuple[int, str, int]] = []
        layers(s, 0, 0, chain)
        r = TLElement.identity(width(s)[0], loop)
        for key in chain:
            r = layer(key).compose(r)
        return r

    total = TLElement.zero(len(t.domain), len(t.codomain), loop)
    for s, c in t.terms().items():
        total = total + ev(s).scale(c.lift(TL_RING))
    return total


def braid_element(word: Sequence[int], n: int, specialize: bool = True) -> TLElement:
    sig = tl_signature()
    return kb_resolve(braid_word_term(word, n, sig, STRAND), specialize=specialize)


def random_tl_element(m: int, n: int, rng: random.Random, terms: int = 3, specialize: bool = True) -> TLElement:
    """Random combination of matchings m -> n with small Laurent coefficients in q."""
    loop = kb_loop() if specialize else generic_loop()
    basis = tl_basis(m, n)
    q = TL_RING.var("q")
    out = TLElement.zero(m, n, loop)
    if not basis:
        return out
    for _ in range(terms):
        c = q ** rng.randint(-2, 2) * rng.choice([-2, -1, 1, 2])
        out = out + TLElement.from_matching(rng.choice(basis), loop, c)
    return out


def jones(word: Sequence[int], n: int) -> LaurentPoly:
    """Jones polynomial in q of the closure of a braid word on n strands.

    The closure is computed with a formal loop variable, divided by one loop and
    only then specialised; a leftover negative loop power means the division was
    inexact and raises ``RingError``.
    """
    closed = tl_close(braid_element(word, n, specialize=False))
    normalized = closed * TL_RING.var("delta") ** -1
    q = Q_RING.var("q")
    value = normalized.subst({"delta": -(q**2) - q**-2}, Q_RING)
    writhe = sum(1 if k > 0 else -1 for k in word)
    return value * (-(q**3)) ** (-writhe)


__all__ = [
    "PlanarMatching",
    "TLElement",
    "TLError",
    "TL_RING",
    "Q_RING",
    "braid_element",
    "random_tl_element",
    "cap_element",
    "cup_element",
    "e_element",
    "jones",
    "kb_loop",
    "kb_resolve",
    "tl_basis",
    "tl_close",
    "tl_compose",
    "tl_presentation",
    "tl_signature",
    "tl_tensor",
    "TermError",
]
