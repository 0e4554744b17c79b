"""Hecke towers: Iwahori-Hecke algebras, Markov trace, Jucys-Murphy elements,
affine Hecke normal forms and the wreath-product model.

Conventions: ``T_i^2 = 1 + z T_i``, a negative crossing is ``T_i - z``, and a braid
word (read bottom to top) ``[w1, ..., wk]`` evaluates to ``T_wk ... T_w1``.
Permutations are tuples in one-line notation on ``0..n-1`` with ``(uv)(x) = u(v(x))``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .ring import LaurentPoly, RingDescriptor
from .term import (
    BRAID_NEG,
    BRAID_POS,
    Gen,
    HTensor,
    Id,
    LinearTerm,
    ObjectWord,
    Presentation,
    Signature,
    Term,
    UP,
    VCompose,
    load_preset,
    pad,
    word_braiding,
)

HECKE_RING = RingDescriptor(("z", "t", "delta"))
HOMFLY_RING = RingDescriptor(("z", "t"))
UPSTRAND = ("u", UP)

Perm = tuple[int, ...]


class TowerError(ValueError):
    pass


# -- permutations -----------------------------------------------------------------


def perm_identity(n: int) -> Perm:
    return tuple(range(n))


def perm_mul(u: Perm, v: Perm) -> Perm:
    """(uv)(x) = u(v(x))."""
    return tuple(u[x] for x in v)


def perm_inverse(w: Perm) -> Perm:
    out = [0] * len(w)
    for i, x in enumerate(w):
        out[x] = i
    return tuple(out)


def transposition(i: int, n: int) -> Perm:
    """s_i for 1 <= i < n, swapping positions i-1 and i."""
    w = list(range(n))
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def times_s(w: Perm, i: int) -> Perm:
    """w s_i: swap entries i-1 and i of the one-line notation."""
    out = list(w)
    out[i - 1], out[i] = out[i], out[i - 1]
    return tuple(out)


def perm_length(w: Perm) -> int:
    return sum(1 for a in range(len(w)) for b in range(a + 1, len(w)) if w[a] > w[b])


@lru_cache(maxsize=None)
def reduced_word(w: Perm) -> tuple[int, ...]:
    """A reduced word (i1, ..., ik) with w = s_i1 ... s_ik."""
    for i in range(1, len(w)):
        if w[i - 1] > w[i]:
            return reduced_word(times_s(w, i)) + (i,)
    return ()


def perm_direct_sum(w: Perm, v: Perm) -> Perm:
    k = len(w)
    return w + tuple(k + x for x in v)


# -- Hecke algebra ------------------------------------------------------------------


class HeckeElement:
    """Element of H_n as a map permutation -> coefficient in (z, t, delta)."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Perm, LaurentPoly] | None = None):
        self.n = n
        self._terms = {w: c for w, c in (terms or {}).items() if c}
        for w in self._terms:
            if len(w) != n:
                raise TowerError(f"permutation {w} does not have size {n}")

    @classmethod
    def basis(cls, w: Perm, coeff: LaurentPoly | int = 1) -> HeckeElement:
        c = coeff if isinstance(coeff, LaurentPoly) else HECKE_RING.const(coeff)
        return cls(len(w), {w: c})

    @classmethod
    def one(cls, n: int) -> HeckeElement:
        return cls.basis(perm_identity(n))

    @classmethod
    def zero(cls, n: int) -> HeckeElement:
        return cls(n)

    @classmethod
    def generator(cls, i: int, n: int, sign: int = 1) -> HeckeElement:
        if not 1 <= i < n:
            raise TowerError(f"T_{i} out of range for n = {n}")
        t = cls.basis(transposition(i, n))
        return t if sign > 0 else t - cls.one(n).scale(HECKE_RING.var("z"))

    def items(self) -> list[tuple[Perm, LaurentPoly]]:
        return sorted(self._terms.items())

    def coefficient(self, w: Perm) -> LaurentPoly:
        return self._terms.get(w, HECKE_RING.zero())

    def support(self) -> set[Perm]:
        return set(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: HeckeElement) -> HeckeElement:
        _same(self.n, other.n)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out[w] + c if w in out else c
        return HeckeElement(self.n, out)

    def __neg__(self) -> HeckeElement:
        return self.scale(-1)

    def __sub__(self, other: HeckeElement) -> HeckeElement:
        return self + (-other)

    def scale(self, c) -> HeckeElement:
        return HeckeElement(self.n, {w: v * c for w, v in self._terms.items()})

    def __mul__(self, other: HeckeElement) -> HeckeElement:
        return hecke_mul(self, other)

    def tensor(self, other: HeckeElement) -> HeckeElement:
        out: dict[Perm, LaurentPoly] = {}
        for w, a in self._terms.items():
            for v, b in other._terms.items():
                out[perm_direct_sum(w, v)] = a * b
        return HeckeElement(self.n + other.n, out)

    def map_coefficients(self, fn) -> HeckeElement:
        return HeckeElement(self.n, {w: fn(c) for w, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*T{w}" for w, c in self.items()) or "0"
        return f"HeckeElement(n={self.n}: {body})"


def _same(a: int, b: int) -> None:
    if a != b:
        raise TowerError(f"size mismatch: {a} vs {b}")


@lru_cache(maxsize=1 << 16)
def _basis_product(w: Perm, v: Perm) -> tuple[tuple[Perm, LaurentPoly], ...]:
    z = HECKE_RING.var("z")
    current: dict[Perm, LaurentPoly] = {w: HECKE_RING.one()}
    for i in reduced_word(v):
        nxt: dict[Perm, LaurentPoly] = {}
        for u, c in current.items():
            us = times_s(u, i)
            nxt[us] = nxt[us] + c if us in nxt else c
            if u[i - 1] > u[i]:
                nxt[u] = nxt[u] + c * z if u in nxt else c * z
        current = {u: c for u, c in nxt.items() if c}
    return tuple(current.items())


def hecke_mul(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    """Product in the T_w basis, using T_w T_i = T_{w s_i} or T_{w s_i} + z T_w."""
    _same(a.n, b.n)
    out: dict[Perm, LaurentPoly] = {}
    for w, ca in a._terms.items():
        for v, cb in b._terms.items():
            c = ca * cb
            for u, k in _basis_product(w, v):
                out[u] = out[u] + c * k if u in out else c * k
    return HeckeElement(a.n, out)


def hecke_basis(n: int) -> list[Perm]:
    return sorted(permutations(range(n)))


def hecke_braid(word: Sequence[int], n: int) -> HeckeElement:
    """Image of a braid word: sigma_i -> T_i, sigma_i^-1 -> T_i - z; bottom factor rightmost."""
    out = HeckeElement.one(n)
    for k in word:
        out = hecke_mul(HeckeElement.generator(abs(k), n, 1 if k > 0 else -1), out)
    return out


def hecke_presentation() -> Presentation:
    return load_preset("hecke")


def braid_presentation() -> Presentation:
    return load_preset("braid")


def hecke_eval(t: LinearTerm) -> HeckeElement:
    """Evaluate a dot-free term over a one-object braided signature in H_n."""
    sig = t.sig
    z = HECKE_RING.var("z")
    memo: dict[Term, HeckeElement] = {}

    def ev(s: Term) -> HeckeElement:
        hit = memo.get(s)
        if hit is not None:
            return hit
        if isinstance(s, Id):
            r = HeckeElement.one(len(s.word))
        elif isinstance(s, Gen):
            tag = sig.generator(s.name).tag
            if tag == BRAID_POS:
                r = HeckeElement.generator(1, 2)
            elif tag == BRAID_NEG:
                r = HeckeElement.generator(1, 2) - HeckeElement.one(2).scale(z)
            else:
                raise TowerError(f"generator {s.name!r} ({tag}) has no Hecke image")
        elif isinstance(s, VCompose):
            r = hecke_mul(ev(s.upper), ev(s.lower))
        elif isinstance(s, HTensor):
            r = ev(s.left).tensor(ev(s.right))
        else:
            raise TypeError(s)
        memo[s] = r
        return r

    if len(t.domain) != len(t.codomain):
        raise TowerError("Hecke evaluation needs an endomorphism")
    total = HeckeElement.zero(len(t.domain))
    for s, c in t.terms().items():
        total = total + ev(s).scale(c.lift(HECKE_RING))
    return total


# -- Jucys-Murphy elements and the Markov trace ----------------------------------------


def jm_term(i: int, n: int, sig: Signature | None = None) -> LinearTerm:
    """1^(n-i) @ (beta_{X^(i-1),X} beta_{X,X^(i-1)}) as a term on n strands."""
    if not 1 <= i <= n:
        raise TowerError(f"JM index {i} out of range for n = {n}")
    sig = sig or braid_presentation().signature
    x = ObjectWord((UPSTRAND,))
    rest = ObjectWord((UPSTRAND,) * (i - 1))
    double = VCompose(word_braiding(rest, x, sig), word_braiding(x, rest, sig))
    return LinearTerm.of(pad(double, ObjectWord((UPSTRAND,) * (n - i)), ObjectWord()), sig)


@lru_cache(maxsize=None)
def jm_element(i: int, n: int) -> HeckeElement:
    return hecke_eval(jm_term(i, n))


@lru_cache(maxsize=None)
def _trace_basis(w: Perm) -> LaurentPoly:
    n = len(w)
    delta = HECKE_RING.var("delta")
    if n == 0:
        return HECKE_RING.one()
    if w[-1] == n - 1:
        return delta * _trace_basis(w[:-1])
    t = HECKE_RING.var("t")
    k = perm_inverse(w)[n - 1] + 1  # 1-based position sent to n
    m = perm_identity(n)
    for j in range(n - 1, k - 1, -1):
        m = times_s(m, j)  # m = s_{n-1} ... s_k
    u = perm_mul(w, perm_inverse(m))
    assert u[-1] == n - 1
    small = n - 1
    x = HeckeElement.basis(u[:-1])
    for j in range(small - 1, k - 1, -1):
        x = hecke_mul(x, HeckeElement.generator(j, small))
    return t * markov_trace(x)


def markov_trace(h: HeckeElement) -> LaurentPoly:
    """The trace with tr(x) -> delta tr(x) under adding a strand and tr(x T_n y) = t tr(xy)."""
    total = HECKE_RING.zero()
    for w, c in h._terms.items():
        total = total + c * _trace_basis(w)
    return total


def writhe_of_word(word: Iterable[int]) -> int:
    return sum(1 if k > 0 else -1 for k in word)


def homflypt_from_trace(trace: LaurentPoly, writhe: int) -> LaurentPoly:
    """t^-writhe trace / delta with delta = (t - t^-1)/z; an inexact division raises."""
    z, t = HOMFLY_RING.var("z"), HOMFLY_RING.var("t")
    divided = trace * HECKE_RING.var("delta") ** -1
    value = divided.subst({"delta": (t - t**-1) * z**-1}, HOMFLY_RING)
    return value * t ** (-writhe)


def homflypt_braid(word: Sequence[int], n: int) -> LaurentPoly:
    return homflypt_from_trace(markov_trace(hecke_braid(word, n)), writhe_of_word(word))


def random_hecke(n: int, rng: random.Random, terms: int = 4, coeff_range: int = 3) -> HeckeElement:
    basis = hecke_basis(n)
    z = HECKE_RING.var("z")
    out = HeckeElement.zero(n)
    for _ in range(terms):
        c = HECKE_RING.const(rng.randint(-coeff_range, coeff_range)) * z ** rng.randint(0, 2)
        out = out + HeckeElement.basis(rng.choice(basis), c)
    return out


@dataclass(frozen=True)
class GiraffeReport:
    """Curl identities of the trace on one element x of H_n."""

    positive_curl: bool  # tr_{n+1}(x T_n) = t tr_n(x)
    negative_curl: bool  # tr_{n+1}(x T_n^-1) = t^-1 tr_n(x), after z delta = t - t^-1
    consistency: bool  # (t - t^-1) tr_n(x) = z delta tr_n(x), after the same substitution

    @property
    def ok(self) -> bool:
        return self.positive_curl and self.negative_curl and self.consistency


def giraffe_check(x: HeckeElement) -> GiraffeReport:
    n = x.n
    z, t, delta = (HECKE_RING.var(v) for v in ("z", "t", "delta"))
    big = _embed(x, n + 1)
    base = markov_trace(x)
    pos = markov_trace(hecke_mul(big, HeckeElement.generator(n, n + 1)))
    neg = markov_trace(hecke_mul(big, HeckeElement.generator(n, n + 1, -1)))
    zt, tt = HOMFLY_RING.var("z"), HOMFLY_RING.var("t")

    def spec(p: LaurentPoly) -> LaurentPoly:
        return p.subst({"delta": (tt - tt**-1) * zt**-1}, HOMFLY_RING)

    return GiraffeReport(
        positive_curl=pos == t * base,
        negative_curl=spec(neg) == spec(t**-1 * base),
        consistency=spec((t - t**-1) * base) == spec(z * delta * base),
    )


def _embed(x: HeckeElement, n: int) -> HeckeElement:
    extra = perm_identity(n - x.n)
    return HeckeElement(n, {perm_direct_sum(w, extra): c for w, c in x._terms.items()})


# -- affine Hecke algebra ------------------------------------------------------------------

Mono = tuple[int, ...]


class AffineHeckeElement:
    """Element of the affine Hecke algebra in the basis x^a T_w.

    Generators x_1..x_n and T_1..T_{n-1} satisfy x_{i+1} = T_i x_i T_i.  On n strands
    x_i is the dot at tensor position n - i + 1 and T_i the crossing of positions
    n - i and n - i + 1.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[tuple[Mono, Perm], LaurentPoly] | None = None):
        self.n = n
        self._terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def one(cls, n: int) -> AffineHeckeElement:
        return cls(n, {((0,) * n, perm_identity(n)): HECKE_RING.one()})

    @classmethod
    def x(cls, j: int, n: int, power: int = 1) -> AffineHeckeElement:
        if not 1 <= j <= n:
            raise TowerError(f"x_{j} out of range for n = {n}")
        a = [0] * n
        a[j - 1] = power
        return cls(n, {(tuple(a), perm_identity(n)): HECKE_RING.one()})

    @classmethod
    def T(cls, i: int, n: int, sign: int = 1) -> AffineHeckeElement:
        if not 1 <= i < n:
            raise TowerError(f"T_{i} out of range for n = {n}")
        out = cls(n, {((0,) * n, transposition(i, n)): HECKE_RING.one()})
        if sign < 0:
            out = out - cls.one(n).scale(HECKE_RING.var("z"))
        return out

    def items(self) -> list[tuple[tuple[Mono, Perm], LaurentPoly]]:
        return sorted(self._terms.items())

    def __add__(self, other: AffineHeckeElement) -> AffineHeckeElement:
        _same(self.n, other.n)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return AffineHeckeElement(self.n, out)

    def __neg__(self) -> AffineHeckeElement:
        return self.scale(-1)

    def __sub__(self, other: AffineHeckeElement) -> AffineHeckeElement:
        return self + (-other)

    def scale(self, c) -> AffineHeckeElement:
        return AffineHeckeElement(self.n, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other: AffineHeckeElement) -> AffineHeckeElement:
        return ah_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffineHeckeElement):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, w), c in self.items():
            xs = " ".join(f"x{j + 1}" + (f"^{e}" if e != 1 else "") for j, e in enumerate(a) if e)
            ts = " ".join(f"T{i}" for i in reduced_word(w))
            body = " ".join(p for p in (xs, ts) if p)
            text = str(c)
            if not body:
                parts.append(text if len(c) == 1 else f"({text})")
            elif text in ("1", "-1"):
                parts.append(text[:-1] + body)
            else:
                parts.append(f"{text if len(c) == 1 and ' ' not in text else f'({text})'}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _swap(a: Mono, i: int) -> Mono:
    b = list(a)
    b[i - 1], b[i] = b[i], b[i - 1]
    return tuple(b)


def _shift(a: Mono, i: int, k: int) -> Mono:
    """Multiply x^a by (x_i / x_{i+1})^k."""
    b = list(a)
    b[i - 1] += k
    b[i] -= k
    return tuple(b)


@lru_cache(maxsize=1 << 16)
def t_times_monomial(i: int, a: Mono) -> tuple[tuple[Mono, bool, LaurentPoly], ...]:
    """T_i x^a as a list of (monomial, has_T_i, coefficient).

    T_i x^a = x^{s_i a} T_i + z x^{s_i a} (r^d - 1)/(1 - r) with r = x_i/x_{i+1},
    d = a_i - a_{i+1}; the quotient is -(1 + ... + r^{d-1}) for d > 0 and
    r^d (1 + ... + r^{-d-1}) for d < 0.
    """
    z = HECKE_RING.var("z")
    b = _swap(a, i)
    out: list[tuple[Mono, bool, LaurentPoly]] = [(b, True, HECKE_RING.one())]
    d = a[i - 1] - a[i]
    if d > 0:
        out += [(_shift(b, i, k), False, -z) for k in range(d)]
    elif d < 0:
        out += [(_shift(b, i, d + k), False, z) for k in range(-d)]
    return tuple(out)


def _left_T(i: int, elem: Mapping[tuple[Mono, Perm], LaurentPoly]) -> dict[tuple[Mono, Perm], LaurentPoly]:
    """T_i * sum c x^a T_w."""
    z = HECKE_RING.var("z")
    out: dict[tuple[Mono, Perm], LaurentPoly] = {}

    def add(key, c):
        out[key] = out[key] + c if key in out else c

    for (a, w), c in elem.items():
        for b, has_t, k in t_times_monomial(i, a):
            if not has_t:
                add((b, w), c * k)
                continue
            # T_i T_w: length goes up iff w^-1(i) < w^-1(i+1)
            winv = perm_inverse(w)
            sw = perm_mul(transposition(i, len(w)), w)
            add((b, sw), c * k)
            if winv[i - 1] > winv[i]:
                add((b, w), c * k * z)
    return {k: v for k, v in out.items() if v}


def ah_mul(left: AffineHeckeElement, right: AffineHeckeElement) -> AffineHeckeElement:
    _same(left.n, right.n)
    n = left.n
    out: dict[tuple[Mono, Perm], LaurentPoly] = {}
    for (a, w), c1 in left._terms.items():
        # T_w x^b T_v, built by left-multiplying x^b T_v by the letters of w right to left
        for (b, v), c2 in right._terms.items():
            cur = {(b, v): c1 * c2}
            for i in reversed(reduced_word(w)):
                cur = _left_T(i, cur)
            for (m, u), c in cur.items():
                key = (tuple(p + q for p, q in zip(a, m)), u)
                out[key] = out[key] + c if key in out else c
    return AffineHeckeElement(n, out)


_AH_TOKEN = re.compile(r"([Tx])(\d+)(?:\^(-?\d+))?")


def parse_ah_word(text: str, n: int) -> list[tuple[str, int, int]]:
    """Parse ``"T1 x1 T1^-1 x2^-1"`` into (kind, index, power) letters."""
    out = []
    for tok in text.replace("*", " ").split():
        m = _AH_TOKEN.fullmatch(tok)
        if not m:
            raise TowerError(f"bad affine Hecke letter {tok!r}")
        kind, idx, pw = m.group(1), int(m.group(2)), int(m.group(3) or 1)
        if kind == "T" and not 1 <= idx < n or kind == "x" and not 1 <= idx <= n:
            raise TowerError(f"letter {tok!r} out of range for n = {n}")
        if kind == "T" and pw not in (1, -1):
            raise TowerError("only T_i^{+1} and T_i^{-1} are supported")
        out.append((kind, idx, pw))
    return out


def ah_letter(kind: str, idx: int, power: int, n: int) -> AffineHeckeElement:
    if kind == "x":
        return AffineHeckeElement.x(idx, n, power)
    return AffineHeckeElement.T(idx, n, power)


def ah_normal_form(word: str | Sequence[tuple[str, int, int]], n: int) -> AffineHeckeElement:
    letters = parse_ah_word(word, n) if isinstance(word, str) else list(word)
    out = AffineHeckeElement.one(n)
    for kind, idx, pw in letters:
        out = ah_mul(out, ah_letter(kind, idx, pw, n))
    return out


def ah_rewrite_random(letters: Sequence[tuple[str, int, int]], n: int, rng: random.Random) -> AffineHeckeElement:
    """Normal form by local rewriting with redexes chosen at random.

    States are linear combinations of letter words.  A word is terminal when it
    is a sorted x-monomial followed by positive T letters with no ``T_i T_i``; the
    remaining T-word is then multiplied out in the finite Hecke algebra.
    """
    z = HECKE_RING.var("z")
    one = HECKE_RING.one()
    pending: dict[tuple, LaurentPoly] = {tuple(letters): one}
    done = AffineHeckeElement(n)
    while pending:
        word = rng.choice(sorted(pending))
        coeff = pending.pop(word)
        redexes = _redexes(word)
        if not redexes:
            done = done + _terminal_value(word, n).scale(coeff)
            continue
        pos = rng.choice(redexes)
        for new_word, k in _rewrite_at(word, pos, z, one):
            c = coeff * k
            pending[new_word] = pending[new_word] + c if new_word in pending else c
            if not pending[new_word]:
                del pending[new_word]
    return done


def _redexes(word: tuple) -> list[int]:
    out = []
    for p, (kind, idx, pw) in enumerate(word):
        if kind == "T" and pw < 0:
            out.append(p)
        elif kind == "x" and pw == 0:
            out.append(p)
        elif p + 1 < len(word):
            k2, i2, p2 = word[p + 1]
            if kind == "T" and k2 == "x":
                out.append(p)
            elif kind == "T" and k2 == "T" and idx == i2 and p2 > 0 and pw > 0:
                out.append(p)
            elif kind == "x" and k2 == "x" and i2 <= idx:
                out.append(p)
    return out


def _rewrite_at(word: tuple, p: int, z: LaurentPoly, one: LaurentPoly) -> list[tuple[tuple, LaurentPoly]]:
    kind, idx, pw = word[p]
    pre, post = word[:p], word[p + 1 :]
    if kind == "T" and pw < 0:
        return [(pre + (("T", idx, 1),) + post, one), (pre + post, -z)]
    if kind == "x" and pw == 0:
        return [(pre + post, one)]
    k2, i2, p2 = word[p + 1]
    rest = word[p + 2 :]
    if kind == "x":
        if i2 == idx:
            return [(pre + (("x", idx, pw + p2),) + rest, one)]
        return [(pre + (word[p + 1], word[p]) + rest, one)]
    if k2 == "T":  # T_i T_i = 1 + z T_i
        return [(pre + rest, one), (pre + (("T", idx, 1),) + rest, z)]
    # T_i x_j^e
    i, j, e = idx, i2, p2
    if e == 0:
        return [(pre + (word[p],) + rest, one)]
    if j not in (i, i + 1):
        return [(pre + (word[p + 1], word[p]) + rest, one)]
    if abs(e) > 1:
        s = 1 if e > 0 else -1
        return [(pre + (word[p], ("x", j, s), ("x", j, e - s)) + rest, one)]
    T = ("T", i, 1)
    if j == i and e == 1:
        return [(pre + (("x", i + 1, 1), T) + rest, one), (pre + (("x", i + 1, 1),) + rest, -z)]
    if j == i + 1 and e == 1:
        return [(pre + (("x", i, 1), T) + rest, one), (pre + (("x", i + 1, 1),) + rest, z)]
    if j == i and e == -1:
        return [(pre + (("x", i + 1, -1), T) + rest, one), (pre + (("x", i, -1),) + rest, z)]
    return [(pre + (("x", i, -1), T) + rest, one), (pre + (("x", i, -1),) + rest, -z)]


def _terminal_value(word: tuple, n: int) -> AffineHeckeElement:
    a = [0] * n
    ts: list[int] = []
    for kind, idx, pw in word:
        if kind == "x":
            a[idx - 1] += pw
        else:
            ts.append(idx)
    h = HeckeElement.one(n)
    for i in ts:
        h = hecke_mul(h, HeckeElement.generator(i, n))
    return AffineHeckeElement(n, {(tuple(a), w): c for w, c in h._terms.items()})


def random_ah_word(n: int, length: int, rng: random.Random) -> list[tuple[str, int, int]]:
    letters: list[tuple[str, int, int]] = []
    for _ in range(length):
        if n > 1 and rng.random() < 0.5:
            letters.append(("T", rng.randint(1, n - 1), rng.choice((1, -1))))
        else:
            letters.append(("x", rng.randint(1, n), rng.choice((1, -1))))
    return letters


def _w0_conjugate(w: Perm) -> Perm:
    n = len(w)
    return tuple(n - 1 - w[n - 1 - i] for i in range(n))


def ah_flatten(e: AffineHeckeElement) -> HeckeElement:
    """Send x_i to J_{i,n} and abstract T_i to the crossing of positions n-i, n-i+1."""
    n = e.n
    out = HeckeElement.zero(n)
    for (a, w), c in e._terms.items():
        h = HeckeElement.one(n)
        for j, p in enumerate(a, 1):
            if p:
                h = hecke_mul(h, _jm_power(j, n, p))
        h = hecke_mul(h, HeckeElement.basis(_w0_conjugate(w)))
        out = out + h.scale(c)
    return out


@lru_cache(maxsize=None)
def _jm_power(i: int, n: int, p: int) -> HeckeElement:
    if p < 0:
        base = jm_inverse(i, n)
        p = -p
    else:
        base = jm_element(i, n)
    out = HeckeElement.one(n)
    for _ in range(p):
        out = hecke_mul(out, base)
    return out


@lru_cache(maxsize=None)
def jm_inverse(i: int, n: int) -> HeckeElement:
    """Inverse of J_{i,n}: the same double braiding with every crossing negative."""
    sig = braid_presentation().signature
    x = ObjectWord((UPSTRAND,))
    rest = ObjectWord((UPSTRAND,) * (i - 1))
    double = VCompose(word_braiding(x, rest, sig, -1), word_braiding(rest, x, sig, -1))
    term = LinearTerm.of(pad(double, ObjectWord((UPSTRAND,) * (n - i)), ObjectWord()), sig)
    return hecke_eval(term)


def random_ah_element(n: int, rng: random.Random, terms: int = 3, max_exp: int = 1) -> AffineHeckeElement:
    basis = hecke_basis(n)
    out = AffineHeckeElement(n)
    for _ in range(terms):
        a = tuple(rng.randint(-max_exp, max_exp) for _ in range(n))
        c = HECKE_RING.const(rng.choice([-2, -1, 1, 2]))
        out = out + AffineHeckeElement(n, {(a, rng.choice(basis)): c})
    return out


# -- wreath product ---------------------------------------------------------------------


class WreathElement:
    """Integer combination of x^a w in Z[x_1^{+-1}, ..., x_n^{+-1}] # S_n."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[tuple[Mono, Perm], int] | None = None):
        self.n = n
        self._terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def one(cls, n: int) -> WreathElement:
        return cls(n, {((0,) * n, perm_identity(n)): 1})

    @classmethod
    def x(cls, j: int, n: int, power: int = 1) -> WreathElement:
        a = [0] * n
        a[j - 1] = power
        return cls(n, {(tuple(a), perm_identity(n)): 1})

    @classmethod
    def s(cls, i: int, n: int) -> WreathElement:
        return cls(n, {((0,) * n, transposition(i, n)): 1})

    def __add__(self, other: WreathElement) -> WreathElement:
        _same(self.n, other.n)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return WreathElement(self.n, out)

    def __mul__(self, other: WreathElement) -> WreathElement:
        return wreath_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WreathElement):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"WreathElement(n={self.n}, {sorted(self._terms.items())})"


def wreath_mul(left: WreathElement, right: WreathElement) -> WreathElement:
    """(x^a w)(x^b v) = x^{a + w.b} (wv) with (w.b)_i = b_{w^-1(i)}."""
    _same(left.n, right.n)
    out: dict[tuple[Mono, Perm], int] = {}
    for (a, w), c1 in left._terms.items():
        winv = perm_inverse(w)
        for (b, v), c2 in right._terms.items():
            wb = tuple(b[winv[i]] for i in range(left.n))
            key = (tuple(p + q for p, q in zip(a, wb)), perm_mul(w, v))
            out[key] = out.get(key, 0) + c1 * c2
    return WreathElement(left.n, out)


def random_wreath(n: int, rng: random.Random, terms: int = 3) -> WreathElement:
    basis = hecke_basis(n)
    out = WreathElement(n)
    for _ in range(terms):
        a = tuple(rng.randint(-2, 2) for _ in range(n))
        out = out + WreathElement(n, {(a, rng.choice(basis)): rng.choice([-2, -1, 1, 3])})
    return out


def degenerate_jm(i: int, n: int) -> HeckeElement:
    """J_{i,n} with z = 0, an element of the group algebra of S_n."""
    return jm_element(i, n).map_coefficients(lambda c: c.subst({"z": HECKE_RING.zero()}, HECKE_RING))
