"""Exact multivariate Laurent polynomials over the integers or the Gaussian integers.

A polynomial lives in a :class:`RingDescriptor`, which fixes the ordered list of
variable names and the coefficient kind.  Every variable may carry negative
exponents.  Values are immutable and hashable; equality is structural.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

INTEGER = "integer"
GAUSSIAN = "gaussian_integer"


class RingError(ValueError):
    """Raised on ring mismatches and invalid substitutions."""


@dataclass(frozen=True)
class GaussInt:
    """A Gaussian integer ``re + im*i``."""

    re: int
    im: int = 0

    def __add__(self, other: Coeff) -> GaussInt:
        o = _as_gauss(other)
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Coeff) -> GaussInt:
        o = _as_gauss(other)
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Coeff) -> GaussInt:
        return _as_gauss(other) - self

    def __mul__(self, other: Coeff) -> GaussInt:
        o = _as_gauss(other)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self) -> GaussInt:
        return GaussInt(-self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussInt):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def is_unit(self) -> bool:
        return abs(self.re) + abs(self.im) == 1

    def inverse(self) -> GaussInt:
        if not self.is_unit():
            raise RingError(f"{self} is not a unit")
        return GaussInt(self.re, -self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return {1: "i", -1: "-i"}.get(self.im, f"{self.im}i")
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        return f"({self.re}{sign}{'' if mag == 1 else mag}i)"


Coeff = Union[int, GaussInt]
I = GaussInt(0, 1)


def _as_gauss(c: Coeff) -> GaussInt:
    return c if isinstance(c, GaussInt) else GaussInt(int(c), 0)


@dataclass(frozen=True)
class RingDescriptor:
    """Ordered variable names plus the coefficient kind."""

    variables: tuple[str, ...]
    coefficient_kind: str = INTEGER

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise RingError(f"duplicate variable names in {self.variables}")
        if any(not v for v in self.variables):
            raise RingError("variable names must be nonempty")
        if self.coefficient_kind not in (INTEGER, GAUSSIAN):
            raise RingError(f"unknown coefficient kind {self.coefficient_kind!r}")

    @property
    def gaussian(self) -> bool:
        return self.coefficient_kind == GAUSSIAN

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise RingError(f"variable {name!r} not in ring {self.variables}") from None

    def with_gaussian(self) -> RingDescriptor:
        return RingDescriptor(self.variables, GAUSSIAN)

    def without(self, *names: str) -> RingDescriptor:
        return RingDescriptor(tuple(v for v in self.variables if v not in names), self.coefficient_kind)

    # convenience constructors
    def zero(self) -> LaurentPoly:
        return LaurentPoly(self, {})

    def one(self) -> LaurentPoly:
        return self.const(1)

    def const(self, c: Coeff) -> LaurentPoly:
        return LaurentPoly(self, {(0,) * len(self.variables): c})

    def var(self, name: str) -> LaurentPoly:
        return self.monomial({name: 1})

    def monomial(self, exps: Mapping[str, int], coeff: Coeff = 1) -> LaurentPoly:
        vec = [0] * len(self.variables)
        for name, e in exps.items():
            vec[self.index(name)] += e
        return LaurentPoly(self, {tuple(vec): coeff})

    def gens(self) -> tuple[LaurentPoly, ...]:
        return tuple(self.var(v) for v in self.variables)

    def parse(self, text: str) -> LaurentPoly:
        return parse_poly(text, self)


class LaurentPoly:
    """Immutable Laurent polynomial; terms map exponent vectors to nonzero coefficients."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingDescriptor, terms: Mapping[tuple[int, ...], Coeff]):
        k = len(ring.variables)
        clean: dict[tuple[int, ...], Coeff] = {}
        for exp, c in terms.items():
            if len(exp) != k:
                raise RingError(f"exponent vector {exp} has wrong length for ring {ring.variables}")
            if c:
                clean[exp] = _as_gauss(c) if ring.gaussian else _check_int(c)
        self.ring = ring
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, ring: RingDescriptor, terms: dict[tuple[int, ...], Coeff]) -> LaurentPoly:
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # -- inspection -------------------------------------------------------
    def terms(self) -> list[tuple[tuple[int, ...], Coeff]]:
        """Terms in canonical (lexicographic) order."""
        return sorted(self._terms.items())

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], Coeff]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return c.is_unit() if isinstance(c, GaussInt) else c in (1, -1)

    def constant_value(self) -> Coeff | None:
        """The coefficient if the polynomial is a constant, else None."""
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            ((exp, c),) = self._terms.items()
            if not any(exp):
                return c
        return None

    def coefficient(self, exps: Mapping[str, int]) -> Coeff:
        vec = [0] * len(self.ring.variables)
        for name, e in exps.items():
            vec[self.ring.index(name)] = e
        return self._terms.get(tuple(vec), 0)

    def degree_range(self, name: str) -> tuple[int, int]:
        i = self.ring.index(name)
        es = [e[i] for e in self._terms]
        return (min(es), max(es)) if es else (0, 0)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other: object) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, GaussInt)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other: object) -> LaurentPoly:
        o = self._coerce(other)
        out = dict(self._terms)
        for exp, c in o._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return LaurentPoly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> LaurentPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> LaurentPoly:
        return self._coerce(other) - self

    def __mul__(self, other: object) -> LaurentPoly:
        o = self._coerce(other)
        if len(o._terms) == 1 and len(self._terms) != 1:
            return o * self
        out: dict[tuple[int, ...], Coeff] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return LaurentPoly._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> LaurentPoly:
        """Inverse of a unit monomial (unit coefficient times a monomial)."""
        if not self.is_unit():
            raise RingError(f"{self} is not invertible in the Laurent ring")
        ((exp, c),) = self._terms.items()
        inv_c = c.inverse() if isinstance(c, GaussInt) else c
        return LaurentPoly._raw(self.ring, {tuple(-e for e in exp): inv_c})

    def shift(self, exps: Mapping[str, int]) -> LaurentPoly:
        """Multiply by the monomial with the given exponents."""
        return self * self.ring.monomial(exps)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, GaussInt)):
            return self._terms == self.ring.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- ring maps ----------------------------------------------------------
    def subst(self, bindings: Mapping[str, LaurentPoly], target: RingDescriptor | None = None) -> LaurentPoly:
        """Ring homomorphism image.  Unbound variables map to the same-named variable of the target."""
        if target is None:
            images = list(bindings.values())
            target = images[0].ring if images else self.ring
        images: list[LaurentPoly] = []
        for name in self.ring.variables:
            if name in bindings:
                img = bindings[name]
                if img.ring != target:
                    raise RingError(f"image of {name} lives in {img.ring}, expected {target}")
            else:
                img = target.var(name)
            images.append(img)
        if self.ring.gaussian and not target.gaussian:
            raise RingError("cannot map Gaussian coefficients into an integer ring")
        cache: dict[tuple[int, int], LaurentPoly] = {}

        def power(i: int, e: int) -> LaurentPoly:
            key = (i, e)
            if key not in cache:
                if e < 0 and not images[i].is_unit():
                    raise RingError(
                        f"variable {self.ring.variables[i]} occurs with exponent {e} "
                        f"but its image {images[i]} is not invertible"
                    )
                cache[key] = images[i] ** e
            return cache[key]

        total = target.zero()
        for exp, c in self._terms.items():
            term = target.const(c)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def lift(self, target: RingDescriptor) -> LaurentPoly:
        """Embed into a ring with a superset of variables (and possibly Gaussian coefficients)."""
        return self.subst({}, target)

    # -- serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        def enc(c: Coeff) -> int | list[int]:
            return [c.re, c.im] if isinstance(c, GaussInt) else c

        return {
            "vars": list(self.ring.variables),
            "terms": [{"exp": list(e), "coeff": enc(c)} for e, c in self.terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping, coefficient_kind: str | None = None) -> LaurentPoly:
        terms = data["terms"]
        gaussian = any(isinstance(t["coeff"], list) for t in terms)
        kind = coefficient_kind or (GAUSSIAN if gaussian else INTEGER)
        ring = RingDescriptor(tuple(data["vars"]), kind)
        out: dict[tuple[int, ...], Coeff] = {}
        for t in terms:
            c = t["coeff"]
            out[tuple(t["exp"])] = GaussInt(*c) if isinstance(c, list) else c
        return cls(ring, out)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exp, c in self.terms():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.ring.variables, exp) if e
            )
            cs = str(c)
            if not mono:
                piece = cs
            elif c == 1:
                piece = mono
            elif c == -1:
                piece = "-" + mono
            else:
                piece = f"{cs}*{mono}"
            pieces.append(piece)
        out = pieces[0]
        for p in pieces[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r}, vars={self.ring.variables})"


def _check_int(c: Coeff) -> int:
    if isinstance(c, GaussInt):
        if c.im:
            raise RingError("Gaussian coefficient in an integer ring")
        return c.re
    return int(c)


def poly_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def poly_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def poly_subst(
    p: LaurentPoly, bindings: Mapping[str, LaurentPoly], target: RingDescriptor | None = None
) -> LaurentPoly:
    return p.subst(bindings, target)


def poly_sum(polys: Iterable[LaurentPoly], ring: RingDescriptor) -> LaurentPoly:
    out: dict[tuple[int, ...], Coeff] = {}
    for p in polys:
        for e, c in p._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return LaurentPoly._raw(ring, out)


# -- parsing ------------------------------------------------------------------

_POLY_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*|⋅)|([+\-−])|(\()|(\)))")


class PolyParseError(ValueError):
    pass


def tokenize_poly(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character {text[pos]!r} at position {pos}")
        kinds = ("int", "name", "^", "*", "sign", "(", ")")
        for kind, g in zip(kinds, m.groups()):
            if g is not None:
                tokens.append((kind, "-" if g == "−" else g, m.start(m.lastindex)))
                break
        pos = m.end()
    return tokens


class _PolyParser:
    def __init__(self, tokens: list[tuple[str, str, int]], ring: RingDescriptor):
        self.toks = tokens
        self.i = 0
        self.ring = ring

    def peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind: str) -> tuple[str, str, int]:
        t = self.peek()
        if t is None or t[0] != kind:
            where = t[2] if t else "end"
            raise PolyParseError(f"expected {kind} at position {where}")
        self.i += 1
        return t

    def poly(self) -> LaurentPoly:
        total = self.ring.zero()
        sign = 1
        t = self.peek()
        if t and t[0] == "sign":
            self.i += 1
            sign = -1 if t[1] == "-" else 1
        total = total + self.product() * sign
        while (t := self.peek()) and t[0] == "sign":
            self.i += 1
            s = -1 if t[1] == "-" else 1
            total = total + self.product() * s
        return total

    def product(self) -> LaurentPoly:
        p = self.factor()
        while (t := self.peek()) and t[0] == "*":
            self.i += 1
            p = p * self.factor()
        return p

    def factor(self) -> LaurentPoly:
        t = self.peek()
        if t is None:
            raise PolyParseError("unexpected end of polynomial")
        if t[0] == "int":
            self.i += 1
            base = self.ring.const(int(t[1]))
        elif t[0] == "name":
            self.i += 1
            if t[1] == "i" and "i" not in self.ring.variables:
                if not self.ring.gaussian:
                    raise PolyParseError("imaginary unit i used in an integer ring")
                base = self.ring.const(I)
            else:
                if t[1] not in self.ring.variables:
                    raise PolyParseError(f"unknown variable {t[1]!r} at position {t[2]}")
                base = self.ring.var(t[1])
        elif t[0] == "(":
            self.i += 1
            base = self.poly()
            self.take(")")
        elif t[0] == "sign" and t[1] == "-":
            self.i += 1
            return -self.factor()
        else:
            raise PolyParseError(f"unexpected token {t[1]!r} at position {t[2]}")
        if (u := self.peek()) and u[0] == "^":
            self.i += 1
            sign = 1
            if (v := self.peek()) and v[0] == "sign":
                self.i += 1
                sign = -1 if v[1] == "-" else 1
            e = int(self.take("int")[1]) * sign
            base = base**e
        return base


def parse_poly(text: str, ring: RingDescriptor) -> LaurentPoly:
    """Parse text such as ``"-q^2 - q^-2"`` or ``"2*z*t^-1 + 1"``."""
    parser = _PolyParser(tokenize_poly(text), ring)
    p = parser.poly()
    if parser.peek() is not None:
        t = parser.peek()
        raise PolyParseError(f"trailing input {t[1]!r} at position {t[2]}")
    return p
