"""Typed morphism terms over a monoidal signature.

Terms are binary trees built from identities ``Id(word)``, generators ``Gen(name)``,
vertical composition ``VCompose(upper, lower)`` and horizontal tensor
``HTensor(left, right)``.  They are not quotiented by the interchange law; equality
inside a presented category is decided by evaluating into a concrete model.

The text syntax reads bottom to top: ``"f ; g"`` is ``g`` after ``f``.  ``;`` binds
tighter than ``@``.  Coefficients are Laurent polynomials in the signature's ring:
``"q^-1 * (cap ; cup) + id(o o)"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .ring import GaussInt, LaurentPoly, PolyParseError, RingDescriptor, _PolyParser, parse_poly

UP, DOWN, NONE = "up", "down", "none"

SELF_DUAL = "self_dual"
ORIENTED = "oriented"
DUAL_PAIR = "dual_pair"
NO_DUAL = "no_dual"

BRAID_POS, BRAID_NEG = "braid_pos", "braid_neg"
CUP, CAP = "cup", "cap"
DOT_POS, DOT_NEG = "dot_pos", "dot_neg"
PLAIN = "plain"
TAGS = (BRAID_POS, BRAID_NEG, CUP, CAP, DOT_POS, DOT_NEG, PLAIN)


class TermError(ValueError):
    """Type errors, unknown names and malformed input."""


Letter = tuple[str, str]


# -- object words ---------------------------------------------------------------


@dataclass(frozen=True)
class ObjectWord:
    letters: tuple[Letter, ...] = ()

    def __add__(self, other: ObjectWord) -> ObjectWord:
        return ObjectWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return ObjectWord(self.letters[i])
        return self.letters[i]

    @classmethod
    def of(cls, *letters: Letter) -> ObjectWord:
        return cls(tuple(letters))

    def __str__(self) -> str:
        return " ".join(letter_text(x) for x in self.letters)


EMPTY = ObjectWord()


def letter_text(letter: Letter) -> str:
    name, orient = letter
    return name + "v" if orient == DOWN else name


# -- signatures ----------------------------------------------------------------


@dataclass(frozen=True)
class ObjectDecl:
    name: str
    duality: str = NO_DUAL
    partner: str | None = None

    def letters(self) -> tuple[Letter, ...]:
        if self.duality == SELF_DUAL:
            return ((self.name, NONE),)
        if self.duality == ORIENTED:
            return ((self.name, UP), (self.name, DOWN))
        return ((self.name, UP),)


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    domain: ObjectWord
    codomain: ObjectWord
    tag: str = PLAIN

    def __post_init__(self) -> None:
        if self.tag not in TAGS:
            raise TermError(f"unknown generator tag {self.tag!r}")


@dataclass
class Signature:
    """Generating objects, generating morphisms, ring and optional twist data."""

    ring: RingDescriptor
    objects: tuple[ObjectDecl, ...]
    generators: tuple[GeneratorDecl, ...]
    twist: dict[Letter, LaurentPoly | LinearTerm] = field(default_factory=dict)
    twist_inverse: dict[Letter, LinearTerm] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._gens = {g.name: g for g in self.generators}
        if len(self._gens) != len(self.generators):
            raise TermError("duplicate generator names")
        self._objs = {o.name: o for o in self.objects}
        reserved = set(self.ring.variables) | {"id"}
        for g in self.generators:
            if g.name in reserved:
                raise TermError(f"generator name {g.name!r} clashes with a ring variable or keyword")
        for o in self.objects:
            if o.duality == DUAL_PAIR:
                p = self._objs.get(o.partner or "")
                if p is None or p.duality != DUAL_PAIR or p.partner != o.name:
                    raise TermError(f"dual_pair flag on {o.name!r} is not symmetric")
        for g in self.generators:
            for w in (g.domain, g.codomain):
                for letter in w:
                    self.check_letter(letter)
        self._by_shape: dict[tuple[str, ObjectWord, ObjectWord], str] = {}
        for g in self.generators:
            self._by_shape.setdefault((g.tag, g.domain, g.codomain), g.name)
        for g in self.generators:
            if g.tag == BRAID_POS:
                if len(g.domain) != 2 or g.codomain != ObjectWord((g.domain[1], g.domain[0])):
                    raise TermError(f"braiding {g.name!r} must have type X Y -> Y X")
                if (BRAID_NEG, g.codomain, g.domain) not in self._by_shape:
                    raise TermError(f"braiding {g.name!r} has no braid_neg partner")

    # lookups
    def generator(self, name: str) -> GeneratorDecl:
        try:
            return self._gens[name]
        except KeyError:
            raise TermError(f"unknown generator {name!r}") from None

    def has_generator(self, name: str) -> bool:
        return name in self._gens

    def has_object(self, name: str) -> bool:
        return name in self._objs

    def object(self, name: str) -> ObjectDecl:
        try:
            return self._objs[name]
        except KeyError:
            raise TermError(f"unknown object {name!r}") from None

    def check_letter(self, letter: Letter) -> None:
        if letter not in self.object(letter[0]).letters():
            raise TermError(f"letter {letter} is not valid for object {letter[0]!r}")

    def letters(self) -> list[Letter]:
        return [x for o in self.objects for x in o.letters()]

    def find(self, tag: str, domain: ObjectWord, codomain: ObjectWord) -> str | None:
        return self._by_shape.get((tag, domain, codomain))

    def braiding(self, x: Letter, y: Letter, sign: int = 1) -> str:
        """Generator name for the crossing of letters x (left) and y (right).

        ``sign=+1`` gives the positive crossing X Y -> Y X.  ``sign=-1`` gives its inverse,
        the braid_neg generator Y X -> X Y.
        """
        if sign > 0:
            name = self.find(BRAID_POS, ObjectWord((x, y)), ObjectWord((y, x)))
        else:
            name = self.find(BRAID_NEG, ObjectWord((y, x)), ObjectWord((x, y)))
        if name is None:
            kind = "positive" if sign > 0 else "negative"
            raise TermError(f"no {kind} braiding generator for letters {x}, {y}")
        return name

    def dual(self, letter: Letter) -> Letter:
        name, orient = letter
        o = self.object(name)
        if o.duality == SELF_DUAL:
            return letter
        if o.duality == ORIENTED:
            return (name, DOWN if orient == UP else UP)
        if o.duality == DUAL_PAIR:
            return (o.partner, UP)
        raise TermError(f"object {name!r} has no dual")

    def has_duals(self) -> bool:
        return all(o.duality != NO_DUAL for o in self.objects)

    def parse(self, text: str) -> LinearTerm:
        return parse_term(text, self)

    def parse_word(self, text: str) -> ObjectWord:
        return parse_word(text, self)

    def extend(
        self,
        generators: Iterable[GeneratorDecl] = (),
        twist: Mapping[Letter, LaurentPoly | LinearTerm] | None = None,
    ) -> Signature:
        return Signature(
            self.ring,
            self.objects,
            self.generators + tuple(generators),
            dict(self.twist if twist is None else twist),
            dict(self.twist_inverse),
        )


# -- terms ---------------------------------------------------------------------


class Term:
    """Base class of term nodes.  Nodes are immutable with a precomputed hash."""

    __slots__ = ("_h",)

    def __hash__(self) -> int:
        return self._h

    def __str__(self) -> str:
        return format_term(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}<{format_term(self)}>"


class Id(Term):
    __slots__ = ("word",)

    def __init__(self, word: ObjectWord = EMPTY):
        self.word = word
        self._h = hash(("Id", word))

    __hash__ = Term.__hash__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Id) and self.word == other.word


class Gen(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._h = hash(("Gen", name))

    __hash__ = Term.__hash__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Gen) and self.name == other.name


class VCompose(Term):
    """``upper`` after ``lower``."""

    __slots__ = ("upper", "lower")

    def __init__(self, upper: Term, lower: Term):
        self.upper = upper
        self.lower = lower
        self._h = hash(("V", upper._h, lower._h))

    __hash__ = Term.__hash__

    def __eq__(self, other: object) -> bool:
        return (
            self is other
            or isinstance(other, VCompose)
            and self._h == other._h
            and self.upper == other.upper
            and self.lower == other.lower
        )


class HTensor(Term):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._h = hash(("H", left._h, right._h))

    __hash__ = Term.__hash__

    def __eq__(self, other: object) -> bool:
        return (
            self is other
            or isinstance(other, HTensor)
            and self._h == other._h
            and self.left == other.left
            and self.right == other.right
        )


def typecheck(t: Term, sig: Signature) -> tuple[ObjectWord, ObjectWord]:
    """Return (domain, codomain) of a term, raising TermError on mismatches."""
    return _typecheck(t, sig, "root")


def _typecheck(t: Term, sig: Signature, path: str) -> tuple[ObjectWord, ObjectWord]:
    if isinstance(t, Id):
        for letter in t.word:
            sig.check_letter(letter)
        return t.word, t.word
    if isinstance(t, Gen):
        g = sig.generator(t.name)
        return g.domain, g.codomain
    if isinstance(t, VCompose):
        ld, lc = _typecheck(t.lower, sig, path + ".lower")
        ud, uc = _typecheck(t.upper, sig, path + ".upper")
        if lc != ud:
            raise TermError(f"composition mismatch at {path}: lower codomain ({lc}) != upper domain ({ud})")
        return ld, uc
    if isinstance(t, HTensor):
        a, b = _typecheck(t.left, sig, path + ".left")
        c, d = _typecheck(t.right, sig, path + ".right")
        return a + c, b + d
    raise TypeError(f"not a term: {t!r}")


def generators_in(t: Term) -> set[str]:
    if isinstance(t, Gen):
        return {t.name}
    if isinstance(t, VCompose):
        return generators_in(t.upper) | generators_in(t.lower)
    if isinstance(t, HTensor):
        return generators_in(t.left) | generators_in(t.right)
    return set()


def compose_all(terms: Sequence[Term]) -> Term:
    """Compose bottom-to-top: ``compose_all([f, g, h])`` is h after g after f."""
    out = terms[0]
    for t in terms[1:]:
        out = VCompose(t, out)
    return out


def tensor_all(terms: Sequence[Term]) -> Term:
    if not terms:
        return Id()
    out = terms[0]
    for t in terms[1:]:
        out = HTensor(out, t)
    return out


def pad(t: Term, left: ObjectWord, right: ObjectWord) -> Term:
    """``Id(left) @ t @ Id(right)``, omitting empty identities."""
    if len(left):
        t = HTensor(Id(left), t)
    if len(right):
        t = HTensor(t, Id(right))
    return t


def simplify(t: Term) -> Term:
    """Normalise modulo unit and associativity laws (never the interchange law).

    Identity factors of compositions are dropped, empty identities vanish from
    tensors, adjacent identities merge, and chains are re-nested to the left.
    """
    if isinstance(t, (Id, Gen)):
        return t
    if isinstance(t, VCompose):
        parts = [p for p in _vchain(t) if not isinstance(p, Id)]
        if not parts:
            return _vchain_identity(t)
        return compose_all(parts)
    parts: list[Term] = []
    for p in _hchain(t):
        if isinstance(p, Id):
            if not len(p.word):
                continue
            if parts and isinstance(parts[-1], Id):
                parts[-1] = Id(parts[-1].word + p.word)
                continue
        parts.append(p)
    return tensor_all(parts)


def _vchain(t: Term) -> list[Term]:
    if isinstance(t, VCompose):
        return _vchain(t.lower) + _vchain(t.upper)
    return [simplify(t)]


def _vchain_identity(t: Term) -> Term:
    # every factor was an identity; they all share one word
    while isinstance(t, VCompose):
        t = t.lower
    return simplify(t)


def _hchain(t: Term) -> list[Term]:
    if isinstance(t, HTensor):
        return _hchain(t.left) + _hchain(t.right)
    s = simplify(t)
    return _hchain(s) if isinstance(s, HTensor) else [s]


# -- linear combinations ---------------------------------------------------------


class LinearTerm:
    """Finite linear combination of terms sharing one (domain, codomain)."""

    __slots__ = ("sig", "domain", "codomain", "_terms")

    def __init__(
        self,
        sig: Signature,
        domain: ObjectWord,
        codomain: ObjectWord,
        terms: Mapping[Term, LaurentPoly] | None = None,
    ):
        self.sig = sig
        self.domain = domain
        self.codomain = codomain
        self._terms = {t: c for t, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, t: Term, sig: Signature, coeff: LaurentPoly | int = 1) -> LinearTerm:
        d, c = typecheck(t, sig)
        if isinstance(coeff, int):
            coeff = sig.ring.const(coeff)
        return cls(sig, d, c, {t: coeff})

    @classmethod
    def identity(cls, word: ObjectWord, sig: Signature) -> LinearTerm:
        return cls.of(Id(word), sig)

    def items(self) -> list[tuple[Term, LaurentPoly]]:
        return sorted(self._terms.items(), key=lambda tc: format_term(tc[0]))

    def terms(self) -> dict[Term, LaurentPoly]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def single(self) -> Term:
        if len(self._terms) != 1:
            raise TermError("not a single term")
        ((t, c),) = self._terms.items()
        if c != 1:
            raise TermError("coefficient is not 1")
        return t

    def _check(self, other: LinearTerm) -> None:
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise TermError(
                f"type mismatch: ({self.domain} -> {self.codomain}) vs ({other.domain} -> {other.codomain})"
            )

    def __add__(self, other: LinearTerm) -> LinearTerm:
        self._check(other)
        out = dict(self._terms)
        for t, c in other._terms.items():
            out[t] = out[t] + c if t in out else c
        return LinearTerm(self.sig, self.domain, self.codomain, out)

    def __neg__(self) -> LinearTerm:
        return self.scale(-1)

    def __sub__(self, other: LinearTerm) -> LinearTerm:
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> LinearTerm:
        return LinearTerm(self.sig, self.domain, self.codomain, {t: v * c for t, v in self._terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def then(self, upper: LinearTerm) -> LinearTerm:
        """``upper`` after ``self``."""
        if self.codomain != upper.domain:
            raise TermError(f"composition mismatch: {self.codomain} vs {upper.domain}")
        out: dict[Term, LaurentPoly] = {}
        for t1, c1 in self._terms.items():
            for t2, c2 in upper._terms.items():
                t = VCompose(t2, t1)
                out[t] = out[t] + c1 * c2 if t in out else c1 * c2
        return LinearTerm(self.sig, self.domain, upper.codomain, out)

    def tensor(self, right: LinearTerm) -> LinearTerm:
        out: dict[Term, LaurentPoly] = {}
        for t1, c1 in self._terms.items():
            for t2, c2 in right._terms.items():
                t = HTensor(t1, t2)
                out[t] = out[t] + c1 * c2 if t in out else c1 * c2
        return LinearTerm(self.sig, self.domain + right.domain, self.codomain + right.codomain, out)

    def map_terms(self, fn: Callable[[Term], Term]) -> LinearTerm:
        out: dict[Term, LaurentPoly] = {}
        for t, c in self._terms.items():
            s = fn(t)
            out[s] = out[s] + c if s in out else c
        return LinearTerm(self.sig, self.domain, self.codomain, out)

    def simplified(self) -> LinearTerm:
        return self.map_terms(simplify)

    def with_signature(self, sig: Signature) -> LinearTerm:
        return LinearTerm(sig, self.domain, self.codomain, self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearTerm):
            return NotImplemented
        return (self.domain, self.codomain) == (other.domain, other.codomain) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, frozenset(self._terms.items())))

    def __str__(self) -> str:
        return format_linear(self)

    def __repr__(self) -> str:
        return f"LinearTerm<{format_linear(self)}>"


# -- printing ----------------------------------------------------------------------


def format_term(t: Term) -> str:
    if isinstance(t, Id):
        return f"id({t.word})"
    if isinstance(t, Gen):
        return t.name
    if isinstance(t, VCompose):
        lo = format_term(t.lower)
        if isinstance(t.lower, HTensor):
            lo = f"({lo})"
        up = format_term(t.upper)
        if isinstance(t.upper, (HTensor, VCompose)):
            up = f"({up})"
        return f"{lo} ; {up}"
    if isinstance(t, HTensor):
        le = format_term(t.left)
        ri = format_term(t.right)
        if isinstance(t.right, HTensor):
            ri = f"({ri})"
        return f"{le} @ {ri}"
    raise TypeError(t)


def _format_coeff(c: LaurentPoly) -> tuple[str, str]:
    """(sign, text) for a coefficient; text is empty for a unit coefficient 1."""
    if c.is_monomial():
        ((exp, k),) = c.terms()
        neg = (k.re < 0 if k.im == 0 else False) if isinstance(k, GaussInt) else k < 0
        body = -c if neg else c
        s = str(body)
        return ("-" if neg else "+", "" if s == "1" else s)
    return ("+", f"({c})")


def format_linear(lt: LinearTerm) -> str:
    if lt.is_zero():
        return "0"
    pieces = []
    for t, c in lt.items():
        sign, cs = _format_coeff(c)
        body = format_term(t)
        if cs:
            if isinstance(t, (VCompose, HTensor)):
                body = f"({body})"
            body = f"{cs} * {body}"
        pieces.append((sign, body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# -- parsing --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<idw>id\s*\()|(?P<name>[^\W\d]\w*)|(?P<caret>\^)|(?P<star>\*|⋅)"
    r"|(?P<sign>[+\-−])|(?P<lp>\()|(?P<rp>\))|(?P<semi>;)|(?P<at>@))"
)
_KIND = {"int": "int", "name": "name", "caret": "^", "star": "*", "sign": "sign", "lp": "(", "rp": ")", "semi": ";", "at": "@"}


class ParseError(TermError):
    pass


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks: list[tuple[str, str, int]] = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"syntax error: unexpected character {text[pos]!r} at position {pos}")
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "idw":
            close = text.find(")", m.end())
            if close < 0:
                raise ParseError(f"syntax error: unclosed id( at position {start}")
            toks.append(("idword", text[m.end() : close], start))
            pos = close + 1
            continue
        value = m.group(kind)
        toks.append((_KIND[kind], "-" if value == "−" else value, start))
        pos = m.end()
    return toks


def parse_word(text: str, sig: Signature) -> ObjectWord:
    letters: list[Letter] = []
    for tok in text.replace(",", " ").split():
        letters.extend(_parse_letters(tok, sig))
    return ObjectWord(tuple(letters))


def _parse_letters(tok: str, sig: Signature) -> list[Letter]:
    single = _parse_letter(tok, sig)
    if single is not None:
        return [single]
    # greedy split of concatenated letters, longest object names first
    names = sorted((o.name for o in sig.objects), key=len, reverse=True)
    out: list[Letter] = []
    rest = tok
    while rest:
        for name in names:
            for suffix in ("^", "v", ""):
                piece = name + suffix
                if rest.startswith(piece):
                    letter = _parse_letter(piece, sig)
                    if letter is not None:
                        out.append(letter)
                        rest = rest[len(piece) :]
                        break
            else:
                continue
            break
        else:
            raise ParseError(f"unknown object letter {tok!r}")
    return out


def _parse_letter(tok: str, sig: Signature) -> Letter | None:
    candidates: list[tuple[str, str | None]] = [(tok, None)]
    if tok.endswith("^"):
        candidates = [(tok[:-1], UP)]
    elif tok.endswith("v"):
        candidates.append((tok[:-1], DOWN))
    for name, orient in candidates:
        if not sig.has_object(name):
            continue
        o = sig.object(name)
        if o.duality == SELF_DUAL:
            return (name, NONE)
        if orient == DOWN:
            if o.duality != ORIENTED:
                continue
            return (name, DOWN)
        return (name, UP)
    return None


class _TermParser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> tuple[str, str, int] | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def error(self, msg: str) -> ParseError:
        t = self.peek()
        where = t[2] if t else len(self.text)
        return ParseError(f"syntax error at position {where}: {msg}")

    def expect(self, kind: str) -> tuple[str, str, int]:
        t = self.peek()
        if t is None or t[0] != kind:
            raise self.error(f"expected {kind!r}")
        self.i += 1
        return t

    def parse(self) -> LinearTerm:
        lt = self.sum()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return lt

    def sum(self) -> LinearTerm:
        sign = 1
        t = self.peek()
        if t and t[0] == "sign":
            self.i += 1
            sign = -1 if t[1] == "-" else 1
        total = self.scaled().scale(sign)
        while (t := self.peek()) and t[0] == "sign":
            self.i += 1
            s = -1 if t[1] == "-" else 1
            total = total + self.scaled().scale(s)
        return total

    def coefficient(self) -> LaurentPoly | None:
        start = self.i
        pp = _PolyParser(self.toks, self.sig.ring)
        pp.i = self.i
        try:
            c = pp.factor()
        except (PolyParseError, ParseError):
            self.i = start
            return None
        while (t := pp.peek()) and t[0] == "*":
            save = pp.i
            pp.i += 1
            try:
                c = c * pp.factor()
            except (PolyParseError, ParseError):
                pp.i = save
                break
        t = pp.peek()
        if t and t[0] == "*":
            self.i = pp.i + 1
            return c
        self.i = start
        return None

    def scaled(self) -> LinearTerm:
        c = self.coefficient()
        body = self.tensor_expr()
        return body if c is None else body.scale(c)

    def tensor_expr(self) -> LinearTerm:
        out = self.comp_expr()
        while (t := self.peek()) and t[0] == "@":
            self.i += 1
            out = out.tensor(self.comp_expr())
        return out

    def comp_expr(self) -> LinearTerm:
        out = self.primary()
        while (t := self.peek()) and t[0] == ";":
            self.i += 1
            pos = self.peek()
            upper = self.primary()
            if out.codomain != upper.domain:
                where = pos[2] if pos else len(self.text)
                raise TermError(
                    f"composition mismatch at position {where}: {out.codomain or '(unit)'} vs {upper.domain or '(unit)'}"
                )
            out = out.then(upper)
        return out

    def primary(self) -> LinearTerm:
        t = self.peek()
        if t is None:
            raise self.error("unexpected end of input")
        if t[0] == "idword":
            self.i += 1
            return LinearTerm.identity(parse_word(t[1], self.sig), self.sig)
        if t[0] == "name":
            self.i += 1
            if not self.sig.has_generator(t[1]):
                raise TermError(f"unknown generator {t[1]!r} at position {t[2]}")
            return LinearTerm.of(Gen(t[1]), self.sig)
        if t[0] == "(":
            self.i += 1
            inner = self.sum()
            self.expect(")")
            return inner
        raise self.error(f"unexpected {t[1]!r}")


def parse_term(text: str, sig: Signature) -> LinearTerm:
    """Parse DSL text into a type-checked LinearTerm."""
    return _TermParser(text, sig).parse()


def parse_braid_word(text: str, n: int) -> list[int]:
    """Parse ``"1 -2 1"`` into signed generator indices, validating ``0 < |k| < n``."""
    out = []
    for tok in text.replace(",", " ").split():
        try:
            k = int(tok)
        except ValueError:
            raise TermError(f"braid token {tok!r} is not an integer") from None
        if k == 0:
            raise TermError("braid token 0 is not a generator")
        if abs(k) >= n:
            raise TermError(f"braid generator {k} out of range for {n} strands")
        out.append(k)
    return out


# -- functors ---------------------------------------------------------------------


def apply_generator_map(
    t: LinearTerm,
    m: Mapping[str, LinearTerm],
    sig_out: Signature,
    passthrough: bool = False,
) -> LinearTerm:
    """Functorial image of ``t``: generators are replaced by their images.

    With ``passthrough`` unmapped generators map to themselves in ``sig_out``.
    """
    for name, img in m.items():
        g = t.sig.generator(name) if t.sig.has_generator(name) else None
        if g is not None and (img.domain, img.codomain) != (g.domain, g.codomain):
            raise TermError(f"image of {name!r} has type {img.domain} -> {img.codomain}, expected {g.domain} -> {g.codomain}")
    cache: dict[Term, LinearTerm] = {}

    def go(s: Term) -> LinearTerm:
        if s in cache:
            return cache[s]
        if isinstance(s, Id):
            r = LinearTerm.identity(s.word, sig_out)
        elif isinstance(s, Gen):
            if s.name in m:
                r = m[s.name]
            elif passthrough:
                r = LinearTerm.of(s, sig_out)
            else:
                raise TermError(f"generator {s.name!r} is not mapped")
        elif isinstance(s, VCompose):
            r = go(s.lower).then(go(s.upper))
        else:
            r = go(s.left).tensor(go(s.right))
        cache[s] = r
        return r

    total = LinearTerm(sig_out, t.domain, t.codomain)
    for s, c in t._terms.items():
        total = total + go(s).scale(c)
    return total


# -- presentations -------------------------------------------------------------------


@dataclass
class Presentation:
    signature: Signature
    relations: list[tuple[LinearTerm, LinearTerm]]

    def __post_init__(self) -> None:
        for lhs, rhs in self.relations:
            if (lhs.domain, lhs.codomain) != (rhs.domain, rhs.codomain):
                raise TermError(f"relation sides have different types: {lhs} = {rhs}")

    def relation_set(self) -> set[frozenset[LinearTerm]]:
        """Relations as unordered pairs, for set comparisons."""
        return {frozenset((lhs, rhs)) for lhs, rhs in self.relations}


def _parse_decl_word(text: str, sig_objects: Mapping[str, ObjectDecl]) -> ObjectWord:
    probe = Signature(RingDescriptor(()), tuple(sig_objects.values()), ())
    return parse_word(text, probe)


def parse_presentation(text: str) -> Presentation:
    """Read the sectioned presentation format ([ring], [objects], [generators], [relations], [twist])."""
    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise TermError(f"line {lineno}: declaration outside a section")
        sections[current].append((lineno, line))
    unknown = set(sections) - {"ring", "objects", "generators", "relations", "twist"}
    if unknown:
        raise TermError(f"unknown sections: {sorted(unknown)}")

    variables: tuple[str, ...] = ()
    kind = "integer"
    for lineno, line in sections.get("ring", []):
        key, _, value = (s.strip() for s in line.partition("="))
        if key == "vars":
            variables = tuple(value.replace(",", " ").split())
        elif key == "coefficients":
            kind = value
        else:
            raise TermError(f"line {lineno}: unknown ring key {key!r}")
    ring = RingDescriptor(variables, kind)

    objects: dict[str, ObjectDecl] = {}
    for lineno, line in sections.get("objects", []):
        parts = line.split()
        name, flags = parts[0], parts[1:] or [NO_DUAL]
        flag = flags[0]
        partner = None
        if flag.startswith(DUAL_PAIR):
            _, _, partner = flag.partition("=")
            if not partner and len(flags) > 1:
                partner = flags[1]
            flag = DUAL_PAIR
        if flag not in (SELF_DUAL, ORIENTED, DUAL_PAIR, NO_DUAL):
            raise TermError(f"line {lineno}: unknown object flag {flag!r}")
        objects[name] = ObjectDecl(name, flag, partner or None)

    gens: list[GeneratorDecl] = []
    for lineno, line in sections.get("generators", []):
        name, colon, rest = line.partition(":")
        if not colon or "->" not in rest:
            raise TermError(f"line {lineno}: expected 'name : dom -> cod [tag]'")
        dom_text, _, cod_part = rest.partition("->")
        cod_tokens = cod_part.split()
        tag = PLAIN
        if cod_tokens and cod_tokens[-1] in TAGS:
            tag = cod_tokens.pop()
        gens.append(
            GeneratorDecl(
                name.strip(),
                _parse_decl_word(dom_text, objects),
                _parse_decl_word(" ".join(cod_tokens), objects),
                tag,
            )
        )
    sig = Signature(ring, tuple(objects.values()), tuple(gens))

    for lineno, line in sections.get("twist", []):
        inverse = line.startswith("inverse ")
        body = line[len("inverse ") :] if inverse else line
        key, _, value = (s.strip() for s in body.partition("="))
        (letter,) = parse_word(key, sig).letters
        try:
            val: LaurentPoly | LinearTerm = parse_poly(value, ring)
        except PolyParseError:
            val = parse_term(value, sig)
        if inverse:
            if not isinstance(val, LinearTerm):
                val = LinearTerm.identity(ObjectWord((letter,)), sig).scale(val)
            sig.twist_inverse[letter] = val
        else:
            sig.twist[letter] = val

    relations = []
    for lineno, line in sections.get("relations", []):
        lhs, eq, rhs = line.partition("=")
        if not eq:
            raise TermError(f"line {lineno}: relation needs '='")
        try:
            relations.append((parse_term(lhs, sig), parse_term(rhs, sig)))
        except TermError as exc:
            raise TermError(f"line {lineno}: {exc}") from None
    return Presentation(sig, relations)


def format_presentation(p: Presentation) -> str:
    sig = p.signature
    lines = ["[ring]", f"vars = {' '.join(sig.ring.variables)}", f"coefficients = {sig.ring.coefficient_kind}", ""]
    lines.append("[objects]")
    for o in sig.objects:
        flag = f"{DUAL_PAIR}={o.partner}" if o.duality == DUAL_PAIR else o.duality
        lines.append(f"{o.name} {flag}")
    lines += ["", "[generators]"]
    for g in sig.generators:
        lines.append(f"{g.name} : {g.domain} -> {g.codomain} {g.tag}".replace("  ", " "))
    lines += ["", "[relations]"]
    for lhs, rhs in p.relations:
        lines.append(f"{format_linear(lhs)} = {format_linear(rhs)}")
    if sig.twist or sig.twist_inverse:
        lines += ["", "[twist]"]
        for letter, val in sig.twist.items():
            lines.append(f"{letter_text(letter)} = {val}")
        for letter, val in sig.twist_inverse.items():
            lines.append(f"inverse {letter_text(letter)} = {val}")
    return "\n".join(lines) + "\n"


def braid_word_term(word: Sequence[int], n: int, sig: Signature, letter: Letter) -> LinearTerm:
    """Term for a braid word on ``n`` copies of ``letter``; factors read bottom to top."""
    if not word:
        return LinearTerm.identity(ObjectWord((letter,) * n), sig)
    pos = Gen(sig.braiding(letter, letter, 1))
    neg = Gen(sig.braiding(letter, letter, -1))
    factors = []
    for k in word:
        i = abs(k)
        if not 0 < i < n:
            raise TermError(f"braid generator {k} out of range for {n} strands")
        factors.append(pad(pos if k > 0 else neg, ObjectWord((letter,) * (i - 1)), ObjectWord((letter,) * (n - i - 1))))
    return LinearTerm.of(compose_all(factors), sig)


def load_preset(name: str) -> Presentation:
    """Bundled presentations: ``braid``, ``hecke``, ``tl`` and ``free``."""
    from importlib import resources

    try:
        text = resources.files("affcat").joinpath("presets", f"{name}.pres").read_text(encoding="utf-8")
    except FileNotFoundError:
        raise TermError(f"unknown preset {name!r}") from None
    return parse_presentation(text)


def word_braiding(x: ObjectWord, y: ObjectWord, sig: Signature, sign: int = 1) -> Term:
    """Braiding of words expanded into letter crossings.

    ``sign=+1`` gives beta_{X,Y}: X Y -> Y X; ``sign=-1`` gives its inverse Y X -> X Y.
    Uses beta_{X,YZ} = (1_Y @ beta_{X,Z}) (beta_{X,Y} @ 1_Z) and
    beta_{XY,Z} = (beta_{X,Z} @ 1_Y) (1_X @ beta_{Y,Z}).
    """
    if not len(x) or not len(y):
        return Id(x + y)
    if len(x) == 1 and len(y) == 1:
        return Gen(sig.braiding(x[0], y[0], sign))
    if len(y) > 1:
        head, rest = y[:1], y[1:]
        first = pad(word_braiding(x, head, sig, 1), EMPTY, rest)
        second = pad(word_braiding(x, rest, sig, 1), head, EMPTY)
        if sign > 0:
            return VCompose(second, first)
        first_inv = pad(word_braiding(x, head, sig, -1), EMPTY, rest)
        second_inv = pad(word_braiding(x, rest, sig, -1), head, EMPTY)
        return VCompose(first_inv, second_inv)
    head, rest = x[:1], x[1:]
    first = pad(word_braiding(rest, y, sig, 1), head, EMPTY)
    second = pad(word_braiding(head, y, sig, 1), EMPTY, rest)
    if sign > 0:
        return VCompose(second, first)
    first_inv = pad(word_braiding(rest, y, sig, -1), head, EMPTY)
    second_inv = pad(word_braiding(head, y, sig, -1), EMPTY, rest)
    return VCompose(first_inv, second_inv)
