"""Affinization of presented braided categories.

``affinize_presentation`` adjoins invertible dots on generating letters together
with the crossing-slide, naturality and (optionally) cap/cup slide relations.
``coil_as_dots`` writes a coil in terms of crossings and dots, and
``flatten_term`` evaluates dots through the action of the affinization on the
base category: a dot on ``X`` with the object ``M`` to its right becomes
``beta_{M,X} (1_M @ theta_X) beta_{X,M}``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ring import LaurentPoly
from .term import (
    BRAID_POS,
    CAP,
    CUP,
    DOT_NEG,
    DOT_POS,
    DOWN,
    EMPTY,
    PLAIN,
    GeneratorDecl,
    Gen,
    HTensor,
    Id,
    Letter,
    LinearTerm,
    ObjectWord,
    Presentation,
    Signature,
    Term,
    TermError,
    VCompose,
    compose_all,
    letter_text,
    pad,
    simplify,
    tensor_all,
    typecheck,
    word_braiding,
)


class AffinizeError(TermError):
    pass


@dataclass(frozen=True)
class AffinizeOptions:
    pivotal: bool = False
    oriented: bool = False


def dot_name(letter: Letter, sign: int = 1) -> str:
    return ("dot_" if sign > 0 else "dotinv_") + letter_text(letter)


def dotted_letters(sig: Signature) -> list[Letter]:
    """Letters that carry dot generators in ``sig``."""
    return [x for x in sig.letters() if sig.has_generator(dot_name(x)) and sig.has_generator(dot_name(x, -1))]


def has_braiding(sig: Signature) -> bool:
    return any(g.tag == BRAID_POS for g in sig.generators)


# -- duality helpers ------------------------------------------------------------------


def right_cup(letter: Letter, sig: Signature) -> Gen:
    """eta_X: 1 -> X^v X."""
    name = sig.find(CUP, EMPTY, ObjectWord((sig.dual(letter), letter)))
    if name is None:
        raise AffinizeError(f"no cup 1 -> {letter_text(sig.dual(letter))} {letter_text(letter)}")
    return Gen(name)


def right_cap(letter: Letter, sig: Signature) -> Gen:
    """epsilon_X: X X^v -> 1."""
    name = sig.find(CAP, ObjectWord((letter, sig.dual(letter))), EMPTY)
    if name is None:
        raise AffinizeError(f"no cap {letter_text(letter)} {letter_text(sig.dual(letter))} -> 1")
    return Gen(name)


def left_cup(letter: Letter, sig: Signature) -> Gen:
    """eta'_X: 1 -> X ^vX."""
    name = sig.find(CUP, EMPTY, ObjectWord((letter, sig.dual(letter))))
    if name is None:
        raise AffinizeError(f"no cup 1 -> {letter_text(letter)} {letter_text(sig.dual(letter))}")
    return Gen(name)


def left_cap(letter: Letter, sig: Signature) -> Gen:
    """epsilon'_X: ^vX X -> 1."""
    name = sig.find(CAP, ObjectWord((sig.dual(letter), letter)), EMPTY)
    if name is None:
        raise AffinizeError(f"no cap {letter_text(sig.dual(letter))} {letter_text(letter)} -> 1")
    return Gen(name)


def dual_word(word: ObjectWord, sig: Signature) -> ObjectWord:
    return ObjectWord(tuple(sig.dual(x) for x in reversed(word.letters)))


def word_right_cup(word: ObjectWord, sig: Signature) -> Term:
    """eta_W: 1 -> W^v W, nested from the inside out."""
    if not len(word):
        return Id()
    if len(word) == 1:
        return right_cup(word[0], sig)
    head, rest = word[:1], word[1:]
    inner = pad(right_cup(head[0], sig), dual_word(rest, sig), rest)
    return VCompose(inner, word_right_cup(rest, sig))


def word_right_cap(word: ObjectWord, sig: Signature) -> Term:
    """epsilon_W: W W^v -> 1."""
    if not len(word):
        return Id()
    if len(word) == 1:
        return right_cap(word[0], sig)
    head, rest = word[:1], word[1:]
    inner = pad(word_right_cap(rest, sig), head, ObjectWord((sig.dual(head[0]),)))
    return VCompose(right_cap(head[0], sig), inner)


def word_left_cup(word: ObjectWord, sig: Signature) -> Term:
    """eta'_W: 1 -> W ^vW."""
    if not len(word):
        return Id()
    if len(word) == 1:
        return left_cup(word[0], sig)
    head, rest = word[:1], word[1:]
    inner = pad(word_left_cup(rest, sig), head, ObjectWord((sig.dual(head[0]),)))
    return VCompose(inner, left_cup(head[0], sig))


def word_left_cap(word: ObjectWord, sig: Signature) -> Term:
    """epsilon'_W: ^vW W -> 1."""
    if not len(word):
        return Id()
    if len(word) == 1:
        return left_cap(word[0], sig)
    head, rest = word[:1], word[1:]
    inner = pad(left_cap(head[0], sig), dual_word(rest, sig), rest)
    return VCompose(word_left_cap(rest, sig), inner)


def mate(f: Term, letter: Letter, sig: Signature) -> Term:
    """Right mate of an endomorphism of a letter: (1 @ eps_X)(1 @ f @ 1)(eta_X @ 1)."""
    dual = ObjectWord((sig.dual(letter),))
    return compose_all(
        [
            HTensor(right_cup(letter, sig), Id(dual)),
            pad(f, dual, dual),
            HTensor(Id(dual), right_cap(letter, sig)),
        ]
    )


# -- dots and coils ---------------------------------------------------------------------


def letter_dot(letter: Letter, sig: Signature, sign: int = 1) -> Term:
    """Dot (sign=+1) or inverse dot on one letter.

    Letters without their own generators (down letters in the oriented style)
    use the mate of the opposite dot on the dual letter.
    """
    name = dot_name(letter, sign)
    if sig.has_generator(name):
        return Gen(name)
    dual = sig.dual(letter)
    other = dot_name(dual, -sign)
    if letter[1] == DOWN and sig.has_generator(other):
        return mate(Gen(other), dual, sig)
    raise AffinizeError(f"no dot generator for letter {letter_text(letter)}")


def dot_word(word: ObjectWord, sig: Signature, sign: int = 1) -> Term:
    """Dot on a tensor word: the tensor product of the letter dots."""
    if not len(word):
        return Id()
    return tensor_all([letter_dot(x, sig, sign) for x in word])


def coil_as_dots(x: ObjectWord, y: ObjectWord, sig: Signature, sign: int = 1) -> LinearTerm:
    """xi_{X,Y} = beta_{X,Y} (1_X @ xi_Y), or its inverse (1_X @ xi_Y^-1) beta^-1_{X,Y}."""
    if sign > 0:
        t = VCompose(word_braiding(x, y, sig, 1), pad(dot_word(y, sig, 1), x, EMPTY))
    else:
        t = VCompose(pad(dot_word(y, sig, -1), x, EMPTY), word_braiding(x, y, sig, -1))
    return LinearTerm.of(simplify(t), sig)


# -- the transformer ---------------------------------------------------------------------


def affinize_presentation(p: Presentation, opts: AffinizeOptions = AffinizeOptions()) -> Presentation:
    sig = p.signature
    if opts.pivotal and not sig.has_duals():
        missing = [o.name for o in sig.objects if o.duality == "no_dual"]
        raise AffinizeError(f"pivotal affinization needs duality flags on every object; missing on {missing}")
    letters = [x for x in sig.letters() if not (opts.oriented and x[1] == DOWN)]
    new_gens = []
    for x in letters:
        for sign, tag in ((1, DOT_POS), (-1, DOT_NEG)):
            name = dot_name(x, sign)
            if sig.has_generator(name):
                raise AffinizeError(f"generator name {name!r} already in use")
            new_gens.append(GeneratorDecl(name, ObjectWord((x,)), ObjectWord((x,)), tag))
    out = sig.extend(new_gens)

    def lt(t: Term) -> LinearTerm:
        return LinearTerm.of(t, out)

    relations = [(lhs.with_signature(out), rhs.with_signature(out)) for lhs, rhs in p.relations]
    for x in letters:
        w = ObjectWord((x,))
        d, di = Gen(dot_name(x)), Gen(dot_name(x, -1))
        relations.append((lt(VCompose(di, d)), lt(Id(w))))
        relations.append((lt(VCompose(d, di)), lt(Id(w))))

    if has_braiding(sig):
        for x in letters:
            for y in sig.letters():
                wy = ObjectWord((y,))
                try:
                    pos = Gen(sig.braiding(x, y, 1))
                    neg = Gen(sig.braiding(y, x, -1))
                except TermError as exc:
                    raise AffinizeError(f"missing braiding generators: {exc}") from None
                d = Gen(dot_name(x))
                lhs = VCompose(neg, HTensor(d, Id(wy)))
                rhs = VCompose(HTensor(Id(wy), d), pos)
                relations.append((lt(lhs), lt(rhs)))

    for g in sig.generators:
        if g.tag != PLAIN:
            continue
        f = Gen(g.name)
        lhs = VCompose(dot_word(g.codomain, out), f) if len(g.codomain) else f
        rhs = VCompose(f, dot_word(g.domain, out)) if len(g.domain) else f
        relations.append((lt(lhs), lt(rhs)))

    if opts.pivotal:
        for g in sig.generators:
            if g.tag == CAP:
                a, b = g.domain.letters
                cap = Gen(g.name)
                for s in (1, -1):
                    lhs = VCompose(cap, HTensor(letter_dot(a, out, s), Id(ObjectWord((b,)))))
                    rhs = VCompose(cap, HTensor(Id(ObjectWord((a,))), letter_dot(b, out, -s)))
                    relations.append((lt(lhs), lt(rhs)))
            elif g.tag == CUP:
                a, b = g.codomain.letters
                cup = Gen(g.name)
                for s in (1, -1):
                    lhs = VCompose(HTensor(letter_dot(a, out, s), Id(ObjectWord((b,)))), cup)
                    rhs = VCompose(HTensor(Id(ObjectWord((a,))), letter_dot(b, out, -s)), cup)
                    relations.append((lt(lhs), lt(rhs)))
    return Presentation(out, relations)


# -- flatten ---------------------------------------------------------------------------


class _Flattener:
    def __init__(self, sig: Signature):
        self.sig = sig
        self.dots = {g.name: (g.domain[0], 1 if g.tag == DOT_POS else -1) for g in sig.generators if g.tag in (DOT_POS, DOT_NEG)}
        self._types: dict[Term, tuple[ObjectWord, ObjectWord]] = {}
        self._dotted: dict[Term, bool] = {}
        self._memo: dict[tuple[Term, ObjectWord], LinearTerm] = {}

    def types(self, t: Term) -> tuple[ObjectWord, ObjectWord]:
        if t not in self._types:
            self._types[t] = typecheck(t, self.sig)
        return self._types[t]

    def dotted(self, t: Term) -> bool:
        hit = self._dotted.get(t)
        if hit is None:
            if isinstance(t, Gen):
                hit = t.name in self.dots
            elif isinstance(t, VCompose):
                hit = self.dotted(t.upper) or self.dotted(t.lower)
            elif isinstance(t, HTensor):
                hit = self.dotted(t.left) or self.dotted(t.right)
            else:
                hit = False
            self._dotted[t] = hit
        return hit

    def twist(self, letter: Letter, sign: int) -> LinearTerm:
        w = ObjectWord((letter,))
        if letter not in self.sig.twist:
            raise AffinizeError(f"no twist data for letter {letter_text(letter)}")
        value = self.sig.twist[letter]
        if isinstance(value, LaurentPoly):
            if sign < 0:
                if not value.is_unit():
                    raise AffinizeError(f"twist scalar {value} is not invertible")
                value = value.inverse()
            return LinearTerm.identity(w, self.sig).scale(value)
        if sign > 0:
            return value.with_signature(self.sig)
        if letter not in self.sig.twist_inverse:
            raise AffinizeError(f"no inverse twist term for letter {letter_text(letter)}")
        return self.sig.twist_inverse[letter].with_signature(self.sig)

    def act(self, t: Term, pole: ObjectWord) -> LinearTerm:
        key = (t, pole)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        sig = self.sig
        if not self.dotted(t):
            r = LinearTerm.of(t if not len(pole) else HTensor(t, Id(pole)), sig)
        elif isinstance(t, Gen):
            letter, sign = self.dots[t.name]
            x = ObjectWord((letter,))
            theta = self.twist(letter, sign)
            if not len(pole):
                r = theta
            else:
                middle = LinearTerm.identity(pole, sig).tensor(theta)
                if sign > 0:
                    first = LinearTerm.of(word_braiding(x, pole, sig, 1), sig)
                    last = LinearTerm.of(word_braiding(pole, x, sig, 1), sig)
                else:
                    first = LinearTerm.of(word_braiding(pole, x, sig, -1), sig)
                    last = LinearTerm.of(word_braiding(x, pole, sig, -1), sig)
                r = first.then(middle).then(last)
        elif isinstance(t, VCompose):
            r = self.act(t.lower, pole).then(self.act(t.upper, pole))
        else:
            dom_a, _ = self.types(t.left)
            _, cod_b = self.types(t.right)
            right = LinearTerm.identity(dom_a, sig).tensor(self.act(t.right, pole))
            r = right.then(self.act(t.left, cod_b + pole))
        self._memo[key] = r
        return r


def flatten_term(t: LinearTerm, pole: ObjectWord = EMPTY) -> LinearTerm:
    """Image of ``t`` under the action on the base category, evaluated at ``pole``.

    With the empty pole this is the flatten functor: dot-free terms come back
    unchanged and a lone dot becomes the twist.
    """
    fl = _Flattener(t.sig)
    total = LinearTerm(t.sig, t.domain + pole, t.codomain + pole)
    for s, c in t.terms().items():
        total = total + fl.act(s, pole).scale(c)
    return total


def dot_free_part(sig: Signature) -> list[str]:
    return [g.name for g in sig.generators if g.tag not in (DOT_POS, DOT_NEG)]
