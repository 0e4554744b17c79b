"""Horizontal and vertical traces.

* ``HtrMorphism`` is a representative ``[Z, f]`` of a horizontal-trace morphism
  with ``f : X Z -> Z Y``.  Classes are never decided intrinsically; two
  representatives are compared through ``theta_prime`` followed by an evaluation
  of the resulting affine term (``aff_tl_evaluate`` for the Temperley-Lieb case).
* ``vtrace_cocenter`` computes the quotient of the truncated endomorphism
  algebra by commutators, exactly, over the fraction field of the coefficients.
* ``qtrace`` wraps a TL endomorphism around the cylinder with an inverse coil
  and flattens it to a scalar.
* ``golf_census`` counts classes in the free category on one object.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, Sequence

from sympy import QQ, Symbol
from sympy.polys.matrices import DomainMatrix

from .affinize import (
    AffinizeOptions,
    affinize_presentation,
    coil_as_dots,
    dual_word,
    flatten_term,
    word_left_cap,
    word_left_cup,
    word_right_cap,
    word_right_cup,
)
from .ring import LaurentPoly
from .term import (
    DOT_NEG,
    DOT_POS,
    EMPTY,
    PLAIN,
    GeneratorDecl,
    Gen,
    HTensor,
    Id,
    LinearTerm,
    ObjectWord,
    Signature,
    Term,
    TermError,
    VCompose,
    compose_all,
    pad,
    simplify,
    typecheck,
    word_braiding,
)
from .tl import STRAND, TLElement, kb_resolve, tl_basis, tl_presentation
from .towers import HeckeElement, hecke_basis, hecke_mul


class TraceError(ValueError):
    pass


# -- horizontal trace --------------------------------------------------------------------


@dataclass(frozen=True)
class HtrMorphism:
    """Representative [Z, f] with f : source Z -> Z target."""

    source: ObjectWord
    target: ObjectWord
    z: ObjectWord
    f: LinearTerm

    def __post_init__(self) -> None:
        if self.f.domain != self.source + self.z or self.f.codomain != self.z + self.target:
            raise TraceError(
                f"representative has type {self.f.domain} -> {self.f.codomain}, "
                f"expected {self.source + self.z} -> {self.z + self.target}"
            )

    @property
    def sig(self) -> Signature:
        return self.f.sig

    def __str__(self) -> str:
        return f"[{self.z or '1'}, {self.f}]"


def htr_identity(x: ObjectWord, sig: Signature) -> HtrMorphism:
    return HtrMorphism(x, x, EMPTY, LinearTerm.identity(x, sig))


def htr_compose(g: HtrMorphism, f: HtrMorphism) -> HtrMorphism:
    """[Z Z', (1_Z @ g)(f @ 1_Z')] for f : W -> X with Z and g : X -> Y with Z'."""
    if f.target != g.source:
        raise TraceError(f"cannot compose: target {f.target} differs from source {g.source}")
    sig = f.sig
    lower = f.f.tensor(LinearTerm.identity(g.z, sig))
    upper = LinearTerm.identity(f.z, sig).tensor(g.f)
    return HtrMorphism(f.source, g.target, f.z + g.z, lower.then(upper).simplified())


def htr_tensor(a: HtrMorphism, b: HtrMorphism) -> HtrMorphism:
    """Braided tensor of representatives.

    With f1 : X1 Z1 -> Z1 Y1 and f2 : X2 Z2 -> Z2 Y2 the result has Z = Z1 Z2 and
    representative (1_Z1 @ beta_{Y1,Z2} @ 1_Y2)(f1 @ f2)(1_X1 @ beta^-1_{Z1,X2} @ 1_Z2).
    """
    sig = a.sig
    x1, y1, z1, x2, y2, z2 = a.source, a.target, a.z, b.source, b.target, b.z
    try:
        unbraid = word_braiding(z1, x2, sig, -1)
        braid = word_braiding(y1, z2, sig, 1)
    except TermError as exc:
        raise TraceError(f"missing braiding: {exc}") from None
    first = LinearTerm.of(simplify(pad(unbraid, x1, z2)), sig)
    last = LinearTerm.of(simplify(pad(braid, z1, y2)), sig)
    middle = a.f.tensor(b.f)
    return HtrMorphism(x1 + x2, y1 + y2, z1 + z2, first.then(middle).then(last).simplified())


def htr_scale(m: HtrMorphism, c: LaurentPoly | int) -> HtrMorphism:
    return HtrMorphism(m.source, m.target, m.z, m.f.scale(c))


def _dot_letters(sig: Signature) -> dict[str, tuple]:
    return {g.name: (g.domain[0], 1 if g.tag == DOT_POS else -1) for g in sig.generators if g.tag in (DOT_POS, DOT_NEG)}


def theta_coil(x: ObjectWord, y: ObjectWord, sig: Signature, sign: int = 1) -> HtrMorphism:
    """Image of the coil xi_{X,Y} (or its inverse) in the horizontal trace.

    xi_{X,Y} goes to [Y^v, eta_Y @ 1_X @ eps_Y]; xi^-1_{X,Y} goes to [Y, 1_{Y X Y}].
    """
    if sign > 0:
        yd = dual_word(y, sig)
        t = HTensor(HTensor(word_right_cup(y, sig), Id(x)), word_right_cap(y, sig))
        return HtrMorphism(x + y, y + x, yd, LinearTerm.of(simplify(t), sig))
    return HtrMorphism(y + x, x + y, y, LinearTerm.identity(y + x + y, sig))


def theta(t: LinearTerm) -> HtrMorphism:
    """Structural image of an affine term in the horizontal trace.

    Dots are the coils xi_{1,X}; everything else goes to [1, f].  A sum is only
    accepted when every summand lands on the same Z.
    """
    sig = t.sig
    dots = _dot_letters(sig)
    memo: dict[Term, HtrMorphism] = {}

    def go(s: Term) -> HtrMorphism:
        hit = memo.get(s)
        if hit is not None:
            return hit
        if isinstance(s, Gen) and s.name in dots:
            letter, sign = dots[s.name]
            r = theta_coil(EMPTY, ObjectWord((letter,)), sig, sign)
        elif isinstance(s, VCompose):
            r = htr_compose(go(s.upper), go(s.lower))
        elif isinstance(s, HTensor):
            r = htr_tensor(go(s.left), go(s.right))
        else:
            dom, cod = typecheck(s, sig)
            r = HtrMorphism(dom, cod, EMPTY, LinearTerm.of(s, sig))
        memo[s] = r
        return r

    parts = [htr_scale(go(s), c) for s, c in t.items()]
    if not parts:
        return HtrMorphism(t.domain, t.codomain, EMPTY, t)
    z = parts[0].z
    if any(p.z != z for p in parts):
        raise TraceError("summands land on different Z; theta of this sum has no single representative")
    total = parts[0].f
    for p in parts[1:]:
        total = total + p.f
    return HtrMorphism(t.domain, t.codomain, z, total)


def theta_prime(m: HtrMorphism) -> LinearTerm:
    """(eps'_Z @ 1_Y)(1_{^vZ} @ f) xi_{X Z, ^vZ} (1_X @ eta'_Z)."""
    sig = m.sig
    x, y, z = m.source, m.target, m.z
    if not len(z):
        return m.f.simplified()
    zbar = dual_word(z, sig)
    try:
        open_ = LinearTerm.of(simplify(HTensor(Id(x), word_left_cup(z, sig))), sig)
        close = LinearTerm.of(simplify(HTensor(word_left_cap(z, sig), Id(y))), sig)
    except TermError as exc:
        raise TraceError(f"missing duality data: {exc}") from None
    coil = coil_as_dots(x + z, zbar, sig, 1)
    body = LinearTerm.identity(zbar, sig).tensor(m.f)
    return open_.then(coil).then(body).then(close).simplified()


# -- Temperley-Lieb evaluation of affine terms ---------------------------------------------


@lru_cache(maxsize=None)
def aff_tl_signature() -> Signature:
    return affinize_presentation(tl_presentation(), AffinizeOptions(pivotal=True)).signature


def aff_tl_evaluate(t: LinearTerm, poles: Sequence[int] = (0, 1, 2), extra=None) -> tuple[TLElement, ...]:
    """TL images of an affine term under the action on o^p for each pole size p."""
    return tuple(kb_resolve(flatten_term(t, ObjectWord((STRAND,) * p)), extra=extra) for p in poles)


def htr_equivalent(a: HtrMorphism, b: HtrMorphism, poles: Sequence[int] = (0, 1, 2)) -> bool:
    """Compare classes through theta_prime and TL evaluation."""
    if (a.source, a.target) != (b.source, b.target):
        return False
    return aff_tl_evaluate(theta_prime(a), poles) == aff_tl_evaluate(theta_prime(b), poles)


def random_aff_tl_term(rng: random.Random, max_width: int = 3, max_length: int = 3) -> LinearTerm:
    """Random vertical word of padded generators of Aff(TL) on words of length at most max_width."""
    sig = aff_tl_signature()
    width = rng.randint(0, max_width)
    layers: list[Term] = []
    for _ in range(rng.randint(1, max_length)):
        options: list[tuple[Term, int, int]] = []
        for g in sig.generators:
            k, m = len(g.domain), len(g.codomain)
            if k <= width and width - k + m <= max_width:
                options.append((Gen(g.name), k, m))
        if not options:
            break
        gen, k, m = rng.choice(options)
        left = rng.randint(0, width - k)
        right = width - k - left
        layers.append(pad(gen, _word(left), _word(right)))
        width = width - k + m
    if not layers:
        layers.append(Id(_word(width)))
    return LinearTerm.of(simplify(compose_all(layers)), sig)


def _word(n: int) -> ObjectWord:
    return ObjectWord((STRAND,) * n)


# -- quantum trace ------------------------------------------------------------------------------


def qtrace(f: TLElement) -> LaurentPoly:
    """eps_X (f @ 1) xi^-1_{X,X^v} eta_X on X = o^n, flattened and evaluated in TL."""
    if f.bottom != f.top:
        raise TraceError(f"qtrace needs an endomorphism, got shape ({f.bottom}, {f.top})")
    n = f.bottom
    x = _word(n)
    base = aff_tl_signature()
    sig = base.extend([GeneratorDecl("f", x, x, PLAIN)])
    xd = dual_word(x, sig)
    cup = LinearTerm.of(simplify(word_right_cup(x, sig)), sig)
    coil = coil_as_dots(x, xd, sig, -1)
    body = LinearTerm.of(simplify(HTensor(Gen("f"), Id(xd))), sig) if n else LinearTerm.identity(EMPTY, sig)
    cap = LinearTerm.of(simplify(word_right_cap(x, sig)), sig)
    if n == 0:
        # the empty wrap is the unit; f is a scalar multiple of the empty diagram
        return f.coefficient(tl_basis(0, 0)[0])
    wrapped = cup.then(coil).then(body).then(cap)
    value = kb_resolve(flatten_term(wrapped), extra={"f": f})
    return value.coefficient(tl_basis(0, 0)[0])


# -- vertical trace ----------------------------------------------------------------------------


@dataclass
class CocenterResult:
    model: str
    max_n: int
    labels: list[tuple]
    basis: list[tuple]
    rank: int
    _rows: list[dict[int, object]] = field(repr=False, default_factory=list)
    _pivots: list[int] = field(repr=False, default_factory=list)
    _to_domain: Callable | None = field(repr=False, default=None)
    _domain: object = field(repr=False, default=None)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def project(self, vector: dict[tuple, LaurentPoly]) -> dict[tuple, object]:
        """Normal form of a vector modulo the commutator span (keys are labels)."""
        dom = self._domain
        index = {lab: i for i, lab in enumerate(self.labels)}
        v = [dom.zero] * len(self.labels)
        for lab, c in vector.items():
            v[index[lab]] = dom.add(v[index[lab]], self._to_domain(c))
        for row, p in zip(self._rows, self._pivots):
            if v[p] != dom.zero:
                c = v[p]
                for j, a in row.items():
                    v[j] = dom.sub(v[j], dom.mul(c, a))
        return {self.labels[i]: c for i, c in enumerate(v) if c != dom.zero}

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "max_n": self.max_n,
            "dimension": self.dimension,
            "rank": self.rank,
            "spanning_set_size": len(self.labels),
            "basis": [list(map(_label_json, b)) for b in self.basis],
        }


def _label_json(x):
    if hasattr(x, "arcs"):
        return [list(a) for a in x.arcs()]
    if isinstance(x, tuple):
        return list(x)
    return x


def _sympy_domain(var: str):
    sym = Symbol(var)
    dom = QQ.frac_field(sym)

    def conv(p: LaurentPoly):
        i = p.ring.index(var)
        expr = 0
        for exps, c in p.terms():
            if any(e for j, e in enumerate(exps) if j != i):
                raise TraceError(f"coefficient {p} involves variables other than {var}")
            expr += int(c) * sym ** exps[i]
        return dom.from_sympy(expr)

    return dom, conv


def _tl_model(max_n: int):
    labels = [(n, pm) for n in range(max_n + 1) for pm in tl_basis(n, n)]

    def commutators():
        for m in range(max_n + 1):
            for n in range(m, max_n + 1):
                if (n - m) % 2:
                    continue
                for f in tl_basis(m, n):
                    for g in tl_basis(n, m):
                        fe, ge = TLElement.from_matching(f, _kb()), TLElement.from_matching(g, _kb())
                        yield _tl_vector(fe.compose(ge)), _tl_vector(ge.compose(fe))

    return labels, commutators, "q"


def _kb():
    from .tl import kb_loop

    return kb_loop()


def _tl_vector(e: TLElement) -> dict[tuple, LaurentPoly]:
    return {(e.bottom, pm): c for pm, c in e.items()}


def _hecke_model(max_n: int):
    labels = [(n, w) for n in range(max_n + 1) for w in hecke_basis(n)]

    def commutators():
        for n in range(max_n + 1):
            for u in hecke_basis(n):
                for v in hecke_basis(n):
                    a, b = HeckeElement.basis(u), HeckeElement.basis(v)
                    yield _hecke_vector(hecke_mul(a, b)), _hecke_vector(hecke_mul(b, a))

    return labels, commutators, "z"


def _hecke_vector(h: HeckeElement) -> dict[tuple, LaurentPoly]:
    return {(h.n, w): c for w, c in h.items()}


MAX_COCENTER_N = 5


def vtrace_cocenter(model: str, max_n: int, shuffle: random.Random | None = None) -> CocenterResult:
    """Quotient of the sum of End(X_n), n <= max_n, by the span of f g - g f.

    Cross-object commutators (f : X_m -> X_n, g : X_n -> X_m) are included.
    ``shuffle`` permutes the generator order, which must not change the answer.
    """
    if max_n < 0 or max_n > MAX_COCENTER_N:
        raise TraceError(f"truncation bound {max_n} outside 0..{MAX_COCENTER_N}")
    if model == "tl":
        labels, commutators, var = _tl_model(max_n)
    elif model == "hecke":
        labels, commutators, var = _hecke_model(max_n)
    else:
        raise TraceError(f"unknown model {model!r}")
    dom, conv = _sympy_domain(var)
    index = {lab: i for i, lab in enumerate(labels)}
    rows = []
    for fg, gf in commutators():
        row = [dom.zero] * len(labels)
        for lab, c in fg.items():
            row[index[lab]] = dom.add(row[index[lab]], conv(c))
        for lab, c in gf.items():
            row[index[lab]] = dom.sub(row[index[lab]], conv(c))
        if any(x != dom.zero for x in row):
            rows.append(row)
    if shuffle is not None:
        shuffle.shuffle(rows)
    if rows:
        mat = DomainMatrix(rows, (len(rows), len(labels)), dom)
        rref, pivots = mat.rref()
        dense = rref.to_list()
        reduced = [{j: dense[i][j] for j in range(len(labels)) if dense[i][j] != dom.zero} for i in range(len(pivots))]
    else:
        pivots, reduced = (), []
    pivot_set = set(pivots)
    basis = [labels[i] for i in range(len(labels)) if i not in pivot_set]
    return CocenterResult(model, max_n, labels, basis, len(pivots), reduced, list(pivots), conv, dom)


def tl_commutator(f: TLElement, g: TLElement) -> dict[tuple, LaurentPoly]:
    """f g - g f as a labelled vector; shapes must be opposite."""
    a, b = _tl_vector(f.compose(g)), _tl_vector(g.compose(f))
    out = dict(a)
    for lab, c in b.items():
        out[lab] = out[lab] - c if lab in out else -c
    return out


def hecke_commutator(f: HeckeElement, g: HeckeElement) -> dict[tuple, LaurentPoly]:
    return _hecke_vector(hecke_mul(f, g) - hecke_mul(g, f))


# -- golf census ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class GolfReport:
    depth: int
    htr_end_unit: int
    aff_end_unit: int
    aff_end_strand: int
    aff_end_strand_invertible: bool
    htr_end_strand: int
    htr_end_strand_monoid: bool

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "htr_end_unit_classes": self.htr_end_unit,
            "aff_end_unit": self.aff_end_unit,
            "aff_end_strand_dot_powers": self.aff_end_strand,
            "aff_end_strand_invertible": self.aff_end_strand_invertible,
            "htr_end_strand_classes": self.htr_end_strand,
            "htr_end_strand_cyclic_monoid": self.htr_end_strand_monoid,
        }


def _free_hom(i: int, j: int) -> list[str]:
    """Morphisms o^i -> o^j of the free monoidal category on one object, no generators."""
    return ["id"] if i == j else []


def _htr_classes(x: int, y: int, k: int) -> list[int]:
    """Classes [o^j, f] with f : o^(x+j) -> o^(j+y), j <= k, under the sliding relation.

    For g : Z' -> Z the relation identifies [Z, (g @ 1) f] with [Z', f (1 @ g)];
    in the free category g exists only for Z = Z', so each class is a union-find root.
    """
    nodes = [(j, f) for j in range(k + 1) for f in _free_hom(x + j, j + y)]
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for (j, f), (j2, _) in product(nodes, nodes):
        for g in _free_hom(j2, j):
            # both sides of the relation are f itself once g is an identity
            a, b = (j, f), (j2, f)
            if b in parent:
                parent[find(a)] = find(b)
    return sorted({find(v)[0] for v in nodes})


def _free_group_normal_form(word: Sequence[int]) -> tuple[int, ...]:
    """Cancel adjacent dot / dotinv pairs; the only relations in Aff(free)."""
    stack: list[int] = []
    for s in word:
        if stack and stack[-1] == -s:
            stack.pop()
        else:
            stack.append(s)
    return tuple(stack)


def golf_census(k: int) -> GolfReport:
    """Census in the free monoidal category on one object, truncated at depth k."""
    if k < 0:
        raise TraceError("depth must be non-negative")
    sig = affinize_presentation(_free_presentation()).signature
    # every generator of Aff(free) is a dot on o, so a morphism 1 -> 1 contains none
    if any(not len(g.domain) or not len(g.codomain) for g in sig.generators):
        raise TraceError("free signature unexpectedly has generators touching the unit")
    aff_unit = 1
    forms = {_free_group_normal_form(w) for n in range(k + 1) for w in product((1, -1), repeat=n)}
    invertible = all(_free_group_normal_form(f + tuple(-s for s in reversed(f))) == () for f in forms)
    classes_unit = _htr_classes(0, 0, k)
    classes_strand = _htr_classes(1, 1, k)
    # [o^i] o [o^j] = [o^(i+j)] for the classes of End_htr(o)
    monoid = all(i + j in classes_strand for i in classes_strand for j in classes_strand if i + j <= k)
    return GolfReport(k, len(classes_unit), aff_unit, len(forms), invertible, len(classes_strand), monoid and 0 in classes_strand)


def _free_presentation():
    from .term import load_preset

    return load_preset("free")


__all__ = [
    "CocenterResult",
    "GolfReport",
    "HtrMorphism",
    "TraceError",
    "aff_tl_evaluate",
    "aff_tl_signature",
    "golf_census",
    "hecke_commutator",
    "htr_compose",
    "htr_equivalent",
    "htr_identity",
    "htr_tensor",
    "qtrace",
    "random_aff_tl_term",
    "theta",
    "theta_coil",
    "theta_prime",
    "tl_commutator",
    "vtrace_cocenter",
]
