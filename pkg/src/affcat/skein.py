"""Planar link diagrams and skein-relation evaluators.

A diagram is a list of crossings ``(a, b, c, d)`` of edge labels, listed
counterclockwise starting from the incoming under-strand, so the under-strand
runs a -> c.  The over-strand runs d -> b for a positive crossing and b -> d for
a negative one.  Crossingless components are counted separately in ``unknots``.

Evaluators:

* ``bracket`` sums Kauffman-bracket states directly.
* ``skein_eval`` with the Conway or Kauffman/Dubrovnik rule switches crossings
  toward a descending diagram, whose value is ``t^(self writhe) delta^components``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .ring import I, LaurentPoly, RingDescriptor

SKEIN_RING = RingDescriptor(("z", "t", "delta"))
ZT_RING = RingDescriptor(("z", "t"))
Q_RING = RingDescriptor(("q",))
BRACKET_RING = RingDescriptor(("q", "delta"))

CS, KS_PLUS, KS_MINUS, KB = "CS", "KS+", "KS-", "KB"


class SkeinError(ValueError):
    pass


Crossing = tuple[int, int, int, int]


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...]
    signs: tuple[int, ...]
    unknots: int = 0
    orientation: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.crossings) != len(self.signs):
            raise SkeinError("one sign per crossing is required")
        if any(s not in (1, -1) for s in self.signs):
            raise SkeinError("signs must be +1 or -1")
        counts: dict[int, int] = {}
        for x in self.crossings:
            if len(x) != 4:
                raise SkeinError(f"crossing {x} does not have four slots")
            for e in x:
                counts[e] = counts.get(e, 0) + 1
        bad = sorted(e for e, k in counts.items() if k != 2)
        if bad:
            raise SkeinError(f"edge labels must appear exactly twice; offending labels {bad}")
        # each edge must leave one crossing and enter another
        heads: dict[int, int] = {}
        tails: dict[int, int] = {}
        for i, (x, s) in enumerate(zip(self.crossings, self.signs)):
            ins, outs = _in_out(x, s)
            for e in ins:
                if e in heads:
                    raise SkeinError(f"edge {e} enters two crossing slots; orientation is inconsistent")
                heads[e] = i
            for e in outs:
                if e in tails:
                    raise SkeinError(f"edge {e} leaves two crossing slots; orientation is inconsistent")
                tails[e] = i

    # -- structure --------------------------------------------------------
    def edges(self) -> list[int]:
        return sorted({e for x in self.crossings for e in x})

    def successor(self) -> dict[int, int]:
        """Edge following each edge along the orientation."""
        nxt: dict[int, int] = {}
        for x, s in zip(self.crossings, self.signs):
            a, b, c, d = x
            nxt[a] = c
            if s > 0:
                nxt[d] = b
            else:
                nxt[b] = d
        return nxt

    def components(self) -> list[list[int]]:
        """Edge cycles in orientation order, each starting at its smallest edge."""
        nxt = self.successor()
        seen: set[int] = set()
        out = []
        for e in self.edges():
            if e in seen:
                continue
            cyc = [e]
            seen.add(e)
            f = nxt[e]
            while f != e:
                cyc.append(f)
                seen.add(f)
                f = nxt[f]
            out.append(cyc)
        return out

    def component_count(self) -> int:
        return len(self.components()) + self.unknots

    def writhe(self) -> int:
        return sum(self.signs)

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        data = {"crossings": [list(x) for x in self.crossings], "signs": list(self.signs)}
        data["orient"] = {"components": self.components()}
        if self.unknots:
            data["unknots"] = self.unknots
        return data

    @classmethod
    def from_json(cls, data: dict) -> LinkDiagram:
        try:
            crossings = tuple(tuple(int(e) for e in x) for x in data["crossings"])
            signs = tuple(int(s) for s in data["signs"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SkeinError(f"malformed PD data: {exc}") from None
        d = cls(crossings, signs, int(data.get("unknots", 0)))
        orient = data.get("orient")
        if orient and "components" in orient:
            declared = sorted(sorted(c) for c in orient["components"])
            actual = sorted(sorted(c) for c in d.components())
            if declared != actual:
                raise SkeinError("declared component orientation does not match the crossing data")
        return d

    @classmethod
    def load(cls, path: str) -> LinkDiagram:
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _in_out(x: Crossing, sign: int) -> tuple[tuple[int, int], tuple[int, int]]:
    a, b, c, d = x
    return ((a, d), (c, b)) if sign > 0 else ((a, b), (c, d))


# -- braid closures --------------------------------------------------------------


def braid_closure_pd(word: Sequence[int], n: int) -> LinkDiagram:
    """PD diagram of the closure of a braid word on n strands (bottom to top)."""
    for k in word:
        if k == 0 or abs(k) >= n:
            raise SkeinError(f"braid generator {k} out of range for {n} strands")
    label = 0
    current: list[int] = []
    start: list[int] = []
    for _ in range(n):
        current.append(label)
        start.append(label)
        label += 1
    touched = [False] * n
    crossings: list[Crossing] = []
    signs: list[int] = []
    for k in word:
        i = abs(k) - 1
        a, b = current[i], current[i + 1]  # bottom-left, bottom-right
        c2, d2 = label, label + 1  # top-left, top-right
        label += 2
        if k > 0:
            crossings.append((b, d2, c2, a))
        else:
            crossings.append((a, b, d2, c2))
        signs.append(1 if k > 0 else -1)
        current[i], current[i + 1] = c2, d2
        touched[i] = touched[i + 1] = True
    # close up: identify each top label with the bottom label of the same position
    rename = {}
    for pos in range(n):
        if touched[pos]:
            rename[current[pos]] = start[pos]
    loops = sum(1 for pos in range(n) if not touched[pos])
    crossings = [tuple(rename.get(e, e) for e in x) for x in crossings]
    return relabel(LinkDiagram(tuple(crossings), tuple(signs), loops))


def relabel(d: LinkDiagram) -> LinkDiagram:
    """Renumber edges 0..2k-1 in order of first appearance."""
    mapping: dict[int, int] = {}
    for x in d.crossings:
        for e in x:
            if e not in mapping:
                mapping[e] = len(mapping)
    crossings = tuple(tuple(mapping[e] for e in x) for x in d.crossings)
    return LinkDiagram(crossings, d.signs, d.unknots)


def writhe(d: LinkDiagram) -> int:
    return d.writhe()


# -- diagram surgery -----------------------------------------------------------------


def switch(d: LinkDiagram, i: int) -> LinkDiagram:
    """Exchange over and under strands at crossing i, keeping orientations."""
    a, b, c, dd = d.crossings[i]
    if d.signs[i] > 0:
        new, sign = (dd, a, b, c), -1
    else:
        new, sign = (b, c, dd, a), 1
    crossings = d.crossings[:i] + (new,) + d.crossings[i + 1 :]
    signs = d.signs[:i] + (sign,) + d.signs[i + 1 :]
    return LinkDiagram(crossings, signs, d.unknots)


def _merge(d: LinkDiagram, i: int, pairs: Iterable[tuple[int, int]]) -> tuple[list[list[int]], int]:
    """Remove crossing i, joining the given pairs of its edges.

    Returns the remaining crossings (with edges renamed) and the number of
    closed loops that lost all their crossings.
    """
    parent: dict[int, int] = {}

    def find(e: int) -> int:
        while parent.get(e, e) != e:
            e = parent[e]
        return e

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    rest = [[find(e) for e in x] for j, x in enumerate(d.crossings) if j != i]
    used = {e for x in rest for e in x}
    removed = {find(e) for e in d.crossings[i]}
    return rest, sum(1 for r in removed if r not in used)


def oriented_smoothing(d: LinkDiagram, i: int) -> LinkDiagram:
    a, b, c, dd = d.crossings[i]
    pairs = [(a, b), (dd, c)] if d.signs[i] > 0 else [(a, dd), (b, c)]
    rest, loops = _merge(d, i, pairs)
    signs = d.signs[:i] + d.signs[i + 1 :]
    return LinkDiagram(tuple(tuple(x) for x in rest), signs, d.unknots + loops)


def unoriented_smoothings(d: LinkDiagram, i: int) -> tuple[list[list[int]], int, list[list[int]], int]:
    """The A-smoothing (a~b, c~d) and B-smoothing (a~d, b~c) as unoriented crossing lists."""
    a, b, c, dd = d.crossings[i]
    ra, la = _merge(d, i, [(a, b), (c, dd)])
    rb, lb = _merge(d, i, [(a, dd), (b, c)])
    return ra, la, rb, lb


def reorient(crossings: Sequence[Sequence[int]], unknots: int) -> LinkDiagram:
    """Choose an orientation on an unoriented crossing list and return the oriented diagram.

    The crossing tuples keep their under-strand (slots 0 and 2) and over-strand
    (slots 1 and 3); the starting slot and the sign are recomputed.
    """
    k = len(crossings)
    if k == 0:
        return LinkDiagram((), (), unknots)
    # strand pieces: (crossing, slot) -> partner slot across the crossing
    where: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(crossings):
        for s, e in enumerate(x):
            where.setdefault(e, []).append((ci, s))
    direction: dict[tuple[int, int], str] = {}
    for ci in range(k):
        for s0 in range(4):
            cur = (ci, s0)
            # walk the component entering at cur until it closes up
            while cur not in direction:
                direction[cur] = "in"
                exit_slot = (cur[0], (cur[1] + 2) % 4)
                direction[exit_slot] = "out"
                ends = where[crossings[exit_slot[0]][exit_slot[1]]]
                cur = ends[1] if ends[0] == exit_slot else ends[0]
    out_crossings: list[Crossing] = []
    signs: list[int] = []
    for ci, x in enumerate(crossings):
        a_slot = 0 if direction[(ci, 0)] == "in" else 2
        under_in = x[a_slot]
        under_out = x[(a_slot + 2) % 4]
        # counterclockwise from the incoming under edge
        rot = [x[(a_slot + j) % 4] for j in range(4)]
        a, b, c, dd = rot
        assert a == under_in and c == under_out
        b_slot = (a_slot + 1) % 4
        sign = -1 if direction[(ci, b_slot)] == "in" else 1
        out_crossings.append((a, b, c, dd))
        signs.append(sign)
    return LinkDiagram(tuple(out_crossings), tuple(signs), unknots)


# -- canonical keys ------------------------------------------------------------------


def canonical_key(d: LinkDiagram) -> tuple:
    """Relabelling-invariant memo key.

    Each choice of starting edge fixes a traversal labelling: the starting
    component first, then every other component entered at its smallest edge in
    order of that edge's smallest crossing.  The key is the minimum encoding.
    """
    if not d.crossings:
        return ((), d.unknots)
    nxt = d.successor()
    comps = d.components()
    best = None
    for ci, comp in enumerate(comps):
        others = [c for j, c in enumerate(comps) if j != ci]
        for start in comp:
            mapping: dict[int, int] = {}
            e = start
            while e not in mapping:
                mapping[e] = len(mapping)
                e = nxt[e]
            for other in others:
                for f in other:
                    mapping[f] = len(mapping)
            key = tuple(sorted((tuple(mapping[e] for e in x), s) for x, s in zip(d.crossings, d.signs)))
            if best is None or key < best:
                best = key
    return (best, d.unknots)


# -- evaluators ------------------------------------------------------------------------


def _self_writhe(d: LinkDiagram) -> int:
    comp_of: dict[int, int] = {}
    for k, comp in enumerate(d.components()):
        for e in comp:
            comp_of[e] = k
    return sum(s for x, s in zip(d.crossings, d.signs) if comp_of[x[0]] == comp_of[x[1]])


def _descending_bad(d: LinkDiagram) -> tuple[list[int], list[list[int]]]:
    """Traverse components from their base points; a crossing is bad when first met on the under-strand."""
    comps = d.components()
    crossing_at: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(d.crossings):
        for s, e in enumerate(x):
            crossing_at.setdefault(e, []).append((ci, s))
    seen: set[int] = set()
    bad: list[int] = []
    for comp in comps:
        for e in comp:
            # the crossing entered by edge e: slot 0 (under) or the incoming over slot
            for ci, s in crossing_at[e]:
                incoming = s == 0 or (s == 3 and d.signs[ci] > 0) or (s == 1 and d.signs[ci] < 0)
                if not incoming:
                    continue
                if ci not in seen:
                    seen.add(ci)
                    if s == 0:
                        bad.append(ci)
    return bad, comps


_SHARED_MEMO: dict[tuple[str, bool], dict[tuple, LaurentPoly]] = {}


def clear_memo() -> None:
    _SHARED_MEMO.clear()


class SkeinEvaluator:
    """Descending-diagram recursion for the Conway and Kauffman/Dubrovnik rules."""

    def __init__(self, rule: str, memo: bool = True, reverse_components: bool = False, max_depth: int = 10_000):
        if rule not in (CS, KS_PLUS, KS_MINUS):
            raise SkeinError(f"unsupported rule {rule!r}")
        self.rule = rule
        self.eps = 1 if rule == KS_PLUS else -1
        self.memo: dict[tuple, LaurentPoly] | None = None
        if memo:
            # values are diagram invariants, so one table per rule and base-point choice is shared
            self.memo = _SHARED_MEMO.setdefault((rule, reverse_components), {})
        self.reverse = reverse_components
        self.max_depth = max_depth
        self.calls = 0

    def __call__(self, d: LinkDiagram) -> LaurentPoly:
        return self.eval(d, 0)

    def base(self, d: LinkDiagram) -> LaurentPoly:
        t, delta = SKEIN_RING.var("t"), SKEIN_RING.var("delta")
        return t ** _self_writhe(d) * delta ** d.component_count()

    def eval(self, d: LinkDiagram, depth: int) -> LaurentPoly:
        if depth > self.max_depth:
            raise SkeinError("recursion depth cap exceeded")
        self.calls += 1
        key = None
        if self.memo is not None:
            key = canonical_key(d)
            if key in self.memo:
                return self.memo[key]
        z = SKEIN_RING.var("z")
        total = SKEIN_RING.zero()
        coef = SKEIN_RING.one()
        cur = d
        bad, _ = self._bad(cur)
        for ci in bad:
            if self.rule == CS:
                s = cur.signs[ci]
                total = total + coef * z * s * self.eval(oriented_smoothing(cur, ci), depth + 1)
            else:
                ra, la, rb, lb = unoriented_smoothings(cur, ci)
                va = self.eval(reorient(ra, cur.unknots + la), depth + 1)
                vb = self.eval(reorient(rb, cur.unknots + lb), depth + 1)
                total = total + coef * z * (va + vb * self.eps)
                coef = coef * (-self.eps)
            cur = switch(cur, ci)
        total = total + coef * self.base(cur)
        if key is not None:
            self.memo[key] = total
        return total

    def _bad(self, d: LinkDiagram) -> tuple[list[int], list[list[int]]]:
        if not self.reverse:
            return _descending_bad(d)
        # alternative base points: reverse component order and start each at its largest edge
        nxt = d.successor()
        comps = []
        for comp in reversed(d.components()):
            start = max(comp)
            cyc = [start]
            e = nxt[start]
            while e != start:
                cyc.append(e)
                e = nxt[e]
            comps.append(cyc)
        alt = LinkDiagram(d.crossings, d.signs, d.unknots)
        return _descending_bad_in_order(alt, comps), comps


def _descending_bad_in_order(d: LinkDiagram, comps: list[list[int]]) -> list[int]:
    crossing_at: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(d.crossings):
        for s, e in enumerate(x):
            crossing_at.setdefault(e, []).append((ci, s))
    seen: set[int] = set()
    bad = []
    for comp in comps:
        for e in comp:
            for ci, s in crossing_at[e]:
                incoming = s == 0 or (s == 3 and d.signs[ci] > 0) or (s == 1 and d.signs[ci] < 0)
                if incoming and ci not in seen:
                    seen.add(ci)
                    if s == 0:
                        bad.append(ci)
    return bad


def skein_eval(d: LinkDiagram, rule: str, memo: bool = True) -> LaurentPoly:
    """Unnormalised value of a diagram under a skein rule (formal delta)."""
    if rule == KB:
        return bracket(d)
    return SkeinEvaluator(rule, memo=memo)(d)


def _normalize(value: LaurentPoly, writhe_: int, delta_image: LaurentPoly, target: RingDescriptor) -> LaurentPoly:
    divided = value * value.ring.var("delta") ** -1
    out = divided.subst({"delta": delta_image}, target)
    return out * target.var("t") ** (-writhe_)


def homflypt_pd(d: LinkDiagram, memo: bool = True, reverse: bool = False) -> LaurentPoly:
    """HOMFLYPT polynomial in (z, t) with delta = (t - t^-1)/z."""
    z, t = ZT_RING.var("z"), ZT_RING.var("t")
    value = SkeinEvaluator(CS, memo=memo, reverse_components=reverse)(d)
    return _normalize(value, d.writhe(), (t - t**-1) * z**-1, ZT_RING)


def kauffman_delta(eps: int, ring: RingDescriptor = ZT_RING) -> LaurentPoly:
    """Loop value forced by the curl identity z (delta + eps) = t + eps t^-1."""
    z, t = ring.var("z"), ring.var("t")
    return (t + t**-1 * eps) * z**-1 - eps


def kauffman_framed(d: LinkDiagram, eps: int, memo: bool = True, reverse: bool = False) -> LaurentPoly:
    """Regular-isotopy Kauffman (eps = +1) or Dubrovnik (eps = -1) invariant, unknot = 1."""
    rule = KS_PLUS if eps > 0 else KS_MINUS
    value = SkeinEvaluator(rule, memo=memo, reverse_components=reverse)(d)
    return _normalize(value, 0, kauffman_delta(eps), ZT_RING)


def kauffman_poly(d: LinkDiagram, eps: int, memo: bool = True) -> LaurentPoly:
    """Ambient-isotopy Kauffman (eps = +1) or Dubrovnik (eps = -1) polynomial in (z, t)."""
    return kauffman_framed(d, eps, memo) * ZT_RING.var("t") ** (-d.writhe())


# -- Kauffman bracket -------------------------------------------------------------------


def bracket(d: LinkDiagram) -> LaurentPoly:
    """State sum over A/B smoothings with weights q and q^-1, loops counted as delta."""
    q, delta = BRACKET_RING.var("q"), BRACKET_RING.var("delta")
    k = len(d.crossings)
    total = BRACKET_RING.zero()
    edges = d.edges()
    for state in product((0, 1), repeat=k):
        parent = {e: e for e in edges}

        def find(e: int) -> int:
            while parent[e] != e:
                parent[e] = parent[parent[e]]
                e = parent[e]
            return e

        for x, s in zip(d.crossings, state):
            a, b, c, dd = x
            pairs = ((a, b), (c, dd)) if s == 0 else ((a, dd), (b, c))
            for u, v in pairs:
                parent[find(u)] = find(v)
        loops = len({find(e) for e in edges}) + d.unknots
        a_count = state.count(0)
        total = total + q ** (2 * a_count - k) * delta**loops
    return total


def jones_pd(d: LinkDiagram) -> LaurentPoly:
    """(-q^3)^-writhe <D> / delta at delta = -q^2 - q^-2."""
    q = Q_RING.var("q")
    divided = bracket(d) * BRACKET_RING.var("delta") ** -1
    value = divided.subst({"delta": -(q**2) - q**-2}, Q_RING)
    return value * (-(q**3)) ** (-d.writhe())


# -- Lickorish identity -------------------------------------------------------------------


@dataclass(frozen=True)
class LickorishReport:
    lhs: LaurentPoly
    rhs: LaurentPoly
    writhe: int
    components: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def lickorish_check(d: LinkDiagram) -> LickorishReport:
    """F_{L,1}(z,t) against i^-w (-1)^(c+1) F_{L,-1}(-iz, it) over the Gaussian integers.

    F here is the regular-isotopy invariant; the i^-w factor absorbs the
    framing, since t^w becomes (it)^w under the substitution.
    """
    g = ZT_RING.with_gaussian()
    z, t = g.var("z"), g.var("t")
    lhs = kauffman_framed(d, 1).lift(g)
    dub = kauffman_framed(d, -1).lift(g)
    sub = dub.subst({"z": z * (-I), "t": t * I}, g)
    w = d.writhe()
    c = d.component_count()
    factor = g.const(I) ** (-w) * (-1) ** (c + 1)
    return LickorishReport(lhs, sub * factor, w, c)


# -- corpora ----------------------------------------------------------------------------------


def braid_corpus(max_crossings: int, max_strands: int) -> list[tuple[list[int], int]]:
    """Braid words up to cyclic rotation, on 1..max_strands strands.

    A cyclic rotation of a word is a conjugate braid; the two closures are the
    same diagram up to edge relabelling, so one representative is kept.
    """
    out = []
    for n in range(1, max_strands + 1):
        letters = [s * i for i in range(1, n) for s in (1, -1)]
        seen: set[tuple[int, ...]] = set()
        for length in range(max_crossings + 1):
            for w in product(letters, repeat=length):
                key = min(w[i:] + w[:i] for i in range(length)) if length else ()
                if key not in seen:
                    seen.add(key)
                    out.append((list(key), n))
    return out


def closure_classes(corpus: Iterable[tuple[list[int], int]]) -> dict[tuple, list[tuple[list[int], int]]]:
    """Group braid words by the canonical key of their closure diagram."""
    groups: dict[tuple, list[tuple[list[int], int]]] = {}
    for w, n in corpus:
        groups.setdefault(canonical_key(braid_closure_pd(w, n)), []).append((w, n))
    return groups


# -- small diagrams ------------------------------------------------------------------------


def unlink(k: int) -> LinkDiagram:
    return LinkDiagram((), (), k)


def curl(sign: int) -> LinkDiagram:
    """One-crossing unknot: the closure of sigma_1^sign on two strands."""
    return braid_closure_pd([sign], 2)


__all__ = [
    "CS",
    "KB",
    "KS_MINUS",
    "KS_PLUS",
    "LickorishReport",
    "LinkDiagram",
    "SkeinError",
    "SkeinEvaluator",
    "bracket",
    "braid_closure_pd",
    "braid_corpus",
    "canonical_key",
    "clear_memo",
    "closure_classes",
    "curl",
    "homflypt_pd",
    "jones_pd",
    "kauffman_delta",
    "kauffman_framed",
    "kauffman_poly",
    "relabel",
    "lickorish_check",
    "oriented_smoothing",
    "reorient",
    "skein_eval",
    "switch",
    "unlink",
    "writhe",
]
