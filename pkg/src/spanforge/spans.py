"""Spans, cospans, pairing, span morphisms and canonical class representatives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .category import FiniteCategory
from .errors import DanglingReference, FeetMismatch


class Span(NamedTuple):
    """``(s_L, s_R)`` with common source, the apex."""

    left: int
    right: int

    def apex(self, cat: FiniteCategory) -> int:
        return int(cat.src[self.left])

    def feet(self, cat: FiniteCategory) -> tuple[int, int]:
        return int(cat.tgt[self.left]), int(cat.tgt[self.right])

    def key(self, cat: FiniteCategory) -> tuple[int, int, int]:
        return int(cat.src[self.left]), self.left, self.right


class Cospan(NamedTuple):
    """``(c_L, c_R)`` with common target, the apex."""

    left: int
    right: int

    def apex(self, cat: FiniteCategory) -> int:
        return int(cat.tgt[self.left])

    def feet(self, cat: FiniteCategory) -> tuple[int, int]:
        return int(cat.src[self.left]), int(cat.src[self.right])


@dataclass(frozen=True, order=True)
class SpanClass:
    """An isomorphism class of spans, held by its canonical representative.

    The *source* of a class is its right foot and the *target* its
    left foot.
    """

    representative: Span
    feet: tuple[int, int]

    @property
    def source(self) -> int:
        return self.feet[1]

    @property
    def target(self) -> int:
        return self.feet[0]


def make_span(cat: FiniteCategory, left: int, right: int) -> Span:
    cat._check_mor(left)
    cat._check_mor(right)
    if cat.src[left] != cat.src[right]:
        raise FeetMismatch(f"legs {cat.mor_names[left]!r}, {cat.mor_names[right]!r} do not share a source")
    return Span(int(left), int(right))


def make_cospan(cat: FiniteCategory, left: int, right: int) -> Cospan:
    cat._check_mor(left)
    cat._check_mor(right)
    if cat.tgt[left] != cat.tgt[right]:
        raise FeetMismatch(f"legs {cat.mor_names[left]!r}, {cat.mor_names[right]!r} do not share a target")
    return Cospan(int(left), int(right))


def parse_pair(cat: FiniteCategory, text: str) -> tuple[int, int]:
    """Parse the ``LEFT,RIGHT`` literal used on the command line."""
    parts = text.split(",")
    if len(parts) != 2:
        raise DanglingReference(f"expected LEFT,RIGHT but got {text!r}")
    return cat.mor(parts[0].strip()), cat.mor(parts[1].strip())


def is_paired(cat: FiniteCategory, S: Span, C: Cospan) -> bool:
    if S.feet(cat) != C.feet(cat):
        return False
    return cat.compose(S.left, C.left) == cat.compose(S.right, C.right)


def _require_same_feet(cat, S, Q):
    if S.feet(cat) != Q.feet(cat):
        raise FeetMismatch("spans have different feet")


def span_morphisms(cat: FiniteCategory, S: Span, Q: Span) -> list[int]:
    """All Φ: S_A → Q_A with ``s_L = q_L∘Φ`` and ``s_R = q_R∘Φ``."""
    _require_same_feet(cat, S, Q)
    phis = cat.hom(S.apex(cat), Q.apex(cat))
    if len(phis) == 0:
        return []
    ok = (cat.then(phis, Q.left) == S.left) & (cat.then(phis, Q.right) == S.right)
    return [int(p) for p in phis[ok]]


def is_span_morphism(cat: FiniteCategory, phi: int, S: Span, Q: Span) -> bool:
    _require_same_feet(cat, S, Q)
    if cat.src[phi] != S.apex(cat) or cat.tgt[phi] != Q.apex(cat):
        return False
    return cat.compose(phi, Q.left) == S.left and cat.compose(phi, Q.right) == S.right


def is_span_isomorphism(cat: FiniteCategory, phi: int, S: Span, Q: Span) -> bool:
    return is_span_morphism(cat, phi, S, Q) and cat.inverse[phi] >= 0


def class_members(cat: FiniteCategory, S: Span) -> list[Span]:
    """Every span isomorphic to ``S``, sorted by ``(apex, left, right)``.

    The class is the orbit ``{(s_L∘ψ, s_R∘ψ) : ψ an isomorphism into S_A}``.
    """
    psis = cat.isos_into[S.apex(cat)]
    lefts = cat.then(psis, S.left)
    rights = cat.then(psis, S.right)
    members = {Span(int(a), int(b)) for a, b in zip(lefts, rights)}
    return sorted(members, key=lambda s: s.key(cat))


def canonicalize(cat: FiniteCategory, S: Span) -> Span:
    psis = cat.isos_into[S.apex(cat)]
    lefts = cat.then(psis, S.left)
    rights = cat.then(psis, S.right)
    apexes = cat.src[psis]
    i = np.lexsort((rights, lefts, apexes))[0]
    return Span(int(lefts[i]), int(rights[i]))


def span_class(cat: FiniteCategory, S: Span) -> SpanClass:
    return SpanClass(canonicalize(cat, S), S.feet(cat))


def same_class(cat: FiniteCategory, S: Span, Q: Span) -> bool:
    if S.feet(cat) != Q.feet(cat):
        return False
    return canonicalize(cat, S) == canonicalize(cat, Q)


def all_spans(cat: FiniteCategory) -> list[Span]:
    """Every span in ``cat`` ordered by ``(apex, left, right)``."""
    out = []
    for x in range(cat.n_objects):
        legs = cat.morphisms_out_of(x)
        out.extend(Span(int(a), int(b)) for a in legs for b in legs)
    return out


def describe_span(cat: FiniteCategory, S, kind: str = "span") -> dict:
    """JSON-ready description using the s_L/s_R (or c_L/c_R) leg names."""
    letter = "s" if kind == "span" else "c"
    apex, feet = S.apex(cat), S.feet(cat)
    return {
        f"{letter}_L": cat.mor_names[S.left],
        f"{letter}_R": cat.mor_names[S.right],
        "apex": cat.objects[apex],
        "feet": [cat.objects[feet[0]], cat.objects[feet[1]]],
    }
