"""F-pullbacks, span tightness and the generalized span category Span(C, F).

Composition follows the convention that a class ``[S]`` goes from its right
foot ``S_R`` to its left foot ``S_L``; ``[S]∘[Q]`` is defined when
``S_R == Q_L`` and is the class of ``(s_L∘p_L, q_R∘p_R)`` for an F-pullback
``P`` of the cospan ``(s_R, q_L)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .category import FiniteCategory, Functor, identity_functor
from .errors import FeetMismatch, NoFPullback, NotPaired, NotSpanTight, PreconditionFailed
from .pullbacks import (_map_cospans, enumerate_cospans, find_pullbacks, fmap_span, has_pullbacks,
                        paired_spans)
from .report import CheckReport, as_budget, fresh
from .spans import (Cospan, Span, SpanClass, canonicalize, class_members, describe_span,
                    is_span_isomorphism, span_class, span_morphisms)

ASSOC_EXHAUSTIVE_LIMIT = 50_000


def find_f_pullbacks(F: Functor, C: Cospan, budget=None) -> list[Span]:
    """Spans paired with ``C`` whose image is a pullback of ``F(C)``.

    The image test is membership in the complete list of pullbacks of
    ``F(C)`` found by universal-property search in the target.
    """
    budget = as_budget(budget)
    images = set(find_pullbacks(F.target, fmap_span(F, C), budget))
    if not images:
        return []
    return [S for S in paired_spans(F.source, C, budget) if fmap_span(F, S) in images]


def compose_along(cat: FiniteCategory, S: Span, P: Span, Q: Span) -> Span:
    """``S ∘_P Q = (s_L∘p_L, q_R∘p_R)``; ``P`` must be paired with ``(s_R, q_L)``."""
    if cat.tgt[S.right] != cat.tgt[Q.left]:
        raise FeetMismatch("right foot of S differs from left foot of Q")
    if P.feet(cat) != (S.apex(cat), Q.apex(cat)):
        raise FeetMismatch("feet of P must be the apexes of S and Q")
    if cat.compose(P.left, S.right) != cat.compose(P.right, Q.left):
        raise NotPaired("P is not paired with the cospan (s_R, q_L)")
    return Span(cat.compose(P.left, S.left), cat.compose(P.right, Q.right))


@dataclass
class SpanCategory:
    """Span(C, F): objects of ``base`` and span-isomorphism classes as morphisms."""

    functor: Functor
    classes: dict = field(default_factory=dict)   # (source foot, target foot) -> [SpanClass]
    tight: CheckReport | None = None
    _fpb: dict = field(default_factory=dict, repr=False)

    @property
    def base(self) -> FiniteCategory:
        return self.functor.source

    @property
    def objects(self):
        return self.base.objects

    def all_classes(self) -> list[SpanClass]:
        return sorted(c for cs in self.classes.values() for c in cs)

    def hom(self, x: int, y: int) -> list[SpanClass]:
        return self.classes.get((x, y), [])

    def f_pullbacks(self, C: Cospan, budget=None) -> list[Span]:
        if C not in self._fpb:
            self._fpb[C] = find_f_pullbacks(self.functor, C, budget)
        return self._fpb[C]


def identity_class(SC: SpanCategory, x: int) -> SpanClass:
    cat = SC.base
    e = int(cat.identity[x])
    return span_class(cat, Span(e, e))


def _compose_reps(SC, S, Q, budget=None, which=0):
    cat = SC.base
    if cat.tgt[S.right] != cat.tgt[Q.left]:
        raise FeetMismatch("source of the first class differs from target of the second")
    C = Cospan(S.right, Q.left)
    pbs = SC.f_pullbacks(C, budget)
    if not pbs:
        raise NoFPullback(f"cospan ({cat.mor_names[C.left]}, {cat.mor_names[C.right]}) has no F-pullback")
    return compose_along(cat, S, pbs[which], Q)


def span_compose(SC: SpanCategory, A: SpanClass, B: SpanClass, budget=None) -> SpanClass:
    """``[A]∘[B]`` using the first F-pullback of ``(a_R, b_L)`` in canonical order."""
    if A.source != B.target:
        raise FeetMismatch("source of the first class differs from target of the second")
    composite = _compose_reps(SC, A.representative, B.representative, budget)
    return span_class(SC.base, composite)


def _lifts(F: Functor, S: Span, Q: Span, phi: int) -> list[int]:
    src = F.source
    return [psi for psi in src.hom(S.apex(src), Q.apex(src))
            if F.morphism_map[psi] == phi and is_span_isomorphism(src, int(psi), S, Q)]


def is_span_tight(F: Functor, budget=None, workers: int = 1) -> CheckReport:
    """Decide span tightness exhaustively.

    Fails if some cospan has no F-pullback, or if for two F-pullbacks
    ``S, Q`` of one cospan the span isomorphism ``F(S) -> F(Q)`` has no
    preimage that is a span isomorphism ``S -> Q``.  Lifts are required to
    exist, not to be unique; non-unique lifts are tallied in ``stats``.
    """
    budget = as_budget(budget)
    src, tgt = F.source, F.target
    cospans = enumerate_cospans(src, budget)

    def one(C):
        pbs = find_f_pullbacks(F, C, fresh(budget))
        if not pbs:
            return pbs, [{"reason": "no F-pullback", "cospan": describe_span(src, C, "cospan")}], 0, 0
        bad, pairs, multi = [], 0, 0
        for S, Q in itertools.product(pbs, repeat=2):
            pairs += 1
            phis = span_morphisms(tgt, fmap_span(F, S), fmap_span(F, Q))
            if len(phis) != 1:  # pragma: no cover - both images are pullbacks
                raise AssertionError("images of F-pullbacks are not uniquely isomorphic")
            lifts = _lifts(F, S, Q, phis[0])
            if not lifts:
                bad.append({"reason": "span isomorphism does not lift",
                            "cospan": describe_span(src, C, "cospan"),
                            "f_pullbacks": [describe_span(src, S), describe_span(src, Q)],
                            "image_isomorphism": tgt.mor_names[phis[0]]})
            elif len(lifts) > 1:
                multi += 1
        return pbs, bad, pairs, multi

    results = _map_cospans(one, cospans, workers)
    failures = [b for _, bad, _, _ in results for b in bad]
    stats = {
        "cospans_examined": len(cospans),
        "cospans_without_f_pullback": sum(1 for pbs, *_ in results if not pbs),
        "f_pullbacks_found": sum(len(pbs) for pbs, *_ in results),
        "pairs_checked": sum(r[2] for r in results),
        "non_unique_lifts": sum(r[3] for r in results),
    }
    return CheckReport(not failures, witnesses=failures[1:51],
                       counterexample=failures[0] if failures else None,
                       stats=stats, check="is_span_tight")


def build_span_category(F: Functor, budget=None, force: bool = False) -> SpanCategory:
    """Materialize every span class of the base; refuses non-span-tight ``F`` unless ``force``."""
    report = is_span_tight(F, budget)
    if not report.verdict and not force:
        raise NotSpanTight(f"{F.name} is not span tight", report)
    cat = F.source
    classes = {}
    seen = set()
    for x in range(cat.n_objects):
        legs = cat.morphisms_out_of(x)
        for a in legs:
            for b in legs:
                K = span_class(cat, Span(int(a), int(b)))
                if K not in seen:
                    seen.add(K)
                    classes.setdefault((K.source, K.target), []).append(K)
    for v in classes.values():
        v.sort()
    return SpanCategory(F, dict(sorted(classes.items())), report)


def _composable_pairs(SC):
    out = []
    for B in SC.all_classes():
        for A in SC.all_classes():
            if A.source == B.target:
                out.append((A, B))
    return out


def _show_class(cat, K):
    return describe_span(cat, K.representative)


def check_category_laws(SC: SpanCategory, mode: str = "exhaustive", sample_count: int = 1000,
                        seed: int | None = None, budget=None,
                        assoc_limit: int = ASSOC_EXHAUSTIVE_LIMIT) -> CheckReport:
    """Check P-independence, representative independence, units and associativity.

    ``mode="sampled"`` draws ``sample_count`` pairs and triples with
    ``random.Random(seed)``; exhaustive mode falls back to sampling the
    triples when there are more than ``assoc_limit`` of them.
    """
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "sampled" and seed is None:
        raise ValueError("sampled mode needs a seed")
    rng = random.Random(seed if seed is not None else 0)
    cat = SC.base
    violations = {"p_independence": [], "representative_independence": [], "units": [],
                  "associativity": []}
    undefined = []
    counts = dict.fromkeys(violations, 0)

    def record(family, entry):
        if len(violations[family]) < 20:
            violations[family].append(entry)

    def compose(A, B):
        try:
            return span_compose(SC, A, B, budget)
        except NoFPullback:
            undefined.append({"first": _show_class(cat, A), "second": _show_class(cat, B)})
            return None

    pairs = _composable_pairs(SC)
    if mode == "sampled" and len(pairs) > sample_count:
        pairs = sorted(rng.sample(pairs, sample_count))

    for A, B in pairs:
        S, Q = A.representative, B.representative
        C = Cospan(S.right, Q.left)
        pbs = SC.f_pullbacks(C, budget)
        if not pbs:
            undefined.append({"first": _show_class(cat, A), "second": _show_class(cat, B)})
            continue
        ref = span_class(cat, compose_along(cat, S, pbs[0], Q))
        for P in pbs[1:]:
            counts["p_independence"] += 1
            other = span_class(cat, compose_along(cat, S, P, Q))
            if other != ref:
                record("p_independence", {"first": _show_class(cat, A), "second": _show_class(cat, B),
                                          "pullbacks": [describe_span(cat, pbs[0]), describe_span(cat, P)]})
        for S2 in class_members(cat, S):
            for Q2 in class_members(cat, Q):
                counts["representative_independence"] += 1
                pbs2 = SC.f_pullbacks(Cospan(S2.right, Q2.left), budget)
                got = span_class(cat, compose_along(cat, S2, pbs2[0], Q2)) if pbs2 else None
                if got != ref:
                    record("representative_independence", {
                        "first": describe_span(cat, S2), "second": describe_span(cat, Q2),
                        "expected": _show_class(cat, ref),
                        "got": _show_class(cat, got) if got else None})

    classes = SC.all_classes()
    if mode == "sampled" and len(classes) > sample_count:
        classes = sorted(rng.sample(classes, sample_count))
    for A in classes:
        for side, got in (("right", compose(A, identity_class(SC, A.source))),
                          ("left", compose(identity_class(SC, A.target), A))):
            counts["units"] += 1
            if got != A:
                record("units", {"class": _show_class(cat, A), "side": side,
                                 "got": _show_class(cat, got) if got else None})

    by_target = {}
    for K in SC.all_classes():
        by_target.setdefault(K.target, []).append(K)
    all_pairs = _composable_pairs(SC)
    n_triples = sum(len(by_target.get(B.source, [])) for _, B in all_pairs)
    sampled_triples = mode == "sampled" or n_triples > assoc_limit
    if sampled_triples:
        weights = [len(by_target.get(B.source, [])) for _, B in all_pairs]
        k = sample_count if mode == "sampled" else assoc_limit
        triples = []
        if n_triples:
            for _ in range(min(k, n_triples)):
                A, B = rng.choices(all_pairs, weights=weights)[0]
                triples.append((A, B, rng.choice(by_target[B.source])))
    else:
        triples = [(A, B, T) for A, B in all_pairs for T in by_target.get(B.source, [])]
    for A, B, T in triples:
        ab = compose(A, B)
        bt = compose(B, T)
        if ab is None or bt is None:
            continue
        lhs, rhs = compose(ab, T), compose(A, bt)
        if lhs is None or rhs is None:
            continue
        counts["associativity"] += 1
        if lhs != rhs:
            record("associativity", {"classes": [_show_class(cat, K) for K in (A, B, T)],
                                     "left_bracketed": _show_class(cat, lhs),
                                     "right_bracketed": _show_class(cat, rhs)})

    failed = {k: v for k, v in violations.items() if v}
    ok = not failed and not undefined
    counterexample = None
    if not ok:
        if failed:
            family = next(iter(failed))
            counterexample = {"law": family, **failed[family][0]}
        else:
            counterexample = {"law": "composition undefined (no F-pullback)", **undefined[0]}
    stats = {
        "mode": mode,
        "classes": len(SC.all_classes()),
        "composable_pairs": len(all_pairs),
        "composable_triples": n_triples,
        "triples_sampled": sampled_triples,
        "checks": counts,
        "undefined_composites": len(undefined),
    }
    witnesses = [{"law": k, "count": len(v)} for k, v in failed.items()]
    return CheckReport(ok, witnesses=witnesses, counterexample=counterexample, stats=stats,
                       check="check_category_laws")


def classic_equivalence(cat: FiniteCategory, budget=None) -> CheckReport:
    """Compare classic pullback composition with composition in Span(C, Id)."""
    pre = has_pullbacks(cat, budget)
    if not pre.verdict:
        raise PreconditionFailed(f"{cat.name} does not have pullbacks", pre)
    Id = identity_functor(cat)
    SC = build_span_category(Id, budget)
    mismatches = []
    cospans = enumerate_cospans(cat, budget)
    for C in cospans:
        if find_f_pullbacks(Id, C, budget) != find_pullbacks(cat, C, budget):
            mismatches.append({"reason": "F-pullbacks differ from pullbacks",
                               "cospan": describe_span(cat, C, "cospan")})
    pairs = _composable_pairs(SC)
    for A, B in pairs:
        S, Q = A.representative, B.representative
        P = find_pullbacks(cat, Cospan(S.right, Q.left), budget)[0]
        classic = span_class(cat, compose_along(cat, S, P, Q))
        general = span_compose(SC, A, B, budget)
        if classic != general:
            mismatches.append({"reason": "composites differ", "first": _show_class(cat, A),
                               "second": _show_class(cat, B)})
    stats = {"cospans_compared": len(cospans), "pairs_compared": len(pairs)}
    return CheckReport(not mismatches, witnesses=mismatches[1:],
                       counterexample=mismatches[0] if mismatches else None,
                       stats=stats, check="classic_equivalence")
