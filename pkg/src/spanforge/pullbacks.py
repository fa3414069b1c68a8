"""Pullbacks by exhaustive universal-property search.

A span ``S`` paired with ``C`` is a pullback exactly when, for every object
``A``, the map ``hom(A, S_A) -> {spans from A paired with C}`` sending Φ to
``(s_L∘Φ, s_R∘Φ)`` is a bijection: every paired span then receives exactly
one span morphism into ``S``.  All checks below count those preimages
directly; nothing relies on structure specific to a catalog category.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .category import FiniteCategory, Functor
from .report import Budget, CheckReport, as_budget, fresh
from .spans import Cospan, Span, canonicalize, describe_span, is_paired, span_morphisms

_lock = threading.Lock()


def _memo(cat: FiniteCategory, name: str) -> dict:
    # derived lookup tables; the category itself never changes after validation
    return cat.__dict__.setdefault("_memo_" + name, {})


def _hom_counts(cat: FiniteCategory) -> np.ndarray:
    memo = _memo(cat, "hom_counts")
    if "all" not in memo:
        n = cat.n_objects
        memo["all"] = np.array([[len(cat.hom(a, x)) for x in range(n)] for a in range(n)], dtype=np.int64)
    return memo["all"]


def _spend(budget: Budget, n: int, what: str) -> None:
    with _lock:
        budget.spend(n, what)


def enumerate_cospans(cat: FiniteCategory, budget=None) -> list[Cospan]:
    """Every ordered pair ``(c_L, c_R)`` with a common target, in MorId order."""
    budget = as_budget(budget)
    total = sum(len(cat.morphisms_into(x)) ** 2 for x in range(cat.n_objects))
    _spend(budget, total, "cospans")
    out = []
    for cl in range(cat.n_morphisms):
        for cr in cat.morphisms_into(cat.tgt[cl]):
            out.append(Cospan(cl, int(cr)))
    return out


def _images(cat: FiniteCategory, A: int, leg: int):
    """``hom(A, src(leg))`` and the composites ``leg∘u`` for each of its members."""
    memo = _memo(cat, "images")
    key = (A, leg)
    if key not in memo:
        us = cat.hom(A, cat.src[leg])
        memo[key] = (us, cat.then(us, leg) if len(us) else us)
    return memo[key]


def _sorted_images(cat: FiniteCategory, A: int, leg: int):
    memo = _memo(cat, "sorted_images")
    key = (A, leg)
    if key not in memo:
        vs, b = _images(cat, A, leg)
        order = np.argsort(b, kind="stable")
        memo[key] = (vs, order, b[order])
    return memo[key]


def paired_count(cat: FiniteCategory, C: Cospan, A: int) -> int:
    """Number of spans with apex ``A`` paired with ``C``."""
    return int(paired_counts(cat, C)[A])


def _leg_histogram(cat: FiniteCategory, leg: int) -> np.ndarray:
    # for each object A, how often each morphism into the cospan apex arises as leg∘u
    memo = _memo(cat, "histogram")
    if leg not in memo:
        width = len(cat.morphisms_into(cat.tgt[leg]))
        ins = cat.morphisms_into(cat.src[leg])
        key = cat.src[ins].astype(np.int64) * width + cat.inpos[cat.then(ins, leg)]
        memo[leg] = np.bincount(key, minlength=cat.n_objects * width).reshape(cat.n_objects, width)
    return memo[leg]


def paired_counts(cat: FiniteCategory, C: Cospan) -> np.ndarray:
    """Number of spans paired with ``C``, indexed by apex object."""
    return np.einsum("ij,ij->i", _leg_histogram(cat, C.left), _leg_histogram(cat, C.right))


def _paired_arrays(cat: FiniteCategory, C: Cospan, A: int):
    us, a = _images(cat, A, C.left)
    vs, order, bs = _sorted_images(cat, A, C.right)
    if len(us) == 0 or len(vs) == 0:
        return us[:0], vs[:0]
    # equi-join of the two image lists, in (i, j) order
    lo = np.searchsorted(bs, a, "left")
    cnt = np.searchsorted(bs, a, "right") - lo
    i = np.repeat(np.arange(len(a)), cnt)
    starts = np.repeat(lo - (np.cumsum(cnt) - cnt), cnt)
    j = order[np.arange(len(i)) + starts]
    return us[i], vs[j]


def _paired_from(cat: FiniteCategory, C: Cospan, A: int) -> list[Span]:
    us, vs = _paired_arrays(cat, C, A)
    return [Span(int(u), int(v)) for u, v in zip(us, vs)]


def paired_spans(cat: FiniteCategory, C: Cospan, budget=None) -> list[Span]:
    """All spans paired with ``C``, ordered by ``(apex, left, right)``."""
    budget = as_budget(budget)
    _spend(budget, int(paired_counts(cat, C).sum()), "paired spans")
    out = []
    for A in range(cat.n_objects):
        out.extend(_paired_from(cat, C, A))
    return out


def _pullback_failure(cat: FiniteCategory, S: Span, C: Cospan):
    """None if ``S`` is a pullback of ``C``, else ``(Q, number of span morphisms Q -> S)``.

    ``S`` is assumed paired with ``C``.  The first offending ``Q`` in
    ``(apex, left, right)`` order is returned.
    """
    X = S.apex(cat)
    counts = paired_counts(cat, C)
    for A in range(cat.n_objects):
        phis = cat.hom(A, X)
        n_paired = counts[A]
        if len(phis):
            keys = cat.then(phis, S.left).astype(np.int64) * cat.n_morphisms + cat.then(phis, S.right)
            injective = len(np.unique(keys)) == len(keys)
        else:
            injective = True
        if injective and len(phis) == n_paired:
            continue
        for Q in _paired_from(cat, C, A):
            k = len(span_morphisms(cat, Q, S))
            if k != 1:
                return Q, k
        raise AssertionError("count mismatch without an offending span")  # pragma: no cover
    return None


def is_pullback(cat: FiniteCategory, S: Span, C: Cospan, budget=None) -> CheckReport:
    budget = as_budget(budget)
    examined = int(paired_counts(cat, C).sum())
    _spend(budget, examined, "paired spans")
    stats = {"paired_spans_examined": examined}
    if not is_paired(cat, S, C):
        return CheckReport(False, counterexample={
            "reason": "span is not paired with the cospan",
            "cospan": describe_span(cat, C, "cospan"),
            "span": describe_span(cat, S),
        }, stats=stats, check="is_pullback")
    failure = _pullback_failure(cat, S, C)
    if failure is None:
        return CheckReport(True, witnesses=[{"cospan": describe_span(cat, C, "cospan"),
                                             "span": describe_span(cat, S)}],
                           stats=stats, check="is_pullback")
    Q, k = failure
    return CheckReport(False, counterexample={
        "reason": "paired span with %s span morphisms into the candidate" % ("no" if k == 0 else k),
        "cospan": describe_span(cat, C, "cospan"),
        "span": describe_span(cat, S),
        "paired_span": describe_span(cat, Q),
        "span_morphism_count": k,
    }, stats=stats, check="is_pullback")


def _test_tables(cat: FiniteCategory, X: int):
    """Slices of ``table(X)`` used to test joint injectivity of legs out of ``X``.

    Returns ``(first, rest, offsets)``: the rows for the smallest hom-set
    ``hom(A, X)`` with at least two elements, then the rows of all other
    such hom-sets, with a per-source offset that keeps their keys apart.
    """
    memo = _memo(cat, "test_tables")
    if X not in memo:
        groups = [cat.inpos[cat.hom(A, X)] for A in np.argsort(_hom_counts(cat)[:, X], kind="stable")]
        groups = [g for g in groups if len(g) >= 2]
        if not groups:
            memo[X] = None
        else:
            tx = cat.table(X).astype(np.int64)
            rest = groups[1:]
            rows = np.concatenate(rest) if rest else np.zeros(0, dtype=np.int64)
            offsets = np.repeat(np.arange(len(rest), dtype=np.int64), [len(g) for g in rest])
            memo[X] = (tx[groups[0]], tx[rows], offsets[:, None] * cat.n_morphisms ** 2)
    return memo[X]


def _jointly_injective(cat, sub, cu, cv, offsets=0):
    keys = sub.take(cu, axis=1) * cat.n_morphisms + sub.take(cv, axis=1) + offsets
    keys.sort(axis=0)
    return (keys[1:] != keys[:-1]).all(axis=0)


def _pullbacks_with_apex(cat: FiniteCategory, C: Cospan, X: int) -> list[Span]:
    """Paired spans with apex ``X`` whose legs separate every ``hom(A, X)``.

    Only called when each ``|hom(A, X)|`` already equals the number of spans
    from ``A`` paired with ``C``, so injectivity is the whole bijection test.
    """
    us, vs = _paired_arrays(cat, C, X)
    tests = _test_tables(cat, X)
    if not len(us) or tests is None:
        return [Span(int(u), int(v)) for u, v in zip(us, vs)]
    cu, cv = cat.outpos[us], cat.outpos[vs]
    first, rest, offsets = tests
    # the smallest hom-set is cheap to test and usually discards most candidates
    good = _jointly_injective(cat, first, cu, cv)
    us, vs, cu, cv = us[good], vs[good], cu[good], cv[good]
    if len(us) and len(rest):
        good = _jointly_injective(cat, rest, cu, cv, offsets)
        us, vs = us[good], vs[good]
    return [Span(int(u), int(v)) for u, v in zip(us, vs)]


def find_pullbacks(cat: FiniteCategory, C: Cospan, budget=None) -> list[Span]:
    """Every pullback of ``C`` in ``cat``, ordered by ``(apex, left, right)``.

    Only apexes ``X`` with ``|hom(A, X)|`` equal to the number of spans from
    ``A`` paired with ``C`` (for every ``A``) can carry a pullback, so only
    their paired spans are tested.
    """
    budget = as_budget(budget)
    counts = paired_counts(cat, C)
    _spend(budget, int(counts.sum()), "paired spans")
    homs = _hom_counts(cat)
    out = []
    for X in np.nonzero(np.all(homs == counts[:, None], axis=0))[0]:
        out.extend(_pullbacks_with_apex(cat, C, int(X)))
    return out


def _cospan_verdict(cat, C, budget):
    pbs = find_pullbacks(cat, C, budget)
    if not pbs:
        return pbs, "no pullback"
    first = canonicalize(cat, pbs[0])
    for S in pbs[1:]:
        if canonicalize(cat, S) != first:
            return pbs, "pullbacks not span-isomorphic"
    return pbs, None


def _map_cospans(fn, cospans, workers):
    if workers and workers > 1 and len(cospans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, cospans))
    return [fn(C) for C in cospans]


def has_pullbacks(cat: FiniteCategory, budget=None, workers: int = 1) -> CheckReport:
    budget = as_budget(budget)
    cospans = enumerate_cospans(cat, budget)
    results = _map_cospans(lambda C: _cospan_verdict(cat, C, fresh(budget)), cospans, workers)
    failures = []
    n_pb = 0
    for C, (pbs, problem) in zip(cospans, results):
        n_pb += len(pbs)
        if problem:
            entry = {"reason": problem, "cospan": describe_span(cat, C, "cospan"),
                     "pullback_count": len(pbs)}
            if pbs:
                entry["pullbacks"] = [describe_span(cat, S) for S in pbs]
            failures.append(entry)
    stats = {"cospans_examined": len(cospans), "pullbacks_found": n_pb,
             "cospans_without_pullback": sum(f["reason"] == "no pullback" for f in failures),
             }
    return CheckReport(not failures, witnesses=failures[1:],
                       counterexample=failures[0] if failures else None,
                       stats=stats, check="has_pullbacks")


def fmap_span(F: Functor, S):
    return type(S)(int(F.morphism_map[S.left]), int(F.morphism_map[S.right]))


def preserves_pullbacks(F: Functor, budget=None, workers: int = 1) -> CheckReport:
    budget = as_budget(budget)
    src, tgt = F.source, F.target
    cospans = enumerate_cospans(src, budget)

    def one(C):
        pbs = find_pullbacks(src, C, fresh(budget))
        bad = []
        for S in pbs:
            FS, FC = fmap_span(F, S), fmap_span(F, C)
            failure = _pullback_failure(tgt, FS, FC)
            if failure is not None:
                Q, k = failure
                bad.append({"cospan": describe_span(src, C, "cospan"), "pullback": describe_span(src, S),
                            "image": describe_span(tgt, FS),
                            "image_paired_span": describe_span(tgt, Q), "span_morphism_count": k})
        return len(pbs), bad

    results = _map_cospans(one, cospans, workers)
    vacuous = sum(1 for n, _ in results if n == 0)
    failures = [b for _, bad in results for b in bad]
    stats = {"cospans_examined": len(cospans), "vacuous_cospans": vacuous,
             "pullbacks_checked": sum(n for n, _ in results)}
    return CheckReport(not failures, witnesses=failures[1:],
                       counterexample=failures[0] if failures else None,
                       stats=stats, check="preserves_pullbacks")
