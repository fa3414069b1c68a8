"""Acceptance criteria, one test per criterion, each at exact tolerance.

Every test prints a single ``criterion N: PASS|FAIL`` line.  The module can
also be run directly (``python3 tests/test_acceptance.py``) for the same
lines without pytest.
"""

import json
import sys
import tempfile
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from oracles import UniquenessChecker, brute_span_closure, legwise_span_closure  # noqa: E402
from spanforge import (ApexExceedsCap, Cospan, build_span_category, canonicalize, check_category_laws,  # noqa: E402
                       classic_equivalence, enumerate_cospans, find_pullbacks, has_pullbacks,
                       identity_functor, is_span_tight, preserves_pullbacks)
from spanforge.catalog import (b2_lattice, fibered_product_oracle, gen_finset, gen_finsurj, gen_fintop,  # noqa: E402
                               gen_hom_functor, incl_fixture, negative_tightness_fixture, terminal,
                               walking_iso, z2)


@lru_cache(maxsize=None)
def finset04_sweep():
    """Every FINSET04 cospan with its complete list of pullbacks (shared by criteria 1 and 9)."""
    cat = gen_finset(4)
    cospans = enumerate_cospans(cat)
    return cat, cospans, [find_pullbacks(cat, C) for C in cospans]


def small_fixtures():
    return [gen_finsurj([1, 2]), gen_fintop(2), b2_lattice(), z2(), walking_iso(), terminal()]


def criterion_1():
    cat, cospans, results = finset04_sweep()
    agreed = missing = 0
    for C, pbs in zip(cospans, results):
        try:
            S = fibered_product_oracle("finset", cat, C)
        except ApexExceedsCap:
            continue
        if S in pbs or canonicalize(cat, S) in {canonicalize(cat, P) for P in pbs}:
            agreed += 1
        else:
            missing += 1
    ok = missing == 0 and agreed > 100
    return ok, f"{agreed} cospans with fibered product of size <= 4, {missing} disagreements"


def criterion_2():
    cat = gen_finset(4)
    C = Cospan(cat.mor("S2_S1:00"), cat.mor("S2_S1:00"))
    pbs = find_pullbacks(cat, C)
    apexes = sorted({cat.objects[S.apex(cat)] for S in pbs})
    return bool(pbs) and apexes == ["S4"], f"{len(pbs)} pullbacks, apex objects {apexes}"


def criterion_3():
    cat = gen_finsurj([1, 2])
    report = has_pullbacks(cat)
    ce = report.counterexample or {}
    f = cat.mor("S2_S1:00")
    cospan_ok = ce.get("cospan", {}).get("c_L") == "S2_S1:00" == ce.get("cospan", {}).get("c_R")
    empty = find_pullbacks(cat, Cospan(f, f)) == []
    ok = (not report.verdict) and cospan_ok and empty
    return ok, f"verdict={report.verdict}, counterexample cospan={ce.get('cospan')}, find_pullbacks empty={empty}"


def criterion_4():
    pos = is_span_tight(incl_fixture())
    neg = is_span_tight(negative_tightness_fixture())
    witness = (neg.counterexample or {}).get("cospan")
    ok = pos.verdict and not neg.verdict and witness is not None
    detail = f"INCL tight={pos.verdict}"
    if not pos.verdict:
        detail += f" ({pos.counterexample['reason']} at {pos.counterexample['cospan']})"
    return ok, detail + f"; negative fixture tight={neg.verdict}, witness cospan={witness}"


def criterion_5():
    parts, ok = [], True
    cases = [("Span(FINSURJ12, INCL)", incl_fixture()),
             ("Span(B2, Id)", identity_functor(b2_lattice())),
             ("Span(Z2, Id)", identity_functor(z2()))]
    for label, F in cases:
        SC = build_span_category(F, force=True)
        report = check_category_laws(SC, mode="exhaustive")
        violations = sum(w["count"] for w in report.witnesses) if report.witnesses else 0
        undefined = report.stats["undefined_composites"]
        ok &= report.verdict
        parts.append(f"{label}: {'pass' if report.verdict else 'FAIL'} "
                     f"(law violations={violations}, undefined composites={undefined})")
    return ok, "; ".join(parts)


def criterion_6():
    b2, z = classic_equivalence(b2_lattice()), classic_equivalence(z2())
    return b2.verdict and z.verdict, f"B2={b2.verdict}, Z2={z.verdict}"


def criterion_7():
    target = gen_finset(4)
    Z = z2()
    verdicts = {"Hom(*,-) on Z2": preserves_pullbacks(gen_hom_functor(Z, 0, target)).verdict}
    B = b2_lattice()
    for x, name in enumerate(B.objects):
        verdicts[f"Hom({name},-) on B2"] = preserves_pullbacks(gen_hom_functor(B, x, target)).verdict
    return all(verdicts.values()), ", ".join(f"{k}={v}" for k, v in verdicts.items())


def criterion_8():
    counts = {}
    try:
        for cat in small_fixtures():
            if cat.n_morphisms <= 10:
                counts[cat.name] = brute_span_closure(cat)
            counts[cat.name + " (legwise)"] = legwise_span_closure(cat)
        cat = gen_finset(4)
        counts["FINSET04 (legwise)"] = legwise_span_closure(cat)
    except AssertionError as exc:
        return False, f"violation: {exc}"
    return True, "; ".join(f"{k}: {v}" for k, v in counts.items())


def criterion_9():
    tallies = {}
    cats = [(c, [find_pullbacks(c, C) for C in enumerate_cospans(c)]) for c in small_fixtures()]
    cat, _, results = finset04_sweep()
    cats.append((cat, results))
    ok = True
    for cat, results in cats:
        check = UniquenessChecker(cat)
        multi = [pbs for pbs in results if len(pbs) >= 2]
        bad = sum(1 for pbs in multi if not check(pbs))
        ok &= bad == 0
        tallies[cat.name] = (len(multi), check.pairs, bad)
    ok &= sum(t[0] for t in tallies.values()) > 0
    return ok, "; ".join(f"{k}: {m} cospans, {p} pairs, {b} failures" for k, (m, p, b) in tallies.items())


CLI_QUERIES = [
    ["has-pullbacks", "finsurj12.json"],
    ["has-pullbacks", "fintop02.json"],
    ["pullback", "finset04.json", "--cospan", "S2_S1:00,S2_S1:00", "--all"],
    ["preserves", "hom_z2.functor.json"],
    ["preserves", "forget_fintop02.functor.json"],
    ["span-tight", "INCL.functor.json"],
    ["span-tight", "negative_tightness.functor.json"],
    ["check-laws", "id_b2.functor.json"],
    ["check-laws", "id_b2.functor.json", "--mode", "sampled", "--samples", "50", "--seed", "5"],
    ["classic-equiv", "z2.json"],
    ["compose", "id_z2.functor.json", "--span1", "e,s", "--span2", "e,s"],
]


def criterion_10(fixture_dir=None):
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        if fixture_dir is None:
            fixture_dir = tmp / "fixtures"
            _make_fixtures(fixture_dir)
        return _cli_determinism(Path(fixture_dir), tmp)


def _cli_determinism(fixture_dir, out):
    from spanforge.cli import run
    mismatched = []
    for i, q in enumerate(CLI_QUERIES):
        outputs = []
        for extra in ([], [], ["--workers", "4"]):
            path = out / f"{i}_{len(outputs)}.json"
            code = run([q[0], str(fixture_dir / q[1]), *q[2:], "--json", "-o", str(path), *extra])
            outputs.append((code, path.read_bytes()))
        json.loads(outputs[0][1])
        if len(set(outputs)) != 1:
            mismatched.append(" ".join(q))
    return not mismatched, f"{len(CLI_QUERIES)} queries x 3 runs; mismatches: {mismatched or 'none'}"


def _make_fixtures(where):
    import importlib.util
    script = Path(__file__).resolve().parents[1] / "scripts" / "make_fixtures.py"
    spec = importlib.util.spec_from_file_location("make_fixtures", script)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.main(str(where))


CRITERIA = [
    (1, "fibered-product oracle equivalence on FINSET04", criterion_1),
    (2, "four-element pullback of constant maps", criterion_2),
    (3, "FINSURJ12 lacks pullbacks", criterion_3),
    (4, "span tightness of INCL and the negative fixture", criterion_4),
    (5, "category laws of Span(C, F), exhaustive", criterion_5),
    (6, "reduction to classic spans", criterion_6),
    (7, "hom functors preserve pullbacks", criterion_7),
    (8, "span morphisms closed under inverse and composite", criterion_8),
    (9, "pullbacks unique up to unique span isomorphism", criterion_9),
    (10, "byte-identical CLI JSON", criterion_10),
]


def line(number, title, ok, detail):
    return f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title} | {detail}"


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn, capsys, request):
    if number == 10:
        ok, detail = fn(request.getfixturevalue("fixture_dir"))
    else:
        ok, detail = fn()
    with capsys.disabled():
        print("\n" + line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(line(number, title, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
