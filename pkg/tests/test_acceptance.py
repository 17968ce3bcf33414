"""Acceptance gate: one timed check per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal summary)
or ``python3 tests/test_acceptance.py``.
"""
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chainlab.chains import ABEL, RICCATI, catalog_check, diff_terms, generate_chain, published_chain
from chainlab.numcheck import measure_order, random_case, run_cross_check
from chainlab.reduction import reduce_chain, verify_reductions
from chainlab.solutions import (PUBLISHED_SOLUTIONS, generic_numerator, verify_generality,
                                verify_published_solutions)
from chainlab.symmetry import determining_residuals, verify_invariance

RESULTS = []


def _clear_caches():
    generic_numerator.cache_clear()


def criterion_catalog():
    rep = catalog_check()
    exact = [e for e in rep.entries if e.residual == "0"]
    flagged = [e for e in rep.entries if "misprint" in e.name]
    d = diff_terms(generate_chain(ABEL, 4).lhs, published_chain(ABEL, 4))
    ok = (len(exact) == 7 and [(e.family, e.order) for e in flagged] == [("abel", 4)]
          and len(d.only_generated) == 1 and len(d.only_published) == 1
          and "u^4*u_2" in rep.errata[0].derived and "u^4*u_1" in rep.errata[0].published)
    return ok, f"{len(exact)} exact matches, {len(flagged)} flagged erratum"


def criterion_determining():
    counts = {}
    for fam in (RICCATI, ABEL):
        rs = determining_residuals(fam)
        counts[fam.value] = (len(rs), sum(r.is_zero() for r in rs))
    ok = all(n == 6 and z == 6 for n, z in counts.values())
    return ok, ", ".join(f"{k}: {z}/{n} zero" for k, (n, z) in counts.items())


def criterion_invariance():
    bad = [(fam.value, n) for fam in (RICCATI, ABEL) for n in range(1, 9)
           if verify_invariance(fam, n).status != "pass"]
    return not bad, "16/16 pass" if not bad else f"failing: {bad}"


def criterion_reductions():
    reps = [verify_reductions(fam, 10) for fam in (RICCATI, ABEL)]
    ok = all(r.status == "pass" and len(r.entries) == 9 for r in reps)
    targets = {
        (RICCATI, 2): "z_1 + z^2",
        (ABEL, 2): "z_1 + z^2",
        (RICCATI, 3): "z_2 + 3*z*z_1 + z^3",
        (ABEL, 3): "z_2 + 3*z*z_1 + z^3",
        (RICCATI, 4): "z_3 + 4*z*z_2 + 6*z^2*z_1 + 3*z_1^2 + z^4",
        (ABEL, 4): "z_3 + 4*z*z_2 + 6*z^2*z_1 + 3*z_1^2 + z^4",
    }
    seen = {k: str(reduce_chain(generate_chain(*k)).target).replace(" = 0", "")
            for k in targets}
    ok = ok and all(seen[k].replace("zeta", "z") == v for k, v in targets.items())
    return ok, f"18 identities, named targets {'match' if ok else seen}"


def criterion_published():
    rep = verify_published_solutions()
    by = {(e.family, e.order, e.name): e for e in rep.entries}
    zero = [(f, n) for (f, n, name), e in by.items()
            if name.endswith("printed solution") and e.residual == "0"]
    want = [("abel", 2), ("abel", 3), ("abel", 4), ("riccati", 1), ("riccati", 2), ("riccati", 3)]
    r4 = PUBLISHED_SOLUTIONS[(RICCATI, 4)]
    ok = (sorted(zero) == want and rep.status == "pass"
          and not r4.residual().is_zero() and r4.residual(+1).is_zero()
          and ("riccati", 4, "riccati N=4 sign-corrected solution") in by
          and len(rep.errata) == 1)
    return ok, f"{len(zero)} printed forms exact; riccati N=4 printed sign nonzero, corrected zero"


def criterion_generality():
    rep = verify_generality(8)
    return rep.status == "pass" and len(rep.entries) == 8, f"{len(rep.entries)} orders"


def criterion_numeric():
    worst, count, failures = 0.0, 0, []
    for fam in (RICCATI, ABEL):
        for n in range(1, 6):
            rng = random.Random(1000 * n + (fam is ABEL))
            for _ in range(20):
                consts, interval = random_case(fam, n, rng)
                assert interval[1] - interval[0] >= 1
                res = run_cross_check(fam, n, consts, interval, 1e-9)
                count += 1
                worst = max(worst, res.deviation)
                if not res.deviation < 1e-7:
                    failures.append((fam.value, n, consts, interval, res.deviation))
    return not failures and count == 200, f"{count} cases, worst deviation {worst:.2e}"


def criterion_order():
    slope, _ = measure_order()
    return slope >= 4.5, f"measured order {slope:.2f}"


def criterion_parser():
    import test_parser as tp
    for src, oracle in tp.VALID:
        tp.test_golden_valid(src, oracle)
    for src, off in tp.INVALID:
        tp.test_golden_invalid(src, off)
    for src, env, want in tp.EXTRA_CASES:
        tp.test_golden_symbol_tables(src, env, want)
    n_golden = len(tp.VALID) + len(tp.INVALID) + len(tp.EXTRA_CASES)
    tp.test_round_trip()  # 1000 generated expressions
    return n_golden >= 100, f"{n_golden} golden cases, 1000 round trips"


CRITERIA = [
    (1, "chain catalog", criterion_catalog, 1.0),
    (2, "determining systems", criterion_determining, 5.0),
    (3, "general invariance N<=8", criterion_invariance, 120.0),
    (4, "reduction identities N<=10", criterion_reductions, 60.0),
    (5, "published closed-form solutions", criterion_published, 60.0),
    (6, "generality witness N<=8", criterion_generality, 60.0),
    (7, "numerical cross-check", criterion_numeric, 120.0),
    (8, "integrator order", criterion_order, 10.0),
    (9, "parser golden suite and round trip", criterion_parser, 10.0),
]


def evaluate(number, name, fn, limit):
    _clear_caches()
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except AssertionError as exc:
        ok, detail = False, f"assertion failed: {exc}"
    elapsed = time.perf_counter() - t0
    in_time = elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    line = (f"criterion {number} [{status}] {name}: {detail}; "
            f"{elapsed:.2f} s (limit {limit:g} s{'' if in_time else ', exceeded'})")
    return ok and in_time, line


@pytest.mark.parametrize("number, name, fn, limit", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, name, fn, limit):
    ok, line = evaluate(number, name, fn, limit)
    RESULTS.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    all_ok = True
    for c in CRITERIA:
        ok, line = evaluate(*c)
        all_ok &= ok
        print(line, flush=True)
    sys.exit(0 if all_ok else 1)
