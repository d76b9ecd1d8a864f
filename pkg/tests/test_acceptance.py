"""Acceptance criteria 1-6, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import LINES  # noqa: E402
from mcforms import cli  # noqa: E402
from mcforms import engine as E  # noqa: E402
from mcforms import oracle as O  # noqa: E402
from mcforms import verify as V  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
SEED = 42
TRIALS = 20


def _record(num, title, checks, elapsed, limit):
    failed = [c for c in checks if not c[1]]
    in_time = elapsed < limit
    ok = not failed and in_time
    line = (f"{'PASS' if ok else 'FAIL'} criterion {num}: {title} "
            f"[{len(checks) - len(failed)}/{len(checks)} checks, {elapsed:.1f}s < {limit}s]")
    if failed:
        line += " failed: " + ", ".join(c[0] for c in failed[:5])
    if not in_time:
        line += " over time budget"
    LINES.append(line)
    print(line)
    return ok


def _cold():
    E.clear_caches()
    O._EXPANDED.clear()
    O._SPECIALIZED.clear()


def _lines(checks):
    return [(c.line(), c.ok) for c in checks]


def criterion_1():
    _cold()
    t = time.time()
    checks = _lines(V.fixtures(h=2))
    snap = {}
    for name, text in cli.fixture_payloads().items():
        path = FIXTURES / f"{name}.json"
        snap[name] = path.is_file() and path.read_text(encoding="utf-8") == text
    checks += [(f"snapshot {k}", v) for k, v in snap.items()]
    return _record(1, "golden fixtures h=2 n=1 D=3 (g, Lambda, lambda, I, K, J)",
                   checks, time.time() - t, 60)


def criterion_2():
    _cold()
    t = time.time()
    checks = _lines(V.monodromy(D=4))
    return _record(2, "monodromy h in {1,2} D=4", checks, time.time() - t, 300)


def criterion_3():
    _cold()
    t = time.time()
    checks = _lines(V.inverse(D=4) + V.explog(D=4) + V.fixedpoint(D=4))
    return _record(3, "consistency h in {1,2} D=4", checks, time.time() - t, 300)


def criterion_4():
    _cold()
    t = time.time()
    checks = _lines(V.tuples(D=3) + V.diagram(D=2))
    return _record(4, "composed map, tuples, diagram", checks, time.time() - t, 300)


def criterion_5():
    _cold()
    t = time.time()
    reports = O.run_all(TRIALS, SEED)
    checks = [(r.line(), r.ok) for r in reports]
    neg = [r for r in reports if r.ident.startswith("negative-control")]
    checks.append(("negative control present", bool(neg)))
    return _record(5, f"oracle, {TRIALS} specializations, seed {SEED}", checks,
                   time.time() - t, 300)


def criterion_6():
    _cold()
    t = time.time()
    checks = []
    for h in (1, 2):
        for n in (1, 2):
            for d in (1, 2, 3):
                checks.append((f"dims h={h} n={n} d={d}", O.thn_dim_crosscheck(h, n, d)))
            checks.append((f"relations h={h} n={n}", V.thn_relations_vanish(h, n, 3)))
            if n > 1:
                checks.append((f"t_rs=t_sr h={h} n={n}", V.thn_t_symmetric(h, n)))
    return _record(6, "t_{h,n} dims by two strategies, t_rs=t_sr, relations vanish",
                   checks, time.time() - t, 300)


def test_criterion_1_goldens():
    assert criterion_1()


def test_criterion_2_monodromy():
    assert criterion_2()


def test_criterion_3_consistency():
    assert criterion_3()


def test_criterion_4_structure():
    assert criterion_4()


def test_criterion_5_oracle():
    assert criterion_5()


def test_criterion_6_thn():
    assert criterion_6()


if __name__ == "__main__":
    results = [f() for f in (criterion_1, criterion_2, criterion_3, criterion_4,
                             criterion_5, criterion_6)]
    sys.exit(0 if all(results) else 1)
