import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE
from modcomp import suite

# (criterion, function, time limit in seconds)
CASES = [
    (1, lambda: suite.criterion_roundtrip(), 1),
    (2, lambda: suite.criterion_quotient(), 10),
    (3, lambda: suite.criterion_dual_paths(), 30),
    (4, lambda: suite.criterion_translation(), 60),
    (5, lambda: suite.criterion_levy(), None),
    (6, lambda: suite.criterion_robinson(1), 10),
    (7, lambda: suite.criterion_hull(1), 300),
    (8, lambda: suite.criterion_separation(), 60),
]


def record(num, ok, elapsed, limit, note=""):
    timing = f"{elapsed:.2f}s" + (f" (limit {limit}s)" if limit else "")
    ACCEPTANCE.append(f"criterion {num}: {'PASS' if ok else 'FAIL'} {timing} {note}".rstrip())
    print(ACCEPTANCE[-1])


@pytest.mark.parametrize("num,fn,limit", CASES, ids=[f"criterion-{c[0]}" for c in CASES])
def test_criterion(num, fn, limit):
    start = time.perf_counter()
    details, ok = fn()
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    record(num, ok and in_time, elapsed, limit, "" if in_time else "too slow")
    assert ok, details
    assert in_time


def test_criterion_9_determinism(tmp_path):
    outs = []
    start = time.perf_counter()
    for jobs in (1, 8):
        out = tmp_path / f"suite-{jobs}.json"
        cmd = [sys.executable, "-m", "modcomp", "suite", "--jobs", str(jobs), "--seed", "7",
               "--out", str(out), "--strict"]
        assert subprocess.run(cmd, check=False).returncode == 0
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1]
    record(9, ok, time.perf_counter() - start, None, "jobs 1 vs 8")
    assert ok
