"""Acceptance criteria, one test per criterion.

Each preset is run once into a session directory; criterion 11 reruns every
preset with the same seed and compares all output files byte for byte.
Run with ``pytest tests/test_acceptance.py`` and read the summary section.
"""
import time
from pathlib import Path

import pytest

from conftest import ACCEPTANCE_LINES
from conslaw.cli import run_preset
from conslaw.experiments import PRESETS

SEED = 0

# criterion number -> (preset, runtime limit in seconds or None)
CRITERIA = {
    1: ("riemann-exactness", 10.0),
    2: ("burgers-closed-forms", None),
    3: ("glimm-functional", 60.0),
    4: ("stability-functional", 300.0),
    5: ("l1-lipschitz", None),
    6: ("glimm-rate", 600.0),
    7: ("weak-form", None),
    8: ("viscosity-estimates", None),
    9: ("vanishing-viscosity", 900.0),
    10: ("lyapunov-functionals", None),
}


@pytest.fixture(scope="session")
def first_runs(tmp_path_factory):
    root = tmp_path_factory.mktemp("presets_a")
    cache = {}

    def get(name):
        if name not in cache:
            t0 = time.perf_counter()
            summary = run_preset(name, root / name, SEED)
            cache[name] = (summary, time.perf_counter() - t0, root / name)
        return cache[name]

    return get


def _report(number, passed, text):
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, first_runs):
    name, limit = CRITERIA[number]
    summary, seconds, _ = first_runs(name)
    in_time = limit is None or seconds < limit
    budget = "" if limit is None else f" / {limit:.0f}s"
    _report(number, summary["passed"] and in_time, f"{name}: {summary['detail']} [{seconds:.1f}s{budget}]")
    assert summary["passed"], summary["detail"]
    assert in_time, f"{name} took {seconds:.1f}s, limit {limit}s"


@pytest.mark.slow
def test_criterion_11_determinism(first_runs, tmp_path):
    mismatched = []
    for name in PRESETS:
        _, _, dir_a = first_runs(name)
        dir_b = tmp_path / name
        run_preset(name, dir_b, SEED)
        files_a = sorted(p.relative_to(dir_a) for p in Path(dir_a).rglob("*") if p.is_file())
        files_b = sorted(p.relative_to(dir_b) for p in dir_b.rglob("*") if p.is_file())
        if files_a != files_b:
            mismatched.append(f"{name}: file lists differ")
            continue
        mismatched += [f"{name}/{f}" for f in files_a if (dir_a / f).read_bytes() != (dir_b / f).read_bytes()]
    ok = not mismatched
    _report(11, ok, f"determinism: {len(PRESETS)} presets rerun with seed {SEED}, mismatches: {mismatched or 'none'}")
    assert ok, mismatched
