import json
from pathlib import Path

import pytest

from conslaw.cli import ExperimentConfig, main, run_experiment
from conslaw.errors import ConfigInvalid, NotFound
from conslaw.experiments import PRESETS, list_presets

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

BASE = {
    "model": {"name": "burgers"},
    "initial": {"type": "riemann", "x0": 0.0, "left": [1.0], "right": [0.0]},
    "solver": {"name": "front_tracking", "t_end": 1.0, "params": {"eps_fan": 0.05}},
}


def _cfg(**over):
    d = json.loads(json.dumps(BASE))
    d.update(over)
    return d


def test_list_presets():
    assert len(list_presets()) == len(PRESETS) == 10
    assert list_presets("glimm-rate")[0].name == "glimm-rate"
    with pytest.raises(NotFound):
        list_presets("nope")


@pytest.mark.parametrize(
    "bad",
    [
        {"model": {"name": "burgers"}},
        _cfg(extra=1),
        _cfg(initial={"type": "sawtooth"}),
        _cfg(solver={"name": "godunov", "t_end": 1.0}),
        _cfg(solver={"name": "front_tracking", "t_end": -1.0}),
        _cfg(initial={"type": "step-train", "breakpoints": [0.0, 1.0], "states": [[1.0], [0.0]]}),
        _cfg(model={}),
    ],
)
def test_invalid_configs(bad):
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict(bad)


def test_wrong_state_dimension(tmp_path):
    cfg = ExperimentConfig.from_dict(_cfg(model={"name": "p-system"}))
    with pytest.raises(ConfigInvalid):
        run_experiment(cfg, tmp_path)


def test_single_shock_run(tmp_path):
    summary = run_experiment(ExperimentConfig.from_dict(_cfg()), tmp_path)
    assert summary["passed"]
    rows = (tmp_path / "fronts.csv").read_text().splitlines()
    assert len(rows) == 2
    fields = rows[1].split(",")
    assert float(fields[0]) == pytest.approx(1.0)  # position at t = 1
    assert float(fields[1]) == pytest.approx(0.5)  # speed


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_configs_are_reproducible(tmp_path, path):
    assert main(["run", str(path), "--out", str(tmp_path / "a")]) == 0
    assert main(["run", str(path), "--out", str(tmp_path / "b")]) == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert "summary.json" in files
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name


def test_exit_codes(tmp_path, capsys):
    assert main(["list-presets"]) == 0
    assert main(["list-presets", "nope"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", str(bad)]) == 2
    cfg = tmp_path / "too_big.json"
    d = _cfg(initial={"type": "riemann", "left": [2.9], "right": [-2.9]})
    cfg.write_text(json.dumps(d))
    assert main(["run", str(cfg), "--out", str(tmp_path / "o")]) == 1
