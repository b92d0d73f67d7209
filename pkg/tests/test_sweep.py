"""Sweep engine: grid order, emission formats, presets, optima."""

import json
import math

import numpy as np
import pytest

from qnd_hom.fock import closed_form_qnd_11
from qnd_hom.sweep import (
    CSV_HEADER,
    PRESETS,
    SweepConfig,
    SweepConfigError,
    SweepRow,
    build_model,
    find_optimum,
    preset_config,
    render_csv,
    render_json,
    run_sweep,
)


def _ideal_config(**kw):
    defaults = dict(
        gate="ideal", sweep_param="G", start=0.0, stop=2.0, points=5,
        with_input_threshold=False,
    )
    defaults.update(kw)
    return SweepConfig(**defaults)


# ----------------------------------------------------------------------
# Configuration validation
# ----------------------------------------------------------------------

def test_rejects_unknown_gate():
    with pytest.raises(SweepConfigError):
        _ideal_config(gate="nonsense")


def test_rejects_unknown_parameter():
    with pytest.raises(SweepConfigError):
        _ideal_config(sweep_param="Gamma")
    with pytest.raises(SweepConfigError):
        _ideal_config(fixed={"eta": 1.0})


def test_rejects_bad_grid():
    with pytest.raises(SweepConfigError):
        _ideal_config(points=0)
    with pytest.raises(SweepConfigError):
        _ideal_config(scale="log", start=0.0)
    with pytest.raises(SweepConfigError):
        _ideal_config(scale="cubic")


def test_rejects_bad_p():
    with pytest.raises(SweepConfigError):
        _ideal_config(p_values=(1.2,))
    with pytest.raises(SweepConfigError):
        _ideal_config(p_values=())


def test_missing_required_parameter():
    with pytest.raises(SweepConfigError):
        build_model("atom-light", {"g": 0.06})  # no kappa_tau


# ----------------------------------------------------------------------
# Row structure
# ----------------------------------------------------------------------

def test_row_count_and_order():
    config = _ideal_config(points=80, p_values=(1.0, 0.7, 0.4))
    rows = run_sweep(config)
    assert len(rows) == 240
    grid = np.linspace(0.0, 2.0, 80)
    for i, row in enumerate(rows):
        assert row.value == pytest.approx(grid[i // 3], abs=0.0)
        assert row.p == (1.0, 0.7, 0.4)[i % 3]
        assert row.param == "G"


def test_values_match_closed_form():
    rows = run_sweep(_ideal_config(points=9, p_values=(1.0,)))
    for row in rows:
        assert row.hom == pytest.approx(closed_form_qnd_11(row.value), abs=1e-3)


def test_single_point_grid():
    config = _ideal_config(points=1, start=0.9, stop=0.9)
    rows = run_sweep(config)
    assert len(rows) == 1
    assert rows[0].value == 0.9


def test_log_grid():
    config = SweepConfig(
        gate="atom-light", sweep_param="g", start=0.01, stop=0.1, points=3,
        scale="log", fixed={"kappa_tau": 100.0, "eta": 1.0},
        with_input_threshold=False,
    )
    rows = run_sweep(config)
    values = [row.value for row in rows]
    assert values[1] == pytest.approx(math.sqrt(0.01 * 0.1), rel=1e-12)


def test_threshold_shared_across_p():
    config = _ideal_config(
        points=2, start=0.5, stop=1.0, p_values=(1.0, 0.5),
        with_input_threshold=True,
    )
    rows = run_sweep(config)
    assert rows[0].input_threshold == rows[1].input_threshold
    assert rows[2].input_threshold == rows[3].input_threshold
    assert rows[0].input_threshold != rows[2].input_threshold


def test_bs_sweep():
    config = SweepConfig(
        gate="bs", sweep_param="T", start=0.0, stop=1.0, points=5,
        with_input_threshold=False,
    )
    rows = run_sweep(config)
    mid = rows[2]
    assert mid.value == 0.5
    assert mid.hom == pytest.approx(1.0, abs=5e-3)


# ----------------------------------------------------------------------
# Emission
# ----------------------------------------------------------------------

def test_csv_header_and_shape():
    rows = run_sweep(_ideal_config(points=3))
    text = render_csv(rows)
    lines = text.split("\n")
    assert lines[0] == CSV_HEADER
    assert lines[0] == "param,value,p,hom,hom_err,input_threshold,output_threshold,warnings"
    assert len(lines) == 5  # header + 3 rows + trailing newline
    assert text.endswith("\n")
    assert "\r" not in text


def test_csv_empty_is_header_only():
    assert render_csv([]) == CSV_HEADER + "\n"


def test_csv_17_significant_digits():
    rows = [SweepRow("G", 1.0 / 3.0, 1.0, 0.1234567890123456789, None, None, None)]
    line = render_csv(rows).split("\n")[1]
    fields = line.split(",")
    assert fields[1] == "0.33333333333333331"
    assert float(fields[3]) == 0.1234567890123456789
    assert fields[4] == "" and fields[5] == "" and fields[6] == ""


def test_json_round_trip():
    rows = run_sweep(_ideal_config(points=3, p_values=(1.0, 0.5)))
    data = json.loads(render_json(rows))
    assert len(data) == 6
    for rec, row in zip(data, rows):
        assert set(rec) == set(CSV_HEADER.split(","))
        assert rec["hom"] == row.hom
        assert rec["value"] == row.value


def test_emit_to_file(tmp_path):
    from qnd_hom.sweep import emit

    rows = run_sweep(_ideal_config(points=2))
    path = tmp_path / "table.csv"
    emit(rows, "csv", str(path))
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.decode("utf-8").split("\n")[0] == CSV_HEADER


# ----------------------------------------------------------------------
# Optimum search
# ----------------------------------------------------------------------

def test_find_optimum_recovers_ideal_maximum():
    res = find_optimum("ideal", {}, {"G": (0.2, 2.0)}, grid=9)
    assert res.argmax["G"] == pytest.approx(0.8677840941388602, abs=5e-3)
    assert res.value == pytest.approx(0.26085, abs=5e-4)
    assert res.interior


def test_find_optimum_flags_boundary():
    # restrict the domain so the optimum lands on the upper edge
    res = find_optimum("ideal", {}, {"G": (0.2, 0.5)}, grid=7)
    assert not res.interior
    assert "G" in res.boundary_params


def test_find_optimum_validates_arity():
    with pytest.raises(SweepConfigError):
        find_optimum("ideal", {}, {}, grid=3)
    with pytest.raises(SweepConfigError):
        find_optimum("ideal", {}, {"G": (0.5, 0.4)}, grid=3)


# ----------------------------------------------------------------------
# Presets
# ----------------------------------------------------------------------

_EXPECTED_PRESETS = {
    "methods-ideal": ("ideal", "G", 0.0, 3.0, 80, {}, (1.0, 0.7, 0.48, 0.4)),
    "fig2a": ("atom-light", "g", 0.005, 0.2, 80,
              {"kappa_tau": 100.0, "eta": 0.9}, (1.0, 0.78, 0.55)),
    "fig2b": ("optomech", "g", 0.005, 0.2, 80,
              {"kappa_tau": 100.0, "eta": 0.9, "Gamma": 1e-4}, (1.0, 0.78, 0.55)),
    "fig3a": ("atom-mech", "g", 0.005, 0.2, 80,
              {"kappa_tau": 90.0, "eta": 0.9, "Gamma": 1e-4, "S": 7.0},
              (1.0, 0.93, 0.67, 0.63)),
    "fig3b": ("atom-mech", "kappa_tau", 10.0, 300.0, 80,
              {"g": 0.07, "eta": 0.9, "Gamma": 1e-4, "S": 7.0}, (1.0,)),
    "app-atomlight": ("atom-light", "g", 0.005, 0.2, 80,
                      {"kappa_tau": 100.0, "eta": 1.0}, (1.0,)),
    "app-mechlight": ("optomech", "g", 0.005, 0.2, 80,
                      {"kappa_tau": 100.0, "eta": 1.0, "Gamma": 1e-3}, (1.0,)),
    "app-atommech-coupling": ("atom-mech", "g", 0.005, 0.2, 80,
                              {"kappa_tau": 90.0, "eta": 0.8, "Gamma": 1e-4, "S": 7.0},
                              (1.0,)),
    "app-atommech-squeezing": ("atom-mech", "S", 0.0, 14.0, 80,
                               {"g": 0.07, "kappa_tau": 90.0, "eta": 0.8, "Gamma": 1e-4},
                               (1.0,)),
}


def test_preset_catalog_complete():
    assert set(PRESETS) == set(_EXPECTED_PRESETS)


@pytest.mark.parametrize("name", sorted(_EXPECTED_PRESETS))
def test_preset_fidelity(name):
    gate, sweep, start, stop, points, fixed, p_values = _EXPECTED_PRESETS[name]
    config = PRESETS[name]
    assert config.gate == gate
    assert config.sweep_param == sweep
    assert config.start == start and config.stop == stop
    assert config.points == points
    assert dict(config.fixed) == fixed
    assert config.p_values == p_values
    assert config.with_input_threshold
    assert config.with_output_threshold


def test_preset_config_overrides():
    config = preset_config("fig2a", points=4, with_input_threshold=False, jobs=2)
    assert config.points == 4
    assert config.jobs == 2
    with pytest.raises(SweepConfigError):
        preset_config("no-such-preset")


def test_preset_landmark_fig2a():
    # coarse rerun of the atomic-gate preset around its maximum
    config = preset_config(
        "fig2a", points=5, start=0.04, stop=0.08,
        with_input_threshold=False, p_values=(1.0,),
    )
    rows = run_sweep(config)
    best = max(rows, key=lambda r: r.hom)
    assert best.hom == pytest.approx(0.228, abs=2e-3)
    assert 0.05 <= best.value <= 0.07


def test_preset_landmark_fig3b():
    # pulse-length dependence peaks in the κτ ≈ 90 region
    config = preset_config(
        "fig3b", points=7, start=30.0, stop=240.0,
        with_input_threshold=False,
    )
    rows = run_sweep(config)
    values = [row.hom for row in rows]
    best = int(np.argmax(values))
    assert 0 < best < len(values) - 1  # interior peak
    assert values[best] > math.exp(-2.0)
