"""Declarative parameter sweeps, figure presets, and table emission.

A sweep is: one gate kind, fixed parameters, one swept parameter over a
grid, and a list of input fractions p.  Every grid point yields one row
per p with the bunching element, its O(n) error estimate, and the
requested thresholds; the input threshold is computed once per grid
point and shared across the p rows (it depends only on the gate).

Grid points are independent; with ``jobs > 1`` they are evaluated by a
process pool and reassembled in grid order, so the emitted file is
byte-identical at any parallelism degree.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gaussian import NumericalDomainError, bs_matrix
from .gates import (
    AtomLightParams,
    AtomMechParams,
    GateModel,
    OptomechParams,
    build_atom_light_gate,
    build_atom_mech_gate,
    build_optomech_gate,
    ideal_gate_model,
)
from .metrics import DEFAULT_OCCUPATION, InputSpec, hom_element_for_gate
from .modes import NoiseModeBasis
from .thresholds import PhaseAverageOptions, input_threshold, output_threshold

GATE_KINDS = ("ideal", "bs", "atom-light", "optomech", "atom-mech")

# parameter vocabulary per gate kind; "g" on atom-mech sets both couplings
_GATE_PARAMS: dict[str, tuple[str, ...]] = {
    "ideal": ("G",),
    "bs": ("T",),
    "atom-light": ("g", "kappa_tau", "eta"),
    "optomech": ("g", "kappa_tau", "eta", "Gamma"),
    "atom-mech": ("g", "gA", "gM", "kappa_tau", "eta", "Gamma", "S"),
}

CSV_HEADER = "param,value,p,hom,hom_err,input_threshold,output_threshold,warnings"
_ROW_KEYS = tuple(CSV_HEADER.split(","))


class SweepConfigError(ValueError):
    """Invalid sweep configuration (CLI exit code 1)."""


class SweepNumericalError(RuntimeError):
    """Every grid point failed numerically (CLI exit code 2)."""


@dataclass(frozen=True)
class SweepConfig:
    gate: str
    sweep_param: str
    start: float
    stop: float
    points: int
    fixed: Mapping[str, float] = field(default_factory=dict)
    scale: str = "linear"
    p_values: tuple[float, ...] = (1.0,)
    with_output_threshold: bool = True
    with_input_threshold: bool = False
    n: float = DEFAULT_OCCUPATION
    phase_options: PhaseAverageOptions = PhaseAverageOptions()
    out_path: str | None = None
    out_format: str = "csv"
    jobs: int = 1

    def __post_init__(self):
        if self.gate not in GATE_KINDS:
            raise SweepConfigError(f"unknown gate kind {self.gate!r}; choose from {GATE_KINDS}")
        allowed = _GATE_PARAMS[self.gate]
        if self.sweep_param not in allowed:
            raise SweepConfigError(
                f"gate {self.gate!r} has no parameter {self.sweep_param!r}; choose from {allowed}"
            )
        for key in self.fixed:
            if key not in allowed:
                raise SweepConfigError(
                    f"gate {self.gate!r} has no parameter {key!r}; choose from {allowed}"
                )
        if self.points < 1:
            raise SweepConfigError("points must be at least 1")
        if self.scale not in ("linear", "log"):
            raise SweepConfigError("scale must be 'linear' or 'log'")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise SweepConfigError("log scale needs positive range bounds")
        if not self.p_values:
            raise SweepConfigError("at least one p value is required")
        for p in self.p_values:
            if not 0.0 <= p <= 1.0:
                raise SweepConfigError(f"p value {p} outside [0, 1]")
        if self.out_format not in ("csv", "json"):
            raise SweepConfigError("format must be 'csv' or 'json'")
        if self.jobs < 1:
            raise SweepConfigError("jobs must be at least 1")
        object.__setattr__(self, "fixed", dict(self.fixed))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))

    def grid(self) -> np.ndarray:
        if self.points == 1:
            return np.array([float(self.start)])
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepRow:
    """One emitted line: a (grid point, p) pair."""

    param: str
    value: float
    p: float
    hom: float
    hom_err: float | None
    input_threshold: float | None
    output_threshold: float | None
    warnings: str = ""

    def as_dict(self) -> dict:
        return {key: getattr(self, key) for key in _ROW_KEYS}


def build_model(gate: str, values: Mapping[str, float]) -> GateModel:
    """Gate model from a flat parameter mapping (CLI vocabulary)."""
    try:
        if gate == "ideal":
            return ideal_gate_model(values["G"])
        if gate == "bs":
            T = values["T"]
            labels = ("X_a0", "P_a0", "X_b0", "P_b0")
            basis = NoiseModeBasis(labels, np.eye(4), np.eye(4))
            return GateModel("bs", bs_matrix(T), basis, gains={"T": T})
        if gate == "atom-light":
            return build_atom_light_gate(
                AtomLightParams(values["g"], values["kappa_tau"], values.get("eta", 1.0))
            )
        if gate == "optomech":
            return build_optomech_gate(
                OptomechParams(
                    values["g"], values["kappa_tau"],
                    values.get("eta", 1.0), values.get("Gamma", 0.0),
                )
            )
        if gate == "atom-mech":
            gA = values.get("gA", values.get("g"))
            gM = values.get("gM", values.get("g"))
            if gA is None or gM is None:
                raise SweepConfigError("atom-mech needs g (or both gA and gM)")
            return build_atom_mech_gate(
                AtomMechParams(
                    gA, gM, values["kappa_tau"],
                    values.get("eta", 1.0), values.get("Gamma", 0.0),
                    values.get("S", 0.0),
                )
            )
    except KeyError as exc:
        raise SweepConfigError(f"gate {gate!r} is missing parameter {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, SweepConfigError):
            raise
        raise SweepConfigError(str(exc)) from None
    raise SweepConfigError(f"unknown gate kind {gate!r}")


def _evaluate_point(task: tuple[SweepConfig, float]) -> list[SweepRow]:
    """All rows of one grid point (runs inside pool workers)."""
    config, value = task
    values = dict(config.fixed)
    values[config.sweep_param] = value
    out_thr = output_threshold() if config.with_output_threshold else None
    try:
        model = build_model(config.gate, values)
        in_thr = None
        warnings: list[str] = []
        if config.with_input_threshold:
            thr = input_threshold(model, config.phase_options, n=config.n)
            in_thr = thr.value
            warnings.extend(thr.warnings)
        rows = []
        for p in config.p_values:
            res = hom_element_for_gate(model, InputSpec(p, p, config.n))
            rows.append(SweepRow(
                param=config.sweep_param,
                value=float(value),
                p=p,
                hom=res.value,
                hom_err=res.error_estimate,
                input_threshold=in_thr,
                output_threshold=out_thr,
                warnings=";".join(warnings),
            ))
        return rows
    except NumericalDomainError as exc:
        return [
            SweepRow(
                param=config.sweep_param,
                value=float(value),
                p=p,
                hom=math.nan,
                hom_err=None,
                input_threshold=None,
                output_threshold=out_thr,
                warnings=f"numerical-domain failure: {exc}",
            )
            for p in config.p_values
        ]


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """Evaluate the whole grid, in grid order.

    Per-point numerical failures become warning rows with NaN elements;
    the sweep only raises :class:`SweepNumericalError` when every grid
    point failed.
    """
    tasks = [(config, float(v)) for v in config.grid()]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            groups = list(pool.map(_evaluate_point, tasks, chunksize=1))
    else:
        groups = [_evaluate_point(t) for t in tasks]
    rows = [row for group in groups for row in group]
    if rows and all(math.isnan(row.hom) for row in rows):
        raise SweepNumericalError("every grid point failed numerically")
    return rows


# ----------------------------------------------------------------------
# Emission
# ----------------------------------------------------------------------

def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def render_csv(rows: Iterable[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join([
            row.param,
            _fmt(row.value),
            _fmt(row.p),
            _fmt(row.hom),
            _fmt(row.hom_err),
            _fmt(row.input_threshold),
            _fmt(row.output_threshold),
            row.warnings,
        ]))
    return "\n".join(lines) + "\n"


def render_json(rows: Iterable[SweepRow]) -> str:
    def clean(row: SweepRow) -> dict:
        d = row.as_dict()
        if d["hom"] is not None and math.isnan(d["hom"]):
            d["hom"] = None
        return d

    return json.dumps([clean(r) for r in rows], indent=2) + "\n"


def emit(rows: Sequence[SweepRow], out_format: str, path: str | None):
    """Write rows as UTF-8 with LF line endings; path None → stdout."""
    if out_format == "csv":
        text = render_csv(rows)
    elif out_format == "json":
        text = render_json(rows)
    else:
        raise SweepConfigError(f"unknown output format {out_format!r}")
    if path is None:
        import sys

        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ----------------------------------------------------------------------
# Optimum search
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class OptimumResult:
    argmax: Mapping[str, float]
    value: float
    interior: bool
    boundary_params: tuple[str, ...] = ()


def find_optimum(
    gate: str,
    fixed: Mapping[str, float],
    free: Mapping[str, tuple[float, float]],
    p: float = 1.0,
    n: float = DEFAULT_OCCUPATION,
    grid: int = 15,
    refine: bool = True,
) -> OptimumResult:
    """Maximize the p-input bunching element over 1–2 free parameters.

    Coarse grid then simplex refinement; a boundary optimum is flagged
    (``interior=False``), never fatal.
    """
    names = list(free)
    if not 1 <= len(names) <= 2:
        raise SweepConfigError("find_optimum needs 1 or 2 free parameters")
    for name, (lo, hi) in free.items():
        if not hi > lo:
            raise SweepConfigError(f"empty range for free parameter {name!r}")

    def objective(point: Sequence[float]) -> float:
        values = dict(fixed)
        for name, x in zip(names, point):
            values[name] = float(x)
        model = build_model(gate, values)
        return hom_element_for_gate(model, InputSpec(p, p, n)).value

    axes = [np.linspace(lo, hi, grid) for lo, hi in (free[k] for k in names)]
    best_val, best_pt = -np.inf, None
    if len(names) == 1:
        candidates = [(x,) for x in axes[0]]
    else:
        candidates = [(x, y) for x in axes[0] for y in axes[1]]
    for pt in candidates:
        v = objective(pt)
        if v > best_val:
            best_val, best_pt = v, pt
    if refine:
        from scipy.optimize import minimize

        bounds = [free[k] for k in names]
        res = minimize(
            lambda x: -objective(x),
            list(best_pt),
            method="Nelder-Mead",
            bounds=bounds,
            options=dict(xatol=1e-5, fatol=1e-10, maxiter=400),
        )
        if -res.fun > best_val:
            best_val, best_pt = -float(res.fun), tuple(float(x) for x in res.x)
    at_boundary = []
    for name, x in zip(names, best_pt):
        lo, hi = free[name]
        margin = 5e-3 * (hi - lo)
        if x - lo < margin or hi - x < margin:
            at_boundary.append(name)
    return OptimumResult(
        argmax={name: float(x) for name, x in zip(names, best_pt)},
        value=float(best_val),
        interior=not at_boundary,
        boundary_params=tuple(at_boundary),
    )


# ----------------------------------------------------------------------
# Figure presets
# ----------------------------------------------------------------------

def _preset(gate, sweep, start, stop, fixed, p_values, points=80, **kw) -> SweepConfig:
    return SweepConfig(
        gate=gate, sweep_param=sweep, start=start, stop=stop, points=points,
        fixed=fixed, p_values=p_values, with_input_threshold=True, **kw,
    )


PRESETS: dict[str, SweepConfig] = {
    # ideal-gate overview: element vs gain for decreasing input purity
    "methods-ideal": _preset(
        "ideal", "G", 0.0, 3.0, {}, (1.0, 0.7, 0.48, 0.4),
    ),
    # pulsed atomic gate, element vs coupling
    "fig2a": _preset(
        "atom-light", "g", 0.005, 0.2,
        {"kappa_tau": 100.0, "eta": 0.9}, (1.0, 0.78, 0.55),
    ),
    # pulsed optomechanical gate at low reheating (the companion curve
    # uses Gamma=1e-3; override via config)
    "fig2b": _preset(
        "optomech", "g", 0.005, 0.2,
        {"kappa_tau": 100.0, "eta": 0.9, "Gamma": 1e-4}, (1.0, 0.78, 0.55),
    ),
    # hybrid gate, element vs coupling at the pulse-length optimum
    "fig3a": _preset(
        "atom-mech", "g", 0.005, 0.2,
        {"kappa_tau": 90.0, "eta": 0.9, "Gamma": 1e-4, "S": 7.0},
        (1.0, 0.93, 0.67, 0.63),
    ),
    # hybrid gate, element vs pulse length at fixed coupling
    "fig3b": _preset(
        "atom-mech", "kappa_tau", 10.0, 300.0,
        {"g": 0.07, "eta": 0.9, "Gamma": 1e-4, "S": 7.0}, (1.0,),
    ),
    # appendix panels: lossless references
    "app-atomlight": _preset(
        "atom-light", "g", 0.005, 0.2, {"kappa_tau": 100.0, "eta": 1.0}, (1.0,),
    ),
    "app-mechlight": _preset(
        "optomech", "g", 0.005, 0.2,
        {"kappa_tau": 100.0, "eta": 1.0, "Gamma": 1e-3}, (1.0,),
    ),
    "app-atommech-coupling": _preset(
        "atom-mech", "g", 0.005, 0.2,
        {"kappa_tau": 90.0, "eta": 0.8, "Gamma": 1e-4, "S": 7.0}, (1.0,),
    ),
    "app-atommech-squeezing": _preset(
        "atom-mech", "S", 0.0, 14.0,
        {"g": 0.07, "kappa_tau": 90.0, "eta": 0.8, "Gamma": 1e-4}, (1.0,),
    ),
}


def preset_config(name: str, **overrides) -> SweepConfig:
    if name not in PRESETS:
        raise SweepConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    config = PRESETS[name]
    return replace(config, **overrides) if overrides else config
