"""Bunching matrix element ⟨HOM|ρ_out|HOM⟩ for gate models.

The input on the two signal subsystems is the mixture
(p_a|1⟩⟨1| + (1−p_a)|0⟩⟨0|) ⊗ (p_b|1⟩⟨1| + (1−p_b)|0⟩⟨0|); single
photons are represented as thermal-minus-vacuum Gaussian combinations
at occupation n ≪ 1 (see :mod:`qnd_hom.gaussian`), so the element is a
signed sum of displaced-Gaussian overlaps indexed by the projector term
pair (k, l) and the input term pair (m, d).  Individual (k,l,m,d)
contributions diverge as 1/n⁴ while their sum stays O(1); the sum is
accumulated in extended precision and, by default, the leading O(n)
bias is removed by Richardson extrapolation of evaluations at n and
n/2.

For the atom-light and optomech gates the second subsystem is the
outgoing pulse mode; for the atom-mechanical gate both subsystems are
matter modes and the mediator pulse never carries an input state.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .gaussian import (
    GaussianCombo,
    GaussianTerm,
    _mode_weights,
    _pair_core,
    _validate_n,
    check_physical,
    hom_projector_combo,
    matrix_element,
)
from .gates import GateModel, ideal_gate_model

DEFAULT_OCCUPATION = 1e-3


@dataclass(frozen=True)
class InputSpec:
    """Mixture input: single-quantum fractions per signal subsystem."""

    p_a: float
    p_b: float
    n: float = DEFAULT_OCCUPATION

    def __post_init__(self):
        if not (0.0 <= self.p_a <= 1.0 and 0.0 <= self.p_b <= 1.0):
            raise ValueError("single-quantum fractions must lie in [0, 1]")
        _validate_n(self.n)


@dataclass(frozen=True)
class HomResult:
    """Bunching element with convergence diagnostics.

    ``value`` is the extrapolated element (or the raw value when
    extrapolation is off); ``raw`` is the plain evaluation at ``n``.
    ``error_estimate`` is |f(n/2) − f(n)|, an O(n) proxy, present only
    when extrapolation ran.  ``breakdown`` maps (k, l, m, d) — the
    projector term pair and the input term pair, 0 = thermal-like
    term, 1 = vacuum term — to that term's (extrapolated)
    contribution; entries are individually huge (≈1/n⁴) by
    construction and cancel in the sum.
    """

    value: float
    raw: float
    n: float
    error_estimate: float | None
    breakdown: Mapping[tuple[int, int, int, int], float]

    def __float__(self) -> float:
        return self.value


def _element_eval(
    model: GateModel, p_a: float, p_b: float, n: float
) -> tuple[np.longdouble, dict[tuple[int, int, int, int], float]]:
    """One evaluation at fixed n: longdouble total plus the per-term
    breakdown.  The total must be accumulated *before* any float
    rounding — individual terms are ~1/n⁴ and cancel to O(1), so a
    float64 copy of a term already carries an absolute error far above
    the final value.  The breakdown is diagnostic only.
    """
    proj = hom_projector_combo(n)
    pw = _mode_weights(1.0, n)
    proj_kinds = [(ka, kb) for ka, _, _ in pw for kb, _, _ in pw]
    base = np.ones(model.n_latents)
    acc = np.longdouble(0.0)
    out: dict[tuple[int, int, int, int], float] = {}
    for m, wa, va in _mode_weights(p_a, n):
        for d, wb, vb in _mode_weights(p_b, n):
            v = base.copy()
            v[0] = v[1] = va
            v[2] = v[3] = vb
            cov = model.output_cov(v)
            check_physical(cov, tol=1e-9)
            state = GaussianTerm(wa * wb, np.zeros(4), cov)
            for (k, l), tproj in zip(proj_kinds, proj.terms):
                pair = np.longdouble(4.0) * _pair_core(tproj, state)
                acc += pair
                out[(k, l, m, d)] = float(pair)
    return acc, out


def hom_element_for_gate(
    model: GateModel,
    spec: InputSpec,
    extrapolate: bool = True,
) -> HomResult:
    """⟨HOM|ρ_out|HOM⟩ for a gate model and mixture input.

    With ``extrapolate`` (the default) the value is 2f(n/2) − f(n),
    cancelling the leading O(n) bias of the thermal-minus-vacuum
    photon representation.
    """
    acc1, t1 = _element_eval(model, spec.p_a, spec.p_b, spec.n)
    raw = float(acc1)
    if not extrapolate:
        return HomResult(raw, raw, spec.n, None, MappingProxyType(t1))
    acc2, t2 = _element_eval(model, spec.p_a, spec.p_b, spec.n / 2.0)
    combined = {key: 2.0 * t2[key] - t1[key] for key in t1}
    return HomResult(
        value=float(np.longdouble(2.0) * acc2 - acc1),
        raw=raw,
        n=spec.n,
        error_estimate=abs(float(acc2) - raw),
        breakdown=MappingProxyType(combined),
    )


def hom_element_ideal_via_wigner(
    G: float,
    p_a: float,
    p_b: float,
    n: float = DEFAULT_OCCUPATION,
    extrapolate: bool = True,
) -> float:
    """Ideal-gate element through the Gaussian engine.

    Exists as the cross-validation bridge to the truncated-Fock oracle
    and the closed forms; returns the plain number.
    """
    result = hom_element_for_gate(
        ideal_gate_model(G), InputSpec(p_a, p_b, n), extrapolate=extrapolate
    )
    return result.value


def coherent_output_element(
    model: GateModel | float,
    means: np.ndarray,
    n: float = DEFAULT_OCCUPATION,
    extrapolate: bool = True,
) -> float:
    """Element for coherent signal inputs with quadrature means
    (X_a, P_a, X_b, P_b) — twice the coherent amplitudes — propagated
    through the gate; all noise modes stay at zero mean.

    A bare number is accepted in place of a model and denotes the
    ideal gate with that gain.
    """
    if not isinstance(model, GateModel):
        model = ideal_gate_model(float(model))
    means = np.asarray(means, dtype=float)
    if means.shape != (4,):
        raise ValueError("means must be a quadrature 4-vector")
    mean_out = model.latent_map[:, :4] @ means
    cov = model.vacuum_output_cov
    check_physical(cov, tol=1e-9)
    state = GaussianCombo((GaussianTerm(1.0, mean_out, cov),))

    def eval_at(nn: float) -> float:
        return matrix_element(hom_projector_combo(nn), state)

    v1 = eval_at(n)
    if not extrapolate:
        return v1
    return 2.0 * eval_at(n / 2.0) - v1
