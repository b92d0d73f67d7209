"""Gaussian (Wigner-function) machinery for two bosonic modes.

Conventions used throughout the package:

* quadratures X = a + a†, P = i(a† - a), so [X, P] = 2i,
* vacuum covariance is the identity, a thermal state with mean
  occupation n has covariance (2n+1)·I per mode,
* two-mode vectors are ordered (x_a, p_a, x_b, p_b), the symplectic
  form is block-diagonal with 2x2 blocks [[0, 1], [-1, 0]].

A single photon has no Gaussian Wigner function, but it can be written
as a signed combination of a thermal state and vacuum,

    W_|1>(r) ~ (1/n) [ (n+1) W_th(n) - W_vac ],    n -> 0,

which lets every HOM matrix element in this package reduce to sums of
displaced-Gaussian overlaps.  The weights grow like 1/n, and the final
results emerge from near-total cancellation between terms, so overlaps
are accumulated in extended precision (np.longdouble) internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# Largest approximation occupation accepted by the thermal-minus-vacuum
# photon representation; the O(n) error is useless beyond this.
N_MAX = 0.05

# Condition-number guard for overlap matrix inversions; squeezed-mediator
# covariances can make V1+V2 nearly singular.
COND_LIMIT = 1e12


class NumericalDomainError(ArithmeticError):
    """An overlap or covariance left the numerically trustworthy domain."""


def omega(n_modes: int = 2) -> np.ndarray:
    """Symplectic form: block-diagonal [[0,1],[-1,0]] per mode."""
    om = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        om[2 * k, 2 * k + 1] = 1.0
        om[2 * k + 1, 2 * k] = -1.0
    return om


OMEGA4 = omega(2)


def qnd_matrix(G: float) -> np.ndarray:
    """Quadrature map of the ideal QND gate: x_a += G x_b, p_b -= G p_a."""
    if not np.isfinite(G):
        raise ValueError("QND gain must be finite")
    T = np.eye(4)
    T[0, 2] = G
    T[3, 1] = -G
    return T


def bs_matrix(transmittance: float) -> np.ndarray:
    """Orthogonal beam-splitter map with intensity transmittance T."""
    T = transmittance
    if not 0.0 <= T <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {T}")
    t, r = np.sqrt(T), np.sqrt(1.0 - T)
    out = np.zeros((4, 4))
    out[0, 0] = out[1, 1] = out[2, 2] = out[3, 3] = t
    out[0, 2] = out[1, 3] = r
    out[2, 0] = out[3, 1] = -r
    return out


def is_symplectic(T: np.ndarray, tol: float = 1e-12) -> bool:
    om = omega(T.shape[0] // 2)
    return bool(np.max(np.abs(T @ om @ T.T - om)) <= tol)


def min_physicality_eig(cov: np.ndarray) -> float:
    """Smallest eigenvalue of V + iΩ; physical states satisfy >= 0."""
    n = cov.shape[0] // 2
    return float(np.linalg.eigvalsh(cov.astype(complex) + 1j * omega(n)).min())


def check_physical(cov: np.ndarray, tol: float = 1e-9) -> None:
    ev = min_physicality_eig(cov)
    if ev < -tol:
        raise NumericalDomainError(
            f"covariance violates the uncertainty bound: min eig(V+iΩ) = {ev:.3e}"
        )


@dataclass(frozen=True)
class GaussianTerm:
    """One signed Gaussian term: weight, mean vector, covariance.

    Negative weights are deliberate — the photon representation needs
    them.  Terms are 2- or 4-dimensional (one or two modes).
    """

    weight: float
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (mean.size, mean.size) or mean.size not in (2, 4):
            raise ValueError("term dimensions must be 2 or 4 and consistent")
        if not np.isfinite(self.weight):
            raise ValueError("term weight must be finite")
        if np.max(np.abs(cov - cov.T)) > 1e-12 * max(1.0, np.max(np.abs(cov))):
            raise ValueError("covariance must be symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", (cov + cov.T) / 2.0)


@dataclass(frozen=True)
class GaussianCombo:
    """Ordered signed combination of Gaussian terms with unit total weight."""

    terms: tuple[GaussianTerm, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("combo must contain at least one term")
        total = sum(t.weight for t in terms)
        scale = max(abs(t.weight) for t in terms)
        if abs(total - 1.0) > 1e-6 * max(1.0, scale):
            raise ValueError(f"combo weights must sum to 1, got {total!r}")
        object.__setattr__(self, "terms", terms)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


def _lu_det_solve(S: np.ndarray, rhs: np.ndarray) -> tuple[np.longdouble, np.ndarray]:
    """Determinant and solve of a small SPD-ish system in extended precision.

    Plain LU with partial pivoting; numpy's solve/det only work in
    float64, and the 1/n⁴ weight cancellation needs the extra digits.
    """
    A = np.array(S, dtype=np.longdouble)
    x = np.array(rhs, dtype=np.longdouble)
    n = A.shape[0]
    det = np.longdouble(1.0)
    for k in range(n):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if A[piv, k] == 0:
            raise NumericalDomainError("singular overlap matrix")
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            x[[k, piv]] = x[[piv, k]]
            det = -det
        det *= A[k, k]
        for i in range(k + 1, n):
            f = A[i, k] / A[k, k]
            A[i, k + 1:] -= f * A[k, k + 1:]
            x[i] -= f * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - np.dot(A[k, k + 1:], x[k + 1:])) / A[k, k]
    return det, x


def gaussian_overlap(t1: GaussianTerm, t2: GaussianTerm) -> float:
    """Overlap integral of two weighted Gaussian Wigner terms.

    Returns w1 w2 exp(-Δᵀ S⁻¹ Δ / 2) / ((2π)^k √det S) with S = V1+V2,
    Δ = R1-R2, k the number of modes.  For two-mode zero-mean terms this
    is w1 w2 (4π²)⁻¹ / √det(V1+V2).
    """
    if t1.mean.size != t2.mean.size:
        raise ValueError("terms must have the same mode count")
    S = t1.cov.astype(np.longdouble) + t2.cov.astype(np.longdouble)
    if np.linalg.cond(S.astype(float)) > COND_LIMIT:
        raise NumericalDomainError("overlap matrix condition number exceeds 1e12")
    delta = t1.mean.astype(np.longdouble) - t2.mean.astype(np.longdouble)
    det, sol = _lu_det_solve(S, delta)
    if det <= 0:
        raise NumericalDomainError("overlap matrix is not positive definite")
    k = t1.mean.size // 2
    expo = np.exp(-np.dot(delta, sol) / np.longdouble(2.0))
    norm = np.longdouble(2.0 * np.pi) ** k
    value = np.longdouble(t1.weight) * np.longdouble(t2.weight) * expo / (norm * np.sqrt(det))
    return float(value)


def _pair_core(ti: GaussianTerm, tj: GaussianTerm) -> np.longdouble:
    """Weighted overlap kernel w_i·w_j·exp(-½ΔᵀS⁻¹Δ)/√det S of one term
    pair, in longdouble; multiply by 4 (two-mode) for its contribution
    to a matrix element.  Individual pairs reach ~1/n⁴ while their sum
    is O(1), hence the extended precision."""
    S = ti.cov.astype(np.longdouble) + tj.cov.astype(np.longdouble)
    if np.linalg.cond(S.astype(float)) > COND_LIMIT:
        raise NumericalDomainError("overlap matrix condition number exceeds 1e12")
    delta = ti.mean.astype(np.longdouble) - tj.mean.astype(np.longdouble)
    det, sol = _lu_det_solve(S, delta)
    if det <= 0:
        raise NumericalDomainError("overlap matrix is not positive definite")
    expo = np.exp(-np.dot(delta, sol) / np.longdouble(2.0))
    return np.longdouble(ti.weight) * np.longdouble(tj.weight) * expo / np.sqrt(det)


def matrix_element(bra_ket_combo: GaussianCombo, state_combo: GaussianCombo) -> float:
    """⟨φ|ρ|φ⟩ from two Gaussian combinations (projector and state).

    The Wigner-overlap trace formula gives (4π)² Σ_ij overlap(term_i,
    term_j) for two-mode operators.  Accumulation stays in longdouble
    because individual products reach ~1e12 while the sum is O(1).
    """
    acc = np.longdouble(0.0)
    for ti in bra_ket_combo:
        for tj in state_combo:
            acc += _pair_core(ti, tj)
    k = bra_ket_combo.terms[0].mean.size // 2
    # (4π)² · [overlap with its (4π²)⁻¹ prefactor] = 4/√det per term pair
    if k == 2:
        return float(np.longdouble(4.0) * acc)
    return float(np.longdouble(2.0) * acc)


def single_photon_combo(n: float) -> GaussianCombo:
    """Single-mode photon as thermal-minus-vacuum, occupation n ≪ 1."""
    _validate_n(n)
    eye2 = np.eye(2)
    zero2 = np.zeros(2)
    return GaussianCombo((
        GaussianTerm((n + 1.0) / n, zero2, (2.0 * n + 1.0) * eye2),
        GaussianTerm(-1.0 / n, zero2, eye2),
    ))


def _validate_n(n: float) -> None:
    if not (0.0 < n <= N_MAX):
        raise ValueError(f"approximation occupation must lie in (0, {N_MAX}], got {n}")


def _mode_weights(p: float, n: float) -> list[tuple[int, float, float]]:
    """Per-mode (kind, weight, variance) triples for p|1><1| + (1-p)|0><0|.

    The photon's own vacuum counter-term merges with the (1-p) vacuum:
       kind 0, thermal term  p(n+1)/n      at variance 2n+1,
       kind 1, vacuum term   1 - p(n+1)/n  at variance 1.
    Zero-weight terms are dropped so p=0 stays a single Gaussian.
    """
    w_th = p * (n + 1.0) / n
    out = []
    if w_th != 0.0:
        out.append((0, w_th, 2.0 * n + 1.0))
    if 1.0 - w_th != 0.0:
        out.append((1, 1.0 - w_th, 1.0))
    return out


def input_state_combo(p_a: float, p_b: float, n: float) -> GaussianCombo:
    """Two-mode input mixture (p_a|1><1|+(1-p_a)|0><0|) ⊗ (same with p_b)."""
    if not (0.0 <= p_a <= 1.0 and 0.0 <= p_b <= 1.0):
        raise ValueError("single-quantum fractions must lie in [0, 1]")
    _validate_n(n)
    terms = []
    # canonical order: photon-term before vacuum-term, mode a before mode b
    for _, wa, va in _mode_weights(p_a, n):
        for _, wb, vb in _mode_weights(p_b, n):
            terms.append(GaussianTerm(wa * wb, np.zeros(4), np.diag([va, va, vb, vb])))
    return GaussianCombo(tuple(terms))


def hom_projector_combo(n: float) -> GaussianCombo:
    """|HOM⟩⟨HOM| with |HOM⟩=(|0,2⟩-|2,0⟩)/√2 as a 4-term Gaussian combo.

    |HOM⟩ is the balanced beam splitter acting on |1,1⟩, so the combo is
    the two-photon input combination conjugated by the T=1/2 map.
    """
    _validate_n(n)
    T = bs_matrix(0.5)
    terms = []
    for _, wa, va in _mode_weights(1.0, n):
        for _, wb, vb in _mode_weights(1.0, n):
            cov = T @ np.diag([va, va, vb, vb]) @ T.T
            terms.append(GaussianTerm(wa * wb, np.zeros(4), cov))
    return GaussianCombo(tuple(terms))


def push_combo(
    combo: GaussianCombo,
    T: np.ndarray,
    added_noise: np.ndarray | None = None,
) -> GaussianCombo:
    """Propagate every term through r → T r, V → T V Tᵀ + V_N."""
    T = np.asarray(T, dtype=float)
    if added_noise is not None:
        VN = np.asarray(added_noise, dtype=float)
        if np.max(np.abs(VN - VN.T)) > 1e-10:
            raise ValueError("added noise must be symmetric")
    else:
        VN = None
    out = []
    for t in combo:
        cov = T @ t.cov @ T.T
        if VN is not None:
            cov = cov + VN
        out.append(GaussianTerm(t.weight, T @ t.mean, cov))
    return GaussianCombo(tuple(out))
