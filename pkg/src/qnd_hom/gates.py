"""Noisy QND gate models over correlated noise modes.

Three physical realizations of a QND-type entangling map with added
Gaussian noise: an atomic ensemble coupled to a traveling light pulse,
a mechanical oscillator read out by the same kind of pulse, and the
cascaded atom-mechanical gate where the pulse mediates an effective
direct interaction between the two matter systems (feedforward makes
the two gains equal by construction).

Each builder expresses the output quadratures (X_a, P_a, X_b, P_b) as
rows of a coefficient matrix A over a vector z of scalar quadrature
variables: signal quadratures first, then auxiliary temporal modes of
the traveling field, intracavity initials, loss vacua and thermal-force
modes.  Distinct temporal modes of one field overlap; the stated
pairwise overlaps go through :func:`qnd_hom.modes.orthogonalize_noise_modes`
so that covariances are assembled over independent unit-variance
latents.  Because every flat-top signal/mediator mode precedes the
auxiliary modes of its family, the first four latent slots always
coincide with the physical signal quadratures — input states and
per-term thermal variances are injected there.

All rates are in units of the cavity decay κ (κ_A = κ_M = κ = 1) and
times in units of 1/κ; ``kappa_tau`` is the dimensionless pulse length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np
from scipy.integrate import quad

from .gaussian import check_physical, qnd_matrix
from .modes import NoiseModeBasis, apply_squeezing, orthogonalize_noise_modes

_QUAD_KW = dict(epsabs=1e-12, epsrel=1e-12, limit=400)


# ----------------------------------------------------------------------
# Parameter sets
# ----------------------------------------------------------------------

def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class AtomLightParams:
    g_over_kappa: float
    kappa_tau: float
    eta: float = 1.0

    def __post_init__(self):
        _require(self.g_over_kappa > 0, "g_over_kappa must be positive")
        _require(self.kappa_tau > 0, "kappa_tau must be positive")
        _require(0.0 < self.eta <= 1.0, "eta must lie in (0, 1]")


@dataclass(frozen=True)
class OptomechParams:
    g_over_kappa: float
    kappa_tau: float
    eta: float = 1.0
    Gamma_over_kappa: float = 0.0

    def __post_init__(self):
        _require(self.g_over_kappa > 0, "g_over_kappa must be positive")
        _require(self.kappa_tau > 0, "kappa_tau must be positive")
        _require(0.0 < self.eta <= 1.0, "eta must lie in (0, 1]")
        _require(self.Gamma_over_kappa >= 0, "Gamma_over_kappa must be non-negative")


@dataclass(frozen=True)
class AtomMechParams:
    gA_over_kappa: float
    gM_over_kappa: float
    kappa_tau: float
    eta: float = 1.0
    Gamma_over_kappa: float = 0.0
    squeezing_db: float = 0.0

    def __post_init__(self):
        _require(self.gA_over_kappa > 0, "gA_over_kappa must be positive")
        _require(self.gM_over_kappa > 0, "gM_over_kappa must be positive")
        _require(self.kappa_tau > 0, "kappa_tau must be positive")
        _require(0.0 < self.eta <= 1.0, "eta must lie in (0, 1]")
        _require(self.Gamma_over_kappa >= 0, "Gamma_over_kappa must be non-negative")
        _require(0.0 <= self.squeezing_db <= 20.0, "squeezing_db must lie in [0, 20]")


# ----------------------------------------------------------------------
# Constants of the temporal-mode decompositions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PulseGateConstants:
    """Atom-light / optomech constants at pulse length τ (κ=1).

    K1, L, L1, Kf, Kf1, Kff1 describe the normalized temporal modes of
    the output pulse and their overlaps; M, M1 and theta are quoted per
    unit coupling g/κ (multiply by g to get the physical value).
    """

    kappa_tau: float
    K1: float
    L: float
    L1: float
    Kf: float
    Kf1: float
    Kff1: float
    M: float
    M1: float
    theta: float


@dataclass(frozen=True)
class AtomMechConstants:
    """Cascaded-gate constants at pulse length τ (κ=1).

    K1..K6 normalize the temporal modes with weights
    w1=1-2e^{-s}, w2=1-e^{-s}, w3=s-1+e^{-s}, w5=1-4se^{-s},
    w6=1-e^{-s}(2s+1); K4=∫w3 and K7=∫w2·w5 are plain integrals.
    E is the gain bracket e^{-τ}(τ+2)+τ-2, so the symmetric gain is
    𝔊 = 2·gA·gM·√η·E.
    """

    kappa_tau: float
    K1: float
    K2: float
    K3: float
    K4: float
    K5: float
    K6: float
    K7: float
    E: float


def atom_light_constants(kappa_tau: float) -> PulseGateConstants:
    """Closed-form temporal-mode constants for the pulsed readout."""
    _require(kappa_tau > 0, "kappa_tau must be positive")
    tau = float(kappa_tau)
    em, em2 = math.exp(-tau), math.exp(-2.0 * tau)
    K1 = math.sqrt((1.0 - em2) / 2.0)
    L = 2.0 * math.sqrt(1.0 - 2.0 * (1.0 - em) / tau + (1.0 - em2) / (2.0 * tau))
    Kf = (1.0 - em) / math.sqrt(tau)
    Kf1 = (2.0 / L) * (1.0 - (1.0 - em) / tau) - 1.0
    L1 = math.sqrt(max(2.0 - (4.0 / L) * (1.0 - (1.0 - em) / tau), 0.0))
    Kff1 = (2.0 / (L * math.sqrt(tau))) * ((1.0 - em) - (1.0 - em2) / 2.0) - (1.0 - em) / math.sqrt(tau)
    # thermal-force mode shape w(s) = s-1+e^{-s}: norm M and mean M1, per unit g
    I2 = ((tau - 1.0) ** 3 + 1.0) / 3.0 - 2.0 * tau * em + (1.0 - em2) / 2.0
    M = math.sqrt(2.0 * I2 / tau)
    M1 = math.sqrt(2.0 / tau) * (tau**2 / 2.0 - tau + 1.0 - em)
    theta = 1.0 - em
    return PulseGateConstants(tau, K1, L, L1, Kf, Kf1, Kff1, M, M1, theta)


def atom_light_constants_quadrature(kappa_tau: float) -> PulseGateConstants:
    """Same constants via adaptive quadrature of the defining integrals."""
    tau = float(kappa_tau)
    st = math.sqrt(tau)
    K1 = math.sqrt(quad(lambda t: math.exp(-2.0 * (tau - t)), 0, tau, **_QUAD_KW)[0])
    f1 = lambda t: 2.0 * (1.0 - math.exp(-(tau - t))) / st
    L = math.sqrt(quad(lambda t: f1(t) ** 2, 0, tau, **_QUAD_KW)[0])
    L1 = math.sqrt(quad(lambda t: (f1(t) / L - 1.0 / st) ** 2, 0, tau, **_QUAD_KW)[0])
    Kf = quad(lambda t: math.exp(-(tau - t)) / st, 0, tau, **_QUAD_KW)[0]
    Kf1 = quad(lambda t: (f1(t) / L - 1.0 / st) / st, 0, tau, **_QUAD_KW)[0]
    Kff1 = quad(lambda t: math.exp(-(tau - t)) * (f1(t) / L - 1.0 / st), 0, tau, **_QUAD_KW)[0]
    w3 = lambda s: s - 1.0 + math.exp(-s)
    M = math.sqrt(2.0 / tau * quad(lambda s: w3(s) ** 2, 0, tau, **_QUAD_KW)[0])
    M1 = math.sqrt(2.0 / tau) * quad(w3, 0, tau, **_QUAD_KW)[0]
    theta = quad(lambda s: math.exp(-s), 0, tau, **_QUAD_KW)[0]
    return PulseGateConstants(tau, K1, L, L1, Kf, Kf1, Kff1, M, M1, theta)


def atom_mech_constants(kappa_tau: float) -> AtomMechConstants:
    """Closed-form constants of the cascaded atom-mechanical gate."""
    _require(kappa_tau > 0, "kappa_tau must be positive")
    tau = float(kappa_tau)
    em, em2 = math.exp(-tau), math.exp(-2.0 * tau)
    K1 = math.sqrt(1.0 / (tau - 2.0 + 4.0 * em - 2.0 * em2))
    K2 = math.sqrt(2.0 / (4.0 * em + 2.0 * tau - 3.0 - em2))
    K3 = math.sqrt(6.0 / (3.0 + 2.0 * tau * (3.0 + tau * (tau - 3.0)) - 3.0 * em2 - 12.0 * em * tau))
    K4 = (2.0 * (1.0 - tau) - 2.0 * em + tau**2) / 2.0
    K5 = math.sqrt(1.0 / ((tau - 4.0) + 8.0 * em * (1.0 + tau) - 4.0 * em2 * (1.0 + 2.0 * tau * (1.0 + tau))))
    K6 = math.sqrt(2.0 / ((2.0 * tau - 7.0) + 4.0 * em * (2.0 * tau + 3.0) - em2 * (5.0 + 4.0 * tau * (2.0 + tau))))
    K7 = (tau - 4.0) + em * (5.0 + 4.0 * tau) - em2 * (1.0 + 2.0 * tau)
    E = em * (tau + 2.0) + tau - 2.0
    return AtomMechConstants(tau, K1, K2, K3, K4, K5, K6, K7, E)


def atom_mech_constants_quadrature(kappa_tau: float) -> AtomMechConstants:
    """Same constants via adaptive quadrature of the mode weights."""
    tau = float(kappa_tau)
    w1 = lambda s: 1.0 - 2.0 * math.exp(-s)
    w2 = lambda s: 1.0 - math.exp(-s)
    w3 = lambda s: s - 1.0 + math.exp(-s)
    w5 = lambda s: 1.0 - 4.0 * s * math.exp(-s)
    w6 = lambda s: 1.0 - math.exp(-s) * (2.0 * s + 1.0)
    norm = lambda w: 1.0 / math.sqrt(quad(lambda s: w(s) ** 2, 0, tau, **_QUAD_KW)[0])
    K4 = quad(w3, 0, tau, **_QUAD_KW)[0]
    K7 = quad(lambda s: w2(s) * w5(s), 0, tau, **_QUAD_KW)[0]
    em = math.exp(-tau)
    E = em * (tau + 2.0) + tau - 2.0
    return AtomMechConstants(tau, norm(w1), norm(w2), norm(w3), K4, norm(w5), norm(w6), K7, E)


GateConstants = PulseGateConstants | AtomMechConstants


# ----------------------------------------------------------------------
# Gate models
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class GateModel:
    """Linear output map of one gate over its correlated mode vector z.

    ``output_matrix`` rows are (X_a, P_a, X_b, P_b); subsystem a/b per
    ``kind``.  ``signal_slots`` names the z entries carrying the two
    input systems (and the mediator where present); these always occupy
    the first latent slots unchanged, so downstream code may inject
    input-state variances directly on latents 0..3.
    """

    kind: str
    output_matrix: np.ndarray
    basis: NoiseModeBasis
    gains: Mapping[str, float]
    constants: GateConstants | None = None
    signal_slots: Mapping[str, tuple[int, ...]] = field(
        default_factory=lambda: {"a": (0, 1), "b": (2, 3)}
    )

    def __post_init__(self):
        A = np.asarray(self.output_matrix, dtype=float)
        if A.shape != (4, self.basis.n_modes):
            raise ValueError("output matrix must be 4 × n_modes")
        object.__setattr__(self, "output_matrix", A)
        for i in range(4):
            row = self.basis.transform[i]
            if abs(row[i] - 1.0) > 1e-12 or np.any(np.abs(np.delete(row, i)) > 1e-12):
                raise ValueError("signal quadratures must be uncorrelated leading modes")
        check_physical(self.vacuum_output_cov, tol=1e-9)

    @property
    def n_latents(self) -> int:
        return self.basis.n_modes

    @cached_property
    def latent_map(self) -> np.ndarray:
        """Output map à = A·C over independent unit-variance latents."""
        return self.output_matrix @ self.basis.transform

    @cached_property
    def vacuum_output_cov(self) -> np.ndarray:
        return self.output_cov()

    def output_cov(self, latent_variances: np.ndarray | None = None) -> np.ndarray:
        """A Σ Aᵀ, optionally with non-vacuum latent variances (slots 0..3
        carry the input systems; all other latents are vacuum)."""
        At = self.latent_map
        if latent_variances is None:
            return At @ At.T
        v = np.asarray(latent_variances, dtype=float)
        if v.shape != (self.n_latents,):
            raise ValueError("latent variance vector has the wrong length")
        return (At * v) @ At.T


def ideal_gate_model(G: float) -> GateModel:
    """Noiseless QND gate with a single gain G (no extra modes)."""
    labels = ("X_a0", "P_a0", "X_b0", "P_b0")
    basis = NoiseModeBasis(labels, np.eye(4), np.eye(4))
    return GateModel(
        kind="ideal",
        output_matrix=qnd_matrix(G),
        basis=basis,
        gains={"G": float(G)},
    )


def _pulse_rows(g: float, tau: float, eta: float, c: PulseGateConstants, n_modes: int) -> tuple[np.ndarray, dict]:
    """Shared atom-light/optomech rows; matter mode a, light mode b.

    z[0..10]: X_a0, P_a0, X_L0, Y_L0, X_0f1, Y_0k, Y_0f1, x_c, p_c, x_v, p_v.
    """
    em = math.exp(-tau)
    GA = g * math.sqrt(2.0 * tau)
    GL = GA * math.sqrt(eta) * (1.0 - (1.0 - em) / tau)
    TL = math.sqrt(eta) * (c.L - 1.0)
    theta = g * c.theta
    s_cav = math.sqrt(2.0 * eta) * (1.0 - em) / math.sqrt(tau)
    s_loss = math.sqrt(1.0 - eta)
    A = np.zeros((4, n_modes))
    A[0, 0] = 1.0
    A[1, 1] = 1.0
    A[1, 3] = -GA
    A[1, 8] = -theta
    A[1, 5] = GA * c.K1 / math.sqrt(tau)
    A[2, 2] = TL
    A[2, 0] = GL
    A[2, 9] = s_loss
    A[2, 7] = s_cav
    A[2, 4] = math.sqrt(eta) * c.L * c.L1
    A[3, 3] = TL
    A[3, 10] = s_loss
    A[3, 8] = s_cav
    A[3, 6] = math.sqrt(eta) * c.L * c.L1
    return A, {"G_A": GA, "G_L": GL, "T_L": TL, "theta": theta}


_PULSE_LABELS = (
    "X_a0", "P_a0", "X_L0", "Y_L0", "X_0f1", "Y_0k", "Y_0f1",
    "x_c", "p_c", "x_v", "p_v",
)


def _pulse_overlaps(c: PulseGateConstants) -> dict[tuple[str, str], float]:
    return {
        ("X_L0", "X_0f1"): c.Kf1 / c.L1,
        ("Y_L0", "Y_0k"): c.Kf / c.K1,
        ("Y_L0", "Y_0f1"): c.Kf1 / c.L1,
        ("Y_0k", "Y_0f1"): c.Kff1 / (c.L1 * c.K1),
    }


def build_atom_light_gate(params: AtomLightParams) -> GateModel:
    """Atomic ensemble (mode a) entangled with a traveling pulse (mode b)."""
    c = atom_light_constants(params.kappa_tau)
    A, gains = _pulse_rows(params.g_over_kappa, params.kappa_tau, params.eta, c, 11)
    basis = orthogonalize_noise_modes(_PULSE_LABELS, _pulse_overlaps(c))
    return GateModel("atom_light", A, basis, gains, constants=c)


def build_optomech_gate(params: OptomechParams) -> GateModel:
    """Mechanical oscillator (mode a) entangled with a traveling pulse
    (mode b), with rethermalization forces at rate Γ = γ·n_th."""
    g, tau, eta, Gamma = (
        params.g_over_kappa, params.kappa_tau, params.eta, params.Gamma_over_kappa,
    )
    c = atom_light_constants(tau)
    A, gains = _pulse_rows(g, tau, eta, c, 14)
    A[0, 11] = math.sqrt(2.0 * Gamma * tau)
    A[1, 12] = math.sqrt(2.0 * Gamma * tau)
    A[2, 13] = math.sqrt(eta) * math.sqrt(2.0 * Gamma) * g * c.M
    labels = _PULSE_LABELS + ("zeta_XM", "zeta_PM", "zeta_XMf")
    overlaps = _pulse_overlaps(c)
    overlaps[("zeta_XM", "zeta_XMf")] = c.M1 / (math.sqrt(tau) * c.M)
    basis = orthogonalize_noise_modes(labels, overlaps)
    return GateModel("optomech", A, basis, gains, constants=c)


_ATOM_MECH_LABELS = (
    "X_A0", "P_A0", "X_M0", "P_M0",
    "X_in", "X_in_f", "P_in",
    "x_vac", "p_vac",
    "x_c", "p_c", "x_cp", "p_cp",
    "zeta_XM", "zeta_PM", "zeta_XMf",
)


def build_atom_mech_gate(params: AtomMechParams, convention: str = "squeeze_p") -> GateModel:
    """Symmetric atom-mechanical gate mediated by a light pulse.

    Subsystem a is the atomic ensemble, b the mechanical oscillator;
    after feedforward both cross gains equal 𝔊 = 2·gA·gM·√η·E(τ)
    (equivalently gA·gM·√η·τ·[1+e^{-τ}-(2/τ)(1-e^{-τ})]).  The mediator
    pulse enters through the temporal modes X_in, X_in_f, P_in, which
    carry the initial squeezing.
    """
    gA, gM = params.gA_over_kappa, params.gM_over_kappa
    tau, eta, Gamma = params.kappa_tau, params.eta, params.Gamma_over_kappa
    c = atom_mech_constants(tau)
    em = math.exp(-tau)
    gain = 2.0 * gA * gM * math.sqrt(eta) * c.E
    # feedforward gain; gA makes the two signal gains exactly equal
    Kf = math.sqrt(2.0 * eta * tau) * gA * c.E / (tau - 1.0 + em)
    A = np.zeros((4, 16))
    A[0, 0] = 1.0
    A[0, 2] = gain
    A[0, 4] = -math.sqrt(2.0) * gA / c.K2
    A[0, 5] = (Kf / c.K5) * math.sqrt(eta / tau)
    A[0, 7] = (Kf / c.K1) * math.sqrt((1.0 - eta) / tau)
    A[0, 9] = Kf * math.sqrt(2.0 * eta / tau) * (1.0 - em * (2.0 * tau + 1.0)) - gA * (1.0 - em)
    A[0, 11] = Kf * math.sqrt(2.0 / tau) * (1.0 - em)
    A[0, 15] = (gM * Kf / c.K3) * math.sqrt(4.0 * Gamma / tau)
    A[1, 1] = 1.0
    A[2, 2] = 1.0
    A[2, 13] = math.sqrt(2.0 * Gamma * tau)
    A[3, 3] = 1.0
    A[3, 1] = -gain
    A[3, 6] = -math.sqrt(2.0 * eta) * gM / c.K6
    A[3, 8] = -gM * math.sqrt(2.0 * (1.0 - eta)) / c.K2
    A[3, 10] = -2.0 * math.sqrt(eta) * gM * (1.0 - em * (1.0 + tau))
    A[3, 12] = -gM * (1.0 - em)
    A[3, 14] = math.sqrt(2.0 * Gamma * tau)
    overlaps = {
        ("X_in", "X_in_f"): c.K2 * c.K5 * c.K7,
        ("zeta_XM", "zeta_XMf"): c.K3 * c.K4 / math.sqrt(tau),
    }
    basis = orthogonalize_noise_modes(
        _ATOM_MECH_LABELS,
        overlaps,
        mediator_x=("X_in", "X_in_f"),
        mediator_p=("P_in",),
    )
    if params.squeezing_db > 0.0:
        basis = apply_squeezing(basis, params.squeezing_db, convention)
    slots = {"a": (0, 1), "b": (2, 3), "mediator": (4, 5, 6)}
    return GateModel(
        "atom_mech", A, basis,
        gains={"gain": gain, "K_f": Kf},
        constants=c,
        signal_slots=slots,
    )
