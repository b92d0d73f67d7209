"""Acceptance suite: ten handwritten criteria, one test per criterion.

Each test prints as one pass/fail line under ``pytest -v``.  The
criteria encode external landmark values; where a landmark is not
reproducible from the implemented physics the test is left to fail
honestly rather than being loosened (see the repository README).
"""

import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from qnd_hom.fock import (
    FockBasisSpec,
    QND_11_ARGMAX,
    build_bs_unitary,
    build_qnd_unitary,
    closed_form_bs_11,
    closed_form_qnd_00,
    closed_form_qnd_11,
    fock_state,
    hom_element_exact,
    hom_element_mixture_ideal,
)
from qnd_hom.gates import (
    AtomLightParams,
    AtomMechParams,
    OptomechParams,
    build_atom_light_gate,
    build_atom_mech_gate,
    build_optomech_gate,
)
from qnd_hom.gaussian import bs_matrix, is_symplectic, min_physicality_eig, qnd_matrix
from qnd_hom.metrics import InputSpec, hom_element_for_gate, hom_element_ideal_via_wigner
from qnd_hom.modes import gram_cholesky
from qnd_hom.sweep import SweepConfig, build_model, find_optimum, render_csv, run_sweep
from qnd_hom.thresholds import find_crossing, input_threshold, verify_output_threshold


def test_criterion_01_oracle_identity():
    # |hom_element_exact − closed_form| ≤ 1e−8 for 31 gains in [0,3], N=60
    basis = FockBasisSpec(60)
    state11 = fock_state(basis, 1, 1)
    state00 = fock_state(basis, 0, 0)
    for G in np.linspace(0.0, 3.0, 31):
        U = build_qnd_unitary(float(G), basis)
        assert abs(hom_element_exact(U, state11) - closed_form_qnd_11(G)) <= 1e-8
        assert abs(hom_element_exact(U, state00) - closed_form_qnd_00(G)) <= 1e-8


def test_criterion_02_ideal_maximum():
    # maximize closed_form_qnd_11: G = √(11−√105) ± 1e−6, value 0.2600 ± 5e−4
    res = minimize_scalar(
        lambda G: -closed_form_qnd_11(G), bounds=(0.0, 3.0), method="bounded",
        options={"xatol": 1e-10},
    )
    g_star, value = float(res.x), -float(res.fun)
    assert abs(g_star - math.sqrt(11.0 - math.sqrt(105.0))) <= 1e-6
    assert abs(value - 0.2600) <= 5e-4


def test_criterion_03_bs_benchmark():
    # balanced beam splitter: closed form exactly 1; oracle 1 ± 1e−8
    assert closed_form_bs_11(0.5) == 1.0
    basis = FockBasisSpec(24)
    U = build_bs_unitary(math.asin(math.sqrt(0.5)), basis)
    assert abs(hom_element_exact(U, fock_state(basis, 1, 1)) - 1.0) <= 1e-8


def test_criterion_04_output_threshold():
    # brute-force coherent maximization returns e^{−2} ± 1e−4
    val = verify_output_threshold(grid_points=200, amplitude_max=4.0)
    assert abs(val - math.exp(-2.0)) <= 1e-4


def test_criterion_05_engine_equivalence():
    # Gaussian engine at n=1e−3 matches the closed forms within 1e−3
    for G in (0.3, 0.87, 2.0):
        for p in (0.0, 0.5, 1.0):
            expected = hom_element_mixture_ideal(G, p, p)
            got = hom_element_ideal_via_wigner(G, p, p, n=1e-3)
            assert abs(got - expected) <= 1e-3, (G, p)


def test_criterion_06_crossing_fractions():
    # max-over-G mixture element reaches e^{−2} at p* ∈ [0.68, 0.74]
    def best_over_gain(p):
        res = minimize_scalar(
            lambda G: -hom_element_mixture_ideal(G, p, p),
            bounds=(0.0, 3.0), method="bounded",
        )
        return -float(res.fun)

    p_star = find_crossing(best_over_gain, math.exp(-2.0), 0.3, 1.0)
    assert p_star is not None
    assert 0.68 <= p_star <= 0.74

    # at G = 0.87 the mixture crosses the input threshold at p ∈ [0.45, 0.52]
    G = 0.87
    thr = input_threshold(G).value
    p_cross = find_crossing(lambda p: hom_element_mixture_ideal(G, p, p), thr, 0.0, 1.0)
    assert p_cross is not None
    assert 0.45 <= p_cross <= 0.52


def test_criterion_07_atom_light_landmark():
    # κτ=100, η=0.9: maximum 0.25 ± 0.02 at g = 0.06 ± 0.01, and the
    # p=0.78 maximum equals e^{−2} ± 0.01
    fixed = {"kappa_tau": 100.0, "eta": 0.9}
    full = find_optimum("atom-light", fixed, {"g": (0.02, 0.15)}, p=1.0, grid=21)
    assert abs(full.argmax["g"] - 0.06) <= 0.01
    assert abs(full.value - 0.25) <= 0.02
    partial = find_optimum("atom-light", fixed, {"g": (0.02, 0.15)}, p=0.78, grid=21)
    assert abs(partial.value - math.exp(-2.0)) <= 0.01


def test_criterion_08_optomech_reheating():
    # κτ=100, η=0.9: the Γ=1e−4 maximum strictly exceeds the Γ=1e−3 one
    quiet = find_optimum(
        "optomech", {"kappa_tau": 100.0, "eta": 0.9, "Gamma": 1e-4},
        {"g": (0.02, 0.15)}, grid=15,
    )
    noisy = find_optimum(
        "optomech", {"kappa_tau": 100.0, "eta": 0.9, "Gamma": 1e-3},
        {"g": (0.02, 0.15)}, grid=15,
    )
    assert quiet.value > noisy.value

    # at Γ=0.02, η=1 the element stays below the input threshold for all g
    for g in np.linspace(0.01, 0.2, 9):
        model = build_model(
            "optomech", {"g": float(g), "kappa_tau": 100.0, "eta": 1.0, "Gamma": 0.02}
        )
        element = hom_element_for_gate(model, InputSpec(1.0, 1.0)).value
        threshold = input_threshold(model).value
        assert element < threshold, g


def test_criterion_09_atom_mech_optimum():
    # η=0.9, Γ=1e−4, S=7dB: 2-D optimum over (g, κτ) within
    # [0.055, 0.09] × [70, 110]
    best = find_optimum(
        "atom-mech", {"eta": 0.9, "Gamma": 1e-4, "S": 7.0},
        {"g": (0.02, 0.2), "kappa_tau": (20.0, 300.0)}, grid=9,
    )
    assert 70.0 <= best.argmax["kappa_tau"] <= 110.0
    assert 0.055 <= best.argmax["g"] <= 0.09

    # the optimal squeezing is interior and ≤ 10 dB; S=7 beats S=0
    s_best = find_optimum(
        "atom-mech", {"g": 0.07, "kappa_tau": 90.0, "eta": 0.9, "Gamma": 1e-4},
        {"S": (0.0, 14.0)}, grid=15,
    )
    assert s_best.interior
    assert s_best.argmax["S"] <= 10.0
    v7 = hom_element_for_gate(
        build_atom_mech_gate(AtomMechParams(0.07, 0.07, 90.0, 0.9, 1e-4, 7.0)),
        InputSpec(1.0, 1.0),
    ).value
    v0 = hom_element_for_gate(
        build_atom_mech_gate(AtomMechParams(0.07, 0.07, 90.0, 0.9, 1e-4, 0.0)),
        InputSpec(1.0, 1.0),
    ).value
    assert v7 > v0


def test_criterion_10_property_suites():
    # deterministic re-statement of the property suites' invariants

    # symplectic / physicality
    for G in np.linspace(-3.0, 3.0, 13):
        assert is_symplectic(qnd_matrix(float(G)))
    for T in np.linspace(0.0, 1.0, 7):
        assert is_symplectic(bs_matrix(float(T)))
    models = [
        build_atom_light_gate(AtomLightParams(0.06, 100.0, 0.9)),
        build_optomech_gate(OptomechParams(0.06, 100.0, 0.9, 1e-3)),
        build_atom_mech_gate(AtomMechParams(0.07, 0.07, 90.0, 0.9, 1e-4, 7.0)),
    ]
    for model in models:
        assert min_physicality_eig(model.vacuum_output_cov) > -1e-9

    # parity and symmetric-state null (Fock oracle)
    basis = FockBasisSpec(20)
    for G in (0.5, 1.3):
        U = build_qnd_unitary(G, basis)
        assert hom_element_exact(U, fock_state(basis, 1, 0)) < 1e-20
        assert hom_element_exact(U, fock_state(basis, 1, 1), sign=+1.0) < 1e-18

    # bilinearity and exchange symmetry of the Gaussian engine
    n = 0.05
    f = lambda a, b: hom_element_ideal_via_wigner(0.9, a, b, n=n, extrapolate=False)
    lhs = f(0.6, 0.3)
    rhs = (
        0.6 * 0.3 * f(1, 1) + 0.6 * 0.7 * f(1, 0)
        + 0.4 * 0.3 * f(0, 1) + 0.4 * 0.7 * f(0, 0)
    )
    assert abs(lhs - rhs) < 1e-10
    assert abs(f(0.8, 0.2) - f(0.2, 0.8)) < 1e-10

    # Gram reconstruction of correlated temporal modes to 1e−12
    for name, params in (
        ("atom-light", AtomLightParams(0.06, 100.0, 0.9)),
        ("atom-mech", AtomMechParams(0.07, 0.07, 90.0, 0.9, 1e-4, 0.0)),
    ):
        builder = build_atom_light_gate if name == "atom-light" else build_atom_mech_gate
        basis_obj = builder(params).basis
        gram = basis_obj.transform @ basis_obj.transform.T
        C = gram_cholesky(gram, basis_obj.labels)
        assert np.abs(C @ C.T - gram).max() < 1e-12

    # byte-identical sweep output at jobs ∈ {1, 8}
    def csv_at(jobs):
        config = SweepConfig(
            gate="ideal", sweep_param="G", start=0.0, stop=2.0, points=24,
            p_values=(1.0, 0.7), with_input_threshold=False, jobs=jobs,
        )
        return render_csv(run_sweep(config))

    assert csv_at(1) == csv_at(8)
