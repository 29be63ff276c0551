import math
from dataclasses import replace

import numpy as np
import pytest

from tlmodes import oracle
from tlmodes.effective import CoupledSpec, build_h3, effective_kerr, sweep_eta
from tlmodes.errors import IdentificationFailureError, NonConvergenceError

TWO_PI = 2 * math.pi
UNCOUPLED = CoupledSpec(
    omega3=TWO_PI * 7.23e9,
    k33=-TWO_PI * 0.29e6,
    omega10_1=TWO_PI * 6.39e9,
    omega10_2=TWO_PI * 5.28e9,
    g3_1=0.0,
    g3_2=0.0,
    g12=0.0,
)


def test_h3_structure():
    h = build_h3(UNCOUPLED)
    assert h.shape == (4 * 13, 4 * 13)
    coupled = replace(UNCOUPLED, g3_1=TWO_PI * 1e8, g3_2=TWO_PI * 5e7, g12=TWO_PI * 2e7)
    h = build_h3(coupled)
    np.testing.assert_array_equal(h, h.T)


@pytest.mark.parametrize("reference", ["label", "ground"])
def test_uncoupled_limit_is_bare_kerr(reference):
    r = effective_kerr(UNCOUPLED, reference)
    assert r.k_tilde == pytest.approx(UNCOUPLED.k33, rel=1e-12)
    assert r.omega_tilde == pytest.approx(UNCOUPLED.omega3 + 0.5 * UNCOUPLED.k33, rel=1e-14)
    assert r.overlaps == (1.0, 1.0, 1.0)


@pytest.mark.parametrize("reference, index", [("label", 0), ("ground", 3)])
def test_dispersive_limit_against_perturbation_theory(reference, index):
    spec = replace(UNCOUPLED, g3_1=TWO_PI * 40e6, g3_2=TWO_PI * 30e6, g12=-TWO_PI * 10e6)
    r = effective_kerr(spec, reference)
    ref = oracle.perturbative_kerr(
        spec.omega3, spec.k33, spec.omega10_1, spec.omega10_2, spec.g3_1, spec.g3_2, spec.g12, 12, index // 3
    )
    assert r.k_tilde == pytest.approx(ref, rel=0.1)
    assert r.k_tilde != pytest.approx(spec.k33, rel=1e-3)


def test_cutoff_convergence(twoqubit_coupled):
    spec = twoqubit_coupled.spec
    a = effective_kerr(replace(spec, fock_cutoff=10))
    b = effective_kerr(replace(spec, fock_cutoff=14))
    assert a.k_tilde == pytest.approx(b.k_tilde, rel=1e-3)


def test_non_convergence_detected(twoqubit_coupled):
    with pytest.raises(NonConvergenceError):
        effective_kerr(replace(twoqubit_coupled.spec, fock_cutoff=6), rtol=1e-15)


def test_identification_failure_on_resonance():
    # both qubits resonant with the mode spread |2,g,g> over several dressed states
    w = UNCOUPLED.omega3
    spec = replace(UNCOUPLED, omega10_1=w, omega10_2=w, g3_1=TWO_PI * 0.2e9, g3_2=TWO_PI * 0.2e9)
    with pytest.raises(IdentificationFailureError, match="overlap"):
        effective_kerr(spec, "ground")


def test_argument_validation():
    with pytest.raises(ValueError):
        effective_kerr(UNCOUPLED, "excited")
    with pytest.raises(ValueError):
        replace(UNCOUPLED, fock_cutoff=4)
    with pytest.raises(ValueError):
        sweep_eta(UNCOUPLED, [-1.0])


def test_sweep_eta_matches_pointwise(twoqubit_coupled):
    spec = twoqubit_coupled.spec
    pts = sweep_eta(spec, [0.0, 1.0, 2.0])
    for eta, ratio in pts:
        r = effective_kerr(replace(spec, g12=eta * spec.g12))
        assert ratio == r.k_tilde / spec.omega3
    assert pts[1][1] == twoqubit_coupled.result.k_tilde / spec.omega3


def test_twoqubit_couplings(twoqubit_coupled):
    g = np.array(twoqubit_coupled.g) / TWO_PI
    np.testing.assert_allclose(g, [-0.5965e9, -0.5904e9], rtol=2e-3)
    assert twoqubit_coupled.g12 / TWO_PI == pytest.approx(-119.1e6, rel=2e-3)
    assert twoqubit_coupled.spec.omega10_1 / TWO_PI == pytest.approx(6.39e9, rel=1e-8)
    assert twoqubit_coupled.spec.omega10_2 / TWO_PI == pytest.approx(5.28e9, rel=1e-8)
