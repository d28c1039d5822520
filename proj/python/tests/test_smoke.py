import json
import math

import numpy as np
import pytest

import nhfermion as nh


def test_params_and_levels():
    p = nh.make_params(0.6)
    assert p.lambda_scale == pytest.approx(1.3114877048604001, rel=1e-15)
    assert p.alpha == pytest.approx(0.49754787397456922, rel=1e-15)
    assert nh.mode_energy(p, 3) == pytest.approx(9 * p.lambda_scale / 4, rel=1e-15)
    assert nh.filled_energy(p, 3) == pytest.approx(15 * p.lambda_scale / 4, rel=1e-15)


def test_matrices_are_numpy():
    p = nh.make_params(0.6)
    h = nh.hamiltonian(p, 6)
    assert isinstance(h, np.ndarray) and h.shape == (6, 6)
    s0, sp, sm = nh.generators(6)
    assert np.array_equal(h, s0 + 0.6 * (sp - sm))
    t0, _, _ = nh.t_operators(p, 6)
    assert np.max(np.abs(t0 - h / p.lambda_scale)) < 1e-15


def test_spectrum_matches_numpy_and_ladder():
    p = nh.make_params(0.6)
    ev = nh.spectrum(p, 100, 6)
    exact = [nh.mode_energy(p, k) for k in range(1, 7)]
    assert np.allclose(ev, exact, rtol=1e-10, atol=0)
    dense = np.sort(np.linalg.eigvals(nh.hamiltonian(p, 100)).real)[:3]
    assert np.allclose(dense, exact[:3], rtol=1e-10)


def test_ground_vectors_and_metric():
    p = nh.make_params(0.6)
    right, left = nh.ground_vectors(p, 60)
    h = nh.hamiltonian(p, 60)
    assert np.linalg.norm(h @ right - p.lambda_scale / 4 * right) < 1e-12
    assert np.linalg.norm(h.T @ left - p.lambda_scale / 4 * left) < 1e-12
    d2, d = nh.metric(nh.make_params(0.0), 10)
    assert np.array_equal(d2, np.eye(10)) and np.array_equal(d, np.eye(10))


def test_checks_report_pass():
    assert nh.check_fock(0.6, 6)["passed"]
    r = nh.check_spectrum([0.6], 60, 4)
    assert r["passed"] and r["line"].startswith("PASS")


def test_thermo_methods_agree_at_high_temperature():
    p = nh.make_params(0.6)
    ex = nh.thermo(p, 0.01, 0.0, "exact")
    em = nh.thermo(p, 0.01, 0.0, "em")
    assert em["method"] == "euler_maclaurin"
    assert abs(em["number"] - ex["number"]) < 1e-3 * ex["number"]
    assert abs(em["energy"] - ex["energy"]) < 1e-3 * ex["energy"]
    assert nh.dilog(-1.0) == pytest.approx(-math.pi**2 / 12, rel=1e-15)


def test_errors_map_to_python_exceptions():
    p = nh.make_params(0.6)
    with pytest.raises(ValueError):
        nh.thermo(p, -1.0, 0.0)
    with pytest.raises(nh.DomainError):
        nh.dilog(2.0)
    with pytest.raises(nh.TruncationError):
        nh.biorthogonal(nh.make_params(1.5), 12, 6, 1e-12)
    with pytest.raises(ValueError):
        nh.conjugate_generator(p, 10, "Sx")


def test_small_figure_roundtrip():
    cfg = {
        "gamma": 0.6,
        "beta_list": [0.1],
        "mu_list": [0.0],
        "mu_sweep": {"min": -2.0, "max": 2.0, "count": 5},
        "n_max": 3,
        "method": "exact",
    }
    text = json.dumps(cfg)
    csv = nh.figure_csv(text)
    lines = csv.strip().split("\n")
    assert lines[0] == "method,gamma,beta,mu,zeta_prime,log_z,energy,number,entropy"
    # one beta: the default beta sweep of the fixed-mu curve collapses to that point
    assert len(lines) == 1 + 5 + 1
    assert csv == nh.figure_csv(text)
    data = json.loads(nh.figure_json(text))
    assert data["containment"]["passed"]
    assert json.loads(nh.default_figure_config())["gamma"] == 0.6
