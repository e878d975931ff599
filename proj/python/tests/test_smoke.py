import numpy as np
import pytest

import icr_sparse as icr


def test_rho_matches_closed_form():
    kappa = np.array([0.01, 0.05])
    sigma, lam = 0.01, 0.1
    expect = sigma**2 * np.log(2 * np.pi * sigma**2 * (1 - kappa) ** 2 / (lam * kappa**2))
    np.testing.assert_allclose(icr.compute_rho(kappa, lam, sigma), expect, rtol=1e-12)


def test_identity_design_recovers_single_coordinate():
    A = np.eye(4)
    y = np.array([1.0, 0.0, 0.0, 0.0])
    sol = icr.icr_solve(A, y, sigma=0.01, kappa=0.01, lam=0.1)
    assert sol["converged"]
    assert sol["support"] == [0]
    assert abs(sol["x"][0] - 1 / 1.1) < 1e-3
    oracle = icr.global_map(A, y, sigma=0.01, kappa=0.01, lam=0.1)
    assert oracle["support"] == [0]
    assert oracle["cost"] <= sol["cost"] + 1e-12


def test_generate_is_deterministic():
    a1, y1, x1 = icr.generate(32, 16, 3, 0.01, 7)
    a2, y2, x2 = icr.generate(32, 16, 3, 0.01, 7)
    assert np.array_equal(a1, a2) and np.array_equal(y1, y2) and np.array_equal(x1, x2)
    np.testing.assert_allclose(np.linalg.norm(a1, axis=0), 1.0, atol=1e-12)
    assert np.count_nonzero(x1) == 3


def test_elastic_net_orthonormal_closed_form():
    q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((5, 5)))
    y = np.random.default_rng(1).standard_normal(5)
    z = q.T @ y
    expect = np.sign(z) * np.maximum(np.abs(z) - 0.15, 0) / 1.2
    np.testing.assert_allclose(icr.elastic_net(q, y, 0.3, 0.2), expect, atol=1e-7)


def test_metrics():
    assert icr.mse(np.array([1.0, 0, 0, 0]), np.zeros(4)) == 0.25
    assert icr.support_match(np.array([1.0, 0, 0, 0]), np.array([0, 1.0, 0, 0])) == 50.0


def test_errors_surface_as_exceptions():
    with pytest.raises(icr.IcrError, match="NonSparsifyingPrior"):
        icr.icr_solve(np.eye(2), np.ones(2), sigma=0.01, kappa=0.5, lam=0.1)
    with pytest.raises(icr.IcrError):
        icr.icr_solve(np.eye(2), np.ones(3), sigma=0.01, kappa=0.01)


def test_bench_from_config_text():
    csv = icr.run_synth_bench_csv("p = 10\nq = 6\nk = 2\nrealizations = 2\n")
    lines = csv.strip().splitlines()
    assert lines[0].startswith("realization,seed,method")
    assert len(lines) == 1 + 2 * 4
