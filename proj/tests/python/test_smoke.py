"""End-to-end sanity checks of the python bindings."""

import numpy as np
import pytest

import envsdr


def test_generate_shapes_and_determinism():
    y1, x1, w1 = envsdr.generate("m1", n=150, p=9, a=1.0, b=0.1, seed=11)
    y2, x2, w2 = envsdr.generate("m1", n=150, p=9, a=1.0, b=0.1, seed=11)
    assert x1.shape == (150, 9)
    assert w1.shape == (150, 1)
    assert y1.shape == (150,)
    np.testing.assert_array_equal(x1, x2)
    np.testing.assert_array_equal(y1, y2)
    np.testing.assert_array_equal(w1, w2)
    y3, _, _ = envsdr.generate("m1", n=150, p=9, a=1.0, b=0.1, seed=12)
    assert not np.array_equal(y1, y3)


def test_standardize_whitens():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(400, 4)) * np.array([1.0, 5.0, 0.2, 2.0])
    out = envsdr.standardize(x)
    z = out["z"]
    assert np.abs(z.mean(axis=0)).max() < 1e-10
    cov = z.T @ z / (len(z) - 1)
    assert np.abs(cov - np.eye(4)).max() < 1e-8


def test_bic_rank_reference_values():
    vals = np.array([2.0, 2.0, 0.0, 0.0])
    assert envsdr.bic_rank(vals, 150, 150 ** 0.25, penalty="ambient") == 2
    assert envsdr.bic_rank(vals, 150, 150 ** 0.25, penalty="triangular") == 2
    spike = np.array([3.0, 0.0, 0.0, 0.0, 0.0])
    assert envsdr.bic_rank(spike, 150, 150 ** 0.25) == 1


def test_trace_correlation_rotation_invariance():
    rng = np.random.default_rng(1)
    b1, _ = np.linalg.qr(rng.normal(size=(6, 2)))
    b2, _ = np.linalg.qr(rng.normal(size=(6, 2)))
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    base = envsdr.trace_correlation(b1, b2)
    assert 0.0 <= base <= 1.0
    assert abs(base - envsdr.trace_correlation(b1 @ q, b2)) < 1e-10
    assert envsdr.trace_correlation(b1, b1) == pytest.approx(1.0)


def test_direct_estimate_recovers_regression_direction():
    y, x, w = envsdr.generate("m1", n=2000, p=9, a=0.0, b=0.3, seed=555)
    ks = envsdr.kernels(y, x, w, h_y=10, h_w=3, h_inner=3)
    est = envsdr.direct_estimate(ks["k_y"], 1, ks["sigma_inv_sqrt"])
    truth = envsdr.truth_bases("m1", p=9, a=0.0, b=0.3)
    assert envsdr.trace_correlation(est["basis_x"], truth["s_yx"]) >= 0.95


def test_two_stage_pipeline_runs():
    y, x, w = envsdr.generate("m1", n=150, p=9, a=1.0, b=0.1, seed=77)
    ks = envsdr.kernels(y, x, w, h_y=10, h_w=2, h_inner=3)
    k_env = envsdr.hybrid_kernel(ks["k_w"], ks["k_partial"], 0.5)
    b_env = envsdr.envelope_basis(k_env, 2)
    est = envsdr.two_stage_estimate(ks["k_y"], b_env, 1, ks["sigma_inv_sqrt"])
    basis = est["basis_z"]
    assert basis.shape == (9, 1)
    assert np.abs(basis.T @ basis - 1.0).max() < 1e-10
    # the estimate lies inside the envelope it was given
    resid = basis - b_env @ (b_env.T @ basis)
    assert np.abs(resid).max() < 1e-10


def test_select_dimensions_on_easy_data():
    y, x, w = envsdr.generate("m1", n=2000, p=9, a=1.0, b=0.3, seed=4242)
    sel = envsdr.select_dimensions(y, x, w, h_y=10, h_w=3, h_inner=3)
    assert sel["d"] == 1
    assert sel["d_env"] >= 2
    assert len(sel["xi_grid"]) == 41
    assert all(dk <= de for dk, de in zip(sel["d_by_xi"], sel["d_env_by_xi"]))


def test_qda_and_tuning():
    rng = np.random.default_rng(3)
    f = np.concatenate([rng.normal(-4, 1, size=(30, 1)), rng.normal(4, 1, size=(30, 1))])
    labels = [1] * 30 + [2] * 30
    assert envsdr.qda_loo_accuracy(f, labels) == pytest.approx(1.0)

    y, x, w = envsdr.generate("m1", n=150, p=9, a=1.0, b=0.1, seed=31)
    rep = envsdr.tune_by_bootstrap(y, x, w, nu_range=[2, 3], xi_grid=[0.3, 0.7],
                                   d=1, m=8, seed=9, h_y=10, h_w=2, h_inner=3)
    assert rep["nu"] in (2, 3)
    assert rep["xi"] in (0.3, 0.7)
    assert len(rep["candidates"]) == 4
    rep2 = envsdr.tune_by_bootstrap(y, x, w, nu_range=[2, 3], xi_grid=[0.3, 0.7],
                                    d=1, m=8, seed=9, h_y=10, h_w=2, h_inner=3)
    assert rep["candidates"] == rep2["candidates"]


def test_errors_surface_as_toolkit_error():
    with pytest.raises(envsdr.ToolkitError):
        envsdr.bic_rank(np.zeros(3), 100, 3.0)
    with pytest.raises(envsdr.ToolkitError):
        envsdr.read_csv("_no_such_file.csv", "y", ["x1"])
