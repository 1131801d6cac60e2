from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from structpista.boundary import BlurOperator
from structpista.framelet import analysis, frame_norm_bound, synthesis
from structpista.imagecore import NoiseSpec, Psf, add_noise
from structpista.metrics import rre
from structpista.pista import (
    SolverConfig,
    regularization_weights,
    run_aitgp,
    run_ista,
    run_pista,
    run_struct_pista,
    soft_threshold,
)
from structpista.regop import RegKind
from structpista.scenes import gaussian_psf, motion_psf, synthetic_scene
from structpista.spectral import psf_eigenvalues


def problem(m=32, psf=None, percent=1.0, bc="periodic", seed=7):
    psf = psf or gaussian_psf(7, (1.5, 1.5))
    f_true = synthetic_scene(m, 1)
    g, delta = add_noise(BlurOperator(psf, bc, m).apply(f_true), NoiseSpec(percent, seed))
    return g, f_true, psf, delta


def test_soft_threshold_values():
    np.testing.assert_allclose(soft_threshold([1.0, -0.3, -2.0], 0.5), [0.5, 0.0, -1.5])
    v = np.array([0.2, -3.0])
    np.testing.assert_array_equal(soft_threshold(v, 0.0), v)
    with pytest.raises(ValueError):
        soft_threshold(v, -1.0)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, 30, elements=st.floats(-100, 100)), st.floats(0, 10))
def test_soft_threshold_shift_bound(v, mu):
    out = soft_threshold(v, mu)
    assert np.max(np.abs(out - v)) <= mu + 1e-12
    assert np.all(np.abs(out) <= np.abs(v))


def test_config_windows():
    with pytest.raises(ValueError):
        SolverConfig(rho=0.5)
    with pytest.raises(ValueError):
        SolverConfig(rho=0.2, q=0.3)
    with pytest.raises(ValueError):
        SolverConfig(q=1.0)
    with pytest.raises(ValueError):
        SolverConfig(mu=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(reg_kind="lambda", c1_scaling=True)
    cfg = SolverConfig(rho=0.1)
    assert cfg.tau(regularization_weights(np.ones((4, 4)), cfg)) == pytest.approx(1.2 / 0.8)


def test_discrepancy_gate_returns_initial_iterate():
    g, _, psf, delta = problem()
    cfg = SolverConfig(delta=1e6, mu=0.01, bc="periodic")
    f, state = run_pista(g, psf, cfg)
    assert state.n == 0 and state.status == "discrepancy"
    np.testing.assert_allclose(f, synthesis(soft_threshold(analysis(g), 0.01)), atol=1e-14)


@pytest.mark.parametrize("kind", ["h", "lambda"])
def test_small_noise_reaches_discrepancy(kind):
    m = 32
    psf = gaussian_psf(5, (1.0, 1.0))
    f_true = synthetic_scene(m, 2)
    g, delta = add_noise(BlurOperator(psf, "periodic", m).apply(f_true), NoiseSpec(1e-4, 3))
    cfg = SolverConfig(delta=delta, bc="periodic", reg_kind=kind, max_iter=2000)
    f, state = run_pista(g, psf, cfg)
    assert state.status == "discrepancy"
    assert state.residual_norm <= state.tau * delta
    assert rre(f, f_true) < rre(g, f_true)


@pytest.mark.parametrize("kind", ["h", "lambda"])
def test_error_decreases_monotonically(kind):
    # K = C with mu below rho delta / |||B|||: the coefficient error cannot grow
    g, f_true, psf, delta = problem(psf=motion_psf(9))
    cfg = SolverConfig(delta=delta, bc="periodic", reg_kind=kind, rho=0.01, q=0.9)
    bound = frame_norm_bound(BlurOperator(psf, "periodic", 32))
    cfg = replace(cfg, mu=cfg.rho * delta / bound)
    x_true = analysis(f_true)
    errs = []
    _, state = run_pista(g, psf, cfg, callback=lambda s: errs.append(np.linalg.norm(x_true - s.z)))
    assert state.status == "discrepancy" and state.n >= 2
    assert np.all(np.diff(errs) <= 1e-10)


@pytest.mark.parametrize("kind", ["h", "lambda"])
def test_struct_matches_spectral_under_periodic(kind):
    g, _, psf, delta = problem(psf=motion_psf(9), percent=0.1)
    cfg = SolverConfig(delta=delta, bc="periodic", reg_kind=kind, mu=1e-4, max_iter=30)
    a, b = [], []
    run_pista(g, psf, cfg, callback=lambda s: a.append(s.z.copy()))
    run_struct_pista(g, psf, cfg, callback=lambda s: b.append(s.z.copy()))
    assert len(a) == len(b) > 2
    for za, zb in zip(a, b):
        assert np.max(np.abs(za - zb)) <= 1e-10


def test_struct_differs_under_reflective():
    g, _, psf, delta = problem(psf=motion_psf(9), bc="reflective")
    cfg = SolverConfig(delta=delta, bc="reflective", mu=1e-3, max_iter=3)
    fa, _ = run_pista(g, psf, cfg)
    fb, _ = run_struct_pista(g, psf, cfg)
    assert np.max(np.abs(fa - fb)) > 1e-6


@pytest.mark.parametrize("bc", ["zero", "reflective", "antireflective"])
def test_struct_delta_psf_is_diagonal_filter(bc):
    # identity blur: u = 1 and the h weights are constant, so the structured
    # step is the scalar multiple r / (1 + alpha w)
    g = synthetic_scene(16, 4)
    g_noisy, delta = add_noise(g, NoiseSpec(5.0, 1))
    cfg = SolverConfig(delta=delta, bc=bc, max_iter=1)
    steps = []
    run_struct_pista(g_noisy, Psf.delta(1), cfg, z0=np.zeros((3, 3, 16, 16)),
                     callback=lambda s: steps.append((s.z.copy(), s.alpha_history[:])))
    z1, alphas = steps[-1]
    w = regularization_weights(np.ones((16, 16)), cfg).w[0, 0]
    np.testing.assert_allclose(z1, analysis(g_noisy) / (1 + alphas[0] * w), atol=1e-12)


def test_ista_gate_and_residual_decrease():
    g, f_true, psf, _ = problem(percent=0.0)
    _, state = run_ista(g, psf, SolverConfig(delta=1e6, bc="periodic"))
    assert state.n == 0
    _, state = run_ista(g, psf, SolverConfig(delta=0.0, bc="periodic", max_iter=60))
    assert state.status == "max-iter" and state.n == 60
    assert np.all(np.diff(state.residual_history) <= 1e-13)


def test_aitgp_is_unthresholded_pista_lambda():
    g, _, psf, delta = problem(psf=motion_psf(9), bc="reflective")
    base = SolverConfig(delta=delta, bc="reflective", max_iter=20)
    fa, sa = run_aitgp(g, psf, replace(base, mu=0.5))
    fb, sb = run_pista(g, psf, replace(base, reg_kind=RegKind.LAMBDA))
    np.testing.assert_array_equal(fa, fb)
    assert sa.alpha_history == sb.alpha_history


def test_scaled_update_and_c1_modes_run():
    g, f_true, psf, delta = problem(psf=motion_psf(9))
    f, state = run_pista(g, psf, SolverConfig(delta=delta, bc="periodic", alg2_update_scaled=True))
    assert state.status in ("discrepancy", "max-iter")
    assert np.all(np.isfinite(f))
    # c = c1 / c2 is ~1e-15 for the h weights, so the windows are empty
    with pytest.raises(ValueError):
        run_pista(g, psf, SolverConfig(delta=delta, bc="periodic", c1_scaling=True))


def test_state_histories_are_consistent():
    g, _, psf, delta = problem(psf=motion_psf(9))
    _, state = run_struct_pista(g, psf, SolverConfig(delta=delta, bc="periodic", mu=1e-3))
    assert len(state.residual_history) == state.n + 1
    assert len(state.alpha_history) == len(state.q_history) == state.n
    assert all(q >= 0.5 for q in state.q_history)
    assert all(a > 0 for a in state.alpha_history)


def test_wrong_z0_shape():
    g, _, psf, delta = problem()
    with pytest.raises(ValueError):
        run_pista(g, psf, SolverConfig(delta=delta, bc="periodic"), z0=np.zeros((3, 3, 4, 4)))


def test_eigenvalue_mass_matches_psf():
    psf = motion_psf(9)
    assert psf_eigenvalues(psf, 32)[0, 0].real == pytest.approx(1.0)
