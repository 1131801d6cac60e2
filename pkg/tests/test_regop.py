import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from structpista.boundary import BlurOperator
from structpista.imagecore import Psf
from structpista.regop import (
    H_FLOOR,
    DegenerateOperatorError,
    RegKind,
    RegWeights,
    h_weights,
    lambda_weights,
)


def test_h_at_max_frequency():
    u = np.array([[2.0, 1.0], [0.5, 0.0]])
    w = h_weights(u).w
    assert w[0, 0] == H_FLOOR
    assert w[1, 1] == pytest.approx(1.0 + H_FLOOR)


def test_h_delta_psf():
    np.testing.assert_array_equal(h_weights(np.ones((4, 4))).w, H_FLOOR)


def test_h_half_power():
    u = np.array([[2.0, 1.0 + 1.0j]])  # |u|^2 = 4 and 2
    w = h_weights(u).w
    assert w[0, 1] == 0.0625 + H_FLOOR


def test_h_degenerate():
    with pytest.raises(DegenerateOperatorError):
        h_weights(np.zeros((3, 3)))


@settings(max_examples=50, deadline=None)
@given(arrays(np.complex128, (6, 6), elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False)))
def test_h_weights_within_bounds(u):
    if np.abs(u).max() == 0:
        return
    rw = h_weights(u)
    assert np.all(rw.w >= rw.c1) and np.all(rw.w <= rw.c2)
    assert rw.kind is RegKind.HFUNCTION


@pytest.mark.parametrize("scale", [1e-300, 1e200])
def test_h_weights_scale_invariant(scale):
    rng = np.random.default_rng(5)
    u = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    assert np.allclose(h_weights(u * scale).w, h_weights(u).w, rtol=1e-12, atol=0)


def test_h_weights_subnormal():
    rng = np.random.default_rng(6)
    re, im = np.ldexp(rng.standard_normal((2, 6, 6)), -1060)
    # scaling a subnormal up by a power of two is exact
    up = np.ldexp(re, 1060) + 1j * np.ldexp(im, 1060)
    np.testing.assert_array_equal(h_weights(re + 1j * im).w, h_weights(up).w)


def test_lambda_weights():
    rw = lambda_weights(4)
    assert rw.kind is RegKind.LAMBDA and rw.c1 == 0 and rw.c2 == 64
    assert rw.w[0, 0] == 0
    ref = np.array([[(4 - 2 * np.cos(np.pi * i / 2) - 2 * np.cos(np.pi * j / 2)) ** 2
                     for j in range(4)] for i in range(4)])
    np.testing.assert_allclose(rw.w, ref, atol=1e-12)
    idx = (-np.arange(4)) % 4
    np.testing.assert_allclose(rw.w, rw.w[np.ix_(idx, idx)], atol=1e-12)


@pytest.mark.parametrize("bc", ["zero", "periodic", "reflective", "antireflective"])
def test_kernel_condition(bc):
    # constants span Ker(Lambda); a PSF of nonzero mass does not annihilate them
    op = BlurOperator(Psf(np.full((3, 3), 1 / 9)), bc, 8)
    assert np.linalg.norm(op.apply(np.ones((8, 8)))) > 0
    w = lambda_weights(8).w
    assert w[0, 0] == 0 and np.all(w.ravel()[1:] > 0)


def test_normalized():
    rw = lambda_weights(6).normalized()
    assert rw.w.max() == 1.0 and rw.c2 == 1.0
    h = h_weights(np.array([[1.0, 0.5], [0.0, 0.2]])).normalized()
    assert h.w.max() == 1.0
    assert h.c == pytest.approx(h_weights(np.array([[1.0, 0.5], [0.0, 0.2]])).c)
    with pytest.raises(DegenerateOperatorError):
        RegWeights(np.zeros((2, 2)), 0.0, 1.0, RegKind.LAMBDA).normalized()


def test_validation():
    with pytest.raises(ValueError):
        RegWeights(-np.ones((2, 2)), 0.0, 1.0, RegKind.LAMBDA)
    with pytest.raises(ValueError):
        RegWeights(np.ones((2, 2)), 0.0, 1.0, RegKind.HFUNCTION)
