import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_param
from qlct.errors import DegenerateB, GridMismatch, InvalidDeterminant, NonOrthogonalAxes
from qlct.grid import GridSpec2D, delta_field, gaussian_field, lp_norm, random_field, relative_error
from qlct.quaternion import ETA, MU, NU, Quaternion, UnitPureImaginary, qmul
from qlct.transform import (
    FOURIER,
    ParamMatrix,
    TransformSpec,
    kernel_array,
    kernel_eval,
    qft,
    qft_constant,
    qfrft_spec,
    qlct,
    qlct_degenerate,
    qlct_forward_direct,
    qlct_forward_fast,
    qlct_inverse,
)


def slice_value(q):
    """Complex number r + i*mu_c for a quaternion known to lie in H(mu)."""
    return complex(q.r, q.mu_c)


# ------------------------------------------------------------- matrices


def test_determinant_guard():
    with pytest.raises(InvalidDeterminant, match="1, 2, 0, 0.5"):
        ParamMatrix(1, 2, 0, 0.5)
    ParamMatrix(1, 2, 0, 1)


unit = st.floats(-3, 3, allow_nan=False)
nonzero_b = st.floats(0.25, 4).flatmap(lambda b: st.sampled_from([b, -b]))


@given(a=unit, b=nonzero_b, d=unit)
def test_derived_matrices_are_unit_det(a, b, d):
    A = ParamMatrix.from_abd(a, b, d)
    for M in (A.inverse(), A.tilde(), A.breve(), A.hat(), A.check()):
        assert abs(M.det - 1) <= 1e-12 * max(1.0, abs(M.a * M.d), abs(M.b * M.c))
    assert A.inverse().inverse() == A


def test_spec_text_round_trip():
    s = TransformSpec.from_text("0 2 -1/2 2 / 0 2 -1/2 4 / i / j")
    assert s.A1 == ParamMatrix(0, 2, -0.5, 2)
    assert s.A2.d == 4
    assert TransformSpec.from_text(s.to_text()) == s
    opp = TransformSpec.from_text("1 1 0 1\n/ 1 1 0 1 / k / -k  # comment")
    assert opp.kind == "opposite"
    with pytest.raises(InvalidDeterminant, match="A2"):
        TransformSpec.from_text("1 1 0 1 / 1 2 0 0.5")
    with pytest.raises(NonOrthogonalAxes):
        TransformSpec(FOURIER, FOURIER, MU, UnitPureImaginary.from_vector([1, 1, 0], normalize=True))


# --------------------------------------------------------------- kernel


def test_kernel_examples():
    k0 = kernel_eval(FOURIER, MU, 0.0, 0.0)
    # (1/sqrt(2 pi)) * (cos(pi/4) - mu sin(pi/4)) = (1 - mu) / (2 sqrt(pi))
    half = 1 / (2 * math.sqrt(math.pi))
    assert math.isclose(k0.r, half, rel_tol=1e-12)
    assert math.isclose(k0.mu_c, -half, rel_tol=1e-12)
    expected = cmath.exp(-1j * math.pi / 4) * cmath.exp(-1j * math.pi) / math.sqrt(2 * math.pi)
    assert abs(slice_value(kernel_eval(FOURIER, MU, math.pi, 1.0)) - expected) < 1e-14
    with pytest.raises(DegenerateB):
        kernel_eval(ParamMatrix(1, 0, 0, 1), MU, 0.0, 0.0)


@given(x=st.floats(-20, 20), u=st.floats(-20, 20), b=nonzero_b)
def test_kernel_modulus(x, u, b):
    A = ParamMatrix.from_abd(0.7, b, -0.3)
    assert math.isclose(abs(kernel_eval(A, NU, x, u)), 1 / math.sqrt(2 * math.pi * abs(b)), rel_tol=1e-12)


def test_kernel_against_complex_formula():
    A = ParamMatrix(1, 2, 0, 1)
    x, u = 0.3, -1.1
    z = cmath.exp(1j * (A.a * x * x - 2 * x * u + A.d * u * u) / (2 * A.b)) * cmath.exp(-1j * math.pi / 4)
    z /= math.sqrt(2 * math.pi * A.b)
    assert abs(slice_value(kernel_eval(A, MU, x, u)) - z) < 1e-15


# --------------------------------------------------------- forward paths


def test_delta_sifts_to_kernel_product(grid16, orth_spec):
    d = delta_field(grid16)
    out = qlct_forward_fast(d, orth_spec)
    K1 = kernel_array(orth_spec.A1, MU, [0.0], out.spec.x)[0]
    K2 = kernel_array(orth_spec.A2, NU, [0.0], out.spec.y)[0]
    expected = qmul(K1[:, None, :], K2[None, :, :])
    assert np.max(np.abs(out.samples - expected)) < 1e-13
    assert relative_error(qlct_forward_direct(d, orth_spec), expected) < 1e-13


@pytest.mark.parametrize("nu", [NU, ETA, MU, -MU], ids=["j", "k", "same", "opposite"])
def test_fast_matches_direct(grid16, nu):
    rng = np.random.default_rng(7)
    f = random_field(grid16, rng)
    spec = TransformSpec(ParamMatrix(1, 2, 0, 1), FOURIER, MU, nu)
    assert relative_error(qlct_forward_fast(f, spec), qlct_forward_direct(f, spec)) < 1e-12


def test_fast_matches_direct_random_params(grid16):
    rng = np.random.default_rng(11)
    for _ in range(5):
        mu = UnitPureImaginary.from_vector(rng.standard_normal(3), normalize=True)
        w = rng.standard_normal(3)
        nu = UnitPureImaginary.from_vector(w - np.dot(w, mu.vec) * mu.vec, normalize=True)
        spec = TransformSpec(random_param(rng), random_param(rng), mu, nu)
        f = random_field(grid16, rng)
        assert relative_error(qlct_forward_fast(f, spec), qlct_forward_direct(f, spec)) < 1e-10


def test_odd_and_offset_grids():
    rng = np.random.default_rng(3)
    g = GridSpec2D(9, 12, 0.4, 0.7)
    f = random_field(g, rng)
    spec = TransformSpec(ParamMatrix(0.5, -1.5, 2 / 3, 0.0), ParamMatrix(2, 1, 1, 1))
    assert relative_error(qlct_forward_fast(f, spec), qlct_forward_direct(f, spec)) < 1e-12
    off = GridSpec2D(8, 8, 0.5, 0.5, centered=False)
    f2 = random_field(off, rng)
    assert relative_error(qlct_forward_fast(f2, spec), qlct_forward_direct(f2, spec)) < 1e-12


def test_fast_rejects_foreign_grid(grid16, orth_spec):
    f = random_field(grid16, np.random.default_rng(0))
    with pytest.raises(GridMismatch):
        qlct_forward_fast(f, orth_spec, GridSpec2D(16, 16, 0.3, 0.3))
    with pytest.raises(DegenerateB):
        qlct_forward_fast(f, TransformSpec(ParamMatrix(1, 0, 0, 1), FOURIER))


def test_gaussian_closed_form():
    # with the Fourier matrix on both axes and nu = mu the unit Gaussian maps to
    # exp(-mu pi/2) exp(-(u^2 + v^2)/2) = -mu exp(-(u^2 + v^2)/2)
    g = GridSpec2D(32, 32, 0.5, 0.5)
    spec = TransformSpec(FOURIER, FOURIER, MU, MU)
    out = qlct_forward_fast(gaussian_field(g), spec)
    U, V = out.spec.mesh()
    expected = np.zeros(out.samples.shape)
    expected[..., 1] = -np.exp(-(U**2 + V**2) / 2)
    assert np.max(np.abs(out.samples - expected)) < 1e-6


def test_slice_closure(grid16, same_spec):
    f = random_field(grid16, np.random.default_rng(5), slice_valued=True)
    out = qlct_forward_fast(f, same_spec)
    assert np.max(np.abs(out.samples[..., 2:])) < 1e-10


def test_left_linearity_in_slice(grid16, same_spec):
    rng = np.random.default_rng(9)
    f, g = random_field(grid16, rng), random_field(grid16, rng)
    alpha = Quaternion(0.3, -1.2, 0, 0)
    lhs = qlct_forward_fast(f.left_mul(alpha) + g, same_spec)
    rhs = qlct_forward_fast(f, same_spec).left_mul(alpha) + qlct_forward_fast(g, same_spec)
    assert relative_error(lhs, rhs) < 1e-13


def test_energy_preserved(grid16, same_spec):
    f = random_field(grid16, np.random.default_rng(2))
    assert math.isclose(lp_norm(f), lp_norm(qlct_forward_fast(f, same_spec)), rel_tol=1e-12)


# --------------------------------------------------------------- inverse


@pytest.mark.parametrize("A1", [ParamMatrix(1, 1, 0, 1), ParamMatrix(0.5, -2, 0.25, 1), FOURIER])
def test_round_trip_gaussian(A1):
    g = GridSpec2D(32, 32, 0.4, 0.4)
    f = gaussian_field(g, width=0.8, x0=0.4)
    spec = TransformSpec(A1, ParamMatrix(2, 1, 1, 1))
    back = qlct_inverse(qlct_forward_fast(f, spec), spec, g)
    assert relative_error(back.samples[4:-4, 4:-4], f.samples[4:-4, 4:-4]) < 1e-6


def test_round_trip_keeps_peak():
    g = GridSpec2D(24, 24, 0.5, 0.5)
    f = gaussian_field(g, width=0.3, x0=1.5, y0=-1.0)
    spec = TransformSpec(ParamMatrix(1, 1, 0, 1), ParamMatrix(1, -1, 0, 1), MU, NU)
    back = qlct_inverse(qlct_forward_fast(f, spec), spec, g)
    peak = np.unravel_index(np.argmax(back.abs()), g.shape)
    assert (g.x[peak[0]], g.y[peak[1]]) == (1.5, -1.0)


def test_inverse_falls_back_to_direct_grid(grid16, orth_spec):
    f = random_field(grid16, np.random.default_rng(4))
    F = qlct_forward_fast(f, orth_spec)
    other = GridSpec2D(6, 6, 0.3, 0.3)
    out = qlct_inverse(F, orth_spec, other)
    assert out.spec == other


# ------------------------------------------------------------ degenerate


def test_degenerate_identity(grid16):
    f = random_field(grid16, np.random.default_rng(1))
    eye = ParamMatrix(1, 0, 0, 1)
    out = qlct(f, TransformSpec(eye, eye))
    assert np.array_equal(out.samples, f.samples)


def test_degenerate_chirp_and_scale():
    g = GridSpec2D(16, 16, 0.5, 0.5)
    f = gaussian_field(g, width=1.5)
    eye = ParamMatrix(1, 0, 0, 1)
    chirped = qlct_degenerate(f, TransformSpec(ParamMatrix(1, 0, 1, 1), eye))
    X, _ = g.mesh()
    expected = qmul(np.stack([np.cos(X**2 / 2), np.sin(X**2 / 2), 0 * X, 0 * X], -1), f.samples)
    assert np.max(np.abs(chirped.samples - expected)) < 1e-14

    scaled = qlct_degenerate(f, TransformSpec(ParamMatrix(0.5, 0, 0, 2), eye))
    X, Y = g.mesh()
    inside = (2 * X >= g.x[0]) & (2 * X <= g.x[-1])
    direct = math.sqrt(2) * np.exp(-((2 * X) ** 2 + Y**2) / (2 * 1.5**2))
    assert np.max(np.abs(scaled.samples[..., 0] - np.where(inside, direct, 0.0))) < 1e-14


def test_degenerate_mixed_axis_matches_direct_sum(grid16):
    f = random_field(grid16, np.random.default_rng(6))
    eye = ParamMatrix(1, 0, 0, 1)
    out = qlct(f, TransformSpec(eye, FOURIER))
    assert out.spec.dx == grid16.dx
    # only the right axis is transformed: a plain 1-D quaternion sum per row
    K2 = kernel_array(FOURIER, NU, grid16.y, out.spec.y)
    rows = np.array([[sum(qmul(f.samples[i, y], K2[y, v]) for y in range(16)) * grid16.dy
                      for v in range(16)] for i in range(16)])
    assert np.max(np.abs(out.samples - rows)) < 1e-13


# ------------------------------------------------------------- QFT cases


def test_qft_delta_is_one(grid16):
    out = qft(delta_field(grid16))
    assert np.allclose(out.samples[..., 0], 1.0, atol=1e-14)
    assert np.max(np.abs(out.samples[..., 1:])) < 1e-14


def test_qft_even_gaussian_is_real():
    g = GridSpec2D(32, 32, 0.5, 0.5)
    out = qft(gaussian_field(g))
    U, V = out.spec.mesh()
    assert np.max(np.abs(out.samples[..., 1:])) < 1e-12
    assert np.max(np.abs(out.samples[..., 0] - 2 * math.pi * np.exp(-(U**2 + V**2) / 2))) < 1e-6


def test_qlct_equals_scaled_qft(grid16):
    f = random_field(grid16, np.random.default_rng(12))
    spec = TransformSpec(FOURIER, FOURIER, MU, NU)
    lhs = qlct_forward_fast(f, spec).samples
    c1, c2 = qft_constant(MU).as_array(), qft_constant(NU).as_array()
    rhs = qmul(qmul(c1, qft(f).samples), c2)
    assert np.max(np.abs(lhs - rhs)) < 1e-13


def test_qfrft_spec():
    s = qfrft_spec(math.pi / 2, math.pi / 2)
    assert s.A1 == FOURIER and s.A2 == FOURIER
    r = qfrft_spec(math.pi / 4, 0.3).A1
    h = math.sqrt(2) / 2
    assert np.allclose(r.as_tuple(), (h, h, -h, h), atol=1e-15)
    assert qfrft_spec(math.pi, 0.3).A1.b == 0.0


def test_qfrft_composition_up_to_constant():
    # the intermediate chirp needs dx <= 0.25 to be resolved on this span
    g = GridSpec2D(64, 64, 0.25, 0.25)
    f = gaussian_field(g, width=0.9, x0=0.8, y0=-0.4)
    a, b = math.pi / 3, math.pi / 4

    def run(f, alpha):
        return qlct_forward_direct(f, qfrft_spec(alpha, alpha, MU, MU), g)

    two = run(run(f, a), b)
    one = run(f, a + b)
    z2 = two.samples[..., 0] + 1j * two.samples[..., 1]
    z1 = one.samples[..., 0] + 1j * one.samples[..., 1]
    c = np.vdot(z1, z2) / np.vdot(z1, z1)
    assert math.isclose(abs(c), 1.0, rel_tol=1e-9)
    assert np.linalg.norm(z2 - c * z1) / np.linalg.norm(z2) < 1e-9
