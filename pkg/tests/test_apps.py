import math

import numpy as np
import pytest

from qlct.apps import (
    TransferFunction,
    add_gaussian_noise,
    anisotropic_operator,
    anisotropic_real_system,
    anisotropic_symbol,
    band_from_fraction,
    elliptic_operator,
    elliptic_symbol,
    fd_derivative,
    fredholm_residual,
    lowpass_rect,
    mixed_operator,
    mixed_spectral_residual,
    msn,
    multiplicative_filter,
    psnr,
    qlct_derivative_check,
    relative_residual,
    sigma_for_snr,
    snr,
    solve_fredholm,
    solve_pde_anisotropic,
    solve_pde_elliptic,
    solve_pde_mixed,
    solve_pde_spectral,
    spectral_example_symbol,
    spectral_relation_residual,
    stencil,
    transfer_from_impulse,
)
from qlct.conv import spatial_convolve, weight_eval
from qlct.errors import InvalidBand, SingularSymbol, SymbolZeroOnAxis
from qlct.grid import Field2D, GridSpec2D, delta_field, gaussian_field, random_field, relative_error
from qlct.quaternion import MU, embed, qinv, qmul
from qlct.transform import ParamMatrix, TransformSpec, qlct_forward_fast, qlct_inverse

SPEC = TransformSpec(ParamMatrix(0.5, 1, -0.5, 1), ParamMatrix(1, 2, 0, 1), MU, MU)


def _gauss_coef(grid, coef):
    X, Y = grid.mesh()
    return Field2D(grid, np.exp(-(X**2 + Y**2) / 2)[..., None] * np.asarray(coef, dtype=float))


SLICE_COEF = np.array([0.4, 0.9, 0.0, 0.0])


# ---------------------------------------------------- finite differences


def test_stencil_weights():
    assert np.allclose(stencil(1, 2), [-0.5, 0, 0.5])
    assert np.allclose(stencil(2, 2), [1, -2, 1])
    assert np.allclose(stencil(1, 4), [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12])


@pytest.mark.parametrize("accuracy", [2, 4, 6, "spectral"])
def test_fd_derivative_converges(accuracy):
    x = np.linspace(-6, 6, 128, endpoint=False)
    h = x[1] - x[0]
    y = np.exp(-(x**2))
    d1 = fd_derivative(y, 0, h, 1, accuracy)
    d2 = fd_derivative(y, 0, h, 2, accuracy)
    tol = {2: 1e-2, 4: 1e-4, 6: 1e-5, "spectral": 1e-10}[accuracy]
    assert np.max(np.abs(d1 + 2 * x * y)) < tol
    assert np.max(np.abs(d2 - (4 * x**2 - 2) * y)) < 4 * tol


# -------------------------------------------------------------- Fredholm


def _fredholm_fixture(seed, n=32, dx=0.25):
    grid = GridSpec2D(n, n, dx, dx)
    rng = np.random.default_rng(seed)
    r = random_field(grid, rng, support=0.5)
    f0 = random_field(grid, rng, support=0.5, slice_valued=True)
    return r, f0, spatial_convolve(r, f0, SPEC)


@pytest.mark.parametrize("branch", ["a", "b"])
def test_fredholm_manufactured(branch):
    r, f0, g = _fredholm_fixture(1)
    f = solve_fredholm(r, g, SPEC, branch=branch)
    assert relative_error(f, f0) < 1e-10
    assert fredholm_residual(r, f, g, SPEC) < 1e-10


def test_fredholm_identity_kernel():
    grid = GridSpec2D(16, 16, 0.5, 0.5)
    g = random_field(grid, np.random.default_rng(2), slice_valued=True)
    f = solve_fredholm(delta_field(grid), g, SPEC)
    c = qmul(weight_eval(SPEC.A1, MU, 0, 0), weight_eval(SPEC.A2, MU, 0, 0))
    assert relative_error(f, Field2D(grid, qmul(qinv(c), g.samples))) < 1e-10


def test_fredholm_singular_kernel():
    r, _, g = _fredholm_fixture(3)
    R = qlct_forward_fast(r, SPEC)
    S = np.array(R.samples)
    S[16, 16] = 0.0
    r0 = qlct_inverse(R.with_samples(S), SPEC, r.spec)
    with pytest.raises(SingularSymbol) as info:
        solve_fredholm(r0, g, SPEC)
    assert (info.value.u, info.value.v) == (0.0, 0.0)
    assert "(0, 0)" in str(info.value)


# ------------------------------------------------------ derivative lemma


def test_derivative_lemma_on_gaussian():
    grid = GridSpec2D(64, 64, 12 / 64, 12 / 64)
    f = gaussian_field(grid, width=1.0, x0=0.3, y0=-0.2)
    rep = qlct_derivative_check(f, SPEC)
    assert rep.passed and rep.details["mixed"] < 1e-3 and rep.details["second_x"] < 1e-3


def test_derivative_lemma_zero_field():
    grid = GridSpec2D(16, 16, 0.5, 0.5)
    rep = qlct_derivative_check(Field2D.zeros(grid), SPEC)
    assert rep.max_rel == 0.0


# ----------------------------------------------------------- mixed PDE


def test_mixed_pde_gaussian_spectrum():
    grid = GridSpec2D(32, 32, 0.5, 0.5)
    f = solve_pde_mixed(lambda U, V: U * V * np.exp(-(U**2 + V**2)), SPEC, grid)
    F = qlct_forward_fast(f, SPEC)
    U, V = F.spec.mesh()
    expected = np.zeros(F.samples.shape)
    expected[..., 0] = -SPEC.A1.b * SPEC.A2.b * np.exp(-(U**2 + V**2))
    assert np.max(np.abs(F.samples - expected)) < 1e-6


def test_mixed_zero_data_and_axis_guard():
    grid = GridSpec2D(16, 16, 0.5, 0.5)
    f = solve_pde_mixed(lambda U, V: 0 * U, SPEC, grid)
    assert np.all(f.samples == 0)
    with pytest.raises(SymbolZeroOnAxis):
        solve_pde_mixed(lambda U, V: np.exp(-(U**2 + V**2)), SPEC, grid)


def test_mixed_manufactured_from_sampled_data():
    grid = GridSpec2D(64, 64, 0.2, 0.2)
    f0 = _gauss_coef(grid, [0.3, 1.0, -0.5, 0.7])
    g = mixed_operator(f0, SPEC)
    G = qlct_forward_fast(g, SPEC)
    f = solve_pde_mixed(G, SPEC, grid)
    assert relative_error(f, f0) < 1e-2
    assert mixed_spectral_residual(f, G, SPEC) < 1e-6
    assert relative_residual(mixed_operator(f, SPEC), g) < 1e-2


# ------------------------------------------------- elliptic, anisotropic


@pytest.mark.parametrize(
    "solve, op, sym",
    [
        (solve_pde_elliptic, elliptic_operator, elliptic_symbol),
        (solve_pde_anisotropic, anisotropic_operator, anisotropic_symbol),
    ],
    ids=["elliptic", "anisotropic"],
)
def test_symbol_solvers_manufactured(solve, op, sym):
    grid = GridSpec2D(64, 64, 0.2, 0.2)
    f0 = _gauss_coef(grid, SLICE_COEF)
    g = op(f0, SPEC)
    f = solve(g, SPEC)
    assert spectral_relation_residual(f, g, SPEC, sym) < 1e-6
    assert relative_residual(op(f, SPEC), g) < 1e-2
    assert relative_error(f, f0) < 1e-2
    # dual route: convolution with the kernel whose spectrum inverts the symbol
    assert relative_error(solve(g, SPEC, route="convolution"), f) < 1e-5


def test_symbol_solvers_zero_input():
    grid = GridSpec2D(16, 16, 0.5, 0.5)
    zero = Field2D.zeros(grid)
    assert np.all(solve_pde_elliptic(zero, SPEC).samples == 0)
    assert np.all(solve_pde_anisotropic(zero, SPEC).samples == 0)
    assert np.all(solve_pde_spectral(zero, SPEC).samples == 0)


def test_elliptic_singular_when_imaginary_part_vanishes():
    grid = GridSpec2D(16, 16, 0.5, 0.5)
    spec = TransformSpec(ParamMatrix(0, 1, -1, 0), ParamMatrix(0, 1, -1, 0), MU, MU)
    g = _gauss_coef(grid, SLICE_COEF)
    with pytest.raises(SingularSymbol):
        solve_pde_elliptic(g, spec)


def test_anisotropic_real_system_matches_quaternion_form():
    grid = GridSpec2D(32, 32, 0.3, 0.3)
    X, Y = grid.mesh()
    fr = np.exp(-(X**2 + Y**2) / 2) * (1 + 0.3 * X)
    fi = np.exp(-((X - 0.5) ** 2 + Y**2) / 2)
    gr, gi = anisotropic_real_system(fr, fi, grid, SPEC)
    q = anisotropic_operator(Field2D(grid, embed(fr + 1j * fi, MU.vec)), SPEC).samples
    assert np.max(np.abs(q[..., 0] - gr)) < 1e-10
    assert np.max(np.abs(q[..., 1] - gi)) < 1e-10
    assert np.max(np.abs(q[..., 2:])) == 0.0


# ------------------------------------------------- spectral-symbol equation


def test_spectral_example_relation():
    grid = GridSpec2D(32, 32, 0.25, 0.25)
    g = random_field(grid, np.random.default_rng(4), support=0.5)
    f = solve_pde_spectral(g, SPEC)
    assert spectral_relation_residual(f, g, SPEC, spectral_example_symbol) < 1e-6


def test_spectral_example_delta_like():
    # data equal to the symbol gives a unit spectrum; with d = 0 on both axes
    # the inverse transform of 1 is concentrated on the origin sample
    spec = TransformSpec(ParamMatrix(1, 1, -1, 0), ParamMatrix(2, 1, -1, 0), MU, MU)
    grid = GridSpec2D(16, 16, 0.5, 0.5)
    freq = grid.conjugate(1, 1)
    S = spectral_example_symbol(spec, freq).values.samples
    g = qlct_inverse(Field2D(freq, S), spec, grid)
    f = solve_pde_spectral(g, spec)
    F = qlct_forward_fast(f, spec).samples
    assert np.max(np.abs(F - np.r_[1.0, 0, 0, 0])) < 1e-10
    mag = f.abs()
    i, j = grid.origin_index()
    assert mag[i, j] > 1e10 * np.max(np.delete(mag.ravel(), i * 16 + j))


def test_spectral_example_needs_a1():
    grid = GridSpec2D(16, 16, 0.5, 0.5)
    spec = TransformSpec(ParamMatrix(0, 1, -1, 0), ParamMatrix(1, 1, 0, 1), MU, MU)
    with pytest.raises(SingularSymbol):
        solve_pde_spectral(Field2D.zeros(grid), spec)


# --------------------------------------------------------------- filters


def test_all_pass_and_zero_filter():
    grid = GridSpec2D(32, 32, 0.5, 0.5)
    f = random_field(grid, np.random.default_rng(5))
    assert relative_error(multiplicative_filter(f, np.ones((32, 32)), SPEC), f) < 1e-12
    assert np.all(multiplicative_filter(f, np.zeros((32, 32)), SPEC).samples == 0)
    doubled = multiplicative_filter(f, np.ones((32, 32)), SPEC, mode="doubled")
    ref = qlct_inverse(qlct_forward_fast(f, SPEC), SPEC.hat(), grid)
    assert relative_error(doubled, ref) < 1e-14


def test_in_band_input_passes():
    grid = GridSpec2D(32, 32, 0.5, 0.5)
    freq = grid.conjugate(SPEC.A1.b, SPEC.A2.b)
    H = band_from_fraction("1/4", 32, 32, freq)
    rng = np.random.default_rng(6)
    F = rng.standard_normal((32, 32, 4)) * H.values[..., None]
    f = qlct_inverse(Field2D(freq, F), SPEC, grid)
    assert relative_error(multiplicative_filter(f, H, SPEC), f) < 1e-5
    # and out-of-band content is removed
    G = rng.standard_normal((32, 32, 4)) * (1 - H.values[..., None])
    h = qlct_inverse(Field2D(freq, G), SPEC, grid)
    assert np.max(np.abs(multiplicative_filter(h, H, SPEC).samples)) < 1e-12


def test_filter_from_impulse_is_convolution():
    grid = GridSpec2D(16, 16, 0.5, 0.5)
    rng = np.random.default_rng(7)
    f = random_field(grid, rng, support=0.5, slice_valued=True)
    g = random_field(grid, rng, support=0.5, slice_valued=True)
    out = multiplicative_filter(f, transfer_from_impulse(g, SPEC), SPEC)
    assert relative_error(out, spatial_convolve(f, g, SPEC)) < 1e-12


def test_filter_rejects_wrong_shape():
    grid = GridSpec2D(16, 16, 0.5, 0.5)
    f = random_field(grid, np.random.default_rng(0))
    from qlct.errors import GridMismatch

    with pytest.raises(GridMismatch):
        multiplicative_filter(f, np.ones((8, 8)), SPEC)
    with pytest.raises(GridMismatch):
        multiplicative_filter(f, TransferFunction(np.ones((16, 16)), GridSpec2D(16, 16, 1, 1)), SPEC)


def test_band_areas():
    assert band_from_fraction("1/4", 256, 256).values.sum() == 16384
    assert band_from_fraction("1/6", 216, 216).values.sum() == 5184
    h1 = band_from_fraction("1/4", 256, 256).values
    assert h1[64, 64] == 1 and h1[63, 64] == 0 and h1[191, 191] == 1 and h1[192, 191] == 0
    assert band_from_fraction("all", 8, 8).values.sum() == 64
    assert lowpass_rect(8, 8, 3, 3, 0, 8).values.sum() == 0


@pytest.mark.parametrize("bad", ["1/2", "0", "-1/4", "x"])
def test_invalid_band(bad):
    with pytest.raises(InvalidBand):
        band_from_fraction(bad, 64, 64)


def test_lowpass_rect_bounds():
    with pytest.raises(InvalidBand):
        lowpass_rect(8, 8, 0, 9, 0, 8)
    with pytest.raises(InvalidBand):
        lowpass_rect(8, 8, 5, 4, 0, 8)


# --------------------------------------------------------------- metrics


def test_psnr_values():
    grid = GridSpec2D(16, 16)
    zero = Field2D.zeros(grid)
    one = Field2D(grid, np.tile([0.0, 1.0, 0, 0], (16, 16, 1)))
    assert msn(zero, one) == 1.0
    assert math.isclose(psnr(zero, one), 24.082399653118497, rel_tol=1e-12)
    two = Field2D(grid, np.tile([0.0, 1.0, 1.0, 0], (16, 16, 1)))
    assert math.isclose(psnr(zero, one) - psnr(zero, two), 3.0102999566398116, rel_tol=1e-12)
    assert psnr(one, one) == math.inf
    # standard form: MSE per channel = 1/3, peak 1
    assert math.isclose(psnr(zero, one, standard=True), 10 * math.log10(3), rel_tol=1e-12)


def test_snr_values():
    grid = GridSpec2D(8, 8)
    rng = np.random.default_rng(0)
    ref = random_field(grid, rng)
    noise = random_field(grid, rng).samples
    scale = np.linalg.norm(ref.samples) / np.linalg.norm(noise)
    assert abs(snr(ref, ref.with_samples(ref.samples + scale * noise))) < 1e-12
    assert math.isclose(snr(ref, ref.with_samples(ref.samples + 0.1 * scale * noise)), 20.0, rel_tol=1e-12)
    assert snr(ref, ref) == math.inf


def test_gaussian_noise():
    grid = GridSpec2D(256, 256)
    f = Field2D.zeros(grid)
    assert add_gaussian_noise(f, 0.0, 1).samples.tolist() == f.samples.tolist()
    noisy = add_gaussian_noise(f, 0.3, 1)
    var = noisy.samples.reshape(-1, 4).var(axis=0)
    assert np.all(np.abs(var / 0.09 - 1) < 0.05)
    assert np.array_equal(add_gaussian_noise(f, 0.3, 1).samples, noisy.samples)
    with pytest.raises(ValueError):
        add_gaussian_noise(f, -1.0, 0)


def test_psnr_falls_with_sigma():
    grid = GridSpec2D(32, 32)
    f = random_field(grid, np.random.default_rng(9))
    values = [psnr(f, add_gaussian_noise(f, s, 3)) for s in (0.05, 0.1, 0.2)]
    assert values[0] > values[1] > values[2]


def test_sigma_for_snr_hits_target():
    grid = GridSpec2D(128, 128)
    f = random_field(grid, np.random.default_rng(10))
    noisy = add_gaussian_noise(f, sigma_for_snr(f, 3.37), 0)
    assert abs(snr(f, noisy) - 3.37) < 0.05
