"""Applications: Fredholm deconvolution, PDE solvers, filters and metrics.

Every solver works on the discrete transform grid, so its spectral relation
holds to roundoff.  Finite-difference operators are only used to measure
residuals of the continuous equations.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .conv import components, phase_field, slice_field, spatial_convolve, spectral_convolve
from .errors import GridMismatch, InvalidBand, NotSliceValued, SingularSymbol, SymbolZeroOnAxis
from .grid import Field2D, GridSpec2D
from .quaternion import embed, qabs, qinv, qmul, to_pair, complete_frame
from .report import combine, compare
from .transform import qlct_forward_fast, qlct_inverse

DEFAULT_FLOOR = 1e-8


# -------------------------------------------------------------- helpers


def _require_same(spec):
    if spec.kind != "same":
        raise ValueError("this application is stated for mu = nu")


def _unit(axis):
    return np.r_[0.0, axis.vec]


def _as_complex(arr, axis):
    """H(axis)-valued (..., 4) samples to complex numbers."""
    return arr[..., 0] + 1j * (arr[..., 1:] @ axis.vec)


def _fwd(z, spec, grid):
    """Transform of the complex slice field z along spec.mu."""
    F = qlct_forward_fast(Field2D(grid, embed(z, spec.mu.vec)), spec)
    return _as_complex(F.samples, spec.mu), F.spec


def _inv(Z, spec, freq, grid):
    f = qlct_inverse(Field2D(freq, embed(Z, spec.mu.vec)), spec, grid)
    return _as_complex(f.samples, spec.mu)


def _phase(freq, spec, s2=1.0):
    U, V = freq.mesh()
    A1, A2 = spec.A1, spec.A2
    return A1.d * U * U / (2 * A1.b) + s2 * A2.d * V * V / (2 * A2.b)


def _first_small(mag, floor, freq):
    bad = np.argwhere(mag < floor)
    i, j = bad[0]
    return float(freq.x[i]), float(freq.y[j])


def require_slice(f, axis, tol=1e-10):
    v = f.samples[..., 1:]
    off = v - (v @ axis.vec)[..., None] * axis.vec
    if np.max(np.abs(off), initial=0.0) > tol:
        raise NotSliceValued("expected samples in the slice of %s" % (axis.vec.tolist(),))


# ----------------------------------------------------- finite differences


def stencil(deriv, accuracy):
    """Central finite-difference weights for the given derivative order."""
    half = (deriv + accuracy - 1) // 2
    k = np.arange(-half, half + 1, dtype=float)
    M = np.vander(k, increasing=True).T
    rhs = np.zeros(len(k))
    rhs[deriv] = math.factorial(deriv)
    return np.linalg.solve(M, rhs)


def fd_derivative(arr, axis, h, deriv=1, accuracy=4):
    """Derivative along a grid axis; samples outside the grid are zero.

    accuracy='spectral' differentiates through the FFT instead (periodic,
    exact for well-resolved fields that vanish at the edges).
    """
    if accuracy == "spectral":
        n = arr.shape[axis]
        k = 2j * np.pi * np.fft.fftfreq(n, d=h)
        if deriv % 2 and n % 2 == 0:
            k[n // 2] = 0.0
        shape = [1] * arr.ndim
        shape[axis] = n
        spec = np.fft.fft(arr, axis=axis) * (k**deriv).reshape(shape)
        out = np.fft.ifft(spec, axis=axis)
        return out.real if np.isrealobj(arr) else out
    w = stencil(deriv, accuracy)
    half = len(w) // 2
    pad = [(0, 0)] * arr.ndim
    pad[axis] = (half, half)
    P = np.pad(arr, pad)
    n = arr.shape[axis]
    out = np.zeros_like(arr, dtype=np.result_type(arr, float))
    for m, c in enumerate(w):
        if c != 0:
            out += c * np.take(P, np.arange(m, m + n), axis=axis)
    return out / h**deriv


def _dx(a, grid, acc, n=1):
    return fd_derivative(a, 0, grid.dx, n, acc)


def _dy(a, grid, acc, n=1):
    return fd_derivative(a, 1, grid.dy, n, acc)


# ------------------------------------------------------------- Fredholm


def solve_fredholm(r, g, spec, branch="a", floor=DEFAULT_FLOOR):
    """Solve r (*) f = g for slice-valued f.

    branch='a' divides by the transform of the slice part of the kernel;
    branch='b' uses its nu-part and the transform with flipped right axis,
    which determines conj(f).
    """
    _require_same(spec)
    if not r.spec.same_as(g.spec):
        raise GridMismatch("kernel and data live on different grids")
    grid = r.spec
    ra, rb = components(r, spec)
    ga, gb = components(g, spec)
    if branch == "a":
        s, s2, kern, data = spec, 1.0, ra, ga
    elif branch == "b":
        s, s2, kern, data = spec.opposite_axis(), -1.0, rb, gb
    else:
        raise ValueError("branch must be 'a' or 'b'")
    R, freq = _fwd(kern, s, grid)
    D = np.exp(-1j * _phase(freq, spec, s2)) * R
    if np.min(np.abs(D)) < floor:
        u, v = _first_small(np.abs(D), floor, freq)
        raise SingularSymbol("kernel spectrum vanishes at (u, v) = (%.6g, %.6g)" % (u, v), u, v)
    G, _ = _fwd(data, s, grid)
    z = _inv(G / D, s, freq, grid)
    if branch == "b":
        z = np.conj(z)
    return Field2D(grid, embed(z, spec.mu.vec))


def fredholm_residual(r, f, g, spec):
    """||r (*) f - g|| / ||g|| with the zero-boundary spatial convolution."""
    res = spatial_convolve(r, f, spec).samples - g.samples
    return float(np.linalg.norm(res) / np.linalg.norm(g.samples))


# ---------------------------------------------------- derivative lemma


def _moments(field, spec, **powers):
    X, Y = field.spec.mesh()
    out = {}
    for name, (px, py) in powers.items():
        h = field.samples * (X**px * Y**py)[..., None]
        out[name] = qlct_forward_fast(Field2D(field.spec, h), spec).samples
    return out


def qlct_derivative_check(f, spec, tol=1e-3, accuracy=6):
    """Transform of finite-difference derivatives against the moment forms.

    Mixed:  mu (a1 x/b1 - u/b1) K f K (a2 y/b2 - v/b2) mu.
    Second: (mu a1/b1 - a1^2 x^2/b1^2 + 2 a1 x u/b1^2 - u^2/b1^2) under K f K.
    """
    _require_same(spec)
    grid = f.spec
    A1, A2 = spec.A1, spec.A2
    m = _moments(f, spec, f0=(0, 0), xf=(1, 0), yf=(0, 1), xyf=(1, 1), xxf=(2, 0))
    freq = grid.conjugate(A1.b, A2.b)
    U, V = (w[..., None] for w in freq.mesh())
    mu = _unit(spec.mu)

    fxy = _dx(_dy(f.samples, grid, accuracy), grid, accuracy)
    lhs_mixed = qlct_forward_fast(Field2D(grid, fxy), spec).samples
    inner = A1.a * A2.a * m["xyf"] - A1.a * V * m["xf"] - A2.a * U * m["yf"] + U * V * m["f0"]
    rhs_mixed = qmul(qmul(mu, inner / (A1.b * A2.b)), mu)

    fxx = _dx(f.samples, grid, accuracy, 2)
    lhs_xx = qlct_forward_fast(Field2D(grid, fxx), spec).samples
    rhs_xx = (
        qmul(mu, m["f0"]) * (A1.a / A1.b)
        - (A1.a / A1.b) ** 2 * m["xxf"]
        + 2 * A1.a / A1.b**2 * U * m["xf"]
        - U * U / A1.b**2 * m["f0"]
    )
    reports = [compare("mixed", lhs_mixed, rhs_mixed, tol), compare("second_x", lhs_xx, rhs_xx, tol)]
    return combine("derivative", reports, tol)


# ------------------------------------------------------------ symbols


@dataclass(frozen=True)
class SpectralSymbol:
    """Multiplier in H(mu) a differential operator becomes after transforming."""

    values: Field2D
    floor: float = DEFAULT_FLOOR

    def check(self):
        mag = qabs(self.values.samples)
        if np.min(mag) < self.floor:
            u, v = _first_small(mag, self.floor, self.values.spec)
            raise SingularSymbol("symbol vanishes at (u, v) = (%.6g, %.6g)" % (u, v), u, v)
        return self

    def divide(self, G):
        """S^-1 G with the symbol on the left."""
        self.check()
        return qmul(qinv(self.values.samples, 0.0), G)

    def apply(self, F):
        return qmul(self.values.samples, F)


def _symbol(spec, freq, const, quad, floor):
    U, V = freq.mesh()
    vals = embed(1j * const + quad(U, V), spec.mu.vec)
    return SpectralSymbol(Field2D(freq, vals), floor)


def elliptic_symbol(spec, freq, floor=DEFAULT_FLOOR):
    A1, A2 = spec.A1, spec.A2
    return _symbol(
        spec, freq, A1.a / A1.b + A2.a / A2.b, lambda U, V: -(U**2) / A1.b**2 - V**2 / A2.b**2, floor
    )


def anisotropic_symbol(spec, freq, floor=DEFAULT_FLOOR):
    A1, A2 = spec.A1, spec.A2
    return _symbol(
        spec,
        freq,
        A1.a / A1.b + A2.a / A2.b,
        lambda U, V: -(U**2) / A1.b**2 - U * V / (A1.b * A2.b) - V**2 / A2.b**2,
        floor,
    )


def spectral_example_symbol(spec, freq, floor=DEFAULT_FLOOR):
    A1, A2 = spec.A1, spec.A2
    return _symbol(spec, freq, A1.a / A1.b, lambda U, V: -(U**2) / A1.b**2 - V**2 / A2.b**2, floor)


# ------------------------------------------------------ PDE operators


def _lmul(q, arr):
    return qmul(q, arr)


def mixed_operator(f, spec, accuracy=4):
    """f_xy + (a2/b2) y f_x mu + mu (a1/b1) x f_y + mu (a1 a2/(b1 b2)) x y f mu."""
    grid = f.spec
    al1, al2 = spec.A1.a / spec.A1.b, spec.A2.a / spec.A2.b
    X, Y = (w[..., None] for w in grid.mesh())
    mu = _unit(spec.mu)
    s = f.samples
    fx, fy = _dx(s, grid, accuracy), _dy(s, grid, accuracy)
    out = _dx(fy, grid, accuracy) + al2 * Y * qmul(fx, mu) + al1 * X * _lmul(mu, fy)
    out = out + al1 * al2 * X * Y * qmul(_lmul(mu, s), mu)
    return Field2D(grid, out)


def elliptic_operator(f, spec, accuracy=4):
    """Laplacian with first-order chirp terms; f in H(mu)."""
    grid = f.spec
    al1, al2 = spec.A1.a / spec.A1.b, spec.A2.a / spec.A2.b
    X, Y = (w[..., None] for w in grid.mesh())
    mu = _unit(spec.mu)
    s = f.samples
    out = _dx(s, grid, accuracy, 2) + _dy(s, grid, accuracy, 2)
    out = out + 2 * al2 * Y * _lmul(mu, _dy(s, grid, accuracy)) + 2 * al1 * X * _lmul(mu, _dx(s, grid, accuracy))
    out = out + 2 * (al1 + al2) * _lmul(mu, s) - (al1**2 * X * X + al2**2 * Y * Y) * s
    return Field2D(grid, out)


def anisotropic_operator(f, spec, accuracy=4):
    """Quaternion form of the anisotropic elastic system; f in H(mu)."""
    grid = f.spec
    al1, al2 = spec.A1.a / spec.A1.b, spec.A2.a / spec.A2.b
    X, Y = (w[..., None] for w in grid.mesh())
    mu = _unit(spec.mu)
    s = f.samples
    fx, fy = _dx(s, grid, accuracy), _dy(s, grid, accuracy)
    out = _dx(s, grid, accuracy, 2) + _dy(s, grid, accuracy, 2) + _dx(fy, grid, accuracy)
    out = out + (al2 * Y + 2 * al1 * X) * _lmul(mu, fx) + (al1 * X + 2 * al2 * Y) * _lmul(mu, fy)
    out = out + 2 * (al1 + al2) * _lmul(mu, s)
    out = out - (al1**2 * X * X + al2**2 * Y * Y + al1 * al2 * X * Y) * s
    return Field2D(grid, out)


def anisotropic_real_system(fr, fi, grid, spec, accuracy=4):
    """The two real equations for f = fr + mu fi; returns (gr, gi)."""
    al1, al2 = spec.A1.a / spec.A1.b, spec.A2.a / spec.A2.b
    X, Y = grid.mesh()

    def second(z):
        return _dx(z, grid, accuracy, 2) + _dy(z, grid, accuracy, 2) + _dx(_dy(z, grid, accuracy), grid, accuracy)

    cx = al2 * Y + 2 * al1 * X
    cy = al1 * X + 2 * al2 * Y
    pot = -(al1**2) * X * X - al2**2 * Y * Y - al1 * al2 * X * Y
    gr = second(fr) - cx * _dx(fi, grid, accuracy) - cy * _dy(fi, grid, accuracy) - 2 * (al1 + al2) * fi + pot * fr
    gi = second(fi) + cx * _dx(fr, grid, accuracy) + cy * _dy(fr, grid, accuracy) + 2 * (al1 + al2) * fr + pot * fi
    return gr, gi


def relative_residual(op_f, g):
    den = np.linalg.norm(g.samples)
    num = np.linalg.norm(op_f.samples - g.samples)
    return float(num / den) if den > 0 else float(num)


# -------------------------------------------------------- PDE solvers


def _mixed_limit(ghat, U, V, eps):
    """G/(uv) at uv = 0 from symmetric evaluations at +-eps."""
    acc = 0.0
    for su in (-1.0, 1.0):
        for sv in (-1.0, 1.0):
            uu = np.where(U == 0, su * eps, U)
            vv = np.where(V == 0, sv * eps, V)
            acc = acc + _ghat_eval(ghat, uu, vv) / (uu * vv)[..., None]
    return acc / 4


def _ghat_eval(ghat, U, V):
    val = np.asarray(ghat(U, V), dtype=float)
    if val.shape == U.shape:
        out = np.zeros(U.shape + (4,))
        out[..., 0] = val
        return out
    return val


def solve_pde_mixed(ghat_provider, spec, grid, axis_tol=1e-3, eps_factor=1e-4):
    """Solve the mixed-derivative quaternion PDE from its spectral data.

    The transformed equation is mu (uv/(b1 b2)) L[f] mu = L[g], so
    L[f] = mu^-1 (b1 b2/(uv)) L[g] mu^-1.  ghat_provider is either a callable
    (u, v) -> L[g] or a Field2D on the conjugate grid.  Where uv = 0 the data
    must vanish; the quotient is then filled by its removable limit
    (symmetric evaluation for callables, exact derivatives of the discrete
    transform for sampled data).
    """
    _require_same(spec)
    A1, A2 = spec.A1, spec.A2
    freq = grid.conjugate(A1.b, A2.b)
    U, V = freq.mesh()
    if callable(ghat_provider):
        G = _ghat_eval(ghat_provider, U, V)
    else:
        if not ghat_provider.spec.same_as(freq):
            raise GridMismatch("spectral data must live on the conjugate grid")
        G = ghat_provider.samples
    on_axis = (U == 0) | (V == 0)
    scale = max(float(np.max(qabs(G))), 1e-300)
    if np.any(on_axis) and np.max(qabs(G[on_axis])) > axis_tol * scale:
        k = np.argwhere(on_axis & (qabs(G) > axis_tol * scale))[0]
        u, v = float(freq.x[k[0]]), float(freq.y[k[1]])
        raise SymbolZeroOnAxis("data must vanish where uv = 0; nonzero at (%.6g, %.6g)" % (u, v), u, v)
    with np.errstate(divide="ignore", invalid="ignore"):
        Q = np.where(on_axis[..., None], 0.0, G / (U * V)[..., None])
    if np.any(on_axis):
        if callable(ghat_provider):
            eps = eps_factor * min(freq.dx, freq.dy)
            Q[on_axis] = _mixed_limit(ghat_provider, U, V, eps)[on_axis]
        else:
            on_u, on_v, at_origin = _axis_limits(G, spec, grid, freq)
            Q = np.where(((U == 0) & (V != 0))[..., None], on_u, Q)
            Q = np.where(((V == 0) & (U != 0))[..., None], on_v, Q)
            Q = np.where(((U == 0) & (V == 0))[..., None], at_origin, Q)
    mu_inv = qinv(_unit(spec.mu))
    F = A1.b * A2.b * qmul(qmul(mu_inv, Q), mu_inv)
    return qlct_inverse(Field2D(freq, F), spec, grid)


def _axis_limits(G, spec, grid, freq):
    """G/(uv) on the uv = 0 lines from derivatives of the discrete transform.

    The sampled spectrum G is the transform of g = inverse[G]; its u- and
    v-derivatives at u = 0 or v = 0 are transforms of x g and y g with the
    kernel's axis factors, which gives the removable limits exactly.
    """
    g = qlct_inverse(Field2D(freq, G), spec, grid)
    X, Y = (w[..., None] for w in grid.mesh())
    moment = {}
    for name, w in (("x", X), ("y", Y), ("xy", X * Y)):
        moment[name] = qlct_forward_fast(g.with_samples(g.samples * w), spec).samples
    mu = _unit(spec.mu)
    b1, b2 = spec.A1.b, spec.A2.b
    U, V = (w[..., None] for w in freq.mesh())
    with np.errstate(divide="ignore", invalid="ignore"):
        on_u = -qmul(mu, moment["x"]) / (b1 * V)
        on_v = -qmul(moment["y"], mu) / (b2 * U)
    at_origin = qmul(qmul(mu, moment["xy"]), mu) / (b1 * b2)
    return on_u, on_v, at_origin


def mixed_spectral_residual(f, ghat, spec):
    """max |mu (uv/(b1 b2)) L[f] mu - L[g]| relative to max |L[g]|."""
    F = qlct_forward_fast(f, spec)
    U, V = (w[..., None] for w in F.spec.mesh())
    mu = _unit(spec.mu)
    lhs = qmul(qmul(mu, U * V * F.samples / (spec.A1.b * spec.A2.b)), mu)
    G = ghat.samples if isinstance(ghat, Field2D) else _ghat_eval(ghat, *F.spec.mesh())
    return float(np.max(qabs(lhs - G)) / np.max(qabs(G)))


def _symbol_solve(g, spec, make_symbol, floor, route):
    _require_same(spec)
    require_slice(g, spec.mu)
    grid = g.spec
    G = qlct_forward_fast(g, spec)
    S = make_symbol(spec, G.spec, floor).check()
    if route == "spectral":
        return qlct_inverse(G.with_samples(S.divide(G.samples)), spec, grid)
    if route == "convolution":
        # r has spectrum S^-1 exp(+mu phase); then L[r (*) g] = S^-1 L[g]
        Rhat = qmul(S.divide(np.broadcast_to([1.0, 0, 0, 0], G.samples.shape)), phase_field(G.spec, spec, sign=1.0))
        r = qlct_inverse(G.with_samples(Rhat), spec, grid)
        return spatial_convolve(r, g, spec, boundary="periodic")
    raise ValueError("route must be 'spectral' or 'convolution'")


def solve_pde_elliptic(g, spec, floor=DEFAULT_FLOOR, route="spectral"):
    """Second-order elliptic equation with chirp coefficients, by symbol division."""
    return _symbol_solve(g, spec, elliptic_symbol, floor, route)


def solve_pde_anisotropic(g, spec, floor=DEFAULT_FLOOR, route="spectral"):
    """Anisotropic elastic system written as one quaternion equation."""
    return _symbol_solve(g, spec, anisotropic_symbol, floor, route)


def spectral_relation_residual(f, g, spec, make_symbol):
    """max |S L[f] - L[g]| / max |L[g]|."""
    F = qlct_forward_fast(f, spec)
    G = qlct_forward_fast(g, spec)
    S = make_symbol(spec, F.spec, 0.0)
    den = np.max(qabs(G.samples))
    return float(np.max(qabs(S.apply(F.samples) - G.samples)) / den) if den > 0 else 0.0


def solve_pde_spectral(g, spec, floor=DEFAULT_FLOOR):
    """f = l star g, where l is the inverse transform of the symbol's inverse."""
    _require_same(spec)
    if spec.A1.a == 0:
        raise SingularSymbol("the symbol is only invertible for a1 != 0", 0.0, 0.0)
    grid = g.spec
    freq = grid.conjugate(spec.A1.b, spec.A2.b)
    S = spectral_example_symbol(spec, freq, floor).check()
    ones = np.zeros(freq.shape + (4,))
    ones[..., 0] = 1.0
    ell = qlct_inverse(Field2D(freq, S.divide(ones)), spec, grid)
    return spectral_convolve(ell, g, spec)


# ---------------------------------------------------------- filters


@dataclass(frozen=True)
class TransferFunction:
    """Spectral multiplier, applied on the left of the input's transform."""

    values: np.ndarray
    grid: GridSpec2D = None

    @property
    def shape(self):
        return self.values.shape[:2]


def _as_transfer(H):
    if isinstance(H, TransferFunction):
        return H
    if isinstance(H, Field2D):
        return TransferFunction(H.samples, H.spec)
    return TransferFunction(np.asarray(H, dtype=float))


def multiplicative_filter(f_in, H, spec, mode="same"):
    """f_out = inverse[H L[f_in]].

    mode='same' inverts with the input matrices; mode='doubled' reads the
    output under A_hat = (a, b; 2c + 1/b, 2d).
    """
    _require_same(spec)
    H = _as_transfer(H)
    F = qlct_forward_fast(f_in, spec)
    if H.shape != F.spec.shape:
        raise GridMismatch("transfer function shape %s, spectrum %s" % (H.shape, F.spec.shape))
    if H.grid is not None and not H.grid.same_as(F.spec):
        raise GridMismatch("transfer function is not on the conjugate grid")
    vals = H.values
    if vals.ndim == 2:
        prod = vals[..., None] * F.samples
    else:
        prod = qmul(vals, F.samples)
    out_spec = spec if mode == "same" else spec.hat() if mode == "doubled" else None
    if out_spec is None:
        raise ValueError("mode must be 'same' or 'doubled'")
    return qlct_inverse(F.with_samples(prod), out_spec, f_in.spec)


def transfer_from_impulse(g, spec, mode="same"):
    """Transfer function that makes the filter equal f (*) g."""
    G = qlct_forward_fast(g, spec)
    if mode == "same":
        return TransferFunction(qmul(phase_field(G.spec, spec), G.samples), G.spec)
    if mode == "doubled":
        return TransferFunction(G.samples, G.spec)
    raise ValueError("mode must be 'same' or 'doubled'")


def lowpass_rect(nx, ny, u_lo, u_hi, v_lo, v_hi, grid=None):
    """Indicator of the index box [u_lo, u_hi) x [v_lo, v_hi)."""
    for lo, hi, n in ((u_lo, u_hi, nx), (v_lo, v_hi, ny)):
        if not (0 <= lo <= hi <= n):
            raise InvalidBand("band [%s, %s) outside 0..%d" % (lo, hi, n))
    H = np.zeros((nx, ny))
    H[int(u_lo) : int(u_hi), int(v_lo) : int(v_hi)] = 1.0
    return TransferFunction(H, grid)


def band_from_fraction(text, nx, ny, grid=None):
    """'1/k' -> box [N/k, 3N/k) on both axes; 'all' -> all-pass."""
    if text.strip().lower() == "all":
        return lowpass_rect(nx, ny, 0, nx, 0, ny, grid)
    try:
        frac = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidBand("cannot read band %r" % text) from exc
    if frac <= 0:
        raise InvalidBand("band fraction must be positive")
    bounds = []
    for n in (nx, ny):
        lo, hi = n * frac, 3 * n * frac
        if hi > n:
            raise InvalidBand("band %s exceeds the %d-sample axis" % (text, n))
        bounds += [int(math.ceil(lo)), int(math.ceil(hi))]
    return lowpass_rect(nx, ny, bounds[0], bounds[1], bounds[2], bounds[3], grid)


# ---------------------------------------------------------- metrics


def msn(f, g):
    if f.spec.shape != g.spec.shape:
        raise GridMismatch("images differ in size")
    M, N = f.spec.shape
    return float(np.sum((f.samples - g.samples) ** 2) / (M * N))


def psnr(f, g, standard=False, peak=1.0, channels=3):
    """10 log10(M N / MSN) with MSN the mean squared quaternion difference.

    standard=True gives the usual 10 log10(peak^2 / MSE), MSE averaged over
    `channels` color channels.  Identical inputs give +inf.
    """
    e = msn(f, g)
    if e == 0:
        return math.inf
    if standard:
        return 10 * math.log10(peak**2 / (e / channels))
    M, N = f.spec.shape
    return 10 * math.log10(M * N / e)


def snr(reference, test):
    """10 log10(sum |ref|^2 / sum |ref - test|^2)."""
    if reference.spec.shape != test.spec.shape:
        raise GridMismatch("images differ in size")
    noise = float(np.sum((reference.samples - test.samples) ** 2))
    if noise == 0:
        return math.inf
    return 10 * math.log10(float(np.sum(reference.samples**2)) / noise)


def add_gaussian_noise(f, sigma, seed):
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    rng = np.random.default_rng(seed)
    return f.with_samples(f.samples + sigma * rng.standard_normal(f.samples.shape))


def sigma_for_snr(f, snr_db):
    """Noise level giving the expected SNR (noise on all four components)."""
    power = float(np.mean(np.sum(f.samples**2, axis=-1)))
    return math.sqrt(power / (4 * 10 ** (snr_db / 10)))
