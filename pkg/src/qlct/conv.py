"""Spatial and spectral convolutions, correlations and theorem checks.

The spatial operator weights the classical integrand with chirps,

    (f (*) g)(x, y) = sum W1(x, t1) f(t1, t2) g(x - t1, y - t2) W2(y, t2) dt,

W_A(x, t) = exp(axis*a*t*(t - x)/b) / sqrt(axis*2*pi*b).  The spectral
operator is the inverse transform of the product of transforms.

Discrete identities are exact (up to roundoff) under these conditions:
  * zero-boundary convolution: the linear convolution of the supports fits
    in the grid.  The verifiers zero-pad to twice the size to ensure this.
  * periodic convolution: always, on even grids.  The lag wraps around and
    the weight uses the wrapped coordinate, which matches the periodicity of
    the discrete transform.
"""
import math

import numpy as np

from . import _parallel
from .errors import DegenerateB, GridMismatch, GridTooLarge, NotSliceValued
from .grid import Field2D, pad_field, reflect_samples
from .quaternion import (
    MU,
    UnitPureImaginary,
    complete_frame,
    embed,
    from_pair,
    qconj,
    qmul,
    slice_exp,
    to_pair,
)
from .report import TheoremReport, combine, compare
from .transform import kernel_amplitude, kernel_array, lct_axis, qlct_direct_at, qlct_forward_direct, qlct_forward_fast, qlct_inverse

GENERAL_MAX_N = 24
SLICE_TOL = 1e-10


# ----------------------------------------------------------------- weights


def weight_phase(A, t, tau, s=None):
    """Exponent of W_A(t, tau) without the axis; s is the lag coordinate.

    With s = t - tau this is a*tau*(tau - t)/b; the three-point form
    a*(tau^2 + s^2 - t^2)/(2b) also covers wrapped lags.
    """
    t = np.asarray(t, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if s is None:
        return A.a * tau * (tau - t) / A.b
    return A.a * (tau * tau + s * s - t * t) / (2 * A.b)


def weight_eval(A, axis, t, tau):
    """W_A^axis(t, tau) as a (..., 4) quaternion array."""
    if A.b == 0:
        raise DegenerateB("weight needs b != 0")
    return kernel_amplitude(A) * slice_exp(axis.vec, _root_phase(A) + weight_phase(A, t, tau))


def chirp_free_weight_eval(A, axis, x, tau):
    """E_A^axis(x, tau) = exp(-axis*tau*x*a/b) / sqrt(-axis*2*pi*b)."""
    if A.b == 0:
        raise DegenerateB("weight needs b != 0")
    x = np.asarray(x, dtype=float)
    tau = np.asarray(tau, dtype=float)
    return kernel_amplitude(A) * slice_exp(axis.vec, -_root_phase(A) - tau * x * A.a / A.b)


def _root_phase(A):
    # 1/sqrt(axis*2*pi*b) = exp(-axis*sgn(b)*pi/4)/sqrt(2*pi*|b|)
    return -math.copysign(math.pi / 4, A.b)


# ------------------------------------------------------ convolution engine


def _offsets(grid):
    cx, cy = grid.cx, grid.cy
    if cx != int(cx) or cy != int(cy):
        raise GridMismatch("convolution needs the origin on the grid (even sizes when centered)")
    return int(cx), int(cy)


def _lags(n, c, periodic):
    m = np.arange(n)[:, None]
    k = m - np.arange(n)[None, :] + c
    if periodic:
        return k % n, np.ones_like(k, dtype=bool)
    ok = (k >= 0) & (k < n)
    return np.clip(k, 0, n - 1), ok


def _check_pair(f, g):
    if not f.spec.same_as(g.spec):
        raise GridMismatch("operands live on different grids")


def _engine(f, g, left, right, boundary):
    """sum_t L[m1, t1] f(t) g(lag) R[m2, t2] with L, R (n, n, 4) weights."""
    _check_pair(f, g)
    grid = f.spec
    c1, c2 = _offsets(grid)
    periodic = boundary == "periodic"
    if boundary not in ("zero", "periodic"):
        raise ValueError("boundary must be 'zero' or 'periodic'")
    k1, ok1 = _lags(grid.nx, c1, periodic)
    k2, ok2 = _lags(grid.ny, c2, periodic)
    fs, gs = f.samples, g.samples
    cell = grid.cell

    def rows(lo, hi):
        out = np.empty((hi - lo, grid.ny, 4))
        for r, m1 in enumerate(range(lo, hi)):
            G = gs[k1[m1]][:, k2]  # (t1, m2, t2, 4)
            G = G * (ok1[m1][:, None, None, None] & ok2[None, :, :, None])
            Lf = fs if left is None else qmul(left[m1][:, None, :], fs)
            P = qmul(Lf[:, None, :, :], G)
            if right is not None:
                P = qmul(P, right[None, :, :, :])
            out[r] = P.sum(axis=(0, 2)) * cell
        return out

    return Field2D(grid, np.concatenate(_parallel.map_chunks(rows, grid.nx), axis=0))


def _weight_matrix(A, axis, coords, c, periodic):
    n = len(coords)
    k, _ = _lags(n, c, periodic)
    t = coords[:, None]
    tau = coords[None, :]
    s = coords[k]
    return kernel_amplitude(A) * slice_exp(axis.vec, _root_phase(A) + weight_phase(A, t, tau, s))


def classical_convolve(f, g):
    """(f * g)(x, y) = sum f(x - t) g(t) dt with zero outside the grid."""
    # f(x - t) g(t) = sum over t' = x - t of f(t') g(x - t'), which is the
    # engine's (first operand at t, second at the lag) layout with f, g swapped
    # only if the product commuted; evaluate it in the written order instead
    _check_pair(f, g)
    grid = f.spec
    c1, c2 = _offsets(grid)
    k1, ok1 = _lags(grid.nx, c1, False)
    k2, ok2 = _lags(grid.ny, c2, False)
    fs, gs = f.samples, g.samples

    def rows(lo, hi):
        out = np.empty((hi - lo, grid.ny, 4))
        for r, m1 in enumerate(range(lo, hi)):
            F = fs[k1[m1]][:, k2] * (ok1[m1][:, None, None, None] & ok2[None, :, :, None])
            out[r] = qmul(F, gs[:, None, :, :]).sum(axis=(0, 2)) * grid.cell
        return out

    return Field2D(grid, np.concatenate(_parallel.map_chunks(rows, grid.nx), axis=0))


def spatial_convolve(f, g, spec, boundary="zero"):
    """Chirp-weighted convolution with left weight on mu and right on nu."""
    if spec.A1.b == 0 or spec.A2.b == 0:
        raise DegenerateB("spatial convolution needs b1, b2 != 0")
    _check_pair(f, g)
    grid = f.spec
    c1, c2 = _offsets(grid)
    periodic = boundary == "periodic"
    L = _weight_matrix(spec.A1, spec.mu, grid.x, c1, periodic)
    R = _weight_matrix(spec.A2, spec.nu, grid.y, c2, periodic)
    return _engine(f, g, L, R, boundary)


def _require_same_axis(spec):
    if spec.kind != "same":
        raise ValueError("this operator is defined for mu = nu")


def spectral_convolve(f, g, spec):
    """Inverse transform of L[f] L[g] on the grid of f (no padding)."""
    _require_same_axis(spec)
    _check_pair(f, g)
    F = qlct_forward_fast(f, spec)
    G = qlct_forward_fast(g, spec)
    return qlct_inverse(F.with_samples(qmul(F.samples, G.samples)), spec, f.spec)


def correlate_spatial(f, g, spec, boundary="zero"):
    """conj(f(-x, -y)) (*) g."""
    _require_same_axis(spec)
    return spatial_convolve(f.conj().reflect(), g, spec, boundary)


def correlate_spectral(f, g, spec):
    """f star conj(g(-x, -y))."""
    _require_same_axis(spec)
    return spectral_convolve(f, g.conj().reflect(), spec)


# ------------------------------------------------ helpers for the checks


def split_axis(spec):
    """The axis used to split f = f_a + f_b*nu for the mu = nu theorems."""
    frame = complete_frame(spec.mu, spec.nu)
    return UnitPureImaginary.from_vector(frame[1])


def components(f, spec):
    """Complex arrays (f_a, f_b) with f = f_a + f_b*nu along spec.mu."""
    frame = complete_frame(spec.mu, split_axis(spec))
    return to_pair(f.samples, frame)


def slice_field(grid, z, spec):
    return Field2D(grid, embed(z, spec.mu.vec))


def require_slice(f, axis, tol=SLICE_TOL):
    v = f.samples[..., 1:]
    off = v - (v @ axis.vec)[..., None] * axis.vec
    if np.max(np.abs(off)) > tol:
        raise NotSliceValued("field has components outside the slice (max %.2e)" % np.max(np.abs(off)))


def phase_field(grid, spec, s2=1.0, sign=-1.0):
    """exp(sign*mu*(d1 u^2/(2 b1) + s2*d2 v^2/(2 b2))) on a frequency grid."""
    U, V = grid.mesh()
    A1, A2 = spec.A1, spec.A2
    theta = A1.d * U * U / (2 * A1.b) + s2 * A2.d * V * V / (2 * A2.b)
    return slice_exp(spec.mu.vec, sign * theta)


def _pad(f, pad):
    return pad_field(f) if pad else f


def _tr(h, spec, grid):
    return qlct_forward_direct(h, spec, grid).samples


def _tr_neg(h, spec, grid):
    """L[h](-u, -v) by direct summation at the negated coordinates."""
    return qlct_direct_at(h, spec, -grid.x, -grid.y)


# --------------------------------------------------------------- verifiers


def verify_conv_theorem_slice(f, g, spec, tol=1e-6, pad=True):
    """Slice convolution theorem in its phase form and its tilde form."""
    _require_same_axis(spec)
    require_slice(f, spec.mu)
    require_slice(g, spec.mu)
    f, g = _pad(f, pad), _pad(g, pad)
    out = f.spec.conjugate(spec.A1.b, spec.A2.b)
    lhs = _tr(spatial_convolve(f, g, spec), spec, out)
    rhs1 = qmul(phase_field(out, spec), qmul(_tr(f, spec, out), _tr(g, spec, out)))
    st = spec.tilde()
    rhs2 = qmul(_tr(f, st, out), _tr(g, st, out))
    r1 = compare("phase_form", lhs, rhs1, tol)
    r2 = compare("tilde_form", lhs, rhs2, tol)
    rep = combine("conv_slice", [r1, r2], tol)
    rep.details["rhs_agreement"] = compare("rhs", rhs1, rhs2, 1e-10).max_rel
    return rep


def _full_rhs(parts, out, spec, tilde):
    Pfa, Pga, Pfb, Pgbc, Qfb, Qgac, Qfa, Qgb = parts
    a_part = qmul(Pfa, Pga) - qmul(Pfb, Pgbc)
    b_part = qmul(Qfb, Qgac) + qmul(Qfa, Qgb)
    if not tilde:
        a_part = qmul(phase_field(out, spec), a_part)
        b_part = qmul(phase_field(out, spec, s2=-1.0), b_part)
    nu = split_axis(spec)
    return a_part + qmul(b_part, np.r_[0.0, nu.vec])


def verify_conv_theorem_full(f, g, spec, tol=1e-6, pad=True):
    """Component form of the convolution theorem for full quaternion fields.

    f = f_a + f_b nu and g = g_a + nu conj(g_b); the nu-part uses the
    transform with the right axis flipped to -mu.
    """
    spec = spec.same_axis()
    f, g = _pad(f, pad), _pad(g, pad)
    grid = f.spec
    out = grid.conjugate(spec.A1.b, spec.A2.b)
    lhs = _tr(spatial_convolve(f, g, spec), spec, out)
    fa, fb = components(f, spec)
    ga, gb = components(g, spec)
    reports = []
    for tilde in (False, True):
        s = spec.tilde() if tilde else spec
        P = s
        Q = s.opposite_axis()

        def sf(z):
            return slice_field(grid, z, spec)

        parts = [
            _tr(sf(fa), P, out),
            _tr(sf(ga), P, out),
            _tr(sf(fb), P, out),
            _tr(sf(np.conj(gb)), P, out),
            _tr(sf(fb), Q, out),
            _tr(sf(np.conj(ga)), Q, out),
            _tr(sf(fa), Q, out),
            _tr(sf(gb), Q, out),
        ]
        rhs = _full_rhs(parts, out, spec, tilde)
        reports.append(compare("tilde_form" if tilde else "phase_form", lhs, rhs, tol))
    return combine("conv_full", reports, tol)


def _split_mu_nu(g, spec):
    """g = g1 + mu*g2 with g1, g2 in H(nu), returned as quaternion arrays."""
    frame = complete_frame(spec.mu, spec.nu)
    c = g.samples[..., 1:] @ frame.T  # coordinates along (mu, nu, eta)
    nu = frame[1]
    g1 = np.zeros(g.samples.shape)
    g2 = np.zeros(g.samples.shape)
    g1[..., 0] = g.samples[..., 0]
    g1[..., 1:] = c[..., 1:2] * nu
    g2[..., 0] = c[..., 0]
    g2[..., 1:] = c[..., 2:3] * nu
    return g1, g2


def _nested(F, h, spec, grid, out):
    """sum_s K1(s1, u) F(u, v) K2(s2, v) h(s) with F(u, v) held fixed."""
    K1 = kernel_array(spec.A1, spec.mu, grid.x, out.x)  # (s1, u, 4)
    K2 = kernel_array(spec.A2, spec.nu, grid.y, out.y)  # (s2, v, 4)
    # h is nu-valued, so it commutes with K2
    Ns = np.stack([qmul(h[s1][:, None, :], K2).sum(axis=0) for s1 in range(grid.nx)]) * grid.dy
    M = qmul(K1[:, :, None, :], F[None, :, :, :])  # (s1, u, v, 4)
    return qmul(M, Ns[:, None, :, :]).sum(axis=0) * grid.dx


def verify_general_conv_theorem(f, g, spec, tol=1e-5, pad=True, mode="frozen"):
    """Convolution theorem for orthogonal mu, nu with g = g1 + mu g2.

    The right-hand side nests two transforms.  mode='frozen' keeps the inner
    spectrum L[f](u, v) fixed while the outer sum runs over the variable of
    g1; mode='matched' instead reuses the inner spectrum samples as a field
    on the spatial grid, index by index.
    """
    if spec.kind != "orth":
        raise ValueError("general theorem needs mu orthogonal to nu")
    if max(f.spec.nx, f.spec.ny) > GENERAL_MAX_N:
        raise GridTooLarge("nested-transform check is limited to N <= %d" % GENERAL_MAX_N)
    f, g = _pad(f, pad), _pad(g, pad)
    grid = f.spec
    out = grid.conjugate(spec.A1.b, spec.A2.b)
    lhs = _tr(spatial_convolve(f, g, spec), spec, out)
    g1, g2 = _split_mu_nu(g, spec)
    F1 = _tr(f, spec, out)
    F2 = _tr(f.right_mul(np.r_[0.0, spec.mu.vec]), spec, out)
    if mode == "frozen":
        inner = _nested(F1, g1, spec, grid, out) + _nested(F2, g2, spec, grid, out)
    elif mode == "matched":
        t1 = Field2D(grid, qmul(F1, g1))
        t2 = Field2D(grid, qmul(F2, g2))
        inner = _tr(t1, spec, out) + _tr(t2, spec, out)
    else:
        raise ValueError("mode must be 'frozen' or 'matched'")
    U, V = out.mesh()
    left = slice_exp(spec.mu.vec, -spec.A1.d * U * U / (2 * spec.A1.b))
    right = slice_exp(spec.nu.vec, -spec.A2.d * V * V / (2 * spec.A2.b))
    rhs = qmul(qmul(left, inner), right)
    rep = compare("conv_general", lhs, rhs, tol)
    rep.details["mode"] = mode
    return rep


def verify_parseval(f, g, spec, tol=1e-5):
    """sum f conj(r) against sum L[f] conj(L[r]) with r built from g."""
    _require_same_axis(spec)
    require_slice(f, spec.mu)
    require_slice(g, spec.mu)
    grid = f.spec
    X, Y = grid.mesh()
    A1, A2 = spec.A1, spec.A2
    cx = slice_exp(spec.mu.vec, X * X * A1.a / A1.b)
    cy = slice_exp(spec.mu.vec, Y * Y * A2.a / A2.b)
    rbar = qmul(qmul(cx, reflect_samples(g.samples, grid)), cy)
    r = Field2D(grid, qconj(rbar))
    lhs = qmul(f.samples, rbar).sum(axis=(0, 1)) * grid.cell
    out = grid.conjugate(A1.b, A2.b)
    Lf = _tr(f, spec, out)
    Lr = _tr(r, spec, out)
    rhs = qmul(Lf, qconj(Lr)).sum(axis=(0, 1)) * out.cell
    den = np.linalg.norm(lhs)
    err = float(np.linalg.norm(lhs - rhs) / den) if den > 0 else float(np.linalg.norm(rhs))
    return TheoremReport("parseval", err, (0, 0), err, tol, {"lhs": lhs.tolist(), "rhs": rhs.tolist()})


def verify_energy(f, spec, tol=1e-6):
    _require_same_axis(spec)
    grid = f.spec
    out = grid.conjugate(spec.A1.b, spec.A2.b)
    e1 = math.sqrt(np.sum(f.samples**2) * grid.cell)
    e2 = math.sqrt(np.sum(_tr(f, spec, out) ** 2) * out.cell)
    err = abs(e1 - e2) / e1 if e1 > 0 else e2
    return TheoremReport("energy", err, (0, 0), err, tol, {"norm_f": e1, "norm_Lf": e2})


def verify_spectral_conv(f, g, spec, tol=1e-6):
    _require_same_axis(spec)
    out = f.spec.conjugate(spec.A1.b, spec.A2.b)
    lhs = _tr(spectral_convolve(f, g, spec), spec, out)
    rhs = qmul(_tr(f, spec, out), _tr(g, spec, out))
    return compare("spectral_conv", lhs, rhs, tol)


def verify_product_theorem(f, g, spec, tol=1e-5, forms=("slice", "full")):
    """Transform of a product against the inverse-matrix convolution of spectra.

    The spectral-domain convolution is periodic (spectra are not compactly
    supported on the frequency grid); on even grids the identity is exact.
    """
    _require_same_axis(spec)
    grid = f.spec
    out = grid.conjugate(spec.A1.b, spec.A2.b)
    inv = spec.inverse()
    X, Y = grid.mesh()
    A1, A2 = spec.A1, spec.A2
    cx = slice_exp(spec.mu.vec, A1.a * X * X / (2 * A1.b))
    cy = slice_exp(spec.mu.vec, A2.a * Y * Y / (2 * A2.b))
    fg = qmul(f.samples, g.samples)
    lhs_chirp = _tr(Field2D(grid, qmul(qmul(cx, fg), cy)), spec, out)
    lhs_breve = _tr(Field2D(grid, fg), spec.breve(), out)
    reports = [compare("chirp_vs_breve", lhs_chirp, lhs_breve, tol)]

    def sconv(P, Q, s):
        return spatial_convolve(Field2D(out, P), Field2D(out, Q), s, "periodic").samples

    if "slice" in forms:
        require_slice(f, spec.mu)
        require_slice(g, spec.mu)
        rhs = sconv(_tr(f, spec, out), _tr(g, spec, out), inv)
        reports.append(compare("slice", lhs_breve, rhs, tol))
    if "full" in forms:
        fa, fb = components(f, spec)
        ga, gb = components(g, spec)
        P, Q = spec, spec.opposite_axis()
        sf = lambda z: slice_field(grid, z, spec)  # noqa: E731
        a_part = sconv(_tr(sf(fa), P, out), _tr(sf(ga), P, out), inv) - sconv(
            _tr(sf(fb), P, out), _tr(sf(np.conj(gb)), P, out), inv
        )
        invq = inv.opposite_axis()
        b_part = sconv(_tr(sf(fb), Q, out), _tr(sf(np.conj(ga)), Q, out), invq) + sconv(
            _tr(sf(fa), Q, out), _tr(sf(gb), Q, out), invq
        )
        nu = split_axis(spec)
        rhs = a_part + qmul(b_part, np.r_[0.0, nu.vec])
        reports.append(compare("full", lhs_breve, rhs, tol))
    return combine("product", reports, tol)


def verify_correlation_slice(f, g, spec, tol=1e-6, pad=True):
    _require_same_axis(spec)
    require_slice(f, spec.mu)
    require_slice(g, spec.mu)
    f, g = _pad(f, pad), _pad(g, pad)
    out = f.spec.conjugate(spec.A1.b, spec.A2.b)
    lhs = _tr(correlate_spatial(f, g, spec), spec, out)
    rhs = qmul(phase_field(out, spec), qmul(_tr_neg(f.conj(), spec, out), _tr(g, spec, out)))
    return compare("correlation_slice", lhs, rhs, tol)


def verify_correlation_full(f, g, spec, tol=1e-5, pad=True):
    """Component form of the correlation theorem, f = f_a + f_b nu."""
    spec = spec.same_axis()
    f, g = _pad(f, pad), _pad(g, pad)
    grid = f.spec
    out = grid.conjugate(spec.A1.b, spec.A2.b)
    lhs = _tr(correlate_spatial(f, g, spec), spec, out)
    fa, fb = components(f, spec)
    ga, gb = components(g, spec)
    P, Q = spec, spec.opposite_axis()
    sf = lambda z: slice_field(grid, z, spec)  # noqa: E731
    a_part = qmul(_tr_neg(sf(np.conj(fa)), P, out), _tr(sf(ga), P, out)) + qmul(
        _tr_neg(sf(fb), P, out), _tr(sf(np.conj(gb)), P, out)
    )
    b_part = qmul(_tr_neg(sf(fb), Q, out), _tr(sf(np.conj(ga)), Q, out)) - qmul(
        _tr_neg(sf(np.conj(fa)), Q, out), _tr(sf(gb), Q, out)
    )
    nu = split_axis(spec)
    rhs = qmul(phase_field(out, spec), a_part) - qmul(
        qmul(phase_field(out, spec, s2=-1.0), b_part), np.r_[0.0, nu.vec]
    )
    return compare("correlation_full", lhs, rhs, tol)


def verify_correlation_spectral(f, g, spec, tol=1e-6, pad=True):
    _require_same_axis(spec)
    f, g = _pad(f, pad), _pad(g, pad)
    out = f.spec.conjugate(spec.A1.b, spec.A2.b)
    lhs = _tr(correlate_spectral(f, g, spec), spec, out)
    rhs = qmul(_tr(f, spec, out), _tr_neg(g.conj(), spec, out))
    return compare("correlation_spectral", lhs, rhs, tol)


# ---------------------------------------------- spatial form of the star


def _axis_weights(A, coords, kind):
    """Complex weight matrix w[m, n] for output coordinate m, integration n."""
    amp = kernel_amplitude(A)
    root = np.exp(1j * _root_phase(A))  # 1/sqrt(i 2 pi b) up to amp
    t = coords[:, None]
    tau = coords[None, :]
    ab = A.a / A.b
    if kind == "W":  # W(x, tau)
        return amp * root * np.exp(1j * ab * tau * (tau - t))
    if kind == "Wbar":  # conj W(x, tau)
        return amp * np.conj(root) * np.exp(-1j * ab * tau * (tau - t))
    if kind == "E":  # 1/sqrt(-i 2 pi b) exp(-i tau x a/b)
        return amp * np.conj(root) * np.exp(-1j * ab * tau * t)
    if kind == "W_swap":  # W(tau, y) = c exp(i y (y - tau) a/b)
        return amp * root * np.exp(1j * ab * t * (t - tau))
    if kind == "Wbar_swap":  # conj W(tau, y)
        return amp * np.conj(root) * np.exp(-1j * ab * t * (t - tau))
    if kind == "Wcheck_swap_conj":  # conj W_check(tau, y), the printed third term
        return amp * np.conj(root) * np.exp(1j * ab * t * (t - tau))
    raise ValueError(kind)


def _lag_sum(w1, w2, P, Q, grid, p_modes, q_reflect):
    """J[m] = sum_n w1[m1,n1] w2[m2,n2] P[i1, i2] Q[j1, j2] dx dy.

    p_modes[k] is 'x-t' (P index m - n + c) or 't-x' (n - m + c);
    q_reflect[k] reads Q at -t instead of t.
    """
    idx = []
    for n, c, mode in ((grid.nx, int(grid.cx), p_modes[0]), (grid.ny, int(grid.cy), p_modes[1])):
        m = np.arange(n)[:, None]
        t = np.arange(n)[None, :]
        k = m - t + c if mode == "x-t" else t - m + c
        idx.append((np.clip(k, 0, n - 1), (k >= 0) & (k < n)))
    (i1, ok1), (i2, ok2) = idx
    Pg = P[i1[:, :, None, None], i2[None, None, :, :]]
    Pg = Pg * (ok1[:, :, None, None] & ok2[None, None, :, :])
    Qr = Q
    for axis, refl in enumerate(q_reflect):
        if refl:
            Qr = _reflect_axis(Qr, axis, grid)
    return np.einsum("ab,cd,abcd,bd->ac", w1, w2, Pg, Qr) * grid.cell


def _reflect_axis(Z, axis, grid):
    n = Z.shape[axis]
    c = int(grid.cx if axis == 0 else grid.cy)
    j = 2 * c - np.arange(n)
    ok = (j >= 0) & (j < n)
    out = np.zeros_like(Z)
    if axis == 0:
        out[ok] = Z[j[ok]]
    else:
        out[:, ok] = Z[:, j[ok]]
    return out


def _lct2(z, A1, A2, grid, s1, s2):
    t = lct_axis(z, A1, grid.dx, grid.cx, s1, 0)
    return lct_axis(t, A2, grid.dy, grid.cy, s2, 1)


def spectral_convolve_spatial_form(f, g, spec, printed_third_term=False):
    """Four-term spatial representation of f star g.

    Each term is a weighted spatial sum of components; a term written as
    exp(phase) * J stands for the inverse transform of exp(phase) * L[J],
    using the transform that matches the term's slot (the nu-part uses the
    right axis flipped to -mu).  Exact when supp f + supp g fits the grid.
    printed_third_term=True uses the weight conj(W_check(A2)) printed in the
    source formula instead of conj(W(A2)) (they differ by a constant).
    """
    _require_same_axis(spec)
    _check_pair(f, g)
    grid = f.spec
    _offsets(grid)
    A1, A2 = spec.A1, spec.A2
    fa, fb = components(f, spec)
    ga, gb = components(g, spec)
    x, y = grid.x, grid.y
    third = "Wcheck_swap_conj" if printed_third_term else "W_swap"
    J1 = _lag_sum(_axis_weights(A1, x, "W"), _axis_weights(A2, y, "W"), fa, ga, grid, ("x-t", "x-t"), (False, False))
    J2 = _lag_sum(_axis_weights(A1, x, "E"), _axis_weights(A2, y, "Wbar"), fb, np.conj(ga), grid, ("x-t", "x-t"), (True, False))
    J3 = _lag_sum(_axis_weights(A1, x, "W"), _axis_weights(A2, y, third), fa, gb, grid, ("x-t", "t-x"), (False, False))
    J4 = _lag_sum(_axis_weights(A1, x, "E"), _axis_weights(A2, y, "Wbar_swap"), fb, np.conj(gb), grid, ("x-t", "t-x"), (True, False))
    out = grid.conjugate(A1.b, A2.b)
    U, V = out.mesh()
    phi = A1.d * U * U / (2 * A1.b) + A2.d * V * V / (2 * A2.b)
    inv1, inv2 = A1.inverse(), A2.inverse()

    def through(J, s2, sign):
        # inverse of (phase * transform), the right axis sign s2 picks P or Q
        Z = np.exp(1j * sign * phi) * _lct2(J, A1, A2, grid, +1, s2)
        return _lct2(Z, inv1, inv2, out, +1, s2)

    a_part = through(J1, +1, +1) - through(J4, +1, -1)
    b_part = through(J2, -1, -1) + through(J3, -1, +1)
    frame = complete_frame(spec.mu, split_axis(spec))
    return Field2D(grid, from_pair(a_part, b_part, frame))


# ------------------------------------------------------------ the suite


def suite_spec():
    """Parameters used by the default verification suite."""
    from .transform import ParamMatrix, TransformSpec

    return TransformSpec(ParamMatrix(1, 2, 0, 1), ParamMatrix(0.5, 1, -0.5, 1), MU, MU)


def default_suite(seed=0, size=16, tol=None, include_general=False, general_size=8, dx=0.5):
    """Seeded run of every verifier; returns TheoremReports in a fixed order."""
    from .grid import GridSpec2D, random_field
    from .quaternion import NU

    rng = np.random.default_rng(seed)
    spec = suite_spec()
    grid = GridSpec2D(size, size, dx, dx)

    def slice_pair():
        return random_field(grid, rng, slice_valued=True), random_field(grid, rng, slice_valued=True)

    def full_pair():
        return random_field(grid, rng), random_field(grid, rng)

    def t(default):
        return default if tol is None else tol

    reports = []
    fs, gs = slice_pair()
    f, g = full_pair()
    reports.append(verify_conv_theorem_slice(fs, gs, spec, t(1e-6)))
    reports.append(verify_conv_theorem_full(f, g, spec, t(1e-6)))
    reports.append(verify_spectral_conv(f, g, spec, t(1e-6)))
    reports.append(verify_parseval(fs, gs, spec, t(1e-5)))
    reports.append(verify_energy(f, spec, t(1e-6)))
    reports.append(verify_product_theorem(f, g, spec, t(1e-5), forms=("full",)))
    reports[-1] = combine(
        "product", [verify_product_theorem(fs, gs, spec, t(1e-5), forms=("slice",)), reports[-1]], t(1e-5)
    )
    corr = [verify_correlation_slice(fs, gs, spec, t(1e-5)), verify_correlation_full(f, g, spec, t(1e-5))]
    reports.append(combine("correlation_spatial", corr, t(1e-5)))
    reports.append(verify_correlation_spectral(f, g, spec, t(1e-6)))
    if include_general:
        small = GridSpec2D(general_size, general_size, dx, dx)
        orth = spec.replace(nu=NU)
        reports.append(
            verify_general_conv_theorem(random_field(small, rng), random_field(small, rng), orth, t(1e-5))
        )
    return reports
