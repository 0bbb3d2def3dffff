"""Two-sided quaternion linear canonical transform.

    L[f](u, v) = sum_x sum_y K1(x, u) f(x, y) K2(y, v) dx dy

with the left kernel K1 built on axis mu and the right kernel K2 on axis nu.
Two independent evaluation routes are provided: a direct quaternion
summation that works for any output grid, and a fast route that splits f
into a pair of complex fields and evaluates each axis as
chirp * DFT * chirp on the canonical conjugate grid.
"""
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from . import _parallel
from .errors import DegenerateB, GridMismatch, InvalidDegenerate, InvalidDeterminant, NonOrthogonalAxes
from .grid import Field2D, GridSpec2D
from .quaternion import (
    ETA,
    MU,
    NU,
    Quaternion,
    UnitPureImaginary,
    complete_frame,
    from_pair,
    orthogonal,
    qmul,
    slice_exp,
    to_pair,
)

DET_TOL = 1e-12


@dataclass(frozen=True)
class ParamMatrix:
    """Unit-determinant matrix (a, b; c, d) for one transform axis."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, float(getattr(self, name)))
        if abs(self.det - 1.0) > DET_TOL:
            raise InvalidDeterminant(
                "matrix (%g, %g, %g, %g) has determinant %.15g, expected 1"
                % (self.a, self.b, self.c, self.d, self.det)
            )

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def inverse(self):
        return ParamMatrix(self.d, -self.b, -self.c, self.a)

    def tilde(self):
        return ParamMatrix(self.a, self.b, self.c / 2 - 1 / (2 * self.b), self.d / 2)

    def breve(self):
        return ParamMatrix(2 * self.a, self.b, 1 / self.b + 2 * self.c, self.d)

    def hat(self):
        return ParamMatrix(self.a, self.b, 2 * self.c + 1 / self.b, 2 * self.d)

    def check(self):
        return ParamMatrix(-self.a, self.b, self.c, -self.d)

    @classmethod
    def from_abd(cls, a, b, d):
        """Solve c from the determinant condition."""
        return cls(a, b, (a * d - 1.0) / b, d)


FOURIER = ParamMatrix(0.0, 1.0, -1.0, 0.0)


@dataclass(frozen=True)
class TransformSpec:
    A1: ParamMatrix
    A2: ParamMatrix
    mu: UnitPureImaginary = MU
    nu: UnitPureImaginary = NU

    def __post_init__(self):
        dot = float(np.dot(self.mu.vec, self.nu.vec))
        if not (abs(dot) <= 1e-12 or abs(abs(dot) - 1.0) <= 1e-12):
            raise NonOrthogonalAxes("nu must be orthogonal to mu or equal to +-mu (dot=%g)" % dot)

    @property
    def kind(self):
        """'orth', 'same' (nu = mu) or 'opposite' (nu = -mu)."""
        dot = float(np.dot(self.mu.vec, self.nu.vec))
        if abs(dot) <= 1e-12:
            return "orth"
        return "same" if dot > 0 else "opposite"

    def replace(self, **kw):
        vals = dict(A1=self.A1, A2=self.A2, mu=self.mu, nu=self.nu)
        vals.update(kw)
        return TransformSpec(**vals)

    def inverse(self):
        return self.replace(A1=self.A1.inverse(), A2=self.A2.inverse())

    def tilde(self):
        return self.replace(A1=self.A1.tilde(), A2=self.A2.tilde())

    def breve(self):
        return self.replace(A1=self.A1.breve(), A2=self.A2.breve())

    def hat(self):
        return self.replace(A1=self.A1.hat(), A2=self.A2.hat())

    def same_axis(self):
        return self.replace(nu=self.mu)

    def opposite_axis(self):
        return self.replace(nu=-self.mu)

    def to_text(self):
        return "%s / %s / %s / %s" % (
            " ".join(_fmt(v) for v in self.A1.as_tuple()),
            " ".join(_fmt(v) for v in self.A2.as_tuple()),
            _axis_text(self.mu),
            _axis_text(self.nu),
        )

    @classmethod
    def from_text(cls, text):
        parts = _split_spec(text)
        if len(parts) not in (2, 4):
            raise ValueError("spec needs 'a1 b1 c1 d1 / a2 b2 c2 d2 / mu_axis / nu_axis'")
        mats = []
        for name, chunk in zip(("A1", "A2"), parts[:2]):
            vals = [_number(t) for t in chunk.split()]
            if len(vals) != 4:
                raise ValueError("%s needs four entries, got %d" % (name, len(vals)))
            try:
                mats.append(ParamMatrix(*vals))
            except InvalidDeterminant as exc:
                raise InvalidDeterminant("%s: %s" % (name, exc)) from None
        mu = parse_axis(parts[2]) if len(parts) == 4 else MU
        nu = parse_axis(parts[3]) if len(parts) == 4 else NU
        return cls(mats[0], mats[1], mu, nu)


def _split_spec(text):
    # fractions such as -1/2 also contain '/', so split on separators that
    # are surrounded by whitespace
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    flat = " ".join(ln for ln in lines if ln.strip())
    out, cur = [], []
    for tok in flat.split():
        if tok == "/":
            out.append(" ".join(cur))
            cur = []
        else:
            cur.append(tok)
    out.append(" ".join(cur))
    return [p.strip() for p in out]


def _number(tok):
    return float(Fraction(tok)) if "/" in tok else float(tok)


def _fmt(v):
    return repr(float(v))


_NAMED = {"i": MU, "j": NU, "k": ETA, "mu": MU, "nu": NU, "eta": ETA}


def parse_axis(text):
    t = text.strip().lower()
    sign = 1
    if t.startswith("-"):
        sign, t = -1, t[1:].strip()
    elif t.startswith("+"):
        t = t[1:].strip()
    if t in _NAMED:
        ax = _NAMED[t]
        return -ax if sign < 0 else ax
    vals = [_number(x) for x in text.replace(",", " ").split()]
    if len(vals) == 4:
        if vals[0] != 0.0:
            raise ValueError("axis must be pure imaginary")
        vals = vals[1:]
    if len(vals) != 3:
        raise ValueError("cannot parse axis %r" % text)
    return UnitPureImaginary.from_vector(vals, normalize=True)


def _axis_text(ax):
    for name, ref in (("i", MU), ("j", NU), ("k", ETA)):
        if np.allclose(ax.vec, ref.vec, atol=0, rtol=0):
            return name
        if np.allclose(ax.vec, -ref.vec, atol=0, rtol=0):
            return "-" + name
    return " ".join(_fmt(v) for v in ax.vec)


def qft_spec(mu=MU, nu=NU):
    return TransformSpec(FOURIER, FOURIER, mu, nu)


def qfrft_spec(alpha, beta, mu=MU, nu=NU):
    """Rotation matrices (cos, sin; -sin, cos) for the fractional case."""
    return TransformSpec(_rotation(alpha), _rotation(beta), mu, nu)


def _rotation(t):
    c, s = math.cos(t), math.sin(t)
    # snap rounding noise so multiples of pi reach the b = 0 branch
    if abs(s) < 1e-15:
        s, c = 0.0, math.copysign(1.0, c)
    if abs(c) < 1e-15:
        c, s = 0.0, math.copysign(1.0, s)
    return ParamMatrix(c, s, -s, c)


# ---------------------------------------------------------------- kernels


def kernel_phase(A, x, u):
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    b = A.b
    return -math.copysign(math.pi / 4, b) + (A.a * x * x - 2 * x * u + A.d * u * u) / (2 * b)


def kernel_amplitude(A):
    return 1.0 / math.sqrt(2 * math.pi * abs(A.b))


def kernel_array(A, axis, x, u):
    """K_A^axis(x_m, u_k) as an (len(x), len(u), 4) array."""
    if A.b == 0:
        raise DegenerateB("kernel needs b != 0")
    x = np.asarray(x, dtype=float)[:, None]
    u = np.asarray(u, dtype=float)[None, :]
    return kernel_amplitude(A) * slice_exp(axis.vec, kernel_phase(A, x, u))


def kernel_eval(A, mu, x, u):
    if A.b == 0:
        raise DegenerateB("kernel needs b != 0; use the degenerate branch")
    return Quaternion.from_array(kernel_amplitude(A) * slice_exp(mu.vec, kernel_phase(A, x, u)))


# ---------------------------------------------------------- direct oracle


def _mult_table():
    e = np.eye(4)
    return np.stack([np.stack([qmul(e[a], e[b]) for b in range(4)]) for a in range(4)])


_G = _mult_table()


def left_sum(K, f, w):
    """out[u, y] = sum_x K[x, u] * f[x, y] * w (quaternion product order kept)."""
    KG = np.einsum("xua,abc->xubc", K, _G)

    def rows(lo, hi):
        return np.einsum("xubc,xyb->uyc", KG[:, lo:hi], f) * w

    return np.concatenate(_parallel.map_chunks(rows, K.shape[1]), axis=0)


def right_sum(T, K, w):
    """out[u, v] = sum_y T[u, y] * K[y, v] * w."""
    GK = np.einsum("abc,yvb->yvac", _G, K)

    def rows(lo, hi):
        return np.einsum("uya,yvac->uvc", T[lo:hi], GK) * w

    return np.concatenate(_parallel.map_chunks(rows, T.shape[0]), axis=0)


def qlct_direct_at(f, spec, u, v):
    """Direct quaternion sum at arbitrary output coordinates u, v."""
    if spec.A1.b == 0 or spec.A2.b == 0:
        raise DegenerateB("direct summation needs b1, b2 != 0")
    g = f.spec
    K1 = kernel_array(spec.A1, spec.mu, g.x, u)
    K2 = kernel_array(spec.A2, spec.nu, g.y, v)
    T = left_sum(K1, f.samples, g.dx)
    return right_sum(T, K2, g.dy)


def qlct_forward_direct(f, spec, out_grid=None):
    if out_grid is None:
        out_grid = f.spec.conjugate(spec.A1.b, spec.A2.b)
    return Field2D(out_grid, qlct_direct_at(f, spec, out_grid.x, out_grid.y))


# -------------------------------------------------------------- fast path


def lct_axis(h, A, n_dx, cx, sign, axis, out_c=None):
    """One-axis complex LCT along `axis` onto the canonical conjugate grid.

    Evaluates sum_n K^s(x_n, u_k) h_n dx where x_n = (n - cx) dx,
    u_k = (k - out_c) du, du = 2 pi |b| / (N dx) and K^s uses exp(s*i*...).
    """
    dx = n_dx
    h = np.moveaxis(np.asarray(h, dtype=complex), axis, -1)
    N = h.shape[-1]
    ck = N / 2 if out_c is None else out_c
    b = A.b
    du = 2 * math.pi * abs(b) / (N * dx)
    n = np.arange(N)
    x = (n - cx) * dx
    u = (n - ck) * du
    sigma = sign * (1 if b > 0 else -1)
    pre = np.exp(1j * sign * A.a * x * x / (2 * b)) * np.exp(2j * math.pi * sigma * n * ck / N)
    g = h * pre
    if sigma > 0:
        F = np.fft.fft(g, axis=-1)
    else:
        F = np.fft.ifft(g, axis=-1) * N
    post = (
        kernel_amplitude(A)
        * dx
        * np.exp(1j * sign * (A.d * u * u / (2 * b) - math.copysign(math.pi / 4, b)))
        * np.exp(2j * math.pi * sigma * (cx * n - cx * ck) / N)
    )
    return np.moveaxis(F * post, -1, axis)


def _canonical(grid, spec, out_grid):
    canon = grid.conjugate(spec.A1.b, spec.A2.b)
    if out_grid is None:
        return canon
    ok = (
        out_grid.shape == canon.shape
        and abs(out_grid.dx - canon.dx) <= 1e-12 * canon.dx
        and abs(out_grid.dy - canon.dy) <= 1e-12 * canon.dy
    )
    if not ok:
        raise GridMismatch("fast path only evaluates on the canonical conjugate grid")
    return out_grid


def transform_pair(A_c, B_c, spec, grid, out_grid):
    """Fast transform of q = A + B*nu' given as complex arrays in the frame."""
    A1, A2 = spec.A1, spec.A2
    oc1, oc2 = out_grid.cx, out_grid.cy
    TA = lct_axis(A_c, A1, grid.dx, grid.cx, +1, 0, oc1)
    TB = lct_axis(B_c, A1, grid.dx, grid.cx, +1, 0, oc1)

    def right(T, s):
        return lct_axis(T, A2, grid.dy, grid.cy, s, 1, oc2)

    kind = spec.kind
    if kind == "same":
        return right(TA, +1), right(TB, -1)
    if kind == "opposite":
        return right(TA, -1), right(TB, +1)
    # right kernel p + q*nu with p, q real: T*p and T*q via kernel and its conjugate
    Ap, Am = right(TA, +1), right(TA, -1)
    Bp, Bm = right(TB, +1), right(TB, -1)
    TAp, TAq = (Ap + Am) / 2, (Ap - Am) / 2j
    TBp, TBq = (Bp + Bm) / 2, (Bp - Bm) / 2j
    return TAp - TBq, TAq + TBp


def qlct_forward_fast(f, spec, out_grid=None):
    if spec.A1.b == 0 or spec.A2.b == 0:
        raise DegenerateB("fast path needs b1, b2 != 0")
    out_grid = _canonical(f.spec, spec, out_grid)
    frame = complete_frame(spec.mu, spec.nu)
    A_c, B_c = to_pair(f.samples, frame)
    oa, ob = transform_pair(A_c, B_c, spec, f.spec, out_grid)
    return Field2D(out_grid, from_pair(oa, ob, frame))


def qlct_inverse(F, spec, out_grid=None):
    """Inverse transform: the forward machinery with inverse matrices."""
    inv = spec.inverse()
    if inv.A1.b == 0 or inv.A2.b == 0:
        raise DegenerateB("inverse transform needs b1, b2 != 0")
    try:
        return qlct_forward_fast(F, inv, out_grid)
    except GridMismatch:
        return qlct_forward_direct(F, inv, out_grid)


def qlct(f, spec, method="fast", out_grid=None):
    """Dispatch: degenerate branch when some b = 0, else fast or direct."""
    if spec.A1.b == 0 or spec.A2.b == 0:
        return qlct_degenerate(f, spec)
    if method == "direct":
        return qlct_forward_direct(f, spec, out_grid)
    return qlct_forward_fast(f, spec, out_grid)


# ------------------------------------------------------- degenerate branch


def _scale_axis(arr, grid_coords, spacing, offset, d, axis):
    """Nearest-neighbour samples of h(d*u) on the same grid, zero outside."""
    n = arr.shape[axis]
    idx = np.rint(d * grid_coords / spacing + offset).astype(int)
    ok = (idx >= 0) & (idx < n)
    out = np.zeros_like(arr)
    src = np.take(arr, np.clip(idx, 0, n - 1), axis=axis)
    shape = [1] * arr.ndim
    shape[axis] = n
    return np.where(ok.reshape(shape), src, out)


def qlct_degenerate(f, spec):
    """Evaluate axes with b = 0 as sqrt|d| * chirp * scaling.

    A degenerate axis keeps the input sample spacing; a regular axis is
    summed directly onto its canonical conjugate grid.
    """
    g = f.spec
    A1, A2 = spec.A1, spec.A2
    for A in (A1, A2):
        if A.b == 0 and A.d == 0:
            raise InvalidDegenerate("b = 0 requires d != 0")
    arr = f.samples
    if A1.b == 0:
        u = g.x
        du, cu = g.dx, g.cx
        T = _scale_axis(arr, u, g.dx, g.cx, A1.d, 0)
        chirp = math.sqrt(abs(A1.d)) * slice_exp(spec.mu.vec, A1.c * A1.d * u * u / 2)
        T = qmul(chirp[:, None, :], T)
    else:
        du = 2 * math.pi * abs(A1.b) / (g.nx * g.dx)
        cu = g.nx / 2
        u = (np.arange(g.nx) - cu) * du
        T = left_sum(kernel_array(A1, spec.mu, g.x, u), arr, g.dx)
    if A2.b == 0:
        v = g.y
        dv = g.dy
        out = _scale_axis(T, v, g.dy, g.cy, A2.d, 1)
        chirp = math.sqrt(abs(A2.d)) * slice_exp(spec.nu.vec, A2.c * A2.d * v * v / 2)
        out = qmul(out, chirp[None, :, :])
        cv_centered = g.centered
    else:
        dv = 2 * math.pi * abs(A2.b) / (g.ny * g.dy)
        v = (np.arange(g.ny) - g.ny / 2) * dv
        out = right_sum(T, kernel_array(A2, spec.nu, g.y, v), g.dy)
        cv_centered = True
    centered = (g.centered if A1.b == 0 else True) and cv_centered
    if (A1.b == 0) != (A2.b == 0) and not g.centered:
        raise GridMismatch("mixed degenerate transform needs a centered input grid")
    return Field2D(GridSpec2D(g.nx, g.ny, du, dv, centered), out)


# ------------------------------------------------------------------ QFT


def qft(f, mu=MU, nu=NU, out_grid=None):
    """Unnormalized two-sided QFT: sum exp(-mu u x) f exp(-nu v y) dx dy.

    The default output grid is the canonical conjugate grid for b = 1.
    """
    g = f.spec
    if out_grid is None:
        out_grid = g.conjugate(1.0, 1.0)
    E1 = slice_exp(mu.vec, -np.outer(g.x, out_grid.x))
    E2 = slice_exp(nu.vec, -np.outer(g.y, out_grid.y))
    T = left_sum(E1, f.samples, g.dx)
    return Field2D(out_grid, right_sum(T, E2, g.dy))


def qft_constant(axis):
    """exp(-axis*pi/4)/sqrt(2 pi): the factor relating L_(0,1,-1,0) to the QFT."""
    return Quaternion.from_array(slice_exp(axis.vec, -math.pi / 4) / math.sqrt(2 * math.pi))
