"""Quaternion arithmetic, slices and the f = f_a + f_b*nu split.

Arrays of quaternions carry the four components (r, i, j, k) on the last
axis.  With the canonical triple mu = i, nu = j, eta = k these are exactly
the (r, mu, nu, eta) components used throughout the package.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DivisionByZeroQuaternion, NonOrthogonalAxes, NotSliceValued

AXIS_TOL = 1e-12
DEFAULT_FLOOR = 1e-300


def qmul(p, q):
    """Hamilton product of broadcastable (..., 4) arrays."""
    p = np.asarray(p)
    q = np.asarray(q)
    p0, p1, p2, p3 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    q0, q1, q2, q3 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack(
        [
            p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
            p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
            p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
            p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
        ],
        axis=-1,
    )


def qconj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qabs2(q):
    q = np.asarray(q)
    return np.sum(q * q, axis=-1)


def qabs(q):
    return np.sqrt(qabs2(q))


def qinv(q, floor=DEFAULT_FLOOR):
    n2 = qabs2(q)
    if np.any(np.sqrt(n2) < floor):
        raise DivisionByZeroQuaternion("quaternion modulus below floor %g" % floor)
    return qconj(q) / n2[..., None]


def slice_exp(axis, theta):
    """cos(theta) + axis*sin(theta) as a (..., 4) array; axis is a 3-vector."""
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.shape + (4,))
    out[..., 0] = np.cos(theta)
    s = np.sin(theta)
    for k in range(3):
        out[..., k + 1] = s * axis[k]
    return out


def embed(z, axis):
    """Complex array z -> Re z + axis*Im z."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape + (4,))
    out[..., 0] = z.real
    for k in range(3):
        out[..., k + 1] = z.imag * axis[k]
    return out


@dataclass(frozen=True)
class Quaternion:
    """q = r + mu*mu_c + nu*nu_c + eta*eta_c (canonical triple)."""

    r: float = 0.0
    mu_c: float = 0.0
    nu_c: float = 0.0
    eta_c: float = 0.0

    def __post_init__(self):
        for name in ("r", "mu_c", "nu_c", "eta_c"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValueError("quaternion component %s is not finite" % name)
            object.__setattr__(self, name, val)

    @classmethod
    def from_array(cls, arr):
        a = np.asarray(arr, dtype=float).reshape(4)
        return cls(*a)

    def as_array(self):
        return np.array([self.r, self.mu_c, self.nu_c, self.eta_c])

    def __iter__(self):
        return iter((self.r, self.mu_c, self.nu_c, self.eta_c))

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Quaternion.from_array(self.as_array() + other.as_array())

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Quaternion.from_array(self.as_array() - other.as_array())

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Quaternion.from_array(-self.as_array())

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return quat_mul(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return quat_mul(other, self)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self.as_array() / other)
        return NotImplemented

    def __abs__(self):
        return modulus(self)

    def conjugate(self):
        return conjugate(self)

    def inverse(self, floor=DEFAULT_FLOOR):
        return quat_inverse(self, floor)

    def isclose(self, other, tol=1e-12):
        other = _coerce(other)
        return bool(np.max(np.abs(self.as_array() - other.as_array())) <= tol)


def _coerce(x):
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Quaternion(float(x))
    return None


def quat_mul(p, q):
    return Quaternion.from_array(qmul(p.as_array(), q.as_array()))


def conjugate(q):
    return Quaternion.from_array(qconj(q.as_array()))


def modulus(q):
    # hypot keeps tiny and huge components stable
    return math.hypot(q.r, q.mu_c, q.nu_c, q.eta_c)


def quat_inverse(q, floor=DEFAULT_FLOOR):
    n = modulus(q)
    if n < floor:
        raise DivisionByZeroQuaternion("cannot invert quaternion with modulus %g" % n)
    return Quaternion.from_array(qconj(q.as_array()) / (n * n))


@dataclass(frozen=True)
class UnitPureImaginary:
    axis: Quaternion

    def __post_init__(self):
        a = self.axis
        if a.r != 0.0:
            raise ValueError("unit pure imaginary must have zero real part")
        if abs(modulus(a) - 1.0) > AXIS_TOL:
            raise ValueError("unit pure imaginary must have modulus 1, got %r" % modulus(a))

    @classmethod
    def from_vector(cls, v, normalize=False):
        v = np.asarray(v, dtype=float).reshape(3)
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(Quaternion(0.0, *v))

    @property
    def vec(self):
        return np.array([self.axis.mu_c, self.axis.nu_c, self.axis.eta_c])

    def __neg__(self):
        return UnitPureImaginary(-self.axis)

    def as_quaternion(self):
        return self.axis


MU = UnitPureImaginary(Quaternion(0.0, 1.0, 0.0, 0.0))
NU = UnitPureImaginary(Quaternion(0.0, 0.0, 1.0, 0.0))
ETA = UnitPureImaginary(Quaternion(0.0, 0.0, 0.0, 1.0))


@dataclass(frozen=True)
class SliceComplex:
    """re + axis*im, an element of the slice H(axis)."""

    re: float
    im: float
    axis: UnitPureImaginary = MU

    def to_quaternion(self):
        v = self.axis.vec
        return Quaternion(self.re, *(self.im * v))

    @classmethod
    def from_quaternion(cls, q, axis=MU, tol=1e-10):
        v = q.as_array()[1:]
        im = float(np.dot(v, axis.vec))
        if np.linalg.norm(v - im * axis.vec) > tol * max(1.0, modulus(q)):
            raise NotSliceValued("quaternion does not lie in the slice")
        return cls(q.r, im, axis)

    def __complex__(self):
        return complex(self.re, self.im)


def orthogonal(mu, nu, tol=AXIS_TOL):
    return abs(float(np.dot(mu.vec, nu.vec))) <= tol


def complete_frame(mu, nu=None):
    """3x3 matrix with rows (mu, nu', eta') forming a right-handed frame.

    nu' is nu when nu is orthogonal to mu, otherwise a fixed unit vector
    orthogonal to mu.
    """
    m = mu.vec
    if nu is not None and orthogonal(mu, nu):
        n = nu.vec
    else:
        e = np.zeros(3)
        e[int(np.argmin(np.abs(m)))] = 1.0
        n = e - np.dot(e, m) * m
        n /= np.linalg.norm(n)
    return np.vstack([m, n, np.cross(m, n)])


def to_frame(arr, frame):
    """Re-express (..., 4) quaternions in the frame's coordinates."""
    arr = np.asarray(arr, dtype=float)
    out = np.empty_like(arr)
    out[..., 0] = arr[..., 0]
    out[..., 1:] = arr[..., 1:] @ frame.T
    return out


def from_frame(arr, frame):
    arr = np.asarray(arr, dtype=float)
    out = np.empty_like(arr)
    out[..., 0] = arr[..., 0]
    out[..., 1:] = arr[..., 1:] @ frame
    return out


def to_pair(arr, frame):
    """Split (..., 4) quaternions into complex (A, B) with q = A + B*nu.

    A and B are slice-H(mu) values written as complex numbers along the
    frame's first axis.
    """
    c = to_frame(arr, frame)
    return c[..., 0] + 1j * c[..., 1], c[..., 2] + 1j * c[..., 3]


def from_pair(a, b, frame):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    c = np.stack([a.real, a.imag, b.real, b.imag], axis=-1)
    return from_frame(c, frame)


def split_nu(q, mu=MU, nu=NU):
    """Return (f_a, f_b) in H(mu) with q = f_a + f_b*nu."""
    if not orthogonal(mu, nu):
        raise NonOrthogonalAxes("split_nu needs mu orthogonal to nu")
    frame = complete_frame(mu, nu)
    c = to_frame(q.as_array(), frame)
    return SliceComplex(c[0], c[1], mu), SliceComplex(c[2], c[3], mu)


def join_nu(fa, fb, nu=NU):
    return fa.to_quaternion() + fb.to_quaternion() * nu.axis
