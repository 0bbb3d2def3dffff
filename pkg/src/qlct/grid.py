"""Sampled quaternion fields on uniform grids, quadrature and norms."""
from dataclasses import dataclass
import math
import struct

import numpy as np

from .errors import GridMismatch, InvalidExponent, OriginNotOnGrid, UnsupportedFormat
from .quaternion import Quaternion, embed, qabs, qabs2, qconj, qmul


@dataclass(frozen=True)
class GridSpec2D:
    """nx x ny samples with spacing (dx, dy).

    Centered grids place sample i at x = (i - nx/2)*dx, so they span
    [-nx*dx/2, nx*dx/2); uncentered grids start at 0.
    """

    nx: int
    ny: int
    dx: float = 0.25
    dy: float = 0.25
    centered: bool = True

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny or self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs integer nx, ny >= 2")
        if not (self.dx > 0 and self.dy > 0) or not math.isfinite(self.dx * self.dy):
            raise ValueError("grid spacing must be positive and finite")
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "dy", float(self.dy))
        object.__setattr__(self, "centered", bool(self.centered))

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def cx(self):
        return self.nx / 2 if self.centered else 0.0

    @property
    def cy(self):
        return self.ny / 2 if self.centered else 0.0

    @property
    def x(self):
        return (np.arange(self.nx) - self.cx) * self.dx

    @property
    def y(self):
        return (np.arange(self.ny) - self.cy) * self.dy

    def mesh(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    @property
    def cell(self):
        return self.dx * self.dy

    @property
    def area(self):
        return self.nx * self.ny * self.cell

    def origin_index(self):
        if self.cx != int(self.cx) or self.cy != int(self.cy):
            raise OriginNotOnGrid("grid %dx%d has no sample at the origin" % self.shape)
        return int(self.cx), int(self.cy)

    def conjugate(self, b1, b2):
        """Canonical conjugate (frequency) grid for parameters b1, b2."""
        return GridSpec2D(
            self.nx,
            self.ny,
            2 * math.pi * abs(b1) / (self.nx * self.dx),
            2 * math.pi * abs(b2) / (self.ny * self.dy),
            True,
        )

    def padded(self, factor=2):
        if not self.centered:
            raise ValueError("padding is defined for centered grids")
        return GridSpec2D(self.nx * factor, self.ny * factor, self.dx, self.dy, True)

    def same_as(self, other, tol=1e-12):
        return (
            self.shape == other.shape
            and self.centered == other.centered
            and abs(self.dx - other.dx) <= tol * self.dx
            and abs(self.dy - other.dy) <= tol * self.dy
        )


class Field2D:
    """Quaternion samples on a GridSpec2D; samples[i, j] is f(x_i, y_j)."""

    __slots__ = ("spec", "samples")

    def __init__(self, spec, samples):
        arr = np.array(samples, dtype=float)
        if arr.shape != (spec.nx, spec.ny, 4):
            raise ValueError("samples shape %s does not match grid %s" % (arr.shape, spec.shape))
        if not np.all(np.isfinite(arr)):
            raise ValueError("field samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "samples", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Field2D is immutable")

    @classmethod
    def zeros(cls, spec):
        return cls(spec, np.zeros((spec.nx, spec.ny, 4)))

    @classmethod
    def from_complex(cls, spec, z, axis=None):
        from .quaternion import MU

        axis = MU.vec if axis is None else axis.vec
        return cls(spec, embed(z, axis))

    @classmethod
    def from_function(cls, spec, fn):
        """fn(X, Y) -> (nx, ny, 4) array or real (nx, ny) array."""
        X, Y = spec.mesh()
        val = np.asarray(fn(X, Y), dtype=float)
        if val.shape == spec.shape:
            out = np.zeros(spec.shape + (4,))
            out[..., 0] = val
            val = out
        return cls(spec, val)

    @property
    def shape(self):
        return self.spec.shape

    def component(self, k):
        return self.samples[..., k]

    def with_samples(self, samples):
        return Field2D(self.spec, samples)

    def _check(self, other):
        if not isinstance(other, Field2D):
            return NotImplemented
        if not self.spec.same_as(other.spec):
            raise GridMismatch("fields live on different grids")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Field2D(self.spec, self.samples + other.samples)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Field2D(self.spec, self.samples - other.samples)

    def __neg__(self):
        return Field2D(self.spec, -self.samples)

    def __mul__(self, s):
        if isinstance(s, (int, float, np.floating)):
            return Field2D(self.spec, self.samples * float(s))
        if isinstance(s, Quaternion):
            return self.right_mul(s)
        return NotImplemented

    def __rmul__(self, s):
        if isinstance(s, (int, float, np.floating)):
            return Field2D(self.spec, self.samples * float(s))
        if isinstance(s, Quaternion):
            return self.left_mul(s)
        return NotImplemented

    def left_mul(self, q):
        q = q.as_array() if isinstance(q, Quaternion) else np.asarray(q)
        return Field2D(self.spec, qmul(q, self.samples))

    def right_mul(self, q):
        q = q.as_array() if isinstance(q, Quaternion) else np.asarray(q)
        return Field2D(self.spec, qmul(self.samples, q))

    def conj(self):
        return Field2D(self.spec, qconj(self.samples))

    def abs(self):
        return qabs(self.samples)

    def reflect(self):
        """Samples of f(-x, -y); points mapped off the grid read as zero."""
        return Field2D(self.spec, reflect_samples(self.samples, self.spec))

    def __repr__(self):
        s = self.spec
        return "Field2D(%dx%d, dx=%g, dy=%g)" % (s.nx, s.ny, s.dx, s.dy)


def reflect_samples(arr, spec):
    out = np.zeros_like(arr)
    for axis, (n, c) in enumerate(((spec.nx, spec.cx), (spec.ny, spec.cy))):
        if c != int(c):
            raise OriginNotOnGrid("reflection needs the origin on the grid")
    ix = 2 * int(spec.cx) - np.arange(spec.nx)
    iy = 2 * int(spec.cy) - np.arange(spec.ny)
    okx = (ix >= 0) & (ix < spec.nx)
    oky = (iy >= 0) & (iy < spec.ny)
    out[np.ix_(okx, oky)] = arr[np.ix_(ix[okx], iy[oky])]
    return out


def integrate(f):
    """Rectangle rule: sum of samples times dx*dy."""
    return Quaternion.from_array(f.samples.sum(axis=(0, 1)) * f.spec.cell)


def lp_norm(f, p=2.0):
    if p < 1:
        raise InvalidExponent("L^p norm needs p >= 1, got %r" % p)
    a = f.abs()
    if math.isinf(p):
        return float(a.max())
    return float((np.sum(a**p) * f.spec.cell) ** (1.0 / p))


def delta_field(spec):
    i, j = spec.origin_index()
    arr = np.zeros((spec.nx, spec.ny, 4))
    arr[i, j, 0] = 1.0 / spec.cell
    return Field2D(spec, arr)


def pad_field(f, factor=2):
    """Embed f into a centered grid `factor` times larger, zero outside."""
    big = f.spec.padded(factor)
    arr = np.zeros((big.nx, big.ny, 4))
    ox = int(big.cx - f.spec.cx)
    oy = int(big.cy - f.spec.cy)
    arr[ox : ox + f.spec.nx, oy : oy + f.spec.ny] = f.samples
    return Field2D(big, arr)


def crop_field(f, spec):
    ox = int(f.spec.cx - spec.cx)
    oy = int(f.spec.cy - spec.cy)
    return Field2D(spec, f.samples[ox : ox + spec.nx, oy : oy + spec.ny])


def relative_error(a, b):
    """Frobenius ||a - b|| / ||b|| over all samples and components."""
    a = a.samples if isinstance(a, Field2D) else np.asarray(a)
    b = b.samples if isinstance(b, Field2D) else np.asarray(b)
    den = np.linalg.norm(b)
    num = np.linalg.norm(a - b)
    return float(num / den) if den > 0 else float(num)


_MAGIC = b"QFLD"
_HEADER = struct.Struct("<4sHIIddB")


def write_qfld(f, path):
    s = f.spec
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, 1, s.nx, s.ny, s.dx, s.dy, int(s.centered)))
        fh.write(np.ascontiguousarray(f.samples, dtype="<f8").tobytes())


def read_qfld(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise UnsupportedFormat("%s: truncated QFLD header" % path)
        magic, version, nx, ny, dx, dy, centered = _HEADER.unpack(head)
        if magic != _MAGIC:
            raise UnsupportedFormat("%s: not a QFLD file" % path)
        if version != 1:
            raise UnsupportedFormat("%s: unsupported QFLD version %d" % (path, version))
        body = fh.read()
    n = nx * ny * 4
    if len(body) != 8 * n:
        raise UnsupportedFormat("%s: expected %d samples, found %d bytes" % (path, n, len(body)))
    arr = np.frombuffer(body, dtype="<f8").reshape(nx, ny, 4)
    return Field2D(GridSpec2D(nx, ny, dx, dy, bool(centered)), arr)


def random_field(spec, rng, support=1.0, slice_valued=False, axis=None):
    """Gaussian random samples restricted to the central `support` fraction.

    support=0.5 keeps the linear convolution of two such fields inside the
    grid, which is what makes the discrete convolution identities exact.
    """
    arr = rng.standard_normal((spec.nx, spec.ny, 4))
    if slice_valued:
        from .quaternion import MU

        v = (MU if axis is None else axis).vec
        z = arr[..., 0] + 1j * arr[..., 1]
        arr = embed(z, v)
    if support < 1.0:
        mask = np.zeros(spec.shape, dtype=bool)
        hx = int(round(spec.nx * support / 2))
        hy = int(round(spec.ny * support / 2))
        cx, cy = int(spec.cx), int(spec.cy)
        mask[cx - hx : cx + hx, cy - hy : cy + hy] = True
        arr[~mask] = 0.0
    return Field2D(spec, arr)


def gaussian_field(spec, width=1.0, x0=0.0, y0=0.0):
    return Field2D.from_function(
        spec, lambda X, Y: np.exp(-((X - x0) ** 2 + (Y - y0) ** 2) / (2 * width**2))
    )


__all__ = [
    "GridSpec2D",
    "Field2D",
    "integrate",
    "lp_norm",
    "delta_field",
    "pad_field",
    "crop_field",
    "relative_error",
    "read_qfld",
    "write_qfld",
    "random_field",
    "gaussian_field",
    "reflect_samples",
    "qabs2",
]
