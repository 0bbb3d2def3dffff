"""Color images as pure quaternion fields: R, G, B on mu, nu, eta."""
from importlib import resources
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import UnsupportedFormat
from .grid import Field2D, GridSpec2D
from .quaternion import ETA, MU, NU

FORMATS = {".png": "PNG", ".ppm": "PPM", ".pnm": "PPM"}
BUNDLED = ("astronaut", "chelsea", "coffee")


def _format(path):
    fmt = FORMATS.get(Path(path).suffix.lower())
    if fmt is None:
        raise UnsupportedFormat("only PNG and PPM images are supported: %s" % path)
    return fmt


def rgb_to_field(rgb, dx=1.0):
    """(rows, cols, 3) uint8 array -> field with f[i, j] at pixel (row i, col j)."""
    rgb = np.asarray(rgb, dtype=float) / 255.0
    grid = GridSpec2D(rgb.shape[0], rgb.shape[1], dx, dx)
    samples = rgb[..., 0, None] * MU.vec + rgb[..., 1, None] * NU.vec + rgb[..., 2, None] * ETA.vec
    return Field2D(grid, np.concatenate([np.zeros(rgb.shape[:2] + (1,)), samples], axis=-1))


def field_to_rgb(f):
    """Project onto mu, nu, eta, clamp to [0, 1] and round to 8 bits."""
    v = f.samples[..., 1:]
    chans = np.stack([v @ MU.vec, v @ NU.vec, v @ ETA.vec], axis=-1)
    return np.round(np.clip(chans, 0.0, 1.0) * 255).astype(np.uint8)


def image_to_field(path, dx=1.0):
    _format(path)
    with Image.open(path) as im:
        rgb = np.asarray(im.convert("RGB"))
    return rgb_to_field(rgb, dx)


def field_to_image(f, path):
    fmt = _format(path)
    Image.fromarray(field_to_rgb(f), "RGB").save(path, format=fmt)


def bundled_image(name, dx=1.0):
    """One of the bundled natural test images (public domain, 128 x 128)."""
    if name not in BUNDLED:
        raise KeyError("unknown bundled image %r; choose from %s" % (name, ", ".join(BUNDLED)))
    ref = resources.files("qlct") / "data" / (name + ".png")
    with resources.as_file(ref) as p:
        return image_to_field(p, dx)
