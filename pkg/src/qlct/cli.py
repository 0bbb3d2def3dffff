"""Command-line entry point: transforms, filters, solvers and the theorem suite."""
import argparse
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import apps, conv
from .errors import InvalidDeterminant, QLCTError, SingularSymbol
from .grid import Field2D, GridSpec2D, gaussian_field, random_field, read_qfld, write_qfld
from .images import FORMATS, field_to_image, image_to_field
from .quaternion import embed
from .transform import TransformSpec, qlct_forward_direct, qlct_forward_fast, qlct_inverse

BUNDLED_SPECS = {"filter-demo": "filter_demo.spec", "qft": "qft.spec"}


class UsageError(Exception):
    """Bad command-line input; exits with status 2."""


def load_spec(arg):
    """A bundled name, a file path, or inline text."""
    if arg in BUNDLED_SPECS:
        text = (resources.files("qlct") / "data" / BUNDLED_SPECS[arg]).read_text()
    elif Path(arg).is_file():
        text = Path(arg).read_text()
    else:
        text = arg
    try:
        return TransformSpec.from_text(text)
    except InvalidDeterminant as exc:
        raise UsageError("invalid spec: %s" % exc) from None
    except ValueError as exc:
        raise UsageError("cannot parse spec: %s" % exc) from None


def load_field(path, dx=None):
    if Path(path).suffix.lower() in FORMATS:
        return image_to_field(path, 1.0 if dx is None else dx)
    f = read_qfld(path)
    if dx is not None:
        f = Field2D(GridSpec2D(f.spec.nx, f.spec.ny, dx, dx, f.spec.centered), f.samples)
    return f


def save_field(f, path):
    if Path(path).suffix.lower() in FORMATS:
        field_to_image(f, path)
    else:
        write_qfld(f, path)


def _rel(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


# ------------------------------------------------------------ commands


def cmd_transform(args):
    spec = load_spec(args.spec)
    f = load_field(args.input, args.dx)
    if args.inverse:
        out = qlct_inverse(f, spec)
    else:
        out = qlct_forward_fast(f, spec)
    save_field(out, args.output)
    print("wrote %s (%d x %d)" % (args.output, out.spec.nx, out.spec.ny))
    if args.oracle:
        ref = qlct_forward_direct(f, spec.inverse() if args.inverse else spec, out.spec)
        print("oracle max_rel=%.3e" % _rel(out.samples, ref.samples))
    return 0


def cmd_filter(args):
    spec = load_spec(args.spec)
    clean = load_field(args.input)
    f_in = clean
    if args.noise_snr is not None:
        sigma = apps.sigma_for_snr(clean, args.noise_snr)
        f_in = apps.add_gaussian_noise(clean, sigma, args.seed)
        print("input     SNR=%8.4f  PSNR=%8.4f" % (apps.snr(clean, f_in), apps.psnr(clean, f_in)))
    nx, ny = f_in.spec.shape
    H = apps.band_from_fraction(args.band, nx, ny)
    out = apps.multiplicative_filter(f_in, H, spec, args.mode)
    save_field(out, args.output)
    print("band %-5s SNR=%8.4f  PSNR=%8.4f" % (args.band, apps.snr(clean, out), apps.psnr(clean, out)))
    return 0


def cmd_verify(args):
    reports = conv.default_suite(
        seed=args.seed, size=args.size, tol=args.tol, include_general=args.include_general,
        general_size=args.general_size,
    )
    failed = [r.theorem for r in reports if not r.passed]
    for r in reports:
        print(r.line())
    if failed:
        print("FAILED: %s" % ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def cmd_solve(args):
    spec = load_spec(args.spec)
    g = load_field(args.input, args.dx)
    kind = args.kind
    if kind == "fredholm":
        if args.kernel is None:
            raise UsageError("fredholm needs --kernel")
        r = load_field(args.kernel, args.dx)
        f = apps.solve_fredholm(r, g, spec, branch=args.branch)
        print("residual=%.3e" % apps.fredholm_residual(r, f, g, spec))
    elif kind == "mixed":
        G = qlct_forward_fast(g, spec)
        f = apps.solve_pde_mixed(G, spec, g.spec)
        print("spectral_residual=%.3e" % apps.mixed_spectral_residual(f, G, spec))
        print("fd_residual=%.3e" % apps.relative_residual(apps.mixed_operator(f, spec), g))
    elif kind in ("elliptic", "anisotropic"):
        solve = apps.solve_pde_elliptic if kind == "elliptic" else apps.solve_pde_anisotropic
        op = apps.elliptic_operator if kind == "elliptic" else apps.anisotropic_operator
        sym = apps.elliptic_symbol if kind == "elliptic" else apps.anisotropic_symbol
        f = solve(g, spec)
        print("spectral_residual=%.3e" % apps.spectral_relation_residual(f, g, spec, sym))
        print("fd_residual=%.3e" % apps.relative_residual(op(f, spec), g))
    elif kind == "spectral":
        f = apps.solve_pde_spectral(g, spec)
        res = apps.spectral_relation_residual(f, g, spec, apps.spectral_example_symbol)
        print("spectral_residual=%.3e" % res)
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError("unknown problem %s" % kind)
    if args.reference:
        ref = load_field(args.reference, args.dx)
        print("rel_err=%.3e" % _rel(f.samples, ref.samples))
    save_field(f, args.output)
    return 0


def cmd_fixture(args):
    """Write seeded inputs for the other commands."""
    rng = np.random.default_rng(args.seed)
    grid = GridSpec2D(args.size, args.size, args.dx, args.dx)
    kind = args.kind
    if kind == "random":
        save_field(random_field(grid, rng, support=args.support), args.output)
        return 0
    if kind == "gaussian":
        save_field(gaussian_field(grid), args.output)
        return 0
    spec = load_spec(args.spec)
    if kind == "fredholm":
        r = random_field(grid, rng, support=0.5)
        f0 = random_field(grid, rng, support=0.5, slice_valued=True, axis=spec.mu)
        g = conv.spatial_convolve(r, f0, spec)
        outputs = {"g": g, "kernel": r, "solution": f0}
    elif kind == "singular":
        # kernel whose transform vanishes at the frequency origin
        r = random_field(grid, rng, support=0.5)
        R = qlct_forward_fast(r, spec)
        S = np.array(R.samples)
        S[grid.nx // 2, grid.ny // 2] = 0.0
        r = qlct_inverse(R.with_samples(S), spec, grid)
        outputs = {"g": random_field(grid, rng, support=0.5), "kernel": r}
    else:
        op = {"elliptic": apps.elliptic_operator, "anisotropic": apps.anisotropic_operator,
              "mixed": apps.mixed_operator}[kind]
        coef = np.array([0.4, 0.0, 0.0, 0.0]) + embed(0.9j, spec.mu.vec)
        if kind == "mixed":
            coef = np.array([0.3, 1.0, -0.5, 0.7])
        X, Y = grid.mesh()
        f0 = Field2D(grid, np.exp(-(X**2 + Y**2) / 2)[..., None] * coef)
        outputs = {"g": op(f0, spec), "solution": f0}
    save_field(outputs["g"], args.output)
    stem = Path(args.output)
    for name in ("kernel", "solution"):
        if name in outputs:
            p = stem.with_name(stem.stem + "." + name + stem.suffix)
            save_field(outputs[name], p)
            print("wrote %s" % p)
    print("wrote %s" % args.output)
    return 0


# -------------------------------------------------------------- parser


def build_parser():
    p = argparse.ArgumentParser(prog="qlct", description="Quaternion linear canonical transform toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    spec_help = "transform spec: bundled name (%s), file, or inline text" % ", ".join(BUNDLED_SPECS)

    t = sub.add_parser("transform", help="forward or inverse transform of a field or image")
    t.add_argument("input")
    t.add_argument("output")
    t.add_argument("--spec", required=True, help=spec_help)
    t.add_argument("--inverse", action="store_true")
    t.add_argument("--oracle", action="store_true", help="compare against the direct sum")
    t.add_argument("--dx", type=float, default=None, help="override the sample spacing")
    t.set_defaults(func=cmd_transform)

    f = sub.add_parser("filter", help="rectangular lowpass in the transform domain")
    f.add_argument("input")
    f.add_argument("output")
    f.add_argument("--band", default="1/4", help="'1/k' keeps indices [N/k, 3N/k); 'all' passes everything")
    f.add_argument("--spec", default="filter-demo", help=spec_help)
    f.add_argument("--mode", choices=("same", "doubled"), default="same")
    f.add_argument("--noise-snr", type=float, default=None, help="add Gaussian noise at this SNR (dB) first")
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(func=cmd_filter)

    v = sub.add_parser("verify", help="run the theorem suite on seeded random fields")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--size", type=int, default=16)
    v.add_argument("--tol", type=float, default=None, help="override every tolerance")
    v.add_argument("--include-general", action="store_true")
    v.add_argument("--general-size", type=int, default=8)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="Fredholm equation or one of the PDE examples")
    s.add_argument("kind", choices=("fredholm", "mixed", "elliptic", "anisotropic", "spectral"))
    s.add_argument("input", help="right-hand side g")
    s.add_argument("output")
    s.add_argument("--spec", required=True, help=spec_help)
    s.add_argument("--kernel", help="kernel r for fredholm")
    s.add_argument("--branch", choices=("a", "b"), default="a")
    s.add_argument("--reference", help="known solution to compare against")
    s.add_argument("--dx", type=float, default=None)
    s.set_defaults(func=cmd_solve)

    x = sub.add_parser("fixture", help="write seeded test inputs")
    x.add_argument("kind", choices=("random", "gaussian", "fredholm", "singular", "elliptic", "anisotropic", "mixed"))
    x.add_argument("output")
    x.add_argument("--spec", default="0.5 1 -0.5 1 / 1 2 0 1 / i / i", help=spec_help)
    x.add_argument("--size", type=int, default=32)
    x.add_argument("--dx", type=float, default=0.25)
    x.add_argument("--support", type=float, default=1.0)
    x.add_argument("--seed", type=int, default=0)
    x.set_defaults(func=cmd_fixture)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except SingularSymbol as exc:
        where = "" if exc.u is None else " at (u, v) = (%.6g, %.6g)" % (exc.u, exc.v)
        print("error: singular symbol%s: %s" % (where, exc), file=sys.stderr)
        return 1
    except (QLCTError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
