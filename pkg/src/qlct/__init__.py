"""Quaternion linear canonical transforms, their convolutions and applications."""
from .errors import (
    DegenerateB,
    DivisionByZeroQuaternion,
    GridMismatch,
    GridTooLarge,
    InvalidBand,
    InvalidDegenerate,
    InvalidDeterminant,
    InvalidExponent,
    NonOrthogonalAxes,
    NotSliceValued,
    OriginNotOnGrid,
    QLCTError,
    SingularSymbol,
    SymbolZeroOnAxis,
    UnsupportedFormat,
)
from .quaternion import ETA, MU, NU, Quaternion, SliceComplex, UnitPureImaginary, join_nu, split_nu
from .grid import Field2D, GridSpec2D, delta_field, gaussian_field, lp_norm, random_field, read_qfld, write_qfld
from .transform import (
    ParamMatrix,
    TransformSpec,
    qft,
    qft_spec,
    qfrft_spec,
    qlct,
    qlct_degenerate,
    qlct_forward_direct,
    qlct_forward_fast,
    qlct_inverse,
)
from .report import TheoremReport
from .conv import (
    classical_convolve,
    correlate_spatial,
    correlate_spectral,
    default_suite,
    spatial_convolve,
    spectral_convolve,
    spectral_convolve_spatial_form,
)
from .apps import (
    TransferFunction,
    add_gaussian_noise,
    lowpass_rect,
    multiplicative_filter,
    psnr,
    snr,
    solve_fredholm,
    solve_pde_anisotropic,
    solve_pde_elliptic,
    solve_pde_mixed,
    solve_pde_spectral,
)
from .images import field_to_image, image_to_field

__version__ = "0.1.0"
