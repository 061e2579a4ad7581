"""Broken-ray transform toolkit: analytic data, extension, filtering and Fourier inversion."""

from .core import *  # noqa: F401,F403
from .core import __all__ as _core_all
from .estimators import BlurredImageRecovery, BrtExtender, PsfFilter, TikhonovBrtInverter
from .extend import DataNotTruncatedError, ExtensionPlan, brt_extend, cbt_extend
from .filtering import apply_psf, default_filter_spec, filtered_brt_analytic, filtered_sbrt_analytic
from .invert import (
    SingularFrequencyError,
    brt_invert_filtered,
    compute_K,
    h_hat,
    recover_blurred,
    recover_unfiltered,
)

__version__ = "0.1.0"

__all__ = [
    *_core_all,
    "BlurredImageRecovery",
    "BrtExtender",
    "DataNotTruncatedError",
    "ExtensionPlan",
    "PsfFilter",
    "SingularFrequencyError",
    "TikhonovBrtInverter",
    "apply_psf",
    "brt_extend",
    "brt_invert_filtered",
    "cbt_extend",
    "compute_K",
    "default_filter_spec",
    "filtered_brt_analytic",
    "filtered_sbrt_analytic",
    "h_hat",
    "recover_blurred",
    "recover_unfiltered",
]
