"""Geometry, phantoms and exact analytic transforms."""


from .geometry import (
    Direction,
    Field2D,
    FilterSpec,
    Grid2D,
    Parallelogram,
    as_direction,
    check_pair,
    det2,
    direction_from_angle,
)
from .measurement import (
    HC_KEV_ANGSTROM,
    MomentumConditionError,
    ScatterConfig,
    log_measurement,
    momentum_transfer,
    sbrt_from_measurements,
)
from .phantom import (
    Ellipse,
    Phantom,
    Rectangle,
    disk,
    ellipse_halfline_integral,
    format_phantom,
    load_phantom,
    parse_phantom,
    segment_integral,
    shepp_logan,
    square,
)
from .support import (
    Region,
    SupportGeometry,
    circumscribed_parallelogram,
    classify_region,
    is_centered,
    partition_value,
    region_codes,
    support_geometry,
)
from .transforms import (
    brt,
    cbt,
    radon,
    rasterize,
    sample_brt,
    sample_cbt,
    sample_radon,
    sample_sbrt,
    sbrt,
)

__all__ = [
    "Direction",
    "Ellipse",
    "Field2D",
    "FilterSpec",
    "Grid2D",
    "HC_KEV_ANGSTROM",
    "MomentumConditionError",
    "Parallelogram",
    "Phantom",
    "Rectangle",
    "Region",
    "ScatterConfig",
    "SupportGeometry",
    "as_direction",
    "brt",
    "cbt",
    "check_pair",
    "circumscribed_parallelogram",
    "classify_region",
    "det2",
    "direction_from_angle",
    "disk",
    "ellipse_halfline_integral",
    "format_phantom",
    "is_centered",
    "load_phantom",
    "log_measurement",
    "momentum_transfer",
    "parse_phantom",
    "partition_value",
    "radon",
    "rasterize",
    "region_codes",
    "sample_brt",
    "sample_cbt",
    "sample_radon",
    "sample_sbrt",
    "sbrt",
    "sbrt_from_measurements",
    "segment_integral",
    "shepp_logan",
    "square",
    "support_geometry",
]
