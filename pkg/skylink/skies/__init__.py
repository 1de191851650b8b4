from skylink.skies.family import NestingReport, SkyFamily, sky_family_along_curve, wavefront_nesting
from skylink.skies.sky import (
    CauchySlice,
    SkySample,
    SliceCrossing,
    STStarPoint,
    build_sky,
    cauchy_intersection,
    fan_angles,
    rho_m,
)

__all__ = [
    "CauchySlice",
    "NestingReport",
    "STStarPoint",
    "SkyFamily",
    "SkySample",
    "SliceCrossing",
    "build_sky",
    "cauchy_intersection",
    "fan_angles",
    "rho_m",
    "sky_family_along_curve",
    "wavefront_nesting",
]
