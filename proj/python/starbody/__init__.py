"""Orlicz dual mixed volumes of star bodies on spherical quadrature rules."""

from ._core import (
    OrliczFunction,
    SphereRule,
    StarBody,
    StarbodyError,
    __version__,
    build_rule,
    default_level,
    dual_mixed_quermass,
    dual_mixed_volume,
    dual_quermass,
    first_dual_mixed_volume,
    first_variation,
    lp_dual_quermass,
    lp_multiple_dmv,
    orlicz_combine,
    orlicz_dual_mixed_volume,
    orlicz_dual_quermass,
    orlicz_multiple_dmv,
    parse_scene,
    radial_hausdorff,
    radial_linear_combine,
    run_suite,
    unit_ball_volume,
    volume,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
