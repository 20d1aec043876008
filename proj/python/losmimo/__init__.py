"""Line-of-sight MIMO channel models, capacity and reconfigurable array architectures."""

from ._core import (
    Archetype,
    ArrayLayout,
    DegenerateGeometry,
    LinkScene,
    NoSignal,
    NyquistViolation,
    UnsupportedArchetype,
    Validity,
    WavefrontModel,
    aosa_schedule,
    build_aosa,
    build_custom,
    build_uca,
    build_ula,
    build_ura,
    capacity_upper_bound,
    channel_matrix,
    channel_parameter,
    classify_validity,
    db_to_linear,
    distance_matrix,
    fixed_angle_plan,
    gain_spectrum,
    integer_capacity_bound,
    linear_to_db,
    optimize_rotation,
    phase_profile,
    polarized_rate,
    rate_report,
    select_fixed_angles,
    sweep,
    uniform_rate,
    waterfilling,
)

__all__ = [name for name in dir() if not name.startswith("_")]
