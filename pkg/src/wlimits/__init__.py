"""Numerical laboratory for radial and vertical limits at infinity of
weighted Sobolev functions.

The package evaluates the diagnostic functionals that govern whether every
function with a p-integrable weighted gradient admits unique almost sure
radial or vertical limits, constructs the explicit witness functions that
realize the failure cases, and traces them to confirm the predictions on
concrete weight families at desk scale.
"""

__version__ = "0.1.0"

from .errors import (
    DimensionMismatchError,
    InsufficientDivergenceError,
    LabError,
    MassIndistinguishableFromZeroError,
    PreconditionError,
    SingularPointError,
    SpecValidationError,
)
from .weights import (
    Box,
    BumpDepression,
    Constant,
    Corridor,
    Cube,
    DyadicAnnulus,
    HalfLinePower,
    MassEstimate,
    PiecewiseProfile,
    Power,
    Product,
    ProfileSegment,
    QuadratureConfig,
    RadialProfile,
    WeightSpec,
    annulus_mass,
    ball_mass,
    capped_power_profile,
    dual_mass,
    eval_weight,
    inv_ess_sup,
    power_profile,
    region_mass,
    sphere_area,
)

__all__ = [
    "Box",
    "BumpDepression",
    "Constant",
    "Corridor",
    "Cube",
    "DimensionMismatchError",
    "DyadicAnnulus",
    "HalfLinePower",
    "InsufficientDivergenceError",
    "LabError",
    "MassEstimate",
    "MassIndistinguishableFromZeroError",
    "PiecewiseProfile",
    "Power",
    "PreconditionError",
    "Product",
    "ProfileSegment",
    "QuadratureConfig",
    "RadialProfile",
    "SingularPointError",
    "SpecValidationError",
    "WeightSpec",
    "annulus_mass",
    "ball_mass",
    "capped_power_profile",
    "dual_mass",
    "eval_weight",
    "inv_ess_sup",
    "power_profile",
    "region_mass",
    "sphere_area",
    "__version__",
]
