"""Exact computation of instanton-corrected mirrors of toric Calabi-Yau manifolds.

The package takes a smooth toric Calabi-Yau fan and produces, over exact
rationals: the charge matrix of its curve classes, the single-logarithm
solutions of the associated hypergeometric system, the mirror map and its
inverse, the open Gromov-Witten invariants predicted by the flat-coordinate
form of the corrected mirror equation, and the mirror equation itself in both
the symbolic-constant and flat forms, together with wall-crossing data for
disk classes.  Embedded reference tables for four standard geometries back an
end-to-end verification mode.
"""

from .errors import ToricMirrorError
from .pseries import LogSeries, MultiSeries, Rational, invert_map
from .toric import (
    ChargeMatrix,
    CYStructure,
    Fan,
    MomentPolytope,
    charge_matrix,
    compact_divisors,
    cone_change_matrix,
    discriminant_locus,
    modify_fan,
    validate_fan,
    with_base_cone,
)
from .periods import (
    DiffOperator,
    LogPeriod,
    apply_operator,
    gamma_log_coefficient,
    log_solution,
    mirror_map_series,
    single_log_periods,
)
from .flatcoords import (
    CorrectionSeries,
    InverseMirrorMap,
    extract_delta,
    inverse_mirror_map,
    open_gw_coefficients,
    verify_conjecture_relations,
)
from .disks import (
    Chamber,
    CorrectionData,
    DiskClass,
    Divisor,
    LoopClass,
    MirrorPolynomial,
    boundary_class,
    chamber_invariant,
    cone_change_mirror,
    fourier_coordinates,
    intersection_number,
    maslov_index,
    mirror_equation,
    superpotential,
)
from .refdata import lookup_reference, verify_against_reference

__version__ = "0.1.0"

__all__ = [
    "Chamber",
    "ChargeMatrix",
    "CorrectionData",
    "CorrectionSeries",
    "CYStructure",
    "DiffOperator",
    "DiskClass",
    "Divisor",
    "Fan",
    "InverseMirrorMap",
    "LogPeriod",
    "LogSeries",
    "LoopClass",
    "MirrorPolynomial",
    "MomentPolytope",
    "MultiSeries",
    "Rational",
    "ToricMirrorError",
    "apply_operator",
    "boundary_class",
    "chamber_invariant",
    "charge_matrix",
    "compact_divisors",
    "cone_change_matrix",
    "cone_change_mirror",
    "discriminant_locus",
    "extract_delta",
    "fourier_coordinates",
    "gamma_log_coefficient",
    "intersection_number",
    "inverse_mirror_map",
    "invert_map",
    "log_solution",
    "lookup_reference",
    "maslov_index",
    "mirror_equation",
    "mirror_map_series",
    "modify_fan",
    "open_gw_coefficients",
    "single_log_periods",
    "superpotential",
    "validate_fan",
    "verify_against_reference",
    "verify_conjecture_relations",
    "with_base_cone",
]
