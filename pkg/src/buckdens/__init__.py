"""Buck measure density: residue-class covers, exact measures and estimates."""

from .checkers import (
    CheckReport,
    alexander_check,
    niven_check,
    rt_inclusion_check,
    scaled_union_check,
    taudiv_bound_report,
    weak_sigma_check,
)
from .cover import CoverCertificate, CoverCheck, greedy_cover, infimum_cover, verify_cover
from .estimator import DensityRecord, DensityReport, RemainderSystem, mu_estimate, residue_count_exact, residue_count_window, sieve_residues
from .grammar import ParseError, format_expr, parse
from .measure import ExponentSet, Measure, ScaledUnionSpec, measure_balpha, measure_multi, measure_scaled_union, measure_valuation
from .periodic import PeriodicSet, PeriodLimitError, density, from_classes
from .residue import ResidueClass, lcm_upto, scale_class
from .sets import SetExpr, UnsupportedStructure

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "CoverCertificate",
    "CoverCheck",
    "DensityRecord",
    "DensityReport",
    "ExponentSet",
    "Measure",
    "ParseError",
    "PeriodLimitError",
    "PeriodicSet",
    "RemainderSystem",
    "ResidueClass",
    "ScaledUnionSpec",
    "SetExpr",
    "UnsupportedStructure",
    "alexander_check",
    "density",
    "format_expr",
    "from_classes",
    "greedy_cover",
    "infimum_cover",
    "lcm_upto",
    "measure_balpha",
    "measure_multi",
    "measure_scaled_union",
    "measure_valuation",
    "mu_estimate",
    "niven_check",
    "parse",
    "residue_count_exact",
    "residue_count_window",
    "rt_inclusion_check",
    "scale_class",
    "scaled_union_check",
    "sieve_residues",
    "taudiv_bound_report",
    "verify_cover",
    "weak_sigma_check",
]
