"""Judgement aggregation under quota rules and the likelihood of the doctrinal paradox.

Exact rational aggregation, polyhedral outcome regions, feasibility-based
condition checking, exact and Monte Carlo paradox probabilities with
adversarial extremes, asymptotic classification, and curve fitting.
"""

from .errors import DimensionError, FitError, ResourceBudgetError, ValidationError
from .model import (
    Agenda,
    FractionalVote,
    Histogram,
    Judgement,
    Profile,
    QuotaRule,
    Rational,
    as_rational,
    decode_index,
    encode_judgement,
    format_rational,
    histogram,
    omega_indices,
    omega_set,
)
from .aggregation import (
    OutcomeVector,
    apply_quota,
    inconsistent_outcomes,
    is_consistent,
    is_paradox,
    is_tied,
    proposition_patterns,
    proposition_weight,
)
from .conditions import (
    DistributionSet,
    SignPattern,
    check_kappa1,
    check_kappa2,
    check_kappa3,
    check_kappa4,
    effective_refinements,
    feasible_sign_pattern,
    kappa_conditions,
    outcome_feasible,
    reachable_counts,
    refinements,
    sign_pattern_of,
    sign_pattern_witness,
    support_probability,
)
from .polyhedra import (
    CharacteristicVector,
    ParadoxRegion,
    Polyhedron,
    active_dimension,
    build_polyhedron,
    characteristic_vector,
    cone_dimension,
    exact_rank,
    in_cone,
    in_polyhedron,
    in_polyhedron_exact,
    paradox_region,
)
from .likelihood import (
    Assignment,
    Classification,
    HistogramDistribution,
    Rate,
    SmoothedExtremes,
    assignment_seed,
    classify,
    compositions,
    exact_paradox_probability,
    histogram_distribution,
    monte_carlo_estimate,
    smoothed_extremes,
)
from .fitting import FAMILIES, FitResult, fit_curve
from .instances import (
    Instance,
    instance_to_dict,
    parse_instance,
    parse_instance_dict,
    write_instance,
)

__version__ = "0.1.0"

__all__ = [
    "Agenda",
    "Assignment",
    "CharacteristicVector",
    "Classification",
    "DimensionError",
    "DistributionSet",
    "FAMILIES",
    "FitError",
    "FitResult",
    "FractionalVote",
    "Histogram",
    "HistogramDistribution",
    "Instance",
    "Judgement",
    "OutcomeVector",
    "ParadoxRegion",
    "Polyhedron",
    "Profile",
    "QuotaRule",
    "Rate",
    "Rational",
    "ResourceBudgetError",
    "SignPattern",
    "SmoothedExtremes",
    "ValidationError",
    "active_dimension",
    "apply_quota",
    "as_rational",
    "assignment_seed",
    "build_polyhedron",
    "characteristic_vector",
    "check_kappa1",
    "check_kappa2",
    "check_kappa3",
    "check_kappa4",
    "classify",
    "compositions",
    "cone_dimension",
    "decode_index",
    "effective_refinements",
    "encode_judgement",
    "exact_paradox_probability",
    "exact_rank",
    "feasible_sign_pattern",
    "fit_curve",
    "format_rational",
    "histogram",
    "histogram_distribution",
    "in_cone",
    "in_polyhedron",
    "in_polyhedron_exact",
    "inconsistent_outcomes",
    "instance_to_dict",
    "is_consistent",
    "is_paradox",
    "is_tied",
    "kappa_conditions",
    "monte_carlo_estimate",
    "omega_indices",
    "omega_set",
    "outcome_feasible",
    "paradox_region",
    "parse_instance",
    "parse_instance_dict",
    "proposition_patterns",
    "proposition_weight",
    "reachable_counts",
    "refinements",
    "sign_pattern_of",
    "sign_pattern_witness",
    "smoothed_extremes",
    "support_probability",
    "write_instance",
]
