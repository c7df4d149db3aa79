"""Halfspace representation of the outcome regions and their characteristic cones.

Each outcome vector alpha gets a polyhedron {x : A x <= b} in histogram space.
The offsets b encode strict quota inequalities with a unit slack;
for integer histograms that slack is loose whenever a fractional threshold
opposes the tie bit, so every polyhedron also carries exact offsets (unit
slack replaced by 1/denominator(q_i)) under which membership of an integer
histogram coincides with the quota outcome. The characteristic cone {A x <= 0}
needs no such correction: cone membership of a distribution is exactly
refinement membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import DimensionError
from .model import Agenda, FractionalVote, Histogram, QuotaRule, omega_indices
from .aggregation import OutcomeVector, _check_rule, inconsistent_outcomes
from .conditions import check_kappa4, outcome_feasible


@dataclass(frozen=True)
class CharacteristicVector:
    """Row vector scoring a histogram against one proposition's threshold.

    Entry for judgement w is q_i - 1 when w supports proposition i and q_i
    otherwise, so dotting with a histogram gives q_i * n minus the support.
    """

    entries: tuple[Fraction, ...]
    proposition: int


@dataclass(frozen=True)
class Polyhedron:
    """One outcome region {x : A x <= b} with its exact-offset variant."""

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    b_exact: tuple[Fraction, ...]
    alpha: OutcomeVector

    @property
    def m(self) -> int:
        return len(self.A[0])


@dataclass(frozen=True)
class ParadoxRegion:
    """The polyhedra of all inconsistent outcome vectors."""

    polyhedra: tuple[Polyhedron, ...]


def characteristic_vector(i: int, rule: QuotaRule, agenda: Agenda) -> CharacteristicVector:
    """The scoring vector of proposition i (1-based; p+1 is the conclusion)."""
    _check_rule(rule, agenda)
    q = rule.thresholds[i - 1]
    support = set(omega_indices(i, agenda))
    entries = tuple(q - 1 if j in support else q for j in range(agenda.m))
    return CharacteristicVector(entries, i)


def build_polyhedron(alpha: Sequence[int], rule: QuotaRule, agenda: Agenda) -> Polyhedron:
    """Halfspace system whose solutions aggregate to alpha.

    Row i is sign(alpha_i) times the characteristic vector (sign(0) = -1);
    the unit-slack offset is sign(alpha_i)*d_i - [alpha_i = 1], always 0 or -1.
    Exact offsets replace each -1 by -1/denominator(q_i), which is tight for
    integer histograms.
    """
    _check_rule(rule, agenda)
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != agenda.p + 1:
        raise DimensionError(f"outcome has {len(alpha)} entries, expected {agenda.p + 1}")
    rows, b, b_exact = [], [], []
    for i in range(1, agenda.p + 2):
        sign = 1 if alpha[i - 1] == 1 else -1
        c = characteristic_vector(i, rule, agenda).entries
        rows.append(tuple(sign * e for e in c))
        offset = Fraction(sign * rule.breakings[i - 1] - (1 if alpha[i - 1] == 1 else 0))
        b.append(offset)
        if offset == 0:
            b_exact.append(offset)
        else:
            b_exact.append(Fraction(-1, rule.thresholds[i - 1].denominator))
    return Polyhedron(tuple(rows), tuple(b), tuple(b_exact), alpha)


def paradox_region(rule: QuotaRule, agenda: Agenda) -> ParadoxRegion:
    """Polyhedra of every inconsistent outcome, in canonical alpha order."""
    return ParadoxRegion(
        tuple(build_polyhedron(a, rule, agenda) for a in inconsistent_outcomes(agenda))
    )


def _as_weights(x: Union[Histogram, FractionalVote, Sequence]) -> tuple[Fraction, ...]:
    if isinstance(x, (Histogram, FractionalVote)):
        return x.weights
    return tuple(Fraction(v) for v in x)


def _products(x, poly: Polyhedron) -> list[Fraction]:
    weights = _as_weights(x)
    if len(weights) != poly.m:
        raise DimensionError(f"vector length {len(weights)} != polyhedron m {poly.m}")
    return [
        sum((r * w for r, w in zip(row, weights) if w != 0), Fraction(0))
        for row in poly.A
    ]


def in_polyhedron(x, poly: Polyhedron) -> bool:
    """Componentwise test A x <= b with the unit-slack offsets."""
    return all(v <= bound for v, bound in zip(_products(x, poly), poly.b))


def in_polyhedron_exact(x, poly: Polyhedron) -> bool:
    """Componentwise test A x <= b_exact.

    For integer histograms this is equivalent to the quota outcome equalling
    the polyhedron's alpha.
    """
    return all(v <= bound for v, bound in zip(_products(x, poly), poly.b_exact))


def in_cone(x, poly: Polyhedron) -> bool:
    """Membership in the characteristic cone {x : A x <= 0}."""
    return all(v <= 0 for v in _products(x, poly))


def cone_dimension(poly: Polyhedron, rule: QuotaRule, agenda: Agenda) -> int:
    """Dimension of the characteristic cone of an inconsistent-outcome polyhedron.

    It is m - 1 exactly when the conclusion mirrors a single premise with a
    matching threshold (the cone then lies in the hyperplane where the two
    scoring rows cancel) and m otherwise.
    """
    return agenda.m - 1 if check_kappa4(rule, agenda) else agenda.m


def active_dimension(
    pi: FractionalVote,
    poly: Polyhedron,
    n: int,
    rule: QuotaRule,
    agenda: Agenda,
) -> Union[int, float]:
    """Cone dimension if the polyhedron is active for pi at n, else -inf.

    Active means pi lies in the characteristic cone and some profile of n
    votes has its histogram in the region (equivalently, aggregates to alpha).
    """
    if in_cone(pi, poly) and outcome_feasible(poly.alpha, n, rule, agenda):
        return cone_dimension(poly, rule, agenda)
    return float("-inf")


def exact_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a rational matrix by exact Gaussian elimination."""
    matrix = [list(map(Fraction, row)) for row in rows]
    if not matrix:
        return 0
    ncols = len(matrix[0])
    rank = 0
    col = 0
    while rank < len(matrix) and col < ncols:
        pivot_row = next((r for r in range(rank, len(matrix)) if matrix[r][col] != 0), None)
        if pivot_row is None:
            col += 1
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        pivot = matrix[rank][col]
        for r in range(rank + 1, len(matrix)):
            factor = matrix[r][col] / pivot
            if factor != 0:
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[rank])]
        rank += 1
        col += 1
    return rank
