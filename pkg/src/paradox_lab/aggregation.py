"""Quota-rule evaluation, outcome consistency, and paradox detection.

Everything here is a pure function of exact rational inputs; the verdict on a
proposition depends only on its support count and the total weight.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .errors import DimensionError
from .model import (
    Agenda,
    Histogram,
    Profile,
    QuotaRule,
    histogram,
    omega_indices,
)

#: A joint verdict on all premises and the conclusion, length p+1.
OutcomeVector = tuple[int, ...]


def _check_rule(rule: QuotaRule, agenda: Agenda) -> None:
    if rule.propositions != agenda.p + 1:
        raise DimensionError(
            f"rule covers {rule.propositions} propositions, agenda needs {agenda.p + 1}"
        )


def proposition_patterns(agenda: Agenda) -> tuple[tuple[int, ...], ...]:
    """Per-judgement 0/1 pattern over the p+1 propositions.

    Entry j is the vector (premise bits of judgement j, conclusion of j); a
    histogram's support counts are its weights dotted with these patterns.
    """
    rows = []
    for j in range(agenda.m):
        bits = tuple((j >> (agenda.p - 1 - k)) & 1 for k in range(agenda.p))
        rows.append(bits + (agenda.truth_table[j],))
    return tuple(rows)


def proposition_weight(h: Histogram, i: int, agenda: Agenda) -> Fraction:
    """Total weight of agents whose i-th judgement is 1 (conclusion for i = p+1)."""
    if h.m != agenda.m:
        raise DimensionError(f"histogram length {h.m} != agenda m {agenda.m}")
    return sum((h.weights[j] for j in omega_indices(i, agenda)), Fraction(0))


def count_verdict(count: Fraction, total: Fraction, q: Fraction, d: int) -> int:
    """Quota verdict for one proposition: 1 above q*total, d at equality, else 0."""
    bar = q * total
    if count > bar:
        return 1
    if count == bar:
        return d
    return 0


def apply_quota(h: Histogram, rule: QuotaRule, agenda: Agenda) -> OutcomeVector:
    """Evaluate the quota rule on a histogram; all comparisons are exact."""
    _check_rule(rule, agenda)
    n = h.n
    if n <= 0:
        raise ValueError("histogram must have positive total weight")
    return tuple(
        count_verdict(proposition_weight(h, i, agenda), n, rule.thresholds[i - 1],
                      rule.breakings[i - 1])
        for i in range(1, agenda.p + 2)
    )


def is_tied(h: Histogram, i: int, rule: QuotaRule, agenda: Agenda) -> bool:
    """True iff the support for proposition i equals q_i times the total weight."""
    _check_rule(rule, agenda)
    return proposition_weight(h, i, agenda) == rule.thresholds[i - 1] * h.n


def is_consistent(alpha: Sequence[int], agenda: Agenda) -> bool:
    """True iff the conclusion entry of alpha matches the truth table on its premises."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != agenda.p + 1:
        raise DimensionError(f"outcome has {len(alpha)} entries, expected {agenda.p + 1}")
    return alpha[agenda.p] == agenda.conclusion(alpha[: agenda.p])


def inconsistent_outcomes(agenda: Agenda) -> tuple[OutcomeVector, ...]:
    """All outcome vectors violating the agenda's truth table, in index order."""
    out = []
    for code in range(1 << (agenda.p + 1)):
        alpha = tuple((code >> (agenda.p - k)) & 1 for k in range(agenda.p + 1))
        if not is_consistent(alpha, agenda):
            out.append(alpha)
    return tuple(out)


def is_paradox(source: Union[Profile, Histogram], rule: QuotaRule, agenda: Agenda) -> bool:
    """True iff the aggregated outcome violates the logical connection."""
    h = histogram(source) if isinstance(source, Profile) else source
    return not is_consistent(apply_quota(h, rule, agenda), agenda)
