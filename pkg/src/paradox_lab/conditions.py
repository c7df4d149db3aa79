"""Refinements, outcome feasibility, and the four asymptotic-regime conditions.

Feasibility of an outcome vector at population size n is decided exactly: a
boolean reachability grid over proposition-count vectors (built once per
agenda and n) is intersected with the integer count ranges that the quota
rule assigns to the outcome. Convex-hull sign-pattern feasibility is decided
by exact Fourier-Motzkin elimination over the rationals; no solver and no
floating point anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, ResourceBudgetError
from .model import Agenda, FractionalVote, QuotaRule
from .aggregation import (
    OutcomeVector,
    _check_rule,
    inconsistent_outcomes,
    proposition_patterns,
)

#: Sign pattern over the p+1 propositions: +1 (above threshold), 0 (tied), -1.
SignPattern = tuple[int, ...]

DEFAULT_STATE_BUDGET = 60_000_000


@dataclass(frozen=True)
class DistributionSet:
    """A finite set of vote distributions the adversary may assign to agents."""

    members: tuple[FractionalVote, ...]

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ValueError("a distribution set needs at least one member")
        m = members[0].m
        if any(member.m != m for member in members):
            raise DimensionError("all distributions must have the same length")
        if len(set(members)) != len(members):
            raise ValueError("distribution set members must be pairwise distinct")

    @property
    def m(self) -> int:
        return self.members[0].m

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def epsilon(self) -> Fraction:
        """Smallest weight across all members; positive iff strictly positive."""
        return min(w for member in self.members for w in member.weights)

    @property
    def is_strictly_positive(self) -> bool:
        return self.epsilon > 0


def support_probability(pi: FractionalVote, i: int, agenda: Agenda) -> Fraction:
    """Probability that a vote drawn from pi has its i-th proposition equal to 1."""
    if pi.m != agenda.m:
        raise DimensionError(f"distribution length {pi.m} != agenda m {agenda.m}")
    patterns = proposition_patterns(agenda)
    return sum(
        (w for w, pat in zip(pi.weights, patterns) if pat[i - 1] == 1), Fraction(0)
    )


def sign_pattern_of(pi: FractionalVote, rule: QuotaRule, agenda: Agenda) -> SignPattern:
    """Per-proposition sign of (support probability - threshold)."""
    _check_rule(rule, agenda)
    out = []
    for i in range(1, agenda.p + 2):
        pr = support_probability(pi, i, agenda)
        q = rule.thresholds[i - 1]
        out.append(1 if pr > q else (0 if pr == q else -1))
    return tuple(out)


def refinements(
    pi: FractionalVote, rule: QuotaRule, agenda: Agenda
) -> frozenset[OutcomeVector]:
    """Outcome vectors compatible with pi's forced verdicts.

    On every proposition where pi is not tied the entry is forced; tied
    propositions may take either value.
    """
    pattern = sign_pattern_of(pi, rule, agenda)
    options = [(1,) if s > 0 else (0,) if s < 0 else (0, 1) for s in pattern]
    return frozenset(product(*options))


# ---------------------------------------------------------------------------
# Outcome feasibility over integer histograms
# ---------------------------------------------------------------------------

_reach_cache: dict[tuple, np.ndarray] = {}
_REACH_CACHE_LIMIT = 32


def reachable_counts(
    agenda: Agenda, n: int, *, state_budget: int = DEFAULT_STATE_BUDGET
) -> np.ndarray:
    """Boolean grid over proposition-count vectors achievable by n votes.

    Entry [s_1, ..., s_{p+1}] is True iff some integer histogram with total n
    gives each proposition i exactly s_i supporting votes.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    key = (agenda.p, agenda.truth_table, n)
    cached = _reach_cache.get(key)
    if cached is not None:
        return cached
    dims = (n + 1,) * (agenda.p + 1)
    cells = (n + 1) ** (agenda.p + 1)
    if cells > state_budget:
        raise ResourceBudgetError(
            "feasibility grid too large", required=cells, budget=state_budget
        )
    patterns = proposition_patterns(agenda)
    layer = np.zeros(dims, dtype=bool)
    layer[(0,) * (agenda.p + 1)] = True
    full = n + 1
    for _ in range(n):
        new = np.zeros(dims, dtype=bool)
        for pat in patterns:
            dst = tuple(slice(c, full) for c in pat)
            src = tuple(slice(0, full - c) for c in pat)
            new[dst] |= layer[src]
        layer = new
    if len(_reach_cache) >= _REACH_CACHE_LIMIT:
        _reach_cache.pop(next(iter(_reach_cache)))
    _reach_cache[key] = layer
    return layer


def verdict_count_range(
    alpha_i: int, n: int, q: Fraction, d: int
) -> Optional[tuple[int, int]]:
    """Inclusive range of integer support counts yielding verdict alpha_i, or None.

    The verdict is monotone in the count, so each verdict value occupies one
    interval of [0, n]. Bounds are computed with exact rational floor/ceil.
    """
    bar = q * n
    if d == 1:
        first_one = math.ceil(bar)
    else:
        first_one = math.floor(bar) + 1
    if alpha_i == 1:
        lo, hi = max(first_one, 0), n
    else:
        lo, hi = 0, min(first_one - 1, n)
    return (lo, hi) if lo <= hi else None


def outcome_feasible(
    alpha: Sequence[int],
    n: int,
    rule: QuotaRule,
    agenda: Agenda,
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> bool:
    """True iff some profile of n (non-fractional) votes aggregates to alpha."""
    _check_rule(rule, agenda)
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != agenda.p + 1:
        raise DimensionError(f"outcome has {len(alpha)} entries, expected {agenda.p + 1}")
    ranges = []
    for i in range(1, agenda.p + 2):
        r = verdict_count_range(alpha[i - 1], n, rule.thresholds[i - 1], rule.breakings[i - 1])
        if r is None:
            return False
        ranges.append(r)
    grid = reachable_counts(agenda, n, state_budget=state_budget)
    window = tuple(slice(lo, hi + 1) for lo, hi in ranges)
    return bool(grid[window].any())


def effective_refinements(
    pi: FractionalVote,
    rule: QuotaRule,
    agenda: Agenda,
    n: int,
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> frozenset[OutcomeVector]:
    """Refinements of pi that some n-vote profile actually aggregates to."""
    return frozenset(
        alpha
        for alpha in refinements(pi, rule, agenda)
        if outcome_feasible(alpha, n, rule, agenda, state_budget=state_budget)
    )


def check_kappa1(
    n: int,
    rule: QuotaRule,
    agenda: Agenda,
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> bool:
    """True iff no profile of n votes aggregates to an inconsistent outcome."""
    return not any(
        outcome_feasible(alpha, n, rule, agenda, state_budget=state_budget)
        for alpha in inconsistent_outcomes(agenda)
    )


# ---------------------------------------------------------------------------
# Sign-pattern feasibility over the convex hull (exact Fourier-Motzkin)
# ---------------------------------------------------------------------------

Row = tuple[tuple[Fraction, ...], Fraction]


def _normalize_row(coeffs: tuple[Fraction, ...], rhs: Fraction) -> Row:
    scale = math.lcm(*(c.denominator for c in coeffs), rhs.denominator)
    ints = [int(c * scale) for c in coeffs] + [int(rhs * scale)]
    g = math.gcd(*(abs(v) for v in ints))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1])


def _fourier_motzkin(rows: list[Row], nvars: int) -> Optional[tuple[Fraction, ...]]:
    """Feasible point of {y : coeffs . y <= rhs for each row}, or None.

    Eliminates the last variable first; a witness is rebuilt by assigning
    variables in index order from the recorded pre-elimination systems.
    """
    snapshots: list[tuple[int, list[Row]]] = []
    system = [_normalize_row(c, r) for c, r in rows]
    for var in range(nvars - 1, -1, -1):
        system = list(dict.fromkeys(system))
        snapshots.append((var, system))
        pos = [r for r in system if r[0][var] > 0]
        neg = [r for r in system if r[0][var] < 0]
        keep = [r for r in system if r[0][var] == 0]
        new = keep
        for cp, bp in pos:
            for cn, bn in neg:
                mp, mn = -cn[var], cp[var]
                coeffs = tuple(mp * x + mn * y for x, y in zip(cp, cn))
                new.append(_normalize_row(coeffs, mp * bp + mn * bn))
        system = new
    if any(rhs < 0 for _, rhs in system):
        return None
    values: list[Fraction] = [Fraction(0)] * nvars
    for var, snap in reversed(snapshots):
        lowers, uppers = [], []
        for coeffs, rhs in snap:
            a = coeffs[var]
            if a == 0:
                continue
            rest = sum(
                (c * values[w] for w, c in enumerate(coeffs) if w != var and c != 0),
                Fraction(0),
            )
            bound = (rhs - rest) / a
            (uppers if a > 0 else lowers).append(bound)
        if lowers:
            values[var] = max(lowers)
        elif uppers:
            values[var] = min(uppers)
    return tuple(values)


def _pattern_rows(
    beta: SignPattern, dists: DistributionSet, rule: QuotaRule, agenda: Agenda
) -> list[Row]:
    ell = dists.size
    gaps = []
    for i in range(1, agenda.p + 2):
        q = rule.thresholds[i - 1]
        gaps.append(
            tuple(q - support_probability(pi, i, agenda) for pi in dists.members)
        )
    rows: list[Row] = []
    strict = False
    for s, gap in zip(beta, gaps):
        if s > 0:
            rows.append((gap, Fraction(-1)))
            strict = True
        elif s < 0:
            rows.append((tuple(-g for g in gap), Fraction(-1)))
            strict = True
        else:
            rows.append((gap, Fraction(0)))
            rows.append((tuple(-g for g in gap), Fraction(0)))
    for k in range(ell):
        unit = tuple(Fraction(-1) if j == k else Fraction(0) for j in range(ell))
        rows.append((unit, Fraction(0)))
    if not strict:
        # all-tied pattern: the homogeneous system admits y = 0, which does
        # not represent a distribution; require total weight >= 1
        rows.append((tuple(Fraction(-1) for _ in range(ell)), Fraction(-1)))
    return rows


def _check_pattern(beta: Sequence[int], agenda: Agenda) -> SignPattern:
    beta = tuple(int(s) for s in beta)
    if len(beta) != agenda.p + 1:
        raise DimensionError(f"pattern has {len(beta)} entries, expected {agenda.p + 1}")
    if any(s not in (-1, 0, 1) for s in beta):
        raise ValueError("sign pattern entries must be -1, 0, or +1")
    return beta


def sign_pattern_witness(
    beta: Sequence[int], dists: DistributionSet, rule: QuotaRule, agenda: Agenda
) -> Optional[FractionalVote]:
    """A convex combination of the members realizing the pattern, or None.

    Strict inequalities are encoded on the homogeneous cone (scaled to unit
    slack), which is exact because the sign of q_i minus the support
    probability is invariant under positive scaling of the mixture weights.
    """
    _check_rule(rule, agenda)
    beta = _check_pattern(beta, agenda)
    if dists.m != agenda.m:
        raise DimensionError(f"distribution length {dists.m} != agenda m {agenda.m}")
    y = _fourier_motzkin(_pattern_rows(beta, dists, rule, agenda), dists.size)
    if y is None:
        return None
    total = sum(y, Fraction(0))
    if total <= 0:
        return None
    weights = [Fraction(0)] * dists.m
    for yk, member in zip(y, dists.members):
        if yk == 0:
            continue
        for j, w in enumerate(member.weights):
            weights[j] += yk * w
    return FractionalVote(tuple(w / total for w in weights))


def feasible_sign_pattern(
    beta: Sequence[int], dists: DistributionSet, rule: QuotaRule, agenda: Agenda
) -> bool:
    """True iff some distribution in the convex hull of the members has pattern beta."""
    return sign_pattern_witness(beta, dists, rule, agenda) is not None


# ---------------------------------------------------------------------------
# kappa2 / kappa3 / kappa4
# ---------------------------------------------------------------------------


def _pattern_allows(alpha: OutcomeVector, beta: SignPattern) -> bool:
    return all(
        (s == 0) or (s > 0 and a == 1) or (s < 0 and a == 0)
        for a, s in zip(alpha, beta)
    )


def _feasible_inconsistent(
    n: int, rule: QuotaRule, agenda: Agenda, state_budget: int
) -> list[OutcomeVector]:
    return [
        alpha
        for alpha in inconsistent_outcomes(agenda)
        if outcome_feasible(alpha, n, rule, agenda, state_budget=state_budget)
    ]


def check_kappa2(
    dists: DistributionSet,
    rule: QuotaRule,
    agenda: Agenda,
    n: int,
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> bool:
    """True iff every reachable distribution has only consistent effective refinements.

    Quantifies over the convex hull through sign patterns: the effective
    refinement set depends on the distribution only via its pattern. The
    population size enters only through which outcomes are feasible at n, so
    the answer stabilizes once n exceeds a small instance-dependent bound
    (observable by sweeping n, not assumed here).
    """
    bad = _feasible_inconsistent(n, rule, agenda, state_budget)
    if not bad:
        return True
    for beta in product((1, 0, -1), repeat=agenda.p + 1):
        if not any(_pattern_allows(alpha, beta) for alpha in bad):
            continue
        if feasible_sign_pattern(beta, dists, rule, agenda):
            return False
    return True


def check_kappa3(
    dists: DistributionSet,
    rule: QuotaRule,
    agenda: Agenda,
    n: int,
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> bool:
    """True iff some reachable distribution has only consistent effective refinements."""
    bad = _feasible_inconsistent(n, rule, agenda, state_budget)
    for beta in product((1, 0, -1), repeat=agenda.p + 1):
        if any(_pattern_allows(alpha, beta) for alpha in bad):
            continue
        if feasible_sign_pattern(beta, dists, rule, agenda):
            return True
    return False


def check_kappa4(rule: QuotaRule, agenda: Agenda) -> bool:
    """True iff the conclusion mirrors a single premise with a matching threshold.

    Either the truth table equals the projection onto some premise i and the
    conclusion threshold equals q_i, or it equals the negated projection and
    the conclusion threshold equals 1 - q_i.
    """
    _check_rule(rule, agenda)
    q_conclusion = rule.thresholds[agenda.p]
    for i in range(1, agenda.p + 1):
        proj = tuple((j >> (agenda.p - i)) & 1 for j in range(agenda.m))
        if agenda.truth_table == proj and q_conclusion == rule.thresholds[i - 1]:
            return True
        negated = tuple(1 - v for v in proj)
        if agenda.truth_table == negated and q_conclusion == 1 - rule.thresholds[i - 1]:
            return True
    return False


def kappa_conditions(
    dists: DistributionSet,
    rule: QuotaRule,
    agenda: Agenda,
    n: int,
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> tuple[bool, bool, bool, bool]:
    """The four condition flags as they enter the asymptotic case split.

    When the first condition holds (no paradox profile exists at n at all) the
    exponential-regime conditions are unreachable branches of the case split
    and are reported as false; the standalone checkers keep their literal
    definitions.
    """
    k1 = check_kappa1(n, rule, agenda, state_budget=state_budget)
    k4 = check_kappa4(rule, agenda)
    if k1:
        return (True, False, False, k4)
    k2 = check_kappa2(dists, rule, agenda, n, state_budget=state_budget)
    k3 = k2 or check_kappa3(dists, rule, agenda, n, state_budget=state_budget)
    return (False, k2, k3, k4)
