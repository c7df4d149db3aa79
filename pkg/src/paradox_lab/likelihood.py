"""Paradox probabilities: exact convolution, Monte Carlo, adversarial extremes.

Exact probabilities start in rational arithmetic (a distribution over integer
histograms, convolved one agent at a time) and degrade once to 80-bit floating
accumulation when state denominators outgrow a configurable bit cap; the
accumulated forward error of the nonnegative multiply-add chain is bounded by
(number of steps) * machine epsilon, orders of magnitude below every tolerance
used here. Because quota rules are anonymous and agents sample independently,
the probability depends on a distribution assignment only through its counts,
so the adversarial sup/inf ranges over count multisets rather than ordered
assignments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import DimensionError, ResourceBudgetError
from .model import Agenda, QuotaRule
from .aggregation import _check_rule, count_verdict, proposition_patterns
from .conditions import DistributionSet, kappa_conditions

DEFAULT_TRIALS = 10**6
DEFAULT_DENOMINATOR_BITS = 4096
DEFAULT_STATE_BUDGET = 60_000_000
DEFAULT_ASSIGNMENT_BUDGET = 50_000
_TWO_BLOCK_MIN_N = 10
_LONGDOUBLE_STORE_LIMIT = 8_000_000
_MC_CHUNK = 1 << 17


class Rate(str, Enum):
    """Asymptotic regimes of the smoothed paradox likelihood."""

    ZERO = "zero"
    EXP_SMALL = "exp_small"
    INV_SQRT = "inv_sqrt"
    CONSTANT = "constant"


@dataclass(frozen=True)
class Classification:
    """Asymptotic rates for the max- and min-adversary with the condition flags."""

    max_rate: Rate
    min_rate: Rate
    kappas: tuple[bool, bool, bool, bool]


@dataclass(frozen=True)
class Assignment:
    """How many agents draw from each distribution-set member."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if any(c < 0 for c in counts):
            raise ValueError("assignment counts must be non-negative")
        if sum(counts) < 1:
            raise ValueError("assignment must cover at least one agent")

    @property
    def n(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class HistogramDistribution:
    """Exact law of the integer histogram after some number of agents."""

    probabilities: Mapping[tuple[int, ...], Fraction]
    agents: int

    def total(self) -> Fraction:
        return sum(self.probabilities.values(), Fraction(0))


@dataclass(frozen=True)
class SmoothedExtremes:
    """Max/min paradox probability over all assignments, with witnesses."""

    n: int
    mode: str
    max_probability: Union[Fraction, float]
    max_witness: Assignment
    max_stderr: float
    min_probability: Union[Fraction, float]
    min_witness: Assignment
    min_stderr: float


def compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All count vectors of length ``parts`` summing to n, lexicographically."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def compositions_upto(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All count vectors of length ``parts`` summing to at most n."""
    if parts == 0:
        yield ()
        return
    for first in range(n + 1):
        for rest in compositions_upto(n - first, parts - 1):
            yield (first,) + rest


def _as_assignment(a: Union[Assignment, Sequence[int]]) -> Assignment:
    return a if isinstance(a, Assignment) else Assignment(tuple(a))


def _check_inputs(dists: DistributionSet, rule: QuotaRule, agenda: Agenda) -> None:
    _check_rule(rule, agenda)
    if dists.m != agenda.m:
        raise DimensionError(f"distribution length {dists.m} != agenda m {agenda.m}")


def _verdict_lookup(rule: QuotaRule, agenda: Agenda, n: int) -> list[np.ndarray]:
    """Per-proposition verdict for every integer support count 0..n (exact)."""
    tables = []
    for i in range(1, agenda.p + 2):
        q, d = rule.thresholds[i - 1], rule.breakings[i - 1]
        tables.append(
            np.array(
                [count_verdict(Fraction(c), Fraction(n), q, d) for c in range(n + 1)],
                dtype=np.int8,
            )
        )
    return tables


def _paradox_indicator(rule: QuotaRule, agenda: Agenda, n: int) -> np.ndarray:
    """Boolean grid over count vectors marking inconsistent quota outcomes at total n."""
    p = agenda.p
    tables = _verdict_lookup(rule, agenda, n)
    idx = np.zeros((n + 1,) * (p + 1), dtype=np.int32)
    for i in range(p):
        shape = [1] * (p + 1)
        shape[i] = n + 1
        idx = idx * 2 + tables[i].astype(np.int32).reshape(shape)
    truth = np.array(agenda.truth_table, dtype=np.int8)[idx]
    shape = [1] * (p + 1)
    shape[p] = n + 1
    conclusion = tables[p].reshape(shape)
    return truth != conclusion


def _paradox_counts(
    rule: QuotaRule, agenda: Agenda, n: int, counts: Sequence[int]
) -> bool:
    verdict = tuple(
        count_verdict(Fraction(c), Fraction(n), rule.thresholds[i], rule.breakings[i])
        for i, c in enumerate(counts)
    )
    code = 0
    for v in verdict[: agenda.p]:
        code = code * 2 + v
    return agenda.truth_table[code] != verdict[agenda.p]


def _counts_of_histogram(
    hist: Sequence[int], patterns: Sequence[tuple[int, ...]], p: int
) -> tuple[int, ...]:
    counts = [0] * (p + 1)
    for x, pat in zip(hist, patterns):
        if x:
            for i, bit in enumerate(pat):
                if bit:
                    counts[i] += x
    return tuple(counts)


def _float_weights(weights: Sequence[Fraction]) -> list[np.longdouble]:
    return [np.longdouble(w.numerator) / np.longdouble(w.denominator) for w in weights]


def _grid_step(
    grid: np.ndarray,
    weights: Sequence,
    patterns: Sequence[tuple[int, ...]],
    box: int,
) -> np.ndarray:
    """One-agent convolution: shift-and-add over the vote patterns, within a box."""
    new = np.zeros_like(grid)
    hi = min(box, grid.shape[0])
    for w, pat in zip(weights, patterns):
        if w == 0:
            continue
        dst = tuple(slice(c, hi) for c in pat)
        src = tuple(slice(0, hi - c) for c in pat)
        new[dst] += w * grid[src]
    return new


def exact_paradox_probability(
    assignment: Union[Assignment, Sequence[int]],
    dists: DistributionSet,
    rule: QuotaRule,
    agenda: Agenda,
    *,
    value_mode: str = "auto",
    denominator_bit_limit: int = DEFAULT_DENOMINATOR_BITS,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> Union[Fraction, float]:
    """Probability that a profile drawn under the assignment is a paradox.

    ``value_mode='rational'`` keeps exact fractions throughout; ``'float'``
    runs the whole convolution in extended precision; ``'auto'`` starts
    rational and degrades once state denominators exceed the bit cap.
    """
    if value_mode not in ("auto", "rational", "float"):
        raise ValueError(f"unknown value_mode {value_mode!r}")
    assignment = _as_assignment(assignment)
    _check_inputs(dists, rule, agenda)
    if len(assignment.counts) != dists.size:
        raise DimensionError(
            f"assignment covers {len(assignment.counts)} distributions, set has {dists.size}"
        )
    n = assignment.n
    p = agenda.p
    patterns = proposition_patterns(agenda)
    agents: list[int] = []
    for member_index, count in enumerate(assignment.counts):
        agents.extend([member_index] * count)

    sparse = [
        [(j, w) for j, w in enumerate(member.weights) if w != 0]
        for member in dists.members
    ]
    float_sparse = []
    for entries in sparse:
        float_sparse.append(
            (
                _float_weights([w for _, w in entries]),
                [patterns[j] for j, _ in entries],
            )
        )

    def make_grid() -> np.ndarray:
        cells = (n + 1) ** (p + 1)
        if cells > state_budget:
            raise ResourceBudgetError(
                "probability grid too large", required=cells, budget=state_budget
            )
        return np.zeros((n + 1,) * (p + 1), dtype=np.longdouble)

    grid: Optional[np.ndarray] = None
    states: Optional[dict[tuple[int, ...], Fraction]] = None
    if value_mode == "float":
        grid = make_grid()
        grid[(0,) * (p + 1)] = 1.0
    else:
        states = {(0,) * agenda.m: Fraction(1)}

    for step, member_index in enumerate(agents):
        if grid is not None:
            weights, pats = float_sparse[member_index]
            grid = _grid_step(grid, weights, pats, box=step + 2)
            continue
        new: dict[tuple[int, ...], Fraction] = {}
        for hist, prob in states.items():
            for j, w in sparse[member_index]:
                key = hist[:j] + (hist[j] + 1,) + hist[j + 1 :]
                acc = new.get(key)
                new[key] = prob * w if acc is None else acc + prob * w
        states = new
        if len(states) > state_budget:
            raise ResourceBudgetError(
                "histogram state count exceeded",
                required=len(states),
                budget=state_budget,
            )
        if value_mode == "auto" and any(
            prob.denominator.bit_length() > denominator_bit_limit
            for prob in states.values()
        ):
            grid = make_grid()
            for hist, prob in states.items():
                key = _counts_of_histogram(hist, patterns, p)
                grid[key] += np.longdouble(prob.numerator) / np.longdouble(
                    prob.denominator
                )
            states = None

    if grid is not None:
        indicator = _paradox_indicator(rule, agenda, n)
        return float((grid * indicator).sum())

    by_counts: dict[tuple[int, ...], Fraction] = {}
    for hist, prob in states.items():
        key = _counts_of_histogram(hist, patterns, p)
        by_counts[key] = by_counts.get(key, Fraction(0)) + prob
    return sum(
        (
            prob
            for counts, prob in by_counts.items()
            if _paradox_counts(rule, agenda, n, counts)
        ),
        Fraction(0),
    )


def histogram_distribution(
    assignment: Union[Assignment, Sequence[int]],
    dists: DistributionSet,
) -> HistogramDistribution:
    """Exact law of the integer histogram under the assignment (rational only)."""
    assignment = _as_assignment(assignment)
    if len(assignment.counts) != dists.size:
        raise DimensionError(
            f"assignment covers {len(assignment.counts)} distributions, set has {dists.size}"
        )
    states = {(0,) * dists.m: Fraction(1)}
    for member, count in zip(dists.members, assignment.counts):
        sparse = [(j, w) for j, w in enumerate(member.weights) if w != 0]
        for _ in range(count):
            new: dict[tuple[int, ...], Fraction] = {}
            for hist, prob in states.items():
                for j, w in sparse:
                    key = hist[:j] + (hist[j] + 1,) + hist[j + 1 :]
                    acc = new.get(key)
                    new[key] = prob * w if acc is None else acc + prob * w
            states = new
    return HistogramDistribution(states, assignment.n)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def assignment_seed(master_seed: int, assignment_index: int) -> np.random.SeedSequence:
    """Generator seed for one assignment: SeedSequence(master, spawn_key=(index,)).

    The index is the assignment's position in the lexicographic enumeration of
    count vectors, so streams are independent across assignments yet fully
    reproducible from the master seed.
    """
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(assignment_index,))


def monte_carlo_estimate(
    assignment: Union[Assignment, Sequence[int]],
    dists: DistributionSet,
    n: int,
    rule: QuotaRule,
    agenda: Agenda,
    trials: int = DEFAULT_TRIALS,
    seed: Union[int, np.random.SeedSequence] = 0,
) -> tuple[float, float]:
    """Paradox frequency over i.i.d. sampled profiles, with binomial standard error.

    The generator stream is fully determined by the seed; identical
    (seed, trials, instance) inputs reproduce the estimate bit for bit.
    Sampling probabilities are float-rounded, but every verdict on a sampled
    integer histogram uses exact integer cross-multiplication.
    """
    assignment = _as_assignment(assignment)
    _check_inputs(dists, rule, agenda)
    if assignment.n != n:
        raise ValueError(f"assignment totals {assignment.n} agents, expected n={n}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    rng = np.random.default_rng(seed)

    chi = np.array(proposition_patterns(agenda), dtype=np.int64)
    numerators = np.array([q.numerator for q in rule.thresholds], dtype=np.int64)
    denominators = np.array([q.denominator for q in rule.thresholds], dtype=np.int64)
    breakings = np.array(rule.breakings, dtype=bool)
    truth = np.array(agenda.truth_table, dtype=np.int64)
    powers = 1 << np.arange(agenda.p - 1, -1, -1)

    pvals = []
    for member in dists.members:
        vec = np.array([float(w) for w in member.weights], dtype=np.float64)
        pvals.append(vec / vec.sum())

    hits = 0
    done = 0
    while done < trials:
        chunk = min(_MC_CHUNK, trials - done)
        support = np.zeros((chunk, agenda.p + 1), dtype=np.int64)
        for count, member_pvals in zip(assignment.counts, pvals):
            if count == 0:
                continue
            draws = rng.multinomial(count, member_pvals, size=chunk)
            support += draws @ chi
        lhs = support * denominators[None, :]
        rhs = numerators[None, :] * n
        verdict = (lhs > rhs) | ((lhs == rhs) & breakings[None, :])
        index = verdict[:, : agenda.p].astype(np.int64) @ powers
        hits += int((truth[index] != verdict[:, agenda.p]).sum())
        done += chunk

    estimate = hits / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    return estimate, stderr


# ---------------------------------------------------------------------------
# Adversarial extremes over assignments
# ---------------------------------------------------------------------------


def _two_block_probabilities(
    member_a,
    member_b,
    split_total: int,
    rule: QuotaRule,
    agenda: Agenda,
    n_total: int,
    prefix_grid: Optional[np.ndarray],
    prefix_support: int,
    state_budget: int,
) -> np.ndarray:
    """P(paradox) for (k member_a agents, split_total - k member_b agents, prefix).

    One stored forward chain for member_a meets one in-place backward
    absorption chain for member_b, so all split_total + 1 assignments cost
    O(m * n^(p+2)) together instead of per assignment.
    """
    p = agenda.p
    dims = (n_total + 1,) * (p + 1)
    cells = (n_total + 1) ** (p + 1)
    chain_entries = sum(
        min(prefix_support + k + 1, n_total + 1) ** (p + 1)
        for k in range(split_total + 1)
    )
    if cells > state_budget or chain_entries > state_budget:
        raise ResourceBudgetError(
            "exact-extremes state grid too large",
            required=max(cells, chain_entries),
            budget=state_budget,
        )
    patterns = proposition_patterns(agenda)
    weights_a = _float_weights(member_a.weights)
    weights_b = _float_weights(member_b.weights)
    store = np.longdouble if chain_entries <= _LONGDOUBLE_STORE_LIMIT else np.float64

    if prefix_grid is None:
        cur = np.zeros(dims, dtype=np.longdouble)
        cur[(0,) * (p + 1)] = 1.0
    else:
        cur = prefix_grid.astype(np.longdouble, copy=True)
    forward: list[np.ndarray] = []
    for k in range(split_total + 1):
        box = min(prefix_support + k + 1, n_total + 1)
        forward.append(cur[(slice(0, box),) * (p + 1)].astype(store, copy=True))
        if k < split_total:
            cur = _grid_step(cur, weights_a, patterns, box=prefix_support + k + 2)

    absorb = _paradox_indicator(rule, agenda, n_total).astype(np.longdouble)
    probs = np.zeros(split_total + 1, dtype=np.longdouble)
    for j in range(split_total + 1):
        k = split_total - j
        box = min(prefix_support + k + 1, n_total + 1)
        window = (slice(0, box),) * (p + 1)
        probs[k] = (forward[k].astype(np.longdouble) * absorb[window]).sum()
        if j < split_total:
            # absorb one more member_b agent: W(s) <- sum_w w * W(s + pattern)
            new = np.zeros(dims, dtype=np.longdouble)
            for w, pat in zip(weights_b, patterns):
                if w == 0:
                    continue
                src = tuple(slice(c, n_total + 1) for c in pat)
                dst = tuple(slice(0, n_total + 1 - c) for c in pat)
                new[dst] += w * absorb[src]
            absorb = new
    return np.clip(probs, 0.0, 1.0)


def _exact_assignment_probabilities(
    dists: DistributionSet,
    n: int,
    rule: QuotaRule,
    agenda: Agenda,
    value_mode: str,
    state_budget: int,
) -> list[tuple[tuple[int, ...], Union[Fraction, float]]]:
    ell = dists.size
    if value_mode == "rational" or n < _TWO_BLOCK_MIN_N or ell < 2:
        return [
            (
                counts,
                exact_paradox_probability(
                    counts,
                    dists,
                    rule,
                    agenda,
                    value_mode=value_mode,
                    state_budget=state_budget,
                ),
            )
            for counts in compositions(n, ell)
        ]

    patterns = proposition_patterns(agenda)
    results: list[tuple[tuple[int, ...], Union[Fraction, float]]] = []
    leading = [()] if ell == 2 else list(compositions_upto(n, ell - 2))
    for lead in leading:
        lead_total = sum(lead)
        split_total = n - lead_total
        prefix_grid = None
        if lead_total:
            prefix_grid = np.zeros((n + 1,) * (agenda.p + 1), dtype=np.longdouble)
            prefix_grid[(0,) * (agenda.p + 1)] = 1.0
            done = 0
            for offset, count in enumerate(lead):
                weights = _float_weights(dists.members[2 + offset].weights)
                for _ in range(count):
                    prefix_grid = _grid_step(prefix_grid, weights, patterns, box=done + 2)
                    done += 1
        probs = _two_block_probabilities(
            dists.members[0],
            dists.members[1],
            split_total,
            rule,
            agenda,
            n,
            prefix_grid,
            lead_total,
            state_budget,
        )
        for k in range(split_total + 1):
            results.append(((k, split_total - k) + lead, float(probs[k])))
    return results


def smoothed_extremes(
    dists: DistributionSet,
    n: int,
    rule: QuotaRule,
    agenda: Agenda,
    mode: str = "exact",
    *,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    value_mode: str = "auto",
    assignment_budget: int = DEFAULT_ASSIGNMENT_BUDGET,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> SmoothedExtremes:
    """Max and min paradox probability over every distribution assignment.

    Ties between assignments are broken toward the lexicographically smallest
    count vector, so witnesses are deterministic. In Monte Carlo mode each
    assignment gets its own generator stream via :func:`assignment_seed`.
    """
    _check_inputs(dists, rule, agenda)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if mode not in ("exact", "mc", "monte_carlo"):
        raise ValueError(f"unknown mode {mode!r}")
    ell = dists.size
    total_assignments = math.comb(n + ell - 1, ell - 1)
    if total_assignments > assignment_budget:
        raise ResourceBudgetError(
            "too many distribution assignments",
            required=total_assignments,
            budget=assignment_budget,
        )

    if mode == "exact":
        evaluated = [
            (counts, prob, 0.0)
            for counts, prob in _exact_assignment_probabilities(
                dists, n, rule, agenda, value_mode, state_budget
            )
        ]
    else:
        evaluated = []
        for index, counts in enumerate(compositions(n, ell)):
            est, se = monte_carlo_estimate(
                counts, dists, n, rule, agenda, trials, assignment_seed(seed, index)
            )
            evaluated.append((counts, est, se))

    max_prob = max(entry[1] for entry in evaluated)
    min_prob = min(entry[1] for entry in evaluated)
    max_counts, _, max_se = min(
        (entry for entry in evaluated if entry[1] == max_prob), key=lambda e: e[0]
    )
    min_counts, _, min_se = min(
        (entry for entry in evaluated if entry[1] == min_prob), key=lambda e: e[0]
    )
    label = "exact" if mode == "exact" else "mc"
    return SmoothedExtremes(
        n=n,
        mode=label,
        max_probability=max_prob,
        max_witness=Assignment(max_counts),
        max_stderr=max_se,
        min_probability=min_prob,
        min_witness=Assignment(min_counts),
        min_stderr=min_se,
    )


def classify(
    dists: DistributionSet,
    rule: QuotaRule,
    agenda: Agenda,
    n: int,
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> Classification:
    """Asymptotic regime of the max/min smoothed paradox likelihood at n.

    Case order: no paradox profile -> zero; all (some) hull distributions
    have only consistent effective refinements -> exponentially small for the
    max (min); single-premise conclusion with matching threshold -> n^{-1/2};
    otherwise constant.
    """
    _check_inputs(dists, rule, agenda)
    if not dists.is_strictly_positive:
        raise ValueError(
            "classification requires a strictly positive distribution set "
            f"(smallest weight is {dists.epsilon})"
        )
    k1, k2, k3, k4 = kappa_conditions(dists, rule, agenda, n, state_budget=state_budget)
    if k1:
        return Classification(Rate.ZERO, Rate.ZERO, (k1, k2, k3, k4))
    max_rate = Rate.EXP_SMALL if k2 else (Rate.INV_SQRT if k4 else Rate.CONSTANT)
    min_rate = Rate.EXP_SMALL if k3 else (Rate.INV_SQRT if k4 else Rate.CONSTANT)
    return Classification(max_rate, min_rate, (k1, k2, k3, k4))
