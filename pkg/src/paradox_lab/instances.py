"""Instance files: parsing, validation with field paths, and serialization.

An instance bundles an agenda, a quota rule, and a distribution set:

    {
      "label": "two premises, conjunction",
      "p": 2,
      "truth_table": [0, 0, 0, 1],
      "thresholds": ["1/2", "1/2", "1/2"],
      "breakings": [1, 1, 0],
      "distributions": [["1/4", "1/4", "1/4", "1/4"],
                        ["1/25", "8/25", "8/25", "8/25"]]
    }

Rationals are strings ("1/2" or the exact decimal shorthand "0.5") or
integers; floats are rejected so values stay exact end to end. thresholds and
breakings are arrays of length p+1 whose final entry belongs to the
conclusion; the object form {"premises": [...], "conclusion": ...} is accepted
as an equivalent spelling.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from .errors import ValidationError
from .model import Agenda, FractionalVote, QuotaRule, format_rational
from .conditions import DistributionSet


@dataclass(frozen=True)
class Instance:
    """One fully specified experiment: agenda, rule, and distribution set."""

    label: str
    agenda: Agenda
    rule: QuotaRule
    distributions: DistributionSet

    def __post_init__(self):
        if self.rule.propositions != self.agenda.p + 1:
            raise ValidationError(
                "thresholds",
                f"rule covers {self.rule.propositions} propositions, "
                f"agenda needs {self.agenda.p + 1}",
            )
        if self.distributions.m != self.agenda.m:
            raise ValidationError(
                "distributions",
                f"distributions have length {self.distributions.m}, "
                f"agenda needs {self.agenda.m}",
            )


def _rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(path, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValidationError(
            path, f"floats are not accepted; write the value as a string, e.g. \"{value}\""
        )
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(path, f"cannot parse {value!r} as a rational") from None
    raise ValidationError(path, f"expected a rational string or integer, got {type(value).__name__}")


def _bit(value, path: str) -> int:
    if isinstance(value, bool) or value not in (0, 1):
        raise ValidationError(path, f"expected 0 or 1, got {value!r}")
    return int(value)


def _proposition_array(value, p: int, path: str, parse_entry) -> list:
    """Length p+1 array, or {"premises": [...], "conclusion": ...}."""
    if isinstance(value, dict):
        unknown = set(value) - {"premises", "conclusion"}
        if unknown:
            raise ValidationError(path, f"unknown keys {sorted(unknown)}")
        if "premises" not in value or "conclusion" not in value:
            raise ValidationError(path, "object form needs 'premises' and 'conclusion'")
        premises = value["premises"]
        if not isinstance(premises, list) or len(premises) != p:
            raise ValidationError(f"{path}.premises", f"expected a list of length p={p}")
        entries = [
            parse_entry(v, f"{path}.premises[{i}]") for i, v in enumerate(premises)
        ]
        entries.append(parse_entry(value["conclusion"], f"{path}.conclusion"))
        return entries
    if not isinstance(value, list):
        raise ValidationError(path, "expected a list or a premises/conclusion object")
    if len(value) != p + 1:
        raise ValidationError(
            path, f"expected {p + 1} entries (p premises plus the conclusion), got {len(value)}"
        )
    return [parse_entry(v, f"{path}[{i}]") for i, v in enumerate(value)]


def parse_instance_dict(data: dict) -> Instance:
    """Validate and build an Instance from parsed JSON; errors carry field paths."""
    if not isinstance(data, dict):
        raise ValidationError("$", f"expected an object, got {type(data).__name__}")
    unknown = set(data) - {"label", "p", "truth_table", "thresholds", "breakings", "distributions"}
    if unknown:
        raise ValidationError("$", f"unknown keys {sorted(unknown)}")

    label = data.get("label", "")
    if not isinstance(label, str):
        raise ValidationError("label", "expected a string")

    p = data.get("p")
    if not isinstance(p, int) or isinstance(p, bool) or p < 1:
        raise ValidationError("p", f"expected a positive integer, got {p!r}")
    m = 1 << p

    table = data.get("truth_table")
    if not isinstance(table, list):
        raise ValidationError("truth_table", "expected a list")
    if len(table) != m:
        raise ValidationError("truth_table", f"expected 2^p = {m} entries, got {len(table)}")
    truth_table = tuple(_bit(v, f"truth_table[{i}]") for i, v in enumerate(table))
    agenda = Agenda(p, truth_table)

    thresholds = _proposition_array(data.get("thresholds"), p, "thresholds", _rational)
    for i, q in enumerate(thresholds):
        if q < 0 or q > 1:
            raise ValidationError(f"thresholds[{i}]", f"threshold {q} outside [0, 1]")
    breakings = _proposition_array(data.get("breakings"), p, "breakings", _bit)
    rule = QuotaRule(tuple(thresholds), tuple(breakings))

    raw_dists = data.get("distributions")
    if not isinstance(raw_dists, list) or not raw_dists:
        raise ValidationError("distributions", "expected a non-empty list of distributions")
    members = []
    for k, row in enumerate(raw_dists):
        path = f"distributions[{k}]"
        if not isinstance(row, list) or len(row) != m:
            raise ValidationError(path, f"expected a list of length 2^p = {m}")
        weights = tuple(_rational(v, f"{path}[{j}]") for j, v in enumerate(row))
        for j, w in enumerate(weights):
            if w < 0 or w > 1:
                raise ValidationError(f"{path}[{j}]", f"weight {w} outside [0, 1]")
        total = sum(weights, Fraction(0))
        if total != 1:
            raise ValidationError(path, f"weights sum to {total}, expected exactly 1")
        members.append(FractionalVote(weights))
    if len(set(members)) != len(members):
        raise ValidationError("distributions", "distributions must be pairwise distinct")
    dists = DistributionSet(tuple(members))

    return Instance(label, agenda, rule, dists)


def parse_instance(
    path: Union[str, Path], *, require_strictly_positive: bool = False
) -> Instance:
    """Load and validate an instance file.

    A distribution set that is not strictly positive raises when
    ``require_strictly_positive`` (condition checking and classification need
    it) and warns otherwise.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ValidationError("$", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError("$", f"invalid JSON: {exc}") from None
    instance = parse_instance_dict(data)
    if not instance.distributions.is_strictly_positive:
        message = (
            "distribution set is not strictly positive "
            f"(smallest weight {instance.distributions.epsilon})"
        )
        if require_strictly_positive:
            raise ValidationError("distributions", message)
        warnings.warn(message, stacklevel=2)
    return instance


def instance_to_dict(instance: Instance) -> dict:
    """Canonical JSON-ready form; parse_instance_dict inverts it exactly."""
    return {
        "label": instance.label,
        "p": instance.agenda.p,
        "truth_table": list(instance.agenda.truth_table),
        "thresholds": [format_rational(q) for q in instance.rule.thresholds],
        "breakings": list(instance.rule.breakings),
        "distributions": [
            [format_rational(w) for w in member.weights]
            for member in instance.distributions.members
        ],
    }


def write_instance(instance: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n")
