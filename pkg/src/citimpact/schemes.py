"""Rank-class schemes: the binning-and-weighting rules applied on top of
percentile values.

Built-ins:

* ``PR6`` — the six classes used by the NSB Science & Engineering
  Indicators: bottom-50% through top-1%, integer weights 1..6.
* ``EI10`` / ``EI1`` — two-class excellence schemes: papers in the top-x%
  weighted 1, the rest 0.
* ``CONTINUOUS`` — no binning; every paper contributes its raw percentile
  value (percentiles treated as a continuous quantile variable).

Custom schemes load from a JSON file holding a list of
``{"lower": .., "upper": .., "weight": ..}`` objects that partition
[0, 100].

Boundary convention (documented in every report): classes are closed below
and open above, except the last class which is also closed at 100. A paper
exactly on a boundary belongs to the higher class.
"""

from __future__ import annotations

import json
import math
import re
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DomainError

BOUNDARY_CONVENTION = "classes closed below, open above; last class closed at 100"


@dataclass(frozen=True)
class RankClass:
    lower: float
    upper: float
    weight: float


@dataclass(frozen=True)
class RankClassScheme:
    """An ordered partition of [0, 100] into weighted percentile classes."""

    name: str
    classes: tuple[RankClass, ...]
    continuous: bool = False

    def __post_init__(self):
        if self.continuous:
            if self.classes:
                raise ConfigError("a continuous scheme carries no classes")
            return
        if not self.classes:
            raise ConfigError(f"scheme {self.name!r} has no classes")
        if self.classes[0].lower != 0.0:
            raise ConfigError(f"scheme {self.name!r}: first class must start at 0")
        if self.classes[-1].upper != 100.0:
            raise ConfigError(f"scheme {self.name!r}: last class must end at 100")
        previous_upper = 0.0
        for cls in self.classes:
            if cls.lower != previous_upper:
                raise ConfigError(
                    f"scheme {self.name!r}: classes must be contiguous, "
                    f"gap or overlap at {cls.lower}"
                )
            if not cls.lower < cls.upper:
                raise ConfigError(f"scheme {self.name!r}: class [{cls.lower}, {cls.upper}) is empty")
            if not math.isfinite(cls.weight):
                raise ConfigError(f"scheme {self.name!r}: weight {cls.weight} is not finite")
            previous_upper = cls.upper

    @property
    def lowers(self) -> list[float]:
        return [cls.lower for cls in self.classes]

    def classify(self, value: float) -> tuple[int, float]:
        """Class index and weight of the class containing ``value``."""
        if self.continuous:
            raise ConfigError("a continuous scheme has no classes to classify into")
        if not 0.0 <= value <= 100.0:
            raise ConfigError(f"percentile value {value} outside [0, 100]")
        index = bisect_right(self.lowers, value) - 1
        return index, self.classes[index].weight

    def weight_of(self, value: float) -> float:
        """Per-paper weight: the class weight, or the raw percentile value
        under the continuous scheme."""
        if self.continuous:
            return value
        return self.classify(value)[1]

    def has_nonnegative_weights(self) -> bool:
        return self.continuous or all(cls.weight >= 0 for cls in self.classes)

    def scaled(self, factor: float, name: str | None = None) -> "RankClassScheme":
        if self.continuous:
            raise ConfigError("cannot scale the continuous scheme")
        return RankClassScheme(
            name=name or f"{self.name}*{factor:g}",
            classes=tuple(RankClass(c.lower, c.upper, c.weight * factor) for c in self.classes),
        )


PR6 = RankClassScheme(
    "PR6",
    (
        RankClass(0.0, 50.0, 1.0),
        RankClass(50.0, 75.0, 2.0),
        RankClass(75.0, 90.0, 3.0),
        RankClass(90.0, 95.0, 4.0),
        RankClass(95.0, 99.0, 5.0),
        RankClass(99.0, 100.0, 6.0),
    ),
)

CONTINUOUS = RankClassScheme("CONTINUOUS", (), continuous=True)


def excellence_scheme(top_percent: float = 10.0) -> RankClassScheme:
    """Two-class 0/1 scheme counting papers in the top-x% of their sets."""
    if not 0.0 < top_percent < 100.0:
        raise DomainError(f"top percentage must lie in (0, 100), got {top_percent}")
    return RankClassScheme(
        f"EI{top_percent:g}",
        (
            RankClass(0.0, 100.0 - top_percent, 0.0),
            RankClass(100.0 - top_percent, 100.0, 1.0),
        ),
    )


_EI_PATTERN = re.compile(r"^EI(\d+(?:\.\d+)?)$", re.IGNORECASE)


def named_scheme(name: str) -> RankClassScheme:
    """Resolve a built-in scheme by name: PR6, CONTINUOUS, EI10, EI1, EI<x>."""
    upper = name.strip().upper()
    if upper == "PR6":
        return PR6
    if upper == "CONTINUOUS":
        return CONTINUOUS
    match = _EI_PATTERN.match(upper)
    if match:
        return excellence_scheme(float(match.group(1)))
    raise ConfigError(f"unknown scheme {name!r}; built-ins are PR6, CONTINUOUS, EI<x>")


def load_scheme_file(path: str | Path) -> RankClassScheme:
    """Load a custom scheme from a JSON list of {lower, upper, weight}."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, list):
        raise ConfigError(f"{path}: expected a JSON list of {{lower, upper, weight}}")
    classes = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict) or not {"lower", "upper", "weight"} <= set(entry):
            raise ConfigError(f"{path}: entry {i} must carry lower, upper and weight")
        classes.append(
            RankClass(float(entry["lower"]), float(entry["upper"]), float(entry["weight"]))
        )
    classes.sort(key=lambda c: c.lower)
    return RankClassScheme(name=path.stem, classes=tuple(classes))
