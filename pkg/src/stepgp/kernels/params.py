"""Named, bounded kernel hyperparameters."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ..errors import ParameterError


@dataclass(frozen=True)
class HyperParam:
    """A scalar hyperparameter with box bounds.

    ``scale`` controls the coordinate an optimizer should search in:
    ``"linear"`` searches the value itself, ``"log"`` searches
    ``ln(value - shift)``.  ``shift`` is the open lower limit of the
    feasible range (0 for plain positive parameters such as variances and
    length-scales; e.g. 1 for a sigmoid offset constrained to exceed 1).
    Searching the shifted-log coordinate means no optimizer step can ever
    produce an infeasible value.
    """

    name: str
    value: float
    lower: float
    upper: float
    scale: str = "linear"
    shift: float = 0.0

    def __post_init__(self):
        if self.scale not in ("linear", "log"):
            raise ParameterError(f"{self.name}: scale must be 'linear' or 'log'")
        for field in ("value", "lower", "upper", "shift"):
            v = getattr(self, field)
            if not math.isfinite(v):
                raise ParameterError(f"{self.name}: {field} must be finite")
        if not self.lower <= self.value <= self.upper:
            raise ParameterError(
                f"{self.name}: value {self.value} outside bounds "
                f"[{self.lower}, {self.upper}]"
            )
        if self.scale == "log" and self.lower <= self.shift:
            raise ParameterError(
                f"{self.name}: log scale requires lower bound > {self.shift}"
            )

    def with_value(self, value: float) -> "HyperParam":
        return replace(self, value=float(value))

    def with_bounds(self, lower: float, upper: float) -> "HyperParam":
        value = min(max(self.value, lower), upper)
        return replace(self, lower=float(lower), upper=float(upper), value=value)

    def to_optim(self, value: float | None = None) -> float:
        """Map a natural value to the optimizer coordinate."""
        v = self.value if value is None else value
        if self.scale == "log":
            return math.log(v - self.shift)
        return v

    def from_optim(self, theta: float) -> float:
        """Inverse of :meth:`to_optim`, clipped back into the bounds."""
        v = self.shift + math.exp(theta) if self.scale == "log" else theta
        return min(max(v, self.lower), self.upper)


def positive(name: str, value: float, lower: float = 1e-12,
             upper: float = 1e12) -> HyperParam:
    """A strictly positive parameter searched in log space."""
    return HyperParam(name, value, lower, upper, scale="log")


def offset_above(name: str, value: float, limit: float,
                 upper: float | None = None,
                 margin: float = 1e-2) -> HyperParam:
    """A parameter constrained to exceed ``limit``, searched as ln(v - limit)."""
    if upper is None:
        upper = limit + 1e6
    return HyperParam(name, value, lower=limit + margin, upper=upper,
                      scale="log", shift=limit)
