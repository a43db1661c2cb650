"""Precision policy objects and compensated summation helpers."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

DEFAULT_RELATIVE_TARGET = 1e-12
DEFAULT_MAX_REFINEMENT_STEPS = 12


@dataclass(frozen=True)
class WorkingPrecision:
    """Accuracy request threaded through quadratures and series loops.

    relative_target is the requested relative accuracy of a single
    primitive evaluation; max_refinement_steps caps how often an adaptive
    loop may subdivide/extend before giving up and reporting its estimate.
    """

    relative_target: float = DEFAULT_RELATIVE_TARGET
    max_refinement_steps: int = DEFAULT_MAX_REFINEMENT_STEPS

    def __post_init__(self):
        if not (0.0 < self.relative_target < 1.0):
            raise ValueError("relative_target must be in (0, 1)")
        if self.max_refinement_steps < 1:
            raise ValueError("max_refinement_steps must be >= 1")

    def scaled(self, factor: float) -> "WorkingPrecision":
        target = min(0.5, self.relative_target * factor)
        return WorkingPrecision(target, self.max_refinement_steps)


def from_environment() -> WorkingPrecision:
    """WorkingPrecision honouring the CUSPDET_PRECISION env var.

    CUSPDET_PRECISION, when set, is the relative target (e.g. "1e-10").
    """
    raw = os.environ.get("CUSPDET_PRECISION")
    if raw is None:
        return WorkingPrecision()
    try:
        target = float(raw)
    except ValueError as exc:
        raise ValueError(f"CUSPDET_PRECISION={raw!r} is not a float") from exc
    return WorkingPrecision(relative_target=target)


@dataclass(frozen=True)
class CertifiedValue:
    """A value together with a rigorous absolute error bound."""

    value: float
    abs_error_bound: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("certified value must be finite")
        if not (self.abs_error_bound >= 0.0):
            raise ValueError("abs_error_bound must be >= 0")

    def contains(self, x: float) -> bool:
        return abs(x - self.value) <= self.abs_error_bound

    def __add__(self, other: "CertifiedValue") -> "CertifiedValue":
        return CertifiedValue(self.value + other.value,
                              self.abs_error_bound + other.abs_error_bound)


class NeumaierSum:
    """Compensated accumulator; error O(eps), independent of term count."""

    __slots__ = ("_s", "_c", "_abs")

    def __init__(self):
        self._s = 0.0
        self._c = 0.0
        self._abs = 0.0

    def add(self, x: float) -> None:
        s = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - s) + x
        else:
            self._c += (x - s) + self._s
        self._s = s
        self._abs += abs(x)

    @property
    def value(self) -> float:
        return self._s + self._c

    @property
    def abs_total(self) -> float:
        """Sum of |terms|; value/abs_total measures cancellation."""
        return self._abs

    def cancellation_factor(self) -> float:
        v = abs(self.value)
        if v == 0.0:
            return math.inf if self._abs > 0 else 1.0
        return max(1.0, self._abs / v)


def neumaier_sum(terms) -> float:
    acc = NeumaierSum()
    for t in terms:
        acc.add(float(t))
    return acc.value


def compensated_dot(values: np.ndarray, weights: np.ndarray) -> float:
    """Compensated sum of values*weights (used by fixed-node quadratures)."""
    prod = np.asarray(values, dtype=float) * np.asarray(weights, dtype=float)
    # math.fsum is exact up to one final rounding; fine for <= 1e6 nodes
    return math.fsum(prod.tolist())
