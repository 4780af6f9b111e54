"""Core emission estimates from duration, power and grid carbon intensity.

The whole model is one product: grams of CO2eq = computation time (hours)
x power (kW) x energy mix (gCO2eq/kWh). Training emissions apply it to a
single run, totals sum it over runs, and per-sample inference cost divides
one timed batch pass by its sample count. Everything here is a pure
function over immutable values and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .quantities import GramsCO2e, GramsPerKwh, Hours, InvalidQuantityError, Kilowatts


class EmissionOverflowError(ArithmeticError):
    """An emission product overflowed the working float precision."""


class BiasNote(Enum):
    """Direction an estimate is suspected to err, when known."""

    LIKELY_OVERESTIMATE = "likely_overestimate"
    LIKELY_UNDERESTIMATE = "likely_underestimate"
    UNKNOWN = "unknown"


@dataclass(frozen=True, slots=True)
class UncertaintyBounds:
    """Multiplicative confidence margin around an estimate.

    ``low_factor`` and ``high_factor`` bracket 1: the true value is believed
    to lie within [estimate x low_factor, estimate x high_factor].
    """

    low_factor: float
    high_factor: float

    def __post_init__(self) -> None:
        low, high = self.low_factor, self.high_factor
        for name, factor in (("low_factor", low), ("high_factor", high)):
            if not isinstance(factor, (int, float)) or isinstance(factor, bool):
                raise InvalidQuantityError(f"{name} must be a real number")
            if math.isnan(factor) or math.isinf(factor):
                raise InvalidQuantityError(f"{name} must be finite, got {factor!r}")
        if not 0 < low <= 1 <= high:
            raise InvalidQuantityError(
                f"bounds must satisfy 0 < low <= 1 <= high, got [{low}, {high}]"
            )
        object.__setattr__(self, "low_factor", float(low))
        object.__setattr__(self, "high_factor", float(high))


@dataclass(frozen=True, slots=True)
class TrainingProfile:
    """Inputs for one training run: duration, draw and grid intensity."""

    duration: Hours
    power: Kilowatts
    mix: GramsPerKwh


@dataclass(frozen=True, slots=True)
class InferenceProfile:
    """One timed inference pass over ``sample_count`` samples."""

    batch_duration: Hours
    power: Kilowatts
    mix: GramsPerKwh
    sample_count: int

    def __post_init__(self) -> None:
        if isinstance(self.sample_count, bool) or not isinstance(self.sample_count, int):
            raise InvalidQuantityError("sample_count must be an integer")
        if self.sample_count < 1:
            raise InvalidQuantityError(
                f"sample_count must be >= 1, got {self.sample_count}"
            )


@dataclass(frozen=True, slots=True)
class EmissionEstimate:
    """An emission figure plus optional confidence metadata."""

    emissions: GramsCO2e
    uncertainty: UncertaintyBounds | None = None
    bias_note: BiasNote | None = None

    @property
    def has_confidence_statement(self) -> bool:
        return self.uncertainty is not None or self.bias_note is not None


def _checked(grams: float, context: str) -> GramsCO2e:
    if math.isinf(grams):
        raise EmissionOverflowError(f"{context} overflowed to infinity")
    return GramsCO2e(grams)


def training_emissions(profile: TrainingProfile) -> GramsCO2e:
    """Grams of CO2eq for one run: hours x kW x gCO2eq/kWh."""
    grams = profile.duration.value * profile.power.value * profile.mix.value
    return _checked(grams, "training emission product")


def total_emissions(profiles: Iterable[TrainingProfile]) -> GramsCO2e:
    """Sum of training emissions over all runs; an empty list is 0 g.

    Summation is a plain left-to-right pairwise sum, so the result is
    deterministic for a given input order.
    """
    total = 0.0
    for profile in profiles:
        total += training_emissions(profile).value
    return _checked(total, "emission total")


def inference_emissions_per_sample(profile: InferenceProfile) -> GramsCO2e:
    """Average grams of CO2eq to run inference for a single sample."""
    grams = (
        (profile.batch_duration.value / profile.sample_count)
        * profile.power.value
        * profile.mix.value
    )
    return _checked(grams, "inference emission product")


def apply_uncertainty(
    estimate: GramsCO2e, bounds: UncertaintyBounds
) -> tuple[GramsCO2e, GramsCO2e]:
    """Expand an estimate into its (low, high) bracket."""
    return (
        GramsCO2e(estimate.value * bounds.low_factor),
        GramsCO2e(estimate.value * bounds.high_factor),
    )
