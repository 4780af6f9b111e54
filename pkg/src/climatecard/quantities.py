"""Unit-tagged scalar quantities for emission arithmetic.

Every number that enters an emission formula carries its unit as a type
(:class:`Hours`, :class:`Watts`, :class:`Kilowatts`, :class:`GramsPerKwh`,
:class:`GramsCO2e`), so a duration can never be passed where a power is
expected. Values are 64-bit floats validated once, at construction:
negative, NaN and infinite inputs are rejected there, and everything
downstream may assume clean inputs.

Only the units the climate card needs are modeled. This is deliberately
not a general dimensional-analysis engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal


class InvalidQuantityError(ValueError):
    """A quantity was constructed from a negative or non-finite value."""


@dataclass(frozen=True, slots=True)
class Quantity:
    """Base for all unit-tagged scalars. Instantiate the subclasses."""

    value: float

    #: Unit symbol, overridden per subclass.
    UNIT = ""

    def __post_init__(self) -> None:
        if isinstance(self.value, bool) or not isinstance(self.value, (int, float)):
            raise InvalidQuantityError(
                f"{type(self).__name__} value must be a real number, "
                f"got {self.value!r}"
            )
        value = float(self.value)
        if math.isnan(value) or math.isinf(value):
            raise InvalidQuantityError(
                f"{type(self).__name__} value must be finite, got {value!r}"
            )
        if value < 0:
            raise InvalidQuantityError(
                f"{type(self).__name__} value must be non-negative, got {value!r}"
            )
        object.__setattr__(self, "value", value)

    def __str__(self) -> str:
        return f"{self.value:g} {self.UNIT}"


class Hours(Quantity):
    UNIT = "h"


class Watts(Quantity):
    UNIT = "W"


class Kilowatts(Quantity):
    UNIT = "kW"


class GramsPerKwh(Quantity):
    UNIT = "gCO2eq/kWh"


class GramsCO2e(Quantity):
    UNIT = "gCO2eq"


def watts_to_kilowatts(power: Watts) -> Kilowatts:
    """Convert a power in watts to kilowatts."""
    return Kilowatts(power.value / 1000.0)


#: Display units for :func:`format_mass`, smallest first. Scales are exact
#: decimal powers so the unit conversion itself never rounds.
_MASS_UNITS = (
    ("mg", Decimal("0.001")),
    ("g", Decimal("1")),
    ("kg", Decimal("1000")),
    ("t", Decimal("1000000")),
)

_TWO_PLACES = Decimal("0.01")


def format_mass(grams: GramsCO2e) -> str:
    """Render a mass as ``"<numeral> <unit>"`` with a human-scale unit.

    Picks the smallest of mg/g/kg/t whose numeral stays below 1000, which
    also keeps it at or above 0.01 whenever any unit can (so the unit never
    shrinks as the value grows). The numeral is rounded half away from zero
    to two decimal places. Zero is displayed as ``"0.00 g"``.
    """
    if grams.value == 0:
        return "0.00 g"
    decimal_value = Decimal(repr(grams.value))
    unit, numeral = _MASS_UNITS[-1][0], decimal_value / _MASS_UNITS[-1][1]
    for candidate, scale in _MASS_UNITS:
        scaled = decimal_value / scale
        if scaled < 1000:
            unit, numeral = candidate, scaled
            break
    rounded = numeral.quantize(_TWO_PLACES, rounding=ROUND_HALF_UP)
    return f"{rounded} {unit}"
