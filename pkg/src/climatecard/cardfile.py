"""Card file serialization: a flat TOML document with fixed keys.

The on-disk form of a card is UTF-8 TOML restricted to exactly these
top-level keys, in this order::

    model_name, public, final_training_hours, total_hours,
    total_hours_low_factor, total_hours_high_factor, power_watts,
    location, mix_gco2eq_per_kwh, final_emissions_g, total_emissions_g,
    inference_per_sample_g, impact_category, impact_text, comments

Absent optional fields are omitted. ``model_name`` is required. Unknown
keys are rejected in strict mode and reported as :class:`CardFileWarning`
otherwise. Emission figures are stored as plain gram values; uncertainty
bounds are persisted only for the total duration (the two factor keys),
so estimate-level bounds and bias notes do not survive a write/read trip.
"""

from __future__ import annotations

import json
import sys
import warnings
from pathlib import Path
from typing import IO, Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .card import ClimateCard, ImpactCategory, PositiveImpact
from .emissions import EmissionEstimate, UncertaintyBounds
from .quantities import GramsCO2e, GramsPerKwh, Hours, InvalidQuantityError, Watts

CARD_KEYS = (
    "model_name",
    "public",
    "final_training_hours",
    "total_hours",
    "total_hours_low_factor",
    "total_hours_high_factor",
    "power_watts",
    "location",
    "mix_gco2eq_per_kwh",
    "final_emissions_g",
    "total_emissions_g",
    "inference_per_sample_g",
    "impact_category",
    "impact_text",
    "comments",
)


class CardFileError(ValueError):
    """The card file is malformed or violates the key schema."""


class CardFileWarning(UserWarning):
    """Non-fatal card file issue, e.g. an ignored unknown key."""


def _toml_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        # JSON string escaping is a subset of TOML basic-string escaping,
        # except that TOML also forbids a raw DEL character.
        return json.dumps(value, ensure_ascii=False).replace("\x7f", "\\u007f")
    raise TypeError(f"unsupported card value type: {type(value).__name__}")


def _card_items(card: ClimateCard) -> list[tuple[str, Any]]:
    def grams(estimate: EmissionEstimate | None) -> float | None:
        return None if estimate is None else estimate.emissions.value

    bounds = card.total_duration_bounds
    impact = card.positive_impact
    values: dict[str, Any] = {
        "model_name": card.model_name,
        "public": card.public,
        "final_training_hours": (
            None
            if card.final_training_duration is None
            else card.final_training_duration.value
        ),
        "total_hours": None if card.total_duration is None else card.total_duration.value,
        "total_hours_low_factor": None if bounds is None else bounds.low_factor,
        "total_hours_high_factor": None if bounds is None else bounds.high_factor,
        "power_watts": None if card.power is None else card.power.value,
        "location": card.location,
        "mix_gco2eq_per_kwh": None if card.mix is None else card.mix.value,
        "final_emissions_g": grams(card.final_emissions),
        "total_emissions_g": grams(card.total_emissions),
        "inference_per_sample_g": grams(card.inference_per_sample),
        "impact_category": None if impact is None else impact.category.value,
        "impact_text": None if impact is None else impact.text,
        "comments": card.comments,
    }
    return [(key, values[key]) for key in CARD_KEYS if values[key] is not None]


def write_card(card: ClimateCard) -> str:
    """Serialize a card to its TOML text, deterministically."""
    lines = [f"{key} = {_toml_value(value)}" for key, value in _card_items(card)]
    return "\n".join(lines) + "\n"


def save_card(card: ClimateCard, path: str | Path) -> None:
    Path(path).write_text(write_card(card), encoding="utf-8")


def _want_number(data: dict, key: str) -> float | None:
    if key not in data:
        return None
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CardFileError(f"key {key!r} must be a number, got {value!r}")
    return float(value)


def _want_str(data: dict, key: str) -> str | None:
    if key not in data:
        return None
    value = data[key]
    if not isinstance(value, str):
        raise CardFileError(f"key {key!r} must be a string, got {value!r}")
    return value


def _quantity(kind, value: float | None):
    if value is None:
        return None
    try:
        return kind(value)
    except InvalidQuantityError as exc:
        raise CardFileError(str(exc)) from None


def _estimate(value: float | None) -> EmissionEstimate | None:
    grams = _quantity(GramsCO2e, value)
    return None if grams is None else EmissionEstimate(grams)


def read_card(source: str | Path | IO[bytes], *, strict: bool = False) -> ClimateCard:
    """Parse a card file back into a :class:`ClimateCard`.

    Raises :class:`CardFileError` for TOML syntax errors, schema
    violations, or (in strict mode) unknown keys; outside strict mode
    unknown keys are dropped with a :class:`CardFileWarning`.
    """
    if hasattr(source, "read"):
        raw = source.read()
    else:
        raw = Path(source).read_bytes()
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise CardFileError(f"unreadable card file: {exc}") from None

    unknown = sorted(set(data) - set(CARD_KEYS))
    if unknown:
        listed = ", ".join(repr(k) for k in unknown)
        if strict:
            raise CardFileError(f"unknown card key(s): {listed}")
        warnings.warn(f"ignoring unknown card key(s): {listed}", CardFileWarning,
                      stacklevel=2)

    model_name = _want_str(data, "model_name")
    if not model_name:
        raise CardFileError("card file must set model_name")

    public = data.get("public")
    if public is not None and not isinstance(public, bool):
        raise CardFileError(f"key 'public' must be a boolean, got {public!r}")

    low = _want_number(data, "total_hours_low_factor")
    high = _want_number(data, "total_hours_high_factor")
    if (low is None) != (high is None):
        raise CardFileError(
            "total_hours_low_factor and total_hours_high_factor must be "
            "given together"
        )
    bounds = None
    if low is not None:
        if "total_hours" not in data:
            raise CardFileError("duration bounds require total_hours")
        try:
            bounds = UncertaintyBounds(low, high)
        except InvalidQuantityError as exc:
            raise CardFileError(str(exc)) from None

    category_text = _want_str(data, "impact_category")
    impact_text = _want_str(data, "impact_text")
    impact = None
    if category_text is not None:
        try:
            category = ImpactCategory(category_text)
        except ValueError:
            valid = ", ".join(c.value for c in ImpactCategory)
            raise CardFileError(
                f"invalid impact_category {category_text!r} (expected one "
                f"of: {valid})"
            ) from None
        impact = PositiveImpact(category=category, text=impact_text or "")
    elif impact_text is not None:
        raise CardFileError("impact_text requires impact_category")

    return ClimateCard(
        model_name=model_name,
        public=public,
        final_training_duration=_quantity(
            Hours, _want_number(data, "final_training_hours")
        ),
        total_duration=_quantity(Hours, _want_number(data, "total_hours")),
        total_duration_bounds=bounds,
        power=_quantity(Watts, _want_number(data, "power_watts")),
        location=_want_str(data, "location"),
        mix=_quantity(GramsPerKwh, _want_number(data, "mix_gco2eq_per_kwh")),
        final_emissions=_estimate(_want_number(data, "final_emissions_g")),
        total_emissions=_estimate(_want_number(data, "total_emissions_g")),
        inference_per_sample=_estimate(
            _want_number(data, "inference_per_sample_g")
        ),
        positive_impact=impact,
        comments=_want_str(data, "comments"),
    )
