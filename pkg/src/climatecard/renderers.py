"""Render a climate card as Markdown, LaTeX, or model-hub YAML metadata.

All three renderers are pure and byte-deterministic: the same card always
produces identical UTF-8 output with LF line endings and no trailing
whitespace, so rendered cards can be golden-file tested. Cards must pass
the minimum validation before they render; the YAML renderer additionally
requires a final-model emission figure, since that is the one number the
hub metadata block exists to carry.
"""

from __future__ import annotations

import json
import re

from .card import CardValidationError, ClimateCard, _finding, validate_minimum
from .quantities import GramsPerKwh, Hours, Watts, format_mass

#: Numbered row labels, in card-field order. The plain form is used for
#: Markdown, the TeX form keeps the CO2 subscript math.
_LABELS = (
    ("1. Model publicly available?", "1. Model publicly available?"),
    ("2. Time to train final model", "2. Time to train final model"),
    ("3. Time for all experiments", "3. Time for all experiments"),
    ("4. Power of GPU and CPU", "4. Power of GPU and CPU"),
    ("5. Location for computations", "5. Location for computations"),
    ("6. Energy mix at location", "6. Energy mix at location"),
    ("7. CO2eq for final model", "7. CO$_2$eq for final model"),
    ("8. CO2eq for all experiments", "8. CO$_2$eq for all experiments"),
    (
        "9. Average CO2eq for inference per sample",
        "9. Average CO$_2$eq for inference per sample",
    ),
    (
        "10. Positive environmental impact",
        "10. Positive environmental impact",
    ),
    ("11. Comments", "11. Comments"),
)

ABSENT = "\u2014"  # em dash placeholder for absent extended fields


def format_hours(duration: Hours) -> str:
    unit = "hour" if duration.value == 1 else "hours"
    return f"{duration.value:g} {unit}"


def format_power_kw(power: Watts) -> str:
    return f"{power.value / 1000.0:g} kW"


def format_mix(mix: GramsPerKwh, *, tex: bool = False) -> str:
    unit = "gCO$_2$eq/kWh" if tex else "gCO2eq/kWh"
    return f"{mix.value:g} {unit}"


def _number(value: float) -> str:
    """Minimal numeric form: integer collapse, else full-precision repr."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _require_minimum(card: ClimateCard) -> None:
    findings = validate_minimum(card)
    if findings:
        raise CardValidationError(findings)


def _row_values(card: ClimateCard, *, tex: bool) -> list[str]:
    def mass(estimate) -> str:
        return ABSENT if estimate is None else format_mass(estimate.emissions)

    total = format_hours(card.total_duration)
    if card.total_duration_bounds is not None:
        bounds = card.total_duration_bounds
        total += f" [x{bounds.low_factor:g}, x{bounds.high_factor:g}]"
    if card.positive_impact is None:
        impact = ABSENT
    elif card.positive_impact.text:
        impact = f"{card.positive_impact.category.label}: {card.positive_impact.text}"
    else:
        impact = card.positive_impact.category.label
    return [
        "Yes" if card.public else "No",
        format_hours(card.final_training_duration),
        total,
        format_power_kw(card.power),
        card.location,
        ABSENT if card.mix is None else format_mix(card.mix, tex=tex),
        mass(card.final_emissions),
        mass(card.total_emissions),
        mass(card.inference_per_sample),
        impact,
        ABSENT if card.comments is None else card.comments,
    ]


def _markdown_cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", "<br>")


def render_markdown(card: ClimateCard) -> str:
    """Two-column Markdown table with the eleven numbered card rows."""
    _require_minimum(card)
    values = _row_values(card, tex=False)
    lines = [f"# {_markdown_cell(card.model_name)}", ""]
    lines.append("| Information | Value |")
    lines.append("| --- | --- |")
    for (label, _), value in zip(_LABELS, values):
        lines.append(f"| {label} | {_markdown_cell(value)} |")
    return "\n".join(lines) + "\n"


_TEX_SPECIALS = {
    "\\": r"\textbackslash{}",
    "&": r"\&",
    "%": r"\%",
    "$": r"\$",
    "#": r"\#",
    "_": r"\_",
    "{": r"\{",
    "}": r"\}",
    "~": r"\textasciitilde{}",
    "^": r"\textasciicircum{}",
}

_TEX_PATTERN = re.compile("|".join(re.escape(ch) for ch in _TEX_SPECIALS))


def latex_escape(text: str) -> str:
    return _TEX_PATTERN.sub(lambda m: _TEX_SPECIALS[m.group(0)], text)


#: Rows holding free text that must be escaped in the LaTeX output (the
#: remaining values are generated, TeX-safe strings).
_TEX_FREE_TEXT_ROWS = {4, 9, 10}


def render_latex(card: ClimateCard) -> str:
    """A booktabs tabular mirroring the minimum/extended card split."""
    _require_minimum(card)
    values = _row_values(card, tex=True)
    lines = [
        r"\begin{tabular}{@{}p{6cm}p{3cm}@{}}",
        r"\toprule",
        rf"\multicolumn{{2}}{{c}}{{\textbf{{{latex_escape(card.model_name)}}}}} \\",
        r"\midrule",
        r"\multicolumn{2}{c}{\textbf{Minimum card}} \\",
        r"\midrule",
    ]
    for index, ((_, label), value) in enumerate(zip(_LABELS, values)):
        if index == 5:
            lines.append(r"\midrule")
            lines.append(r"\multicolumn{2}{c}{\textbf{Extended card}} \\")
            lines.append(r"\midrule")
        if index in _TEX_FREE_TEXT_ROWS:
            value = latex_escape(value)
        lines.append(rf"{label} & {value} \\")
    lines.append(r"\bottomrule")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"


#: Fixed provenance string for hub metadata: names the tool and the
#: formula so the bare number stays interpretable.
HUB_SOURCE = (
    "climatecard: grams CO2eq = training hours x power (kW) x energy mix "
    "(gCO2eq/kWh), final model"
)

_YAML_PLAIN = re.compile(r"[A-Za-z][A-Za-z0-9 _.()/-]*")
_YAML_RESERVED = {"true", "false", "yes", "no", "on", "off", "null", "none"}


def _yaml_scalar(value: str) -> str:
    if (
        _YAML_PLAIN.fullmatch(value)
        and value == value.strip()
        and value.lower() not in _YAML_RESERVED
    ):
        return value
    return json.dumps(value, ensure_ascii=False)


def render_hub_yaml(
    card: ClimateCard,
    *,
    training_type: str = "unknown",
    hardware_used: str = "unknown",
) -> str:
    """The ``co2_eq_emissions`` metadata block for a model hub card.

    ``emissions`` is the final-model figure as a bare number in grams;
    the unit is documented in the fixed ``source`` string. The card file
    does not record training type or hardware names, so those default to
    ``unknown`` unless supplied.
    """
    _require_minimum(card)
    if card.final_emissions is None:
        raise CardValidationError(
            [
                _finding(
                    "extended-field-missing",
                    "field 7 (CO2eq for the final model) is required for "
                    "hub metadata",
                    field="final_emissions",
                )
            ]
        )
    lines = [
        "co2_eq_emissions:",
        f"  emissions: {_number(card.final_emissions.emissions.value)}",
        f"  source: {_yaml_scalar(HUB_SOURCE)}",
        f"  training_type: {_yaml_scalar(training_type)}",
        f"  geographical_location: {_yaml_scalar(card.location)}",
        f"  hardware_used: {_yaml_scalar(hardware_used)}",
    ]
    return "\n".join(lines) + "\n"
