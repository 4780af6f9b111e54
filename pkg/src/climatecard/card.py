"""The climate performance model card: record, lints and derivation.

A card has eleven numbered fields. Fields 1-5 form the minimum card
(availability, final and total duration, power, location); fields 6-11
form the extended card (energy mix, three emission figures, expected
positive impact, comments). Construction never fails on an incomplete
card; instead the validators return :class:`LintFinding` lists so a
report can show everything wrong at once. The findings are grounded in
five reporting principles borrowed from corporate GHG accounting:
relevance, completeness, consistency, transparency and accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .emissions import (
    BiasNote,
    EmissionEstimate,
    InferenceProfile,
    TrainingProfile,
    UncertaintyBounds,
    inference_emissions_per_sample,
    training_emissions,
)
from .energy_mix import MixLookupError, MixRegistry, lookup_mix
from .hardware import RigDescription, peak_power
from .quantities import (
    GramsCO2e,
    GramsPerKwh,
    Hours,
    Watts,
    format_mass,
    watts_to_kilowatts,
)


class ImpactCategory(Enum):
    """Where on the impact stack a work's positive contribution sits."""

    FUNDAMENTAL_THEORIES = "fundamental_theories"
    BUILDING_BLOCK_TOOLS = "building_block_tools"
    APPLICABLE_TOOLS = "applicable_tools"
    DEPLOYED_APPLICATIONS = "deployed_applications"
    DIRECT_POSITIVE = "direct_positive"

    @property
    def label(self) -> str:
        return self.value.replace("_", " ")


class ScopeLabel(Enum):
    """GHG-accounting scope a quantity or narrative belongs to."""

    SCOPE1_OWN_EXPERIMENTS = "scope1_own_experiments"
    SCOPE2_ENABLING_OTHER_RESEARCHERS = "scope2_enabling_other_researchers"
    SCOPE3_DOWNSTREAM_USE = "scope3_downstream_use"


#: Quantified emission fields (7-9) cover the research's own experiments;
#: scopes 2-3 stay narrative (field 10) because downstream impact can only
#: be estimated, not measured.
DEFAULT_EMISSION_SCOPE = ScopeLabel.SCOPE1_OWN_EXPERIMENTS


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


class Principle(Enum):
    RELEVANCE = "relevance"
    COMPLETENESS = "completeness"
    CONSISTENCY = "consistency"
    TRANSPARENCY = "transparency"
    ACCURACY = "accuracy"


#: The documented rule table: every finding cites one of these rule ids.
RULES: dict[str, tuple[Severity, Principle, str]] = {
    "minimum-field-missing": (
        Severity.ERROR,
        Principle.COMPLETENESS,
        "A minimum-card field (1-5) is missing or empty.",
    ),
    "duration-order": (
        Severity.ERROR,
        Principle.CONSISTENCY,
        "Total duration (field 3) is shorter than the final training "
        "duration (field 2).",
    ),
    "emission-mismatch": (
        Severity.WARNING,
        Principle.CONSISTENCY,
        "A reported emission figure deviates from the value recomputed "
        "from duration, power and energy mix.",
    ),
    "extended-field-missing": (
        Severity.WARNING,
        Principle.COMPLETENESS,
        "An extended-card field (6-11) is absent; disclose and justify "
        "any exclusion or missing information.",
    ),
    "confidence-missing": (
        Severity.INFO,
        Principle.ACCURACY,
        "An emission estimate carries neither uncertainty bounds nor a "
        "bias note; state the level of confidence when in doubt.",
    ),
    "offset-claim": (
        Severity.WARNING,
        Principle.TRANSPARENCY,
        "Free text appears to present financial climate contributions as "
        "emission offsetting.",
    ),
}


@dataclass(frozen=True, slots=True)
class LintFinding:
    severity: Severity
    rule_id: str
    principle: Principle
    message: str
    field: str | None = None

    def __post_init__(self) -> None:
        if self.rule_id not in RULES:
            raise ValueError(f"unknown rule id {self.rule_id!r}")


def _finding(rule_id: str, message: str, field: str | None = None) -> LintFinding:
    severity, principle, _ = RULES[rule_id]
    return LintFinding(severity, rule_id, principle, message, field)


class CardValidationError(ValueError):
    """An operation refused an invalid card; carries the findings."""

    def __init__(self, findings: list[LintFinding]):
        details = "; ".join(f.message for f in findings)
        super().__init__(f"card failed validation: {details}")
        self.findings = findings


@dataclass(frozen=True, slots=True)
class PositiveImpact:
    """Field 10: expected positive environmental impact, categorized."""

    category: ImpactCategory
    text: str = ""


@dataclass(frozen=True, slots=True)
class ClimateCard:
    """One climate performance model card. Immutable.

    Any field except the model name may be absent; use the validators to
    find gaps rather than relying on construction-time errors.
    """

    model_name: str
    public: bool | None = None
    final_training_duration: Hours | None = None
    total_duration: Hours | None = None
    total_duration_bounds: UncertaintyBounds | None = None
    power: Watts | None = None
    location: str | None = None
    mix: GramsPerKwh | None = None
    final_emissions: EmissionEstimate | None = None
    total_emissions: EmissionEstimate | None = None
    inference_per_sample: EmissionEstimate | None = None
    positive_impact: PositiveImpact | None = None
    comments: str | None = None

    @property
    def is_extended(self) -> bool:
        """True when any extended field (6-11) is filled in."""
        return any(
            value is not None
            for value in (
                self.mix,
                self.final_emissions,
                self.total_emissions,
                self.inference_per_sample,
                self.positive_impact,
                self.comments,
            )
        )


#: Card attribute -> (field number, human label) for messages and reports.
FIELD_NUMBERS: dict[str, tuple[int, str]] = {
    "public": (1, "model publicly available"),
    "final_training_duration": (2, "time to train the final model"),
    "total_duration": (3, "time for all experiments"),
    "power": (4, "power of GPU and CPU"),
    "location": (5, "location for computations"),
    "mix": (6, "energy mix at location"),
    "final_emissions": (7, "CO2eq for the final model"),
    "total_emissions": (8, "CO2eq for all experiments"),
    "inference_per_sample": (9, "average CO2eq per inference sample"),
    "positive_impact": (10, "expected positive environmental impact"),
    "comments": (11, "comments"),
}

_MINIMUM_FIELDS = (
    "public",
    "final_training_duration",
    "total_duration",
    "power",
    "location",
)

_EXTENDED_FIELDS = (
    "mix",
    "final_emissions",
    "total_emissions",
    "inference_per_sample",
    "positive_impact",
    "comments",
)

#: Free-text phrases that suggest offsetting is being reported as a
#: reduction. Matched case-insensitively as substrings.
OFFSET_CLAIM_PHRASES = (
    "carbon neutral",
    "climate neutral",
    "offset",
    "offsetting",
    "net zero",
)

#: Default relative tolerance for the consistency recompute: wide enough
#: to absorb two-decimal display rounding, tight enough to catch unit
#: slips (x1000).
DEFAULT_TOLERANCE = 0.05


def _missing(card: ClimateCard, attr: str) -> bool:
    value = getattr(card, attr)
    if attr == "location":
        return value is None or not value.strip()
    return value is None


def validate_minimum(card: ClimateCard) -> list[LintFinding]:
    """Check fields 1-5: all present, and total >= final duration."""
    findings = []
    for attr in _MINIMUM_FIELDS:
        if _missing(card, attr):
            number, label = FIELD_NUMBERS[attr]
            findings.append(
                _finding(
                    "minimum-field-missing",
                    f"field {number} ({label}) is missing",
                    field=attr,
                )
            )
    if (
        card.final_training_duration is not None
        and card.total_duration is not None
        and card.total_duration.value < card.final_training_duration.value
    ):
        findings.append(
            _finding(
                "duration-order",
                f"total duration {card.total_duration.value:g} h is shorter "
                f"than final training duration "
                f"{card.final_training_duration.value:g} h",
                field="total_duration",
            )
        )
    return findings


def _relative_deviation(reported: float, computed: float) -> float:
    if computed == 0:
        return 0.0 if reported == 0 else float("inf")
    return abs(reported - computed) / computed


def _consistency_check(
    attr: str,
    reported: EmissionEstimate,
    computed: GramsCO2e,
    tolerance: float,
) -> LintFinding | None:
    deviation = _relative_deviation(reported.emissions.value, computed.value)
    if deviation <= tolerance:
        return None
    number, label = FIELD_NUMBERS[attr]
    return _finding(
        "emission-mismatch",
        f"field {number} ({label}) reports "
        f"{reported.emissions.value:g} g ({format_mass(reported.emissions)}) "
        f"but recomputes to {computed.value:g} g ({format_mass(computed)}); "
        f"relative deviation {deviation:.3g} exceeds tolerance {tolerance:g}",
        field=attr,
    )


def validate_extended(
    card: ClimateCard, tolerance: float = DEFAULT_TOLERANCE
) -> list[LintFinding]:
    """Cross-check fields 6-11 against the minimum card.

    Expects a card that already passes :func:`validate_minimum`. Reported
    emissions for fields 7 and 8 are recomputed from fields 2/3, 4 and 6;
    field 9 cannot be recomputed because the card does not record the
    inference pass duration or sample count. Absent extended fields get
    completeness warnings, and estimates with no confidence statement get
    accuracy notes.
    """
    findings = []
    for attr in _EXTENDED_FIELDS:
        if _missing(card, attr):
            number, label = FIELD_NUMBERS[attr]
            findings.append(
                _finding(
                    "extended-field-missing",
                    f"field {number} ({label}) is absent; disclose and "
                    f"justify the exclusion",
                    field=attr,
                )
            )

    can_recompute = card.power is not None and card.mix is not None
    if can_recompute:
        kilowatts = watts_to_kilowatts(card.power)
        recompute_inputs = (
            ("final_emissions", card.final_emissions, card.final_training_duration),
            ("total_emissions", card.total_emissions, card.total_duration),
        )
        for attr, reported, duration in recompute_inputs:
            if reported is None or duration is None:
                continue
            computed = training_emissions(
                TrainingProfile(duration=duration, power=kilowatts, mix=card.mix)
            )
            finding = _consistency_check(attr, reported, computed, tolerance)
            if finding is not None:
                findings.append(finding)

    for attr in ("final_emissions", "total_emissions", "inference_per_sample"):
        estimate = getattr(card, attr)
        if estimate is not None and not estimate.has_confidence_statement:
            number, label = FIELD_NUMBERS[attr]
            findings.append(
                _finding(
                    "confidence-missing",
                    f"field {number} ({label}) states neither uncertainty "
                    f"bounds nor a bias note",
                    field=attr,
                )
            )
    return findings


def lint_offset_claims(card: ClimateCard) -> list[LintFinding]:
    """Flag offset-style claims in the card's free text.

    Voluntary financial climate protection contributions are not emission
    reductions and should not be reported as offsetting; every phrase hit
    in comments or the impact text produces one warning.
    """
    findings = []
    scanned = [("comments", card.comments)]
    if card.positive_impact is not None:
        scanned.append(("positive_impact", card.positive_impact.text))
    for attr, text in scanned:
        if not text:
            continue
        lowered = text.lower()
        for phrase in OFFSET_CLAIM_PHRASES:
            if phrase in lowered:
                number, label = FIELD_NUMBERS[attr]
                findings.append(
                    _finding(
                        "offset-claim",
                        f"field {number} ({label}) contains {phrase!r}: do "
                        f"not report voluntary financial climate protection "
                        f"contributions as emission offsetting",
                        field=attr,
                    )
                )
    return findings


def validate_card(
    card: ClimateCard,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[LintFinding]:
    """Full lint pass: minimum, then extended checks, then offset claims.

    Extended checks are skipped while the minimum card has errors, since
    they presuppose fields 1-5.
    """
    findings = validate_minimum(card)
    if not findings:
        findings.extend(validate_extended(card, tolerance))
    findings.extend(lint_offset_claims(card))
    return findings


def derive_card(
    *,
    model_name: str,
    public: bool,
    final_training: Hours,
    total: Hours,
    location: str,
    power: Watts | None = None,
    rig: RigDescription | None = None,
    total_bounds: UncertaintyBounds | None = None,
    mix: GramsPerKwh | None = None,
    mix_registry: MixRegistry | None = None,
    year: int | None = None,
    inference_duration: Hours | None = None,
    inference_samples: int | None = None,
    positive_impact: PositiveImpact | None = None,
    comments: str | None = None,
    strict: bool = False,
) -> ClimateCard:
    """Fill a card from raw inputs, computing fields 6-9.

    Power comes either directly or from a rig description (TDP sum), in
    which case computed estimates carry a likely-overestimate bias note.
    The energy mix comes either directly or from a registry lookup on the
    location; a failed lookup raises in strict mode and otherwise leaves
    fields 6-9 absent (validation will then flag the gap). Field 9 is
    filled only when an inference pass duration and sample count are given.
    """
    if (power is None) == (rig is None):
        raise ValueError("exactly one of power or rig must be given")
    bias = None
    if rig is not None:
        power = peak_power(rig)
        bias = BiasNote.LIKELY_OVERESTIMATE

    if mix is None and mix_registry is not None:
        try:
            mix = lookup_mix(mix_registry, location, year).intensity
        except MixLookupError:
            if strict:
                raise
            mix = None

    card = ClimateCard(
        model_name=model_name,
        public=public,
        final_training_duration=final_training,
        total_duration=total,
        total_duration_bounds=total_bounds,
        power=power,
        location=location,
        mix=mix,
        positive_impact=positive_impact,
        comments=comments,
    )
    if mix is None:
        return card

    kilowatts = watts_to_kilowatts(power)
    final = training_emissions(
        TrainingProfile(duration=final_training, power=kilowatts, mix=mix)
    )
    overall = training_emissions(
        TrainingProfile(duration=total, power=kilowatts, mix=mix)
    )
    card = replace(
        card,
        final_emissions=EmissionEstimate(final, bias_note=bias),
        total_emissions=EmissionEstimate(
            overall, uncertainty=total_bounds, bias_note=bias
        ),
    )
    if inference_duration is not None and inference_samples is not None:
        per_sample = inference_emissions_per_sample(
            InferenceProfile(
                batch_duration=inference_duration,
                power=kilowatts,
                mix=mix,
                sample_count=inference_samples,
            )
        )
        card = replace(
            card, inference_per_sample=EmissionEstimate(per_sample, bias_note=bias)
        )
    return card
