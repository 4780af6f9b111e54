"""Climate performance reporting toolkit for ML experiments.

Estimates CO2eq emissions from computation time, hardware power and the
grid energy mix; validates and renders standardized climate performance
model cards; and surveys text corpora for how often climate-reporting
dimensions are discussed.
"""

from .card import (
    CardValidationError,
    ClimateCard,
    ImpactCategory,
    LintFinding,
    PositiveImpact,
    Principle,
    ScopeLabel,
    Severity,
    derive_card,
    lint_offset_claims,
    validate_card,
    validate_extended,
    validate_minimum,
)
from .cardfile import CardFileError, CardFileWarning, read_card, save_card, write_card
from .corpus_survey import (
    CorpusDocument,
    CorpusFormatError,
    SurveyDimension,
    SurveyReport,
    is_deep_learning,
    load_corpus_jsonl,
    matches_dimension,
    normalize_text,
    render_report_table,
    report_records,
    survey,
)
from .emissions import (
    BiasNote,
    EmissionEstimate,
    EmissionOverflowError,
    InferenceProfile,
    TrainingProfile,
    UncertaintyBounds,
    apply_uncertainty,
    inference_emissions_per_sample,
    total_emissions,
    training_emissions,
)
from .energy_mix import (
    EnergyMixRecord,
    LocationNotFoundError,
    MixLookupError,
    MixRegistry,
    RegistryFormatError,
    default_mix_registry,
    load_mix_csv,
    lookup_mix,
)
from .hardware import (
    HardwareKind,
    HardwareLookupError,
    HardwareRegistry,
    HardwareSpec,
    RigDescription,
    default_hardware_registry,
    load_hardware_csv,
    load_rig_json,
    lookup_hardware,
    peak_power,
)
from .quantities import (
    GramsCO2e,
    GramsPerKwh,
    Hours,
    InvalidQuantityError,
    Kilowatts,
    Watts,
    format_mass,
    watts_to_kilowatts,
)
from .renderers import render_hub_yaml, render_latex, render_markdown

__version__ = "0.1.0"
