"""Command-line interface.

Commands: ``estimate`` (one-shot emission figures), ``card`` (new,
validate, render), ``survey`` (corpus scan), and ``mix`` / ``hw``
(registry import checks and lookups). Data goes to stdout, diagnostics
to stderr. Exit codes are stable for scripting: 0 success, 1 domain
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .card import (
    ClimateCard,
    ImpactCategory,
    PositiveImpact,
    Severity,
    derive_card,
    validate_card,
)
from .cardfile import CardFileWarning, read_card, write_card
from .emissions import (
    InferenceProfile,
    TrainingProfile,
    UncertaintyBounds,
    apply_uncertainty,
    inference_emissions_per_sample,
    training_emissions,
)
from .energy_mix import default_mix_registry, load_mix_csv, lookup_mix
from .hardware import (
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
    Kilowatts,
    Watts,
    format_mass,
    watts_to_kilowatts,
)
from .renderers import render_hub_yaml, render_latex, render_markdown
from .corpus_survey import load_corpus_jsonl, render_report_table, survey, write_records_jsonl


def _grams_line(grams: GramsCO2e, suffix: str = "") -> str:
    return f"{grams.value:.12g} g ({format_mass(grams)}){suffix}"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _resolve_power_kw(args, parser) -> Kilowatts:
    if args.power_kw is not None:
        return Kilowatts(args.power_kw)
    if args.power_watts is not None:
        return watts_to_kilowatts(Watts(args.power_watts))
    rig = load_rig_json(
        args.rig, default_hardware_registry(), ignore_overhead=args.ignore_overhead
    )
    watts = peak_power(rig)
    print(
        f"note: power estimated from TDP sum ({watts.value:g} W); "
        f"treat the result as a likely overestimate",
        file=sys.stderr,
    )
    return watts_to_kilowatts(watts)


def _resolve_mix(args) -> GramsPerKwh:
    if args.mix is not None:
        return GramsPerKwh(args.mix)
    record = lookup_mix(default_mix_registry(), args.location, args.year)
    return record.intensity


def _bounds(args, parser) -> UncertaintyBounds | None:
    if args.low is None and args.high is None:
        return None
    if args.low is None or args.high is None:
        parser.error("--low and --high must be given together")
    return UncertaintyBounds(args.low, args.high)


def cmd_estimate(args, parser) -> int:
    bounds = _bounds(args, parser)
    power = _resolve_power_kw(args, parser)
    mix = _resolve_mix(args)
    if args.samples is not None:
        grams = inference_emissions_per_sample(
            InferenceProfile(
                batch_duration=Hours(args.hours),
                power=power,
                mix=mix,
                sample_count=args.samples,
            )
        )
        print(_grams_line(grams, " per sample"))
    else:
        grams = training_emissions(
            TrainingProfile(duration=Hours(args.hours), power=power, mix=mix)
        )
        print(_grams_line(grams))
    if bounds is not None:
        low, high = apply_uncertainty(grams, bounds)
        print(f"range: {_grams_line(low)} to {_grams_line(high)}")
    return 0


def cmd_card_new(args, parser) -> int:
    power = None
    rig = None
    if args.power_kw is not None:
        power = Watts(args.power_kw * 1000.0)
    elif args.power_watts is not None:
        power = Watts(args.power_watts)
    else:
        rig = load_rig_json(
            args.rig,
            default_hardware_registry(),
            ignore_overhead=args.ignore_overhead,
        )
    impact = None
    if args.impact_category is not None:
        impact = PositiveImpact(
            category=ImpactCategory(args.impact_category),
            text=args.impact_text or "",
        )
    elif args.impact_text is not None:
        parser.error("--impact-text requires --impact-category")
    if (args.inference_hours is None) != (args.inference_samples is None):
        parser.error(
            "--inference-hours and --inference-samples must be given together"
        )
    card = derive_card(
        model_name=args.model_name,
        public=args.public,
        final_training=Hours(args.final_hours),
        total=Hours(args.total_hours),
        total_bounds=_bounds(args, parser),
        power=power,
        rig=rig,
        location=args.location,
        year=args.year,
        mix=GramsPerKwh(args.mix) if args.mix is not None else None,
        mix_registry=default_mix_registry(),
        inference_duration=(
            Hours(args.inference_hours) if args.inference_hours is not None else None
        ),
        inference_samples=args.inference_samples,
        positive_impact=impact,
        comments=args.comments,
        strict=args.strict,
    )
    if card.mix is None:
        print(
            f"note: no energy mix found for {args.location!r}; fields 6-9 "
            f"left absent",
            file=sys.stderr,
        )
    _emit(write_card(card), args.out)
    return 0


def _read_card_reporting(path: str, strict: bool) -> ClimateCard:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CardFileWarning)
        card = read_card(path, strict=strict)
    for warning in caught:
        print(f"note: {warning.message}", file=sys.stderr)
    return card


def cmd_card_validate(args, parser) -> int:
    card = _read_card_reporting(args.card, args.strict)
    findings = validate_card(card, tolerance=args.tolerance)
    for finding in findings:
        field = finding.field or "-"
        print(
            f"{finding.severity.value.upper()} {finding.rule_id} "
            f"[{finding.principle.value}] {field}: {finding.message}"
        )
    blocking = {Severity.ERROR, Severity.WARNING} if args.strict else {Severity.ERROR}
    failed = any(f.severity in blocking for f in findings)
    if not findings:
        print("ok: no findings")
    return 1 if failed else 0


def cmd_card_render(args, parser) -> int:
    card = _read_card_reporting(args.card, strict=False)
    if args.format == "md":
        text = render_markdown(card)
    elif args.format == "tex":
        text = render_latex(card)
    else:
        text = render_hub_yaml(card)
    _emit(text, args.out)
    return 0


def cmd_survey(args, parser) -> int:
    documents = load_corpus_jsonl(args.corpus, args.repair_hyphenation)
    report = survey(documents)
    sys.stdout.write(render_report_table(report))
    if args.out:
        write_records_jsonl(report, args.out)
        print(f"note: wrote {len(report.rows)} records to {args.out}", file=sys.stderr)
    return 0


def cmd_mix_import(args, parser) -> int:
    registry = load_mix_csv(args.file)
    print(f"ok: {len(registry)} energy-mix records")
    return 0


def cmd_mix_lookup(args, parser) -> int:
    registry = load_mix_csv(args.file) if args.file else default_mix_registry()
    record = lookup_mix(registry, args.location, args.year)
    print(f"{record.intensity.value:g} gCO2eq/kWh")
    print(f"source: {record.source} ({record.year})")
    return 0


def cmd_hw_import(args, parser) -> int:
    registry = load_hardware_csv(args.file)
    print(f"ok: {len(registry)} hardware specs")
    return 0


def cmd_hw_lookup(args, parser) -> int:
    registry = load_hardware_csv(args.file) if args.file else default_hardware_registry()
    spec = lookup_hardware(registry, args.name)
    print(f"{spec.tdp.value:g} W")
    print(f"kind: {spec.kind.value}")
    return 0


def _add_power_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--power-kw", type=float, help="power draw in kilowatts")
    group.add_argument("--power-watts", type=float, help="power draw in watts")
    group.add_argument("--rig", help="JSON rig description resolved against the hardware registry")
    parser.add_argument(
        "--ignore-overhead",
        action="store_true",
        help="zero the rig overhead (simplified GPU-only or CPU-only accounting)",
    )


def _add_bounds_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--low", type=float, help="low uncertainty factor (<= 1)")
    parser.add_argument("--high", type=float, help="high uncertainty factor (>= 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="climatecard",
        description="Estimate CO2eq emissions, manage climate performance "
        "model cards, and survey corpora for climate reporting.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    estimate = commands.add_parser("estimate", help="compute an emission figure")
    estimate.add_argument("--hours", type=float, required=True)
    _add_power_flags(estimate)
    mix_group = estimate.add_mutually_exclusive_group(required=True)
    mix_group.add_argument("--mix", type=float, help="energy mix in gCO2eq/kWh")
    mix_group.add_argument("--location", help="location to resolve via the mix registry")
    estimate.add_argument("--year", type=int, help="mix year (with --location)")
    estimate.add_argument(
        "--samples", type=int, help="sample count; switches to per-sample inference mode"
    )
    _add_bounds_flags(estimate)
    estimate.set_defaults(func=cmd_estimate)

    card = commands.add_parser("card", help="create, validate or render cards")
    card_commands = card.add_subparsers(dest="card_command", required=True)

    new = card_commands.add_parser("new", help="derive and write a card file")
    new.add_argument("--model-name", required=True)
    new.add_argument(
        "--public", action=argparse.BooleanOptionalAction, required=True
    )
    new.add_argument("--final-hours", type=float, required=True)
    new.add_argument("--total-hours", type=float, required=True)
    _add_power_flags(new)
    new.add_argument("--location", required=True)
    new.add_argument("--year", type=int)
    new.add_argument("--mix", type=float, help="energy mix override in gCO2eq/kWh")
    _add_bounds_flags(new)
    new.add_argument("--inference-hours", type=float)
    new.add_argument("--inference-samples", type=int)
    new.add_argument(
        "--impact-category", choices=[c.value for c in ImpactCategory]
    )
    new.add_argument("--impact-text")
    new.add_argument("--comments")
    new.add_argument("--strict", action="store_true", help="fail on lookup errors")
    new.add_argument("--out", help="card file to write (default: stdout)")
    new.set_defaults(func=cmd_card_new)

    validate = card_commands.add_parser("validate", help="lint a card file")
    validate.add_argument("card")
    validate.add_argument("--tolerance", type=float, default=0.05)
    validate.add_argument(
        "--strict", action="store_true", help="treat warnings as errors"
    )
    validate.set_defaults(func=cmd_card_validate)

    render = card_commands.add_parser("render", help="render a card file")
    render.add_argument("card")
    render.add_argument("--format", choices=("md", "tex", "hub-yaml"), required=True)
    render.add_argument("--out", help="output file (default: stdout)")
    render.set_defaults(func=cmd_card_render)

    survey_cmd = commands.add_parser("survey", help="scan a corpus for the reporting dimensions")
    survey_cmd.add_argument("--corpus", required=True, help="JSONL corpus file")
    survey_cmd.add_argument("--out", help="write machine-readable records to this JSONL file")
    survey_cmd.add_argument("--repair-hyphenation", action="store_true")
    survey_cmd.set_defaults(func=cmd_survey)

    mix = commands.add_parser("mix", help="energy-mix registry operations")
    mix_commands = mix.add_subparsers(dest="mix_command", required=True)
    mix_import = mix_commands.add_parser("import", help="validate a mix CSV")
    mix_import.add_argument("file")
    mix_import.set_defaults(func=cmd_mix_import)
    mix_lookup = mix_commands.add_parser("lookup", help="look up a location")
    mix_lookup.add_argument("location")
    mix_lookup.add_argument("--year", type=int)
    mix_lookup.add_argument("--file", help="mix CSV to use instead of the default table")
    mix_lookup.set_defaults(func=cmd_mix_lookup)

    hw = commands.add_parser("hw", help="hardware registry operations")
    hw_commands = hw.add_subparsers(dest="hw_command", required=True)
    hw_import = hw_commands.add_parser("import", help="validate a hardware CSV")
    hw_import.add_argument("file")
    hw_import.set_defaults(func=cmd_hw_import)
    hw_lookup = hw_commands.add_parser("lookup", help="look up a component")
    hw_lookup.add_argument("name")
    hw_lookup.add_argument("--file", help="hardware CSV to use instead of the default table")
    hw_lookup.set_defaults(func=cmd_hw_lookup)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (ValueError, LookupError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
