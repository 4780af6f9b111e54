"""Registry of grid carbon intensity (gCO2eq/kWh) by location.

Records are keyed by (location, year) and loaded from a small CSV format:

    location,gco2eq_per_kwh,source,year
    germany,470,Umweltbundesamt (UBA) German electricity mix,2020

``#``-prefixed lines are comments; the file is UTF-8. Locations are opaque
keys (country, region, data-center name), canonicalized by trimming,
whitespace-collapsing and casefolding. A default table with commonly cited
country averages ships with the package; point CLIMATECARD_DATA_DIR at a
directory containing ``energy_mix.csv`` to replace it.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Iterable

from ._text import canonical, closest
from .quantities import GramsPerKwh, InvalidQuantityError

DATA_DIR_ENV = "CLIMATECARD_DATA_DIR"

_MIX_HEADER = ("location", "gco2eq_per_kwh", "source", "year")

YEAR_RANGE = (1950, 2100)


class RegistryFormatError(ValueError):
    """A registry CSV row could not be parsed; the message locates it."""


class MixLookupError(LookupError):
    """No energy-mix record satisfies the query."""


class LocationNotFoundError(MixLookupError):
    """Unknown location; carries the closest known names as suggestions."""

    def __init__(self, message: str, suggestions: list[str]):
        super().__init__(message)
        self.suggestions = suggestions


@dataclass(frozen=True, slots=True)
class EnergyMixRecord:
    """Carbon intensity of electricity at one location for one year."""

    location: str
    intensity: GramsPerKwh
    source: str
    year: int

    def __post_init__(self) -> None:
        loc = canonical(self.location)
        if not loc:
            raise InvalidQuantityError("location must be non-empty")
        if not YEAR_RANGE[0] <= self.year <= YEAR_RANGE[1]:
            raise InvalidQuantityError(
                f"year must be within {YEAR_RANGE[0]}..{YEAR_RANGE[1]}, "
                f"got {self.year}"
            )
        object.__setattr__(self, "location", loc)


@dataclass(frozen=True)
class MixRegistry:
    """Immutable collection of mix records keyed by (location, year)."""

    _records: dict[tuple[str, int], EnergyMixRecord] = field(default_factory=dict)

    @classmethod
    def from_records(cls, records: Iterable[EnergyMixRecord]) -> "MixRegistry":
        table: dict[tuple[str, int], EnergyMixRecord] = {}
        for record in records:
            key = (record.location, record.year)
            if key in table:
                raise RegistryFormatError(
                    f"duplicate energy-mix key {key[0]!r}/{key[1]}"
                )
            table[key] = record
        return cls(table)

    def records(self) -> list[EnergyMixRecord]:
        return list(self._records.values())

    def locations(self) -> list[str]:
        return sorted({loc for loc, _ in self._records})

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key: tuple[str, int]) -> bool:
        return (canonical(key[0]), key[1]) in self._records


def _open_rows(source: str | Path | IO[str]):
    if hasattr(source, "read"):
        return source, False
    return open(source, "r", encoding="utf-8", newline=""), True


def _parse_year(text: str, line_no: int, column: int) -> int:
    try:
        year = int(text.strip())
    except ValueError:
        raise RegistryFormatError(
            f"line {line_no}, column {column}: year must be an integer, "
            f"got {text.strip()!r}"
        ) from None
    if not YEAR_RANGE[0] <= year <= YEAR_RANGE[1]:
        raise RegistryFormatError(
            f"line {line_no}, column {column}: year {year} outside "
            f"{YEAR_RANGE[0]}..{YEAR_RANGE[1]}"
        )
    return year


def load_mix_csv(source: str | Path | IO[str]) -> MixRegistry:
    """Parse an energy-mix CSV into a registry.

    Raises :class:`RegistryFormatError` naming the offending line (and
    column, for cell-level problems) on any malformed input, and naming
    both rows on a duplicate (location, year) key.
    """
    stream, owned = _open_rows(source)
    try:
        records: dict[tuple[str, int], EnergyMixRecord] = {}
        first_lines: dict[tuple[str, int], int] = {}
        header_seen = False
        for line_no, raw_line in enumerate(stream, start=1):
            line = raw_line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = next(csv.reader([line]))
            if not header_seen:
                names = tuple(name.strip() for name in fields)
                if names != _MIX_HEADER:
                    raise RegistryFormatError(
                        f"line {line_no}: expected header "
                        f"{','.join(_MIX_HEADER)!r}, got {line!r}"
                    )
                header_seen = True
                continue
            if len(fields) != len(_MIX_HEADER):
                raise RegistryFormatError(
                    f"line {line_no}: expected {len(_MIX_HEADER)} fields, "
                    f"found {len(fields)}"
                )
            location = canonical(fields[0])
            if not location:
                raise RegistryFormatError(
                    f"line {line_no}, column 1: location must be non-empty"
                )
            try:
                intensity = GramsPerKwh(float(fields[1].strip()))
            except (ValueError, InvalidQuantityError) as exc:
                raise RegistryFormatError(
                    f"line {line_no}, column 2: invalid intensity "
                    f"{fields[1].strip()!r} ({exc})"
                ) from None
            year = _parse_year(fields[3], line_no, 4)
            key = (location, year)
            if key in records:
                raise RegistryFormatError(
                    f"line {line_no}: duplicate key {location!r}/{year} "
                    f"(first seen at line {first_lines[key]})"
                )
            records[key] = EnergyMixRecord(
                location=location,
                intensity=intensity,
                source=fields[2].strip(),
                year=year,
            )
            first_lines[key] = line_no
        if not header_seen:
            raise RegistryFormatError(
                f"missing header line {','.join(_MIX_HEADER)!r}"
            )
        return MixRegistry(records)
    finally:
        if owned:
            stream.close()


def lookup_mix(
    registry: MixRegistry, location: str, year: int | None = None
) -> EnergyMixRecord:
    """Resolve a location (and optionally a year) to a mix record.

    Without a year, the most recent record for the location wins. With a
    year, the newest record at or before it wins, so an exact match is
    returned when one exists.
    """
    key = canonical(location)
    candidates = [r for r in registry._records.values() if r.location == key]
    if not candidates:
        suggestions = closest(key, registry.locations())
        hint = f" (closest: {', '.join(suggestions)})" if suggestions else ""
        raise LocationNotFoundError(
            f"no energy-mix record for location {location!r}{hint}", suggestions
        )
    if year is None:
        return max(candidates, key=lambda r: r.year)
    eligible = [r for r in candidates if r.year <= year]
    if not eligible:
        available = ", ".join(str(r.year) for r in sorted(candidates, key=lambda r: r.year))
        raise MixLookupError(
            f"no energy-mix record for {location!r} at or before year {year} "
            f"(available: {available})"
        )
    return max(eligible, key=lambda r: r.year)


def _default_source(filename: str) -> Path | io.StringIO:
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        candidate = Path(override) / filename
        if candidate.exists():
            return candidate
    text = resources.files("climatecard").joinpath(f"data/{filename}").read_text("utf-8")
    return io.StringIO(text)


def default_mix_registry() -> MixRegistry:
    """The bundled country table, or the CLIMATECARD_DATA_DIR override."""
    return load_mix_csv(_default_source("energy_mix.csv"))
