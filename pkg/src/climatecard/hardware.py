"""Peak-power estimation from hardware thermal design power (TDP).

The sum of component TDPs plus a flat overhead for the rest of the machine
is a deliberate upper-bound proxy for draw under load, so estimates derived
from it are tagged as likely overestimates. Specs load from a CSV:

    name,tdp_watts,kind
    NVIDIA RTX A5000,230,gpu

A small table of common accelerators and CPUs ships with the package
(values from public manufacturer spec sheets); CLIMATECARD_DATA_DIR may
point at a directory with a replacement ``hardware.csv``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable

from ._text import canonical, closest
from .energy_mix import RegistryFormatError, _default_source
from .quantities import InvalidQuantityError, Watts

_HW_HEADER = ("name", "tdp_watts", "kind")


class HardwareLookupError(LookupError):
    """Unknown hardware name; carries the closest known names."""

    def __init__(self, message: str, suggestions: list[str]):
        super().__init__(message)
        self.suggestions = suggestions


class HardwareKind(Enum):
    GPU = "gpu"
    CPU = "cpu"
    OTHER = "other"


@dataclass(frozen=True, slots=True)
class HardwareSpec:
    """A named component with its manufacturer-rated TDP."""

    name: str
    tdp: Watts
    kind: HardwareKind

    def __post_init__(self) -> None:
        name = canonical(self.name)
        if not name:
            raise InvalidQuantityError("hardware name must be non-empty")
        object.__setattr__(self, "name", name)


@dataclass(frozen=True, slots=True)
class RigDescription:
    """A machine: counted components plus a flat non-GPU/CPU overhead."""

    components: tuple[tuple[HardwareSpec, int], ...]
    overhead: Watts

    def __post_init__(self) -> None:
        for spec, count in self.components:
            if isinstance(count, bool) or not isinstance(count, int) or count < 1:
                raise InvalidQuantityError(
                    f"component count for {spec.name!r} must be a positive "
                    f"integer, got {count!r}"
                )
        object.__setattr__(self, "components", tuple(self.components))


def peak_power(rig: RigDescription) -> Watts:
    """Sum of component TDPs times counts, plus the overhead."""
    total = 0.0
    for spec, count in rig.components:
        total += spec.tdp.value * count
    return Watts(total + rig.overhead.value)


@dataclass(frozen=True)
class HardwareRegistry:
    """Immutable spec table keyed by canonical component name."""

    _specs: dict[str, HardwareSpec] = field(default_factory=dict)

    @classmethod
    def from_specs(cls, specs: Iterable[HardwareSpec]) -> "HardwareRegistry":
        table: dict[str, HardwareSpec] = {}
        for spec in specs:
            if spec.name in table:
                raise RegistryFormatError(f"duplicate hardware name {spec.name!r}")
            table[spec.name] = spec
        return cls(table)

    def names(self) -> list[str]:
        return sorted(self._specs)

    def __len__(self) -> int:
        return len(self._specs)

    def __contains__(self, name: str) -> bool:
        return canonical(name) in self._specs


def load_hardware_csv(source: str | Path | IO[str]) -> HardwareRegistry:
    """Parse a hardware CSV, rejecting duplicates and invalid kinds."""
    if hasattr(source, "read"):
        stream, owned = source, False
    else:
        stream, owned = open(source, "r", encoding="utf-8", newline=""), True
    try:
        specs: dict[str, HardwareSpec] = {}
        first_lines: dict[str, int] = {}
        header_seen = False
        for line_no, raw_line in enumerate(stream, start=1):
            line = raw_line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = next(csv.reader([line]))
            if not header_seen:
                names = tuple(name.strip() for name in fields)
                if names != _HW_HEADER:
                    raise RegistryFormatError(
                        f"line {line_no}: expected header "
                        f"{','.join(_HW_HEADER)!r}, got {line!r}"
                    )
                header_seen = True
                continue
            if len(fields) != len(_HW_HEADER):
                raise RegistryFormatError(
                    f"line {line_no}: expected {len(_HW_HEADER)} fields, "
                    f"found {len(fields)}"
                )
            name = canonical(fields[0])
            try:
                tdp = Watts(float(fields[1].strip()))
            except (ValueError, InvalidQuantityError) as exc:
                raise RegistryFormatError(
                    f"line {line_no}, column 2: invalid TDP "
                    f"{fields[1].strip()!r} ({exc})"
                ) from None
            kind_text = fields[2].strip().lower()
            try:
                kind = HardwareKind(kind_text)
            except ValueError:
                raise RegistryFormatError(
                    f"line {line_no}, column 3: invalid kind {kind_text!r} "
                    f"(expected gpu, cpu or other)"
                ) from None
            if name in specs:
                raise RegistryFormatError(
                    f"line {line_no}: duplicate hardware name {name!r} "
                    f"(first seen at line {first_lines[name]})"
                )
            try:
                specs[name] = HardwareSpec(name=name, tdp=tdp, kind=kind)
            except InvalidQuantityError as exc:
                raise RegistryFormatError(f"line {line_no}: {exc}") from None
            first_lines[name] = line_no
        if not header_seen:
            raise RegistryFormatError(
                f"missing header line {','.join(_HW_HEADER)!r}"
            )
        return HardwareRegistry(specs)
    finally:
        if owned:
            stream.close()


def lookup_hardware(registry: HardwareRegistry, name: str) -> HardwareSpec:
    """Resolve a component name, case- and whitespace-insensitively."""
    key = canonical(name)
    spec = registry._specs.get(key)
    if spec is None:
        suggestions = closest(key, registry.names())
        hint = f" (closest: {', '.join(suggestions)})" if suggestions else ""
        raise HardwareLookupError(
            f"no hardware spec for {name!r}{hint}", suggestions
        )
    return spec


def load_rig_json(
    source: str | Path | IO[str],
    registry: HardwareRegistry,
    *,
    ignore_overhead: bool = False,
) -> RigDescription:
    """Read a rig description file and resolve its component names.

    The file is JSON of the form::

        {"components": [{"name": "NVIDIA RTX A5000", "count": 2}],
         "overhead_watts": 120}

    ``ignore_overhead`` zeroes the overhead for simplified GPU-only or
    CPU-only accounting.
    """
    if hasattr(source, "read"):
        payload = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    if not isinstance(payload, dict) or "components" not in payload:
        raise RegistryFormatError("rig file must be an object with 'components'")
    components = []
    for entry in payload["components"]:
        if not isinstance(entry, dict) or "name" not in entry:
            raise RegistryFormatError(f"rig component must name hardware: {entry!r}")
        spec = lookup_hardware(registry, entry["name"])
        components.append((spec, entry.get("count", 1)))
    overhead_watts = payload.get("overhead_watts", 0)
    if ignore_overhead:
        overhead_watts = 0
    return RigDescription(
        components=tuple(components), overhead=Watts(float(overhead_watts))
    )


def default_hardware_registry() -> HardwareRegistry:
    """The bundled TDP table, or the CLIMATECARD_DATA_DIR override."""
    return load_hardware_csv(_default_source("hardware.csv"))
