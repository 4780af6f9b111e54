"""Corpus survey: how often papers discuss climate-reporting dimensions.

Five fixed regular expressions detect discussion of public model weights,
training/optimization duration, energy consumption, compute location and
GHG emissions; a sixth pattern selects deep-learning-related documents,
which form the denominator. A document counts for a dimension when its
pattern matches at least once anywhere in the full text. Per year, the
report gives matches / deep-learning papers as an exact fraction; years
without any deep-learning document are omitted.

The pattern strings are fixed byte-for-byte, quirks included: the energy
pattern's final alternation branch is literally ``" pue"`` with a leading
space (so ``pue`` only matches after whitespace) and its middle branch
ends with a trailing space. They are kept verbatim rather than repaired,
since the counts are only comparable under the exact patterns.

Matching runs on normalized text: lowercased, every whitespace run
collapsed to a single space (the patterns contain single literal spaces,
while extracted paper text has arbitrary line breaks). The text is not
stripped, so a document that starts with whitespace keeps one leading
space. Optional hyphenation repair rejoins words split across line breaks
("train-\\ning" -> "training"); it is off by default because rejoining can
also manufacture matches that were never in the source.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Mapping

PUBLIC_WEIGHTS_PATTERN = '(((model|weight) (will be|is)?|(models|weights) (will be|are)?) (public|available|upload|made available|made public|provided (at|under|on)))|((publish|upload) [a-zA-Z0-9, ]{0,20}(model(s)?|weight(s)?))|(make [a-zA-Z0-9, ]{0,20}(model(s)?|weight(s)?) (available|public))|(provide [a-zA-Z0-9, ]{0,20}(model(s)?|weight(s)?) (at|under|on))'

DURATION_PATTERN = '(((pre(-)?)?train(ing|ed)?|optimize|optimization|(fine(-)?)?tun(e|ed|ing)) ([a-zA-Z0-9, ]{0,20})(for|took|take(s)?) ([a-zA-Z0-9, ]{0,20})(seconds|minute|hour|day|week|month)+)|hours of computation'

ENERGY_PATTERN = '(energy|power|electricity) (consumption|usage)|(is|of|at) [1-9]{1}[0-9]{2,5} (watt(s)?|(k)?w) | pue'

LOCATION_PATTERN = '((data ?center|(a|the) cloud|(virtual|gpu) machine|computer cluster|hpc) (is )?(at|in) )|(cloud|azure|google|aws)([a-zA-Z0-9, ]{0,20})region'

EMISSION_PATTERN = '(co2(e|eq)?|ghg|carbon) (footprint|emission(s)?|emitted|offset(ting)?)'

DEEP_LEARNING_PATTERN = 'deep learning|neural network|lstm|recurrent neural network|rnn|transformer|mlp|convolutional neural network|cnn|gpt'

YEAR_RANGE = (1950, 2100)


class CorpusFormatError(ValueError):
    """A corpus file record is malformed; the message locates the line."""


class SurveyDimension(Enum):
    """The five reporting dimensions scanned for."""

    PUBLIC_WEIGHTS = "public_weights"
    DURATION = "duration"
    ENERGY = "energy"
    LOCATION = "location"
    EMISSION = "emission"

    @property
    def pattern(self) -> str:
        return _DIMENSION_PATTERNS[self]


_DIMENSION_PATTERNS: dict[SurveyDimension, str] = {
    SurveyDimension.PUBLIC_WEIGHTS: PUBLIC_WEIGHTS_PATTERN,
    SurveyDimension.DURATION: DURATION_PATTERN,
    SurveyDimension.ENERGY: ENERGY_PATTERN,
    SurveyDimension.LOCATION: LOCATION_PATTERN,
    SurveyDimension.EMISSION: EMISSION_PATTERN,
}

# Compiled once at import; text is lowercased already, IGNORECASE is belt
# and braces.
_COMPILED = {
    dim: re.compile(pattern, re.IGNORECASE)
    for dim, pattern in _DIMENSION_PATTERNS.items()
}
_DL_COMPILED = re.compile(DEEP_LEARNING_PATTERN, re.IGNORECASE)

_HYPHEN_BREAK = re.compile(r"(\w)-[ \t]*\n\s*(\w)")
_WHITESPACE_RUN = re.compile(r"\s+")


def normalize_text(raw: str, repair_hyphenation: bool = False) -> str:
    """Lowercase and collapse whitespace; optionally rejoin hyphen breaks."""
    text = raw
    if repair_hyphenation:
        text = _HYPHEN_BREAK.sub(r"\1\2", text)
    text = text.lower()
    return _WHITESPACE_RUN.sub(" ", text)


def match_offset(doc_text: str, dimension: SurveyDimension) -> int | None:
    """Offset of the first pattern match in normalized text, or None."""
    found = _COMPILED[dimension].search(doc_text)
    return None if found is None else found.start()


def matches_dimension(doc_text: str, dimension: SurveyDimension) -> bool:
    return match_offset(doc_text, dimension) is not None


def is_deep_learning(doc_text: str) -> bool:
    """True when the deep-learning filter pattern matches at least once."""
    return _DL_COMPILED.search(doc_text) is not None


@dataclass(frozen=True, slots=True)
class CorpusDocument:
    """One paper: identifier, publication year, venue, normalized text."""

    id: str
    year: int
    venue: str
    text: str

    def __post_init__(self) -> None:
        if not self.id:
            raise CorpusFormatError("document id must be non-empty")
        if not YEAR_RANGE[0] <= self.year <= YEAR_RANGE[1]:
            raise CorpusFormatError(
                f"document {self.id!r}: year {self.year} outside "
                f"{YEAR_RANGE[0]}..{YEAR_RANGE[1]}"
            )


@dataclass(frozen=True)
class DocumentMatches:
    """Per-document scan result: DL flag and first-match offsets."""

    id: str
    year: int
    is_dl: bool
    offsets: Mapping[SurveyDimension, int | None]


@dataclass(frozen=True, slots=True)
class SurveyRow:
    """One (year, dimension) aggregate over deep-learning documents."""

    year: int
    dimension: SurveyDimension
    dl_papers: int
    matches: int
    proportion: Fraction


@dataclass(frozen=True)
class SurveyReport:
    rows: tuple[SurveyRow, ...]
    documents: tuple[DocumentMatches, ...]


def survey(corpus: Iterable[CorpusDocument]) -> SurveyReport:
    """Scan a corpus and aggregate per-year, per-dimension proportions.

    Only deep-learning documents enter the denominator or any numerator;
    the output is independent of document order.
    """
    documents = []
    dl_by_year: dict[int, int] = {}
    hits: dict[tuple[int, SurveyDimension], int] = {}
    for doc in corpus:
        offsets = {dim: match_offset(doc.text, dim) for dim in SurveyDimension}
        dl = is_deep_learning(doc.text)
        documents.append(
            DocumentMatches(id=doc.id, year=doc.year, is_dl=dl, offsets=offsets)
        )
        if not dl:
            continue
        dl_by_year[doc.year] = dl_by_year.get(doc.year, 0) + 1
        for dim, offset in offsets.items():
            if offset is not None:
                key = (doc.year, dim)
                hits[key] = hits.get(key, 0) + 1

    rows = []
    for year in sorted(dl_by_year):
        denominator = dl_by_year[year]
        for dim in SurveyDimension:
            matches = hits.get((year, dim), 0)
            rows.append(
                SurveyRow(
                    year=year,
                    dimension=dim,
                    dl_papers=denominator,
                    matches=matches,
                    proportion=Fraction(matches, denominator),
                )
            )
    documents.sort(key=lambda d: d.id)
    return SurveyReport(rows=tuple(rows), documents=tuple(documents))


_REQUIRED_DOC_FIELDS = ("id", "year", "venue", "text")


def load_corpus_jsonl(
    source: str | Path | IO[str], repair_hyphenation: bool = False
) -> list[CorpusDocument]:
    """Read newline-delimited JSON documents, normalizing text on ingest.

    Each line is an object with ``id``, ``year``, ``venue`` and ``text``.
    Malformed lines and duplicate ids raise :class:`CorpusFormatError`
    naming the offending line(s).
    """
    if hasattr(source, "read"):
        stream, owned = source, False
    else:
        stream, owned = open(source, "r", encoding="utf-8"), True
    try:
        documents: list[CorpusDocument] = []
        seen: dict[str, int] = {}
        for line_no, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(
                    f"line {line_no}: invalid JSON ({exc.msg})"
                ) from None
            if not isinstance(record, dict):
                raise CorpusFormatError(
                    f"line {line_no}: expected an object, got "
                    f"{type(record).__name__}"
                )
            missing = [f for f in _REQUIRED_DOC_FIELDS if f not in record]
            if missing:
                raise CorpusFormatError(
                    f"line {line_no}: missing field(s) {', '.join(missing)}"
                )
            doc_id = record["id"]
            if not isinstance(doc_id, str) or not doc_id:
                raise CorpusFormatError(
                    f"line {line_no}: id must be a non-empty string"
                )
            if doc_id in seen:
                raise CorpusFormatError(
                    f"line {line_no}: duplicate id {doc_id!r} "
                    f"(first seen at line {seen[doc_id]})"
                )
            year = record["year"]
            if isinstance(year, bool) or not isinstance(year, int):
                raise CorpusFormatError(
                    f"line {line_no}: year must be an integer, got {year!r}"
                )
            if not isinstance(record["text"], str) or not isinstance(
                record["venue"], str
            ):
                raise CorpusFormatError(
                    f"line {line_no}: venue and text must be strings"
                )
            try:
                documents.append(
                    CorpusDocument(
                        id=doc_id,
                        year=year,
                        venue=record["venue"],
                        text=normalize_text(record["text"], repair_hyphenation),
                    )
                )
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"line {line_no}: {exc}") from None
            seen[doc_id] = line_no
        return documents
    finally:
        if owned:
            stream.close()


def render_report_table(report: SurveyReport) -> str:
    """Human-readable per-year table with the five proportion columns."""
    header = f"{'year':>4}  {'dimension':<15}{'dl_papers':>10}{'matches':>9}{'proportion':>12}"
    lines = [header]
    for row in report.rows:
        lines.append(
            f"{row.year:>4}  {row.dimension.value:<15}"
            f"{row.dl_papers:>10}{row.matches:>9}"
            f"{float(row.proportion):>12.4f}"
        )
    return "\n".join(lines) + "\n"


def report_records(report: SurveyReport) -> list[dict]:
    """Machine-readable rows: one dict per (year, dimension)."""
    return [
        {
            "year": row.year,
            "dimension": row.dimension.value,
            "dl_papers": row.dl_papers,
            "matches": row.matches,
            "proportion": float(row.proportion),
        }
        for row in report.rows
    ]


def write_records_jsonl(report: SurveyReport, path: str | Path) -> None:
    lines = [json.dumps(record) for record in report_records(report)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
