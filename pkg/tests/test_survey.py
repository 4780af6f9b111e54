from __future__ import annotations

import io
import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from climatecard.corpus_survey import (
    DEEP_LEARNING_PATTERN,
    DURATION_PATTERN,
    EMISSION_PATTERN,
    ENERGY_PATTERN,
    LOCATION_PATTERN,
    PUBLIC_WEIGHTS_PATTERN,
    CorpusDocument,
    CorpusFormatError,
    SurveyDimension,
    is_deep_learning,
    load_corpus_jsonl,
    match_offset,
    matches_dimension,
    normalize_text,
    render_report_table,
    report_records,
    survey,
)

CORPUS_PATH = Path(__file__).parent / "data" / "synthetic_corpus.jsonl"

# Frozen byte-for-byte copies of the published pattern strings; the module
# constants must never drift from these.
FIXTURE_PATTERNS = {
    "public_weights": '(((model|weight) (will be|is)?|(models|weights) (will be|are)?) (public|available|upload|made available|made public|provided (at|under|on)))|((publish|upload) [a-zA-Z0-9, ]{0,20}(model(s)?|weight(s)?))|(make [a-zA-Z0-9, ]{0,20}(model(s)?|weight(s)?) (available|public))|(provide [a-zA-Z0-9, ]{0,20}(model(s)?|weight(s)?) (at|under|on))',
    "duration": '(((pre(-)?)?train(ing|ed)?|optimize|optimization|(fine(-)?)?tun(e|ed|ing)) ([a-zA-Z0-9, ]{0,20})(for|took|take(s)?) ([a-zA-Z0-9, ]{0,20})(seconds|minute|hour|day|week|month)+)|hours of computation',
    "energy": '(energy|power|electricity) (consumption|usage)|(is|of|at) [1-9]{1}[0-9]{2,5} (watt(s)?|(k)?w) | pue',
    "location": '((data ?center|(a|the) cloud|(virtual|gpu) machine|computer cluster|hpc) (is )?(at|in) )|(cloud|azure|google|aws)([a-zA-Z0-9, ]{0,20})region',
    "emission": '(co2(e|eq)?|ghg|carbon) (footprint|emission(s)?|emitted|offset(ting)?)',
    "dl": 'deep learning|neural network|lstm|recurrent neural network|rnn|transformer|mlp|convolutional neural network|cnn|gpt',
}


class TestPatternFidelity:
    def test_strings_byte_identical_to_fixtures(self):
        assert PUBLIC_WEIGHTS_PATTERN == FIXTURE_PATTERNS["public_weights"]
        assert DURATION_PATTERN == FIXTURE_PATTERNS["duration"]
        assert ENERGY_PATTERN == FIXTURE_PATTERNS["energy"]
        assert LOCATION_PATTERN == FIXTURE_PATTERNS["location"]
        assert EMISSION_PATTERN == FIXTURE_PATTERNS["emission"]
        assert DEEP_LEARNING_PATTERN == FIXTURE_PATTERNS["dl"]

    def test_enum_binds_each_dimension_to_its_pattern(self):
        assert SurveyDimension.PUBLIC_WEIGHTS.pattern == PUBLIC_WEIGHTS_PATTERN
        assert SurveyDimension.DURATION.pattern == DURATION_PATTERN
        assert SurveyDimension.ENERGY.pattern == ENERGY_PATTERN
        assert SurveyDimension.LOCATION.pattern == LOCATION_PATTERN
        assert SurveyDimension.EMISSION.pattern == EMISSION_PATTERN

    def test_quirks_preserved_verbatim(self):
        # the energy pattern ends in a literal " pue" branch with a leading
        # space, and its middle branch carries a trailing space
        assert ENERGY_PATTERN.endswith("| pue")
        assert "(watt(s)?|(k)?w) |" in ENERGY_PATTERN


class TestNormalizeText:
    def test_whitespace_collapse_and_lowercase(self):
        assert normalize_text("Energy\n  Consumption") == "energy consumption"

    def test_hyphenation_repair(self):
        assert normalize_text("train-\ning", repair_hyphenation=True) == "training"

    def test_repair_off_by_default(self):
        assert normalize_text("train-\ning") == "train- ing"

    def test_empty(self):
        assert normalize_text("") == ""

    def test_no_strip_so_leading_space_survives(self):
        # keeps the " pue" branch matchable at document start
        assert normalize_text("  PUE is 1.1") == " pue is 1.1"
        assert matches_dimension(
            normalize_text("  PUE is reported"), SurveyDimension.ENERGY
        )


# Match expectations below were verified against an independent reference
# regex engine (PCRE via grep -P) before being frozen here.
class TestDimensionMatching:
    def test_public_weights_positive(self):
        assert matches_dimension(
            "our model is publicly available", SurveyDimension.PUBLIC_WEIGHTS
        )

    def test_duration_positive(self):
        assert matches_dimension("we pretrain for 3 days", SurveyDimension.DURATION)

    def test_unrelated_text_matches_nothing(self):
        text = "the weather model predicts rain"
        assert all(not matches_dimension(text, dim) for dim in SurveyDimension)

    def test_energy_wattage_phrase(self):
        assert matches_dimension(
            "power consumption is 300 watts and rising", SurveyDimension.ENERGY
        )

    def test_location_datacenter_phrase(self):
        assert matches_dimension(
            "trained in a datacenter in germany, cooled", SurveyDimension.LOCATION
        )

    def test_emission_co2_phrase(self):
        assert matches_dimension("we report co2 emissions", SurveyDimension.EMISSION)

    def test_match_offset_points_at_first_hit(self):
        text = "we measured the energy consumption today"
        assert match_offset(text, SurveyDimension.ENERGY) == text.find(
            "energy consumption"
        )
        assert match_offset(text, SurveyDimension.EMISSION) is None


class TestDeepLearningFilter:
    def test_transformer_counts(self):
        assert is_deep_learning("we fine-tune a transformer")

    def test_rule_based_does_not(self):
        assert not is_deep_learning("a rule-based pipeline")

    def test_empty_text(self):
        assert not is_deep_learning("")


def doc(doc_id: str, year: int, text: str) -> CorpusDocument:
    return CorpusDocument(id=doc_id, year=year, venue="x", text=normalize_text(text))


class TestSurvey:
    def test_quarter_proportion(self):
        corpus = [
            doc("a", 2021, "a transformer with energy consumption analysis"),
            doc("b", 2021, "an lstm"),
            doc("c", 2021, "a cnn"),
            doc("d", 2021, "gpt in the loop"),
        ]
        report = survey(corpus)
        row = next(
            r
            for r in report.rows
            if r.year == 2021 and r.dimension is SurveyDimension.ENERGY
        )
        assert row.dl_papers == 4
        assert row.matches == 1
        assert row.proportion == Fraction(1, 4)

    def test_year_without_dl_docs_absent(self):
        report = survey([doc("a", 2019, "a grammar of latin")])
        assert report.rows == ()
        assert report.documents[0].is_dl is False

    def test_non_dl_mention_does_not_count(self):
        corpus = [
            doc("dl", 2021, "a transformer"),
            doc("rules", 2021, "rule-based carbon footprint accounting"),
        ]
        report = survey(corpus)
        row = next(
            r
            for r in report.rows
            if r.dimension is SurveyDimension.EMISSION
        )
        assert (row.dl_papers, row.matches) == (1, 0)

    def test_empty_corpus(self):
        report = survey([])
        assert report.rows == ()
        assert report.documents == ()

    def test_order_invariance(self):
        documents = load_corpus_jsonl(CORPUS_PATH)
        baseline = survey(documents)
        rng = random.Random(7)
        for _ in range(5):
            shuffled = documents[:]
            rng.shuffle(shuffled)
            assert survey(shuffled) == baseline

    def test_adding_matching_dl_doc_never_decreases_numerator(self):
        corpus = [doc("a", 2021, "a transformer with energy consumption data")]
        before = survey(corpus)
        corpus.append(doc("b", 2021, "another transformer, energy usage shown"))
        after = survey(corpus)

        def matches_of(report):
            return next(
                r.matches
                for r in report.rows
                if r.dimension is SurveyDimension.ENERGY
            )

        assert matches_of(after) >= matches_of(before)

    @given(
        st.lists(
            st.tuples(
                st.sampled_from(
                    [
                        "a transformer study",
                        "a transformer, energy consumption shown",
                        "rule-based parsing",
                        "gpt pretrain for 2 days",
                        "we publish our mlp models at github",
                    ]
                ),
                st.integers(min_value=2016, max_value=2022),
            ),
            max_size=20,
        )
    )
    def test_proportions_always_within_unit_interval(self, entries):
        corpus = [
            doc(f"d{i}", year, text) for i, (text, year) in enumerate(entries)
        ]
        for row in survey(corpus).rows:
            assert 0 <= row.proportion <= 1
            assert row.matches <= row.dl_papers


class TestBundledCorpus:
    def test_hand_counted_proportions(self):
        report = survey(load_corpus_jsonl(CORPUS_PATH))
        table = {(r.year, r.dimension): r for r in report.rows}
        assert {year for year, _ in table} == {2021, 2022}
        for dim in SurveyDimension:
            assert table[(2021, dim)].dl_papers == 4
            assert table[(2021, dim)].proportion == Fraction(1, 4)
        for dim in SurveyDimension:
            row = table[(2022, dim)]
            assert row.dl_papers == 4
            expected = Fraction(0) if dim is SurveyDimension.LOCATION else Fraction(1, 4)
            assert row.proportion == expected

    def test_document_records_track_dl_and_offsets(self):
        report = survey(load_corpus_jsonl(CORPUS_PATH))
        by_id = {d.id: d for d in report.documents}
        assert by_id["d04"].is_dl is False
        assert by_id["d04"].offsets[SurveyDimension.EMISSION] is not None
        assert by_id["d01"].is_dl is True
        assert by_id["d01"].offsets[SurveyDimension.LOCATION] is None

    def test_record_stream_field_names(self):
        report = survey(load_corpus_jsonl(CORPUS_PATH))
        records = report_records(report)
        assert len(records) == 10
        assert all(
            list(record) == ["year", "dimension", "dl_papers", "matches", "proportion"]
            for record in records
        )

    def test_table_rendering_contains_exact_headers(self):
        table = render_report_table(survey(load_corpus_jsonl(CORPUS_PATH)))
        header = table.splitlines()[0]
        for name in ("year", "dimension", "dl_papers", "matches", "proportion"):
            assert name in header


class TestLoader:
    def test_single_record(self):
        docs = load_corpus_jsonl(
            io.StringIO('{"id": "a", "year": 2020, "venue": "acl", "text": "Hi"}\n')
        )
        assert len(docs) == 1
        assert docs[0].text == "hi"

    def test_duplicate_id_names_both_lines(self):
        lines = [
            json.dumps({"id": f"d{i}", "year": 2020, "venue": "v", "text": "t"})
            for i in range(6)
        ]
        lines[6 - 1] = lines[2]  # line 6 repeats the id from line 3
        payload = "\n".join(lines) + "\n"
        with pytest.raises(CorpusFormatError, match=r"line 6.*line 3"):
            load_corpus_jsonl(io.StringIO(payload))

    def test_malformed_json_names_line(self):
        payload = '{"id": "a", "year": 2020, "venue": "v", "text": "t"}\n{oops\n'
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus_jsonl(io.StringIO(payload))

    def test_missing_year_rejected(self):
        with pytest.raises(CorpusFormatError, match="year"):
            load_corpus_jsonl(
                io.StringIO('{"id": "a", "venue": "v", "text": "t"}\n')
            )

    def test_implausible_year_rejected(self):
        with pytest.raises(CorpusFormatError, match="line 1"):
            load_corpus_jsonl(
                io.StringIO('{"id": "a", "year": 1200, "venue": "v", "text": "t"}\n')
            )

    def test_repair_flag_applies_to_ingested_text(self):
        payload = '{"id": "a", "year": 2020, "venue": "v", "text": "pre-\\ntrained"}\n'
        repaired = load_corpus_jsonl(io.StringIO(payload), repair_hyphenation=True)
        assert repaired[0].text == "pretrained"
        plain = load_corpus_jsonl(io.StringIO(payload))
        assert plain[0].text == "pre- trained"
