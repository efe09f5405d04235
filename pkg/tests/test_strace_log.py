import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from droidtrace.strace_log import (
    BadFieldType,
    DuplicateSyscall,
    EmptyInput,
    MalformedHeader,
    MissingTotalRow,
    StraceParseError,
    TraceRow,
    TraceSummary,
    parse_summary,
    render_summary,
    summary_from_dict,
    summary_to_dict,
    validate_summary,
)

from conftest import make_summary, random_valid_summary

EMPTY_LOG = """\
% time     seconds  usecs/call     calls    errors syscall
------ ----------- ----------- --------- --------- ----------------
------ ----------- ----------- --------- --------- ----------------
100.00 0.000000 0 0 total
"""


class TestParseFig32:
    def test_row_count_and_totals(self, fig32_text):
        summary = parse_summary(fig32_text)
        assert len(summary.rows) == 24
        assert summary.total_calls == 16989
        assert summary.total_errors == 2217
        assert summary.total_seconds == 0.452552
        assert summary.total_time_percent == 100.0

    def test_epoll_pwait_row(self, fig32_text):
        summary = parse_summary(fig32_text)
        row = summary.rows[0]
        assert row == TraceRow(
            time_percent=44.66,
            seconds=0.202104,
            usecs_per_call=96,
            calls=2097,
            errors=1,
            syscall="epoll_pwait",
        )

    def test_blank_errors_parse_as_zero(self, fig32_text):
        summary = parse_summary(fig32_text)
        by_name = {row.syscall: row for row in summary.rows}
        assert by_name["write"].errors == 0
        assert by_name["recvfrom"].errors == 1869

    def test_nonstandard_names_kept_verbatim(self, fig32_text):
        summary = parse_summary(fig32_text)
        names = [row.syscall for row in summary.rows]
        assert "writew" in names  # not corrected to writev

    def test_golden_sums(self, fig32_text):
        summary = parse_summary(fig32_text)
        assert sum(r.calls for r in summary.rows) == 16989
        assert sum(r.errors for r in summary.rows) == 2217
        seconds = math.fsum(r.seconds for r in summary.rows)
        assert f"{seconds:.6f}" == "0.452552"

    def test_validates_clean(self, fig32_text):
        assert validate_summary(parse_summary(fig32_text)) == []


class TestParseGrammar:
    def test_empty_trace(self):
        summary = parse_summary(EMPTY_LOG)
        assert summary.rows == ()
        assert summary.total_calls == 0
        assert summary.total_errors == 0
        assert summary.total_seconds == 0.0

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            parse_summary("")
        with pytest.raises(EmptyInput):
            parse_summary("  \n\t\n")
        # EmptyInput is a malformed-header case: there is no header line.
        assert issubclass(EmptyInput, MalformedHeader)

    def test_malformed_header(self):
        with pytest.raises(MalformedHeader):
            parse_summary("calls errors syscall\n----\n----\n0 0 0 total\n")

    def test_missing_total_row(self, fig32_text):
        truncated = fig32_text[: fig32_text.rindex("-----")]
        with pytest.raises(MissingTotalRow):
            parse_summary(truncated)

    def test_total_token_required(self, fig32_text):
        swapped = fig32_text.replace(" total", " subtotal")
        with pytest.raises(MissingTotalRow):
            parse_summary(swapped)

    def test_bad_field_type(self, fig32_text):
        corrupted = fig32_text.replace("      2097", "      twos", 1)
        with pytest.raises(BadFieldType):
            parse_summary(corrupted)

    def test_negative_count_rejected(self, fig32_text):
        corrupted = fig32_text.replace("      2097", "     -2097", 1)
        with pytest.raises(BadFieldType):
            parse_summary(corrupted)

    def test_duplicate_syscall(self, fig32_text):
        dup = fig32_text.replace(" munmap", " mmap", 1)
        with pytest.raises(DuplicateSyscall):
            parse_summary(dup)

    def test_crlf_accepted(self, fig32_text):
        crlf = fig32_text.replace("\n", "\r\n")
        assert parse_summary(crlf) == parse_summary(fig32_text)

    def test_total_row_with_usecs_column(self):
        text = EMPTY_LOG.replace("100.00 0.000000 0 0 total", "100.00 0.000000 12 40 10 total")
        summary = parse_summary(text)
        assert summary.total_calls == 40
        assert summary.total_errors == 10

    def test_total_row_with_blank_errors(self):
        text = EMPTY_LOG.replace("100.00 0.000000 0 0 total", "100.00 0.000000 40 total")
        summary = parse_summary(text)
        assert summary.total_calls == 40
        assert summary.total_errors == 0

    def test_nan_rejected(self):
        text = EMPTY_LOG.replace("100.00 0.000000", "nan 0.000000")
        with pytest.raises(BadFieldType):
            parse_summary(text)

    @settings(max_examples=300, derandomize=True)
    @given(st.text(max_size=400))
    def test_never_raises_anything_else(self, text):
        try:
            parse_summary(text)
        except StraceParseError:
            pass


class TestValidate:
    def test_calls_sum_mismatch(self):
        summary = TraceSummary(
            rows=(TraceRow(0.0, 0.0, 0, 5, 0, "read"),),
            total_time_percent=0.0,
            total_seconds=0.0,
            total_calls=4,
            total_errors=0,
        )
        violations = validate_summary(summary)
        assert len(violations) == 1
        v = violations[0]
        assert (v.invariant, v.expected, v.observed) == ("calls-sum", 4, 5)

    def test_fig32_with_futex_removed(self, fig32_text):
        lines = [ln for ln in fig32_text.splitlines() if " futex" not in ln]
        summary = parse_summary("\n".join(lines) + "\n")
        assert len(summary.rows) == 23
        violations = {v.invariant: v for v in validate_summary(summary)}
        # Removing futex drops 1718 calls, 347 errors, and 0.111245 s.
        assert violations["calls-sum"].observed == 16989 - 1718
        assert violations["calls-sum"].expected == 16989
        assert violations["errors-sum"].observed == 2217 - 347
        assert violations["seconds-sum"].expected == 0.452552
        assert "time-percent-sum" in violations

    def test_seconds_tolerance_scales_with_rows(self):
        # 10 rows -> slack 5e-5; a 1e-3 discrepancy must be reported.
        rows = tuple(
            TraceRow(10.0, 0.001, 0, 1, 0, f"sc{i}") for i in range(10)
        )
        summary = TraceSummary(rows, 100.0, 0.011, 10, 0)
        violations = [v for v in validate_summary(summary) if v.invariant == "seconds-sum"]
        assert len(violations) == 1
        # The same discrepancy inside the slack passes.
        summary_ok = TraceSummary(rows, 100.0, 0.010 + 4e-5, 10, 0)
        assert validate_summary(summary_ok) == []

    def test_row_calls_must_be_positive(self):
        summary = TraceSummary(
            rows=(TraceRow(0.0, 0.0, 0, 0, 0, "read"),),
            total_time_percent=0.0,
            total_seconds=0.0,
            total_calls=0,
            total_errors=0,
        )
        assert any(v.invariant == "row-calls" for v in validate_summary(summary))

    def test_errors_may_exceed_calls(self):
        summary = make_summary({"ioctl": (2, 9)})
        summary = TraceSummary(summary.rows, 0.0, 0.0, 2, 9)
        assert validate_summary(summary) == []


class TestRender:
    def test_fig32_roundtrip(self, fig32_text):
        summary = parse_summary(fig32_text)
        assert parse_summary(render_summary(summary)) == summary

    def test_empty_roundtrip(self):
        summary = parse_summary(EMPTY_LOG)
        rendered = render_summary(summary)
        assert parse_summary(rendered) == summary

    def test_zero_errors_rendered_blank(self):
        summary = make_summary({"write": (10, 0)})
        line = [ln for ln in render_summary(summary).splitlines() if "write" in ln][0]
        tokens = line.split()
        assert len(tokens) == 5  # errors cell is blank

    def test_lf_line_endings(self, fig32_text):
        assert "\r" not in render_summary(parse_summary(fig32_text))

    def test_random_roundtrip_100_cases(self):
        rng = random.Random(0xD201)
        for _ in range(100):
            summary = random_valid_summary(rng)
            assert parse_summary(render_summary(summary)) == summary

    def test_random_summaries_validate(self):
        rng = random.Random(0xD202)
        for _ in range(50):
            assert validate_summary(random_valid_summary(rng)) == []


def test_summary_dict_roundtrip(fig32_text):
    summary = parse_summary(fig32_text)
    assert summary_from_dict(summary_to_dict(summary)) == summary
