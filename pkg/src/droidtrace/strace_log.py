"""Parsing, validation, and rendering of strace call-summary tables.

A summary log is the text table produced by the tracer's count mode::

    % time     seconds  usecs/call     calls    errors syscall
    ------ ----------- ----------- --------- --------- ----------------
     44.66    0.202104          96      2097         1 epoll_pwait
     12.68    0.057404          31      1876           write
    ------ ----------- ----------- --------- --------- ----------------
    100.00    0.452552              16989      2217 total

Columns are whitespace separated; alignment and column widths carry no
meaning. The errors column is blank for rows with no failing calls, and
the usecs/call column may be blank on the total row. Syscall names are
opaque tokens, never canonicalized: real logs contain nonstandard
spellings and those must survive a parse/render round trip verbatim.

Parsing is strict about the table grammar but deliberately does not
check the arithmetic between rows and the total row; that lives in
:func:`validate_summary` so damaged logs can be triaged instead of
rejected outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Per-row rounding slack: each seconds cell is printed at 6 decimals, so
# the row sum may drift from the printed total by half an ulp per row.
SECONDS_SLACK_PER_ROW = 5e-6
# Same idea for the %time column at 2 decimals.
TIME_PERCENT_SLACK_PER_ROW = 0.01

_HEADER_FORMS = (
    "% time seconds usecs/call calls errors syscall",
    "%time seconds usecs/call calls errors syscall",
)

HEADER_LINE = "% time     seconds  usecs/call     calls    errors syscall"
SEPARATOR_LINE = "------ ----------- ----------- --------- --------- ----------------"


class StraceParseError(Exception):
    """Input text does not match the summary-table grammar."""


class MalformedHeader(StraceParseError):
    """First non-blank line does not carry the six column names."""


class EmptyInput(MalformedHeader):
    """No content at all, hence no header line either."""


class MissingTotalRow(StraceParseError):
    """The closing separator or the trailing total row is absent."""


class BadFieldType(StraceParseError):
    """A cell that must be numeric is not, or a row has the wrong shape."""


class DuplicateSyscall(StraceParseError):
    """The same syscall name appears in two data rows."""


@dataclass(frozen=True)
class TraceRow:
    time_percent: float
    seconds: float
    usecs_per_call: int
    calls: int
    errors: int
    syscall: str


@dataclass(frozen=True)
class TraceSummary:
    rows: tuple[TraceRow, ...]
    total_time_percent: float
    total_seconds: float
    total_calls: int
    total_errors: int


@dataclass(frozen=True)
class Violation:
    """One failed arithmetic invariant, with what was expected vs seen."""

    invariant: str
    expected: object
    observed: object
    detail: str = ""

    def __str__(self) -> str:
        msg = f"{self.invariant}: expected {self.expected}, observed {self.observed}"
        return f"{msg} ({self.detail})" if self.detail else msg


def _is_separator(line: str) -> bool:
    stripped = line.strip()
    return bool(stripped) and set(stripped) <= {"-", " ", "\t"}


def _is_header(line: str) -> bool:
    return " ".join(line.split()) in _HEADER_FORMS


def _parse_float(token: str, field: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise BadFieldType(f"line {lineno}: {field} must be a number, got {token!r}") from None
    if not math.isfinite(value) or value < 0:
        raise BadFieldType(f"line {lineno}: {field} must be finite and non-negative, got {token!r}")
    return value


def _parse_int(token: str, field: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise BadFieldType(f"line {lineno}: {field} must be an integer, got {token!r}") from None
    if value < 0:
        raise BadFieldType(f"line {lineno}: {field} must be non-negative, got {token!r}")
    return value


def _parse_data_row(line: str, lineno: int) -> TraceRow:
    tokens = line.split()
    # 6 tokens is a full row; 5 means the errors column was blank.
    if len(tokens) == 6:
        time_pct, seconds, usecs, calls, errors, name = tokens
        error_count = _parse_int(errors, "errors", lineno)
    elif len(tokens) == 5:
        time_pct, seconds, usecs, calls, name = tokens
        error_count = 0
    else:
        raise BadFieldType(
            f"line {lineno}: expected 5 or 6 whitespace-separated columns, got {len(tokens)}"
        )
    return TraceRow(
        time_percent=_parse_float(time_pct, "% time", lineno),
        seconds=_parse_float(seconds, "seconds", lineno),
        usecs_per_call=_parse_int(usecs, "usecs/call", lineno),
        calls=_parse_int(calls, "calls", lineno),
        errors=error_count,
        syscall=name,
    )


def _parse_total_row(line: str, lineno: int) -> tuple[float, float, int, int]:
    tokens = line.split()
    if not tokens or tokens[-1] != "total":
        raise MissingTotalRow(f"line {lineno}: expected a row ending in 'total', got {line.strip()!r}")
    # The usecs/call cell is routinely blank on the total row, and the
    # errors cell may be blank as well when no call failed:
    #   6 tokens: %time seconds usecs calls errors total
    #   5 tokens: %time seconds calls errors total
    #   4 tokens: %time seconds calls total
    if len(tokens) == 6:
        time_pct, seconds, usecs, calls, errors = tokens[:5]
        _parse_int(usecs, "usecs/call", lineno)  # checked, then discarded
    elif len(tokens) == 5:
        time_pct, seconds, calls, errors = tokens[:4]
    elif len(tokens) == 4:
        time_pct, seconds, calls = tokens[:3]
        errors = "0"
    else:
        raise BadFieldType(f"line {lineno}: total row has {len(tokens)} columns, expected 4-6")
    return (
        _parse_float(time_pct, "% time", lineno),
        _parse_float(seconds, "seconds", lineno),
        _parse_int(calls, "calls", lineno),
        _parse_int(errors, "errors", lineno),
    )


def parse_summary(text: str) -> TraceSummary:
    """Parse a complete call-summary table.

    The input must contain, in order: the header line, a dashed
    separator, zero or more data rows, a second separator, and one total
    row. Blank lines are skipped anywhere; text after the total row is
    ignored. A blank errors cell parses as 0.

    Raises :class:`MalformedHeader` (or its :class:`EmptyInput`
    subclass), :class:`MissingTotalRow`, :class:`BadFieldType`, or
    :class:`DuplicateSyscall`; never anything else, for any input text.
    """
    if text.startswith("﻿"):
        text = text[1:]
    content = [
        (lineno, line)
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    if not content:
        raise EmptyInput("malformed header: input contains no table")

    lineno, header = content[0]
    if not _is_header(header):
        raise MalformedHeader(
            f"line {lineno}: first non-blank line lacks the six column names: {header.strip()!r}"
        )
    if len(content) < 2 or not _is_separator(content[1][1]):
        raise MalformedHeader("header is not followed by a dashed separator line")

    rows: list[TraceRow] = []
    seen: set[str] = set()
    pos = 2
    while pos < len(content) and not _is_separator(content[pos][1]):
        lineno, line = content[pos]
        row = _parse_data_row(line, lineno)
        if row.syscall in seen:
            raise DuplicateSyscall(f"line {lineno}: syscall {row.syscall!r} appears twice")
        seen.add(row.syscall)
        rows.append(row)
        pos += 1
    if pos >= len(content):
        raise MissingTotalRow("no closing separator before end of input")
    pos += 1  # skip the second separator
    if pos >= len(content):
        raise MissingTotalRow("no total row after the closing separator")

    lineno, line = content[pos]
    total_time, total_seconds, total_calls, total_errors = _parse_total_row(line, lineno)
    return TraceSummary(
        rows=tuple(rows),
        total_time_percent=total_time,
        total_seconds=total_seconds,
        total_calls=total_calls,
        total_errors=total_errors,
    )


def validate_summary(summary: TraceSummary) -> list[Violation]:
    """Check the arithmetic invariants of a parsed summary.

    Returns one :class:`Violation` per failed invariant; an empty list
    means the summary is internally consistent. Call and error counts
    must sum exactly; the seconds and %time sums get per-row rounding
    slack (the source tool rounds each cell independently).
    """
    violations: list[Violation] = []

    seen: set[str] = set()
    for row in summary.rows:
        if row.syscall in seen:
            violations.append(
                Violation("unique-syscalls", "each name once", row.syscall, "duplicate data row")
            )
        seen.add(row.syscall)
        if row.calls < 1:
            violations.append(
                Violation("row-calls", ">= 1", row.calls, f"syscall {row.syscall!r}")
            )
        if row.errors < 0:
            violations.append(
                Violation("row-errors", ">= 0", row.errors, f"syscall {row.syscall!r}")
            )

    calls_sum = sum(row.calls for row in summary.rows)
    if calls_sum != summary.total_calls:
        violations.append(Violation("calls-sum", summary.total_calls, calls_sum))

    errors_sum = sum(row.errors for row in summary.rows)
    if errors_sum != summary.total_errors:
        violations.append(Violation("errors-sum", summary.total_errors, errors_sum))

    seconds_sum = math.fsum(row.seconds for row in summary.rows)
    seconds_slack = SECONDS_SLACK_PER_ROW * len(summary.rows)
    if abs(seconds_sum - summary.total_seconds) > seconds_slack:
        violations.append(
            Violation(
                "seconds-sum",
                summary.total_seconds,
                seconds_sum,
                f"tolerance {seconds_slack:g}",
            )
        )

    if summary.total_seconds > 0:
        time_sum = math.fsum(row.time_percent for row in summary.rows)
        time_slack = TIME_PERCENT_SLACK_PER_ROW * len(summary.rows)
        if abs(time_sum - 100.0) > time_slack:
            violations.append(
                Violation("time-percent-sum", 100.0, time_sum, f"tolerance {time_slack:g}")
            )

    return violations


def render_summary(summary: TraceSummary) -> str:
    """Render the six-column table so that parsing it back is identity.

    %time prints at 2 decimals and seconds at 6, so the round trip is
    exact only for summaries whose values sit on those printable grids
    (which is true of anything that itself came out of parse_summary).
    Zero error counts render as a blank cell; the total row leaves the
    usecs/call cell blank. Output uses LF line endings.
    """
    lines = [HEADER_LINE, SEPARATOR_LINE]
    for row in summary.rows:
        errors = str(row.errors) if row.errors else ""
        lines.append(
            f"{row.time_percent:6.2f} {row.seconds:11.6f} {row.usecs_per_call:11d}"
            f" {row.calls:9d} {errors:>9} {row.syscall}"
        )
    lines.append(SEPARATOR_LINE)
    total_errors = str(summary.total_errors) if summary.total_errors else ""
    lines.append(
        f"{summary.total_time_percent:6.2f} {summary.total_seconds:11.6f} {'':11}"
        f" {summary.total_calls:9d} {total_errors:>9} total"
    )
    return "\n".join(lines) + "\n"


def summary_to_dict(summary: TraceSummary) -> dict:
    """Plain-JSON shape used by scripted devices and fixtures."""
    return {
        "rows": [
            {
                "time_percent": row.time_percent,
                "seconds": row.seconds,
                "usecs_per_call": row.usecs_per_call,
                "calls": row.calls,
                "errors": row.errors,
                "syscall": row.syscall,
            }
            for row in summary.rows
        ],
        "total_time_percent": summary.total_time_percent,
        "total_seconds": summary.total_seconds,
        "total_calls": summary.total_calls,
        "total_errors": summary.total_errors,
    }


def summary_from_dict(data: dict) -> TraceSummary:
    rows = tuple(
        TraceRow(
            time_percent=float(row.get("time_percent", 0.0)),
            seconds=float(row.get("seconds", 0.0)),
            usecs_per_call=int(row.get("usecs_per_call", 0)),
            calls=int(row["calls"]),
            errors=int(row.get("errors", 0)),
            syscall=str(row["syscall"]),
        )
        for row in data.get("rows", [])
    )
    return TraceSummary(
        rows=rows,
        total_time_percent=float(data.get("total_time_percent", 100.0 if rows else 0.0)),
        total_seconds=float(data.get("total_seconds", math.fsum(r.seconds for r in rows))),
        total_calls=int(data.get("total_calls", sum(r.calls for r in rows))),
        total_errors=int(data.get("total_errors", sum(r.errors for r in rows))),
    )
