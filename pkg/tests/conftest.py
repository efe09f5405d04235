import math
import random
from pathlib import Path

import pytest

from droidtrace.strace_log import TraceRow, TraceSummary

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig32_text() -> str:
    return (DATA_DIR / "fig32.log").read_text(encoding="utf-8")


def make_summary(counts, seed=None, with_time=False):
    """Build a consistent TraceSummary from {syscall: (calls, errors)}.

    By default all time columns are zero (which keeps the %time-sum
    check vacuous); with_time=True distributes 100.00 across rows on the
    printable 2/6-decimal grids so the summary also renders round-trip
    exactly.
    """
    rng = random.Random(seed)
    names = list(counts)
    rows = []
    if with_time and names:
        cents = _split_units(rng, 10000, len(names))
        micros = [rng.randrange(0, 200000) for _ in names]
    else:
        cents = [0] * len(names)
        micros = [0] * len(names)
    for name, pct_cents, usec in zip(names, cents, micros):
        calls, errors = counts[name]
        rows.append(
            TraceRow(
                time_percent=pct_cents / 100.0,
                seconds=usec / 1e6,
                usecs_per_call=(usec // calls) if calls else 0,
                calls=calls,
                errors=errors,
            syscall=name,
            )
        )
    total_seconds = sum(micros) / 1e6
    return TraceSummary(
        rows=tuple(rows),
        total_time_percent=100.0 if (with_time and names) else 0.0,
        total_seconds=total_seconds,
        total_calls=sum(c for c, _ in counts.values()),
        total_errors=sum(e for _, e in counts.values()),
    )


def _split_units(rng, total, parts):
    """Split an integer total into `parts` non-negative integers."""
    if parts == 1:
        return [total]
    cuts = sorted(rng.randrange(0, total + 1) for _ in range(parts - 1))
    values = []
    prev = 0
    for cut in cuts:
        values.append(cut - prev)
        prev = cut
    values.append(total - prev)
    return values


def random_valid_summary(rng: random.Random) -> TraceSummary:
    """A random grammar- and arithmetic-valid summary on printable grids."""
    n_rows = rng.randrange(0, 12)
    names = rng.sample(
        [f"call_{c}{i}" for i, c in enumerate("abcdefghijklmnopqrst")], n_rows
    )
    counts = {}
    for name in names:
        calls = rng.randrange(1, 5000)
        errors = rng.randrange(0, calls + 1) if rng.random() < 0.5 else 0
        counts[name] = (calls, errors)
    return make_summary(counts, seed=rng.randrange(2**31), with_time=bool(names))
