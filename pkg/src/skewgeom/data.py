"""Count data containers, the ``bin,count`` frequency file format and the bundled datasets."""

from __future__ import annotations

import io
import os
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

__all__ = [
    "Bin",
    "CountData",
    "FrequencyFileError",
    "parse_bin",
    "read_frequency_file",
    "parse_frequency_text",
    "format_frequency_text",
    "default_gof_bins",
    "claims",
    "ticks",
    "DATASETS",
]


class FrequencyFileError(ValueError):
    """Malformed frequency file; ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, order=True)
class Bin:
    """Integer cell ``[lo, hi]``; ``hi is None`` marks the open tail ``lo+``."""

    lo: int
    hi: Optional[int]

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError("bins live on the non-negative integers")
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty bin {self.lo}-{self.hi}")

    @property
    def is_tail(self) -> bool:
        return self.hi is None

    @property
    def is_point(self) -> bool:
        return self.hi == self.lo

    def values(self) -> np.ndarray:
        if self.hi is None:
            raise ValueError("open tail has no finite value list")
        return np.arange(self.lo, self.hi + 1)

    def contains(self, other: "Bin") -> bool:
        if other.lo < self.lo:
            return False
        if self.hi is None:
            return True
        return other.hi is not None and other.hi <= self.hi

    def __str__(self) -> str:
        if self.hi is None:
            return f"{self.lo}+"
        if self.hi == self.lo:
            return str(self.lo)
        return f"{self.lo}-{self.hi}"


_BIN_RE = re.compile(r"^\s*(\d+)\s*(?:(-)\s*(\d+)|(\+))?\s*$")


def parse_bin(text: str) -> Bin:
    """Parse ``k``, ``a-b`` or ``a+``."""
    m = _BIN_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse bin {text!r}")
    lo = int(m.group(1))
    if m.group(4):
        return Bin(lo, None)
    if m.group(2):
        return Bin(lo, int(m.group(3)))
    return Bin(lo, lo)


def _check_partition(bins: Sequence[Bin], lines: Optional[Sequence[int]] = None):
    for i, b in enumerate(bins):
        line = lines[i] if lines else None
        if b.is_tail and i != len(bins) - 1:
            raise FrequencyFileError("open tail bin must be the last row", line)
        if i > 0:
            prev = bins[i - 1]
            if prev.hi is None or b.lo <= prev.hi:
                raise FrequencyFileError(f"bin {b} overlaps or is out of order after {prev}", line)


class CountData:
    """Observed counts as ordered, disjoint bins with frequencies.

    Exact observations are stored as point bins, so raw samples and grouped
    frequency tables share one representation.

    Parameters
    ----------
    bins : sequence of Bin
        Disjoint bins in ascending order; at most one open tail, last.
    counts : sequence of int
        Non-negative frequency for each bin.
    """

    def __init__(self, bins: Sequence[Bin], counts: Sequence[int]):
        bins = list(bins)
        counts = np.asarray(counts, dtype=np.int64)
        if len(bins) != len(counts):
            raise ValueError("bins and counts differ in length")
        if len(bins) == 0:
            raise ValueError("no data")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        _check_partition(bins)
        self.bins = tuple(bins)
        self.counts = counts
        self.n = int(counts.sum())
        if self.n < 1:
            raise ValueError("need at least one observation")

    @classmethod
    def from_observations(cls, values: Iterable[int]) -> "CountData":
        values = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
        if values.size == 0:
            raise ValueError("need at least one observation")
        if np.any(values < 0) or np.any(values != np.round(values)):
            raise ValueError("observations must be non-negative integers")
        uniq, cnt = np.unique(values.astype(np.int64), return_counts=True)
        return cls([Bin(int(v), int(v)) for v in uniq], cnt)

    @classmethod
    def from_frequencies(cls, freq: dict) -> "CountData":
        """Build from ``{bin: count}`` where keys are ints, ``Bin`` or bin strings."""
        items = []
        for key, c in freq.items():
            if isinstance(key, Bin):
                b = key
            elif isinstance(key, (int, np.integer)):
                b = Bin(int(key), int(key))
            else:
                b = parse_bin(str(key))
            items.append((b, c))
        items.sort(key=lambda t: t[0].lo)
        return cls([b for b, _ in items], [c for _, c in items])

    @property
    def is_exact(self) -> bool:
        """True when every bin is a single value (no grouping)."""
        return all(b.is_point for b in self.bins)

    @property
    def values(self) -> np.ndarray:
        """Point-bin values (only meaningful when :attr:`is_exact`)."""
        return np.array([b.lo for b in self.bins], dtype=float)

    def total(self) -> float:
        """Sum of observations; requires exact data."""
        if not self.is_exact:
            raise ValueError("sum of observations is undefined for grouped data")
        return float(np.dot(self.values, self.counts))

    def mean(self) -> float:
        return self.total() / self.n

    @property
    def max_value(self) -> int:
        last = self.bins[-1]
        return last.lo if last.hi is None else last.hi

    def all_zero(self) -> bool:
        nz = [b for b, c in zip(self.bins, self.counts) if c > 0]
        return all(b.lo == 0 and b.hi == 0 for b in nz)

    def regroup(self, bins: Sequence[Bin]) -> np.ndarray:
        """Observed counts aggregated onto a coarser partition ``bins``.

        Every data bin must fall inside exactly one target bin.
        """
        bins = list(bins)
        _check_partition(bins)
        out = np.zeros(len(bins), dtype=np.int64)
        for b, c in zip(self.bins, self.counts):
            for j, t in enumerate(bins):
                if t.contains(b):
                    out[j] += c
                    break
            else:
                if c > 0:
                    raise ValueError(f"data bin {b} is not contained in any target bin")
        return out

    def point_expansion(self) -> "CountData":
        """Replace each grouped bin by a point at its lower endpoint."""
        agg: Counter = Counter()
        for b, c in zip(self.bins, self.counts):
            agg[b.lo] += int(c)
        return CountData.from_frequencies(dict(agg))

    def rows(self) -> list[tuple[str, int]]:
        return [(str(b), int(c)) for b, c in zip(self.bins, self.counts)]

    def __eq__(self, other):
        return isinstance(other, CountData) and self.bins == other.bins and np.array_equal(self.counts, other.counts)

    def __repr__(self) -> str:
        body = ", ".join(f"{b}:{c}" for b, c in self.rows())
        return f"CountData(n={self.n}; {body})"


def default_gof_bins(data: CountData) -> list[Bin]:
    """Data bins with the last one replaced by an open tail from its lower end."""
    bins = list(data.bins)
    last = bins[-1]
    bins[-1] = Bin(last.lo, None)
    return bins


def parse_frequency_text(text: str) -> CountData:
    """Parse the ``bin,count`` format (header line required)."""
    lines = text.splitlines()
    rows, line_nos = [], []
    header_seen = False
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if [c.strip().lower() for c in line.split(",")] != ["bin", "count"]:
                raise FrequencyFileError("expected header 'bin,count'", i)
            header_seen = True
            continue
        parts = [c.strip() for c in line.split(",")]
        if len(parts) != 2:
            raise FrequencyFileError(f"expected two fields, got {len(parts)}", i)
        try:
            b = parse_bin(parts[0])
        except ValueError as exc:
            raise FrequencyFileError(str(exc), i) from None
        if not re.fullmatch(r"\d+", parts[1]):
            raise FrequencyFileError(f"count {parts[1]!r} is not a non-negative integer", i)
        rows.append((b, int(parts[1])))
        line_nos.append(i)
    if not header_seen:
        raise FrequencyFileError("empty file; expected header 'bin,count'", 1)
    if not rows:
        raise FrequencyFileError("no data rows", len(lines))
    _check_partition([b for b, _ in rows], line_nos)
    try:
        return CountData([b for b, _ in rows], [c for _, c in rows])
    except ValueError as exc:
        raise FrequencyFileError(str(exc)) from None


def read_frequency_file(path: Union[str, os.PathLike]) -> CountData:
    with open(path, encoding="utf-8") as fh:
        return parse_frequency_text(fh.read())


def format_frequency_text(data: CountData) -> str:
    buf = io.StringIO()
    buf.write("bin,count\n")
    for b, c in data.rows():
        buf.write(f"{b},{c}\n")
    return buf.getvalue()


def claims() -> CountData:
    """Automobile insurance claims per policyholder (n = 1875)."""
    return CountData.from_frequencies({0: 1563, 1: 271, 2: 32, 3: 7, 4: 2})


def ticks() -> CountData:
    """Ticks counted on 82 sheep, with the source's grouped upper cells."""
    return CountData(
        [Bin(k, k) for k in range(8)] + [Bin(8, 10), Bin(11, 14), Bin(15, None)],
        [4, 5, 11, 10, 9, 11, 3, 5, 7, 9, 8],
    )


DATASETS = {"claims": claims, "ticks": ticks}
