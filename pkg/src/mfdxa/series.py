"""Signal and profile types plus the elementary transforms built on them.

A :class:`Series` is a finite, all-finite 1-D sample sequence; a
:class:`Profile` is the cumulative sum of its mean deviations.  Everything
downstream (fluctuation functions, scaling fits, matching) consumes these
two types.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import DegenerateSignalError, InvalidInputError, SeriesTooShortError


def _as_readonly_f64(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Series:
    """A real-valued sample sequence with an optional sample rate.

    Invariants enforced at construction: length >= 2, every sample finite.
    Samples are stored as a read-only float64 array so instances are safe
    to share across workers.
    """

    samples: np.ndarray
    sample_rate_hz: float | None = None
    label: str = ""

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1:
            raise InvalidInputError(f"series must be 1-D, got shape {arr.shape}")
        if arr.size < 2:
            raise InvalidInputError(f"series needs at least 2 samples, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("series contains NaN or infinite samples")
        if self.sample_rate_hz is not None and not self.sample_rate_hz > 0:
            raise InvalidInputError(f"sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "samples", _as_readonly_f64(arr))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_seconds(self) -> float | None:
        if self.sample_rate_hz is None:
            return None
        return self.samples.size / self.sample_rate_hz

    def with_label(self, label: str) -> "Series":
        return replace(self, label=label)


@dataclass(frozen=True, eq=False)
class Profile:
    """Cumulative sum of mean deviations of a series.

    Same length as the source; the final value telescopes to zero up to
    float rounding.
    """

    values: np.ndarray
    source_label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly_f64(self.values))

    def __len__(self) -> int:
        return self.values.size


def as_series(data, sample_rate_hz: float | None = None, label: str = "") -> Series:
    """Coerce array-likes to :class:`Series`; pass Series through unchanged."""
    if isinstance(data, Series):
        return data
    return Series(np.asarray(data, dtype=np.float64), sample_rate_hz=sample_rate_hz, label=label)


def mean(s) -> float:
    """Arithmetic mean of the samples."""
    s = as_series(s)
    return float(s.samples.mean())


def profile(s) -> Profile:
    """Cumulative sum of deviations from the mean.

    Raises:
        DegenerateSignalError: for a constant series; its profile is
            identically zero and every downstream log-log fit is undefined.
    """
    s = as_series(s)
    x = s.samples
    if np.all(x == x[0]):
        raise DegenerateSignalError(
            f"series {s.label!r} is constant; profile would be identically zero"
        )
    return Profile(np.cumsum(x - x.mean()), source_label=s.label)


def truncate_pair(x, y, min_scale: int = 16) -> tuple[Series, Series]:
    """Cut both series to the shorter length, keeping the heads.

    Heads (not tails) carry the segment alignment semantics, so samples are
    always taken from the start of each input.

    Raises:
        SeriesTooShortError: if the common length cannot hold two
            non-overlapping windows of ``min_scale`` samples.
    """
    x = as_series(x)
    y = as_series(y)
    n = min(len(x), len(y))
    if n < 2 * min_scale:
        raise SeriesTooShortError(
            f"common length {n} is below 2 x min scale ({2 * min_scale})"
        )
    xt = x if len(x) == n else replace(x, samples=x.samples[:n])
    yt = y if len(y) == n else replace(y, samples=y.samples[:n])
    return xt, yt


def read_series_csv(path, sample_rate_hz: float | None = None) -> Series:
    """Read a single-column numeric CSV (header row optional)."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    values = []
    for i, line in enumerate(lines):
        text = line.strip().lstrip("﻿")
        if not text:
            continue
        try:
            values.append(float(text))
        except ValueError:
            if i == 0:  # header row
                continue
            raise InvalidInputError(f"{path}:{i + 1}: not a number: {text!r}")
    if len(values) < 2:
        raise InvalidInputError(f"{path}: needs at least 2 numeric rows")
    return Series(np.asarray(values), sample_rate_hz=sample_rate_hz, label=path.stem)


def write_series_csv(path, s: Series, header: str = "value") -> None:
    """Write samples as a single-column CSV with round-trip-safe precision."""
    s = as_series(s)
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for v in s.samples:
            fh.write(f"{v:.17g}\n")
