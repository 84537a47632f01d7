"""Binned, polynomially detrended covariance and the q-th order fluctuation
function F_q(s), for one series (self-cross) or a pair.

The series length N is split into N_s = floor(N/s) non-overlapping bins of s
samples scanned forward from the start, then another N_s scanned backward
from the end, so the 2*N_s bins cover the tail remainder.  In each bin a
least-squares polynomial trend is removed from both profiles and the mean
product of the residuals is the per-bin covariance F(s, v).  The moment
average of |F(s, v)|^(q/2) over all bins, raised to 1/q, is F_q(s).

Two conventions worth knowing about:

* Cross-covariances can be negative, and a negative base under a non-integer
  power q/2 is undefined.  We take |F(s, v)|^(q/2), the standard choice for
  detrended cross-correlation work.  This changes results when residuals
  anti-correlate, so it is stated here rather than buried.
* q = 0 is rejected (the 1/q exponent blows up); the logarithmic-average
  variant is deliberately not offered.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateSignalError,
    InvalidInputError,
    InvalidScaleError,
    ScaleGridWarning,
    SeriesTooShortError,
    UnsupportedMomentError,
)
from .series import Profile, as_series, profile

#: Symmetric default moment grid; q = 2 is required downstream and always present.
DEFAULT_Q_VALUES = (-5.0, -4.0, -3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0)

DEFAULT_MIN_SCALE = 16


@dataclass(frozen=True)
class DetrendConfig:
    """Polynomial degree for the local trend fit (1..3)."""

    order: int = 1

    def __post_init__(self):
        if not 1 <= int(self.order) <= 3:
            raise InvalidInputError(f"detrend order must be in 1..3, got {self.order}")
        object.__setattr__(self, "order", int(self.order))


@dataclass(frozen=True)
class ScaleGrid:
    """Strictly increasing integer window sizes."""

    scales: tuple[int, ...]

    def __post_init__(self):
        scales = tuple(int(s) for s in self.scales)
        if not scales:
            raise InvalidInputError("scale grid is empty")
        if any(b <= a for a, b in zip(scales, scales[1:])):
            raise InvalidInputError(f"scales must be strictly increasing, got {scales}")
        object.__setattr__(self, "scales", scales)

    def __iter__(self):
        return iter(self.scales)

    def __len__(self) -> int:
        return len(self.scales)

    def validate_for(self, n: int, order: int) -> None:
        """Check every scale admits a fit of ``order`` and >= 4 full bins in ``n``."""
        lo, hi = self.scales[0], self.scales[-1]
        if lo < order + 2:
            raise InvalidScaleError(
                f"scale {lo} cannot support an order-{order} fit (needs >= {order + 2})"
            )
        if hi > n // 4:
            raise InvalidScaleError(
                f"scale {hi} exceeds N/4 = {n // 4} (need >= 4 non-overlapping bins)"
            )


def default_scale_grid(
    n: int,
    cfg: DetrendConfig = DetrendConfig(),
    n_scales: int = 20,
    s_min: int | None = None,
    s_max: int | None = None,
) -> ScaleGrid:
    """Approximately log-spaced integer scales from max(16, order+2) to N/4.

    Duplicates from integer rounding are dropped.  A single-scale grid is
    returned with a :class:`ScaleGridWarning` (downstream regression will
    reject it); no admissible scale at all raises.
    """
    if s_min is None:
        s_min = max(DEFAULT_MIN_SCALE, cfg.order + 2)
    if s_max is None:
        s_max = n // 4
    if s_min < cfg.order + 2:
        raise InvalidScaleError(
            f"s_min {s_min} cannot support an order-{cfg.order} fit"
        )
    if s_max > n // 4:
        raise InvalidScaleError(f"s_max {s_max} exceeds N/4 = {n // 4}")
    if s_max < s_min:
        raise SeriesTooShortError(
            f"N = {n} admits no scale in [{s_min}, N/4 = {n // 4}]"
        )
    raw = np.logspace(np.log10(s_min), np.log10(s_max), num=int(n_scales))
    scales = np.unique(np.rint(raw).astype(int))
    grid = ScaleGrid(tuple(int(s) for s in scales))
    if len(grid) < 2:
        warnings.warn(
            f"only {len(grid)} scale(s) available for N = {n}; "
            "scaling fits need at least 4",
            ScaleGridWarning,
            stacklevel=2,
        )
    return grid


@dataclass(frozen=True)
class FluctuationTable:
    """F_q(s) rows over a (scale, moment) grid.

    Rows are ordered by (s, q); each (s, q) pair appears exactly once.
    """

    s: np.ndarray
    q: np.ndarray
    F: np.ndarray
    bins_used: np.ndarray
    x_label: str = ""
    y_label: str = ""
    detrend_order: int = 1

    def __post_init__(self):
        s = np.asarray(self.s, dtype=np.int64)
        q = np.asarray(self.q, dtype=np.float64)
        F = np.asarray(self.F, dtype=np.float64)
        bins = np.asarray(self.bins_used, dtype=np.int64)
        if not (s.shape == q.shape == F.shape == bins.shape):
            raise InvalidInputError("table columns must have equal length")
        pairs = set(zip(s.tolist(), q.tolist()))
        if len(pairs) != s.size:
            raise InvalidInputError("duplicate (s, q) rows in fluctuation table")
        for name, col in (("s", s), ("q", q), ("F", F), ("bins_used", bins)):
            col.setflags(write=False)
            object.__setattr__(self, name, col)

    def __len__(self) -> int:
        return self.s.size

    @property
    def scales(self) -> np.ndarray:
        return np.unique(self.s)

    @property
    def q_values(self) -> np.ndarray:
        return np.unique(self.q)

    def column(self, q: float) -> tuple[np.ndarray, np.ndarray]:
        """(scales, F values) for one moment order, sorted by scale."""
        mask = self.q == q
        if not mask.any():
            raise InvalidInputError(f"q = {q} not present in table")
        order = np.argsort(self.s[mask])
        return self.s[mask][order], self.F[mask][order]

    def to_csv(self, path_or_buf) -> None:
        """Write ``s,q,F,bins_used`` rows with round-trip-safe precision."""
        buf = io.StringIO()
        buf.write("s,q,F,bins_used\n")
        for s, q, F, b in zip(self.s, self.q, self.F, self.bins_used):
            buf.write(f"{s},{q:.17g},{F:.17g},{b}\n")
        text = buf.getvalue()
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            Path(path_or_buf).write_text(text)


def _detrend_residuals(segments: np.ndarray, order: int) -> np.ndarray:
    """Residuals of per-row least-squares polynomial fits.

    The projection onto polynomials of degree <= order is computed from a QR
    factorization of a Vandermonde basis on abscissae normalized to [-1, 1];
    same column space as raw 1..s abscissae, but conditioned well enough for
    order 3 at large s (normal equations are not).
    """
    s = segments.shape[1]
    t = np.linspace(-1.0, 1.0, s)
    V = np.vander(t, order + 1, increasing=True)
    Q, _ = np.linalg.qr(V)
    return segments - (segments @ Q) @ Q.T


def _bin_matrix(values: np.ndarray, s: int) -> np.ndarray:
    """Stack the 2*N_s forward and backward bins as rows of shape (2*N_s, s)."""
    n = values.size
    ns = n // s
    fwd = values[: ns * s].reshape(ns, s)
    bwd = values[n - ns * s :].reshape(ns, s)[::-1]
    return np.concatenate([fwd, bwd], axis=0)


def detrended_covariances(
    X: Profile, Y: Profile, s: int, cfg: DetrendConfig = DetrendConfig()
) -> np.ndarray:
    """All 2*N_s per-bin detrended covariances F(s, v) at one scale.

    For X = Y every entry is a detrended variance and is >= 0.
    """
    xv, yv = X.values, Y.values
    if xv.size != yv.size:
        raise InvalidInputError(
            f"profiles must have equal length, got {xv.size} and {yv.size}"
        )
    n = xv.size
    if s > n:
        raise InvalidScaleError(f"scale {s} exceeds series length {n}")
    if s < cfg.order + 2:
        raise InvalidScaleError(
            f"scale {s} cannot support an order-{cfg.order} fit (needs >= {cfg.order + 2})"
        )
    rx = _detrend_residuals(_bin_matrix(xv, s), cfg.order)
    if yv is xv:
        ry = rx
    else:
        ry = _detrend_residuals(_bin_matrix(yv, s), cfg.order)
    return (rx * ry).mean(axis=1)


def bin_covariance(
    X: Profile, Y: Profile, s: int, v: int, cfg: DetrendConfig = DetrendConfig()
) -> float:
    """Detrended covariance of bin ``v`` (1-based).

    Bins 1..N_s index forward from the start; bins N_s+1..2*N_s index
    backward from the end, bin N_s+1 covering the last s samples.
    """
    covs = detrended_covariances(X, Y, s, cfg)
    if not 1 <= v <= covs.size:
        raise InvalidInputError(f"bin index {v} outside 1..{covs.size}")
    return float(covs[v - 1])


def _moment_average(covs: np.ndarray, q: float) -> float:
    """(mean |F(s,v)|^(q/2))^(1/q) over the bins."""
    if q == 0:
        raise UnsupportedMomentError("q = 0 is not supported (1/q exponent blows up)")
    mags = np.abs(covs)
    if q < 0 and not mags.any():
        raise DegenerateSignalError(
            "all per-bin fluctuations are zero; negative-q moment undefined"
        )
    with np.errstate(divide="ignore", over="ignore"):
        powered = mags ** (q / 2.0)
        return float(powered.mean() ** (1.0 / q))


def fq(
    X: Profile, Y: Profile, s: int, q: float, cfg: DetrendConfig = DetrendConfig()
) -> float:
    """q-th order fluctuation F_q(s) at a single scale."""
    return _moment_average(detrended_covariances(X, Y, s, cfg), q)


def _checked_q_values(q_values) -> tuple[float, ...]:
    out: list[float] = []
    for q in q_values:
        q = float(q)
        if q == 0:
            raise UnsupportedMomentError("q = 0 is not supported (1/q exponent blows up)")
        if q not in out:
            out.append(q)
    if not out:
        raise InvalidInputError("q list is empty")
    return tuple(out)


def fluctuation_table(
    x,
    y=None,
    grid: ScaleGrid | None = None,
    q_values=DEFAULT_Q_VALUES,
    cfg: DetrendConfig = DetrendConfig(),
    n_scales: int = 20,
) -> FluctuationTable:
    """F_q(s) over grid x q_values for a pair of equal-length series.

    Pass ``y=None`` (or x itself) for the single-series analysis; the
    self-cross covariance reduces to the detrended variance bit-for-bit, so
    there is exactly one code path.  Per-bin covariances are computed once
    per scale and reused across all q.
    """
    x = as_series(x)
    y = x if y is None else as_series(y)
    if len(x) != len(y):
        raise InvalidInputError(
            f"series lengths differ ({len(x)} vs {len(y)}); truncate_pair them first"
        )
    q_values = _checked_q_values(q_values)
    X = profile(x)
    Y = X if y is x else profile(y)
    if grid is None:
        grid = default_scale_grid(len(x), cfg, n_scales=n_scales)
    grid.validate_for(len(x), cfg.order)

    s_col: list[int] = []
    q_col: list[float] = []
    f_col: list[float] = []
    b_col: list[int] = []
    for s in grid.scales:
        covs = detrended_covariances(X, Y, s, cfg)
        for q in sorted(q_values):
            s_col.append(s)
            q_col.append(q)
            f_col.append(_moment_average(covs, q))
            b_col.append(covs.size)
    return FluctuationTable(
        s=np.asarray(s_col),
        q=np.asarray(q_col),
        F=np.asarray(f_col),
        bins_used=np.asarray(b_col),
        x_label=x.label,
        y_label=y.label,
        detrend_order=cfg.order,
    )
