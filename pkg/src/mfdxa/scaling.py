"""Scaling-exponent fits and the derived correlation exponents.

When a series pair is long-range power correlated, F_q(s) grows as a power
of s; the slope of ln F_q(s) against ln s is the scaling exponent for that
q (the generalized Hurst exponent h(q) in the single-series case).  The
correlation decay exponent follows from the q = 2 exponent:

    gamma = 2 - 2 * h(2)         (single series)
    gamma_x = 2 - 2 * lambda(2)  (pair)

gamma_x is 1 for uncorrelated pairs; lower means more strongly correlated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import (
    DegenerateSignalError,
    InsufficientMomentsError,
    InsufficientScalesError,
    InvalidInputError,
)
from .fluctuation import (
    DEFAULT_Q_VALUES,
    DetrendConfig,
    FluctuationTable,
    ScaleGrid,
    fluctuation_table,
)
from .series import as_series

#: Fits with r^2 below this attach a warning to the result (never an error).
R_SQUARED_WARN = 0.95

MIN_FIT_SCALES = 4


@dataclass(frozen=True)
class ExponentFit:
    """Log-log slope for one moment order."""

    value: float
    r_squared: float
    n_scales: int


@dataclass
class ScalingResult:
    """Fitted exponents per q plus the derived correlation exponent.

    ``kind`` is "auto" for a single-series analysis and "cross" for a pair;
    ``gamma`` is always 2 - 2 * exponents[2].value.
    """

    exponents: dict[float, ExponentFit]
    kind: str
    gamma: float
    spectrum_width: float | None = None
    x_label: str = ""
    y_label: str = ""
    fit_warnings: tuple[str, ...] = ()

    @property
    def q_values(self) -> list[float]:
        return sorted(self.exponents)

    def exponent(self, q: float) -> float:
        return self.exponents[float(q)].value

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "gamma": self.gamma,
            "spectrum_width": self.spectrum_width,
            "exponents": [
                {
                    "q": q,
                    "value": self.exponents[q].value,
                    "r2": self.exponents[q].r_squared,
                    "n_scales": self.exponents[q].n_scales,
                }
                for q in self.q_values
            ],
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("indent", 2)
        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kwargs)


def fit_scaling(
    table: FluctuationTable,
    q: float,
    fit_range: tuple[float, float] | None = None,
) -> ExponentFit:
    """Ordinary least-squares slope of ln F_q(s) against ln s.

    ``fit_range`` restricts the fit to scales s_lo <= s <= s_hi (inclusive);
    the default uses every scale in the table.
    """
    scales, F = table.column(float(q))
    if fit_range is not None:
        s_lo, s_hi = fit_range
        keep = (scales >= s_lo) & (scales <= s_hi)
        scales, F = scales[keep], F[keep]
    if scales.size < MIN_FIT_SCALES:
        raise InsufficientScalesError(
            f"{scales.size} scale(s) in range for q = {q}; need >= {MIN_FIT_SCALES}"
        )
    if np.any(F == 0) or not np.all(np.isfinite(F)):
        raise DegenerateSignalError(
            f"fluctuation values for q = {q} contain zeros or non-finite entries; "
            "log-log fit undefined"
        )
    res = stats.linregress(np.log(scales), np.log(F))
    return ExponentFit(
        value=float(res.slope),
        r_squared=float(res.rvalue**2),
        n_scales=int(scales.size),
    )


def spectrum_from_table(
    table: FluctuationTable,
    kind: str,
    fit_range: tuple[float, float] | None = None,
) -> ScalingResult:
    """Fit every q present in the table and derive gamma from q = 2."""
    qs = [float(q) for q in table.q_values]
    if 2.0 not in qs:
        raise InvalidInputError("table lacks q = 2; gamma is undefined without it")
    exponents: dict[float, ExponentFit] = {}
    notes: list[str] = []
    for q in qs:
        fit = fit_scaling(table, q, fit_range)
        exponents[q] = fit
        if fit.r_squared < R_SQUARED_WARN:
            notes.append(f"q={q:g}: r_squared={fit.r_squared:.4f} below {R_SQUARED_WARN}")
    result = ScalingResult(
        exponents=exponents,
        kind=kind,
        gamma=2.0 - 2.0 * exponents[2.0].value,
        x_label=table.x_label,
        y_label=table.y_label,
        fit_warnings=tuple(notes),
    )
    if len(exponents) >= 3:
        singularity_spectrum(result)
    return result


def _with_q2(q_values) -> tuple[float, ...]:
    qs = tuple(float(q) for q in q_values)
    return qs if 2.0 in qs else qs + (2.0,)


def hurst_spectrum(
    x,
    grid: ScaleGrid | None = None,
    q_values=DEFAULT_Q_VALUES,
    cfg: DetrendConfig = DetrendConfig(),
    fit_range: tuple[float, float] | None = None,
    n_scales: int = 20,
) -> ScalingResult:
    """Generalized Hurst exponents h(q) of one series; gamma = 2 - 2*h(2).

    q = 2 is appended when missing since gamma requires it.
    """
    x = as_series(x)
    table = fluctuation_table(
        x, x, grid=grid, q_values=_with_q2(q_values), cfg=cfg, n_scales=n_scales
    )
    return spectrum_from_table(table, kind="auto", fit_range=fit_range)


def lambda_spectrum(
    x,
    y,
    grid: ScaleGrid | None = None,
    q_values=DEFAULT_Q_VALUES,
    cfg: DetrendConfig = DetrendConfig(),
    fit_range: tuple[float, float] | None = None,
    n_scales: int = 20,
) -> ScalingResult:
    """Cross scaling exponents lambda(q) of a pair; gamma_x = 2 - 2*lambda(2)."""
    x = as_series(x)
    y = as_series(y)
    table = fluctuation_table(
        x, y, grid=grid, q_values=_with_q2(q_values), cfg=cfg, n_scales=n_scales
    )
    return spectrum_from_table(table, kind="cross", fit_range=fit_range)


def zhou_check(hx2: float, hy2: float, lambda2: float) -> float:
    """Signed deviation of lambda(2) from the mean of the two h(2) values.

    For pairs built from binomial cascades the deviation is expected to be
    small; the caller decides what tolerance to apply.
    """
    return float(lambda2) - (float(hx2) + float(hy2)) / 2.0


def singularity_spectrum(
    result: ScalingResult,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Singularity strengths, their dimensions, and the spectrum width.

    Standard Legendre construction: tau(q) = q*h(q) - 1, alpha = dtau/dq via
    central finite differences on the (possibly non-uniform) q grid with
    one-sided stencils at the ends, f(alpha) = q*alpha - tau, and
    width = max(alpha) - min(alpha).  Populates ``result.spectrum_width``.
    """
    qs = np.asarray(result.q_values, dtype=float)
    if qs.size < 3:
        raise InsufficientMomentsError(
            f"singularity spectrum needs >= 3 moment orders, got {qs.size}"
        )
    h = np.asarray([result.exponents[q].value for q in qs])
    tau = qs * h - 1.0
    alpha = np.gradient(tau, qs)
    f_alpha = qs * alpha - tau
    width = float(alpha.max() - alpha.min())
    result.spectrum_width = width
    return alpha, f_alpha, width
