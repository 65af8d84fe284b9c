"""Closed-form counting constants, power-law fits of census series, and
the mean-multiplicity lower-bound report for even-dimensional orbifolds.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, DomainError

__all__ = [
    "FitResult",
    "MultiplicityRow",
    "omega",
    "power_fit",
    "multiplicity_report",
    "MULTIPLICITY_CSV_HEADER",
    "multiplicity_csv_row",
]

log = logging.getLogger(__name__)

MULTIPLICITY_CSV_HEADER = "ell,geodesic_count,salem_bound,mean_mult_lower"


@dataclass(frozen=True)
class FitResult:
    """Fitted count ~ constant * Q^exponent; residual is the RMS of the
    log-space residuals over the points actually used."""

    constant: float
    exponent: float
    residual: float
    points_used: int


@dataclass(frozen=True)
class MultiplicityRow:
    ell: float
    geodesic_count: float
    salem_bound: float
    mean_mult_lower: float


def omega(m: int) -> Fraction:
    """Leading constant of the degree-2(m+1) Salem count:
    2^(m(m+1))/(m+1) * prod_{k=0}^{m-1} k!^2 / (2k+1)!, exact."""
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")
    val = Fraction(2 ** (m * (m + 1)), m + 1)
    for k in range(m):
        val *= Fraction(math.factorial(k) ** 2, math.factorial(2 * k + 1))
    return val


def _ols_loglog(points: list[tuple[float, float]]) -> tuple[float, float, float]:
    xs = [math.log(q) for q, _ in points]
    ys = [math.log(c) for _, c in points]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    rms = math.sqrt(sum((y - intercept - slope * x) ** 2 for x, y in zip(xs, ys)) / n)
    return math.exp(intercept), slope, rms


def power_fit(points, residual_threshold: float = 0.05) -> FitResult:
    """Least squares of log(count) against log(Q).

    While the RMS residual exceeds ``residual_threshold`` and more than
    three points remain, the smallest-Q point is dropped (lower-order terms
    contaminate the small side); every drop is logged.  Deterministic.
    """
    pts = sorted((float(q), float(c)) for q, c in points)
    if len(pts) < 3:
        raise DomainError(f"need at least 3 points, got {len(pts)}")
    if any(q <= 0 or c <= 0 for q, c in pts):
        raise DomainError("all points must be positive")
    while True:
        constant, exponent, rms = _ols_loglog(pts)
        if rms <= residual_threshold or len(pts) <= 3:
            return FitResult(constant, exponent, rms, len(pts))
        dropped = pts.pop(0)
        log.info("power_fit: residual %.4g above %.4g, dropping Q=%g", rms,
                 residual_threshold, dropped[0])


def multiplicity_report(n: int, ell_max: float, step: float) -> list[MultiplicityRow]:
    """Mean-multiplicity lower bounds in the length spectrum of a
    non-compact arithmetic orbifold of even dimension n >= 4.

    Closed geodesics of length <= ell number ~ e^((n-1) ell) / ((n-1) ell),
    while each corresponds to a Salem number e^ell of even degree <= n;
    those are bounded by sum_{m=1}^{n/2-1} omega(m) e^((m+1) ell) plus the
    degree-2 count e^ell - 2.  The ratio is the reported lower bound (the
    bound's constant instantiates the leading count constants; it is one
    admissible choice, not canonical).
    """
    if not isinstance(n, int) or n < 4 or n % 2:
        raise DomainError(f"n must be an even integer >= 4, got {n}")
    if not (1.0 <= step <= ell_max):
        raise DomainError(f"need 1 <= step <= ell_max, got step={step}, ell_max={ell_max}")
    consts = [float(omega(m)) for m in range(1, n // 2)]
    rows = []
    ell = step
    try:
        while ell <= ell_max * (1 + 1e-12):
            geod = math.exp((n - 1) * ell) / ((n - 1) * ell)
            bound = sum(c * math.exp((m + 2) * ell) for m, c in enumerate(consts))
            bound += math.exp(ell) - 2.0
            rows.append(MultiplicityRow(ell, geod, bound, geod / bound))
            ell += step
    except OverflowError as exc:
        raise CapacityError(f"exp overflow at ell={ell:g} (n={n})") from exc
    return rows


def multiplicity_csv_row(row: MultiplicityRow) -> str:
    return (
        f"{row.ell:.5e},{row.geodesic_count:.5e},"
        f"{row.salem_bound:.5e},{row.mean_mult_lower:.5e}"
    )
