"""Censuses over Z: degree-4 Salem numbers up to a bound, the
square-rootable subclass, the degree-2 census, and box-sum upper bounds.

The scan region comes from the inequalities forced on Salem coefficients:
0 < -a < Q+3 and 2a < 2+b < -2a, with the exact cut lambda <= Q applied as
p(Q) >= 0.  Counting is done per a-value in closed form: for fixed a both
the lambda cut and the b-inequalities are interval bounds on b, and the
reducible (a, b) inside the interval biject with perfect squares
s^2 = a^2 - 4b + 8 of the right parity, so two integer square roots per a
suffice.  The square-rootable census is parametrized by (a, k) with
b = k^2 + 2a - 2 and 0 < k^2 < -4a, where the same reshuffle turns the
lambda cut into a lower bound on k.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .algebra import is_perfect_square
from .errors import DomainError
from .quartics import _salem_value_ab

__all__ = [
    "CensusRecord",
    "enumerate_salem_deg4",
    "count_salem_deg4",
    "enumerate_sr",
    "count_sr",
    "box_sums",
    "count_deg2",
    "CENSUS_CSV_HEADER",
    "census_csv_row",
]

# Largest Q for which the vectorized counters stay inside exact int64/float64
# range (documented bound 2^52 on squared quantities, taken with margin).
# Beyond it the pure-integer path is used; nothing ever wraps silently.
VECTOR_QMAX = 2**25

CENSUS_CSV_HEADER = "a,b,k,lambda,source"


@dataclass(frozen=True)
class CensusRecord:
    """One enumerated Salem number with provenance."""

    a: int
    b: int
    k: int | None
    lambda_approx: float
    source: str = "direct"


def census_csv_row(rec: CensusRecord) -> str:
    k = "" if rec.k is None else str(rec.k)
    return f"{rec.a},{rec.b},{k},{rec.lambda_approx:.12g},{rec.source}"


def _ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    return math.isqrt(n - 1) + 1


def _check_q(Q: int) -> None:
    if not isinstance(Q, int) or Q < 2:
        raise DomainError(f"Q must be an integer >= 2, got {Q}")


def _bands(lo: int, hi: int, n: int) -> list[tuple[int, int]]:
    """Split [lo, hi) into n contiguous bands (possibly fewer when short)."""
    n = max(1, min(n, hi - lo)) if hi > lo else 1
    step = (hi - lo + n - 1) // n
    return [(s, min(s + step, hi)) for s in range(lo, hi, step)] or [(lo, hi)]


def _run_bands(fn, args_list: list, workers: int) -> list:
    if workers <= 1 or len(args_list) <= 1:
        return [fn(args) for args in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args_list))


# --- degree-4 census --------------------------------------------------------


def _deg4_lambda_floor(Q: int, na: int) -> int:
    """Smallest b passing lambda <= Q at a = -na, i.e. p(Q) >= 0."""
    return -((Q**4 - na * Q**3 - na * Q + 1) // (Q * Q))


def _deg4_count_band(args: tuple[int, int, int]) -> int:
    Q, lo, hi = args
    total = 0
    for na in range(lo, hi):
        b_hi = 2 * na - 3
        b_lo = max(-2 * na - 1, _deg4_lambda_floor(Q, na))
        if b_lo > b_hi:
            continue
        total += b_hi - b_lo + 1
        # reducible members <-> squares s^2 in [disc(b_hi), disc(b_lo)],
        # s of the same parity as a
        dmin = na * na - 4 * b_hi + 8
        dmax = na * na - 4 * b_lo + 8
        s_lo = _ceil_sqrt(dmin)
        s_hi = math.isqrt(dmax)
        if s_lo % 2 != na % 2:
            s_lo += 1
        if s_lo <= s_hi:
            total -= (s_hi - s_lo) // 2 + 1
    return total


def count_salem_deg4(Q: int, workers: int = 1) -> int:
    """Number of degree-4 Salem numbers <= Q."""
    _check_q(Q)
    bands = _bands(1, Q + 3, workers)
    return sum(_run_bands(_deg4_count_band, [(Q, lo, hi) for lo, hi in bands], workers))


def _deg4_enum_band(args: tuple[int, int, int]) -> list[CensusRecord]:
    return list(_iter_deg4(*args))


def _iter_deg4(Q: int, lo: int, hi: int) -> Iterator[CensusRecord]:
    for na in range(lo, hi):
        a = -na
        b_lo = max(-2 * na - 1, _deg4_lambda_floor(Q, na))
        for b in range(b_lo, 2 * na - 2):
            disc = na * na - 4 * b + 8
            r = math.isqrt(disc)
            if r * r == disc:
                continue
            k = is_perfect_square(2 + b + 2 * na)
            yield CensusRecord(a, b, k, _salem_value_ab(a, b), "direct")


def enumerate_salem_deg4(Q: int, workers: int = 1) -> Iterator[CensusRecord]:
    """All degree-4 Salem records with lambda <= Q, ordered by descending a
    then ascending b.  Streams with O(1) memory when workers == 1."""
    _check_q(Q)
    if workers <= 1:
        yield from _iter_deg4(Q, 1, Q + 3)
        return
    bands = _bands(1, Q + 3, workers)
    for chunk in _run_bands(_deg4_enum_band, [(Q, lo, hi) for lo, hi in bands], workers):
        yield from chunk


# --- square-rootable census -------------------------------------------------


def _sr_k_floor(Q: int, na: int) -> int:
    """Smallest k >= 1 passing lambda <= Q at a = -na, b = k^2 + 2a - 2.

    p(Q) >= 0 is k^2 >= m with m = ceil(N / Q^2) for
    N = -Q^4 + na Q^3 + (2na + 2) Q^2 + na Q - 1.
    """
    Q2 = Q * Q
    m = (-Q2 + na * Q + 2 * na + 2) + (na * Q - 1 + Q2 - 1) // Q2
    if m <= 1:
        return 1
    return math.isqrt(m - 1) + 1


def _iter_sr_tuples(Q: int, lo: int, hi: int) -> Iterator[tuple[int, int, int]]:
    """(a, b, k) stream of the square-rootable census, no record overhead."""
    for na in range(lo, hi):
        kmax = math.isqrt(4 * na - 1)
        klo = _sr_k_floor(Q, na)
        if klo > kmax:
            continue
        A2 = (na + 4) ** 2
        a = -na
        for k in range(klo, kmax + 1):
            disc = A2 - 4 * k * k  # = a^2 - 4b + 8 at b = k^2 + 2a - 2
            r = math.isqrt(disc)
            if r * r == disc:
                continue
            yield a, k * k - 2 * na - 2, k


def _sr_count_band_int(args: tuple[int, int, int]) -> int:
    Q, lo, hi = args
    total = 0
    for na in range(lo, hi):
        kmax = math.isqrt(4 * na - 1)
        klo = _sr_k_floor(Q, na)
        if klo > kmax:
            continue
        A2 = (na + 4) ** 2
        for k in range(klo, kmax + 1):
            disc = A2 - 4 * k * k
            r = math.isqrt(disc)
            if r * r != disc:
                total += 1
    return total


def _isqrt_i64(x: np.ndarray) -> np.ndarray:
    """Exact floor square root of a non-negative int64 array below 2^52."""
    r = np.sqrt(x.astype(np.float64)).astype(np.int64)
    r = np.where((r + 1) * (r + 1) <= x, r + 1, r)
    return np.where(r * r > x, r - 1, r)


def _sr_count_band_vec(args: tuple[int, int, int]) -> int:
    """numpy version of _sr_count_band_int; identical result, used when the
    squared quantities provably fit int64/float64 exactness."""
    Q, lo, hi = args
    Q2 = Q * Q
    total = 0
    # keep ~2M flat candidates per block (each a-value carries ~2 sqrt(a) k's)
    block = max(64, (1 << 21) // max(1, 2 * math.isqrt(hi)))
    for start in range(lo, hi, block):
        na = np.arange(start, min(start + block, hi), dtype=np.int64)
        kmax = _isqrt_i64(4 * na - 1)
        m = (-Q2 + na * Q + 2 * na + 2) + (na * Q - 1 + Q2 - 1) // Q2
        klo = np.where(m <= 1, 1, _isqrt_i64(np.maximum(m, 1) - 1) + 1)
        length = np.maximum(kmax - klo + 1, 0)
        ncand = int(length.sum())
        if ncand == 0:
            continue
        take = length > 0
        na_t, klo_t, len_t = na[take], klo[take], length[take]
        offsets = np.concatenate(([0], np.cumsum(len_t)[:-1]))
        k = np.arange(ncand, dtype=np.int64) - np.repeat(offsets, len_t) + np.repeat(klo_t, len_t)
        na_rep = np.repeat(na_t, len_t)
        disc = (na_rep + 4) ** 2 - 4 * k * k
        r = _isqrt_i64(disc)
        total += ncand - int(np.count_nonzero(r * r == disc))
    return total


def count_sr(Q: int, workers: int = 1) -> int:
    """Number of degree-4 Salem numbers <= Q square-rootable over Q."""
    _check_q(Q)
    band_fn = _sr_count_band_vec if Q <= VECTOR_QMAX else _sr_count_band_int
    bands = _bands(1, Q + 3, workers)
    return sum(_run_bands(band_fn, [(Q, lo, hi) for lo, hi in bands], workers))


def _sr_enum_band(args: tuple[int, int, int]) -> list[CensusRecord]:
    Q, lo, hi = args
    return [
        CensusRecord(a, b, k, _salem_value_ab(a, b), "direct")
        for a, b, k in _iter_sr_tuples(Q, lo, hi)
    ]


def enumerate_sr(Q: int, workers: int = 1) -> Iterator[CensusRecord]:
    """Square-rootable census records with lambda <= Q, same order as
    enumerate_salem_deg4."""
    _check_q(Q)
    if workers <= 1:
        for a, b, k in _iter_sr_tuples(Q, 1, Q + 3):
            yield CensusRecord(a, b, k, _salem_value_ab(a, b), "direct")
        return
    bands = _bands(1, Q + 3, workers)
    for chunk in _run_bands(_sr_enum_band, [(Q, lo, hi) for lo, hi in bands], workers):
        yield from chunk


# --- closed box sums and the degree-2 census --------------------------------


def box_sums(Q: int) -> tuple[int, int]:
    """(S_sr, S_deg4): sizes of the two scan boxes before the exact lambda
    cut and the reducibility filter.

    S_sr = sum_{j=1}^{Q+2} (ceil(sqrt(4j)) - 1) counts the (a, k) box and
    S_deg4 = sum_{j=1}^{Q+2} (4j - 1) = (Q+2)(2Q+5) counts the (a, b) box.
    Both over-count the censuses; useful as estimates and sanity bounds.
    """
    if Q < 0:
        raise DomainError(f"Q must be >= 0, got {Q}")
    s_sr = sum(_ceil_sqrt(4 * j) - 1 for j in range(1, Q + 3))
    s_deg4 = sum(4 * j - 1 for j in range(1, Q + 3))
    return s_sr, s_deg4


def count_deg2(Q: int) -> int:
    """Number of degree-2 Salem numbers <= Q, by enumeration of x^2 + ax + 1
    over 0 < -a < Q+1 (comes out to Q - 2)."""
    if not isinstance(Q, int) or Q < 3:
        raise DomainError(f"Q must be an integer >= 3, got {Q}")
    Q2 = Q * Q
    count = 0
    for na in range(1, Q + 1):
        # na = 1 has no real roots, na = 2 gives the root 1 exactly; for
        # na >= 3 the discriminant na^2 - 4 sits strictly between
        # (na - 1)^2 and na^2, so the quadratic is always irreducible.
        if na < 3:
            continue
        if Q2 - na * Q + 1 >= 0:  # lambda <= Q exactly
            count += 1
    return count
