"""Degree-4 Salem numbers generated by the length spectrum of
PSL(2, o_K) for an imaginary quadratic field K = Q(sqrt(-D)).

Every t in o_K is the trace of a group element (companion matrix), with
eigenvalues mu, 1/mu satisfying mu + 1/mu = t.  For non-real t the element
is loxodromic and s = mu * conj(mu) > 1 is the exponential of its real
translation length.  The symmetric functions

    y + y' = t * conj(t) = N(t)
    y * y' = Tr(t^2) - 4          (y' = mu/conj(mu) + conj(mu)/mu)

make y = s + 1/s a root of z^2 - N(t) z + (Tr(t^2) - 4), so s has the
palindromic quartic with coefficients A = -N(t), B = Tr(t^2) - 2.  The
square lambda = s^2 is then a degree-4 Salem number square-rootable over Q
whenever y is irrational; its quartic is lift_half_power((A, B)).

Rejections: real traces (v = 0) and the reducible cases Re(t) = 0 or
N^2 - 4 Tr(t^2) + 16 a perfect square all force deg(lambda) <= 2 and are
excluded from the census (they only contribute lower-order terms).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .algebra import QuadIntK, is_perfect_square, is_square_free
from .census import CensusRecord
from .errors import ContractError, DomainError
from .quartics import SalemQuartic, lift_half_power, salem_value

__all__ = [
    "BianchiSalem",
    "BianchiCensus",
    "salem_from_trace",
    "bianchi_census",
    "marklof_constant",
    "BIANCHI_CSV_HEADER",
    "bianchi_csv_row",
    "bianchi_json_obj",
]

WITNESS_CAP = 16

BIANCHI_CSV_HEADER = "A,B,a_lift,b_lift,k,lambda,num_witness_traces"


@dataclass
class BianchiSalem:
    """Quartic x^4 + A x^3 + B x^2 + A x + 1 of lambda^(1/2), plus the
    trace coordinates that produced it (capped at WITNESS_CAP)."""

    A: int
    B: int
    witnesses: list[tuple[int, int]] = field(default_factory=list)

    def lift(self) -> SalemQuartic:
        return lift_half_power(SalemQuartic(self.A, self.B))


@dataclass
class BianchiCensus:
    """Deduplicated census plus the diagnostic tallies of rejected traces."""

    D: int
    qmax: int
    members: list[BianchiSalem]
    traces_scanned: int = 0
    excluded_real: int = 0
    excluded_imag_axis: int = 0
    excluded_reducible: int = 0
    excluded_over_q: int = 0

    @property
    def count(self) -> int:
        return len(self.members)

    def to_census_records(self) -> list[CensusRecord]:
        out = []
        for m in self.members:
            p = m.lift()
            out.append(
                CensusRecord(p.a, p.b, abs(m.B - 2), salem_value(p), f"bianchi({self.D})")
            )
        return out


def _check_d(D: int) -> None:
    if not isinstance(D, int) or D < 1 or not is_square_free(D):
        raise DomainError(f"D must be a square-free integer >= 1, got {D}")


def salem_from_trace(D: int, t: QuadIntK) -> BianchiSalem | None:
    """The lambda^(1/2)-quartic attached to trace t, or None when t does
    not yield a degree-4 Salem number."""
    _check_d(D)
    if t.D != D:
        raise ContractError(f"trace lives in D={t.D}, expected D={D}")
    if t.is_real() or t.real_part_doubled() == 0:
        return None
    n = t.norm()
    tr2 = t.trace_sq()
    if is_perfect_square(n * n - 4 * tr2 + 16) is not None:
        return None
    return BianchiSalem(-n, tr2 - 2, [(t.u, t.v)])


def _scan_band(args: tuple[int, int, int, int]) -> tuple[dict, list[int]]:
    """Scan traces with v in [v_lo, v_hi) and norm <= R; returns the local
    (A, B) -> witnesses dict and the rejection tallies."""
    D, R, v_lo, v_hi = args
    half = D % 4 == 3
    found: dict[tuple[int, int], list[tuple[int, int]]] = {}
    scanned = real = imag_axis = reducible = 0
    for v in range(v_lo, v_hi):
        if half:
            rem = 4 * R - D * v * v
            if rem < 0:
                continue
            wmax = math.isqrt(rem)
            # w = 2u + v runs over [-wmax, wmax]
            u_range = range((-wmax - v + 1) // 2, (wmax - v) // 2 + 1)
        else:
            rem = R - D * v * v
            if rem < 0:
                continue
            umax = math.isqrt(rem)
            u_range = range(-umax, umax + 1)
        for u in u_range:
            scanned += 1
            if v == 0:
                real += 1
                continue
            if half:
                w = 2 * u + v
                if w == 0:
                    imag_axis += 1
                    continue
                n = (w * w + D * v * v) // 4
                tr2 = (w * w - D * v * v) // 2
            else:
                if u == 0:
                    imag_axis += 1
                    continue
                n = u * u + D * v * v
                tr2 = 2 * (u * u - D * v * v)
            disc = n * n - 4 * tr2 + 16
            r = math.isqrt(disc)
            if r * r == disc:
                reducible += 1
                continue
            key = (-n, tr2 - 2)
            wit = found.setdefault(key, [])
            if len(wit) < WITNESS_CAP:
                wit.append((u, v))
    return found, [scanned, real, imag_axis, reducible]


def bianchi_census(D: int, Q: int, workers: int = 1) -> BianchiCensus:
    """All degree-4 square-rootable Salem numbers lambda <= Q arising from
    traces of PSL(2, o_K), deduplicated on the (A, B) key.

    Traces are scanned over norm(t) <= floor(sqrt(Q)) + 3, which covers
    every candidate since N(t) differs from y = lambda^(1/2) + lambda^(-1/2)
    by at most 2; exactness is restored by the p(Q) >= 0 cut on the lifted
    quartic.  Asymptotically count / sqrt(Q) approaches marklof_constant(D).
    """
    _check_d(D)
    if not isinstance(Q, int) or Q < 2:
        raise DomainError(f"Q must be an integer >= 2, got {Q}")
    R = math.isqrt(Q) + 3
    half = D % 4 == 3
    vmax = math.isqrt(4 * R // D) if half else math.isqrt(R // D)
    bands = _v_bands(-vmax, vmax + 1, workers)
    args = [(D, R, lo, hi) for lo, hi in bands]
    if workers <= 1 or len(args) <= 1:
        results = [_scan_band(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_band, args))

    merged: dict[tuple[int, int], list[tuple[int, int]]] = {}
    tallies = [0, 0, 0, 0]
    for found, t in results:
        for i in range(4):
            tallies[i] += t[i]
        for key, wit in found.items():
            cur = merged.setdefault(key, [])
            cur.extend(wit[: WITNESS_CAP - len(cur)])

    over_q = 0
    members = []
    for (A, B) in sorted(merged):
        a, b = 2 * B - A * A, B * B - 2 * A * A + 2
        if Q**4 + a * Q**3 + b * Q * Q + a * Q + 1 < 0:  # lifted lambda > Q
            over_q += 1
            continue
        members.append(BianchiSalem(A, B, merged[(A, B)]))
    return BianchiCensus(
        D, Q, members,
        traces_scanned=tallies[0],
        excluded_real=tallies[1],
        excluded_imag_axis=tallies[2],
        excluded_reducible=tallies[3],
        excluded_over_q=over_q,
    )


def _v_bands(lo: int, hi: int, workers: int) -> list[tuple[int, int]]:
    n = max(1, min(workers, hi - lo))
    step = (hi - lo + n - 1) // n
    return [(s, min(s + step, hi)) for s in range(lo, hi, step)]


def marklof_constant(D: int) -> float:
    """Leading constant of the distinct-real-length count for PSL(2, o_K):
    pi/(4 sqrt(D)) when D = 1, 2 (mod 4) and pi/(2 sqrt(D)) when
    D = 3 (mod 4)."""
    _check_d(D)
    if D % 4 == 3:
        return math.pi / (2.0 * math.sqrt(D))
    return math.pi / (4.0 * math.sqrt(D))


def bianchi_csv_row(m: BianchiSalem) -> str:
    p = m.lift()
    lam = salem_value(p)
    return f"{m.A},{m.B},{p.a},{p.b},{abs(m.B - 2)},{lam:.12g},{len(m.witnesses)}"


def bianchi_json_obj(m: BianchiSalem) -> dict:
    p = m.lift()
    return {
        "A": str(m.A),
        "B": str(m.B),
        "a_lift": str(p.a),
        "b_lift": str(p.b),
        "k": str(abs(m.B - 2)),
        "lambda": salem_value(p),
        "witnesses": [[u, v] for u, v in m.witnesses],
    }
