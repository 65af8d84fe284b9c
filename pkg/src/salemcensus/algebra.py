"""Exact arithmetic kernel: perfect squares and quadratic-field integers.

Everything downstream decides membership with integer arithmetic only;
floating point appears solely in the embedding values used for diagnostics
and numeric cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "is_perfect_square",
    "is_square_free",
    "sign_plus_root",
    "QuadIntK",
    "RealQuadElem",
]


def is_perfect_square(n: int) -> int | None:
    """Return the non-negative r with r*r == n, or None.

    Integer square root followed by an exact squaring check, so the answer
    is right for every magnitude.
    """
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def is_square_free(n: int) -> bool:
    """True iff n >= 1 and no prime square divides n.  Trial division;
    meant for validating field parameters, not for bulk factoring."""
    if n < 1:
        return False
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        while n % f == 0:
            n //= f
        f += 1
    return True


def sign_plus_root(A: int, B: int, d: int) -> int:
    """Exact sign of A + B*sqrt(d) for integers A, B and non-square d >= 2.

    Comparisons of quadratic irrationals reduce to this; the decision is
    made by comparing A*A against B*B*d, never through floats.
    """
    if B == 0:
        return (A > 0) - (A < 0)
    if A == 0:
        return 1 if B > 0 else -1
    if A > 0 and B > 0:
        return 1
    if A < 0 and B < 0:
        return -1
    # opposite signs: |A| vs |B|sqrt(d); equality would force d square
    lhs, rhs = A * A, B * B * d
    if lhs == rhs:
        raise DomainError(f"d={d} must not be a perfect square")
    if A > 0:
        return 1 if lhs > rhs else -1
    return -1 if lhs > rhs else 1


@dataclass(frozen=True)
class QuadIntK:
    """Integer t = u + v*w of the imaginary quadratic field Q(sqrt(-D)),
    where w = sqrt(-D) for D = 1, 2 (mod 4) and w = (1 + sqrt(-D))/2 for
    D = 3 (mod 4).
    """

    D: int
    u: int
    v: int

    def __post_init__(self) -> None:
        if self.D < 1 or not is_square_free(self.D):
            raise DomainError(f"D must be square-free and >= 1, got {self.D}")

    @property
    def half_basis(self) -> bool:
        return self.D % 4 == 3

    def conjugate(self) -> "QuadIntK":
        if self.half_basis:
            # conj(w) = 1 - w
            return QuadIntK(self.D, self.u + self.v, -self.v)
        return QuadIntK(self.D, self.u, -self.v)

    def is_real(self) -> bool:
        return self.v == 0

    def real_part_doubled(self) -> int:
        """2 * Re(t), always an integer in both bases."""
        return 2 * self.u + self.v if self.half_basis else 2 * self.u

    def norm(self) -> int:
        """N(t) = t * conj(t), a rational integer."""
        if self.half_basis:
            w = 2 * self.u + self.v
            return (w * w + self.D * self.v * self.v) // 4
        return self.u * self.u + self.D * self.v * self.v

    def trace_sq(self) -> int:
        """Tr(t^2) = t^2 + conj(t)^2, a rational integer."""
        if self.half_basis:
            w = 2 * self.u + self.v
            return (w * w - self.D * self.v * self.v) // 2
        return 2 * (self.u * self.u - self.D * self.v * self.v)

    def complex_value(self) -> complex:
        """Double-precision embedding; diagnostics only."""
        rt = math.sqrt(self.D)
        if self.half_basis:
            return complex(self.u + self.v / 2, self.v * rt / 2)
        return complex(self.u, self.v * rt)


@dataclass(frozen=True)
class RealQuadElem:
    """Integer x = u + v*w of the real quadratic field Q(sqrt(d)), where
    w = sqrt(d) for d = 2, 3 (mod 4) and w = (1 + sqrt(d))/2 for
    d = 1 (mod 4).

    Supports exact ring arithmetic plus exact sign tests of the two real
    embeddings, which downstream uses to decide every strict inequality
    without floating point.
    """

    d: int
    u: int
    v: int

    def __post_init__(self) -> None:
        if self.d < 2 or not is_square_free(self.d):
            raise DomainError(f"d must be square-free and >= 2, got {self.d}")

    @property
    def half_basis(self) -> bool:
        return self.d % 4 == 1

    def conjugate(self) -> "RealQuadElem":
        if self.half_basis:
            return RealQuadElem(self.d, self.u + self.v, -self.v)
        return RealQuadElem(self.d, self.u, -self.v)

    def trace(self) -> int:
        return 2 * self.u + self.v if self.half_basis else 2 * self.u

    def norm(self) -> int:
        if self.half_basis:
            return self.u * self.u + self.u * self.v + self.v * self.v * (1 - self.d) // 4
        return self.u * self.u - self.d * self.v * self.v

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    # (A, B) with sigma1(x) = (A + B*sqrt(d)) / 2; the common denominator 2
    # keeps the half-integer basis in plain integers.
    def _doubled_coords(self) -> tuple[int, int]:
        if self.half_basis:
            return 2 * self.u + self.v, self.v
        return 2 * self.u, 2 * self.v

    def sign_sigma1(self) -> int:
        A, B = self._doubled_coords()
        return sign_plus_root(A, B, self.d)

    def sign_sigma2(self) -> int:
        A, B = self._doubled_coords()
        return sign_plus_root(A, -B, self.d)

    def is_totally_positive(self) -> bool:
        return self.sign_sigma1() > 0 and self.sign_sigma2() > 0

    def embeddings(self) -> tuple[float, float]:
        """(sigma1(x), sigma2(x)) at double precision, identity first
        (w maps to +sqrt(d) under sigma1)."""
        rt = math.sqrt(self.d)
        A, B = self._doubled_coords()
        return (A + B * rt) / 2.0, (A - B * rt) / 2.0

    # --- ring operations ------------------------------------------------

    def _like(self, u: int, v: int) -> "RealQuadElem":
        return RealQuadElem(self.d, u, v)

    def __add__(self, other):
        if isinstance(other, RealQuadElem):
            if other.d != self.d:
                raise DomainError("mixed field parameters")
            return self._like(self.u + other.u, self.v + other.v)
        if isinstance(other, int):
            return self._like(self.u + other, self.v)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.u, -self.v)

    def __sub__(self, other):
        if isinstance(other, RealQuadElem):
            if other.d != self.d:
                raise DomainError("mixed field parameters")
            return self._like(self.u - other.u, self.v - other.v)
        if isinstance(other, int):
            return self._like(self.u - other, self.v)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return self._like(other - self.u, -self.v)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, RealQuadElem):
            if other.d != self.d:
                raise DomainError("mixed field parameters")
            u1, v1, u2, v2 = self.u, self.v, other.u, other.v
            if self.half_basis:
                # w^2 = w + (d-1)/4
                c = (self.d - 1) // 4
                return self._like(u1 * u2 + v1 * v2 * c, u1 * v2 + u2 * v1 + v1 * v2)
            return self._like(u1 * u2 + self.d * v1 * v2, u1 * v2 + u2 * v1)
        if isinstance(other, int):
            return self._like(self.u * other, self.v * other)
        return NotImplemented

    __rmul__ = __mul__

    @classmethod
    def from_int(cls, d: int, n: int) -> "RealQuadElem":
        return cls(d, n, 0)
