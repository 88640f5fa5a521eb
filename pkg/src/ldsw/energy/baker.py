"""Effective lower bounds from linear forms in logarithms.

For algebraic a_1..a_m generating a field of degree D, with A >= 3 exceeding
the naive heights and Bp >= 3 exceeding the integer coefficients, a nonzero
``b_1 Log a_1 + ... + b_m Log a_m`` has modulus above
``exp(-(16 m D)^{2(m+2)} (log A)^m log Bp)``.

Threshold derivation for |alpha| = 1, alpha not a root of unity, beta != 0:

* alpha^n = beta forces n h(alpha) = h(beta), so alpha^n != beta once
  n > N = max(1, ceil(h(beta) / h(alpha))).
* Pick k with z = n Log alpha - Log beta + 2 pi i k having |Im z| <= pi.  Then
  |2k| <= n + 2 and z is the linear form with a = (alpha, beta, -1) and
  b = (n, -1, 2k), so m = 3 and Bp = n + 3.
* alpha^n - beta = beta (e^z - 1), and |e^z - 1| >= min(|z|, 1) / 4 on the
  strip |Im z| <= pi, which gives |alpha^n - beta| >= |beta|/4 (n+3)^(-K)
  with K = (48 D)^10 (log A)^3.
* For n >= 2, n + 3 <= n^(7/3) and |beta|/4 >= n^(-c) with
  c = max(0, ceil(log2(4/|beta|))).  Hence C = ceil(7K/3) + c + 1 gives
  |alpha^n - beta| > n^(-C) for every n > N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


from ..errors import InvalidParameters, PreconditionViolated
from ..exactnum.algnum import AlgNum
from ..exactnum.interval import Disc, iv_bounds, iv_from_fractions, iv_workprec

_PREC = 160


@dataclass(frozen=True)
class BakerBound:
    m: int
    D: int
    A: Fraction
    Bp: Fraction
    value: Fraction  # certified lower bound on log|Lambda|

    def to_json(self) -> dict:
        return {"m": self.m, "D": self.D, "A": str(self.A), "Bp": str(self.Bp), "value": str(self.value)}


def _check_params(m, D, A, Bp) -> tuple[int, int, Fraction, Fraction]:
    A, Bp = Fraction(A), Fraction(Bp)
    if int(m) != m or int(D) != D or m < 1 or D < 1:
        raise InvalidParameters("m and D must be positive integers")
    if A < 3 or Bp < 3:
        raise InvalidParameters("A and Bp must be at least 3")
    return int(m), int(D), A, Bp


def baker_constant_upper(m: int, D: int, A) -> Fraction:
    """Rational upper bound on (16 m D)^{2(m+2)} (log A)^m."""
    m, D, A, _ = _check_params(m, D, A, 3)
    with iv_workprec(_PREC) as iv:
        val = iv.mpf(16 * m * D) ** (2 * (m + 2)) * iv.log(iv_from_fractions(A, A)) ** m
        return iv_bounds(val)[1]


def baker_lower_bound(m: int, D: int, A, Bp) -> BakerBound:
    """-(16 m D)^{2(m+2)} (log A)^m log Bp, rounded down to a rational."""
    m, D, A, Bp = _check_params(m, D, A, Bp)
    with iv_workprec(_PREC) as iv:
        val = -(iv.mpf(16 * m * D) ** (2 * (m + 2))
                * iv.log(iv_from_fractions(A, A)) ** m
                * iv.log(iv_from_fractions(Bp, Bp)))
        lo = iv_bounds(val)[0]
    return BakerBound(m, D, A, Bp, lo)


@dataclass(frozen=True)
class BakerThreshold:
    """|alpha^n - beta| > n^(-C) for all n > N."""

    N: int
    C: int
    D: int
    A: int
    K: Fraction

    def __iter__(self):
        return iter((self.N, self.C))

    def to_json(self) -> dict:
        return {"N": self.N, "C": self.C, "D": self.D, "A": self.A, "K": str(self.K)}


def baker_threshold(alpha: AlgNum, beta: AlgNum) -> BakerThreshold:
    alpha, beta = AlgNum.coerce(alpha), AlgNum.coerce(beta)
    if beta.is_zero():
        raise PreconditionViolated("beta must be nonzero")
    if alpha.is_zero() or alpha.cmp_abs_one() != 0:
        raise PreconditionViolated("alpha must have modulus 1")
    if alpha.root_of_unity_order() is not None:
        raise PreconditionViolated("alpha must not be a root of unity")
    ha_lo, _ = alpha.weil_height()
    _, hb_hi = beta.weil_height()
    if ha_lo <= 0:
        raise PreconditionViolated("could not bound the height of alpha away from zero")
    if beta.poly == alpha.poly:
        N = 1  # conjugates share the height, so the ratio is exactly 1
    else:
        N = max(1, math.ceil(hb_hi / ha_lo))
    D = alpha.degree * beta.degree
    A = max(3, alpha.height() + 1, beta.height() + 1)
    K = baker_constant_upper(3, D, A)
    b_lo = beta.enclosure(64).abs_lower()
    if b_lo <= 0:
        raise PreconditionViolated("could not bound |beta| away from zero")
    c = 0 if b_lo >= 4 else math.ceil(math.log2(4 / b_lo))
    C = math.ceil(Fraction(7, 3) * K) + c + 1
    return BakerThreshold(N, C, D, A, K)


def audit_threshold(alpha: AlgNum, beta: AlgNum, N: int, C: int, count: int = 500) -> bool:
    """Check |alpha^n - beta| > n^(-C) for N < n <= N + count with disc arithmetic."""
    alpha, beta = AlgNum.coerce(alpha), AlgNum.coerce(beta)
    top = N + count
    bits = 64 + 2 * top.bit_length()
    a = alpha.enclosure(bits)
    b = beta.enclosure(bits)
    power = a ** (N + 1)
    for n in range(N + 1, top + 1):
        diff: Disc = power - b
        lo = diff.abs_lower()
        if lo <= 0:
            return False
        with iv_workprec(96) as iv:
            lhs = iv.log(iv_from_fractions(lo, lo))
            rhs = -C * iv.log(iv.mpf(n))
            if not lhs.a > rhs.b:
                return False
        power = power * a
    return True
