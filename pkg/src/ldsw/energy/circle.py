"""Sign of the minimum of a real trigonometric polynomial on the unit circle.

``f(z) = sum_{k=-K}^{K} b_k z^k`` with ``b_{-k} = conj(b_k)`` is real on |z| = 1.
When every b_k has rational real and imaginary parts the sign is decided
exactly: substituting ``z = (1 + i t) / (1 - i t)`` turns ``(1 + t^2)^K f`` into a
rational polynomial N(t) covering the circle minus z = -1, and real-root
isolation on N settles the question.  Otherwise a certified grid search with a
Lipschitz bound is used.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import sympy

from ..errors import EnergyInconclusive, NotRealValued
from ..exactnum.algnum import AlgNum

MAX_GRID = 1 << 22


class CircleSign(enum.Enum):
    NEGATIVE = "min<0"
    ZERO = "min=0"
    POSITIVE = "min>0"


def _center(b: Sequence[AlgNum]) -> int:
    if len(b) % 2 != 1:
        raise NotRealValued("coefficient list must have odd length b_{-K}..b_K")
    return len(b) // 2


def audit_symmetry(b: Sequence[AlgNum]) -> list[AlgNum]:
    b = [AlgNum.coerce(x) for x in b]
    K = _center(b)
    for k in range(K + 1):
        if b[K - k] != b[K + k].conjugate():
            raise NotRealValued(f"b_{-k} is not the conjugate of b_{k}")
    return b


def real_imag(a: AlgNum) -> Optional[tuple[Fraction, Fraction]]:
    """(Re a, Im a) when both are rational, else None."""
    if a.is_rational():
        return a.as_fraction(), Fraction(0)
    if a.degree != 2:
        return None
    c0, c1, c2 = (Fraction(x) for x in a.poly)
    re = -c1 / (2 * c2)
    im2 = c0 / c2 - re * re
    if im2 <= 0:
        return None  # real quadratic irrationality
    num, den = im2.numerator, im2.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    im = Fraction(rn, rd)
    return re, (im if a.approx().imag > 0 else -im)


def _exact_sign(parts: list[tuple[Fraction, Fraction]]) -> CircleSign:
    K = _center(parts)
    t = sympy.Symbol("t")
    one_plus = sympy.Poly(1 + sympy.I * t, t, domain="QQ_I")
    one_minus = sympy.Poly(1 - sympy.I * t, t, domain="QQ_I")
    total = sympy.Poly(0, t, domain="QQ_I")
    for idx, (re, im) in enumerate(parts):
        k = idx - K
        if re == 0 and im == 0:
            continue
        coeff = sympy.Rational(re.numerator, re.denominator) + sympy.I * sympy.Rational(im.numerator, im.denominator)
        total += one_plus ** (K + k) * one_minus ** (K - k) * coeff
    coeffs = [sympy.nsimplify(c) for c in total.all_coeffs()]
    if any(sympy.im(c) != 0 for c in coeffs):
        raise NotRealValued("numerator polynomial is not real")
    N = sympy.Poly([sympy.re(c) for c in coeffs], t, domain="QQ")
    at_minus_one = sum(((re if (i - K) % 2 == 0 else -re) for i, (re, _) in enumerate(parts)), Fraction(0))
    if N.is_zero:
        return CircleSign.ZERO  # f vanishes identically
    at_zero = N.eval(0)
    if at_zero < 0 or at_minus_one < 0:
        return CircleSign.NEGATIVE
    has_root = False
    for factor, mult in N.sqf_list()[1]:
        if factor.degree() == 0:
            continue
        if factor.count_roots() > 0:
            if mult % 2 == 1:
                return CircleSign.NEGATIVE
            has_root = True
    if has_root or at_minus_one == 0 or at_zero == 0:
        return CircleSign.ZERO
    return CircleSign.POSITIVE


def _float_coeffs(b: Sequence[AlgNum]) -> tuple[np.ndarray, float]:
    """b_0..b_K as complex floats and a bound on their total conversion error."""
    K = _center(b)
    out = np.zeros(K + 1, dtype=np.complex128)
    err = 0.0
    for k in range(K + 1):
        d = b[K + k].enclosure(80)
        out[k] = d.to_complex()
        err += float(d.rad) + abs(out[k]) * 2.0 ** -52
    return out, err


def grid_bounds(b: Sequence[AlgNum], N: int) -> tuple[float, float, float]:
    """(lower bound on min f, upper bound on min f, argmin theta) from an N-point grid."""
    c, cerr = _float_coeffs(b)
    K = len(c) - 1
    j = np.arange(N, dtype=np.int64)
    vals = np.full(N, c[0].real)
    for k in range(1, K + 1):
        ang = 2 * np.pi * ((k * j) % N) / N
        vals += 2 * (c[k] * np.exp(1j * ang)).real
    absum = abs(c[0]) + 2 * float(np.sum(np.abs(c[1:])))
    err = 2 * cerr + absum * (K + 4) * 2.0 ** -50
    lip = sum(2 * 2 * math.pi * k * abs(c[k]) for k in range(1, K + 1)) * (1 + 1e-12)
    i = int(np.argmin(vals))
    m = float(vals[i])
    return m - lip / (2 * N) - err, m + err, i / N


def min_lower_bound(b: Sequence[AlgNum]) -> Fraction:
    """Certified positive lower bound on min f; the caller must know min f > 0."""
    N = 1024
    while N <= MAX_GRID:
        lo, _, _ = grid_bounds(b, N)
        if lo > 0:
            return Fraction(lo) * Fraction(1 - 2 ** -20)
        N *= 4
    raise EnergyInconclusive("could not bound the circle minimum away from zero", {})


def negative_point(b: Sequence[AlgNum]) -> Optional[float]:
    """An angle theta (turns) with f(e^{2 pi i theta}) certified negative, if the grid finds one."""
    N = 1024
    while N <= MAX_GRID:
        _, hi, theta = grid_bounds(b, N)
        if hi < 0:
            return theta
        N *= 4
    return None


def min_on_circle(b: Sequence) -> CircleSign:
    """Sign of min_{|z|=1} sum_k b_k z^k for conjugate-symmetric b_{-K}..b_K."""
    b = audit_symmetry(b)
    K = _center(b)
    if K == 0:
        s = b[0].sign()
        return CircleSign.POSITIVE if s > 0 else CircleSign.NEGATIVE if s < 0 else CircleSign.ZERO
    parts = [real_imag(x) for x in b]
    if all(p is not None for p in parts):
        return _exact_sign(parts)
    N = 1024
    while N <= MAX_GRID:
        lo, hi, _ = grid_bounds(b, N)
        if hi < 0:
            return CircleSign.NEGATIVE
        if lo > 0:
            return CircleSign.POSITIVE
        N *= 4
    raise EnergyInconclusive("sign of the circle minimum is undecided for irrational coefficients", {})
