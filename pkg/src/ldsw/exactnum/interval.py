"""Certified complex disc arithmetic with dyadic rational centres.

A :class:`Disc` is the closed set {z : |z - c| <= r}.  Every operation returns a
disc that contains all possible results; centres are rounded to ``prec`` bits
and the rounding error is folded into the radius so sizes stay bounded.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

from .rational import dyadic_ceil, dyadic_floor

DEFAULT_PREC = 96
EXACT_LIMIT = 4096


def _neg_log2(x: Fraction) -> int:
    """Roughly -log2(x) for 0 < x, as an int (>= 0)."""
    return max(0, x.denominator.bit_length() - x.numerator.bit_length())


def sqrt_up(x: Fraction, bits: int = 64) -> Fraction:
    """Rational upper bound of sqrt(x), within about 2**-bits relative."""
    if x <= 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    shift = 2 * bits
    # sqrt(n/d) = sqrt(n d) / d
    s = isqrt((n * d) << shift)
    if (s * s) != ((n * d) << shift):
        s += 1
    return Fraction(s, d << bits)


def sqrt_down(x: Fraction, bits: int = 64) -> Fraction:
    if x <= 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    s = isqrt((n * d) << (2 * bits))
    return Fraction(s, d << bits)


def _round(x: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Round x to a dyadic with ``prec`` fractional bits; return (value, error bound)."""
    if x.denominator & (x.denominator - 1) == 0 and x.denominator <= (1 << prec):
        return x, Fraction(0)
    lo = dyadic_floor(x, prec)
    return lo, Fraction(1, 1 << prec)


@dataclass(frozen=True)
class Disc:
    re: Fraction
    im: Fraction
    rad: Fraction = Fraction(0)

    @staticmethod
    def point(z) -> "Disc":
        if isinstance(z, Disc):
            return z
        if isinstance(z, complex):
            raise TypeError("use exact values")
        return Disc(Fraction(z), Fraction(0), Fraction(0))

    @staticmethod
    def from_parts(re, im, rad=0) -> "Disc":
        return Disc(Fraction(re), Fraction(im), Fraction(rad))

    def rounded(self, prec: int | None = None) -> "Disc":
        if prec is None:
            if self.rad == 0:
                # exact discs stay exact unless the centre gets unwieldy
                big = max(self.re.denominator.bit_length(), self.im.denominator.bit_length())
                if big <= EXACT_LIMIT:
                    return self
                prec = EXACT_LIMIT
            else:
                prec = max(DEFAULT_PREC, _neg_log2(self.rad) + 40)
        re, e1 = _round(self.re, prec)
        im, e2 = _round(self.im, prec)
        rad = self.rad + e1 + e2
        if rad.denominator > (1 << (prec + 8)):
            rad = dyadic_ceil(rad, prec + 4)
        return Disc(re, im, rad)

    # magnitudes -------------------------------------------------------
    def abs2_center(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def abs_upper(self) -> Fraction:
        return sqrt_up(self.abs2_center()) + self.rad

    def abs_lower(self) -> Fraction:
        return max(Fraction(0), sqrt_down(self.abs2_center()) - self.rad)

    def contains_zero(self) -> bool:
        return self.abs2_center() <= self.rad * self.rad

    def contains(self, z) -> bool:
        z = Disc.point(z)
        dr, di = self.re - z.re, self.im - z.im
        return dr * dr + di * di <= self.rad * self.rad

    def intersects(self, other: "Disc") -> bool:
        dr, di = self.re - other.re, self.im - other.im
        r = self.rad + other.rad
        return dr * dr + di * di <= r * r

    def contains_disc(self, other: "Disc") -> bool:
        if other.rad > self.rad:
            return False
        dr, di = self.re - other.re, self.im - other.im
        r = self.rad - other.rad
        return dr * dr + di * di <= r * r

    def real_part_interval(self) -> tuple[Fraction, Fraction]:
        return self.re - self.rad, self.re + self.rad

    def imag_part_interval(self) -> tuple[Fraction, Fraction]:
        return self.im - self.rad, self.im + self.rad

    def meets_real_axis(self) -> bool:
        return abs(self.im) <= self.rad

    def box(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """(re_lo, re_hi, im_lo, im_hi) of the bounding square."""
        return (self.re - self.rad, self.re + self.rad, self.im - self.rad, self.im + self.rad)

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Disc":
        o = Disc.point(other)
        return Disc(self.re + o.re, self.im + o.im, self.rad + o.rad).rounded()

    __radd__ = __add__

    def __neg__(self) -> "Disc":
        return Disc(-self.re, -self.im, self.rad)

    def __sub__(self, other) -> "Disc":
        return self + (-Disc.point(other))

    def __rsub__(self, other) -> "Disc":
        return Disc.point(other) + (-self)

    def __mul__(self, other) -> "Disc":
        o = Disc.point(other)
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        if self.rad == 0 and o.rad == 0:
            return Disc(re, im).rounded()
        a = sqrt_up(self.abs2_center())
        b = sqrt_up(o.abs2_center())
        rad = a * o.rad + b * self.rad + self.rad * o.rad
        return Disc(re, im, rad).rounded()

    __rmul__ = __mul__

    def conjugate(self) -> "Disc":
        return Disc(self.re, -self.im, self.rad)

    def inverse(self) -> "Disc":
        m2 = self.abs2_center()
        if m2 <= self.rad * self.rad:
            raise ZeroDivisionError("disc contains zero")
        c = Disc(self.re / m2, -self.im / m2)
        if self.rad == 0:
            return c.rounded()
        m = sqrt_down(m2)
        # |1/z - 1/c| = |z - c| / (|z||c|) <= r / ((m - r) m)
        if m <= self.rad:
            raise ZeroDivisionError("disc contains zero")
        rad = self.rad / ((m - self.rad) * m)
        return Disc(c.re, c.im, rad).rounded()

    def __truediv__(self, other) -> "Disc":
        return self * Disc.point(other).inverse()

    def __pow__(self, k: int) -> "Disc":
        if k < 0:
            return self.inverse() ** (-k)
        result = Disc(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # conversions -------------------------------------------------------
    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_iv(self):
        """(real iv, imag iv) mpmath intervals enclosing the disc's bounding square."""
        return (iv_from_fractions(self.re - self.rad, self.re + self.rad),
                iv_from_fractions(self.im - self.rad, self.im + self.rad))


@contextmanager
def iv_workprec(bits: int):
    """Run mpmath interval arithmetic at ``bits`` of precision (it ignores mp.workprec)."""
    iv = mpmath.iv
    saved = iv.prec
    iv.prec = bits
    try:
        yield iv
    finally:
        iv.prec = saved


def iv_from_fractions(lo: Fraction, hi: Fraction):
    iv = mpmath.iv
    a = iv.mpf(lo.numerator) / iv.mpf(lo.denominator)
    b = iv.mpf(hi.numerator) / iv.mpf(hi.denominator)
    return iv.mpf([a.a, b.b])


def _fraction_from_tuple(t) -> Fraction:
    sign, man, exp, bc = t
    if not man and exp:
        raise ValueError("non-finite value")
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << (-exp))


def fraction_from_mpf(x) -> Fraction:
    """Exact value of an mpmath mpf as a Fraction."""
    if hasattr(x, "_mpi_"):
        a, b = x._mpi_
        if a != b:
            raise ValueError("interval is not a point")
        return _fraction_from_tuple(a)
    if not hasattr(x, "_mpf_"):
        x = mpmath.mpf(x)
    return _fraction_from_tuple(x._mpf_)


def iv_bounds(x) -> tuple[Fraction, Fraction]:
    """Exact endpoints of an mpmath interval (no rounding through mp)."""
    a, b = x._mpi_
    return _fraction_from_tuple(a), _fraction_from_tuple(b)
