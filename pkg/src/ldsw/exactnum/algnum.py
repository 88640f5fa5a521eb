"""Exact complex algebraic numbers.

An :class:`AlgNum` is a primitive irreducible integer polynomial together with
the index of one of its roots.  Roots of every polynomial are isolated once
(certified with Smith's disc inclusion theorem) and kept in a canonical order,
so equality is structural: same polynomial, same index.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Sequence

import mpmath

from ..errors import DivisionByZero, InternalInconsistency
from . import linalg, poly as P
from .interval import Disc, fraction_from_mpf, iv_bounds, iv_from_fractions, iv_workprec, sqrt_up
from .rational import dyadic_ceil, dyadic_floor, format_rational, parse_rational


# ---------------------------------------------------------------------------
# root isolation


def _cpoly_eval(p: Sequence[int], re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(p):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


def _to_dyadic(x, bits: int) -> Fraction:
    f = fraction_from_mpf(x)
    scale = 1 << bits
    return Fraction(round(f * scale), scale)


class RootSet:
    """Certified isolating discs for all roots of a square-free integer polynomial."""

    def __init__(self, poly: P.IntPoly):
        self.poly = poly
        self.degree = len(poly) - 1
        self.discs: list[Disc] = []
        self.real: list[bool] = []
        self.bits = 0
        if self.degree < 1:
            raise ValueError("constant polynomial has no roots")
        if self.degree == 1:
            root = Fraction(-poly[0], poly[1])
            self.discs = [Disc(root, Fraction(0))]
            self.real = [True]
            self.bits = 1 << 30
            return
        self._initial()

    # -- approximation and certification --------------------------------
    def _approximate(self, bits: int) -> list[tuple[Fraction, Fraction]]:
        coeffs = [int(c) for c in reversed(self.poly)]
        dps = bits // 3 + 20
        steps = 50 + 10 * self.degree
        while True:
            try:
                with mpmath.workdps(dps):
                    roots = mpmath.polyroots(coeffs, maxsteps=steps, extraprec=2 * dps)
                    out = [(_to_dyadic(mpmath.re(z), bits + 8), _to_dyadic(mpmath.im(z), bits + 8))
                           for z in roots]
                break
            except mpmath.libmp.NoConvergence:
                steps *= 2
                dps += 20
                if steps > 100000:
                    raise InternalInconsistency(f"root finding failed for {self.poly}")
        return self._symmetrize(out, bits)

    @staticmethod
    def _symmetrize(pts, bits):
        tiny = Fraction(1, 1 << max(8, bits // 2))
        pts = [(re, Fraction(0) if abs(im) <= tiny else im) for re, im in pts]
        upper = [i for i, (_, im) in enumerate(pts) if im > 0]
        lower = [i for i, (_, im) in enumerate(pts) if im < 0]
        if len(upper) == len(lower):
            used = set()
            for i in upper:
                re, im = pts[i]
                best = min((j for j in lower if j not in used),
                           key=lambda j: (pts[j][0] - re) ** 2 + (pts[j][1] + im) ** 2)
                used.add(best)
                pts[best] = (re, -im)
        return pts

    def _certify(self, pts) -> tuple[list[Disc], list[bool]] | None:
        d = self.degree
        lc2 = Fraction(self.poly[-1]) ** 2
        discs = []
        for i, (re, im) in enumerate(pts):
            vr, vi = _cpoly_eval(self.poly, re, im)
            num = vr * vr + vi * vi
            den = lc2
            for j, (re2, im2) in enumerate(pts):
                if j != i:
                    dr, di = re - re2, im - im2
                    den *= dr * dr + di * di
            if den == 0:
                return None
            rad = d * sqrt_up(num / den, bits=96)
            discs.append(Disc(re, im, rad))
        for i in range(d):
            for j in range(i + 1, d):
                if discs[i].intersects(discs[j]):
                    return None
        real = []
        for disc in discs:
            if disc.im == 0:
                real.append(True)
            elif abs(disc.im) > disc.rad:
                real.append(False)
            else:
                return None
        return discs, real

    def _initial(self):
        bits = 64
        while True:
            res = self._certify(self._approximate(bits))
            if res is not None:
                discs, real = res
                order = sorted(range(self.degree), key=lambda i: (discs[i].re, discs[i].im))
                self.discs = [discs[i] for i in order]
                self.real = [real[i] for i in order]
                self.bits = bits
                return
            bits *= 2
            if bits > 1 << 16:
                raise InternalInconsistency(f"cannot isolate roots of {self.poly}")

    def refine(self, bits: int) -> None:
        """Ensure every isolating disc has radius <= 2**-bits."""
        target = Fraction(1, 1 << bits)
        if all(d.rad <= target for d in self.discs):
            return
        work = max(bits + 16, self.bits * 2)
        while True:
            res = self._certify(self._approximate(work))
            if res is not None:
                discs, real = res
                if all(d.rad <= target for d in discs):
                    perm = []
                    for nd in discs:
                        hits = [k for k, od in enumerate(self.discs) if od.intersects(nd)]
                        if len(hits) != 1:
                            break
                        perm.append(hits[0])
                    else:
                        if sorted(perm) == list(range(self.degree)):
                            new = [None] * self.degree
                            for nd, k in zip(discs, perm):
                                new[k] = nd
                            self.discs = new
                            self.bits = work
                            return
            work *= 2
            if work > 1 << 18:
                raise InternalInconsistency(f"refinement stalled for {self.poly}")

    def disc(self, index: int, bits: int) -> Disc:
        self.refine(bits)
        return self.discs[index]


@lru_cache(maxsize=8192)
def rootset(poly: P.IntPoly) -> RootSet:
    return RootSet(poly)


# ---------------------------------------------------------------------------
# the number type


class AlgNum:
    """A complex algebraic number (minimal polynomial + root index)."""

    __slots__ = ("poly", "index")

    def __init__(self, poly: P.IntPoly, index: int):
        self.poly = tuple(poly)
        self.index = index

    # construction ---------------------------------------------------------
    @classmethod
    def rational(cls, q) -> "AlgNum":
        q = Fraction(q)
        return cls((-q.numerator, q.denominator), 0)

    @classmethod
    def coerce(cls, x) -> "AlgNum":
        if isinstance(x, AlgNum):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        if isinstance(x, str):
            return cls.rational(parse_rational(x))
        raise TypeError(f"cannot convert {x!r} to AlgNum")

    @classmethod
    def gaussian(cls, re, im) -> "AlgNum":
        """re + im*i for rationals re, im."""
        re, im = Fraction(re), Fraction(im)
        if im == 0:
            return cls.rational(re)
        # (x - re)^2 + im^2
        poly = P.from_rational([re * re + im * im, -2 * re, Fraction(1)])
        return identify(poly, lambda bits: Disc(re, im))

    @classmethod
    def sqrt(cls, q) -> "AlgNum":
        """Principal square root of a rational."""
        q = Fraction(q)
        if q == 0:
            return cls.rational(0)
        poly = P.from_rational([-q, Fraction(0), Fraction(1)])
        if q > 0:
            return identify(poly, lambda bits: Disc(_sqrt_mid(q, bits), Fraction(0), Fraction(1, 1 << bits)))
        return identify(poly, lambda bits: Disc(Fraction(0), _sqrt_mid(-q, bits), Fraction(1, 1 << bits)))

    # basic properties ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def is_rational(self) -> bool:
        return len(self.poly) == 2

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(-self.poly[0], self.poly[1])

    def is_zero(self) -> bool:
        return self.poly == (0, 1)

    def is_real(self) -> bool:
        return self.is_rational() or rootset(self.poly).real[self.index]

    def height(self) -> int:
        """Naive height H: largest coefficient of the defining polynomial."""
        return P.height(self.poly)

    def enclosure(self, bits: int = 64) -> Disc:
        if self.is_rational():
            return Disc(self.as_fraction(), Fraction(0))
        return rootset(self.poly).disc(self.index, bits)

    def approx(self) -> complex:
        return self.enclosure(60).to_complex()

    # equality ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.as_fraction() == other
        if not isinstance(other, AlgNum):
            return NotImplemented
        return self.poly == other.poly and self.index == other.index

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.as_fraction())
        return hash((self.poly, self.index))

    def __repr__(self) -> str:
        if self.is_rational():
            return f"AlgNum({format_rational(self.as_fraction())})"
        z = self.approx()
        return f"AlgNum({z.real:.6g}{z.imag:+.6g}j, poly={list(self.poly)})"

    # arithmetic ------------------------------------------------------------
    def __neg__(self) -> "AlgNum":
        if self.is_rational():
            return AlgNum.rational(-self.as_fraction())
        return identify(P.primitive(P.negate_var(self.poly)), lambda b: -self.enclosure(b))

    def conjugate(self) -> "AlgNum":
        if self.is_real():
            return self
        return identify(self.poly, lambda b: self.enclosure(b).conjugate())

    def inverse(self) -> "AlgNum":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return AlgNum.rational(1 / self.as_fraction())
        return identify(P.primitive(P.reverse(self.poly)), lambda b: self.enclosure(b + 8).inverse())

    def __add__(self, other) -> "AlgNum":
        other = AlgNum.coerce(other)
        if other.is_rational():
            if self.is_rational():
                return AlgNum.rational(self.as_fraction() + other.as_fraction())
            return field_element(self, (other.as_fraction(), Fraction(1)))
        if self.is_rational():
            return other + self
        if self == other:
            return field_element(self, (Fraction(0), Fraction(2)))
        poly = P.composed_sum(self.poly, other.poly)
        return identify(poly, lambda b: self.enclosure(b) + other.enclosure(b))

    __radd__ = __add__

    def __sub__(self, other) -> "AlgNum":
        return self + (-AlgNum.coerce(other))

    def __rsub__(self, other) -> "AlgNum":
        return AlgNum.coerce(other) + (-self)

    def __mul__(self, other) -> "AlgNum":
        other = AlgNum.coerce(other)
        if other.is_rational():
            q = other.as_fraction()
            if self.is_rational():
                return AlgNum.rational(self.as_fraction() * q)
            if q == 0:
                return AlgNum.rational(0)
            return field_element(self, (Fraction(0), q))
        if self.is_rational():
            return other * self
        if self == other:
            return field_element(self, (Fraction(0), Fraction(0), Fraction(1)))
        poly = P.composed_product(self.poly, other.poly)
        return identify(poly, lambda b: self.enclosure(b) * other.enclosure(b))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "AlgNum":
        other = AlgNum.coerce(other)
        if other.is_zero():
            raise DivisionByZero("division by zero")
        return self * other.inverse()

    def __rtruediv__(self, other) -> "AlgNum":
        return AlgNum.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "AlgNum":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return AlgNum.rational(1)
        if self.is_rational():
            return AlgNum.rational(self.as_fraction() ** k)
        h = P.powmod((Fraction(0), Fraction(1)), k, self.poly)
        return field_element(self, h)

    # comparisons of real numbers and moduli ---------------------------------
    def sign(self) -> int:
        """Sign of a real algebraic number."""
        if not self.is_real():
            raise ValueError("sign of a non-real number")
        if self.is_rational():
            q = self.as_fraction()
            return (q > 0) - (q < 0)
        bits = 32
        while True:
            e = self.enclosure(bits)
            lo, hi = e.real_part_interval()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def compare(self, other) -> int:
        """Order of two real algebraic numbers: -1, 0 or 1."""
        other = AlgNum.coerce(other)
        if self == other:
            return 0
        if self.is_rational() and other.is_rational():
            a, b = self.as_fraction(), other.as_fraction()
            return (a > b) - (a < b)
        bits = 32
        while True:
            a_lo, a_hi = self.enclosure(bits).real_part_interval()
            b_lo, b_hi = other.enclosure(bits).real_part_interval()
            if a_hi < b_lo:
                return -1
            if b_hi < a_lo:
                return 1
            bits *= 2

    def abs2(self) -> "AlgNum":
        """|a|^2 = a * conj(a) as an exact real algebraic number."""
        if self.is_real():
            return self * self
        return self * self.conjugate()

    def cmp_abs_one(self) -> int:
        """Compare |a| with 1 exactly (never decided numerically at equality)."""
        if self.is_rational():
            q = abs(self.as_fraction())
            return (q > 1) - (q < 1)
        if not self.is_real() and _is_self_reciprocal(self.poly):
            recip = identify(self.poly, lambda b: self.enclosure(b + 8).inverse())
            if recip == self.conjugate():
                return 0
        return _cmp_abs_numeric(self, Fraction(1))

    def cmp_abs(self, other) -> int:
        """Compare |a| with |b| exactly."""
        other = AlgNum.coerce(other)
        if other.is_rational():
            q = abs(other.as_fraction())
            if q == 1:
                return self.cmp_abs_one()
            if self.is_rational():
                p = abs(self.as_fraction())
                return (p > q) - (p < q)
        if self == other or self == other.conjugate() or (-self) == other or (-self) == other.conjugate():
            return 0
        bits = 32
        exact_checked = False
        while True:
            a = self.enclosure(bits)
            b = other.enclosure(bits)
            if a.abs_upper() < b.abs_lower():
                return -1
            if b.abs_upper() < a.abs_lower():
                return 1
            if not exact_checked and bits >= 64:
                exact_checked = True
                if self.abs2() == other.abs2():
                    return 0
            bits *= 2

    def root_of_unity_order(self) -> int | None:
        """Order k of a root of unity (minimal k with a^k = 1), or None."""
        if self.is_zero():
            return None
        e = self.degree
        # phi(k) >= sqrt(k/2), so phi(k) = e forces k <= 2 e^2
        for k in range(1, 2 * e * e + 3):
            if P.euler_phi(k) == e and P.cyclotomic(k) == self.poly:
                return k
        return None

    def weil_height(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Certified interval [lo, hi] containing the absolute logarithmic Weil height."""
        if self.is_zero():
            raise ValueError("height of zero")
        with iv_workprec(bits + 20) as iv:
            if self.is_rational():
                # h(p/q) = log max(|p|, |q|)
                q = self.as_fraction()
                h = iv.log(iv.mpf(max(abs(q.numerator), q.denominator)))
            else:
                total = iv.log(iv.mpf(abs(self.poly[-1])))
                rs = rootset(self.poly)
                for i in range(self.degree):
                    d = rs.disc(i, bits)
                    lo, hi = max(d.abs_lower(), Fraction(1)), max(d.abs_upper(), Fraction(1))
                    total += iv.log(iv_from_fractions(lo, hi))
                h = total / self.degree
            lo, hi = iv_bounds(h)
        return max(lo, Fraction(0)), hi

    def refine(self, width) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Rectangle (re_lo, re_hi, im_lo, im_hi) of width <= ``width`` containing a."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        if self.is_rational():
            q = self.as_fraction()
            return (q, q, Fraction(0), Fraction(0))
        bits = 1
        while Fraction(1, 1 << bits) > width / 2:
            bits += 1
        d = self.enclosure(bits)
        if self.is_real():
            return (d.re - d.rad, d.re + d.rad, Fraction(0), Fraction(0))
        return d.box()

    # serialisation ---------------------------------------------------------
    def to_json(self) -> dict:
        if self.is_rational():
            re_lo = re_hi = self.as_fraction()
            im_lo = im_hi = Fraction(0)
        else:
            re_lo, re_hi, im_lo, im_hi = self.refine(Fraction(1, 1 << 40))
            # outward rounding to short dyadics keeps the box an enclosure
            re_lo, im_lo = dyadic_floor(re_lo, 48), dyadic_floor(im_lo, 48)
            re_hi, im_hi = dyadic_ceil(re_hi, 48), dyadic_ceil(im_hi, 48)
        return {
            "poly": [str(c) for c in self.poly],
            "box": [[format_rational(re_lo), format_rational(im_lo)],
                    [format_rational(re_hi), format_rational(im_hi)]],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlgNum":
        poly = P.primitive(int(c) for c in data["poly"])
        (rl, il), (rh, ih) = data["box"]
        rl, il, rh, ih = map(parse_rational, (rl, il, rh, ih))
        box = Disc((rl + rh) / 2, (il + ih) / 2, sqrt_up(((rh - rl) / 2) ** 2 + ((ih - il) / 2) ** 2))
        return identify(poly, lambda bits: box)


def _sqrt_mid(q: Fraction, bits: int) -> Fraction:
    from .interval import sqrt_down
    return sqrt_down(q, bits)


def _is_self_reciprocal(poly: P.IntPoly) -> bool:
    r = P.reverse(poly)
    return r == poly or r == tuple(-c for c in poly)


def _cmp_abs_numeric(a: AlgNum, q: Fraction) -> int:
    """Compare |a| to a positive rational; caller guarantees |a| != q."""
    bits = 32
    while True:
        e = a.enclosure(bits)
        if e.abs_upper() < q:
            return -1
        if e.abs_lower() > q:
            return 1
        bits *= 2
        if bits > 1 << 16:
            raise InternalInconsistency(f"modulus comparison did not separate for {a!r}")


def identify(poly: Sequence[int], enclosure: Callable[[int], Disc]) -> AlgNum:
    """The unique root of ``poly`` lying in the shrinking enclosures.

    ``poly`` need not be irreducible or square-free; it is factored and the
    candidate roots are narrowed until one remains.
    """
    poly = P.primitive(poly)
    candidates: list[tuple[P.IntPoly, int]] = []
    for f, _ in P.factor(poly):
        candidates.extend((f, i) for i in range(len(f) - 1))
    bits = 24
    while True:
        enc = enclosure(bits)
        alive = []
        for f, i in candidates:
            d = rootset(f).disc(i, bits) if len(f) > 2 else Disc(Fraction(-f[0], f[1]), Fraction(0))
            if d.intersects(enc):
                alive.append((f, i))
        if len(alive) == 1:
            return AlgNum(*alive[0])
        if not alive:
            raise InternalInconsistency(f"no root of {poly} in enclosure {enc}")
        candidates = alive
        bits *= 2
        if bits > 1 << 16:
            raise InternalInconsistency(f"could not separate roots of {poly}")


def field_element(alpha: AlgNum, h: Sequence[Fraction]) -> AlgNum:
    """The number h(alpha) for a rational polynomial h (lowest degree first)."""
    f = alpha.poly
    if alpha.is_rational():
        return AlgNum.rational(P.evaluate([Fraction(c) for c in h], alpha.as_fraction()))
    r = P.rem([Fraction(c) for c in h], f)
    if len(r) <= 1:
        return AlgNum.rational(r[0] if r else 0)
    e = len(f) - 1
    cols = []
    basis_elem: tuple = (Fraction(1),)
    for _ in range(e):
        prod = P.rem(P.mul(r, basis_elem), f)
        cols.append([prod[i] if i < len(prod) else Fraction(0) for i in range(e)])
        basis_elem = P.mul(basis_elem, (Fraction(0), Fraction(1)))
    mat = [[cols[j][i] for j in range(e)] for i in range(e)]
    cp = P.from_rational(linalg.charpoly(mat))
    return identify(cp, lambda bits: eval_disc(r, alpha.enclosure(bits + 8)))


def eval_disc(h: Sequence[Fraction], z: Disc) -> Disc:
    acc = Disc(Fraction(0), Fraction(0))
    for c in reversed(h):
        acc = acc * z + Disc(Fraction(c), Fraction(0))
    return acc


def poly_roots(p: Sequence) -> list[tuple[AlgNum, int]]:
    """All complex roots of a nonzero rational/integer polynomial with multiplicities."""
    ip = P.from_rational([Fraction(c) for c in p])
    if not ip:
        raise ValueError("zero polynomial")
    out = []
    for f, mult in P.factor(ip):
        for i in range(len(f) - 1):
            out.append((AlgNum(f, i), mult))
    return out


def eq_rational(a: AlgNum, q) -> bool:
    return a.is_rational() and a.as_fraction() == Fraction(q)


def gcd_int(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
