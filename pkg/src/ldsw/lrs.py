"""Rational linear recurrence sequences.

Convention: ``u_{n+d} = sum_i a_i u_{n+i}`` with ``coeffs = (a_0, ..., a_{d-1})`` and
``initial = (u_0, ..., u_{d-1})``.  A minimal recurrence may have ``a_0 = 0``; this
happens exactly when the sequence has a transient prefix (the characteristic
polynomial is divisible by x).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InternalInconsistency, ZeroSequence
from .exactnum import linalg, poly as P
from .exactnum.algnum import AlgNum, field_element
from .exactnum.algpoly import AlgPolyExpr
from .exactnum.interval import Disc
from .exactnum.rational import as_fraction_matrix, as_fraction_vector, format_rational, parse_rational
from .polyweight import PolyWeight

Q = Fraction


@dataclass(frozen=True)
class Lrs:
    coeffs: tuple[Fraction, ...]
    initial: tuple[Fraction, ...]

    def __post_init__(self):
        c = tuple(parse_rational(x) for x in self.coeffs)
        u = tuple(parse_rational(x) for x in self.initial)
        if len(c) != len(u):
            raise DimensionMismatch("coeffs and initial values differ in length")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "initial", u)

    # constructors --------------------------------------------------------
    @classmethod
    def zero(cls) -> "Lrs":
        return cls((), ())

    @classmethod
    def constant(cls, c) -> "Lrs":
        c = parse_rational(c)
        return cls.zero() if c == 0 else cls((Q(1),), (c,))

    @classmethod
    def geometric(cls, ratio, scale=1) -> "Lrs":
        """scale * ratio^n."""
        ratio, scale = parse_rational(ratio), parse_rational(scale)
        if scale == 0:
            return cls.zero()
        return cls((ratio,), (scale,))

    @classmethod
    def identity(cls) -> "Lrs":
        """The sequence u_n = n."""
        return cls((Q(-1), Q(2)), (Q(0), Q(1)))

    @classmethod
    def from_terms(cls, terms: Sequence) -> "Lrs":
        """Minimal recurrence consistent with the given terms (Berlekamp-Massey)."""
        return _berlekamp_massey([parse_rational(t) for t in terms])

    # basic queries -------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.initial)

    def charpoly(self) -> tuple[Fraction, ...]:
        """x^d - sum a_i x^i, lowest degree first."""
        return tuple(-a for a in self.coeffs) + (Q(1),)

    def terms(self, count: int) -> list[Fraction]:
        d = self.order
        out = list(self.initial[:count])
        if d == 0:
            return [Q(0)] * count
        a = self.coeffs
        while len(out) < count:
            n = len(out) - d
            out.append(sum((a[i] * out[n + i] for i in range(d) if a[i]), Q(0)))
        return out

    def term(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("negative index")
        if self.order == 0:
            return Q(0)
        if n < self.order:
            return self.initial[n]
        if n > 8 * self.order + 64:
            # x^n mod the characteristic polynomial: u_n = sum_j r_j u_j
            r = P.powmod((Q(0), Q(1)), n, self.charpoly())
            return sum((c * u for c, u in zip(r, self.initial)), Q(0))
        window = list(self.initial)
        a = self.coeffs
        for _ in range(n - self.order + 1):
            nxt = sum((a[i] * window[i] for i in range(self.order) if a[i]), Q(0))
            window = window[1:] + [nxt]
        return window[-1]

    # operators -------------------------------------------------------------
    def __add__(self, other: "Lrs") -> "Lrs":
        return add(self, other)

    def __sub__(self, other: "Lrs") -> "Lrs":
        return add(self, other.scale(-1))

    def __mul__(self, other: "Lrs") -> "Lrs":
        return mul(self, other)

    def scale(self, c) -> "Lrs":
        c = parse_rational(c)
        if c == 0:
            return Lrs.zero()
        return Lrs(self.coeffs, tuple(c * x for x in self.initial))

    def shift(self, k: int) -> "Lrs":
        """n -> u_{n+k}."""
        return Lrs(self.coeffs, tuple(self.terms(self.order + k)[k:]))

    def to_json(self) -> dict:
        return {"coeffs": [format_rational(a) for a in self.coeffs],
                "initial": [format_rational(u) for u in self.initial]}

    @classmethod
    def from_json(cls, data: dict) -> "Lrs":
        return cls(tuple(data["coeffs"]), tuple(data["initial"]))


def _berlekamp_massey(seq: list[Fraction]) -> Lrs:
    conn = [Q(1)]
    prev = [Q(1)]
    length, gap, last = 0, 1, Q(1)
    for n, x in enumerate(seq):
        disc = x
        for i in range(1, length + 1):
            if i < len(conn):
                disc += conn[i] * seq[n - i]
        if disc == 0:
            gap += 1
            continue
        factor = disc / last
        new = conn + [Q(0)] * max(0, len(prev) + gap - len(conn))
        for i, c in enumerate(prev):
            new[i + gap] -= factor * c
        if 2 * length <= n:
            prev, last = conn, disc
            length = n + 1 - length
            gap = 1
        else:
            gap += 1
        conn = new
    if length == 0:
        return Lrs.zero()
    conn = conn + [Q(0)] * (length + 1 - len(conn))
    coeffs = tuple(-conn[length - j] for j in range(length))
    return Lrs(coeffs, tuple(seq[:length]))


def minimize(s: Lrs) -> Lrs:
    """Minimal-order recurrence for the same sequence."""
    if s.order == 0:
        return s
    return _berlekamp_massey(s.terms(2 * s.order))


def companion(s: Lrs) -> tuple[list[list[Fraction]], list[Fraction]]:
    """(C, q) with u_n = e_1^T C^n q.  C is singular iff the sequence has a transient."""
    s = minimize(s)
    if s.order == 0:
        raise ZeroSequence("the zero sequence has no companion matrix")
    d = s.order
    C = [[Q(1) if j == i + 1 else Q(0) for j in range(d)] for i in range(d - 1)]
    C.append(list(s.coeffs))
    return C, list(s.initial)


def add(s: Lrs, t: Lrs) -> Lrs:
    n = 2 * (s.order + t.order)
    return _berlekamp_massey([a + b for a, b in zip(s.terms(n), t.terms(n))])


def mul(s: Lrs, t: Lrs) -> Lrs:
    n = 2 * s.order * t.order
    return _berlekamp_massey([a * b for a, b in zip(s.terms(n), t.terms(n))])


def _orbit(M, q, count: int) -> list[list[Fraction]]:
    out = [list(q)]
    for _ in range(count - 1):
        out.append(linalg.matvec(M, out[-1]))
    return out


def _check_system(M, q) -> tuple[list[list[Fraction]], list[Fraction]]:
    M = as_fraction_matrix(M)
    q = as_fraction_vector(q)
    d = len(M)
    if any(len(row) != d for row in M):
        raise DimensionMismatch("matrix is not square")
    if len(q) != d:
        raise DimensionMismatch(f"vector of length {len(q)} for a {d}x{d} matrix")
    return M, q


def lds_coordinate(M, q, i: int) -> Lrs:
    """The sequence e_i^T M^n q (0-based index i)."""
    M, q = _check_system(M, q)
    d = len(M)
    if not 0 <= i < d:
        raise DimensionMismatch(f"coordinate {i} out of range for dimension {d}")
    return _berlekamp_massey([x[i] for x in _orbit(M, q, 2 * d)])


def weight_sequence(M, q, w: PolyWeight) -> Lrs:
    """The sequence w(M^n q).

    Its order is at most the dimension of the sum of the symmetric powers
    Sym^k(Q^d) over the total degrees k occurring in w, so that many terms
    determine it through Berlekamp-Massey.
    """
    M, q = _check_system(M, q)
    d = len(M)
    if w.arity != d:
        raise DimensionMismatch(f"weight of arity {w.arity} for dimension {d}")
    degrees = {sum(e) for _, e in w.monomials}
    bound = sum(comb(d + k - 1, k) for k in degrees)
    return _berlekamp_massey([w(x) for x in _orbit(M, q, 2 * bound)])


def partial_sums(s: Lrs) -> Lrs:
    """n -> sum_{k<=n} u_k."""
    if s.order == 0:
        return s
    chi = P.mul(s.charpoly(), (Q(-1), Q(1)))
    coeffs = tuple(-c for c in chi[:-1])
    acc, init = Q(0), []
    for x in s.terms(s.order + 1):
        acc += x
        init.append(acc)
    return minimize(Lrs(coeffs, tuple(init)))


# ---------------------------------------------------------------------------
# exponential-polynomial form


class ExpPolyComponent:
    """Contribution of one irreducible factor g^m of the characteristic polynomial.

    The contribution is ``sum_k n^k Tr(h_k(lam) lam^n)`` summed over the roots lam
    of g, with rational polynomials h_k of degree < deg g.
    """

    def __init__(self, g: P.IntPoly, mult: int, h: Sequence[Sequence[Fraction]]):
        self.g = tuple(g)
        self.mult = mult
        self.h = tuple(tuple(x) for x in h)
        self._sums = P.power_sums(self.g, len(self.g) + 1)

    @property
    def degree(self) -> int:
        return len(self.g) - 1

    def _power_sum(self, k: int) -> Fraction:
        s = self._sums
        e = self.degree
        lead = Fraction(self.g[-1])
        c = [Fraction(x) / lead for x in self.g]
        while len(s) <= k:
            n = len(s)
            s.append(-sum((c[i] * s[n - e + i] for i in range(e)), Q(0)))
        return s[k]

    def value(self, n: int) -> Fraction:
        total = Q(0)
        for k, hk in enumerate(self.h):
            inner = sum((c * self._power_sum(j + n) for j, c in enumerate(hk) if c), Q(0))
            total += inner * (n ** k)
        return total

    @cached_property
    def roots(self) -> list[AlgNum]:
        return [AlgNum(self.g, i) for i in range(self.degree)]

    @cached_property
    def coefficient_polys(self) -> list[tuple[AlgNum, tuple[AlgNum, ...]]]:
        """(lam, (c_0, ..., c_{m-1})) with p_lam(n) = sum_k c_k n^k."""
        out = []
        for lam in self.roots:
            out.append((lam, tuple(field_element(lam, hk) for hk in self.h)))
        return out

    def leading_coefficient(self, lam: AlgNum) -> AlgNum:
        return field_element(lam, self.h[-1])


class ExpPolyForm:
    """u_n = transient_n + sum_j p_j(n) lam_j^n, with transient_n = 0 for n >= len(transient)."""

    def __init__(self, components: Sequence[ExpPolyComponent], transient: Sequence[Fraction] = ()):
        self.components = tuple(components)
        self.transient = tuple(transient)

    @property
    def length(self) -> int:
        """sum_j (deg p_j + 1)."""
        return sum(c.mult * c.degree for c in self.components)

    @cached_property
    def terms(self) -> list[tuple[AlgNum, AlgPolyExpr]]:
        out = []
        for comp in self.components:
            for lam, cs in comp.coefficient_polys:
                out.append((lam, AlgPolyExpr.univariate(cs)))
        return out

    def roots(self) -> list[AlgNum]:
        return [lam for comp in self.components for lam in comp.roots]

    def value(self, n: int) -> Fraction:
        v = sum((c.value(n) for c in self.components), Q(0))
        if n < len(self.transient):
            v += self.transient[n]
        return v

    def evaluate_disc(self, n: int, bits: int = 64) -> Disc:
        """Certified complex enclosure of the form at n, built from the individual terms."""
        acc = Disc(self.transient[n] if n < len(self.transient) else Q(0), Q(0))
        for comp in self.components:
            for lam, cs in comp.coefficient_polys:
                z = lam.enclosure(bits)
                pv = Disc(Q(0), Q(0))
                for c in reversed(cs):
                    pv = pv * Q(n) + c.enclosure(bits)
                acc = acc + pv * (z ** n)
        return acc


def _idempotent(chi: Sequence[Fraction], factor_pow: Sequence[Fraction]) -> tuple:
    """e with e = 1 mod factor_pow and e = 0 mod chi/factor_pow (reduced mod chi)."""
    other, r = P.divmod_(chi, factor_pow)
    if any(r):
        raise InternalInconsistency("factor does not divide characteristic polynomial")
    g, a, b = P.xgcd(factor_pow, other)
    # a*F + b*G = g with g = 1 (monic gcd)
    if P.trim(g) != (Q(1),):
        raise InternalInconsistency("factors not coprime")
    return P.rem(P.mul(b, other), chi)


def _apply_shift_poly(e: Sequence[Fraction], terms: Sequence[Fraction], count: int) -> list[Fraction]:
    """(e(S) u)_n for n < count, where S is the left shift."""
    return [sum((c * terms[n + t] for t, c in enumerate(e) if c), Q(0)) for n in range(count)]


def exp_poly(s: Lrs) -> ExpPolyForm:
    s = minimize(s)
    if s.order == 0:
        raise ZeroSequence("the zero sequence has no exponential-polynomial form")
    chi = s.charpoly()
    factors = P.factor(P.from_rational(chi))
    # enough terms for every shifted component evaluation
    max_len = max(m * (len(g) - 1) for g, m in factors)
    terms = s.terms(max_len + 2 * s.order + 1)
    components = []
    transient: list[Fraction] = []
    for g, m in factors:
        gm = P.pow_(tuple(Q(c) for c in g), m)
        e = _idempotent(chi, gm) if len(factors) > 1 else (Q(1),)
        deg = len(g) - 1
        size = m * deg
        part = _apply_shift_poly(e, terms, size)
        if g == (0, 1):
            transient = part  # (x^m)-component: vanishes from index m on
            continue
        comp = ExpPolyComponent(g, m, [[Q(0)] * deg for _ in range(m)])
        rows = []
        for n in range(size):
            rows.append([Q(n ** k) * comp._power_sum(j + n) for k in range(m) for j in range(deg)])
        sol = linalg.solve(rows, part)
        if sol is None:
            raise InternalInconsistency("exponential-polynomial system is singular")
        h = [tuple(sol[k * deg:(k + 1) * deg]) for k in range(m)]
        components.append(ExpPolyComponent(g, m, h))
    form = ExpPolyForm(components, transient)
    for n in range(2 * s.order):
        if form.value(n) != terms[n]:
            raise InternalInconsistency("exponential-polynomial form does not reproduce the sequence")
    return form


def first_nonzero(form: ExpPolyForm) -> int:
    """Least n with u_n != 0 (searching the order-bounded window)."""
    bound = len(form.transient) + form.length
    for n in range(bound):
        if form.value(n) != 0:
            return n
    raise InternalInconsistency("exponential-polynomial form vanishes on its zero-test window")


# ---------------------------------------------------------------------------
# non-degenerate decomposition


@dataclass(frozen=True)
class NondegenerateSplit:
    modulus: int
    subsequences: tuple[Lrs, ...]


def _angle(lam: AlgNum) -> float:
    z = lam.approx()
    return cmath.phase(z) / (2 * math.pi)


def _ratio_order(a: AlgNum, b: AlgNum) -> int | None:
    """Order of a/b as a root of unity, or None."""
    ea, eb = a.enclosure(64), b.enclosure(64)
    if ea.abs_upper() < eb.abs_lower() or eb.abs_upper() < ea.abs_lower():
        return None
    bound = a.degree * b.degree
    theta = _angle(a) - _angle(b)
    for k in range(1, 2 * bound * bound + 3):
        if P.euler_phi(k) > bound:
            continue
        x = k * theta
        if abs(x - round(x)) > 1e-7:
            continue
        if a ** k == b ** k:
            return k
    return None


def degeneracy_modulus(roots: Sequence[AlgNum]) -> int:
    """Least common multiple of root-of-unity orders of pairwise root ratios,
    doubled when some root raised to that power is a negative real."""
    R = 1
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            k = _ratio_order(roots[i], roots[j])
            if k is not None:
                R = R * k // math.gcd(R, k)
    for lam in roots:
        x = R * _angle(lam)
        if abs(abs(x - math.floor(x)) - 0.5) < 1e-7:
            p = lam ** R
            if p.is_real() and p.sign() < 0:
                return 2 * R
    return R


def is_nondegenerate(s: Lrs) -> bool:
    s = minimize(s)
    if s.order == 0:
        return True
    roots = exp_poly(s).roots()
    return degeneracy_modulus(roots) == 1


def subsequence(s: Lrs, R: int, r: int) -> Lrs:
    """n -> u_{nR + r}."""
    d = s.order
    if d == 0:
        return s
    terms = s.terms(2 * d * R + r + 1)
    return _berlekamp_massey([terms[n * R + r] for n in range(2 * d)])


def nondegenerate_split(s: Lrs) -> NondegenerateSplit:
    s = minimize(s)
    if s.order == 0:
        raise ZeroSequence("cannot split the zero sequence")
    R = degeneracy_modulus(exp_poly(s).roots())
    return NondegenerateSplit(R, tuple(subsequence(s, R, r) for r in range(R)))
