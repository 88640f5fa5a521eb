"""Integer and rational univariate polynomials as coefficient tuples, lowest degree first."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import comb, gcd, lcm
from typing import Sequence

from sympy.polys.domains import ZZ
from sympy.polys.factortools import dup_factor_list

IntPoly = tuple[int, ...]


def trim(p: Sequence) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Sequence) -> int:
    p = trim(p)
    return len(p) - 1 if p else -1


def height(p: Sequence[int]) -> int:
    """Naive height: largest coefficient magnitude."""
    return max((abs(c) for c in p), default=0)


def content(p: Sequence[int]) -> int:
    return reduce(gcd, (abs(int(c)) for c in p), 0)


def primitive(p: Sequence[int]) -> IntPoly:
    """Divide out the content and make the leading coefficient positive."""
    p = trim(int(c) for c in p)
    if not p:
        return ()
    c = content(p)
    if p[-1] < 0:
        c = -c
    return tuple(x // c for x in p)


def from_rational(coeffs: Sequence[Fraction]) -> IntPoly:
    """Primitive integer polynomial with the same roots as a rational one."""
    coeffs = trim(Fraction(c) for c in coeffs)
    if not coeffs:
        return ()
    den = reduce(lcm, (c.denominator for c in coeffs), 1)
    return primitive(int(c * den) for c in coeffs)


def add(p: Sequence, q: Sequence) -> tuple:
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def scale(p: Sequence, c) -> tuple:
    return trim(c * x for x in p)


def sub(p: Sequence, q: Sequence) -> tuple:
    return add(p, scale(q, -1))


def mul(p: Sequence, q: Sequence) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def pow_(p: Sequence, k: int) -> tuple:
    out: tuple = (1,)
    for _ in range(k):
        out = mul(out, p)
    return out


def derivative(p: Sequence) -> tuple:
    return trim(i * c for i, c in enumerate(p) if i > 0)


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def negate_var(p: Sequence) -> tuple:
    """p(-x)."""
    return tuple(c if i % 2 == 0 else -c for i, c in enumerate(p))


def reverse(p: Sequence) -> tuple:
    """x^deg p(1/x)."""
    return trim(reversed(trim(p)))


def divmod_(p: Sequence, q: Sequence) -> tuple[tuple, tuple]:
    """Division over the rationals."""
    p = [Fraction(c) for c in trim(p)]
    q = [Fraction(c) for c in trim(q)]
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return (), tuple(p)
    quot = [Fraction(0)] * (len(p) - len(q) + 1)
    lead = q[-1]
    for i in range(len(p) - len(q), -1, -1):
        c = p[i + len(q) - 1] / lead
        quot[i] = c
        if c:
            for j, b in enumerate(q):
                p[i + j] -= c * b
    return trim(quot), trim(p[: len(q) - 1])


def rem(p: Sequence, q: Sequence) -> tuple:
    return divmod_(p, q)[1]


def gcd_(p: Sequence, q: Sequence) -> tuple:
    """Monic gcd over the rationals."""
    a, b = trim(Fraction(c) for c in p), trim(Fraction(c) for c in q)
    while b:
        a, b = b, rem(a, b)
    if not a:
        return ()
    lead = a[-1]
    return tuple(c / lead for c in a)


def xgcd(p: Sequence, q: Sequence) -> tuple[tuple, tuple, tuple]:
    """(g, s, t) with s p + t q = g monic, over the rationals."""
    r0, r1 = trim(Fraction(c) for c in p), trim(Fraction(c) for c in q)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        quo, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    lead = r0[-1]
    return (tuple(c / lead for c in r0), scale(s0, 1 / lead), scale(t0, 1 / lead))


def powmod(base: Sequence, k: int, modulus: Sequence) -> tuple:
    result: tuple = (Fraction(1),)
    b = rem(base, modulus)
    while k:
        if k & 1:
            result = rem(mul(result, b), modulus)
        k >>= 1
        if k:
            b = rem(mul(b, b), modulus)
    return result


@lru_cache(maxsize=4096)
def factor(p: IntPoly) -> tuple[tuple[IntPoly, int], ...]:
    """Irreducible factorisation over the integers.

    Returns primitive factors with positive leading coefficient and their
    multiplicities; the unit/content is dropped.
    """
    p = trim(p)
    if len(p) <= 1:
        return ()
    _, facs = dup_factor_list([ZZ(int(c)) for c in reversed(p)], ZZ)
    out = []
    for f, mult in facs:
        out.append((primitive(int(c) for c in reversed(f)), mult))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return tuple(out)


def squarefree_part(p: IntPoly) -> IntPoly:
    out: tuple = (1,)
    for f, _ in factor(p):
        out = mul(out, f)
    return primitive(out)


def power_sums(p: Sequence, count: int) -> list[Fraction]:
    """Newton power sums s_0..s_{count-1} of the roots of p (with multiplicity)."""
    p = trim(p)
    d = len(p) - 1
    lead = Fraction(p[-1])
    # monic e-coefficients: x^d + c_{d-1} x^{d-1} + ... ; c_k = p[k]/lead
    c = [Fraction(x) / lead for x in p]
    s = [Fraction(d)]
    for k in range(1, count):
        # s_k + c_{d-1} s_{k-1} + ... + c_{d-k+1} s_1 + k c_{d-k} = 0   (k <= d)
        # s_k + c_{d-1} s_{k-1} + ... + c_0 s_{k-d} = 0                 (k > d)
        acc = Fraction(0)
        for i in range(1, min(k, d) + 1):
            if i < k:
                acc += c[d - i] * s[k - i]
            else:
                acc += k * c[d - k]
        s.append(-acc)
    return s


def from_power_sums(s: Sequence[Fraction], d: int) -> IntPoly:
    """Monic degree-d polynomial whose roots have power sums s_1..s_d (as primitive integer poly)."""
    e = [Fraction(1)]
    for k in range(1, d + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i]
        e.append(acc / k)
    # x^d - e1 x^{d-1} + e2 x^{d-2} - ...
    coeffs = [Fraction(0)] * (d + 1)
    for k in range(d + 1):
        coeffs[d - k] = (-1) ** k * e[k]
    return from_rational(coeffs)


def composed_sum(p: IntPoly, q: IntPoly) -> IntPoly:
    """Polynomial whose roots are alpha + beta over roots alpha of p, beta of q.

    Equals the resultant Res_y(p(y), q(x - y)) up to a constant factor.
    """
    dp, dq = degree(p), degree(q)
    n = dp * dq
    sp, sq = power_sums(p, n + 1), power_sums(q, n + 1)
    s = [sum((comb(k, t) * sp[t] * sq[k - t] for t in range(k + 1)), Fraction(0)) for k in range(n + 1)]
    return from_power_sums(s, n)


def composed_product(p: IntPoly, q: IntPoly) -> IntPoly:
    """Polynomial whose roots are alpha * beta (the resultant Res_y(p(y), y^deg q(x/y)) up to scale)."""
    dp, dq = degree(p), degree(q)
    n = dp * dq
    sp, sq = power_sums(p, n + 1), power_sums(q, n + 1)
    return from_power_sums([a * b for a, b in zip(sp, sq)], n)


@lru_cache(maxsize=256)
def cyclotomic(k: int) -> IntPoly:
    """The k-th cyclotomic polynomial."""
    num: tuple = (-1,) + (0,) * (k - 1) + (1,)
    for d in range(1, k):
        if k % d == 0:
            num, r = divmod_(num, cyclotomic(d))
            assert not r
    return primitive(int(c) for c in num)


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result
