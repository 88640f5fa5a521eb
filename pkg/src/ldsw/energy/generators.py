"""Instance generators showing why higher dimensions are hard.

``gen_positivity_reduction`` doubles a Markov chain so that the energy
constraint holds exactly when the first coordinate of ``P^{n+1} iota`` never
drops below 1/2.  ``gen_diophantine_instance`` builds a four-dimensional system
whose partial sums are ``u_{n+1}`` for ``u_n = r Im(lam^n) - n Re(lam^n) + n``.
"""
from __future__ import annotations

from fractions import Fraction

from ..exactnum import linalg
from ..exactnum.rational import parse_rational
from ..lrs import _orbit
from ..polyweight import PolyWeight
from ..stochastic import check_stochastic
from .instance import EnergyInstance

Q = Fraction


def gen_positivity_reduction(P, iota) -> EnergyInstance:
    """Instance on diag(P, P) from (iota/2, P iota/2) with weight 2(x_{d+1} - x_1).

    The weights telescope: the partial sum up to n is (P^{n+1} iota)_1 - iota_1.
    With budget iota_1 - 1/2 the constraint says (P^{n+1} iota)_1 >= 1/2 for all
    n.  That budget is negative when iota_1 < 1/2, so the instance is built with
    ``allow_negative_budget``.
    """
    P, iota = check_stochastic(P, iota)
    d = len(P)
    M = [[Q(0)] * (2 * d) for _ in range(2 * d)]
    for i in range(d):
        for j in range(d):
            M[i][j] = P[i][j]
            M[d + i][d + j] = P[i][j]
    Pi = linalg.matvec(P, iota)
    q = [x / 2 for x in iota] + [x / 2 for x in Pi]
    w = PolyWeight(2 * d, [(2, _unit(2 * d, d)), (-2, _unit(2 * d, 0))])
    return EnergyInstance(M, q, w, iota[0] - Q(1, 2), Q(1), allow_negative_budget=True)


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(n))


def gen_diophantine_instance(a, b, r) -> EnergyInstance:
    """Four-dimensional instance for lam = a + b i whose partial sums are u_{n+1}."""
    a, b, r = parse_rational(a), parse_rational(b), parse_rational(r)
    if a == 0 and b == 0:
        raise ValueError("lambda must be nonzero")
    M = [[a, -b, Q(1), Q(0)],
         [b, a, Q(0), Q(1)],
         [Q(0), Q(0), a, -b],
         [Q(0), Q(0), b, a]]
    q = [Q(0), Q(0), Q(0), Q(1)]
    # with z_n = lam^n, the orbit is (Re(n lam^{n-1}), Im(n lam^{n-1}), Re z_n, Im z_n);
    # the weight is u_{n+1} - u_n written in those coordinates
    x1, x2, x3, x4 = (_unit(4, i) for i in range(4))
    mons = [
        (r * (1 - a), x3), (r * b, x4),            # r (Im z_{n+1} - Im z_n)
        (-(a * a - b * b), x2), (-2 * a * b, x1),  # -(n+1) Re z_{n+1}, polynomial part
        (-a, x4), (-b, x3),
        (a, x2), (b, x1),                          # + n Re z_n
        (Q(1), (0, 0, 0, 0)),
    ]
    return EnergyInstance(M, q, PolyWeight(4, mons), Q(0), Q(1))


def diophantine_sequence(a, b, r, count: int) -> list[Fraction]:
    """u_n = r Im(lam^n) - n Re(lam^n) + n for n < count."""
    a, b, r = parse_rational(a), parse_rational(b), parse_rational(r)
    out = []
    re, im = Q(1), Q(0)
    for n in range(count):
        out.append(r * im - n * re + n)
        re, im = re * a - im * b, re * b + im * a
    return out


def partial_sums(inst: EnergyInstance, count: int) -> list[Fraction]:
    """sum_{k<=n} delta^k w(M^k q) for n < count, by direct summation."""
    acc, out, disc = Q(0), [], Q(1)
    for x in _orbit(inst.M, inst.q, count):
        acc += disc * inst.w(x)
        out.append(acc)
        disc *= inst.delta
    return out


def audit_positivity_reduction(P, iota, horizon: int = 100) -> bool:
    """partial sum >= -budget  <=>  (P^{n+1} iota)_1 >= 1/2, for n <= horizon."""
    inst = gen_positivity_reduction(P, iota)
    P, iota = check_stochastic(P, iota)
    sums = partial_sums(inst, horizon + 1)
    x = linalg.matvec(P, iota)
    for n in range(horizon + 1):
        if (sums[n] >= -inst.budget) != (x[0] >= Q(1, 2)):
            return False
        x = linalg.matvec(P, x)
    return True


def audit_diophantine(a, b, r, horizon: int = 100) -> bool:
    """Partial sums equal u_{n+1} for n <= horizon."""
    inst = gen_diophantine_instance(a, b, r)
    return partial_sums(inst, horizon + 1) == diophantine_sequence(a, b, r, horizon + 2)[1:]
