from fractions import Fraction as F
import cmath
import math

import mpmath
import pytest

from ldsw.exactnum import linalg, poly as P
from ldsw.exactnum.algnum import AlgNum, poly_roots
from ldsw.exactnum.interval import Disc, sqrt_down, sqrt_up
from ldsw.exactnum.rational import format_rational, format_rational_full, parse_rational


# rationals ----------------------------------------------------------------

@pytest.mark.parametrize("text,value", [("3/4", F(3, 4)), ("-2", F(-2)), (" 6/8 ", F(3, 4)), (5, F(5))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", [0.5, "0.5", "1/0", "", "a/b", True, None])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational():
    assert format_rational(F(2)) == "2"
    assert format_rational_full(F(2)) == "2/1"
    assert format_rational_full(F(0)) == "0/1"
    assert format_rational(F(-3, 6)) == "-1/2"


# linear algebra -------------------------------------------------------------

def test_charpoly_and_cayley_hamilton():
    M = [[F(1), F(2), F(0)], [F(-1), F(1, 2), F(3)], [F(0), F(1), F(-2)]]
    c = linalg.charpoly(M)
    assert c[-1] == 1 and len(c) == 4
    acc = [[F(0)] * 3 for _ in range(3)]
    power = linalg.identity(3)
    for coeff in c:
        acc = [[a + coeff * b for a, b in zip(r1, r2)] for r1, r2 in zip(acc, power)]
        power = linalg.matmul(power, M)
    assert all(x == 0 for row in acc for x in row)


def test_solve_and_nullspace():
    A = [[F(1), F(2)], [F(2), F(4)]]
    assert linalg.rank(A) == 1
    ns = linalg.nullspace(A)
    assert len(ns) == 1 and linalg.matvec(A, ns[0]) == [0, 0]
    assert linalg.solve([[F(2), F(1)], [F(1), F(3)]], [F(3), F(5)]) == [F(4, 5), F(7, 5)]


def test_matpow():
    M = [[F(1), F(1)], [F(0), F(1)]]
    assert linalg.matpow(M, 10) == [[1, 10], [0, 1]]


# polynomials ----------------------------------------------------------------

def test_poly_divmod_gcd():
    p = P.mul((F(-1), F(1)), (F(2), F(0), F(1)))  # (x-1)(x^2+2)
    q, r = P.divmod_(p, (F(-1), F(1)))
    assert P.trim(r) == () and P.trim(q) == (2, 0, 1)
    g = P.gcd_(p, P.mul((F(-1), F(1)), (F(3), F(1))))
    assert P.degree(g) == 1


def test_factor_and_cyclotomic():
    assert P.cyclotomic(6) == (1, -1, 1)
    assert P.euler_phi(12) == 4
    fac = dict(P.factor((-1, 0, 0, 0, 1)))  # x^4 - 1
    assert sorted(P.degree(f) for f in fac) == [1, 1, 2]


def test_power_sums_round_trip():
    p = (6, -5, 1)  # roots 2, 3
    assert P.power_sums(p, 4)[:4] == [2, 5, 13, 35]
    assert P.from_power_sums(P.power_sums(p, 3), 2) == p


def test_composed_sum_and_product():
    assert P.composed_sum((-2, 0, 1), (-3, 0, 1)) == P.primitive((1, 0, -10, 0, 1))
    assert P.composed_product((-2, 1), (-3, 1)) == (-6, 1)


def test_powmod_matches_iteration():
    chi = (F(1), F(-1), F(1, 2), F(1))
    direct = (F(1),)
    for _ in range(37):
        direct = P.rem(P.mul(direct, (F(0), F(1))), chi)
    assert P.trim(P.powmod((F(0), F(1)), 37, chi)) == P.trim(direct)


# discs ----------------------------------------------------------------------

def test_sqrt_bounds():
    lo, hi = sqrt_down(F(2)), sqrt_up(F(2))
    assert lo * lo <= 2 <= hi * hi and hi - lo < F(1, 2 ** 50)


def test_disc_arithmetic_contains_true_value():
    a = Disc(F(1, 3), F(-1, 7), F(1, 10 ** 6))
    b = Disc(F(2), F(1, 5), F(1, 10 ** 6))
    za, zb = complex(1 / 3, -1 / 7), complex(2, 0.2)
    for d, z in [(a + b, za + zb), (a * b, za * zb), (a - b, za - zb), (a.inverse(), 1 / za)]:
        assert abs(d.to_complex() - z) <= float(d.rad) + 1e-12
    assert not a.contains_zero()
    lo, hi = (a * b).real_part_interval()
    assert lo <= (za * zb).real <= hi


# algebraic numbers ----------------------------------------------------------

def test_gaussian_basics():
    g = AlgNum.gaussian(F(3, 5), F(4, 5))
    assert g.degree == 2 and g.cmp_abs_one() == 0
    assert g.root_of_unity_order() is None
    assert AlgNum.gaussian(0, 1).root_of_unity_order() == 4
    assert g * g.conjugate() == AlgNum.rational(1)
    assert abs(g.approx() - complex(0.6, 0.8)) < 1e-12


def test_weil_height():
    g = AlgNum.gaussian(F(3, 5), F(4, 5))
    with mpmath.workdps(50):
        for a, h in [(g, mpmath.log(5) / 2), (AlgNum.rational(F(3, 2)), mpmath.log(3)),
                     (AlgNum.sqrt(2), mpmath.log(2) / 2), (AlgNum.gaussian(0, 1), mpmath.mpf(0))]:
            lo, hi = a.weil_height()
            assert _mpf(lo) <= h <= _mpf(hi) and hi - lo < F(1, 10 ** 12)


def _mpf(x):
    return mpmath.mpf(x.numerator) / x.denominator


def test_sqrt_and_sign():
    r = AlgNum.sqrt(2)
    assert r.is_real() and r.sign() == 1
    assert r * r == AlgNum.rational(2)
    assert (r - AlgNum.rational(F(141, 100))).sign() == 1
    assert r.cmp_abs(AlgNum.rational(F(3, 2))) == -1


def test_poly_roots_multiplicities():
    roots = poly_roots([F(1), F(-2), F(1)])  # (x-1)^2
    assert len(roots) == 1 and roots[0][1] == 2
    roots = poly_roots([F(1), F(0), F(1)])
    assert {round(r.approx().imag) for r, _ in roots} == {1, -1}


def test_algnum_json_round_trip():
    g = AlgNum.gaussian(F(5, 13), F(-12, 13))
    assert AlgNum.from_json(g.to_json()) == g


def test_arithmetic_closure_numeric():
    a = AlgNum.sqrt(3)
    b = AlgNum.gaussian(F(1, 2), F(1, 3))
    for x, z in [(a + b, math.sqrt(3) + complex(0.5, 1 / 3)),
                 (a * b, math.sqrt(3) * complex(0.5, 1 / 3)),
                 (b.inverse(), 1 / complex(0.5, 1 / 3))]:
        assert cmath.isclose(x.approx(), z, rel_tol=1e-12)
