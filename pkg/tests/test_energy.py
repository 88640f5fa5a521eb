from fractions import Fraction as F
import math
import random

import mpmath
import pytest

from ldsw.energy import (CircleSign, EnergyInstance, RestrictedSign, audit_threshold, baker_lower_bound,
                         baker_threshold, decide_energy_3d, gen_diophantine_instance, gen_positivity_reduction,
                         level_sequence, min_on_circle, prefix_check, restricted_sign_decision)
from ldsw.energy.baker import baker_constant_upper
from ldsw.energy.generators import audit_diophantine, audit_positivity_reduction
from ldsw.energy.instance import EnergyVerdict
from ldsw.errors import (DimensionMismatch, DimensionTooHigh, EnergyInconclusive, InvalidParameters,
                         PreconditionViolated)
from ldsw.exactnum.algnum import AlgNum
from ldsw.polyweight import PolyWeight

import oracles

G = AlgNum.gaussian(F(3, 5), F(4, 5))
M32 = [[F(3, 5), F(-4, 5), 0], [F(4, 5), F(3, 5), 0], [0, 0, F(1, 2)]]
Q32 = [1, 0, 1]
ROT = [[F(3, 5), F(-4, 5)], [F(4, 5), F(3, 5)]]


def inst(M, q, w, budget=0, delta=1):
    return EnergyInstance(M, q, w, budget, delta)


# instances --------------------------------------------------------------------

def test_instance_validation():
    with pytest.raises(DimensionMismatch):
        EnergyInstance([[1, 0], [0, 1]], [1], PolyWeight.coordinate(2, 0))
    with pytest.raises(ValueError):
        EnergyInstance([[1]], [1], PolyWeight.coordinate(1, 0), -1)
    with pytest.raises(ValueError):
        EnergyInstance([[1]], [1], PolyWeight.coordinate(1, 0), 0, F(3, 2))
    EnergyInstance([[1]], [1], PolyWeight.coordinate(1, 0), -1, allow_negative_budget=True)


def test_instance_json_round_trip():
    i = inst(M32, Q32, PolyWeight(3, [(1, (0, 0, 1)), (F(-1, 4), (0, 0, 0))]), F(1, 2), F(9, 10))
    assert EnergyInstance.from_json(i.to_json()) == i


def test_violated_verdict_needs_witness():
    with pytest.raises(ValueError):
        EnergyVerdict(False, None, "", {})


# prefix oracle ----------------------------------------------------------------

def test_prefix_examples():
    assert prefix_check(inst([[1]], [1], PolyWeight.coordinate(1, 0, -1), 2), 10) == 2
    assert prefix_check(inst([[1]], [1], PolyWeight(1, []), 0), 10) is None
    assert prefix_check(inst(M32, Q32, PolyWeight.coordinate(3, 2)), 1000) is None


def test_level_sequence_matches_partial_sums():
    i = inst(M32, Q32, PolyWeight(3, [(1, (1, 0, 0)), (F(-1, 3), (0, 0, 0))]), 1, F(9, 10))
    lv = level_sequence(i).terms(30)
    acc, disc = F(1), F(1)
    for n, x in enumerate(oracles.orbit(M32, Q32, 30)):
        acc += disc * i.w(x)
        disc *= i.delta
        assert lv[n] == acc


@pytest.mark.parametrize("seed", range(25))
def test_prefix_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 3)
    M = [[x / 2 for x in row] for row in oracles.rand_matrix(rng, d)]
    q = oracles.rand_vector(rng, d)
    w = oracles.rand_weight(rng, d)
    B = F(rng.randint(0, 6), 2)
    delta = rng.choice([F(1), F(1, 2), F(9, 10)])
    expected = oracles.first_violation(M, q, w, B, delta, 250)
    assert prefix_check(inst(M, q, w, B, delta), 250) == expected


def test_prefix_long_horizon_exactly_zero_classes():
    # level vanishes on every odd index; the remaining indices stay positive
    M = [[F(-1)]]
    i = inst(M, [1], PolyWeight.coordinate(1, 0, -1), 1)
    assert prefix_check(i, 100_000) is None


# Baker toolkit ----------------------------------------------------------------

def _mpf(x: F):
    return mpmath.mpf(x.numerator) / x.denominator


def test_baker_lower_bound_formula():
    b = baker_lower_bound(1, 1, 3, 3)
    with mpmath.workdps(80):
        exact = -mpmath.mpf(16) ** 6 * mpmath.log(3) ** 2
        assert _mpf(b.value) <= exact and exact - _mpf(b.value) < 1e-20
    b = baker_lower_bound(3, 4, 10, 100)
    with mpmath.workdps(80):
        exact = -mpmath.mpf(192) ** 10 * mpmath.log(10) ** 3 * mpmath.log(100)
        assert _mpf(b.value) <= exact and abs((_mpf(b.value) - exact) / exact) < 1e-30


def test_baker_invalid():
    with pytest.raises(InvalidParameters):
        baker_lower_bound(0, 1, 3, 3)
    with pytest.raises(InvalidParameters):
        baker_lower_bound(1, 1, 2, 3)


def test_baker_constant_monotone():
    assert baker_constant_upper(3, 4, 10) > baker_constant_upper(3, 4, 5)


@pytest.mark.parametrize("beta,N", [(AlgNum.rational(1), 1), (G, 1), (AlgNum.rational(2), 1)])
def test_baker_threshold_examples(beta, N):
    t = baker_threshold(G, beta)
    assert t.N == N and t.C > 0
    assert audit_threshold(G, beta, t.N, t.C, 100)


def test_baker_threshold_preconditions():
    with pytest.raises(PreconditionViolated):
        baker_threshold(AlgNum.gaussian(0, 1), AlgNum.rational(1))
    with pytest.raises(PreconditionViolated):
        baker_threshold(AlgNum.rational(2), AlgNum.rational(1))
    with pytest.raises(PreconditionViolated):
        baker_threshold(G, AlgNum.rational(0))


def test_audit_detects_false_threshold():
    # alpha^1 = beta exactly, so no exponent C can hold at n = 1
    assert not audit_threshold(G, G, 0, 5, 3)


# circle minimum ---------------------------------------------------------------

def R(x):
    return AlgNum.rational(x)


@pytest.mark.parametrize("b,sign", [
    ([R(1), R(2), R(1)], CircleSign.ZERO),                            # 2 + 2 cos
    ([R(1)], CircleSign.POSITIVE),
    ([R(F(1, 2)), R(F(1, 2)), R(0), R(F(1, 2)), R(F(1, 2))], CircleSign.NEGATIVE),
    ([R(1), R(3), R(1)], CircleSign.POSITIVE),
    ([G.conjugate(), R(2), G], CircleSign.ZERO),                     # 2 + 2 Re(G z)
])
def test_min_on_circle(b, sign):
    assert min_on_circle(b) == sign


def test_min_on_circle_irrational_coefficients():
    s = AlgNum.sqrt(2)
    assert min_on_circle([R(1), s + s, R(1)]) == CircleSign.POSITIVE  # 2 sqrt2 + 2 cos
    assert min_on_circle([R(1), s, R(1)]) == CircleSign.NEGATIVE       # sqrt2 + 2 cos


# restricted sign and decision -------------------------------------------------

def test_restricted_sign_examples():
    gb = G.conjugate()
    assert restricted_sign_decision([(1, G), (1, gb), (2, 1)]).verdict == RestrictedSign.ALWAYS_NONNEG
    assert restricted_sign_decision([(1, G), (1, gb), (3, 1)]).verdict == RestrictedSign.ALWAYS_NONNEG
    assert restricted_sign_decision([(1, G), (1, gb)]).verdict in (
        RestrictedSign.NEG_INFINITELY_OFTEN, RestrictedSign.NEGATIVE_AT)


def test_restricted_sign_with_tail_is_inconclusive():
    with pytest.raises(EnergyInconclusive) as err:
        restricted_sign_decision([(1, G), (1, G.conjugate()), (2, 1), (1, F(1, 2))])
    assert {"N1", "C", "N2"} <= set(err.value.thresholds)


def test_decide_examples():
    assert decide_energy_3d(inst([[F(1, 2)]], [1], PolyWeight.coordinate(1, 0))).satisfied
    assert decide_energy_3d(inst(ROT, [1, 0], PolyWeight.coordinate(2, 0), 3)).satisfied
    v = decide_energy_3d(inst(ROT, [1, 0], PolyWeight.coordinate(2, 0), 0))
    assert not v.satisfied and v.witness == prefix_check(inst(ROT, [1, 0], PolyWeight.coordinate(2, 0)), 100)
    w = PolyWeight(3, [(1, (0, 0, 1)), (F(-1, 4), (0, 0, 0))])
    v = decide_energy_3d(inst(M32, Q32, w))
    assert not v.satisfied and v.witness == 7 == prefix_check(inst(M32, Q32, w), 1000)
    assert decide_energy_3d(inst(M32, Q32, PolyWeight.coordinate(3, 2))).satisfied


def test_decide_rejects_high_dimension():
    with pytest.raises(DimensionTooHigh):
        decide_energy_3d(gen_diophantine_instance(F(3, 5), F(4, 5), 0))


@pytest.mark.parametrize("seed", range(20))
def test_decide_agrees_with_prefix(seed):
    rng = random.Random(1000 + seed)
    d = rng.randint(1, 3)
    if d >= 2 and rng.random() < 0.5:
        a, b = oracles.rand_rotation(rng)
        M = [[a, -b] + [0] * (d - 2), [b, a] + [0] * (d - 2)]
        if d == 3:
            M.append([0, 0, oracles.rand_rational(rng, -1, 1, 4)])
    else:
        M = [[F(0) if j < i else oracles.rand_rational(rng, -1, 1, 4) for j in range(d)] for i in range(d)]
    q = oracles.rand_vector(rng, d)
    w = oracles.rand_weight(rng, d)
    i = inst(M, q, w, F(rng.randint(0, 6), 2), rng.choice([F(1), F(1, 2)]))
    try:
        v = decide_energy_3d(i)
    except EnergyInconclusive:
        return
    n = prefix_check(i, 20_000)
    if v.satisfied:
        assert n is None
    else:
        assert n == v.witness


# generators -------------------------------------------------------------------

SWAP = [[F(0), F(1)], [F(1), F(0)]]


def test_positivity_reduction_swap_chain():
    i = gen_positivity_reduction(SWAP, [F(1), F(0)])
    assert i.dimension == 4 and i.budget == F(1, 2)
    assert audit_positivity_reduction(SWAP, [F(1), F(0)], 100)
    # (P^{n+1} iota)_1 is 0 at n = 0, so the constraint already fails there
    assert prefix_check(i, 10) == 0


def test_positivity_reduction_negative_budget():
    i = gen_positivity_reduction(SWAP, [F(1, 4), F(3, 4)])
    assert i.budget == F(-1, 4) and i.allow_negative_budget


@pytest.mark.parametrize("seed", range(5))
def test_positivity_reduction_random(seed):
    rng = random.Random(seed)
    P, iota = oracles.rand_chain(rng, 3)
    assert audit_positivity_reduction(P, iota, 100)


def test_diophantine_examples():
    assert audit_diophantine(F(3, 5), F(4, 5), 2, 100)
    assert prefix_check(gen_diophantine_instance(F(3, 5), F(4, 5), 0), 10_000) is None
    assert prefix_check(gen_diophantine_instance(F(3, 5), F(4, 5), -10 ** 6), 100) is not None
    assert prefix_check(gen_diophantine_instance(1, 0, 5), 100) is None  # u_n = 0
