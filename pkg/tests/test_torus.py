from fractions import Fraction as F
import math
import random

import numpy as np
import pytest

from ldsw import analysis, relations, torus
from ldsw.errors import NotBounded
from ldsw.exactnum.algnum import AlgNum
from ldsw.polyweight import PolyWeight

import oracles

LAM = AlgNum.gaussian(F(3, 5), F(4, 5))
M32 = [[F(3, 5), F(-4, 5), 0], [F(4, 5), F(3, 5), 0], [0, 0, F(1, 2)]]
Q32 = [1, 0, 1]


def test_is_bounded_examples():
    assert torus.is_bounded(M32, Q32).bounded
    assert not torus.is_bounded([[2]], [1]).bounded
    res = torus.is_bounded([[1, 1], [0, 1]], [0, 1])
    assert not res and "degree" in res.witness
    assert torus.is_bounded([[1, 1], [0, 1]], [1, 0])  # q in the eigenspace


def test_relation_basis_examples():
    assert relations.relation_basis([LAM, LAM.conjugate()]).generators == ((1, 1),)
    assert relations.relation_basis([AlgNum.gaussian(0, 1)]).generators == ((4,),)
    basis = relations.relation_basis([LAM, LAM * LAM])
    assert len(basis.generators) == 1
    v = basis.generators[0]
    assert v in ((2, -1), (-2, 1))
    assert relations.is_relation([LAM, LAM * LAM], v)


def test_search_bound_from_env(monkeypatch):
    monkeypatch.setenv("LDSW_SEARCH_BOUND", "12")
    assert relations.search_bound_default() == 12
    monkeypatch.setenv("LDSW_SEARCH_BOUND", "zero")
    with pytest.raises(ValueError):
        relations.search_bound_default()


def test_dense_subsequence_single_and_pair():
    data = torus.dense_subsequence_data([LAM])
    assert (data.m, data.R) == (1, 1) and data.audit(20)
    data = torus.dense_subsequence_data([LAM, LAM.conjugate()])
    assert (data.m, data.R) == (1, 1) and data.audit(20)


def test_dense_subsequence_with_root_of_unity():
    data = torus.dense_subsequence_data([AlgNum.gaussian(0, 1), LAM])
    assert data.R == 4 and data.m == 1
    assert data.audit(12)


def test_integrand_worked_example():
    f = torus.integrand(M32, Q32, PolyWeight(3, [(1, (2, 0, 0))]))
    assert f.m == 1
    th = np.linspace(0, 1, 7, endpoint=False)
    vals = f(th.reshape(-1, 1))
    # the sign convention of the angle does not matter for x1^2
    assert np.allclose(vals, np.cos(2 * np.pi * th) ** 2)
    assert f.discarded_radius == 0.5


def test_integrand_identity_matrix():
    f = torus.integrand([[1, 0], [0, 1]], [2, 3], PolyWeight(2, [(1, (1, 1))]))
    assert f.m == 0
    assert torus.approximate_integral(f, F(1, 100)) == (6, 6)


def test_integrand_requires_bounded():
    with pytest.raises(NotBounded):
        torus.integrand([[2]], [1], PolyWeight.coordinate(1, 0))


@pytest.mark.parametrize("w,target", [
    (PolyWeight(3, [(1, (2, 0, 0))]), F(1, 2)),
    (PolyWeight(3, [(1, (1, 0, 0))]), F(0)),
    (PolyWeight.constant(3, 5), F(5)),
])
def test_approximate_integral_contains_truth(w, target):
    lo, hi = torus.approximate_integral(torus.integrand(M32, Q32, w), F(1, 1000))
    assert lo <= target <= hi and hi - lo <= F(2, 1000)


def test_limit_shape_sample():
    pts = torus.limit_shape_sample(M32, Q32, 16)
    assert all(abs(math.hypot(p[0], p[1]) - 1) < 1e-9 and abs(p[2]) < 1e-9 for p in pts)
    assert torus.limit_shape_sample([[1, 0], [0, 1]], [2, 3], 4) == [(2.0, 3.0)] * 4 or \
        set(torus.limit_shape_sample([[1, 0], [0, 1]], [2, 3], 4)) == {(2.0, 3.0)}
    assert set(torus.limit_shape_sample([[-1]], [1], 4)) == {(1.0,), (-1.0,)}


def _rotation_system(rng):
    a, b = oracles.rand_rotation(rng)
    M = [[a, -b, 0], [b, a, 0], [0, 0, oracles.rand_rational(rng, -1, 1, 4) * F(1, 2)]]
    if rng.random() < 0.5:
        M[2][2] = F(rng.choice([1, -1]))
    return M


@pytest.mark.parametrize("seed", range(6))
def test_integral_agrees_with_exact_mean_payoff(seed):
    rng = random.Random(seed)
    M = _rotation_system(rng)
    q = oracles.rand_vector(rng, 3)
    w = oracles.rand_weight(rng, 3)
    v = analysis.mean_payoff(M, q, w)
    lo, hi = torus.approximate_integral(torus.integrand(M, q, w), F(1, 100))
    assert v.exists
    assert lo <= v.value <= hi
