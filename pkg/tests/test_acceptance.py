"""Acceptance gate: nine criteria, each checked at its stated tolerance and time budget.

Every test prints one ``criterion N: PASS|FAIL`` line. Run standalone with
``python3 tests/test_acceptance.py`` or through pytest.
"""
from __future__ import annotations

import json
import math
import random
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

from ldsw import analysis, stochastic, torus
from ldsw import lrs as L
from ldsw.cli import run
from ldsw.energy import (EnergyInstance, audit_threshold, baker_threshold, decide_energy_3d,
                         gen_diophantine_instance, gen_positivity_reduction, prefix_check)
from ldsw.energy.generators import diophantine_sequence
from ldsw.errors import EnergyInconclusive
from ldsw.exactnum import linalg
from ldsw.exactnum.algnum import AlgNum

import oracles

DATA = Path(__file__).parent / "data"


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, elapsed: float, limit: float, detail: str = "") -> None:
        status = "PASS" if ok and elapsed < limit else "FAIL"
        with capsys.disabled():
            print(f"\ncriterion {number}: {status} ({elapsed:.2f}s of {limit:g}s) {detail}".rstrip())
        assert ok, detail
        assert elapsed < limit, f"took {elapsed:.1f}s, budget {limit}s"
    return emit


def _cli_json(argv, capsys):
    code = run(argv)
    out, _ = capsys.readouterr()
    return code, json.loads(out)


# 1 --------------------------------------------------------------------------

def test_worked_example_values(report, capsys):
    t = time.perf_counter()
    got = [
        _cli_json(["meanpayoff", "--method", "exact", str(DATA / "worked.json")], capsys),
        _cli_json(["total", str(DATA / "worked.json")], capsys),
        _cli_json(["meanpayoff", "--method", "exact", str(DATA / "circle.json")], capsys),
    ]
    elapsed = time.perf_counter() - t
    values = [rep.get("value") for _, rep in got]
    ok = all(code == 0 for code, _ in got) and values == ["0/1", "2/1", "1/1"]
    report(1, ok, elapsed, 1, f"values={values}")


# 2 --------------------------------------------------------------------------

def test_integral_agrees_with_exact(report, capsys):
    t = time.perf_counter()
    path = str(DATA / "x1sq.json")
    code, rep = _cli_json(["meanpayoff", "--method", "integral", "--eps", "1/1000", path], capsys)
    lo, hi = (F(x) for x in rep["interval"])
    ecode, exact = _cli_json(["meanpayoff", "--method", "exact", path], capsys)
    elapsed = time.perf_counter() - t
    ok = code == 0 and rep["torus_dimension"] == 1 and lo <= F(1, 2) <= hi
    if ecode == 0 and exact["exists"]:
        ok = ok and lo <= F(exact["value"]) <= hi
    report(2, ok, elapsed, 30, f"interval=[{float(lo):.6f}, {float(hi):.6f}] exact={exact.get('value')}")


# 3 --------------------------------------------------------------------------

@pytest.mark.slow
def test_mean_payoff_against_running_averages(report):
    rng = random.Random(20260301)
    t = time.perf_counter()
    bad, kinds = [], {}
    for case in range(100):
        d = rng.randint(1, 3)
        M = oracles.rand_matrix(rng, d)
        if rng.random() < 0.5:
            M = [[x / 2 for x in row] for row in M]  # more bounded cases
        q = oracles.rand_vector(rng, d)
        w = oracles.rand_weight(rng, d)
        v = analysis.mean_payoff(M, q, w)
        avg = oracles.running_averages(M, q, w, 10_000)
        last = avg[-1]
        window = avg[5000:]
        if v.exists:
            kind = "exists"
            good = abs(last - float(v.value)) <= 0.05
        else:
            kind = v.diagnostic
            amplitude = max(window) - min(window) if all(map(math.isfinite, window)) else math.inf
            good = abs(last) > 10 or amplitude >= 0.1
        kinds[kind] = kinds.get(kind, 0) + 1
        if not good:
            bad.append((case, kind, last))
    elapsed = time.perf_counter() - t
    report(3, not bad, elapsed, 300, f"outcomes={kinds} failures={bad[:3]}")


# 4 --------------------------------------------------------------------------

def _rand_lrs(rng, order):
    return L.Lrs([oracles.rand_rational(rng) for _ in range(order)],
                 [oracles.rand_rational(rng) for _ in range(order)])


def test_lrs_algebra(report):
    rng = random.Random(4)
    t = time.perf_counter()
    failures = 0
    for case in range(500):
        s, u = _rand_lrs(rng, rng.randint(1, 3)), _rand_lrs(rng, rng.randint(1, 3))
        a, b = s.terms(50), u.terms(50)
        ok = L.add(s, u).terms(50) == [x + y for x, y in zip(a, b)]
        ok = ok and L.mul(s, u).terms(50) == [x * y for x, y in zip(a, b)]
        m = L.minimize(s)
        ok = ok and L.minimize(m) == m and m.terms(50) == a
        if m.order:
            form = L.exp_poly(m)
            for n in (0, 1, 9, 31):
                lo, hi = form.evaluate_disc(n, 96).real_part_interval()
                ok = ok and lo <= a[n] <= hi
            coeffs = {lam: c for comp in form.components for lam, c in comp.coefficient_polys}
            ok = ok and all(tuple(x.conjugate() for x in c) == coeffs[lam.conjugate()]
                            for lam, c in coeffs.items())
        failures += not ok
    elapsed = time.perf_counter() - t
    report(4, failures == 0, elapsed, 120, f"cases=500 failures={failures}")


# 5 --------------------------------------------------------------------------

def test_stochastic_suite(report):
    rng = random.Random(5)
    t = time.perf_counter()
    failures, irreducible = [], 0
    for case in range(100):
        d = rng.randint(1, 5)
        P, iota = oracles.rand_chain(rng, d)
        w = oracles.rand_weight(rng, d)
        res = stochastic.mean_payoff_stochastic(P, iota, w)
        exact = analysis.mean_payoff(P, iota, w)
        info = stochastic.analyze(P)
        count = len(res.points.points)
        if info.irreducible:
            irreducible += 1
            bound = d
        else:
            bound = math.lcm(*info.bscc_periods())
        if not (exact.exists and exact.value == res.value and count <= bound):
            failures.append(case)
    elapsed = time.perf_counter() - t
    report(5, not failures, elapsed, 120, f"irreducible={irreducible}/100 failures={failures[:5]}")


# 6 --------------------------------------------------------------------------

def _conjugate_by_unimodular(rng, T):
    d = len(T)
    U = linalg.identity(d)
    for _ in range(2 if d > 1 else 0):
        # product of elementary shears, so det U = 1
        E = linalg.identity(d)
        i, j = rng.sample(range(d), 2)
        E[i][j] = F(rng.choice([-1, 1]))
        U = linalg.matmul(E, U)
    Uinv = [linalg.solve(U, [F(int(k == c)) for k in range(d)]) for c in range(d)]
    Uinv = [[Uinv[c][r] for c in range(d)] for r in range(d)]
    return linalg.matmul(linalg.matmul(U, T), Uinv)


ROOT_OF_UNITY_BLOCKS = [
    [[F(0), F(-1)], [F(1), F(0)]],    # order 4
    [[F(1), F(-1)], [F(1), F(0)]],    # order 6
    [[F(-1), F(-1)], [F(1), F(0)]],   # order 3
]


def _energy_matrix(rng, d):
    kind = rng.choice(["real", "unity", "rotation"]) if d >= 2 else "real"
    T = [[F(0)] * d for _ in range(d)]
    if kind == "real":
        for i in range(d):
            for j in range(i, d):
                T[i][j] = F(rng.randint(-4, 4), 4)
    else:
        if kind == "unity":
            blk = rng.choice(ROOT_OF_UNITY_BLOCKS)
            r = F(rng.choice([1, 1, 2, 3]), rng.choice([1, 2, 3]))
        else:
            a, b = oracles.rand_rotation(rng)
            blk = [[a, -b], [b, a]]
            r = F(rng.choice([1, 1, 1, 2]), rng.choice([1, 2]))
        for i in range(2):
            for j in range(2):
                T[i][j] = blk[i][j] * r
        if d == 3:
            T[2][2] = F(rng.randint(-4, 4), 4)
            T[0][2] = F(rng.randint(-2, 2))
    return _conjugate_by_unimodular(rng, T)


@pytest.mark.slow
def test_energy_decision_against_prefix(report):
    rng = random.Random(6)
    t = time.perf_counter()
    stats, bad = {"satisfied": 0, "violated": 0, "inconclusive": 0}, []
    for case in range(200):
        d = rng.randint(1, 3)
        M = _energy_matrix(rng, d)
        q = [F(rng.randint(-2, 2)) for _ in range(d)]
        w = oracles.rand_weight(rng, d)
        inst = EnergyInstance(M, q, w, F(rng.randint(0, 8), 2), rng.choice([F(1), F(1), F(1, 2), F(9, 10)]))
        try:
            v = decide_energy_3d(inst)
        except EnergyInconclusive:
            stats["inconclusive"] += 1
            continue
        n = prefix_check(inst, 100_000)
        if v.satisfied:
            stats["satisfied"] += 1
            ok = n is None
        else:
            stats["violated"] += 1
            ok = n == v.witness
        if not ok:
            bad.append(case)
    elapsed = time.perf_counter() - t
    report(6, not bad, elapsed, 600, f"{stats} contradictions={bad[:5]}")


# 7 --------------------------------------------------------------------------

def test_baker_audit(report):
    rng = random.Random(7)
    t = time.perf_counter()
    failures, pairs = [], []
    while len(pairs) < 20:
        a, b = oracles.rand_rotation(rng)
        alpha = AlgNum.gaussian(a, b)
        kind = len(pairs) % 3
        if kind == 0:
            beta = AlgNum.rational(oracles.rand_rational(rng, 1, 3, 4))
        elif kind == 1:
            c, s = oracles.rand_rotation(rng)
            beta = AlgNum.gaussian(c, s)
        else:
            beta = AlgNum.gaussian(oracles.rand_rational(rng), oracles.rand_rational(rng))
        if beta.is_zero():
            continue
        pairs.append((alpha, beta))
    for k, (alpha, beta) in enumerate(pairs):
        th = baker_threshold(alpha, beta)
        if not audit_threshold(alpha, beta, th.N, th.C, 500):
            failures.append(k)
    elapsed = time.perf_counter() - t
    report(7, not failures, elapsed, 120, f"pairs=20 failures={failures}")


# 8 --------------------------------------------------------------------------

def _brute_partial_sums(inst, count):
    return [sum(oracles.weights(inst.M, inst.q, inst.w, n + 1), F(0)) for n in range(count)]


def test_hardness_generators(report):
    rng = random.Random(8)
    t = time.perf_counter()
    failures = []
    for k in range(20):
        P, iota = oracles.rand_chain(rng, rng.randint(1, 4))
        inst = gen_positivity_reduction(P, iota)
        sums = _brute_partial_sums(inst, 101)
        x = oracles.matvec(P, iota)
        for n in range(101):
            if (sums[n] >= -inst.budget) != (x[0] >= F(1, 2)):
                failures.append(("positivity", k, n))
                break
            x = oracles.matvec(P, x)
    for k in range(20):
        a, b = oracles.rand_rotation(rng) if k % 2 else (oracles.rand_rational(rng), oracles.rand_rational(rng))
        r = oracles.rand_rational(rng, -5, 5, 3)
        if a == 0 and b == 0:
            a = F(1)
        inst = gen_diophantine_instance(a, b, r)
        if _brute_partial_sums(inst, 101) != diophantine_sequence(a, b, r, 102)[1:]:
            failures.append(("diophantine", k))
    elapsed = time.perf_counter() - t
    report(8, not failures, elapsed, 60, f"parameterizations=20+20 failures={failures[:3]}")


# 9 --------------------------------------------------------------------------

def _boundedness_system(rng):
    d = rng.randint(1, 3)
    kind = rng.random()
    if kind < 0.4:
        M = [[x / 2 for x in row] for row in oracles.rand_matrix(rng, d)]
    elif kind < 0.7 and d >= 2:
        a, b = oracles.rand_rotation(rng)
        T = linalg.identity(d)
        T[0][0], T[0][1], T[1][0], T[1][1] = a, -b, b, a
        if d == 3:
            T[2][2] = rng.choice([F(1), F(-1), F(1, 2)])
            T[0][2] = F(rng.randint(0, 1))  # Jordan-like coupling when the tail is 1
        M = _conjugate_by_unimodular(rng, T)
    else:
        M = oracles.rand_matrix(rng, d)
    return M, oracles.rand_vector(rng, d)


def test_boundedness_against_orbit_norms(report):
    rng = random.Random(9)
    t = time.perf_counter()
    checked, drawn, stats, bad = 0, 0, {True: 0, False: 0}, []
    while checked < 100:
        drawn += 1
        M, q = _boundedness_system(rng)
        expected = oracles.boundedness_oracle(M, q, 1000)
        if expected is None:
            continue
        checked += 1
        got = torus.is_bounded(M, q).bounded
        stats[got] += 1
        if got != expected:
            bad.append((M, q))
    elapsed = time.perf_counter() - t
    report(9, not bad, elapsed, 60,
           f"conclusive={checked}/{drawn} bounded={stats[True]} unbounded={stats[False]} disagreements={len(bad)}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
