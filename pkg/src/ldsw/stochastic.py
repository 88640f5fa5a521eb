"""Markov chains as distribution transformers.

``P`` is column-stochastic: ``P[i][j]`` is the probability of moving from state
j to state i, and the orbit ``P^n iota`` is the sequence of state distributions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Optional, Sequence, Union

import networkx as nx

from . import lrs as L
from .errors import NotIrreducible, NotStochastic, SpectralPreconditionViolated
from .exactnum import linalg
from .exactnum.rational import as_fraction_matrix, as_fraction_vector
from .polyweight import PolyWeight

Matrix = list[list[Fraction]]


@dataclass(frozen=True)
class ChainStructure:
    sccs: tuple[tuple[int, ...], ...]
    bscc: tuple[bool, ...]
    periods: tuple[Optional[int], ...]  # per state; None for states on no cycle
    period: int
    irreducible: bool
    aperiodic: bool

    def bscc_periods(self) -> list[int]:
        return [self.periods[c[0]] for c, b in zip(self.sccs, self.bscc) if b]

    def to_json(self) -> dict:
        return {
            "sccs": [list(c) for c in self.sccs],
            "bscc": list(self.bscc),
            "periods": list(self.periods),
            "period": self.period,
            "irreducible": self.irreducible,
            "aperiodic": self.aperiodic,
        }


@dataclass(frozen=True)
class EvaluationPoints:
    modulus: int
    points: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class StochasticMeanPayoff:
    points: EvaluationPoints
    value: Union[Fraction, float]
    exact: bool

    @property
    def numeric(self) -> float:
        return float(self.value)


def check_stochastic(P, iota=None) -> tuple[Matrix, Optional[list[Fraction]]]:
    P = as_fraction_matrix(P)
    d = len(P)
    if any(len(row) != d for row in P):
        raise NotStochastic("matrix is not square")
    for j in range(d):
        col = [P[i][j] for i in range(d)]
        if any(x < 0 for x in col):
            raise NotStochastic(f"negative entry in column {j}")
        if sum(col) != 1:
            raise NotStochastic(f"column {j} sums to {sum(col)}, not 1")
    if iota is not None:
        iota = as_fraction_vector(iota)
        if len(iota) != d:
            raise NotStochastic("initial distribution has the wrong length")
        if any(x < 0 for x in iota) or sum(iota) != 1:
            raise NotStochastic("initial vector is not a distribution")
    return P, iota


def _graph(P: Matrix) -> nx.DiGraph:
    g = nx.DiGraph()
    d = len(P)
    g.add_nodes_from(range(d))
    g.add_edges_from((j, i) for i in range(d) for j in range(d) if P[i][j] > 0)
    return g


def _scc_period(g: nx.DiGraph, comp: set) -> Optional[int]:
    root = min(comp)
    level = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for v in g.successors(u):
                if v in comp and v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    p = 0
    for u in comp:
        for v in g.successors(u):
            if v in comp:
                p = gcd(p, level[u] + 1 - level[v])
    return p or None


def analyze(P) -> ChainStructure:
    P, _ = check_stochastic(P)
    g = _graph(P)
    comps = sorted((tuple(sorted(c)) for c in nx.strongly_connected_components(g)))
    periods: list[Optional[int]] = [None] * len(P)
    bscc = []
    for c in comps:
        cs = set(c)
        per = _scc_period(g, cs)
        for s in c:
            periods[s] = per
        bscc.append(all(v in cs for u in c for v in g.successors(u)))
    chain_period = 1
    for p in periods:
        if p:
            chain_period = chain_period * p // gcd(chain_period, p)
    irreducible = len(comps) == 1
    return ChainStructure(tuple(comps), tuple(bscc), tuple(periods), chain_period,
                          irreducible, chain_period == 1)


def stationary(P) -> list[Fraction]:
    P, _ = check_stochastic(P)
    if not analyze(P).irreducible:
        raise NotIrreducible("stationary distribution requested for a reducible chain")
    d = len(P)
    rows = [[P[i][j] - (1 if i == j else 0) for j in range(d)] for i in range(d)]
    rows.append([Fraction(1)] * d)
    sol = linalg.solve(rows, [Fraction(0)] * d + [Fraction(1)])
    if sol is None:
        raise NotIrreducible("no stationary distribution")
    return sol


def _audit_spectrum(A: Matrix, v: Sequence[Fraction]) -> None:
    for i in range(len(A)):
        s = L.lds_coordinate(A, v, i)
        if s.order == 0:
            continue
        for comp in L.exp_poly(s).components:
            for lam in comp.roots:
                c = lam.cmp_abs_one()
                if c > 0 or (c == 0 and (lam != 1 or comp.mult > 1)):
                    raise SpectralPreconditionViolated(
                        f"coordinate {i} has a non-convergent root {lam!r} (multiplicity {comp.mult})")


def limit_projection(A, v) -> list[Fraction]:
    """lim A^n v: the fixed point x with v - x in the image of A - I."""
    A = as_fraction_matrix(A)
    v = as_fraction_vector(v)
    _audit_spectrum(A, v)
    d = len(A)
    B = [[A[i][j] - (1 if i == j else 0) for j in range(d)] for i in range(d)]
    y = linalg.solve(linalg.matmul(B, B), linalg.matvec(B, v))
    if y is None:
        raise SpectralPreconditionViolated("eigenvalue 1 is not semisimple")
    By = linalg.matvec(B, y)
    return [a - b for a, b in zip(v, By)]


def evaluation_points(P, iota) -> EvaluationPoints:
    P, iota = check_stochastic(P, iota)
    info = analyze(P)
    if info.irreducible:
        if info.aperiodic:
            return EvaluationPoints(1, (tuple(stationary(P)),))
        l = info.period
    else:
        l = 1
        for p in info.bscc_periods():
            l = l * p // gcd(l, p)
    A = linalg.matpow(P, l)
    points = []
    x = iota
    for _ in range(l):
        points.append(tuple(limit_projection(A, x)))
        x = linalg.matvec(P, x)
    return EvaluationPoints(l, tuple(points))


def mean_payoff_stochastic(P, iota, weight: Union[PolyWeight, Callable]) -> StochasticMeanPayoff:
    """Average of the weight over the evaluation points."""
    pts = evaluation_points(P, iota)
    if isinstance(weight, PolyWeight):
        value = sum((weight(p) for p in pts.points), Fraction(0)) / pts.modulus
        return StochasticMeanPayoff(pts, value, True)
    vals = [weight(p) for p in pts.points]
    if all(isinstance(v, (int, Fraction)) for v in vals):
        return StochasticMeanPayoff(pts, Fraction(sum(vals, Fraction(0))) / pts.modulus, True)
    return StochasticMeanPayoff(pts, sum(float(v) for v in vals) / pts.modulus, False)
