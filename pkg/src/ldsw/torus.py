"""Bounded orbits as images of torus rotations.

For a bounded orbit only unit-modulus eigenvalues survive in the limit.  Pick a
multiplicatively independent subset gamma_1..gamma_m of them; every other one
satisfies gamma_j^{k_j} = prod gamma_s^{a_s}.  With R = lcm(k_j) and the torus
point theta_n = n (theta_1, ..., theta_m), each lam^{nR+r} is a constant times
a monomial in sigma(theta_n), and the mean payoff is an integral over T^m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import lrs as L
from .errors import DimensionMismatch, NotBounded, PreconditionViolated
from .exactnum.algnum import AlgNum, identify
from .exactnum.algpoly import AlgPolyExpr
from .exactnum.interval import Disc, sqrt_down, sqrt_up
from .exactnum.rational import as_fraction_matrix, as_fraction_vector
from .polyweight import PolyWeight
from .relations import RelationBasis, integer_kernel, lattice_basis, relation_basis, theta


# ---------------------------------------------------------------------------
# boundedness


@dataclass(frozen=True)
class Boundedness:
    bounded: bool
    witness: Optional[str] = None

    def __bool__(self) -> bool:
        return self.bounded


def coordinate_forms(M, q) -> list[Optional[L.ExpPolyForm]]:
    """Exponential-polynomial forms of the coordinate sequences (None for zero coordinates)."""
    M = as_fraction_matrix(M)
    q = as_fraction_vector(q)
    out = []
    for i in range(len(M)):
        s = L.lds_coordinate(M, q, i)
        out.append(None if s.order == 0 else L.exp_poly(s))
    return out


def is_bounded(M, q) -> Boundedness:
    for i, form in enumerate(coordinate_forms(M, q)):
        if form is None:
            continue
        for comp in form.components:
            for lam in comp.roots:
                c = lam.cmp_abs_one()
                if c > 0:
                    return Boundedness(False, f"coordinate {i + 1}: root {lam!r} has modulus > 1")
                if c == 0 and comp.mult > 1:
                    return Boundedness(
                        False, f"coordinate {i + 1}: unit root {lam!r} with degree-{comp.mult - 1} polynomial")
    return Boundedness(True, None)


# ---------------------------------------------------------------------------
# dense subsequence data


def modulus(lam: AlgNum) -> AlgNum:
    """|lam| as an exact real algebraic number."""
    a = lam.abs2()
    if a.is_rational():
        q = a.as_fraction()
        n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if n * n == q.numerator and d * d == q.denominator:
            return AlgNum.rational(Fraction(n, d))
    # roots of f(x^2) where f is the minimal polynomial of |lam|^2
    f = a.poly
    g = []
    for c in f:
        g.extend([c, 0])
    g = tuple(g[:-1])

    def enc(bits):
        e = a.enclosure(bits + 8)
        lo, hi = e.real_part_interval()
        lo_s, hi_s = sqrt_down(max(lo, Fraction(0)), bits + 8), sqrt_up(hi, bits + 8)
        return Disc((lo_s + hi_s) / 2, Fraction(0), (hi_s - lo_s) / 2)

    return identify(g, enc)


def _var_names(m: int) -> tuple[str, ...]:
    names = []
    for t in range(1, m + 1):
        names.extend([f"z{t}", f"z{t}c"])
    return tuple(names)


def _monomial(m: int, exponents: Sequence[int]) -> tuple[int, ...]:
    """Exponent tuple over (z1, z1c, ..., zm, zmc) for prod z_t^{e_t} (negative -> conjugate)."""
    out = []
    for e in exponents:
        out.extend([e, 0] if e >= 0 else [0, -e])
    return tuple(out)


@dataclass
class DenseSubsequenceData:
    R: int
    m: int
    gamma: tuple[AlgNum, ...]          # the independent unit-modulus generators
    independent: tuple[int, ...]       # their indices among the inputs
    rho: tuple[AlgNum, ...]            # |lam_i|
    exponents: tuple[tuple[int, ...], ...]  # lam_i^{nR+r} = rho_i^{nR+r} gamma_i^r prod z_t^{e_{i,t}}
    lambdas: tuple[AlgNum, ...]
    p_polys: dict = field(default_factory=dict)  # (i, r) -> AlgPolyExpr in 2m variables
    relations: Optional[RelationBasis] = None

    @property
    def variables(self) -> tuple[str, ...]:
        return _var_names(self.m)

    def thetas(self) -> list[float]:
        return [float(theta(g, 64)) for g in self.gamma]

    def audit(self, n_max: int = 50, bits: int = 96) -> bool:
        """Check lam_i^{nR+r} against rho_i^{nR+r} p_{i,r}(sigma(theta_n)) with certified discs."""
        gdiscs = [g.enclosure(bits) for g in self.gamma]
        for n in range(n_max + 1):
            point = []
            for gd in gdiscs:
                z = gd ** n
                point.extend([z, z.conjugate()])
            for (i, r), p in self.p_polys.items():
                k = n * self.R + r
                lhs = self.lambdas[i].enclosure(bits) ** k
                val = Disc(Fraction(0), Fraction(0))
                for exps, c in p.terms.items():
                    term = c.enclosure(bits)
                    for z, e in zip(point, exps):
                        if e:
                            term = term * z ** e
                    val = val + term
                rhs = val * (self.rho[i].enclosure(bits) ** k)
                if not lhs.intersects(rhs):
                    return False
        return True


def dense_subsequence_data(lambdas: Sequence[AlgNum], search_bound: int | None = None) -> DenseSubsequenceData:
    lambdas = [AlgNum.coerce(x) for x in lambdas]
    if any(l.is_zero() for l in lambdas):
        raise PreconditionViolated("zero eigenvalue in dense subsequence data")
    rho, gammas = [], []
    for lam in lambdas:
        if lam.cmp_abs_one() == 0:
            rho.append(AlgNum.rational(1))
            gammas.append(lam)
        else:
            r = modulus(lam)
            rho.append(r)
            gammas.append(lam / r)
    rb = relation_basis(gammas, search_bound)
    S = list(rb.independent)
    m = len(S)
    gens = [list(v) for v in rb.generators]
    ell = len(gammas)
    exps: list[Optional[tuple[Fraction, ...]]] = [None] * ell
    ks = {}
    for t, s in enumerate(S):
        exps[s] = tuple(Fraction(1 if u == t else 0) for u in range(m))
    for j in range(ell):
        if j in S:
            continue
        # relations supported on S and j: rank one since S is independent
        others = [c for c in range(ell) if c != j and c not in S]
        if gens:
            cond = [[gens[g][c] for g in range(len(gens))] for c in others]
            kern = integer_kernel(cond, len(gens)) if cond else [
                [1 if a == b else 0 for b in range(len(gens))] for a in range(len(gens))]
        else:
            kern = []
        vecs = [[sum(c[g] * gens[g][col] for g in range(len(gens))) for col in range(ell)] for c in kern]
        vecs = [v for v in vecs if v[j] != 0]
        if not vecs:
            raise PreconditionViolated(f"no relation found for dependent element {j}")
        basis = lattice_basis(vecs, ell)
        if len(basis) != 1:
            raise PreconditionViolated("relations on an independent set plus one element must have rank one")
        v = basis[0] if basis[0][j] > 0 else [-x for x in basis[0]]
        kj = v[j]
        ks[j] = kj
        exps[j] = tuple(Fraction(-v[s], kj) for s in S)
    R = math.lcm(*ks.values()) if ks else 1
    int_exps = []
    for e in exps:
        scaled = tuple(x * R for x in e)
        assert all(x.denominator == 1 for x in scaled)
        int_exps.append(tuple(int(x) for x in scaled))
    data = DenseSubsequenceData(R, m, tuple(gammas[s] for s in S), tuple(S), tuple(rho),
                                tuple(int_exps), tuple(lambdas), {}, rb)
    names = _var_names(m)
    for i in range(ell):
        for r in range(R):
            data.p_polys[(i, r)] = AlgPolyExpr(names, {_monomial(m, int_exps[i]): gammas[i] ** r})
    return data


# ---------------------------------------------------------------------------
# integrand


Weight = Union[PolyWeight, Callable[[Sequence[float]], float]]


@dataclass
class TorusIntegrand:
    m: int
    R: int
    dimension: int
    maps: list  # maps[r][i] = AlgPolyExpr in 2m variables
    weight: Weight
    gamma: tuple[AlgNum, ...]
    discarded_radius: float = 0.0  # largest modulus among dropped decaying roots
    _compiled: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._compiled = []
        for r in range(self.R):
            coords = []
            for poly in self.maps[r]:
                terms = []
                for exps, c in poly.terms.items():
                    k = [exps[2 * t] - exps[2 * t + 1] for t in range(self.m)]
                    terms.append((c.approx(), k, c))
                coords.append(terms)
            self._compiled.append(coords)

    def coordinates(self, r: int, x: np.ndarray) -> np.ndarray:
        """Real parts of q_r(sigma(x)) for points x of shape (N, m); returns shape (N, d)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros((x.shape[0], self.dimension))
        for i, terms in enumerate(self._compiled[r]):
            acc = np.zeros(x.shape[0], dtype=complex)
            for c, k, _ in terms:
                phase = x @ np.array(k, dtype=float) if self.m else np.zeros(x.shape[0])
                acc += c * np.exp(2j * np.pi * phase)
            out[:, i] = acc.real
        return out

    def _eval_weight(self, pts: np.ndarray) -> np.ndarray:
        w = self.weight
        if isinstance(w, PolyWeight):
            total = np.zeros(pts.shape[0])
            for c, exps in w.monomials:
                term = np.full(pts.shape[0], float(c))
                for j, e in enumerate(exps):
                    if e:
                        term = term * pts[:, j] ** e
                total += term
            return total
        return np.array([float(w(list(p))) for p in pts])

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        acc = np.zeros(x.shape[0])
        for r in range(self.R):
            acc += self._eval_weight(self.coordinates(r, x))
        return acc / self.R

    def range_box(self) -> list[tuple[Fraction, Fraction]]:
        """Box containing every q_r(sigma(x)) (coefficient l1 bounds, padded)."""
        box = []
        for i in range(self.dimension):
            b = Fraction(0)
            for r in range(self.R):
                s = sum((c.enclosure(32).abs_upper() for _, _, c in self._compiled[r][i]), Fraction(0))
                b = max(b, s)
            box.append((-b, b))
        return box

    def gradient_bounds(self) -> list[Fraction]:
        """Per torus direction j: max over r, i of sum |c| 2 pi |k_j| (rational upper bound)."""
        two_pi = Fraction(710, 113)  # > 2 pi
        out = []
        for j in range(self.m):
            g = Fraction(0)
            for r in range(self.R):
                for terms in self._compiled[r]:
                    s = sum((c.enclosure(32).abs_upper() * abs(k[j]) for _, k, c in terms), Fraction(0))
                    g = max(g, s * two_pi)
            out.append(g)
        return out

    def to_json(self) -> dict:
        maps = []
        for r in range(self.R):
            coords = []
            for poly in self.maps[r]:
                coords.append([{"coeff": c.to_json(), "exponents": list(e)}
                               for e, c in sorted(poly.terms.items())])
            maps.append(coords)
        return {
            "R": self.R,
            "m": self.m,
            "gamma": [g.to_json() for g in self.gamma],
            "variables": list(_var_names(self.m)),
            "maps": maps,
            "discarded_spectral_radius": self.discarded_radius,
        }


def integrand(M, q, weight: Weight, search_bound: int | None = None) -> TorusIntegrand:
    M = as_fraction_matrix(M)
    q = as_fraction_vector(q)
    if isinstance(weight, PolyWeight) and weight.arity != len(M):
        raise DimensionMismatch("weight arity does not match the system dimension")
    status = is_bounded(M, q)
    if not status:
        raise NotBounded(status.witness)
    forms = coordinate_forms(M, q)
    unit: list[AlgNum] = []
    coeffs: list[dict[AlgNum, AlgNum]] = []
    discarded = 0.0
    for form in forms:
        cmap: dict[AlgNum, AlgNum] = {}
        if form is not None:
            for comp in form.components:
                for lam, cs in comp.coefficient_polys:
                    if lam.cmp_abs_one() == 0:
                        cmap[lam] = cs[0]
                        if lam not in unit:
                            unit.append(lam)
                    else:
                        discarded = max(discarded, abs(lam.approx()))
        coeffs.append(cmap)
    data = dense_subsequence_data(unit, search_bound)
    names = _var_names(data.m)
    maps = []
    for r in range(data.R):
        coords = []
        for cmap in coeffs:
            poly = AlgPolyExpr(names, {})
            for lam, c in cmap.items():
                poly = poly + data.p_polys[(unit.index(lam), r)] * c
            coords.append(poly)
        maps.append(coords)
    return TorusIntegrand(data.m, data.R, len(M), maps, weight, data.gamma, discarded)


# ---------------------------------------------------------------------------
# quadrature


def _m0_exact(f: TorusIntegrand) -> Optional[Fraction]:
    """Exact value when m = 0 and the weight is a PolyWeight."""
    if f.m != 0 or not isinstance(f.weight, PolyWeight):
        return None
    total = AlgNum.rational(0)
    for r in range(f.R):
        point = []
        for poly in f.maps[r]:
            c = poly.coefficient((),) if poly.terms else AlgNum.rational(0)
            point.append(c)
        val = AlgNum.rational(0)
        for coeff, exps in f.weight.monomials:
            term = AlgNum.rational(coeff)
            for x, e in zip(point, exps):
                if e:
                    term = term * x ** e
            val = val + term
        total = total + val
    total = total / f.R
    return total.as_fraction() if total.is_rational() else None


def approximate_integral(f: TorusIntegrand, eps, lipschitz_bound=None, max_points: int = 50_000_000
                         ) -> tuple[Fraction, Fraction]:
    """Certified interval of width <= 2 eps containing the torus integral of f (midpoint rule)."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    exact = _m0_exact(f)
    if exact is not None:
        return exact, exact
    if f.m == 0:
        val = float(f(np.zeros((1, 0)))[0])
        tol = Fraction(1, 10 ** 9) * (1 + abs(Fraction(val)))
        return Fraction(val) - tol, Fraction(val) + tol
    if lipschitz_bound is None:
        if not isinstance(f.weight, PolyWeight):
            raise ValueError("a Lipschitz bound is required for black-box weights")
        lipschitz_bound = f.weight.gradient_l1_bound(f.range_box())
    lip = Fraction(lipschitz_bound)
    G = [lip * g for g in f.gradient_bounds()]
    # float evaluation error budget
    box = f.range_box()
    scale = 1 + sum(abs(hi) for _, hi in box)
    eval_err = Fraction(1, 10 ** 9) * scale ** max(1, _weight_degree(f.weight))
    quad_budget = eps - eval_err
    if quad_budget <= 0:
        raise ValueError("eps is below the floating-point evaluation error")
    total_G = sum(G, Fraction(0))
    N = max(1, math.ceil(total_G / (4 * quad_budget)))
    if N ** f.m > max_points:
        raise ValueError(f"quadrature grid {N}^{f.m} exceeds the point budget")
    h = 1.0 / N
    axis = (np.arange(N) + 0.5) * h
    total = 0.0
    chunk = max(1, 2_000_000 // max(1, N ** (f.m - 1)))
    # iterate over the first axis in chunks to bound memory
    for start in range(0, N, chunk):
        first = axis[start:start + chunk]
        grids = np.meshgrid(first, *([axis] * (f.m - 1)), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        total += float(np.sum(f(pts)))
    mean = Fraction(total) / (N ** f.m)
    err = sum(G, Fraction(0)) / (4 * N) + eval_err
    return mean - err, mean + err


def _weight_degree(w) -> int:
    return w.degree if isinstance(w, PolyWeight) else 1


def limit_shape_sample(M, q, count: int, search_bound: int | None = None) -> list[tuple[float, ...]]:
    """Points q_r(sigma(x)) on a uniform torus grid, spread over the residues r."""
    M = as_fraction_matrix(M)
    f = integrand(M, q, PolyWeight.constant(len(M), 0), search_bound)
    per = max(1, count // f.R)
    if f.m == 0:
        grid = np.zeros((1, 0))
    else:
        k = max(1, math.ceil(per ** (1.0 / f.m)))
        axis = np.arange(k) / k
        grids = np.meshgrid(*([axis] * f.m), indexing="ij")
        grid = np.stack([g.ravel() for g in grids], axis=1)[:per]
    out = []
    for r in range(f.R):
        for row in f.coordinates(r, grid):
            out.append(tuple(float(x) for x in row))
    return out
