"""Multiplicative relations among unit-modulus algebraic numbers.

For gamma_i = exp(2 pi i theta_i), an integer vector v is a relation when
prod gamma_i^{v_i} = 1, i.e. when sum v_i theta_i is an integer.  Candidates
come from lattice reduction on high-precision arguments and from exact
root-of-unity tests; every accepted relation is verified exactly.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import hermite_normal_form
from sympy.polys.matrices import DomainMatrix

from .errors import InternalInconsistency, RelationSearchInconclusive
from .exactnum import linalg
from .exactnum.algnum import AlgNum

DEFAULT_SEARCH_BOUND = 64
SCAN_LIMIT = 5_000_000
THETA_BITS = 320


def search_bound_default() -> int:
    env = os.environ.get("LDSW_SEARCH_BOUND")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"LDSW_SEARCH_BOUND must be an integer, got {env!r}")
        if value < 1:
            raise ValueError("LDSW_SEARCH_BOUND must be positive")
        return value
    return DEFAULT_SEARCH_BOUND


@dataclass(frozen=True)
class RelationBasis:
    generators: tuple[tuple[int, ...], ...]
    search_bound: int
    independent: tuple[int, ...]  # indices of a certified independent subset

    @property
    def rank(self) -> int:
        return len(self.generators)


def theta(g: AlgNum, bits: int = THETA_BITS):
    """arg(g) / 2 pi in [0, 1) as an mpf (numeric, about ``bits`` bits)."""
    d = g.enclosure(bits + 16)
    with mpmath.workprec(bits + 32):
        re = mpmath.mpf(d.re.numerator) / d.re.denominator
        im = mpmath.mpf(d.im.numerator) / d.im.denominator
        t = mpmath.atan2(im, re) / (2 * mpmath.pi)
        if t < 0:
            t += 1
        return +t


def _frac_dist(x) -> "mpmath.mpf":
    return abs(x - mpmath.nint(x))


def is_relation(gammas: Sequence[AlgNum], v: Sequence[int], thetas=None) -> bool:
    """Exact test of prod gamma_i^{v_i} = 1 (numeric prefilter first)."""
    if thetas is not None:
        with mpmath.workprec(THETA_BITS):
            s = mpmath.fsum(vi * t for vi, t in zip(v, thetas))
            if _frac_dist(s) > mpmath.mpf(2) ** (-THETA_BITS // 2):
                return False
    num, den = AlgNum.rational(1), AlgNum.rational(1)
    for g, e in zip(gammas, v):
        if e > 0:
            num = num * g ** e
        elif e < 0:
            den = den * g ** (-e)
    return num == den


def _lll(rows: list[list[int]]) -> list[list[int]]:
    n, k = len(rows), len(rows[0])
    dm = DomainMatrix([[ZZ(x) for x in r] for r in rows], (n, k), ZZ)
    red = dm.lll().to_Matrix()
    return [[int(red[i, j]) for j in range(k)] for i in range(n)]


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of {c in Z^ncols : A c = 0} for an integer matrix A (rows of length ncols)."""
    A = [list(map(int, r)) for r in A if any(r)]
    if not A:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    rank = linalg.rank([[Fraction(x) for x in r] for r in A])
    want = ncols - rank
    if want == 0:
        return []
    scale = 1 << 20
    while True:
        rows = []
        for i in range(ncols):
            rows.append([1 if i == j else 0 for j in range(ncols)] + [scale * r[i] for r in A])
        red = _lll(rows)
        kern = [r[:ncols] for r in red if not any(r[ncols:])]
        if len(kern) == want:
            return kern
        scale <<= 20
        if scale.bit_length() > 4000:
            raise InternalInconsistency("integer kernel computation did not converge")


def lattice_basis(vectors: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Hermite-normal-form basis of the lattice spanned by integer row vectors."""
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    H = hermite_normal_form(Matrix(vectors).T).T
    out = []
    for i in range(H.rows):
        row = [int(H[i, j]) for j in range(ncols)]
        if any(row):
            first = next(x for x in row if x)
            out.append([-x for x in row] if first < 0 else row)
    return sorted(out, key=lambda r: [abs(x) for x in r])


def _pivots_from_right(basis: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Pivot columns of the row space, preferring later columns as pivots."""
    if not basis:
        return []
    rev = [[Fraction(r[ncols - 1 - j]) for j in range(ncols)] for r in basis]
    _, piv = linalg.rref(rev)
    return sorted(ncols - 1 - p for p in piv)


def _lll_candidates(thetas, bound: int) -> list[list[int]]:
    l = len(thetas)
    bits = THETA_BITS // 2
    C = 1 << bits
    rows = []
    with mpmath.workprec(THETA_BITS):
        for i, t in enumerate(thetas):
            rows.append([1 if i == j else 0 for j in range(l)] + [int(mpmath.nint(t * C))])
    rows.append([0] * l + [C])
    out = []
    for r in _lll(rows):
        v = r[:l]
        if any(v) and max(abs(x) for x in v) <= bound and abs(r[l]) <= (1 << (bits // 2)):
            out.append(v)
    return out


def _scan_close(thetas, bound: int) -> list[list[int]]:
    """Nonzero v in [-bound, bound]^k whose sum v_i theta_i is within float error of an integer."""
    k = len(thetas)
    t = np.array([float(x) for x in thetas])
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * k), indexing="ij")
    vs = np.stack([g.ravel() for g in grids], axis=1)
    s = vs.astype(np.float64) @ t
    dist = np.abs(s - np.round(s))
    # float64 thetas carry error <= 2^-53 each; the dot product adds a few ulps of |s|
    tol = 1e-9
    idx = np.nonzero(dist <= tol)[0]
    out = []
    for i in idx:
        v = [int(x) for x in vs[i]]
        if any(v):
            out.append(v)
    return out


def _certify_independent(gammas, thetas, idx: list[int], bound: int) -> list[int] | None:
    """None when gammas[idx] are certified independent within the box; else a relation found."""
    k = len(idx)
    if k <= 1:
        return None  # roots of unity are always caught exactly before this point
    if (2 * bound + 1) ** k > SCAN_LIMIT:
        raise RelationSearchInconclusive(
            f"cannot certify independence of {k} arguments within search bound {bound}")
    sub_g = [gammas[i] for i in idx]
    sub_t = [thetas[i] for i in idx]
    for v in _scan_close(sub_t, bound):
        if is_relation(sub_g, v, sub_t):
            full = [0] * len(gammas)
            for i, x in zip(idx, v):
                full[i] = x
            return full
        with mpmath.workprec(THETA_BITS):
            s = mpmath.fsum(vi * t for vi, t in zip(v, sub_t))
            if _frac_dist(s) < mpmath.mpf(2) ** (-THETA_BITS // 2):
                raise RelationSearchInconclusive(f"near-relation {v} could not be resolved")
    return None


def relation_basis(gammas: Sequence[AlgNum], search_bound: int | None = None) -> RelationBasis:
    bound = search_bound if search_bound is not None else search_bound_default()
    gammas = list(gammas)
    l = len(gammas)
    if l == 0:
        return RelationBasis((), bound, ())
    for g in gammas:
        if g.is_zero() or g.cmp_abs_one() != 0:
            raise ValueError(f"{g!r} does not have modulus 1")
    thetas = [theta(g) for g in gammas]
    rels: list[list[int]] = []
    for i, g in enumerate(gammas):
        k = g.root_of_unity_order()
        if k:
            rels.append([k if j == i else 0 for j in range(l)])
    for i in range(l):
        for j in range(i + 1, l):
            if gammas[j] == gammas[i]:
                rels.append([1 if t == i else -1 if t == j else 0 for t in range(l)])
            elif gammas[j] == gammas[i].conjugate():
                rels.append([1 if t in (i, j) else 0 for t in range(l)])
    for v in _lll_candidates(thetas, bound):
        if is_relation(gammas, v, thetas):
            rels.append(v)
    while True:
        basis = lattice_basis(rels, l)
        pivots = _pivots_from_right(basis, l)
        free = [i for i in range(l) if i not in pivots]
        extra = _certify_independent(gammas, thetas, free, bound)
        if extra is None:
            break
        rels.append(extra)
    gens = _saturate(gammas, thetas, basis, l)
    for v in gens:
        if not is_relation(gammas, v, thetas):
            raise InternalInconsistency(f"generator {v} is not a relation")
    return RelationBasis(tuple(tuple(v) for v in gens), bound, tuple(free))


def _saturate(gammas, thetas, basis: list[list[int]], l: int) -> list[list[int]]:
    """All relations in the rational span of ``basis`` (which are finitely many cosets)."""
    if not basis:
        return []
    # integer points of the rational row space: kernel of its orthogonal complement
    perp = linalg.nullspace([[Fraction(x) for x in r] for r in basis])
    perp_int = []
    for v in perp:
        den = math.lcm(*(x.denominator for x in v))
        perp_int.append([int(x * den) for x in v])
    sat = integer_kernel(perp_int, l) if perp_int else [[1 if i == j else 0 for j in range(l)] for i in range(l)]
    sat = lattice_basis(sat, l)
    # each saturated basis vector maps to a root of unity; keep the kernel of that map
    orders, fracs = [], []
    for b in sat:
        with mpmath.workprec(THETA_BITS):
            s = mpmath.fsum(bi * t for bi, t in zip(b, thetas))
            s -= mpmath.floor(s)
        zeta = AlgNum.rational(1)
        for g, e in zip(gammas, b):
            if e:
                zeta = zeta * g ** e
        k = zeta.root_of_unity_order()
        if k is None:
            raise InternalInconsistency("saturation produced a non-torsion element")
        orders.append(k)
        fracs.append(s)
    N = math.lcm(*orders)
    if N == 1:
        return sat
    with mpmath.workprec(THETA_BITS):
        residues = [int(mpmath.nint(s * N)) % N for s in fracs]
    kern = integer_kernel([residues + [N]], len(sat) + 1)
    gens = []
    for c in kern:
        v = [sum(ci * b[j] for ci, b in zip(c[:-1], sat)) for j in range(l)]
        gens.append(v)
    return lattice_basis(gens, l)
