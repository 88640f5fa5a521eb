"""Bounded-horizon falsification of energy constraints.

The level ``s_n = B + sum_{k<=n} delta^k w(M^k q)`` is a rational LRS and the
constraint fails at n exactly when ``s_n < 0``.  Iterating the recurrence in
rationals costs quadratic time in the horizon, so the level is evaluated from
its exponential-polynomial form instead:

* components whose roots are roots of unity, together with the transient, are
  periodic polynomials in n with rational coefficients and are evaluated exactly;
* the remaining roots are evaluated in floating point with an explicit error
  bound, after scaling by the largest root modulus.

Indices whose sign the float bound cannot settle are decided by certified disc
arithmetic and, failing that, by exact computation of the term.  Residue classes
on which the level vanishes identically are recognised up front.  Every witness
is re-checked with exact rational arithmetic.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .. import lrs as L
from ..errors import InternalInconsistency
from ..exactnum import poly as P
from ..exactnum.algnum import eval_disc
from ..exactnum.interval import Disc
from .instance import EnergyInstance

CHUNK = 1 << 15
_ULP = 2.0 ** -52


def level_sequence(inst: EnergyInstance) -> L.Lrs:
    """s_n = B + sum_{k<=n} delta^k w(M^k q), minimized."""
    w = L.weight_sequence(inst.M, inst.q, inst.w)
    if inst.delta != 1:
        w = L.mul(L.Lrs.geometric(inst.delta), w)
    s = L.partial_sums(w)
    if inst.budget != 0:
        s = L.add(s, L.Lrs.constant(inst.budget))
    return L.minimize(s)


def _is_cyclotomic(g) -> Optional[int]:
    deg = len(g) - 1
    for k in range(1, 4 * deg * deg + 3):
        if P.euler_phi(k) == deg and tuple(g) == tuple(P.cyclotomic(k)):
            return k
    return None


class LevelEvaluator:
    """Sign evaluation of a rational LRS on index ranges."""

    def __init__(self, s: L.Lrs):
        self.seq = L.minimize(s)
        self.form = None
        self._float_roots: list[tuple[complex, list[complex]]] = []
        self._period = 1
        self._den = 1
        self._exact_polys: list[list[int]] = [[]]
        self._zero_classes: tuple[int, list[int]] = (1, [])
        if self.seq.order == 0:
            return
        self.form = L.exp_poly(self.seq)
        # residue classes on which the sequence vanishes identically; elsewhere
        # the subsequences are non-degenerate and have finitely many zeros
        split = L.nondegenerate_split(self.seq)
        zeros = [r for r, t in enumerate(split.subsequences) if L.minimize(t).order == 0]
        self._zero_classes = (split.modulus, zeros)
        exact = []
        for comp in self.form.components:
            k = _is_cyclotomic(comp.g)
            if k is not None:
                exact.append((comp, k))
            else:
                self._add_float(comp)
        self._build_exact(exact)
        logs = [r[0] for r in self._float_roots]
        self._sigma_float = max([z.real for z in logs], default=0.0)
        self._sigma = max(0.0, self._sigma_float)
        self._max_log = max([0.0] + [abs(z) for z in logs])

    # setup -------------------------------------------------------------
    def _add_float(self, comp: L.ExpPolyComponent) -> None:
        for lam in comp.roots:
            enc = lam.enclosure(96)
            with mpmath.workprec(128):
                z = mpmath.mpc(mpmath.mpf(enc.re.numerator) / enc.re.denominator,
                               mpmath.mpf(enc.im.numerator) / enc.im.denominator)
                log = complex(mpmath.log(z))
            coeffs = [eval_disc(hk, enc).to_complex() for hk in comp.h]
            self._float_roots.append((log, coeffs))

    def _build_exact(self, exact) -> None:
        period = 1
        for _, k in exact:
            period = math.lcm(period, k)
        deg = max([c.mult for c, _ in exact] + [1])
        polys: list[list[Fraction]] = [[Fraction(0)] * deg for _ in range(period)]
        for comp, k in exact:
            for r in range(period):
                for j, hk in enumerate(comp.h):
                    polys[r][j] += sum((c * comp._power_sum(i + r % k) for i, c in enumerate(hk) if c),
                                       Fraction(0))
        den = math.lcm(*[x.denominator for p in polys for x in p],
                       *[t.denominator for t in self.form.transient])
        self._period = period
        self._den = den
        self._exact_polys = [[int(x * den) for x in p] for p in polys]

    # evaluation --------------------------------------------------------
    def _exact_numerators(self, n: np.ndarray):
        """Integer numerators of the exactly evaluated part (over self._den)."""
        top = int(n[-1]) if len(n) else 0
        bound = max((sum(abs(c) * top ** j for j, c in enumerate(p)) for p in self._exact_polys), default=0)
        safe = bound < (1 << 53)
        nums = np.zeros(len(n), dtype=np.int64 if safe else object)
        residues = n % self._period
        base = n.astype(np.int64 if safe else object)
        for r, p in enumerate(self._exact_polys):
            if not any(p):
                continue
            mask = residues == r
            if not mask.any():
                continue
            x = base[mask]
            acc = np.zeros(len(x), dtype=nums.dtype)
            for c in reversed(p):
                acc = acc * x + c
            nums[mask] = acc
        for i, t in enumerate(self.form.transient):
            idx = i - int(n[0]) if len(n) else -1
            if 0 <= idx < len(n):
                nums[idx] = nums[idx] + int(t * self._den)
        return nums

    def signs(self, start: int, stop: int) -> np.ndarray:
        """Certified signs (-1, 0, +1) of u_n for start <= n < stop; 2 marks undecided."""
        n = np.arange(start, stop, dtype=np.int64)
        if self.form is None:
            return np.zeros(len(n), dtype=np.int64)
        nums = self._exact_numerators(n)
        exact_sign = np.sign(nums).astype(np.int64)
        if not self._float_roots:
            return exact_sign
        nf = n.astype(np.float64)
        # the float part is first summed relative to its own dominant modulus,
        # so it stays representable where the exact part vanishes
        sf = self._sigma_float
        fval = np.zeros(len(n))
        fbound = np.zeros(len(n))
        for log, coeffs in self._float_roots:
            ex = np.exp(nf * complex(log.real - sf, log.imag))
            mag = np.exp(nf * (log.real - sf))
            poly = np.zeros(len(n), dtype=np.complex128)
            pmag = np.zeros(len(n))
            for c in reversed(coeffs):
                poly = poly * nf + c
                pmag = pmag * nf + abs(c)
            fval = fval + (poly * ex).real
            fbound = fbound + pmag * mag
        sigma = self._sigma
        e_float = nums.astype(np.float64) / self._den
        scale = np.exp(-nf * sigma)
        shift = np.exp(nf * (sf - sigma))
        value = e_float * scale + fval * shift
        bound = np.abs(e_float) * scale + fbound * shift
        alone = nums == 0
        value[alone] = fval[alone]
        bound[alone] = fbound[alone]
        terms = 1 + sum(len(c) for _, c in self._float_roots)
        rel = 2.0 ** -46 * (4.0 + nf * (self._max_log + abs(sigma) + 1.0)) + terms * _ULP
        err = bound * rel + 1e-290
        out = np.full(len(n), 2, dtype=np.int64)
        out[value > err] = 1
        out[value < -err] = -1
        R, zeros = self._zero_classes
        for r in zeros:
            out[n % R == r] = 0
        return out

    def sign_at(self, n: int) -> int:
        """Certified sign of u_n, using discs and then exact arithmetic if needed."""
        if self.form is None:
            return 0
        mag = max(1.0, math.exp(self._sigma)) if self._float_roots else 1.0
        bits = 96 + 2 * max(1, n).bit_length() + int(n * math.log2(mag)) + 16
        for _ in range(3):
            d: Disc = self.form.evaluate_disc(n, bits)
            lo, hi = d.real_part_interval()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        v = self.seq.term(n)
        return (v > 0) - (v < 0)

    def first_negative(self, start: int, stop: int) -> Optional[int]:
        """Least n in [start, stop) with u_n < 0."""
        if self.form is None:
            return None
        pos = start
        while pos < stop:
            end = min(stop, pos + CHUNK)
            sg = self.signs(pos, end)
            cand = np.nonzero(sg != 1)[0]
            for i in cand:
                if sg[i] == 0:
                    continue
                n = pos + int(i)
                s = -1 if sg[i] == -1 else self.sign_at(n)
                if s < 0:
                    return n
            pos = end
        return None


def verify_witness(s: L.Lrs, n: int) -> bool:
    """Independent exact check that u_n < 0."""
    return s.term(n) < 0


def prefix_check(inst: EnergyInstance, horizon: int) -> Optional[int]:
    """Smallest n <= horizon whose partial weight sum drops below -B, or None."""
    return level_first_negative(level_sequence(inst), horizon)


def level_first_negative(s: L.Lrs, horizon: int, start: int = 0) -> Optional[int]:
    ev = LevelEvaluator(s)
    n = ev.first_negative(start, horizon + 1)
    if n is not None and not verify_witness(ev.seq, n):
        raise InternalInconsistency(f"witness {n} failed re-verification")
    return n
