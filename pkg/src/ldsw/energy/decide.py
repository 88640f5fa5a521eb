"""Complete energy decision for systems of dimension at most three.

The level sequence ``s_n`` is split into non-degenerate subsequences.  On each
one, every root has the form ``|lam| gamma'^k`` for a fixed unit gamma' (the
normalized complex eigenvalue of M raised to the split modulus) or is a
positive real.  Dividing by ``L^n n^D`` for the dominant modulus L and top
polynomial degree D leaves ``f(gamma'^n) + tail(n)``, where f is a real
trigonometric polynomial and the tail tends to zero.

* min f < 0: f(gamma'^n) is negative infinitely often (by density, or because f
  is a negative constant), so the constraint fails; the witness comes from the
  prefix checker.
* min f > 0: a certified lower bound on f and a monotone bound on the tail give
  an index past which s_n > 0; the prefix up to there is checked.
* min f = 0 with a nonzero tail needs the effective lower bounds from linear
  forms in logarithms.  Those thresholds are far beyond any feasible prefix, so
  the procedure reports them and gives up with EnergyInconclusive unless a
  witness turns up within the horizon cap.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .. import lrs as L
from ..errors import DimensionTooHigh, EnergyInconclusive, HypothesisViolated
from ..exactnum.algnum import AlgNum, poly_roots
from ..exactnum import linalg
from ..relations import theta
from .baker import baker_constant_upper
from .circle import CircleSign, min_lower_bound, min_on_circle
from .instance import EnergyInstance, EnergyVerdict
from .prefix import LevelEvaluator, level_sequence

DEFAULT_HORIZON_CAP = 1_000_000
PHASE_BITS = 256
MAX_PHASE_INDEX = 12


@dataclass
class _Term:
    lam: AlgNum
    coeffs: tuple[AlgNum, ...]  # polynomial in n, lowest degree first
    k: int = 0


@dataclass
class _Analysis:
    sign: CircleSign
    degree: int
    b: list[AlgNum]
    tail: list[tuple[Fraction, int, Optional[Fraction]]]  # (|coeff| bound, n-exponent, ratio bound; None = 1)
    start: int


# ---------------------------------------------------------------------------
# phases


def _frac(x, scale: int = 1):
    """Fractional part of scale * x at full phase precision."""
    with mpmath.workprec(PHASE_BITS):
        y = scale * x
        return y - mpmath.floor(y)


def _dist_to_int(x):
    return abs(x - mpmath.nint(x))


def _phase_index(lam: AlgNum, phi, kmax: int) -> tuple[int, bool]:
    """(k, flipped) with arg(lam)/2pi = k phi (+ 1/2 when flipped) mod 1."""
    with mpmath.workprec(PHASE_BITS):
        psi = theta(lam, PHASE_BITS)
        tol = mpmath.mpf(2) ** (-PHASE_BITS // 3)
        for k in sorted(range(-kmax, kmax + 1), key=abs):
            for half in (False, True):
                x = psi - k * phi - (mpmath.mpf(1) / 2 if half else 0)
                if _dist_to_int(x) < tol:
                    return k, half
    raise HypothesisViolated(f"root {lam!r} is not a power of the reference rotation times a real")


def _check_separation(phi, kmax: int) -> None:
    """Distinct |k| <= kmax give phases k phi that are far apart modulo 1."""
    with mpmath.workprec(PHASE_BITS):
        tol = mpmath.mpf(2) ** (-PHASE_BITS // 3)
        for j in range(1, 2 * kmax + 3):
            if _dist_to_int(2 * j * phi) < tol:
                raise EnergyInconclusive("rotation angle too close to a rational to separate phases", {})


# ---------------------------------------------------------------------------
# dominant-part analysis


def _abs_bounds(lam: AlgNum, bits: int = 64) -> tuple[Fraction, Fraction]:
    d = lam.enclosure(bits)
    return d.abs_lower(), d.abs_upper()


def _analyze(terms: list[_Term], start: int, phi, kmax: int) -> _Analysis:
    for t in terms:
        if phi is None:
            if not (t.lam.is_real() and t.lam.sign() > 0):
                raise HypothesisViolated(f"root {t.lam!r} is not a positive real")
            t.k = 0
        else:
            k, half = _phase_index(t.lam, phi, kmax)
            if half:
                raise HypothesisViolated(f"root {t.lam!r} carries a sign after splitting")
            t.k = k
    top = terms[0]
    for t in terms[1:]:
        if t.lam.cmp_abs(top.lam) > 0:
            top = t
    group = [t for t in terms if t.lam.cmp_abs(top.lam) == 0]
    D = max(len(t.coeffs) - 1 for t in group)
    lead = [t for t in group if len(t.coeffs) - 1 == D]
    K = max(abs(t.k) for t in lead)
    zero = AlgNum.rational(0)
    b = [zero] * (2 * K + 1)
    for t in lead:
        b[K + t.k] = t.coeffs[D]
    sign = min_on_circle(b)
    L_lo, _ = _abs_bounds(top.lam)
    tail = []
    for t in terms:
        in_group = t in group
        ratio = None
        if not in_group:
            bits = 64
            while True:
                _, hi = _abs_bounds(t.lam, bits)
                lo = _abs_bounds(top.lam, bits)[0]
                if lo > 0 and hi < lo:
                    ratio = hi / lo
                    break
                bits *= 2
        for j, c in enumerate(t.coeffs):
            if in_group and j == D:
                continue
            if c.is_zero():
                continue
            tail.append((c.enclosure(64).abs_upper(), j - D, ratio))
    return _Analysis(sign, D, b, tail, start)


def _tail_value(tail, n: int):
    total = mpmath.mpf(0)
    for C, a, x in tail:
        v = mpmath.log(mpmath.mpf(C.numerator) / C.denominator) + a * mpmath.log(n)
        if x is not None:
            v += n * mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
        total += mpmath.exp(v)
    return total * (1 + mpmath.mpf(2) ** -40)


def _positive_threshold(an: _Analysis) -> Optional[int]:
    """N such that the dominant part beats the tail for every n >= N."""
    if len(an.b) == 1:
        m0 = an.b[0].enclosure(64).real_part_interval()[0]
    else:
        m0 = min_lower_bound(an.b)
    if m0 <= 0:
        return None
    N = max(1, an.start)
    with mpmath.workprec(80):
        for C, a, x in an.tail:
            if a > 0 and x is not None:
                turn = a / -mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
                N = max(N, int(mpmath.ceil(turn)) + 1)
        if not an.tail:
            return N
        m = mpmath.mpf(m0.numerator) / m0.denominator
        while _tail_value(an.tail, N) >= m:
            N *= 2
            if N > 1 << 62:
                return None
    return N


# ---------------------------------------------------------------------------
# effective bounds for the min f = 0 case


def _baker_thresholds(an: _Analysis, gamma_sq: AlgNum, R: int) -> dict:
    """Report N1, C and N2 for the dominant block f(gamma'^n) with min f = 0.

    Heights of the roots of z^K f(z) are bounded through the coefficient heights
    (h(root) <= h(p) + log 2 and h(p) <= sum h(b_i) + log(#coefficients)); the
    field degree is bounded by the product of the coefficient degrees times deg p.
    """
    K = len(an.b) // 2
    nz = [x for x in an.b if not x.is_zero()]
    with mpmath.workprec(96):
        hp = sum(mpmath.mpf(x.weil_height()[1].numerator) / x.weil_height()[1].denominator for x in nz)
        hp += mpmath.log(2 * K + 1)
        h_root = hp + mpmath.log(2)
        hg_lo = gamma_sq.weil_height()[0]
        h_gamma = R * (mpmath.mpf(hg_lo.numerator) / hg_lo.denominator) / 2
        if h_gamma <= 0:
            raise HypothesisViolated("reference rotation has zero height")
        N1 = max(1, int(mpmath.ceil(h_root / h_gamma)))
        deg_root = 2 * K
        for x in nz:
            deg_root *= x.degree
        D = 2 * gamma_sq.degree * deg_root
        logA = deg_root * (h_root + mpmath.log(2)) + 1
        logA = max(logA, 2 * gamma_sq.degree * (h_gamma / R + mpmath.log(2)) + 1, mpmath.log(3))
        A = int(mpmath.ceil(mpmath.exp(logA))) if logA < 60 else None
        Kc = baker_constant_upper(3, D, A) if A is not None else \
            Fraction(int(mpmath.ceil((48 * D) ** 10 * logA ** 3)))
        C_each = math.ceil(Fraction(7, 3) * Kc) + 64
        C = 2 * K * C_each
        # N2: L^n n^D |b_K| n^-C beats the tail; the tail decays at worst like x^n n^a
        worst = max((x for _, _, x in an.tail if x is not None), default=None)
        N2 = None
        if worst is not None:
            gap = -mpmath.log(mpmath.mpf(worst.numerator) / worst.denominator)
            N2 = int(mpmath.ceil((C + 8) * 4 * mpmath.log(C + 8) / gap))
    return {"N1": N1, "C": C, "N2": N2}


# ---------------------------------------------------------------------------
# restricted sign decision


class RestrictedSign(enum.Enum):
    ALWAYS_NONNEG = "AlwaysNonneg"
    NEG_INFINITELY_OFTEN = "NegInfinitelyOften"
    NEGATIVE_AT = "NegativeAt"  # eventually nonnegative, but a finite index is negative


@dataclass(frozen=True)
class RestrictedSignResult:
    verdict: RestrictedSign
    witness: Optional[int] = None
    thresholds: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "witness": self.witness,
                "thresholds": dict(sorted(self.thresholds.items()))}


def _generator_candidates(lams: list[AlgNum]):
    """(phase, gamma^2) candidates from the roots and their pairwise ratios."""
    out = []
    nonreal = [x for x in lams if not x.is_real()]
    for a in nonreal:
        out.append((a, AlgNum.rational(1)))
    for i, a in enumerate(lams):
        for c in lams[i + 1:]:
            out.append((a, c))
    for a, c in out:
        z = a / c  # candidate gamma is z / |z|; gamma^2 = z / conj(z)
        if z.is_real():
            continue
        g2 = z / z.conjugate()
        if g2.root_of_unity_order() is not None:
            continue
        with mpmath.workprec(PHASE_BITS):
            phi = _frac(theta(a, PHASE_BITS) - theta(c, PHASE_BITS))
        yield phi, g2


def _choose_generator(lams: list[AlgNum]):
    best = None
    for phi, g2 in _generator_candidates(lams):
        try:
            ks = [_phase_index(x, phi, MAX_PHASE_INDEX)[0] for x in lams]
        except HypothesisViolated:
            continue
        score = max(abs(k) for k in ks)
        if best is None or score < best[0]:
            best = (score, phi, g2)
    if best is None:
        return None, None
    return best[1], best[2]


def _disc_first_negative(pairs: list[tuple[AlgNum, AlgNum]], upto: int) -> Optional[int]:
    bits = 96 + 2 * max(1, upto).bit_length()
    mods = [float(abs(l.approx())) for _, l in pairs]
    grow = max([1.0] + mods)
    bits += int(upto * math.log2(grow)) if grow > 1 else 0
    cs = [c.enclosure(bits) for c, _ in pairs]
    ls = [l.enclosure(bits) for _, l in pairs]
    pw = list(cs)
    for n in range(upto + 1):
        acc = pw[0]
        for p in pw[1:]:
            acc = acc + p
        lo, hi = acc.real_part_interval()
        if hi < 0:
            return n
        if lo <= 0 < hi or lo == 0:
            exact = AlgNum.rational(0)
            for c, l in pairs:
                exact = exact + c * l ** n
            if exact.sign() < 0:
                return n
        pw = [p * l for p, l in zip(pw, ls)]
    return None


def restricted_sign_decision(terms: Sequence[tuple], prefix_cap: int = 5000) -> RestrictedSignResult:
    """Sign of u_n = sum c_i Lam_i^n with the Lam_i in <gamma, reals>, gamma not a root of unity."""
    pairs = [(AlgNum.coerce(c), AlgNum.coerce(l)) for c, l in terms]
    if not pairs:
        raise HypothesisViolated("empty sum")
    for c, l in pairs:
        if c.is_zero() or l.is_zero():
            raise HypothesisViolated("coefficients and roots must be nonzero")
    lams = [l for _, l in pairs]
    if len(set(lams)) != len(lams):
        raise HypothesisViolated("roots must be pairwise distinct")
    for c, l in pairs:
        if (c.conjugate(), l.conjugate()) not in pairs:
            raise HypothesisViolated("the sum is not real-valued")
    phi, g2 = _choose_generator(lams)
    if phi is None and any(not l.is_real() for l in lams):
        raise HypothesisViolated("no non-root-of-unity rotation generates the roots")
    kmax = MAX_PHASE_INDEX
    flips = False
    for l in lams:
        if phi is None:
            flips |= l.sign() < 0
        else:
            flips |= _phase_index(l, phi, kmax)[1]
    split = 2 if flips else 1
    if phi is not None:
        _check_separation(_frac(phi, split), kmax)
    analyses = []
    for r in range(split):
        sub = [_Term(l ** split, (c * l ** r,)) for c, l in pairs]
        p = None if phi is None else _frac(phi, split)
        analyses.append(_analyze(sub, 0, p, 2 * kmax))
    thresholds: dict = {"modulus": split}
    if any(a.sign is CircleSign.NEGATIVE for a in analyses):
        return RestrictedSignResult(RestrictedSign.NEG_INFINITELY_OFTEN, None, thresholds)
    horizon = 0
    for r, a in enumerate(analyses):
        if a.sign is CircleSign.ZERO and a.tail:
            thresholds.update(_baker_thresholds(a, g2, split))
            raise EnergyInconclusive("dominant minimum is zero; finite check beyond the cap", thresholds)
        N = 0 if not a.tail else _positive_threshold(a)
        if N is None:
            raise EnergyInconclusive("could not separate the dominant part from the tail", thresholds)
        horizon = max(horizon, split * N + r)
    thresholds["horizon"] = horizon
    if horizon > prefix_cap:
        raise EnergyInconclusive(f"prefix check needs {horizon} terms", thresholds)
    w = _disc_first_negative(pairs, horizon)
    if w is not None:
        return RestrictedSignResult(RestrictedSign.NEGATIVE_AT, w, thresholds)
    return RestrictedSignResult(RestrictedSign.ALWAYS_NONNEG, None, thresholds)


# ---------------------------------------------------------------------------
# the energy decision


def _terms_of(t: L.Lrs) -> tuple[list[_Term], int]:
    form = L.exp_poly(t)
    out = []
    for comp in form.components:
        for lam, cs in comp.coefficient_polys:
            cs = list(cs)
            while cs and cs[-1].is_zero():
                cs.pop()
            if cs:
                out.append(_Term(lam, tuple(cs)))
    return out, len(form.transient)


def _constant_weight(inst: EnergyInstance, ev: LevelEvaluator, cap: int) -> Optional[EnergyVerdict]:
    """Closed-form verdicts when w is constant and the budget is nonnegative."""
    if inst.w.degree > 0 or inst.budget < 0:
        return None
    c = inst.w([0] * inst.dimension)
    if c >= 0:
        return EnergyVerdict(True, None, "constant nonnegative weight: partial sums never decrease",
                             {"horizon": 0})
    if inst.delta == 1:
        n = math.floor(inst.budget / -c)  # (n+1) c < -B first at this n
        while (n + 1) * c >= -inst.budget:
            n += 1
        return EnergyVerdict(False, n, "constant negative weight", {"horizon": n})
    limit = inst.budget + c / (1 - inst.delta)
    if limit >= 0:
        return EnergyVerdict(True, None, "constant negative weight with discounted sum above -B",
                             {"horizon": 0})
    w = ev.first_negative(0, cap + 1)
    if w is None:
        raise EnergyInconclusive("discounted constant weight crosses -B beyond the cap", {"cap": cap})
    return EnergyVerdict(False, w, "constant negative weight with discounted sum below -B", {"horizon": w})


def _rotation(M) -> tuple[Optional[object], Optional[AlgNum]]:
    """(phase of gamma, gamma^2) for a complex eigenvalue that is not a rotation of finite order."""
    chi = linalg.charpoly(M)
    for lam, _ in poly_roots(chi):
        if lam.is_real():
            continue
        g2 = lam / lam.conjugate()
        if g2.root_of_unity_order() is not None:
            return None, None
        return theta(lam, PHASE_BITS), g2
    return None, None


def decide_energy_3d(inst: EnergyInstance, horizon_cap: int = DEFAULT_HORIZON_CAP) -> EnergyVerdict:
    d = inst.dimension
    if d > 3:
        raise DimensionTooHigh(f"dimension {d} exceeds 3")
    level = level_sequence(inst)
    ev = LevelEvaluator(level)
    if level.order == 0:
        return EnergyVerdict(True, None, "level sequence is identically zero", {"horizon": 0})
    quick = _constant_weight(inst, ev, horizon_cap)
    if quick is not None:
        return quick
    phi, g2 = _rotation(inst.M)
    kmax = max(1, inst.w.degree)
    split = L.nondegenerate_split(level)
    R = split.modulus
    if phi is not None:
        form = L.exp_poly(level)
        flips = any(_phase_index(lam, phi, kmax)[1] for lam in form.roots())
        if flips and R % 2 == 1:
            R *= 2
        _check_separation(_frac(phi, R), kmax)
    sub_phi = None if phi is None else _frac(phi, R)
    analyses = []
    for r in range(R):
        t = L.subsequence(level, R, r)
        if L.minimize(t).order == 0:
            continue
        terms, start = _terms_of(t)
        analyses.append((r, _analyze(terms, start, sub_phi, kmax)))
    thresholds: dict = {"modulus": R}
    case = "real spectrum" if phi is None else "complex pair, rotation of infinite order"
    if any(a.sign is CircleSign.NEGATIVE for _, a in analyses):
        w = ev.first_negative(0, horizon_cap + 1)
        if w is None:
            raise EnergyInconclusive("dominant part is negative infinitely often, but no witness "
                                     f"within {horizon_cap} steps", thresholds)
        thresholds["horizon"] = w
        return EnergyVerdict(False, w, f"{case}: dominant part negative infinitely often; "
                             f"first violation at {w}", thresholds)
    horizon = 0
    pending = None
    for r, a in analyses:
        if a.sign is CircleSign.ZERO and a.tail:
            pending = _baker_thresholds(a, g2, R)
            continue
        N = a.start if not a.tail else _positive_threshold(a)
        if N is None:
            pending = pending or {}
            continue
        thresholds[f"N[{r}]"] = N
        horizon = max(horizon, R * N + r)
    if pending is not None or horizon > horizon_cap:
        w = ev.first_negative(0, horizon_cap + 1)
        if w is not None:
            thresholds["horizon"] = w
            return EnergyVerdict(False, w, f"{case}: violation found by bounded search", thresholds)
        if pending:
            thresholds.update(pending)
        if pending is None:
            thresholds["required_horizon"] = horizon
        elif "N2" in pending:
            thresholds["required_horizon"] = max(horizon, R * pending["N2"] + R - 1)
        raise EnergyInconclusive(f"{case}: sign is settled only beyond the horizon cap {horizon_cap}",
                                 thresholds)
    thresholds["horizon"] = horizon
    w = ev.first_negative(0, horizon + 1)
    if w is not None:
        return EnergyVerdict(False, w, f"{case}: violation at {w} within the certified horizon",
                             thresholds)
    return EnergyVerdict(True, None, f"{case}: dominant part positive beyond index {horizon} "
                         f"(split modulus {R}); prefix 0..{horizon} checked", thresholds)
