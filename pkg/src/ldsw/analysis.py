"""Limits of rational LRSs and the weighted quantities built from them.

The key decision is whether ``u_n / n`` converges.  Write the sequence as
``sum_i n^i sum_j c_ij lam_ij^n``; roots outside the unit disc rule the limit
out, roots inside it vanish, and on the unit circle only a single simple
root 1 at the top polynomial degree 1 can produce a finite nonzero limit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import lrs as L
from .errors import InvalidDiscount
from .exactnum.rational import format_rational, parse_rational
from .polyweight import PolyWeight

__all__ = ["LimitVerdict", "PolyWeight", "limit_over_n", "limit", "mean_payoff",
           "total_reward", "discounted_reward", "weight_sequence"]


@dataclass(frozen=True)
class LimitVerdict:
    exists: bool
    value: Optional[Fraction] = None
    diagnostic: str = ""

    def __post_init__(self):
        if self.exists != (self.value is not None):
            raise ValueError("value must be present exactly when the limit exists")

    @classmethod
    def of(cls, value) -> "LimitVerdict":
        return cls(True, Fraction(value), "converges")

    @classmethod
    def none(cls, diagnostic: str) -> "LimitVerdict":
        return cls(False, None, diagnostic)

    def to_json(self) -> dict:
        out = {"exists": self.exists, "diagnostic": self.diagnostic}
        if self.exists:
            out["value"] = format_rational(self.value)
        return out


def _dominant_diagnostic(group) -> str:
    """'diverges' when the dominant part is a single positive real root, else 'oscillates'."""
    if len(group) == 1:
        lam = group[0]
        if lam.is_real() and lam.sign() > 0:
            return "diverges"
    return "oscillates"


def limit_over_n(s: L.Lrs) -> LimitVerdict:
    """Decide lim u_n / n and return it when it exists."""
    s = L.minimize(s)
    if s.order == 0:
        return LimitVerdict.of(0)
    form = L.exp_poly(s)
    unit: list[tuple[L.ExpPolyComponent, object]] = []
    outside = []
    for comp in form.components:
        for lam in comp.roots:
            c = lam.cmp_abs_one()
            if c > 0:
                outside.append((comp, lam))
            elif c == 0:
                unit.append((comp, lam))
    if outside:
        # dominant group: largest modulus, then largest polynomial degree
        top = outside[0]
        for item in outside[1:]:
            c = item[1].cmp_abs(top[1])
            if c > 0 or (c == 0 and item[0].mult > top[0].mult):
                top = item
        group = [lam for comp, lam in outside
                 if lam.cmp_abs(top[1]) == 0 and comp.mult == top[0].mult]
        return LimitVerdict.none(_dominant_diagnostic(group))
    if not unit:
        return LimitVerdict.of(0)
    top_deg = max(comp.mult - 1 for comp, _ in unit)
    if top_deg == 0:
        return LimitVerdict.of(0)
    group = [(comp, lam) for comp, lam in unit if comp.mult - 1 == top_deg]
    if len(group) != 1 or group[0][1] != 1:
        return LimitVerdict.none("oscillates")
    if top_deg >= 2:
        return LimitVerdict.none("diverges")
    comp = group[0][0]
    # g = x - 1 has degree 1, so h_1 is a single rational constant
    return LimitVerdict.of(comp.h[1][0])


def limit(s: L.Lrs) -> LimitVerdict:
    """Decide lim u_n, as lim (n u_n) / n."""
    return limit_over_n(L.mul(L.Lrs.identity(), s))


def weight_sequence(M, q, w: PolyWeight) -> L.Lrs:
    return L.weight_sequence(M, q, w)


def mean_payoff(M, q, w: PolyWeight) -> LimitVerdict:
    """lim (1/n) sum_{k<n} w(M^k q)."""
    return limit_over_n(L.partial_sums(L.weight_sequence(M, q, w)))


def total_reward(M, q, w: PolyWeight) -> LimitVerdict:
    """sum_k w(M^k q) when the series converges."""
    return limit(L.partial_sums(L.weight_sequence(M, q, w)))


def discounted_reward(M, q, w: PolyWeight, delta) -> LimitVerdict:
    """sum_k delta^k w(M^k q) for 0 < delta < 1."""
    delta = parse_rational(delta)
    if not 0 < delta < 1:
        raise InvalidDiscount(f"discount factor {delta} is not in (0, 1)")
    seq = L.mul(L.Lrs.geometric(delta), L.weight_sequence(M, q, w))
    return limit(L.partial_sums(seq))
