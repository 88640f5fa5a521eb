"""Energy-constraint instances and verdicts."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import DimensionMismatch, InvalidParameters
from ..exactnum.rational import as_fraction_matrix, as_fraction_vector, format_rational, parse_rational
from ..polyweight import PolyWeight


@dataclass(frozen=True)
class EnergyInstance:
    """Weights delta^n * w(M^n q); the constraint is sum_{i<=n} weights >= -budget for all n.

    ``allow_negative_budget`` exists only for the positivity reduction, whose
    construction can produce a negative budget.
    """

    M: tuple[tuple[Fraction, ...], ...]
    q: tuple[Fraction, ...]
    w: PolyWeight
    budget: Fraction = Fraction(0)
    delta: Fraction = Fraction(1)
    allow_negative_budget: bool = False

    def __post_init__(self):
        M = as_fraction_matrix(self.M)
        q = as_fraction_vector(self.q)
        d = len(M)
        if any(len(r) != d for r in M):
            raise DimensionMismatch("matrix is not square")
        if len(q) != d:
            raise DimensionMismatch(f"vector of length {len(q)} for a {d}x{d} matrix")
        if self.w.arity != d:
            raise DimensionMismatch(f"weight of arity {self.w.arity} for dimension {d}")
        budget = parse_rational(self.budget)
        delta = parse_rational(self.delta)
        if budget < 0 and not self.allow_negative_budget:
            raise InvalidParameters(f"budget {budget} is negative")
        if not 0 < delta <= 1:
            raise InvalidParameters(f"discount {delta} is not in (0, 1]")
        object.__setattr__(self, "M", tuple(tuple(r) for r in M))
        object.__setattr__(self, "q", tuple(q))
        object.__setattr__(self, "budget", budget)
        object.__setattr__(self, "delta", delta)

    @property
    def dimension(self) -> int:
        return len(self.q)

    def to_json(self) -> dict:
        out = {
            "M": [[format_rational(x) for x in r] for r in self.M],
            "q": [format_rational(x) for x in self.q],
            "w": self.w.to_json(),
            "budget": format_rational(self.budget),
            "delta": format_rational(self.delta),
        }
        if self.allow_negative_budget:
            out["allow_negative_budget"] = True
        return out

    @classmethod
    def from_json(cls, data: dict) -> "EnergyInstance":
        return cls(data["M"], data["q"], PolyWeight.from_json(len(data["q"]), data["w"]),
                   data.get("budget", "0"), data.get("delta", "1"),
                   bool(data.get("allow_negative_budget", False)))


@dataclass(frozen=True)
class EnergyVerdict:
    satisfied: bool
    witness: Optional[int] = None
    certificate: str = ""
    thresholds: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.satisfied and self.witness is None:
            raise ValueError("a violated verdict needs a witness")
        if self.satisfied and self.witness is not None:
            raise ValueError("a satisfied verdict has no witness")

    def to_json(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "witness": self.witness,
            "certificate": self.certificate,
            "thresholds": {k: (str(v) if isinstance(v, Fraction) else v)
                           for k, v in sorted(self.thresholds.items())},
        }
