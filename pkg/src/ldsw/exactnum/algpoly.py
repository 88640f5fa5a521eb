"""Multivariate polynomials with algebraic coefficients."""
from __future__ import annotations

from typing import Mapping, Sequence

from .algnum import AlgNum


class AlgPolyExpr:
    """Sparse polynomial over named variables with AlgNum coefficients.

    Terms are stored as ``{exponent tuple: AlgNum}``; zero coefficients are dropped.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], object] | None = None):
        self.variables = tuple(variables)
        clean: dict[tuple[int, ...], AlgNum] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.variables):
                raise ValueError("exponent vector does not match variables")
            c = AlgNum.coerce(c)
            if exps in clean:
                c = clean[exps] + c
            if c.is_zero():
                clean.pop(exps, None)
            else:
                clean[exps] = c
        self.terms = clean

    @classmethod
    def univariate(cls, coeffs: Sequence, var: str = "n") -> "AlgPolyExpr":
        """sum_k coeffs[k] var^k."""
        return cls((var,), {(k,): c for k, c in enumerate(coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps: Sequence[int]) -> AlgNum:
        return self.terms.get(tuple(exps), AlgNum.rational(0))

    def __add__(self, other: "AlgPolyExpr") -> "AlgPolyExpr":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return AlgPolyExpr(self.variables, out)

    def __mul__(self, other) -> "AlgPolyExpr":
        if not isinstance(other, AlgPolyExpr):
            c = AlgNum.coerce(other)
            return AlgPolyExpr(self.variables, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], AlgNum] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return AlgPolyExpr(self.variables, out)

    def conjugate(self) -> "AlgPolyExpr":
        return AlgPolyExpr(self.variables, {e: c.conjugate() for e, c in self.terms.items()})

    def evaluate_complex(self, point: Sequence[complex]) -> complex:
        total = 0j
        for exps, c in self.terms.items():
            term = c.approx()
            for x, e in zip(point, exps):
                term *= x ** e
            total += term
        return total

    def _check(self, other: "AlgPolyExpr") -> None:
        if other.variables != self.variables:
            raise ValueError("variable sets differ")

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgPolyExpr) and self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        parts = []
        for exps, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(self.variables, exps) if e)
            parts.append(f"({c!r})" + ("*" + mono if mono else ""))
        return " + ".join(parts) or "0"
