"""Command-line interface.

Every command reads a system file (see :mod:`ldsw.sysfile`) and writes one JSON
object with sorted keys to stdout.  Exit codes: 0 computed, 1 the quantity does
not exist or the constraint is violated, 2 inconclusive, 3 input error.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import analysis, stochastic, torus
from .energy import decide_energy_3d, gen_diophantine_instance, gen_positivity_reduction, prefix_check
from .energy.decide import DEFAULT_HORIZON_CAP
from .energy.instance import EnergyInstance
from .errors import (DimensionTooHigh, EnergyInconclusive, IncompatibleMethod, LdswError, ParseError,
                     RelationSearchInconclusive)
from .exactnum import linalg
from .exactnum.algnum import poly_roots
from .exactnum.rational import format_rational_full, parse_rational
from .sysfile import SystemFile, load

EXIT_OK, EXIT_NO, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3
PREFIX_HORIZON = 100_000
_ROUND = 10 ** 12


class _Result(Exception):
    """Carries a report and exit code out of a command."""

    def __init__(self, report: dict, code: int):
        super().__init__(code)
        self.report, self.code = report, code


def _emit(report: dict, out=None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


_NUM = r"\d+(?:/\d+)?"
_FULL = re.compile(rf"(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i")
_REAL = re.compile(rf"[+-]?{_NUM}")
_IMAG = re.compile(rf"(?P<im>[+-]?(?:{_NUM})?)i")


def _imag(text: str) -> Fraction:
    if text in ("", "+"):
        return Fraction(1)
    if text == "-":
        return Fraction(-1)
    return Fraction(text)


def parse_gaussian(text: str) -> tuple[Fraction, Fraction]:
    """``"3/5+4/5i"`` -> (3/5, 4/5).  Accepts ``a``, ``bi``, ``a+bi``, ``a-i``."""
    s = text.replace(" ", "")
    if (m := _FULL.fullmatch(s)) is not None:
        return Fraction(m.group("re")), _imag(m.group("im"))
    if _REAL.fullmatch(s) is not None:
        return Fraction(s), Fraction(0)
    if (m := _IMAG.fullmatch(s)) is not None:
        return Fraction(0), _imag(m.group("im"))
    raise argparse.ArgumentTypeError(f"not a Gaussian rational: {text!r}")


# ---------------------------------------------------------------------------
# commands


def _verdict(v: analysis.LimitVerdict, extra: dict) -> None:
    report = dict(extra, exists=v.exists, diagnostic=v.diagnostic)
    if v.exists:
        report["value"] = format_rational_full(v.value)
        raise _Result(report, EXIT_OK)
    raise _Result(report, EXIT_NO)


def _eigen_summary(M) -> list[dict]:
    out = []
    for lam, mult in poly_roots(linalg.charpoly(M)):
        c = lam.cmp_abs_one()
        z = lam.approx()
        out.append({
            "value": lam.to_json(),
            "approx": [f"{z.real:.12g}", f"{z.imag:.12g}"],
            "multiplicity": mult,
            "modulus": "<1" if c < 0 else ">1" if c > 0 else "=1",
            "root_of_unity": lam.root_of_unity_order(),
        })
    return out


def cmd_classify(sf: SystemFile, args) -> None:
    status = torus.is_bounded(sf.matrix, sf.initial)
    report = {
        "dimension": sf.dimension,
        "kind": sf.kind,
        "eigenvalues": _eigen_summary(sf.matrix),
        "bounded": status.bounded,
        "boundedness_witness": status.witness,
    }
    try:
        stochastic.check_stochastic(sf.matrix)
        report["stochastic"] = True
        report["chain"] = stochastic.analyze(sf.matrix).to_json()
    except LdswError as e:
        report["stochastic"] = False
        report["stochastic_reason"] = str(e)
    raise _Result(report, EXIT_OK)


def cmd_meanpayoff(sf: SystemFile, args) -> None:
    method = args.method
    if method == "exact":
        _verdict(analysis.mean_payoff(sf.matrix, sf.initial, sf.weight), {"method": "exact"})
    if method == "stochastic":
        if sf.kind != "stochastic":
            raise IncompatibleMethod("the stochastic method needs a file of kind 'stochastic'")
        res = stochastic.mean_payoff_stochastic(sf.matrix, sf.initial, sf.weight)
        raise _Result({
            "method": "stochastic",
            "exists": True,
            "value": format_rational_full(res.value),
            "points": [[format_rational_full(x) for x in p] for p in res.points.points],
            "modulus": res.points.modulus,
        }, EXIT_OK)
    # integral
    f = torus.integrand(sf.matrix, sf.initial, sf.weight, args.search_bound)
    lo, hi = torus.approximate_integral(f, args.eps)
    # outward rounding keeps the enclosure while shortening the output
    lo = Fraction(math.floor(lo * _ROUND), _ROUND)
    hi = Fraction(math.ceil(hi * _ROUND), _ROUND)
    raise _Result({
        "method": "integral",
        "exists": True,
        "eps": format_rational_full(args.eps),
        "interval": [format_rational_full(lo), format_rational_full(hi)],
        "approx": f"{float((lo + hi) / 2):.12g}",
        "torus_dimension": f.m,
        "modulus": f.R,
        "discarded_spectral_radius": f.discarded_radius,
    }, EXIT_OK)


def cmd_total(sf: SystemFile, args) -> None:
    _verdict(analysis.total_reward(sf.matrix, sf.initial, sf.weight), {})


def cmd_discounted(sf: SystemFile, args) -> None:
    delta = args.delta if args.delta is not None else sf.discount
    if delta is None:
        raise ValueError("no discount factor: pass --delta or set 'discount' in the file")
    _verdict(analysis.discounted_reward(sf.matrix, sf.initial, sf.weight, delta),
             {"delta": format_rational_full(delta)})


def _energy_instance(sf: SystemFile, args) -> EnergyInstance:
    budget = args.budget if args.budget is not None else (sf.budget if sf.budget is not None else Fraction(0))
    delta = args.delta if args.delta is not None else (sf.discount if sf.discount is not None else Fraction(1))
    return EnergyInstance(sf.matrix, sf.initial, sf.weight, budget, delta, allow_negative_budget=True)


def cmd_energy(sf: SystemFile, args) -> None:
    inst = _energy_instance(sf, args)
    base = {"budget": format_rational_full(inst.budget), "delta": format_rational_full(inst.delta)}
    if inst.dimension > 3:
        horizon = args.horizon or PREFIX_HORIZON
        n = prefix_check(inst, horizon)
        base["prefix"] = {"horizon": horizon, "witness": n}
        if n is not None:
            raise _Result(dict(base, satisfied=False, witness=n), EXIT_NO)
        raise _Result(dict(base, status="inconclusive", reason="dimension > 3: falsification only"),
                      EXIT_INCONCLUSIVE)
    try:
        v = decide_energy_3d(inst, args.horizon or DEFAULT_HORIZON_CAP)
    except EnergyInconclusive as e:
        raise _Result(dict(base, status="inconclusive", reason=str(e),
                           thresholds={k: _jsonable(x) for k, x in sorted(e.thresholds.items())}),
                      EXIT_INCONCLUSIVE) from None
    report = dict(base, **v.to_json())
    raise _Result(report, EXIT_OK if v.satisfied else EXIT_NO)


def _jsonable(x):
    return x if isinstance(x, (int, str, bool)) or x is None else str(x)


def cmd_integrand(sf: SystemFile, args) -> None:
    f = torus.integrand(sf.matrix, sf.initial, sf.weight, args.search_bound)
    raise _Result(f.to_json(), EXIT_OK)


def _instance_file(inst: EnergyInstance) -> SystemFile:
    return SystemFile(tuple(tuple(r) for r in inst.M), tuple(inst.q), inst.w, "general",
                      inst.delta if inst.delta != 1 else None, inst.budget)


def cmd_genhard(args) -> None:
    if args.family == "positivity":
        sf = load(args.chain)
        inst = gen_positivity_reduction(sf.matrix, sf.initial)
    else:
        a, b = args.lam
        inst = gen_diophantine_instance(a, b, args.r)
    raise _Result(_instance_file(inst).to_json(), EXIT_OK)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ldsw", description="Weighted linear dynamical systems")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="system file (JSON)")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--search-bound", type=_positive_int, default=None,
                        help="coefficient bound for the multiplicative relation search")
        return sp

    with_file("classify", "spectrum, boundedness and chain structure")
    sp = with_file("meanpayoff", "limit of the average weight")
    sp.add_argument("--method", choices=("exact", "integral", "stochastic"), default="exact")
    sp.add_argument("--eps", type=_rational_arg, default=Fraction(1, 1000),
                    help="half-width of the certified interval (integral method)")
    with_file("total", "sum of all weights")
    sp = with_file("discounted", "discounted sum of weights")
    sp.add_argument("--delta", type=_rational_arg, default=None)
    sp = with_file("energy", "does the running weight stay above -budget")
    sp.add_argument("--budget", type=_rational_arg, default=None)
    sp.add_argument("--delta", type=_rational_arg, default=None)
    sp.add_argument("--horizon", type=_positive_int, default=None,
                    help="prefix length searched for a violation")
    with_file("integrand", "torus integrand representing the mean payoff")

    gh = sub.add_parser("genhard", help="emit hard energy instances")
    gh.add_argument("--out")
    fam = gh.add_subparsers(dest="family", required=True)
    pos = fam.add_parser("positivity", help="doubling of a Markov chain")
    pos.add_argument("chain", help="chain file (kind 'stochastic')")
    dio = fam.add_parser("diophantine", help="four-dimensional instance from lambda and r")
    dio.add_argument("--lambda", dest="lam", type=parse_gaussian, required=True, help="e.g. 3/5+4/5i")
    dio.add_argument("--r", type=_rational_arg, required=True)
    for sp in (pos, dio):
        sp.add_argument("--out", default=argparse.SUPPRESS, help="write the system file here")
    return p


COMMANDS = {
    "classify": cmd_classify, "meanpayoff": cmd_meanpayoff, "total": cmd_total,
    "discounted": cmd_discounted, "energy": cmd_energy, "integrand": cmd_integrand,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    out = getattr(args, "out", None)
    try:
        if args.command == "genhard":
            cmd_genhard(args)
        else:
            sf = load(args.file)
            COMMANDS[args.command](sf, args)
    except _Result as r:
        _emit(r.report, out)
        return r.code
    except ParseError as e:
        sys.stderr.write(f"ldsw: {getattr(args, 'file', None) or getattr(args, 'chain', '')}: {e}\n")
        return EXIT_INPUT
    except (RelationSearchInconclusive, DimensionTooHigh, EnergyInconclusive) as e:
        sys.stderr.write(f"ldsw: inconclusive: {e}\n")
        return EXIT_INCONCLUSIVE
    except (LdswError, ValueError, ZeroDivisionError) as e:
        sys.stderr.write(f"ldsw: {type(e).__name__}: {e}\n")
        return EXIT_INPUT
    raise AssertionError("command returned without a result")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
