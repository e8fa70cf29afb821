"""Command-line interface.

Every subcommand prints one report. JSON output has sorted keys, rationals
as ``"num/den"`` strings and reals rounded to 12 significant digits, so equal
inputs give byte-identical output.

Options fall back to ``BUCKDENS_<OPTION>`` environment variables (for
example ``BUCKDENS_MAX_N``) and then to built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import re
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import checkers, cover
from .estimator import DEFAULT_WINDOW, RemainderSystem, mu_estimate
from .grammar import ParseError, parse
from .measure import ScaledUnionSpec
from .periodic import PeriodicSet, PeriodLimitError
from .residue import ResidueClass, prime_table
from .sets import UnsupportedStructure

DEFAULTS = {
    "system": "lcm",
    "max_n": 12,
    "mode": "exact",
    "window": DEFAULT_WINDOW,
    "max_modulus": 12,
    "primes": "default",
    "format": "json",
    "threads": 1,
    "node_budget": cover.DEFAULT_NODE_BUDGET,
}
CONVERT = {"max_n": int, "window": int, "max_modulus": int, "threads": int, "node_budget": int}
DEFAULT_SLICE_PRIMES = 100


class UsageError(Exception):
    pass


def _real(x: float) -> float | int:
    if not np.isfinite(x):
        return None
    r = float(f"{x:.12g}")
    return int(r) if r.is_integer() else r


def to_plain(obj: Any) -> Any:
    """Convert a report into JSON-ready values."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, ResidueClass):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _real(float(obj))
    if dataclasses.is_dataclass(obj):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return str(obj)


def _setting(args: argparse.Namespace, name: str, env=os.environ):
    value = getattr(args, name, None)
    if value is None:
        value = env.get("BUCKDENS_" + name.upper())
        if value is not None and name in CONVERT:
            try:
                value = CONVERT[name](value)
            except ValueError:
                raise UsageError(f"BUCKDENS_{name.upper()}={value!r} is not an integer") from None
    if value is None:
        value = DEFAULTS[name]
    return value


def _system(args) -> RemainderSystem:
    try:
        return RemainderSystem.parse(_setting(args, "system"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _max_n(args, system: RemainderSystem) -> int:
    n = _setting(args, "max_n")
    if not 1 <= n <= system.max_N:
        raise UsageError(f"--max-n must be in 1..{system.max_N} for the {system.describe()} system")
    return n


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"malformed {what} list {text!r}") from None


def _fractions(text: str, what: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed {what} list {text!r}") from None


def _primes(args, default: Sequence[int]) -> list[int]:
    text = _setting(args, "primes")
    if text == "default":
        return list(default)
    ps = _ints(text, "prime")
    for p in ps:
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise UsageError(f"{p} is not prime")
    return ps


def _classes(text: str) -> list[ResidueClass]:
    try:
        return [ResidueClass.parse(c) for c in re.split(r",\s*(?=\d)", text.strip())]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _verdict_code(verdict: str) -> int:
    return 1 if verdict == "fail" else 0


def cmd_measure(args):
    s = parse(args.expr)
    m = s.measure()
    out = {
        "expr": s.format(),
        "value": m.value,
        "tail_bound": float(m.tail_bound),
        "exact": m.exact,
        "caveat": m.caveat,
    }
    return out, 0


def _estimate(args):
    s = parse(args.expr)
    system = _system(args)
    return mu_estimate(
        s,
        system,
        _max_n(args, system),
        mode=_setting(args, "mode"),
        W=_setting(args, "window"),
        threads=_setting(args, "threads"),
    )


def cmd_estimate(args):
    rep = _estimate(args)
    out = to_plain(rep)
    out.update(final=_real(rep.final), final_ratio=rep.final_ratio, bound_semantics=rep.bound_semantics)
    return out, 0


def cmd_tabulate(args):
    rep = _estimate(args)
    rows = [{"N": r.N, "B": r.B, "R": r.R, "ratio": r.ratio} for r in rep.records]
    return {"expr": rep.expr, "system": rep.system, "mode": rep.mode, "rows": rows}, 0


def cmd_cover(args):
    s = parse(args.expr)
    per = s.periodic
    if per is None:
        raise UsageError(f"{s.format()} is not a periodic set")
    if args.period is not None:
        if args.period < 1 or args.period % per.period:
            raise UsageError(f"--period {args.period} is not a multiple of the set's period {per.period}")
        per = PeriodicSet(args.period, per.expand(args.period))
    value, cert = cover.infimum_cover(per, _setting(args, "max_modulus"), _setting(args, "node_budget"))
    out = to_plain(cert)
    out.update(value=value, weight=cert.weight, period=per.period)
    return out, 0 if cert.status != "fail" else 1


def cmd_verify_cover(args):
    s = parse(args.expr)
    check = cover.verify_cover(s, _classes(args.classes), args.window if args.window is not None else None)
    out = to_plain(check)
    out["ok"] = check.ok
    return out, 0 if check.ok else 1


def cmd_niven(args):
    s = parse(args.expr)
    system = _system(args)
    rep = checkers.niven_check(
        s, _primes(args, _small_primes()), system, _max_n(args, system), W=_setting(args, "window")
    )
    return rep, _verdict_code(rep.verdict)


def cmd_check_sigma(args):
    parts = [parse(e) for e in args.parts]
    system = _system(args)
    N = _max_n(args, system)
    rb = Fraction(args.remainder_bound)
    if args.scales:
        scales = _ints(args.scales, "scale")
        try:
            spec = ScaledUnionSpec(tuple(scales), tuple(parts), rb)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rep = checkers.scaled_union_check(spec, system, N, W=min(_setting(args, "window"), 10**6))
    else:
        rep = checkers.weak_sigma_check(parts, system, N, W=min(_setting(args, "window"), 10**6), remainder_bound=rb)
    return rep, _verdict_code(rep.verdict)


def cmd_check_alexander(args):
    parts = [parse(e) for e in args.parts]
    bounds = _fractions(args.bounds, "bound")
    system = _system(args)
    try:
        rep = checkers.alexander_check(
            parts, bounds, system, _max_n(args, system), N_start=args.n_start, W=min(_setting(args, "window"), 10**6)
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return rep, _verdict_code(rep.verdict)


def cmd_check_rt(args):
    ts = _ints(args.t, "t")
    rep = checkers.rt_inclusion_check(ts, _primes(args, [2, 3, 5, 7]), W=_setting(args, "window"))
    return rep, _verdict_code(rep.verdict)


def cmd_check_taudiv(args):
    system = _system(args)
    rep = checkers.taudiv_bound_report(args.s_max, system, _max_n(args, system), W=_setting(args, "window"))
    return rep, _verdict_code(rep.verdict)


def _small_primes() -> list[int]:
    return [int(p) for p in prime_table(DEFAULT_SLICE_PRIMES)]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", help="lcm, factorial or custom:b1,b2,...")
    common.add_argument("--max-n", dest="max_n", type=int)
    common.add_argument("--mode", choices=["exact", "window"])
    common.add_argument("--window", type=int, help="window W for scans")
    common.add_argument("--max-modulus", dest="max_modulus", type=int)
    common.add_argument("--primes", help="comma-separated primes or 'default'")
    common.add_argument("--format", choices=["json", "csv", "text"])
    common.add_argument("--threads", type=int)
    common.add_argument("--node-budget", dest="node_budget", type=int)

    parser = argparse.ArgumentParser(prog="buckdens", description="Buck measure density computations")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("measure", cmd_measure, "exact measure of a set").add_argument("expr")
    add("estimate", cmd_estimate, "R(S:B_N)/B_N sequence").add_argument("expr")
    add("tabulate", cmd_tabulate, "CSV table of N, B_N, R, ratio").add_argument("expr")
    p = add("cover", cmd_cover, "minimum-weight cover of a periodic set")
    p.add_argument("expr")
    p.add_argument("--period", type=int)
    p = add("verify-cover", cmd_verify_cover, "check a set lies in a union of classes")
    p.add_argument("expr")
    p.add_argument("--classes", required=True, help="r+(m),r+(m),...")
    add("niven", cmd_niven, "estimate the prime slices S_p").add_argument("expr")
    p = add("check-sigma", cmd_check_sigma, "countable additivity check")
    p.add_argument("parts", nargs="+")
    p.add_argument("--scales", help="scales b_1,b_2,... for a scaled union")
    p.add_argument("--remainder-bound", dest="remainder_bound", default="0")
    p = add("check-alexander", cmd_check_alexander, "bounded-ratio additivity check")
    p.add_argument("parts", nargs="+")
    p.add_argument("--bounds", required=True, help="c_1,c_2,... as fractions")
    p.add_argument("--n-start", dest="n_start", type=int)
    p = add("check-rt", cmd_check_rt, "slice inclusion for the R_t family")
    p.add_argument("--t", default="0,1,2")
    p = add("check-taudiv", cmd_check_taudiv, "bounds for {n : tau(n) | n}")
    p.add_argument("--s-max", dest="s_max", type=int, default=3)
    return parser


def _rows(report: dict) -> list[dict]:
    for key in ("rows", "records"):
        if isinstance(report.get(key), list):
            return report[key]
    return [{"key": k, "value": json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v} for k, v in sorted(report.items())]


def render(report: Any, fmt: str) -> str:
    data = to_plain(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True)
    if fmt == "csv":
        rows = _rows(data)
        buf = io.StringIO()
        fields = list(rows[0]) if rows else ["key", "value"]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        return buf.getvalue().rstrip("\n")
    lines = []
    for k, v in sorted(data.items()):
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        lines.append(f"{k}: {v}")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        fmt = _setting(args, "format")
        if args.command == "tabulate" and args.format is None and "BUCKDENS_FORMAT" not in os.environ:
            fmt = "csv"
        if fmt not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {fmt!r}")
        report, code = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return 2
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except (UnsupportedStructure, PeriodLimitError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    print(render(report, fmt), file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
