"""Command-line front-end.

Every command prints one JSON object to stdout with the fixed top-level keys
command, params, status, value, trace_file, oracle, notes, and exits with

    0  converged / holds / continuous / pass
    2  no-limit / violated / not-continuous / fail
    3  undecided / inconclusive
    4  input or domain error

The params echo contains every resolved setting (defaults included), so a
run is reproducible bit-exactly from its own output. --trace FILE writes the
full per-level CSV regardless of status.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .errors import (BaseNotPuncturedError, DomainError, FilterDerivError,
                     NonSmoothPointError, ParseError)
from .expr import as_function, free_vars, parse
from .fderiv import (check_linearity, check_product_rule, check_quotient_rule,
                     classical_derivative, derivative, f_continuity)
from .filterbase import (FilterBaseChain, SequenceSpec, left_base,
                         punctured_base, right_base, sequence_base,
                         verify_base_axioms)
from .flimit import (CONVERGED, DOMAIN_ERROR, NO_LIMIT, UNDECIDED,
                     LimitConfig, LimitEstimate, estimate_limit,
                     format_trace_csv)
from .oracle import richardson_one_sided, symbolic_derivative_value

__all__ = ["main", "build_parser", "parse_base_spec"]

_EXIT_CODES = {
    CONVERGED: 0, "holds": 0, "continuous": 0, "pass": 0,
    NO_LIMIT: 2, "violated": 2, "not-continuous": 2, "fail": 2,
    UNDECIDED: 3, "inconclusive": 3,
    DOMAIN_ERROR: 4, "input-error": 4,
}


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def parse_base_spec(spec: str, *, max_level: int) -> FilterBaseChain:
    """Build a chain from the mini-language, e.g.
    punctured:delta0=1,ratio=0.5 | right:... | left:... |
    seq:kind=powinv,c=1,p=1 | seq:kind=geo,c=1,q=0.5 | seq:kind=piovern,c=1
    """
    head, _, rest = spec.partition(":")
    opts: dict[str, str] = {}
    if rest:
        for chunk in rest.split(","):
            key, eq, val = chunk.partition("=")
            if not eq or not key:
                raise ValueError(f"malformed base option {chunk!r} in {spec!r}")
            if key in opts:
                raise ValueError(f"duplicate base option {key!r} in {spec!r}")
            opts[key] = val

    def take_float(key: str, default: float | None = None) -> float:
        if key not in opts:
            if default is None:
                raise ValueError(f"base spec {spec!r} is missing {key!r}")
            return default
        try:
            return float(opts.pop(key))
        except ValueError:
            raise ValueError(f"base option {key!r} is not a number") from None

    if head in ("punctured", "right", "left"):
        delta0 = take_float("delta0", 1.0)
        ratio = take_float("ratio", 0.5)
        if opts:
            raise ValueError(f"unknown base options {sorted(opts)} in {spec!r}")
        maker = {"punctured": punctured_base, "right": right_base,
                 "left": left_base}[head]
        return maker(delta0, ratio, max_level=max_level)
    if head == "seq":
        kind = opts.pop("kind", None)
        if kind is None:
            raise ValueError(f"base spec {spec!r} is missing 'kind'")
        c = take_float("c", 1.0)
        p = take_float("p", 1.0) if kind == "powinv" else None
        q = take_float("q", 0.5) if kind == "geo" else None
        if opts:
            raise ValueError(f"unknown base options {sorted(opts)} in {spec!r}")
        return sequence_base(SequenceSpec(kind=kind, c=c, p=p, q=q),
                             max_level=max_level)
    raise ValueError(f"unknown base family {head!r} "
                     "(expected punctured, right, left, or seq)")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base", required=True, help="base spec, e.g. punctured:delta0=1,ratio=0.5")
    p.add_argument("--levels", type=int, default=48, metavar="K")
    p.add_argument("--samples", type=int, default=32, metavar="M")
    p.add_argument("--tol-osc", type=float, default=1e-9)
    p.add_argument("--tol-step", type=float, default=1e-9)
    p.add_argument("--stable", type=int, default=3, metavar="S")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", metavar="FILE", help="write the per-level CSV trace here")
    p.add_argument("--json", action="store_true", default=True,
                   help="emit JSON (default; present for symmetry)")


def build_parser() -> argparse.ArgumentParser:
    top = _ArgumentParser(prog="filterderiv",
                          description="derivatives and limits along filter bases")
    sub = top.add_subparsers(dest="command", required=True)

    d = sub.add_parser("derive", help="derivative of an expression along a base")
    d.add_argument("--expr", required=True)
    d.add_argument("--x0", type=float, required=True)
    d.add_argument("--oracle", action="store_true",
                   help="append symbolic and Richardson reference values")
    _add_common_flags(d)

    li = sub.add_parser("limit", help="limit of an expression in h along a base")
    li.add_argument("--expr", required=True)
    _add_common_flags(li)

    c = sub.add_parser("continuity", help="F-continuity of an expression at a point")
    c.add_argument("--expr", required=True)
    c.add_argument("--a", type=float, required=True)
    _add_common_flags(c)

    ch = sub.add_parser("check", help="check a differentiation rule numerically")
    ch.add_argument("rule", choices=["linearity", "product", "quotient"])
    ch.add_argument("--f", required=True)
    ch.add_argument("--g", required=True)
    ch.add_argument("--alpha", type=float, default=1.0)
    ch.add_argument("--beta", type=float, default=1.0)
    ch.add_argument("--x0", type=float, required=True)
    ch.add_argument("--check-tol", type=float, default=1e-5)
    _add_common_flags(ch)

    v = sub.add_parser("verify-base", help="check the base axioms level by level")
    v.add_argument("--base", required=True)
    v.add_argument("--levels", type=int, default=48, metavar="K")
    return top


def _config_from(args: argparse.Namespace) -> LimitConfig:
    return LimitConfig(max_level=args.levels, samples_per_level=args.samples,
                       tol_osc=args.tol_osc, tol_step=args.tol_step,
                       stable_levels=args.stable, seed=args.seed)


def _echo_common(args: argparse.Namespace, base: FilterBaseChain,
                 cfg: LimitConfig) -> dict:
    return {
        "base": args.base,
        "base_id": base.id,
        "base_params": base.params,
        "levels": cfg.max_level,
        "samples": cfg.samples_per_level,
        "tol_osc": cfg.tol_osc,
        "tol_step": cfg.tol_step,
        "stable": cfg.stable_levels,
        "no_limit_floor": cfg.no_limit_floor,
        "seed": cfg.seed,
    }


def _write_trace(args: argparse.Namespace, est: LimitEstimate) -> str | None:
    if not args.trace:
        return None
    with open(args.trace, "w", newline="") as fh:
        fh.write(format_trace_csv(est))
    return args.trace


def _oracle_payload(e, var: str, x0: float, f, base: FilterBaseChain) -> dict:
    out: dict = {"symbolic": None, "symbolic_note": None,
                 "richardson_right": None, "richardson_left": None}
    try:
        ov = symbolic_derivative_value(e, var, x0)
        out["symbolic"] = {"value": ov.value, "estimated_error": ov.estimated_error}
    except NonSmoothPointError as exc:
        out["symbolic_note"] = str(exc)
    except DomainError as exc:
        out["symbolic_note"] = f"domain error: {exc}"
    kind = base.params.get("kind")
    sides = {"right": ("right",), "left": ("left",)}.get(kind, ("right", "left"))
    for side in sides:
        try:
            rv = richardson_one_sided(f, x0, side)
            out[f"richardson_{side}"] = {"value": rv.value,
                                         "estimated_error": rv.estimated_error}
        except DomainError as exc:
            out[f"richardson_{side}"] = {"error": str(exc)}
    return out


def _single_var(e, what: str) -> str:
    names = free_vars(e)
    if len(names) != 1:
        raise ValueError(f"{what} must have exactly one free variable, "
                         f"found {sorted(names) or 'none'}")
    return next(iter(names))


def _cmd_derive(args: argparse.Namespace) -> tuple[dict, int]:
    e = parse(args.expr)
    var = _single_var(e, "--expr")
    f = as_function(e, var)
    cfg = _config_from(args)
    base = parse_base_spec(args.base, max_level=cfg.max_level)
    res = derivative(f, args.x0, base, cfg)
    params = {"expr": args.expr, "var": var, "x0": args.x0,
              **_echo_common(args, base, cfg), "oracle": bool(args.oracle)}
    notes = [res.estimate.failure_detail] if res.estimate.failure_detail else []
    payload = {
        "command": "derive",
        "params": params,
        "status": res.status,
        "value": res.value,
        "trace_file": _write_trace(args, res.estimate),
        "oracle": _oracle_payload(e, var, args.x0, f, base) if args.oracle else None,
        "notes": notes,
    }
    return payload, _EXIT_CODES[res.status]


def _cmd_limit(args: argparse.Namespace) -> tuple[dict, int]:
    e = parse(args.expr)
    names = free_vars(e)
    if len(names) > 1:
        raise ValueError(f"--expr must have at most one free variable, "
                         f"found {sorted(names)}")
    var = next(iter(names)) if names else "h"
    g = as_function(e, var)
    cfg = _config_from(args)
    base = parse_base_spec(args.base, max_level=cfg.max_level)
    est = estimate_limit(g, base, cfg)
    params = {"expr": args.expr, "var": var, **_echo_common(args, base, cfg)}
    payload = {
        "command": "limit",
        "params": params,
        "status": est.status,
        "value": est.value,
        "trace_file": _write_trace(args, est),
        "oracle": None,
        "notes": [est.failure_detail] if est.failure_detail else [],
    }
    return payload, _EXIT_CODES[est.status]


def _cmd_continuity(args: argparse.Namespace) -> tuple[dict, int]:
    e = parse(args.expr)
    names = free_vars(e)
    if len(names) > 1:
        raise ValueError(f"--expr must have at most one free variable, "
                         f"found {sorted(names)}")
    var = next(iter(names)) if names else "x"
    f = as_function(e, var)
    cfg = _config_from(args)
    base = parse_base_spec(args.base, max_level=cfg.max_level)
    report = f_continuity(f, args.a, base, cfg)
    if report.limit.status == CONVERGED:
        status = "continuous" if report.is_continuous else "not-continuous"
    elif report.limit.status == NO_LIMIT:
        status = "not-continuous"
    else:
        status = report.limit.status  # undecided | domain-error
    notes = [f"target={report.target!r}"]
    if report.limit.failure_detail:
        notes.append(report.limit.failure_detail)
    params = {"expr": args.expr, "var": var, "a": args.a,
              **_echo_common(args, base, cfg)}
    payload = {
        "command": "continuity",
        "params": params,
        "status": status,
        "value": report.limit.value,
        "trace_file": _write_trace(args, report.limit),
        "oracle": None,
        "notes": notes,
    }
    return payload, _EXIT_CODES[status]


def _cmd_check(args: argparse.Namespace) -> tuple[dict, int]:
    fe = parse(args.f)
    ge = parse(args.g)
    f = as_function(fe, _single_var(fe, "--f"))
    g = as_function(ge, _single_var(ge, "--g"))
    cfg = _config_from(args)
    base = parse_base_spec(args.base, max_level=cfg.max_level)
    if args.rule == "linearity":
        rep = check_linearity(f, g, args.alpha, args.beta, args.x0, base, cfg,
                              args.check_tol)
    elif args.rule == "product":
        rep = check_product_rule(f, g, args.x0, base, cfg, args.check_tol)
    else:
        rep = check_quotient_rule(f, g, args.x0, base, cfg, args.check_tol)
    notes = [f"rhs_value={rep.rhs_value!r}",
             f"abs_error={rep.abs_error!r}",
             f"rel_error={rep.rel_error!r}"]
    for cont in rep.continuity_reports:
        notes.append(f"f_continuity(base={cont.base_id}, target={cont.target!r}): "
                     f"{'continuous' if cont.is_continuous else 'not continuous'}")
    if rep.failure_detail:
        notes.append(rep.failure_detail)
    notes.extend(rep.notes)
    params = {"rule": args.rule, "f": args.f, "g": args.g,
              "alpha": args.alpha, "beta": args.beta, "x0": args.x0,
              "check_tol": args.check_tol, **_echo_common(args, base, cfg)}
    payload = {
        "command": "check",
        "params": params,
        "status": rep.verdict,
        "value": rep.lhs.value,
        "trace_file": _write_trace(args, rep.lhs.estimate),
        "oracle": None,
        "notes": notes,
    }
    return payload, _EXIT_CODES[rep.verdict]


def _cmd_verify_base(args: argparse.Namespace) -> tuple[dict, int]:
    base = parse_base_spec(args.base, max_level=args.levels)
    rep = verify_base_axioms(base, args.levels)
    notes = []
    for k in rep.empty_levels:
        notes.append(f"axiom 1 violated: element({k}) is empty")
    for j, k in rep.nesting_failures:
        notes.append(f"axiom 2 violated: element({k}) is not contained in "
                     f"element({j}) (pair (j,k)=({j},{k}))")
    if not notes:
        notes = [f"axioms 1 and 2 verified for levels 0..{rep.levels_checked}"]
    status = "pass" if rep.passed else "fail"
    payload = {
        "command": "verify-base",
        "params": {"base": args.base, "base_id": base.id,
                   "base_params": base.params, "levels": args.levels},
        "status": status,
        "value": None,
        "trace_file": None,
        "oracle": None,
        "notes": notes,
    }
    return payload, _EXIT_CODES[status]


_HANDLERS = {
    "derive": _cmd_derive,
    "limit": _cmd_limit,
    "continuity": _cmd_continuity,
    "check": _cmd_check,
    "verify-base": _cmd_verify_base,
}


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _input_error(command: str | None, argv: Sequence[str] | None,
                 message: str) -> tuple[dict, int]:
    payload = {
        "command": command or "unknown",
        "params": {"argv": list(argv) if argv is not None else None},
        "status": "input-error",
        "value": None,
        "trace_file": None,
        "oracle": None,
        "notes": [message],
    }
    return payload, _EXIT_CODES["input-error"]


def main(argv: Sequence[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        payload, code = _input_error(None, argv, str(exc))
        _emit(payload)
        return code
    try:
        payload, code = _HANDLERS[args.command](args)
    except (ParseError, ValueError, DomainError, BaseNotPuncturedError,
            FilterDerivError, OSError) as exc:
        payload, code = _input_error(args.command, argv, str(exc))
    _emit(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
