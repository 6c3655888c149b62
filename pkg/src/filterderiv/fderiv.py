"""Derivative of a real function with respect to a filter.

The derivative at x0 along the filter generated by a chain b is the limit of
the difference quotient h -> (f(x0+h) - f(x0)) / h along b. Choosing the
punctured two-sided base recovers the classical derivative; the one-sided
bases recover right and left derivatives. Checkers for the linearity,
product and quotient rules estimate both sides numerically and report
holds / violated / inconclusive, where a failed hypothesis (an ingredient
derivative that does not converge, or a missing F-continuity) always yields
inconclusive, never violated.

The quotient rule is computed with numerator f'(x0)*g(x0) - g'(x0)*f(x0)
over g(x0)^2. Statements of this rule sometimes circulate with a misprinted
second term g'(x0)*g(x0); that form is dimensionally inconsistent with the
rule's derivation and is not used (see QUOTIENT_RULE_NOTE).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import BaseNotPuncturedError, DomainError
from .filterbase import FilterBaseChain, punctured_base
from .flimit import (CONVERGED, DOMAIN_ERROR, NO_LIMIT, LimitConfig,
                     LimitEstimate, estimate_limit)

__all__ = [
    "DerivativeResult", "FContinuityReport", "RuleCheckReport",
    "difference_quotient", "derivative", "classical_derivative",
    "f_continuity", "check_linearity", "check_product_rule",
    "check_quotient_rule", "HOLDS", "VIOLATED", "INCONCLUSIVE",
    "QUOTIENT_RULE_NOTE",
]

HOLDS = "holds"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"

QUOTIENT_RULE_NOTE = (
    "quotient rule evaluated as (f'(x0)*g(x0) - g'(x0)*f(x0)) / g(x0)^2; "
    "the misprinted variant with second numerator term g'(x0)*g(x0) is "
    "dimensionally inconsistent with the rule's derivation and is not used")


@dataclass(frozen=True)
class DerivativeResult:
    x0: float
    base_id: str
    estimate: LimitEstimate
    cfg: LimitConfig

    @property
    def status(self) -> str:
        return self.estimate.status

    @property
    def value(self) -> float | None:
        return self.estimate.value

    @property
    def converged(self) -> bool:
        return self.estimate.converged


@dataclass(frozen=True)
class FContinuityReport:
    """Is lim f(a+h) along the base equal to f(a)?"""

    point: float
    base_id: str
    limit: LimitEstimate
    target: float
    is_continuous: bool


@dataclass(frozen=True)
class RuleCheckReport:
    """Two-sided numerical check of one differentiation rule.

    rel_error is abs_error / (1 + |rhs_value|), the same relative convention
    the limit estimator uses for its step criterion. verdict is holds only
    when every ingredient converged and rel_error <= the check tolerance;
    a failed hypothesis gives inconclusive (the rule asserts nothing then).
    """

    rule: str
    lhs: DerivativeResult
    rhs_value: float | None
    inputs_summary: dict
    continuity_reports: tuple[FContinuityReport, ...]
    verdict: str
    abs_error: float | None
    rel_error: float | None
    failure_detail: str | None = None
    notes: tuple[str, ...] = ()


def difference_quotient(f: Callable[[float], float], x0: float) -> Callable[[float], float]:
    """The map h -> (f(x0+h) - f(x0)) / h. Undefined at h = 0. f(x0) is
    evaluated once, on first use."""
    cache: list[float] = []

    def quotient(h: float) -> float:
        if h == 0.0:
            raise DomainError("difference quotient is undefined at h = 0",
                              argument=0.0)
        if not cache:
            cache.append(f(x0))
        return (f(x0 + h) - cache[0]) / h

    return quotient


def derivative(f: Callable[[float], float], x0: float, b: FilterBaseChain,
               cfg: LimitConfig) -> DerivativeResult:
    """Limit of the difference quotient of f at x0 along b. The chain must
    be flagged punctured_at_zero, since h is a divisor."""
    if not b.punctured_at_zero:
        raise BaseNotPuncturedError(
            f"chain {b.id!r} is not punctured at zero; its elements may "
            "contain h = 0 where the difference quotient is undefined")
    est = estimate_limit(difference_quotient(f, x0), b, cfg)
    return DerivativeResult(x0=x0, base_id=b.id, estimate=est, cfg=cfg)


def classical_derivative(f: Callable[[float], float], x0: float, cfg: LimitConfig,
                         *, delta0: float = 1.0, ratio: float = 0.5) -> DerivativeResult:
    """Derivative along the punctured two-sided base, which recovers the
    classical derivative whenever it exists."""
    b = punctured_base(delta0, ratio, max_level=cfg.max_level)
    return derivative(f, x0, b, cfg)


def f_continuity(f: Callable[[float], float], a: float, b: FilterBaseChain,
                 cfg: LimitConfig) -> FContinuityReport:
    """Check lim f(a+h) along b against f(a). f must be defined at a
    (a DomainError from f(a) propagates)."""
    target = f(a)
    if not math.isfinite(target):
        raise DomainError("f(a) is not a finite real", argument=a)
    est = estimate_limit(lambda h: f(a + h), b, cfg)
    ok = est.converged and abs(est.value - target) <= cfg.tol_step * (1.0 + abs(target))
    return FContinuityReport(point=a, base_id=b.id, limit=est, target=target,
                             is_continuous=ok)


def _conclude(rule: str, lhs: DerivativeResult, rhs: float | None,
              inputs: dict, continuity: tuple[FContinuityReport, ...],
              hypothesis_failures: list[str], check_tol: float,
              notes: tuple[str, ...] = ()) -> RuleCheckReport:
    if hypothesis_failures:
        return RuleCheckReport(
            rule=rule, lhs=lhs, rhs_value=rhs, inputs_summary=inputs,
            continuity_reports=continuity, verdict=INCONCLUSIVE,
            abs_error=None, rel_error=None,
            failure_detail="; ".join(hypothesis_failures), notes=notes)
    if lhs.status == CONVERGED:
        abs_err = abs(lhs.value - rhs)
        rel_err = abs_err / (1.0 + abs(rhs))
        verdict = HOLDS if rel_err <= check_tol else VIOLATED
        detail = None if verdict == HOLDS else (
            f"sides disagree: lhs={lhs.value!r}, rhs={rhs!r}")
        return RuleCheckReport(
            rule=rule, lhs=lhs, rhs_value=rhs, inputs_summary=inputs,
            continuity_reports=continuity, verdict=verdict,
            abs_error=abs_err, rel_error=rel_err, failure_detail=detail,
            notes=notes)
    if lhs.status == NO_LIMIT:
        # Hypotheses hold numerically yet the combined function has no
        # derivative along the base: the rule's conclusion itself failed.
        return RuleCheckReport(
            rule=rule, lhs=lhs, rhs_value=rhs, inputs_summary=inputs,
            continuity_reports=continuity, verdict=VIOLATED,
            abs_error=None, rel_error=None,
            failure_detail="combined function has no derivative along the base "
                           "although every hypothesis held", notes=notes)
    detail = ("combined-function derivative was undecided"
              if lhs.status != DOMAIN_ERROR else
              f"combined-function estimate hit a domain error: {lhs.estimate.failure_detail}")
    return RuleCheckReport(
        rule=rule, lhs=lhs, rhs_value=rhs, inputs_summary=inputs,
        continuity_reports=continuity, verdict=INCONCLUSIVE,
        abs_error=None, rel_error=None, failure_detail=detail, notes=notes)


def _ingredient_failures(named: list[tuple[str, DerivativeResult]]) -> list[str]:
    return [f"derivative of {name} did not converge (status: {d.status})"
            for name, d in named if not d.converged]


def check_linearity(f: Callable[[float], float], g: Callable[[float], float],
                    alpha: float, beta: float, x0: float, b: FilterBaseChain,
                    cfg: LimitConfig, check_tol: float) -> RuleCheckReport:
    """Check d(alpha*f + beta*g) = alpha*df + beta*dg along b at x0."""
    df = derivative(f, x0, b, cfg)
    dg = derivative(g, x0, b, cfg)
    lhs = derivative(lambda x: alpha * f(x) + beta * g(x), x0, b, cfg)
    failures = _ingredient_failures([("f", df), ("g", dg)])
    rhs = alpha * df.value + beta * dg.value if not failures else None
    inputs = {"alpha": alpha, "beta": beta, "f_prime": df, "g_prime": dg}
    return _conclude("linearity", lhs, rhs, inputs, (), failures, check_tol)


def check_product_rule(f: Callable[[float], float], g: Callable[[float], float],
                       x0: float, b: FilterBaseChain, cfg: LimitConfig,
                       check_tol: float) -> RuleCheckReport:
    """Check d(f*g) = df*g(x0) + dg*f(x0) along b at x0.

    The rule needs F-continuity only of g (adding and subtracting
    f(x0)*g(x0+h) in the derivation uses nothing more); the verdict enforces
    just that, but the report carries continuity results for both factors.
    """
    f0 = f(x0)
    g0 = g(x0)
    df = derivative(f, x0, b, cfg)
    dg = derivative(g, x0, b, cfg)
    cont_f = f_continuity(f, x0, b, cfg)
    cont_g = f_continuity(g, x0, b, cfg)
    lhs = derivative(lambda x: f(x) * g(x), x0, b, cfg)
    failures = _ingredient_failures([("f", df), ("g", dg)])
    if not cont_g.is_continuous:
        failures.append("g is not F-continuous at x0 along the base")
    rhs = df.value * g0 + dg.value * f0 if df.converged and dg.converged else None
    inputs = {"f_at_x0": f0, "g_at_x0": g0, "f_prime": df, "g_prime": dg}
    return _conclude("product", lhs, rhs, inputs, (cont_f, cont_g),
                     failures, check_tol)


def check_quotient_rule(f: Callable[[float], float], g: Callable[[float], float],
                        x0: float, b: FilterBaseChain, cfg: LimitConfig,
                        check_tol: float) -> RuleCheckReport:
    """Check d(f/g) = (df*g(x0) - dg*f(x0)) / g(x0)^2 along b at x0.

    Requires g(x0) != 0 (ValueError otherwise). A sampled h with
    g(x0+h) = 0 aborts the combined estimate with a domain error.
    """
    g0 = g(x0)
    if g0 == 0.0:
        raise ValueError(f"quotient rule requires g(x0) != 0, got g({x0!r}) = 0")
    f0 = f(x0)
    df = derivative(f, x0, b, cfg)
    dg = derivative(g, x0, b, cfg)
    cont_g = f_continuity(g, x0, b, cfg)

    def quot(x: float) -> float:
        gx = g(x)
        if gx == 0.0:
            raise DomainError("g vanishes at a sampled point", argument=x)
        return f(x) / gx

    lhs = derivative(quot, x0, b, cfg)
    failures = _ingredient_failures([("f", df), ("g", dg)])
    if not cont_g.is_continuous:
        failures.append("g is not F-continuous at x0 along the base")
    rhs = ((df.value * g0 - dg.value * f0) / (g0 * g0)
           if df.converged and dg.converged else None)
    inputs = {"f_at_x0": f0, "g_at_x0": g0, "f_prime": df, "g_prime": dg}
    return _conclude("quotient", lhs, rhs, inputs, (cont_g,), failures,
                     check_tol, notes=(QUOTIENT_RULE_NOTE,))
