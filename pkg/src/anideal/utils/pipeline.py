"""
Steps shared by the subcommands: parsing, the analyticity gate and the
oracle cross-check.
"""

from fractions import Fraction

from anideal.engine.expr import Expr, normalize, parse
from anideal.engine.oracle import RatPoly, agrees_with, from_expr
from anideal.engine.params import IsolationParams
from anideal.engine.roots import check_analytic
from anideal.exceptions import NotAnalyticError, OracleDisagreement
from anideal.models import Divisor, NotAnalytic
from anideal.utils.logger import logger_setup

log = logger_setup(__name__)


def parse_analytic(text: str, params: IsolationParams) -> Expr:
    """
    Parse expression text and make sure it is analytic on [0,1].

    :raises ExpressionSyntaxError: for text outside the grammar
    :raises NotAnalyticError: if a denominator may vanish on [0,1]
    """
    f = parse(text)
    verdict = check_analytic(f, params)
    if isinstance(verdict, NotAnalytic):
        raise NotAnalyticError(verdict.witness, str(verdict))
    return f


def polynomial_of(f: Expr) -> RatPoly | None:
    """The exact polynomial behind f, if f is a nonzero rational polynomial."""
    p = from_expr(normalize(f))
    if p is None or p.is_zero:
        return None
    return p


def check_divisor(f: Expr, divisor: Divisor) -> None:
    """
    Compare an engine divisor with the exact one, for polynomial f only.

    :raises OracleDisagreement: when they differ
    """
    p = polynomial_of(f)
    if p is None:
        log.debug("oracle skipped: %s is not a rational polynomial", f)
        return
    if not agrees_with(divisor, p):
        raise OracleDisagreement(f"engine divisor of {f} disagrees with the exact divisor of {p}")
    log.debug("oracle agrees on %s", p)


def check_value(f: Expr, q: Fraction, lo: Fraction, hi: Fraction) -> None:
    """
    Verify that the exact value of a polynomial f at q lies in [lo, hi].

    :raises OracleDisagreement: otherwise
    """
    p = polynomial_of(f)
    if p is None:
        return
    value = p(q)
    if not lo <= value <= hi:
        raise OracleDisagreement(f"exact value {value} of {p} at {q} is outside [{lo}, {hi}]")
