from argparse import Namespace
from typing import Any, Callable, Dict

from rich.console import Console

from anideal.engine import ideals
from anideal.engine.expr import Expr, serialize
from anideal.engine.ideals import Ideal, PrincipalIdeal
from anideal.engine.params import IsolationParams
from anideal.exceptions import UndecidableError
from anideal.models import Config, Undecidable, Unrepresentable
from anideal.utils.logger import logger_setup
from anideal.utils.pipeline import check_divisor, parse_analytic
from anideal.utils.render import (
    emit_json,
    factors_json,
    factors_text,
    ideal_json,
    print_ideal,
    undecidable_json,
)

log = logger_setup(__name__)

BINARY_OPERATIONS: Dict[str, Callable[..., Ideal]] = {
    "sum": ideals.sum,
    "product": ideals.product,
    "intersect": ideals.intersect,
    "quotient": ideals.quotient,
}


def build_parser(parent_parser: Any, config: Config | None) -> None:
    """
    Builds the parser for this script. This is executed by the main CLI
    dynamically.

    :param parent_parser: subparsers object of the main parser
    :param config: unused while building parsers
    """
    subparser = parent_parser.add_parser(
        "ideal",
        help="Algebra of ideals given by generators.",
    )
    actions = subparser.add_subparsers(dest="action", required=True)

    single = {
        "from": "Ideal generated by f, as its divisor.",
        "factor": "Factorization into powers of maximal ideals.",
        "is-maximal": "Whether <f> is a maximal ideal.",
        "is-prime": "Whether <f> is a prime ideal.",
        "radical": "Radical of <f>.",
        "generator": "Canonical polynomial generator of <f>.",
    }
    for name, help_text in single.items():
        action = actions.add_parser(name, help=help_text)
        action.add_argument("generator", type=str, help="Generator expression.")

    for name in BINARY_OPERATIONS:
        action = actions.add_parser(name, help=f"{name.capitalize()} of <f> and <g>.")
        action.add_argument("generator", type=str, help="Generator f of the first ideal.")
        action.add_argument("other", type=str, help="Generator g of the second ideal.")

    member = actions.add_parser("member", help="Whether f lies in the ideal <g>.")
    member.add_argument("element", type=str, help="Expression f.")
    member.add_argument(
        "--in",
        dest="generator",
        required=True,
        type=str,
        help="Generator g of the ideal.",
    )
    subparser.set_defaults(func=main)


def _ideal_of(text: str, params: IsolationParams, config: Config) -> Ideal:
    f = parse_analytic(text, params)
    result = ideals.from_generator(f, params)
    if isinstance(result, Undecidable):
        raise UndecidableError(result.interval, result.reason)
    if config.oracle and isinstance(result, PrincipalIdeal):
        check_divisor(f, result.divisor)
    return result


def _report_ideal(ideal: Ideal, title: str, config: Config) -> None:
    if config.output_format == "json":
        emit_json(ideal_json(ideal))
    else:
        print_ideal(Console(), ideal, title)


def _report_flag(key: str, value: bool, title: str, config: Config) -> None:
    if config.output_format == "json":
        emit_json({key: value})
    else:
        Console().print(f"{title}: {'yes' if value else 'no'}")


def _run(args: Namespace, config: Config, params: IsolationParams) -> int:
    action = args.action
    if action == "member":
        element: Expr = parse_analytic(args.element, params)
        verdict = ideals.membership(element, _ideal_of(args.generator, params, config), params)
        if isinstance(verdict, Undecidable):
            raise UndecidableError(verdict.interval, verdict.reason)
        _report_flag("member", verdict, f"{args.element} in <{args.generator}>", config)
        return 0

    ideal = _ideal_of(args.generator, params, config)
    title = f"<{args.generator}>"
    if action in BINARY_OPERATIONS:
        other = _ideal_of(args.other, params, config)
        result = BINARY_OPERATIONS[action](ideal, other, params)
        _report_ideal(result, f"{action} of <{args.generator}> and <{args.other}>", config)
    elif action == "from":
        _report_ideal(ideal, title, config)
    elif action == "radical":
        _report_ideal(ideals.radical(ideal), f"radical of {title}", config)
    elif action == "is-maximal":
        _report_flag("maximal", ideals.is_maximal(ideal), f"{title} is maximal", config)
    elif action == "is-prime":
        _report_flag("prime", ideals.is_prime(ideal), f"{title} is prime", config)
    elif action == "factor":
        factors = ideals.factor_maximals(ideal)
        if config.output_format == "json":
            emit_json(factors_json(factors))
        else:
            Console().print(factors_text(factors))
    elif action == "generator":
        generator = ideals.canonical_generator(ideal)
        if isinstance(generator, Unrepresentable):
            if config.output_format == "json":
                emit_json({"unrepresentable": factors_json(generator.factors)})
            else:
                Console().print(
                    "No rational generator; factors: " + factors_text(generator.factors)
                )
        elif config.output_format == "json":
            emit_json({"generator": serialize(generator)})
        else:
            Console().print(serialize(generator))
    return 0


def main(args: Namespace, config: Config) -> int:
    """
    Builds the ideals named on the command line, applies the requested
    operation and prints the result.

    :param args: Argparse Namespace that has all the arguments
    :param config: resolved configuration
    :return: exit code, 4 when a divisor or membership is undecidable
    """
    params = config.to_params()
    try:
        with Console(stderr=True).status("[bold green]Computing divisors..."):
            return _run(args, config, params)
    except UndecidableError as e:
        verdict = Undecidable(e.interval, e.reason)
        if config.output_format == "json":
            emit_json(undecidable_json(verdict))
        else:
            Console().print(f"[bold yellow]{verdict}[/bold yellow]")
        return 4
