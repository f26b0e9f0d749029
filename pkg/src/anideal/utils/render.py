"""
JSON payloads and rich tables for command output.
"""

import json
from typing import Any, Dict, Sequence

from rich.console import Console
from rich.table import Table

from anideal.engine.expr import serialize
from anideal.engine.ideals import Ideal, ZeroIdeal
from anideal.engine.interval import Interval, decimal_enclosure, decimal_value
from anideal.models import (
    Divisor,
    ExactRational,
    IsolationResult,
    MaximalFactor,
    Point,
    Undecidable,
    ZeroFunction,
)

DIGITS = 20


def emit_json(payload: Any) -> None:
    """Print a JSON document on stdout and nothing else."""
    print(json.dumps(payload, indent=2))


def point_json(point: Point) -> Dict[str, str]:
    if isinstance(point, ExactRational):
        return {
            "kind": "rational",
            "value": str(point.value),
            "decimal": decimal_value(point.value, DIGITS),
        }
    lo, hi, width = decimal_enclosure(point.lo, point.hi, DIGITS)
    return {"kind": "enclosure", "lo": lo, "hi": hi, "width": width}


def point_text(point: Point) -> str:
    if isinstance(point, ExactRational):
        return str(point.value)
    lo, hi, _ = decimal_enclosure(point.lo, point.hi, DIGITS)
    return f"[{lo}, {hi}]"


def divisor_entries_json(divisor: Divisor) -> list[Dict[str, Any]]:
    return [
        {"point": point_json(e.point), "multiplicity": e.multiplicity} for e in divisor
    ]


def undecidable_json(verdict: Undecidable) -> Dict[str, Any]:
    lo, hi, width = decimal_enclosure(*verdict.interval, DIGITS)
    return {"undecidable": {"lo": lo, "hi": hi, "width": width, "reason": verdict.reason}}


def isolation_json(result: IsolationResult) -> Dict[str, Any]:
    match result:
        case ZeroFunction():
            return {"zero_function": True, "divisor": None}
        case Undecidable():
            return undecidable_json(result)
    assert isinstance(result, Divisor)
    return {"divisor": divisor_entries_json(result)}


def ideal_json(ideal: Ideal) -> Dict[str, Any]:
    if isinstance(ideal, ZeroIdeal):
        return {"ideal": "zero"}
    generator = None if ideal.generator is None else serialize(ideal.generator)
    return {
        "ideal": "principal",
        "divisor": divisor_entries_json(ideal.divisor),
        "generator": generator,
    }


def factors_json(factors: Sequence[MaximalFactor]) -> list[Dict[str, Any]]:
    return [{"point": point_json(f.point), "exponent": f.exponent} for f in factors]


def interval_json(value: Interval) -> Dict[str, str]:
    lo, hi = value.decimal_bounds(DIGITS)
    return {"lo": lo, "hi": hi, "width": value.decimal_width()}


def divisor_table(divisor: Divisor, title: str) -> Table:
    table = Table(title=title)
    table.add_column("Point")
    table.add_column("Kind")
    table.add_column("Width", justify="right")
    table.add_column("Multiplicity", justify="right")
    for entry in divisor:
        point = entry.point
        if isinstance(point, ExactRational):
            kind = f"exact ({decimal_value(point.value, DIGITS)})"
            width = "0"
        else:
            kind = "enclosure"
            width = decimal_enclosure(point.lo, point.hi, DIGITS)[2]
        table.add_row(point_text(point), kind, width, str(entry.multiplicity))
    return table


def factors_text(factors: Sequence[MaximalFactor]) -> str:
    """Product notation such as M_0^1 · M_1/2^2; the unit ideal prints as <1>."""
    if not factors:
        return "<1>"
    return " · ".join(f"M_{point_text(f.point)}^{f.exponent}" for f in factors)


def print_isolation(console: Console, result: IsolationResult, title: str) -> None:
    match result:
        case ZeroFunction():
            console.print("f is identically zero: every point of [0,1] is a zero.")
        case Undecidable():
            lo, hi, _ = decimal_enclosure(*result.interval, DIGITS)
            console.print(f"[bold yellow]Undecidable[/bold yellow] on [{lo}, {hi}]: {result.reason}")
        case Divisor() if result.is_empty:
            console.print(f"{title}: no zeros in [0,1]")
        case Divisor():
            console.print(divisor_table(result, title))


def print_ideal(console: Console, ideal: Ideal, title: str) -> None:
    if isinstance(ideal, ZeroIdeal):
        console.print(f"{title}: the zero ideal <0>")
        return
    if ideal.generator is not None:
        console.print(f"generator: {serialize(ideal.generator)}")
    if ideal.divisor.is_empty:
        console.print(f"{title}: the unit ideal <1>")
        return
    console.print(divisor_table(ideal.divisor, title))
