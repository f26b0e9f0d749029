import argparse
import logging
import os
import tempfile
import unittest
from argparse import Namespace
from fractions import Fraction
from unittest.mock import MagicMock, call, patch

from anideal import cli, deflate, evaluate, ideal, roots
from anideal.engine.expr import parse
from anideal.engine.series import PiLinear
from anideal.exceptions import (
    ExpressionSyntaxError,
    InvalidParamsError,
    NotAnalyticError,
    OracleDisagreement,
    PointIdentityUndecidable,
    PrecisionExhausted,
    UndecidableError,
)
from anideal.models import (
    Config,
    Divisor,
    DivisorEntry,
    ExactRational,
    MaximalFactor,
    Undecidable,
)
from anideal.utils import render
from anideal.utils.logger import configure_logging
from anideal.utils.tools import (
    parse_rational,
    parse_tolerance,
    simplest_between,
    valid_unit_point,
)

UNDECIDABLE = Undecidable((Fraction(0), Fraction(1, 2)), "signs stayed ambiguous")


def cli_flags(**overrides) -> Namespace:
    flags = dict(
        precision=None,
        max_precision=None,
        tolerance=None,
        mult_cap=None,
        format=None,
        oracle=False,
        workers=None,
        debug=False,
    )
    flags.update(overrides)
    return Namespace(**flags)


class TestRootsCommand(unittest.TestCase):
    """
    Unit tests for the roots subcommand.
    """

    def setUp(self):
        self.args = Namespace(expression="x - 1/2", func=roots.main)
        self.config = Config(output_format="json")

    @patch("anideal.roots.emit_json")
    @patch("anideal.roots.Console")
    @patch("anideal.roots.isolate_zeros")
    def test_undecidable_exit_code(self, mock_isolate, mock_console_class, mock_emit):
        # Arrange
        mock_isolate.return_value = UNDECIDABLE

        # Act
        code = roots.main(self.args, self.config)

        # Assert
        self.assertEqual(code, 4)
        mock_emit.assert_called_once_with(render.isolation_json(UNDECIDABLE))

    @patch("anideal.roots.emit_json")
    @patch("anideal.roots.Console")
    def test_json_divisor(self, mock_console_class, mock_emit):
        # Act
        code = roots.main(self.args, self.config)

        # Assert
        self.assertEqual(code, 0)
        payload = mock_emit.call_args.args[0]
        self.assertEqual(payload["divisor"][0]["point"]["value"], "1/2")

    @patch("anideal.roots.print_isolation")
    @patch("anideal.roots.Console")
    @patch("anideal.roots.check_divisor")
    def test_oracle_disagreement_propagates(self, mock_check, mock_console_class, mock_print):
        # Arrange
        self.config.oracle = True
        mock_check.side_effect = OracleDisagreement("mismatch")

        # Act / Assert
        with self.assertRaises(OracleDisagreement):
            roots.main(self.args, self.config)
        mock_print.assert_not_called()

    @patch("anideal.roots.Console")
    def test_parse_errors_propagate(self, mock_console_class):
        self.args.expression = "x +"
        with self.assertRaises(ExpressionSyntaxError):
            roots.main(self.args, self.config)


class TestEvalCommand(unittest.TestCase):
    """
    Unit tests for the eval subcommand.
    """

    @patch("anideal.evaluate.Table")
    @patch("anideal.evaluate.Console")
    def test_text_table(self, mock_console_class, mock_table_class):
        # Arrange
        args = Namespace(expression="x^2 + 1", point=Fraction(1, 2))
        mock_table = mock_table_class.return_value

        # Act
        code = evaluate.main(args, Config())

        # Assert
        self.assertEqual(code, 0)
        mock_table.add_row.assert_has_calls(
            [call("Exact", "5/4"), call("Lower", "1.25000000000000000000")]
        )
        mock_console_class.return_value.print.assert_called_once_with(mock_table)

    @patch("anideal.evaluate.emit_json")
    def test_json_without_exact_value(self, mock_emit):
        # Act
        evaluate.main(Namespace(expression="exp(x)", point=Fraction(1, 2)), Config(output_format="json"))

        # Assert
        payload = mock_emit.call_args.args[0]
        self.assertIsNone(payload["exact"])
        self.assertTrue(payload["lo"].startswith("1.648721"))

    def test_pole(self):
        with self.assertRaises(NotAnalyticError):
            evaluate.main(Namespace(expression="1/(x - 1/3)", point=Fraction(0)), Config())


class TestDeflateCommand(unittest.TestCase):
    """
    Unit tests for the deflate subcommand.
    """

    def test_oracle_accepts_the_exact_quotient(self):
        deflate._check_against_oracle(parse("x^3"), Fraction(1, 2), [PiLinear(Fraction(3, 4)), PiLinear(Fraction(3, 2)), PiLinear(1)])

    def test_oracle_rejects_a_wrong_coefficient(self):
        with self.assertRaises(OracleDisagreement):
            deflate._check_against_oracle(parse("x^2 - 1"), Fraction(1), [PiLinear(2), PiLinear(5)])

    def test_oracle_skips_transcendental_functions(self):
        deflate._check_against_oracle(parse("exp(x)"), Fraction(0), [None, None])

    @patch("anideal.deflate.emit_json")
    @patch("anideal.deflate.Console")
    def test_json_payload(self, mock_console_class, mock_emit):
        # Arrange
        args = Namespace(expression="exp(x) - 1", gamma=Fraction(0), order=3, digits=20)

        # Act
        code = deflate.main(args, Config(output_format="json", oracle=True))

        # Assert
        self.assertEqual(code, 0)
        payload = mock_emit.call_args.args[0]
        self.assertEqual([c["exact"] for c in payload["coefficients"]], ["1", "1/2", "1/6"])
        self.assertTrue(payload["dominated"])


class TestIdealCommand(unittest.TestCase):
    """
    Unit tests for the ideal subcommand.
    """

    def setUp(self):
        self.config = Config(output_format="json")

    @patch("anideal.ideal.emit_json")
    @patch("anideal.ideal.Console")
    def test_is_maximal(self, mock_console_class, mock_emit):
        code = ideal.main(Namespace(action="is-maximal", generator="x - 1/3"), self.config)
        self.assertEqual(code, 0)
        mock_emit.assert_called_once_with({"maximal": True})

    @patch("anideal.ideal.emit_json")
    @patch("anideal.ideal.Console")
    def test_quotient(self, mock_console_class, mock_emit):
        # Act
        ideal.main(Namespace(action="quotient", generator="x^2*(x-1)", other="x"), self.config)

        # Assert
        payload = mock_emit.call_args.args[0]
        self.assertEqual(
            [(e["point"]["value"], e["multiplicity"]) for e in payload["divisor"]],
            [("0", 1), ("1", 1)],
        )
        self.assertIsNone(payload["generator"])

    @patch("anideal.ideal.emit_json")
    @patch("anideal.ideal.Console")
    @patch("anideal.engine.ideals.membership")
    def test_undecidable_membership(self, mock_membership, mock_console_class, mock_emit):
        # Arrange
        mock_membership.return_value = UNDECIDABLE
        args = Namespace(action="member", element="x", generator="x - 1/2")

        # Act
        code = ideal.main(args, self.config)

        # Assert
        self.assertEqual(code, 4)
        mock_emit.assert_called_once_with(render.undecidable_json(UNDECIDABLE))

    @patch("anideal.ideal.Console")
    def test_point_identity_failure_propagates(self, mock_console_class):
        mock_sum = MagicMock(side_effect=PointIdentityUndecidable("a", "b"))
        with patch.dict(ideal.BINARY_OPERATIONS, {"sum": mock_sum}), self.assertRaises(
            PointIdentityUndecidable
        ):
            ideal.main(Namespace(action="sum", generator="x", other="x"), self.config)

    def test_binary_operations_table(self):
        self.assertEqual(set(ideal.BINARY_OPERATIONS), {"sum", "product", "intersect", "quotient"})


class TestConfigResolution(unittest.TestCase):
    """
    Unit tests for merging flags, config file settings and defaults.
    """

    def test_defaults(self):
        config = cli.resolve_config(cli_flags(), {})
        self.assertEqual(config, Config())

    def test_file_settings(self):
        # Act
        config = cli.resolve_config(
            cli_flags(), {"precision": 128, "tolerance": "2^-20", "format": "json", "debug": True}
        )

        # Assert
        self.assertEqual(config.precision_start, 128)
        self.assertEqual(config.tolerance, Fraction(1, 2**20))
        self.assertEqual(config.output_format, "json")
        self.assertTrue(config.debug)

    def test_flags_win(self):
        config = cli.resolve_config(cli_flags(workers=3, format="text"), {"workers": 2, "format": "json"})
        self.assertEqual(config.workers, 3)
        self.assertEqual(config.output_format, "text")

    def test_numeric_tolerance_from_yaml(self):
        config = cli.resolve_config(cli_flags(), {"tolerance": 0.001})
        self.assertEqual(config.tolerance, Fraction(1, 1000))

    def test_invalid_settings(self):
        for settings in ({"format": "xml"}, {"precision": 100}, {"workers": "many"}, {"tolerance": 0}):
            with self.assertRaises(InvalidParamsError, msg=str(settings)):
                cli.resolve_config(cli_flags(), settings)

    @patch.dict("os.environ", {"XDG_CONFIG_HOME": "/tmp/xdg"})
    def test_config_path_follows_xdg(self):
        self.assertEqual(cli.get_config_path(), "/tmp/xdg/anideal/config.yaml")

    def test_missing_optional_config(self):
        self.assertEqual(cli.load_config("/nonexistent/anideal.yaml"), {})

    def test_missing_required_config(self):
        with self.assertRaises(SystemExit) as ctx:
            cli.load_config("/nonexistent/anideal.yaml", required=True)
        self.assertEqual(ctx.exception.code, 1)

    def test_exit_codes(self):
        self.assertEqual(cli.exit_code_for(ExpressionSyntaxError(0, ["x"])), 2)
        self.assertEqual(cli.exit_code_for(NotAnalyticError((Fraction(0), Fraction(1)))), 3)
        self.assertEqual(cli.exit_code_for(UndecidableError((Fraction(0), Fraction(1)), "")), 4)
        self.assertEqual(cli.exit_code_for(PrecisionExhausted("")), 4)
        self.assertEqual(cli.exit_code_for(PointIdentityUndecidable("a", "b")), 5)
        self.assertEqual(cli.exit_code_for(OracleDisagreement("")), 6)
        self.assertEqual(cli.exit_code_for(InvalidParamsError("")), 1)

    @patch("anideal.cli.sys.argv", ["anideal"])
    @patch("anideal.cli.argcomplete")
    def test_main_without_subcommand(self, mock_argcomplete):
        with self.assertRaises(SystemExit) as ctx, patch("sys.stdout", new=MagicMock()):
            cli.main()
        self.assertEqual(ctx.exception.code, 1)


class TestLogging(unittest.TestCase):
    """
    Unit tests for the logging setup of a CLI run.
    """

    def tearDown(self):
        root = logging.getLogger()
        for handler in list(root.handlers):
            if getattr(handler, "_anideal_handler", False):
                root.removeHandler(handler)
                handler.close()
        root.setLevel(logging.WARNING)

    def owned_handlers(self) -> list[logging.Handler]:
        return [h for h in logging.getLogger().handlers if getattr(h, "_anideal_handler", False)]

    def test_debug_level_follows_the_configuration(self):
        # Act
        configure_logging(Config(debug=True))

        # Assert
        self.assertEqual(logging.getLogger().level, logging.DEBUG)
        self.assertEqual(len(self.owned_handlers()), 1)

    def test_warning_level_by_default(self):
        configure_logging(Config())
        self.assertEqual(logging.getLogger().level, logging.WARNING)

    def test_reconfiguration_replaces_handlers(self):
        # Arrange
        with tempfile.TemporaryDirectory() as directory:
            log_file = os.path.join(directory, "run.log")

            # Act
            configure_logging(Config(debug=True), log_file=log_file)
            configure_logging(Config(debug=True), log_file=log_file)
            logging.getLogger("anideal.engine.roots").debug("escalating to %s bits", 128)
            for handler in self.owned_handlers():
                handler.flush()

            # Assert
            self.assertEqual(len(self.owned_handlers()), 2)
            with open(log_file) as f:
                lines = f.read().splitlines()
            self.assertEqual(len(lines), 1)
            self.assertIn("anideal.engine.roots - DEBUG - escalating to 128 bits", lines[0])


class TestTools(unittest.TestCase):
    """
    Unit tests for number parsing helpers.
    """

    def test_parse_rational(self):
        self.assertEqual(parse_rational("3/4"), Fraction(3, 4))
        self.assertEqual(parse_rational("-0.125"), Fraction(-1, 8))
        self.assertEqual(parse_rational("7"), 7)
        for bad in ("1/0", "x", "1e-3", ""):
            with self.assertRaises(ValueError):
                parse_rational(bad)

    def test_parse_tolerance(self):
        self.assertEqual(parse_tolerance("2^-53"), Fraction(1, 2**53))
        self.assertEqual(parse_tolerance("2**-10"), Fraction(1, 1024))
        self.assertEqual(parse_tolerance("1/1000"), Fraction(1, 1000))

    def test_simplest_between(self):
        self.assertEqual(simplest_between(Fraction(0), Fraction(1)), Fraction(1, 2))
        self.assertEqual(simplest_between(Fraction(0), Fraction(1, 4)), Fraction(1, 5))
        self.assertEqual(simplest_between(Fraction(5, 12), Fraction(1, 2)), Fraction(3, 7))
        self.assertEqual(simplest_between(Fraction(1, 2), Fraction(3, 2)), Fraction(1))
        with self.assertRaises(ValueError):
            simplest_between(Fraction(1), Fraction(1))

    def test_valid_unit_point(self):
        self.assertEqual(valid_unit_point("0.5"), Fraction(1, 2))
        with self.assertRaises(argparse.ArgumentTypeError):
            valid_unit_point("2")


class TestRender(unittest.TestCase):
    """
    Unit tests for output payloads.
    """

    def test_factors_text(self):
        factors = [MaximalFactor(ExactRational(0), 1), MaximalFactor(ExactRational(Fraction(1, 2)), 2)]
        self.assertEqual(render.factors_text(factors), "M_0^1 · M_1/2^2")
        self.assertEqual(render.factors_text([]), "<1>")

    def test_rational_point_json(self):
        self.assertEqual(
            render.point_json(ExactRational(Fraction(1, 4))),
            {"kind": "rational", "value": "1/4", "decimal": "0.25000000000000000000"},
        )

    def test_divisor_json(self):
        divisor = Divisor((DivisorEntry(ExactRational(1), 3),))
        self.assertEqual(render.isolation_json(divisor)["divisor"][0]["multiplicity"], 3)


if __name__ == "__main__":
    unittest.main()
