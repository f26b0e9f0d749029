import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

from anideal import __version__

SRC = str(Path(__file__).resolve().parent.parent / "src")


class TestCLI(unittest.TestCase):
    """
    Functional tests for the anideal CLI entry point.
    """

    def setUp(self):
        # A clean HOME guarantees that no user config file is picked up.
        self._home = tempfile.TemporaryDirectory()
        self.home = self._home.name
        self.env = os.environ.copy()
        self.env["HOME"] = self.home
        self.env["XDG_CONFIG_HOME"] = os.path.join(self.home, ".config")
        self.env["PYTHONPATH"] = os.pathsep.join(
            p for p in (SRC, self.env.get("PYTHONPATH")) if p
        )

    def tearDown(self):
        self._home.cleanup()

    def run_cli(self, *arguments: str) -> subprocess.CompletedProcess:
        command = [sys.executable, "-m", "anideal", *arguments]
        return subprocess.run(
            command, capture_output=True, text=True, env=self.env, check=False
        )

    def run_json(self, *arguments: str) -> tuple[int, dict]:
        result = self.run_cli("--format", "json", *arguments)
        return result.returncode, json.loads(result.stdout)

    def write_config(self, text: str) -> str:
        path = os.path.join(self.home, "settings.yaml")
        with open(path, "w") as f:
            f.write(text)
        return path

    def test_version_command_succeeds_without_config(self):
        """
        Test that 'anideal --version' runs successfully without a config file.
        """
        # Act
        result = self.run_cli("--version")

        # Assert
        self.assertEqual(result.returncode, 0, "Command should exit successfully.")
        self.assertIn(f"anideal {__version__}", result.stdout)
        self.assertEqual(result.stderr, "", "There should be no errors on stderr.")

    def test_help_lists_every_subcommand(self):
        # Act
        result = self.run_cli("--help")

        # Assert
        self.assertEqual(result.returncode, 0)
        self.assertIn("{deflate,eval,ideal,roots}", result.stdout)

    def test_missing_subcommand_is_a_usage_error(self):
        result = self.run_cli()
        self.assertEqual(result.returncode, 1)

    def test_invalid_precision_is_a_usage_error(self):
        result = self.run_cli("--precision", "99", "roots", "x")
        self.assertEqual(result.returncode, 1)
        self.assertIn("precision must be one of", result.stderr)

    def test_inconsistent_precisions_are_a_usage_error(self):
        result = self.run_cli("--precision", "256", "--max-precision", "128", "roots", "x")
        self.assertEqual(result.returncode, 1)
        self.assertIn("exceeds cap", result.stderr)

    def test_syntax_error(self):
        # Act
        result = self.run_cli("roots", "x +")

        # Assert
        self.assertEqual(result.returncode, 2)
        self.assertIn("Error: at byte 3", result.stderr)
        self.assertEqual(result.stdout, "")

    def test_not_analytic(self):
        result = self.run_cli("roots", "1/(x-1/2)")
        self.assertEqual(result.returncode, 3)
        self.assertIn("x - 1/2", result.stderr)

    def test_constant_division_by_zero(self):
        result = self.run_cli("eval", "x/(1-1)", "1/2")
        self.assertEqual(result.returncode, 3)

    def test_undecidable_identity(self):
        # Act
        code, payload = self.run_json("roots", "sin(x)^2+cos(x)^2-1")

        # Assert
        self.assertEqual(code, 4)
        self.assertIn("reason", payload["undecidable"])

    def test_roots_json(self):
        # Act
        code, payload = self.run_json("roots", "(x-1/2)^2*(x-1/4)")

        # Assert
        self.assertEqual(code, 0)
        entries = [(e["point"]["value"], e["multiplicity"]) for e in payload["divisor"]]
        self.assertEqual(entries, [("1/4", 1), ("1/2", 2)])
        self.assertEqual(payload["divisor"][0]["point"]["kind"], "rational")

    def test_roots_enclosure_json(self):
        code, payload = self.run_json("--tolerance", "2^-30", "roots", "exp(x) - 2")
        self.assertEqual(code, 0)
        point = payload["divisor"][0]["point"]
        self.assertEqual(point["kind"], "enclosure")
        self.assertTrue(point["lo"].startswith("0.693147"))
        self.assertLessEqual(float(point["width"]), 2**-29)

    def test_zero_function_json(self):
        code, payload = self.run_json("roots", "0*exp(x)")
        self.assertEqual(code, 0)
        self.assertEqual(payload, {"zero_function": True, "divisor": None})

    def test_roots_text(self):
        result = self.run_cli("roots", "sin(pi*x)")
        self.assertEqual(result.returncode, 0)
        self.assertIn("exact", result.stdout)

    def test_oracle_agrees_on_polynomials(self):
        result = self.run_cli("--oracle", "roots", "x^3 - x/2")
        self.assertEqual(result.returncode, 0, result.stderr)

    def test_eval_json(self):
        # Act
        code, payload = self.run_json("--oracle", "eval", "x^2+1", "1/2")

        # Assert
        self.assertEqual(code, 0)
        self.assertEqual(payload["exact"], "5/4")
        self.assertEqual(payload["lo"], "1.25000000000000000000")

    def test_eval_rejects_points_outside_the_unit_interval(self):
        result = self.run_cli("eval", "x", "3/2")
        self.assertEqual(result.returncode, 1)

    def test_deflate_json(self):
        # Act
        code, payload = self.run_json("--oracle", "deflate", "x^2 - 1", "1", "2")

        # Assert
        self.assertEqual(code, 0)
        self.assertEqual([c["exact"] for c in payload["coefficients"]], ["2", "1"])
        self.assertTrue(payload["dominated"])

    def test_deflate_text(self):
        result = self.run_cli("deflate", "exp(x)", "0", "3", "--digits", "6")
        self.assertEqual(result.returncode, 0)
        self.assertIn("0.500000", result.stdout)

    def test_ideal_factor(self):
        code, payload = self.run_json("--oracle", "ideal", "factor", "x*(x-1/2)^2")
        self.assertEqual(code, 0)
        self.assertEqual(
            [(f["point"]["value"], f["exponent"]) for f in payload],
            [("0", 1), ("1/2", 2)],
        )

    def test_ideal_member(self):
        code, payload = self.run_json("ideal", "member", "x - 1", "--in", "x^2 - 1")
        self.assertEqual(code, 0)
        self.assertEqual(payload, {"member": True})

    def test_ideal_sum(self):
        code, payload = self.run_json("ideal", "sum", "(x-1/2)^2", "(x-1/2)*(x-1/3)")
        self.assertEqual(code, 0)
        self.assertEqual(payload["ideal"], "principal")
        self.assertEqual(len(payload["divisor"]), 1)

    def test_ideal_generator_text(self):
        result = self.run_cli("ideal", "generator", "2*x*(x-1/2)^2")
        self.assertEqual(result.returncode, 0)
        self.assertIn("x*(x - 1/2)^2", result.stdout)

    def test_ideal_generator_unrepresentable(self):
        code, payload = self.run_json("ideal", "generator", "exp(x) - 2")
        self.assertEqual(code, 0)
        self.assertEqual(payload["unrepresentable"][0]["point"]["kind"], "enclosure")

    def test_ideal_of_undecidable_generator(self):
        result = self.run_cli("ideal", "is-prime", "sin(x)^2+cos(x)^2-1")
        self.assertEqual(result.returncode, 4)

    def test_ideal_action_is_required(self):
        result = self.run_cli("ideal")
        self.assertEqual(result.returncode, 1)

    def test_config_file_sets_defaults(self):
        # Arrange
        path = self.write_config('format: json\ntolerance: "2^-20"\n')

        # Act
        result = self.run_cli("--config", path, "roots", "x^2 - 1/2")

        # Assert
        self.assertEqual(result.returncode, 0, result.stderr)
        payload = json.loads(result.stdout)
        self.assertLessEqual(float(payload["divisor"][0]["point"]["width"]), 2**-19)

    def test_command_line_overrides_config_file(self):
        path = self.write_config("format: json\n")
        result = self.run_cli("--config", path, "--format", "text", "roots", "x")
        self.assertEqual(result.returncode, 0)
        self.assertNotIn('"divisor"', result.stdout)

    def test_default_config_location_is_read(self):
        # Arrange
        directory = os.path.join(self.home, ".config", "anideal")
        os.makedirs(directory)
        with open(os.path.join(directory, "config.yaml"), "w") as f:
            f.write("format: json\n")

        # Act
        result = self.run_cli("roots", "x")

        # Assert
        self.assertEqual(result.returncode, 0)
        self.assertEqual(json.loads(result.stdout)["divisor"][0]["point"]["value"], "0")

    def test_missing_config_file_fails(self):
        """
        Test that an explicitly named config file must exist.
        """
        # Act
        result = self.run_cli("--config", os.path.join(self.home, "nope.yaml"), "roots", "x")

        # Assert
        self.assertEqual(result.returncode, 1)
        self.assertIn("not found", result.stderr)

    def test_invalid_yaml_fails(self):
        path = self.write_config("format: [json\n")
        result = self.run_cli("--config", path, "roots", "x")
        self.assertEqual(result.returncode, 1)
        self.assertIn("Invalid YAML", result.stderr)

    def test_invalid_config_value_fails(self):
        path = self.write_config("precision: 100\n")
        result = self.run_cli("--config", path, "roots", "x")
        self.assertEqual(result.returncode, 1)

    def test_debug_logging_goes_to_stderr_and_log_file(self):
        # Arrange
        log_file = os.path.join(self.home, "run.log")

        # Act
        result = self.run_cli("--debug", "--log-file", log_file, "--format", "json", "roots", "x")

        # Assert
        self.assertEqual(result.returncode, 0)
        json.loads(result.stdout)
        self.assertIn("DEBUG", result.stderr)
        with open(log_file) as f:
            self.assertIn("Resolved configuration", f.read())


if __name__ == "__main__":
    unittest.main()
