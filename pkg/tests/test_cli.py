"""Tests for the command-line interface."""

import json

import pytest
from typer.testing import CliRunner

from cooccur import __version__
from cooccur.checks import REGISTRY, CaseResult
from cooccur.cli import app

from .conftest import GOLDEN_DIR

runner = CliRunner()


def golden(name: str) -> str:
    return (GOLDEN_DIR / name).read_text(encoding="utf-8")


class TestQueries:
    """Tests for prob, kernel, density and eint commands."""

    @pytest.mark.parametrize(
        "args,expected",
        [
            (["--query", "joint"], "prob_joint.txt"),
            (["--query", "cond", "--decimal", "4"], "prob_cond_decimal.txt"),
            (["--query", "null"], "prob_null.txt"),
        ],
    )
    def test_prob(self, m0_path, args, expected):
        """Test probabilities against golden output."""
        result = runner.invoke(app, ["prob", "-m", str(m0_path), *args])
        assert result.exit_code == 0, result.output
        assert result.output == golden(expected)

    def test_prob_inline_json(self, m0_path):
        """Test an inline query with JSON output."""
        inline = '{"targets": [{"object": "X2", "event": ["hi"]}]}'
        result = runner.invoke(app, ["prob", "-m", str(m0_path), "--inline", inline, "--json"])
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout) == {"value": "1/2", "null_condition": False}

    def test_prob_needs_query(self, m0_path):
        """Test that a query is required."""
        result = runner.invoke(app, ["prob", "-m", str(m0_path)])
        assert result.exit_code == 2

    def test_kernel(self, m0_path):
        """Test the kernel of half given parity."""
        result = runner.invoke(app, ["kernel", "-m", str(m0_path), "--source", "X1", "--target", "X2"])
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["rows"] == [["1/2", "1/2"], ["1/2", "1/2"]]
        assert data["support"] == [0, 1]
        assert data["source"] == "parity"

    def test_kernel_with_conditions(self, m0_path):
        """Test a kernel under an inline condition."""
        conditions = '[{"object": "X2", "event": ["hi"]}]'
        result = runner.invoke(
            app,
            ["kernel", "-m", str(m0_path), "--source", "X3", "--target", "X1", "--conditions", conditions],
        )
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout)["support"] == [2, 3]

    def test_density(self, m0_path):
        """Test the density against marginals."""
        result = runner.invoke(app, ["density", "-m", str(m0_path), "-o", "1=X1", "-o", "2=X2"])
        assert result.exit_code == 0, result.output
        assert result.output == golden("density_m0.json")

    def test_density_factors(self, m0_path):
        """Test factorization of an independent pair."""
        result = runner.invoke(
            app, ["density", "-m", str(m0_path), "-o", "1=X1", "-o", "2=X2", "--blocks", "1;2"]
        )
        assert result.exit_code == 0, result.output
        factors = json.loads(result.stdout)["factors"]
        assert [f["indices"] for f in factors] == [[1], [2]]

    def test_density_bases(self, m0_path):
        """Test the density against a named base family."""
        result = runner.invoke(
            app, ["density", "-m", str(m0_path), "-o", "1=X1", "-o", "2=X2", "--bases", "counting"]
        )
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout)["values"] == ["1/4"] * 4

    def test_density_not_factorizable(self, diagonal_path):
        """Test the witness exit for a dependent pair."""
        result = runner.invoke(
            app, ["density", "-m", str(diagonal_path), "-o", "1=X1", "-o", "2=X2", "--blocks", "1;2"]
        )
        assert result.exit_code == 4
        assert "witness: [0, 1]" in result.output

    @pytest.mark.parametrize("blocks", ["1;x", "1;;2"])
    def test_density_bad_blocks(self, m0_path, blocks):
        """Test that malformed blocks are usage errors."""
        result = runner.invoke(
            app, ["density", "-m", str(m0_path), "-o", "1=X1", "-o", "2=X2", "--blocks", blocks]
        )
        assert result.exit_code == 2

    def test_eint(self, m0_path):
        """Test an event-conditioned expectation."""
        result = runner.invoke(
            app, ["eint", "-m", str(m0_path), "--variable", "Y", "--subject", "X2", "--query", "given-even"]
        )
        assert result.exit_code == 0, result.output
        assert result.output == golden("eint_given_even.txt")

    def test_eint_given(self, m0_path):
        """Test an object-conditioned expectation."""
        result = runner.invoke(
            app, ["eint", "-m", str(m0_path), "--variable", "Y", "--subject", "X2", "--given", "X3"]
        )
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["values"] == ["0", "0", "1", "1"]
        assert data["null_condition"] is False


class TestIndependenceAndScm:
    """Tests for ci and scm commands."""

    @pytest.mark.parametrize(
        "name,expected",
        [("parity-vs-half", "ci_parity_vs_half.txt"), ("parity-vs-point", "ci_parity_vs_point.txt")],
    )
    def test_ci(self, m0_path, name, expected):
        """Test independence statements against golden output."""
        result = runner.invoke(app, ["ci", "-m", str(m0_path), "--spec", name])
        assert result.exit_code == 0, result.output
        assert result.output == golden(expected)

    def test_ci_json(self, m0_path):
        """Test the JSON rendering of an independence result."""
        result = runner.invoke(app, ["ci", "-m", str(m0_path), "--spec", "parity-vs-point", "--json"])
        assert json.loads(result.stdout) == {"independent": False, "null_condition": False, "witness": [0, 0, 0]}

    def test_scm_solve(self, m0_path):
        """Test the solution map."""
        result = runner.invoke(app, ["scm", "-m", str(m0_path), "--name", "chain"])
        assert result.exit_code == 0, result.output
        solutions = json.loads(result.stdout)["solutions"]
        assert [s["endo"] for s in solutions] == [[[0, 0]], [[1, 1]]]

    def test_scm_observe(self, m0_path):
        """Test the observational law against golden output."""
        result = runner.invoke(app, ["scm", "-m", str(m0_path), "--name", "chain", "--action", "observe"])
        assert result.exit_code == 0, result.output
        assert result.output == golden("scm_chain_observe.json")

    def test_scm_intervene(self, m0_path):
        """Test an intervened law."""
        result = runner.invoke(
            app, ["scm", "-m", str(m0_path), "--name", "chain", "--action", "intervene", "--do", "1=0"]
        )
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout)["weights"] == ["1", "0", "0", "0"]

    def test_scm_intervene_needs_do(self, m0_path):
        """Test that interventions need an assignment."""
        result = runner.invoke(app, ["scm", "-m", str(m0_path), "--name", "chain", "--action", "intervene"])
        assert result.exit_code == 2

    def test_scm_not_unique(self, m0_path):
        """Test the witness exit for several solutions."""
        result = runner.invoke(app, ["scm", "-m", str(m0_path), "--name", "identity"])
        assert result.exit_code == 4
        assert "witness: [[0], [[0], [1]]]" in result.output


class TestErrors:
    """Tests for exit codes of failing commands."""

    def test_missing_model(self, tmp_path):
        """Test that an unreadable model is a load error."""
        result = runner.invoke(app, ["prob", "-m", str(tmp_path / "missing.json"), "--query", "joint"])
        assert result.exit_code == 2

    def test_unknown_object(self, m0_path):
        """Test that unknown ids are load errors."""
        inline = '{"targets": [{"object": "Z", "event": [0]}]}'
        result = runner.invoke(app, ["prob", "-m", str(m0_path), "--inline", inline])
        assert result.exit_code == 2

    def test_bad_inline_json(self, m0_path):
        """Test that malformed inline JSON is a load error."""
        result = runner.invoke(app, ["prob", "-m", str(m0_path), "--inline", "{nope"])
        assert result.exit_code == 2

    def test_bad_outcome(self, m0_path):
        """Test that unknown outcomes are domain errors."""
        inline = '{"targets": [{"object": "X1", "event": ["z"]}]}'
        result = runner.invoke(app, ["prob", "-m", str(m0_path), "--inline", inline])
        assert result.exit_code == 3

    def test_product_cap(self, m0_path):
        """Test that the product cap is applied to bundles."""
        result = runner.invoke(
            app, ["density", "-m", str(m0_path), "-o", "1=X1", "-o", "2=X2", "--product-cap", "3"]
        )
        assert result.exit_code in (2, 3)

    def test_log_file(self, m0_path, tmp_path):
        """Test that a log file is written on request."""
        log_file = tmp_path / "logs" / "cooccur.log"
        result = runner.invoke(app, ["prob", "-m", str(m0_path), "--query", "joint", "--log-file", str(log_file)])
        assert result.exit_code == 0
        assert log_file.exists()


class TestCheckCommand:
    """Tests for the check command."""

    def test_selected_check_json(self):
        """Test a seeded run of one check."""
        result = runner.invoke(app, ["check", "--theorems", "tower", "--cases", "3", "--seed", "7", "--json"])
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["ok"] is True
        assert list(data["checks"]) == ["tower"]
        counts = data["checks"]["tower"]
        assert counts["passed"] + counts["skipped"] == 3

    def test_checks_alias_with_model(self, m0_path):
        """Test the alias and a user model."""
        result = runner.invoke(
            app, ["check", "-m", str(m0_path), "--checks", "pushforward-mass,bundle-projection", "--cases", "1"]
        )
        assert result.exit_code == 0, result.output
        assert "Todas las verificaciones pasaron" in result.output

    def test_unknown_check(self):
        """Test that unknown names are usage errors."""
        result = runner.invoke(app, ["check", "--theorems", "nope"])
        assert result.exit_code == 2

    def test_config_passed_through(self, mocker):
        """Test that options reach the check runner."""
        report = mocker.Mock(ok=True)
        report.to_dict.return_value = {"ok": True, "checks": {}}
        run = mocker.patch("cooccur.cli.run_checks", return_value=report)
        result = runner.invoke(
            app, ["check", "--theorems", "tower, jensen", "--cases", "5", "--seed", "3", "--json"]
        )
        assert result.exit_code == 0, result.output
        model, config = run.call_args.args
        assert model is None
        assert config.selected == ("tower", "jensen")
        assert (config.cases, config.seed) == (5, 3)

    def test_verbose_configures_logger(self, m0_path, mocker):
        """Test that the verbose flag reaches the logger setup."""
        setup = mocker.patch("cooccur.cli.setup_logger")
        runner.invoke(app, ["prob", "-m", str(m0_path), "--query", "joint", "-v"])
        setup.assert_called_once_with(verbose=True, log_file=None)

    def test_failing_check_exit_code(self, monkeypatch):
        """Test exit code 1 when a check fails."""
        monkeypatch.setitem(REGISTRY, "tower", lambda model, rng, config: CaseResult(False, "boom"))
        result = runner.invoke(app, ["check", "--theorems", "tower", "--cases", "1", "--json"])
        assert result.exit_code == 1
        assert json.loads(result.stdout)["checks"]["tower"]["first_failure"] == "boom"


class TestMain:
    """Tests for the top-level command."""

    def test_version(self):
        """Test the version flag."""
        result = runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_help_without_command(self):
        """Test that help is shown without a command."""
        result = runner.invoke(app, [])
        assert result.exit_code == 0
        assert "prob" in result.output
