"""Integration tests for the dqc1 command line."""

import io
import json
import logging
import os

import pytest

import app
from src.config.settings import get_settings
from src.core import experiment_runner
from src.core.circuit_parser import parse, print_circuit
from src.core.gadgets import and_gadget
from src.models.experiment import ExperimentKind
from tests.test_fixtures import IDENTITY_TEXT, xor_parity_circuit

MINUS_IDENTITY_TEXT = """\
width 1
inputs 0
z 1
x 1
z 1
x 1
"""

OUT_OF_RANGE_TEXT = """\
width 2
inputs 0
cx 1 5
"""

SMALL_CONFIG = {
    "seed": 3,
    "sizes": {"cases": 3, "min_width": 1, "max_width": 2, "depth": 6, "input_len": 2, "max_t": 2},
}


@pytest.fixture(autouse=True)
def restore_logging():
    """main() installs a stderr handler bound to the captured stream."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def stdin(monkeypatch):
    def _feed(text: str):
        monkeypatch.setattr("sys.stdin", io.StringIO(text))
    return _feed


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(SMALL_CONFIG), encoding="utf-8")
    return path


class TestValidateAndRun:
    """Test parsing, running and the error exit codes."""

    def test_validate_prints_canonical_form(self, capsys, circuit_file, and_text):
        """validate echoes the normalised circuit."""
        assert app.main(["validate", str(circuit_file(and_text))]) == app.EXIT_OK
        out = capsys.readouterr().out
        assert out == print_circuit(parse(and_text))

    def test_gadget_output_pipes_into_run(self, capsys, stdin):
        """gadget and | run - --input 11 gives beta = -1."""
        assert app.main(["gadget", "and"]) == app.EXIT_OK
        emitted = capsys.readouterr().out
        assert emitted == print_circuit(and_gadget())

        stdin(emitted)
        assert app.main(["run", "-", "--input", "11"]) == app.EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("beta: ")
        assert float(lines[0].split(": ")[1]) == pytest.approx(-1.0)
        assert float(lines[1].split(": ")[1]) == pytest.approx(0.0, abs=1e-12)

    def test_run_json(self, capsys, circuit_file, entangled_text):
        """The entangled example has beta = 1/2 and a traceless R."""
        assert app.main(["run", str(circuit_file(entangled_text)), "--json"]) == app.EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["beta"] == pytest.approx(0.5)
        assert payload["p0"] == pytest.approx(0.75)
        assert payload["r_defined"] is True
        assert payload["r_trace"] == pytest.approx(0.0, abs=1e-12)

    def test_dense_engine_agrees(self, capsys, circuit_file, and_text):
        """--engine dense reports the same beta."""
        path = str(circuit_file(and_text))
        assert app.main(["run", path, "--input", "10", "--engine", "dense", "--json"]) == app.EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["engine"] == "dense"
        assert payload["beta"] == pytest.approx(1.0)

    def test_missing_input_is_usage_error(self, capsys, circuit_file, and_text):
        """Circuits with inputs need --input."""
        assert app.main(["run", str(circuit_file(and_text))]) == app.EXIT_USAGE
        assert "pass --input" in capsys.readouterr().err

    def test_wrong_input_length_is_usage_error(self, circuit_file, and_text):
        """The input string must match the declared arity."""
        assert app.main(["run", str(circuit_file(and_text)), "--input", "1"]) == app.EXIT_USAGE

    def test_source_error_location(self, capsys, circuit_file):
        """Parse errors name file, line and column."""
        path = circuit_file(OUT_OF_RANGE_TEXT)
        assert app.main(["validate", str(path)]) == app.EXIT_INPUT
        assert f"{path}:3:6: QubitOutOfRange" in capsys.readouterr().err

    def test_stdin_source_error(self, capsys, stdin):
        """Errors on standard input are reported against <stdin>."""
        stdin(OUT_OF_RANGE_TEXT)
        assert app.main(["validate", "-"]) == app.EXIT_INPUT
        assert "<stdin>:3:6" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        """Unreadable files exit with the input-file code."""
        assert app.main(["validate", str(tmp_path / "nope.dqc1")]) == app.EXIT_INPUT

    def test_dense_cap_flag(self, monkeypatch, circuit_file):
        """--dense-cap applies to one call without touching the environment."""
        monkeypatch.setenv("DQC1_DENSE_CAP", "12")
        path = str(circuit_file(IDENTITY_TEXT))
        assert app.main(["--dense-cap", "1", "run", path, "--engine", "dense"]) == app.EXIT_INPUT
        assert os.environ["DQC1_DENSE_CAP"] == "12"
        assert get_settings().dense_cap == 12
        assert app.main(["run", path, "--engine", "dense"]) == app.EXIT_OK

    def test_invalid_dense_cap(self, capsys):
        """A cap below one is a usage error."""
        assert app.main(["--dense-cap", "0", "validate", "-"]) == app.EXIT_USAGE
        assert "invalid settings" in capsys.readouterr().err

    def test_unknown_subcommand(self, capsys):
        """argparse failures exit with the usage code."""
        with pytest.raises(SystemExit) as excinfo:
            app.main(["teleport"])
        assert excinfo.value.code == app.EXIT_USAGE
        assert "usage error" in capsys.readouterr().err


class TestSampling:
    """Test sample and trace-est."""

    def test_sample_is_seeded(self, capsys, circuit_file):
        """The same seed gives the same counts."""
        path = str(circuit_file("width 1\ninputs 0\nh 1\n"))
        assert app.main(["sample", path, "--shots", "500", "--seed", "5", "--json"]) == app.EXIT_OK
        first = json.loads(capsys.readouterr().out)
        assert app.main(["sample", path, "--shots", "500", "--seed", "5", "--json"]) == app.EXIT_OK
        second = json.loads(capsys.readouterr().out)
        assert first == second
        assert first["zeros"] + first["ones"] == 500
        assert first["seed"] == 5

    def test_sample_reports_chosen_seed(self, capsys, circuit_file):
        """Without --seed the chosen seed is echoed on stderr."""
        path = str(circuit_file(IDENTITY_TEXT))
        assert app.main(["sample", path, "--shots", "10"]) == app.EXIT_OK
        captured = capsys.readouterr()
        assert "no --seed given" in captured.err
        assert "zeros: 10" in captured.out

    def test_trace_est_accept(self, capsys, circuit_file):
        """Tr[1]/2^w = 1 is accepted."""
        path = str(circuit_file(IDENTITY_TEXT))
        code = app.main(["trace-est", path, "--shots", "100", "--seed", "1", "--q", "3"])
        assert code == app.EXIT_OK
        out = capsys.readouterr().out
        assert "re_hat: 1 " in out
        assert "exact: 1" in out
        assert "decision: Accept" in out

    def test_trace_est_reject(self, capsys, circuit_file):
        """XZXZ = -1 is rejected."""
        path = str(circuit_file(MINUS_IDENTITY_TEXT))
        code = app.main(["trace-est", path, "--shots", "100", "--seed", "1", "--q", "3", "--json"])
        assert code == app.EXIT_REJECT
        payload = json.loads(capsys.readouterr().out)
        assert payload["decision"] == "Reject"
        assert payload["exact"] == pytest.approx(-1.0)

    def test_trace_est_promise_violation(self, capsys, circuit_file):
        """Tr[H] = 0 breaks any promise |beta| >= 1/p."""
        path = str(circuit_file("width 1\ninputs 0\nh 1\n"))
        code = app.main(["trace-est", path, "--shots", "200", "--seed", "2", "--q", "3", "--p", "2"])
        assert code == app.EXIT_UNDETERMINED
        assert "promise violated" in capsys.readouterr().err

    def test_trace_est_imaginary(self, capsys, circuit_file):
        """--imag adds the imaginary estimate; Tr[S]/2 = (1 + i)/2."""
        path = str(circuit_file("width 1\ninputs 0\ns 1\n"))
        code = app.main(["trace-est", path, "--shots", "100", "--seed", "4", "--imag", "--json"])
        assert code == app.EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["exact"] == pytest.approx(0.5)
        assert payload["exact_imag"] == pytest.approx(0.5)


class TestDecide:
    """Test the decision rule and its exit codes."""

    @pytest.mark.parametrize("beta_hat, expected", [
        ("0.5", app.EXIT_OK),
        ("-0.5", app.EXIT_REJECT),
        ("0.1", app.EXIT_UNDETERMINED),
    ])
    def test_decisions(self, beta_hat, expected):
        """1/q = 1/3 splits accept, reject and the forbidden zone."""
        assert app.main(["decide", beta_hat, "--q", "3"]) == expected

    def test_promise_violation(self, capsys):
        """An estimate inside the promise gap exits 2 even when decided."""
        assert app.main(["decide", "0.4", "--q", "3", "--p", "2"]) == app.EXIT_UNDETERMINED
        assert "promise violated" in capsys.readouterr().err

    def test_invalid_bounds(self):
        """q below 1 is a usage error."""
        assert app.main(["decide", "0.5", "--q", "0.5"]) == app.EXIT_USAGE


class TestGadgetCommand:
    """Test gadget emission with verification."""

    def test_entangle(self, capsys):
        """The entangled example verifies at width 3."""
        assert app.main(["gadget", "entangle", "--width", "3"]) == app.EXIT_OK
        circuit = parse(capsys.readouterr().out)
        assert circuit.width == 3

    def test_parity_l(self, capsys, circuit_file):
        """A CNOT file compiles and verifies on every input."""
        path = str(circuit_file(print_circuit(xor_parity_circuit())))
        assert app.main(["gadget", "parity-l", path]) == app.EXIT_OK
        assert parse(capsys.readouterr().out).input_len == 2

    def test_parity_l_rejects_non_cnot(self, circuit_file, and_text):
        """Only CNOT circuits compile."""
        assert app.main(["gadget", "parity-l", str(circuit_file(and_text))]) == app.EXIT_INPUT

    def test_mixing(self, capsys, circuit_file):
        """s mixing steps add 2s ancillas."""
        path = str(circuit_file("width 2\ninputs 0\nswap 1 2\n"))
        assert app.main(["gadget", "mixing", path, "--s", "1"]) == app.EXIT_OK
        assert parse(capsys.readouterr().out).width == 4

    def test_missing_arguments(self, circuit_file):
        """parity-l and mixing need a file; mixing needs --s."""
        assert app.main(["gadget", "parity-l"]) == app.EXIT_USAGE
        path = str(circuit_file(IDENTITY_TEXT))
        assert app.main(["gadget", "mixing", path]) == app.EXIT_USAGE


class TestExperimentCommand:
    """Test experiment runs and report output."""

    def test_json_to_stdout(self, capsys, config_file):
        """Without --out the report goes to stdout and the summary to stderr."""
        code = app.main(["experiment", "cross_engine", "--config", str(config_file)])
        assert code == app.EXIT_OK
        captured = capsys.readouterr()
        report = json.loads(captured.out)
        assert report["summary"]["total"] == 3
        assert report["summary"]["passed"] == 3
        assert "cross_engine: 3/3 passed" in captured.err

    def test_csv_out(self, tmp_path, config_file):
        """--format csv writes the table to --out."""
        out = tmp_path / "reports" / "corner.csv"
        code = app.main([
            "experiment", "corner", "--config", str(config_file),
            "--out", str(out), "--format", "csv",
        ])
        assert code == app.EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "index,input,measured,oracle,pass"
        assert len(lines) == 4

    def test_csv_needs_out(self, config_file):
        """CSV is never written to stdout."""
        code = app.main(["experiment", "corner", "--config", str(config_file), "--format", "csv"])
        assert code == app.EXIT_USAGE

    def test_seed_flag_overrides_config(self, capsys, config_file):
        """--seed replaces the config seed."""
        app.main(["experiment", "fourier", "--config", str(config_file), "--seed", "11"])
        assert json.loads(capsys.readouterr().out)["config"]["seed"] == 11

    def test_bad_config(self, tmp_path):
        """Broken or invalid config files are input errors."""
        broken = tmp_path / "broken.json"
        broken.write_text("{", encoding="utf-8")
        assert app.main(["experiment", "corner", "--config", str(broken)]) == app.EXIT_INPUT
        invalid = tmp_path / "invalid.json"
        invalid.write_text('{"sizes": {"min_width": 5, "max_width": 2}}', encoding="utf-8")
        assert app.main(["experiment", "corner", "--config", str(invalid)]) == app.EXIT_INPUT

    def test_failed_cases_exit_with_tolerance_code(self, monkeypatch, capsys, config_file):
        """Any failing case makes the run exit 5."""
        def boom(index, rng, cfg):
            raise RuntimeError("broken case")

        monkeypatch.setitem(experiment_runner._CASES, ExperimentKind.FOURIER, boom)
        code = app.main(["experiment", "fourier", "--config", str(config_file)])
        assert code == app.EXIT_TOLERANCE
        assert "3 case(s) failed" in capsys.readouterr().err


class TestRandomCommand:
    """Test random circuit emission."""

    def test_seeded(self, capsys):
        """Same seed, same circuit; the output parses."""
        argv = ["random", "--width", "3", "--inputs", "2", "--depth", "12", "--seed", "9"]
        assert app.main(argv) == app.EXIT_OK
        first = capsys.readouterr().out
        assert app.main(argv) == app.EXIT_OK
        assert capsys.readouterr().out == first
        circuit = parse(first)
        assert circuit.width == 3
        assert circuit.input_len == 2

    def test_invalid_width(self):
        """Width 0 is a usage error."""
        assert app.main(["random", "--width", "0", "--seed", "1"]) == app.EXIT_USAGE
