"""Command line for the one-clean-qubit workbench.

Exit codes: 0 success or Accept, 1 Reject, 2 Undetermined or promise violated,
3 usage error, 4 input-file error, 5 tolerance failure.
"""

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import numpy as np
from pydantic import ValidationError

# Add src to path
project_dir = Path(__file__).parent
sys.path.insert(0, str(project_dir / "src"))

from src.config.env_loader import load_environment_variables
from src.config.logging_config import get_logger, level_for_verbosity, setup_logging
from src.config.messages import (
    DEFAULT_STDIN_NAME,
    ERROR_INPUT_FILE,
    ERROR_INPUT_REQUIRED,
    ERROR_PROMISE_VIOLATED,
    ERROR_SOURCE_POSITION,
    ERROR_TOLERANCE,
    ERROR_USAGE,
    FORMAT_BETA_LABEL,
    FORMAT_DECISION_LABEL,
    FORMAT_PROBABILITY_LABEL,
    FORMAT_UNDEFINED,
    STATUS_FALLBACK_DENSE,
    STATUS_REPORT_WRITTEN,
    STATUS_SEED_CHOSEN,
)
from src.config.settings import override_settings
from src.core.circuit_parser import Alphabet, parse, print_circuit, random_circuit
from src.core.engines import (
    EngineKind,
    beta21_terms,
    decide,
    decompose,
    dense_run,
    pauli_run,
    probability_zero,
    promise_holds,
    run_beta,
    sample,
)
from src.core.experiment_runner import run_experiment
from src.core.gadgets import (
    and_gadget,
    entangled_example,
    estimate_trace,
    markov_mixing_circuit,
    mixing_bound,
    not_gadget,
    parity_bit,
    parity_l_compile,
    witness_check,
    xor_gadget,
)
from src.core.pauli_algebra import to_dense
from src.core.report_io import REPORT_FORMATS, report_to_json, write_report
from src.models.circuit import Circuit
from src.models.errors import (
    BetaRangeError,
    Dqc1Error,
    GateArityError,
    InputLengthError,
    NonCliffordError,
    ReportIOError,
    SourceError,
    StateInvariantError,
    TermBlowupError,
)
from src.models.experiment import DEFAULT_TOLERANCES, ExperimentConfig, ExperimentKind
from src.models.states import Decision, DecisionPolicy, HeisenbergState

# Load environment variables
load_environment_variables(project_dir)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_UNDETERMINED = 2
EXIT_USAGE = 3
EXIT_INPUT = 4
EXIT_TOLERANCE = 5

DECISION_EXIT_CODES = {
    Decision.ACCEPT: EXIT_OK,
    Decision.REJECT: EXIT_REJECT,
    Decision.UNDETERMINED: EXIT_UNDETERMINED,
}

# gadget verification enumerates every input up to this arity
GADGET_VERIFY_MAX_INPUTS = 8


class UsageError(Exception):
    """Bad command-line arguments."""


class InputFileError(Exception):
    """A file named on the command line could not be read or understood."""

    def __init__(self, path: str, detail: str, located: bool = False):
        self.path = path
        self.detail = detail
        super().__init__(detail if located else ERROR_INPUT_FILE.format(path=path, detail=detail))


class ToleranceFailure(Exception):
    """A verification contract did not hold within its tolerance."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(ERROR_USAGE.format(detail=message), file=sys.stderr)
        sys.exit(EXIT_USAGE)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _display_name(path: str) -> str:
    return DEFAULT_STDIN_NAME if path == "-" else path


def read_circuit(path: str) -> Circuit:
    """Parse a circuit file; ``-`` reads standard input."""
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(path).read_bytes()
        except OSError as e:
            raise InputFileError(path, e.strerror or str(e)) from None
    try:
        return parse(text)
    except SourceError as e:
        raise InputFileError(
            _display_name(path),
            ERROR_SOURCE_POSITION.format(
                path=_display_name(path), line=e.line, column=e.column,
                kind=e.kind.value, message=e.message,
            ),
            located=True,
        ) from None


def _input_bits(c: Circuit, bits: Optional[str]) -> str:
    if bits is None:
        if c.input_len:
            raise UsageError(ERROR_INPUT_REQUIRED.format(n=c.input_len))
        return ""
    return bits


def _seed(seed: Optional[int]) -> int:
    """The given seed, or a fresh one that is logged and echoed on stderr."""
    if seed is not None:
        return seed
    chosen = int(np.random.SeedSequence().entropy % (2 ** 63))
    logger.info(STATUS_SEED_CHOSEN.format(seed=chosen))
    print(STATUS_SEED_CHOSEN.format(seed=chosen), file=sys.stderr)
    return chosen


def _emit(args: argparse.Namespace, payload: Dict, lines: Iterable[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload))
    else:
        for line in lines:
            print(line)


def _all_inputs(n: int) -> List[str]:
    if n > GADGET_VERIFY_MAX_INPUTS:
        return ["0" * n]
    return [format(v, f"0{n}b") for v in range(1 << n)] if n else [""]


def _check(deviation: float, tolerance: float, what: str) -> None:
    if deviation > tolerance:
        raise ToleranceFailure(ERROR_TOLERANCE.format(detail=f"{what}: deviation {deviation:.3g} > {tolerance:.3g}"))
    logger.info(f"Verified {what} (deviation {deviation:.3g})")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace) -> int:
    print(print_circuit(read_circuit(args.file)), end="")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    c = read_circuit(args.file)
    x = _input_bits(c, args.input)
    engine = EngineKind(args.engine)
    if engine == EngineKind.DENSE:
        state = dense_run(c, x)
    elif engine == EngineKind.PAULI:
        state = pauli_run(c, x)
    else:
        try:
            state = pauli_run(c, x)
        except (NonCliffordError, TermBlowupError, GateArityError) as e:
            logger.warning(STATUS_FALLBACK_DENSE.format(reason=e))
            state = dense_run(c, x)

    split = decompose(state)
    r_trace = None
    if split.defined_r:
        if isinstance(state, HeisenbergState):
            r_trace = abs(split.r_part.coefficient((0, 0)))
        else:
            r_trace = abs(complex(np.trace(split.r_part))) / (1 << c.width)
    beta = split.beta
    p_zero = probability_zero(beta)
    payload = {
        "beta": beta,
        "p0": p_zero,
        "engine": "pauli" if isinstance(state, HeisenbergState) else "dense",
        "r_defined": split.defined_r,
        "r_trace": r_trace,
    }
    r_text = FORMAT_UNDEFINED if r_trace is None else f"traceless (|Tr R|/2^w = {r_trace:.3g})"
    _emit(args, payload, [
        f"{FORMAT_BETA_LABEL}: {beta:.12g}",
        f"{FORMAT_PROBABILITY_LABEL}: {p_zero:.12g}",
        f"R: {r_text}",
    ])
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    c = read_circuit(args.file)
    x = _input_bits(c, args.input)
    seed = _seed(args.seed)
    counts = sample(c, x, args.shots, seed, args.partitions, EngineKind(args.engine))
    payload = {"zeros": counts.zeros, "ones": counts.ones, "shots": counts.shots,
               "beta_hat": counts.beta_hat, "seed": seed}
    _emit(args, payload, [
        f"zeros: {counts.zeros}",
        f"ones: {counts.ones}",
        f"{FORMAT_BETA_LABEL}_hat: {counts.beta_hat:.12g}",
    ])
    return EXIT_OK


def _policy(args: argparse.Namespace) -> DecisionPolicy:
    try:
        return DecisionPolicy(q_bound=args.q, p_bound=args.p)
    except ValidationError as e:
        raise UsageError(f"invalid decision bounds: {e.errors()[0]['msg']}") from None


def cmd_trace_est(args: argparse.Namespace) -> int:
    c = read_circuit(args.file)
    x = _input_bits(c, args.input)
    seed = _seed(args.seed)
    estimate = estimate_trace(
        c, args.shots, seed, confidence=args.confidence, x=x,
        imaginary=args.imag, partitions=args.partitions,
    )
    payload = estimate.model_dump()
    payload["seed"] = seed
    lines = [f"re_hat: {estimate.re_hat:.12g} +- {estimate.half_width:.6g} (confidence {estimate.confidence})"]
    lines.append(f"exact: {FORMAT_UNDEFINED if estimate.exact is None else format(estimate.exact, '.12g')}")
    if args.imag:
        lines.append(f"im_hat: {estimate.im_hat:.12g} +- {estimate.half_width:.6g}")
        exact_imag = estimate.exact_imag
        lines.append(f"exact_imag: {FORMAT_UNDEFINED if exact_imag is None else format(exact_imag, '.12g')}")

    code = EXIT_OK
    if args.q is not None:
        policy = _policy(args)
        decision = decide(estimate.re_hat, policy)
        payload["decision"] = decision.value
        lines.append(f"{FORMAT_DECISION_LABEL}: {decision.value}")
        code = DECISION_EXIT_CODES[decision]
        reference = estimate.exact if estimate.exact is not None else estimate.re_hat
        if not promise_holds(reference, policy):
            print(ERROR_PROMISE_VIOLATED.format(beta=abs(reference), bound=1.0 / policy.p_bound), file=sys.stderr)
            payload["promise_violated"] = True
            code = EXIT_UNDETERMINED
    _emit(args, payload, lines)
    return code


def cmd_decide(args: argparse.Namespace) -> int:
    policy = _policy(args)
    decision = decide(args.beta_hat, policy)
    code = DECISION_EXIT_CODES[decision]
    payload = {"beta_hat": args.beta_hat, "decision": decision.value}
    if not promise_holds(args.beta_hat, policy):
        print(ERROR_PROMISE_VIOLATED.format(beta=abs(args.beta_hat), bound=1.0 / policy.p_bound), file=sys.stderr)
        payload["promise_violated"] = True
        code = EXIT_UNDETERMINED
    _emit(args, payload, [f"{FORMAT_DECISION_LABEL}: {decision.value}"])
    return code


_BOOLEAN_TRUTH = {
    "and": (and_gadget, lambda bits: bits[0] & bits[1]),
    "xor": (xor_gadget, lambda bits: bits[0] ^ bits[1]),
    "not": (not_gadget, lambda bits: 1 - bits[0]),
}


def _gadget_boolean(args: argparse.Namespace) -> Circuit:
    builder, truth = _BOOLEAN_TRUTH[args.gadget]
    circuit = builder(args.width)
    tolerance = DEFAULT_TOLERANCES[ExperimentKind.BOOLEAN]
    for x in _all_inputs(circuit.input_len):
        expected = -1.0 if truth([int(b) for b in x]) else 1.0
        _check(abs(run_beta(circuit, x, EngineKind.DENSE) - expected), tolerance, f"{args.gadget} on {x}")
    return circuit


def _gadget_entangle(args: argparse.Namespace) -> Circuit:
    circuit, expected = entangled_example(args.width)
    state = dense_run(circuit)
    tolerance = DEFAULT_TOLERANCES[ExperimentKind.WITNESS]
    _check(float(np.max(np.abs(state.matrix - to_dense(expected)))), tolerance, "entangled state")
    report = witness_check(state)
    _check(max(abs(report.v1), abs(report.v2 - 1.0)), tolerance, "witness values")
    if not report.entangled_flag:
        raise ToleranceFailure(ERROR_TOLERANCE.format(detail="witness did not flag the entangled state"))
    return circuit


def _gadget_parity_l(args: argparse.Namespace) -> Circuit:
    source = read_circuit(args.file)
    compiled = parity_l_compile(source)
    tolerance = DEFAULT_TOLERANCES[ExperimentKind.PARITY_L]
    for x in _all_inputs(source.input_len):
        expected = -1.0 if parity_bit(source, x) else 1.0
        _check(abs(run_beta(compiled, x) - expected), tolerance, f"parity-l on '{x}'")
    return compiled


def _gadget_mixing(args: argparse.Namespace) -> Circuit:
    u = read_circuit(args.file)
    circuit = markov_mixing_circuit(u, args.s)
    tolerance = DEFAULT_TOLERANCES[ExperimentKind.MIXING]
    for x in _all_inputs(u.input_len):
        target = sum(beta21_terms(u, x)) / 3.0
        gap = abs(run_beta(circuit, x, EngineKind.DENSE) - target)
        _check(max(0.0, gap - mixing_bound(args.s)), tolerance, f"mixing bound on '{x}'")
    return circuit


_GADGETS = {
    "and": _gadget_boolean,
    "xor": _gadget_boolean,
    "not": _gadget_boolean,
    "entangle": _gadget_entangle,
    "parity-l": _gadget_parity_l,
    "mixing": _gadget_mixing,
}


def cmd_gadget(args: argparse.Namespace) -> int:
    if args.gadget in ("parity-l", "mixing") and args.file is None:
        raise UsageError(f"gadget {args.gadget} needs a circuit file")
    if args.gadget == "mixing" and args.s is None:
        raise UsageError("gadget mixing needs --s")
    if args.width is None:
        args.width = 2 if args.gadget == "entangle" else 1
    circuit = _GADGETS[args.gadget](args)
    print(print_circuit(circuit), end="")
    return EXIT_OK


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    data = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as f:
                data = json.load(f)
        except OSError as e:
            raise InputFileError(args.config, e.strerror or str(e)) from None
        except json.JSONDecodeError as e:
            raise InputFileError(args.config, f"invalid JSON: {e}") from None
    data["kind"] = args.kind
    if args.seed is not None:
        data["seed"] = args.seed
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise InputFileError(args.config or "<defaults>", f"invalid experiment config: {e.errors()[0]['msg']}") from None


def cmd_experiment(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    report = run_experiment(cfg)
    if args.out:
        path = write_report(report, args.out, args.format)
        logger.info(STATUS_REPORT_WRITTEN.format(path=path))
    elif args.format == "json":
        print(report_to_json(report), end="")
    else:
        raise UsageError("csv output needs --out")
    summary = report.summary
    print(
        f"{cfg.kind.value}: {summary.passed}/{summary.total} passed, max deviation {summary.max_dev:.3g}",
        file=sys.stderr,
    )
    if not report.all_passed:
        raise ToleranceFailure(ERROR_TOLERANCE.format(detail=f"{summary.total - summary.passed} case(s) failed"))
    return EXIT_OK


def cmd_random(args: argparse.Namespace) -> int:
    seed = _seed(args.seed)
    try:
        circuit = random_circuit(args.width, args.inputs, args.depth, args.alphabet, seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    print(print_circuit(circuit), end="")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="dqc1", description="One-clean-qubit simulator and experiment workbench")
    parser.add_argument("--dense-cap", type=int, help="Largest width for dense simulation (overrides DQC1_DENSE_CAP)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO logs, -vv for DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    engines = [e.value for e in EngineKind]

    p = commands.add_parser("validate", help="Parse a circuit and print its canonical form")
    p.add_argument("file", help="Circuit file, or - for stdin")
    p.set_defaults(handler=cmd_validate)

    p = commands.add_parser("run", help="Print beta and P(0) for one input")
    p.add_argument("file")
    p.add_argument("--input", help="Classical input bit-string")
    p.add_argument("--engine", choices=engines, default=EngineKind.AUTO.value)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_run)

    p = commands.add_parser("sample", help="Measure qubit 1 repeatedly")
    p.add_argument("file")
    p.add_argument("--input")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--partitions", type=int, default=1)
    p.add_argument("--engine", choices=engines, default=EngineKind.AUTO.value)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_sample)

    p = commands.add_parser("trace-est", help="Estimate Re Tr[U]/2^w with the Hadamard test")
    p.add_argument("file")
    p.add_argument("--input")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--confidence", type=float)
    p.add_argument("--partitions", type=int, default=1)
    p.add_argument("--imag", action="store_true", help="Also estimate the imaginary part")
    p.add_argument("--q", type=float, help="Decide with threshold 1/q")
    p.add_argument("--p", type=float, help="Promise bound: |beta| >= 1/p")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_trace_est)

    p = commands.add_parser("decide", help="Apply the accept/reject rule to an estimate")
    p.add_argument("beta_hat", type=float)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_decide)

    p = commands.add_parser("gadget", help="Emit and verify a gadget circuit")
    p.add_argument("gadget", choices=sorted(_GADGETS))
    p.add_argument("file", nargs="?", help="CNOT circuit (parity-l) or circuit u (mixing)")
    p.add_argument("--width", type=int)
    p.add_argument("--s", type=int, help="Mixing steps (mixing)")
    p.set_defaults(handler=cmd_gadget)

    p = commands.add_parser("experiment", help="Run an experiment suite")
    p.add_argument("kind", choices=[k.value for k in ExperimentKind])
    p.add_argument("--config", help="JSON file with sizes, seed and tolerance")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="Report path (default: JSON on stdout)")
    p.add_argument("--format", choices=REPORT_FORMATS, default="json")
    p.set_defaults(handler=cmd_experiment)

    p = commands.add_parser("random", help="Emit a seeded random circuit")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--inputs", type=int, default=0)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--alphabet", choices=[a.value for a in Alphabet], default=Alphabet.CLIFFORD.value)
    p.add_argument("--seed", type=int)
    p.set_defaults(handler=cmd_random)

    return parser


def _dispatch(args: argparse.Namespace) -> int:
    try:
        return args.handler(args)
    except UsageError as e:
        print(ERROR_USAGE.format(detail=e), file=sys.stderr)
        return EXIT_USAGE
    except InputLengthError as e:
        print(ERROR_USAGE.format(detail=e), file=sys.stderr)
        return EXIT_USAGE
    except (InputFileError, ReportIOError) as e:
        print(str(e), file=sys.stderr)
        return EXIT_INPUT
    except ToleranceFailure as e:
        print(str(e), file=sys.stderr)
        return EXIT_TOLERANCE
    except (StateInvariantError, BetaRangeError) as e:
        print(ERROR_TOLERANCE.format(detail=e), file=sys.stderr)
        return EXIT_TOLERANCE
    except Dqc1Error as e:
        print(ERROR_INPUT_FILE.format(path=getattr(args, "file", None) or args.command, detail=e), file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(ERROR_USAGE.format(detail=e), file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the dqc1 command."""
    args = build_parser().parse_args(argv)

    overrides = {"dense_cap": args.dense_cap} if args.dense_cap is not None else {}
    try:
        with override_settings(**overrides) as settings:
            level = level_for_verbosity(args.verbose, os.getenv("LOG_LEVEL", settings.log_level))
            setup_logging(level=level)
            logger.debug(f"Running '{args.command}' with dense cap {settings.dense_cap}")
            return _dispatch(args)
    except ValidationError as e:
        print(ERROR_USAGE.format(detail=f"invalid settings: {e.errors()[0]['msg']}"), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
