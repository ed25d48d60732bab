"""Seeded experiment suites over random circuit corpora.

Each experiment kind maps to a case function that draws its corpus entry from
a per-case random stream and compares a measured value against an oracle.
Case i always uses SeedSequence(entropy=seed, spawn_key=(i,)), so growing the
corpus never changes earlier cases.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Tuple

import numpy as np

from src.config.logging_config import get_logger
from src.config.settings import get_settings
from src.core.circuit_parser import Alphabet, random_circuit
from src.core.circuit_transforms import square_for_trace
from src.core.engines import (
    EngineKind,
    beta21_terms,
    beta_cd,
    beta_of,
    dense_run,
    pauli_run,
    run_beta,
    sample_beta,
)
from src.core.gadgets import (
    and_gadget,
    derived_input,
    entangled_example,
    markov_mixing_circuit,
    mixing_bound,
    mixing_distribution,
    not_gadget,
    parity_bit,
    parity_l_compile,
    reduction_compose,
    scaled_trace,
    trace_estimation_circuit,
    witness_check,
    xor_gadget,
)
from src.core.oracle_experiments import (
    corner_pair_experiment,
    fourier_permutation_experiment,
    random_corner_unitary,
    random_permutation,
)
from src.core.pauli_algebra import to_dense
from src.core.statistics import hoeffding_half_width
from src.models.errors import ExperimentConfigError
from src.models.experiment import (
    CaseRecord,
    ExperimentConfig,
    ExperimentKind,
    ExperimentReport,
    ExperimentSummary,
)

logger = get_logger(__name__)

CaseFunction = Callable[[int, np.random.Generator, ExperimentConfig], CaseRecord]

REDUCTION_MAX_DERIVED_BITS = 2


def case_rng(seed: int, index: int) -> np.random.Generator:
    """Random stream of case ``index``, independent of the corpus size."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _random_bits(rng: np.random.Generator, n: int) -> str:
    return "".join(str(b) for b in rng.integers(0, 2, size=n))


def _width(rng: np.random.Generator, cfg: ExperimentConfig, floor: int = 1) -> int:
    low = max(floor, cfg.sizes.min_width)
    high = max(low, cfg.sizes.max_width)
    return int(rng.integers(low, high + 1))


def _compare(index: int, input_text: str, measured: float, oracle: float,
             cfg: ExperimentConfig, **details) -> CaseRecord:
    deviation = abs(measured - oracle)
    return CaseRecord(
        index=index,
        input=input_text,
        measured=measured,
        oracle=oracle,
        passed=deviation <= cfg.effective_tolerance,
        deviation=deviation,
        details=details,
    )


# ---------------------------------------------------------------------------
# Case functions
# ---------------------------------------------------------------------------

def _cross_engine_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    w = _width(rng, cfg)
    c = random_circuit(w, cfg.sizes.input_len, cfg.sizes.depth, Alphabet.CLIFFORD, rng)
    x = _random_bits(rng, c.input_len)
    pauli_beta = beta_of(pauli_run(c, x))
    dense_beta = beta_of(dense_run(c, x))
    return _compare(index, f"w={w} x={x}", pauli_beta, dense_beta, cfg)


def _trace_est_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    w = _width(rng, cfg)
    u = random_circuit(w, cfg.sizes.input_len, cfg.sizes.depth, Alphabet.CLIFFORD_T, rng)
    x = _random_bits(rng, u.input_len)
    gadget_beta = run_beta(trace_estimation_circuit(u), x, EngineKind.DENSE)
    exact = scaled_trace(u, x).real

    details = {}
    if cfg.sizes.trials:
        confidence = get_settings().default_confidence
        half_width = hoeffding_half_width(cfg.sizes.shots, confidence)
        streams = np.random.SeedSequence(entropy=cfg.seed, spawn_key=(index,)).spawn(cfg.sizes.trials)
        covered = sum(
            abs(sample_beta(gadget_beta, cfg.sizes.shots, stream).beta_hat - exact) <= half_width
            for stream in streams
        )
        details = {"trials": cfg.sizes.trials, "covered": int(covered), "half_width": half_width}
    return _compare(index, f"w={w} x={x}", gadget_beta, exact, cfg, **details)


def _parity_l_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    w = _width(rng, cfg, floor=2)
    c = random_circuit(w, cfg.sizes.input_len, cfg.sizes.depth, Alphabet.CNOT_ONLY, rng)
    x = _random_bits(rng, c.input_len)
    measured = run_beta(parity_l_compile(c), x)
    oracle = -1.0 if parity_bit(c, x) else 1.0
    return _compare(index, f"w={w} x={x}", measured, oracle, cfg)


def _mixing_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    s_values = cfg.sizes.s_values
    s = s_values[index % len(s_values)]
    w = _width(rng, cfg, floor=2)
    u = random_circuit(w, cfg.sizes.input_len, cfg.sizes.depth, Alphabet.CLIFFORD, rng)
    x = _random_bits(rng, u.input_len)

    measured = run_beta(markov_mixing_circuit(u, s), x, EngineKind.DENSE)
    terms = beta21_terms(u, x)
    beta21 = sum(terms)
    weighted = sum(p * t for p, t in zip(mixing_distribution(s), terms))
    term_gap = abs(beta21 - beta_cd(u, x, 2, 1))
    tolerance = cfg.effective_tolerance

    deviation = abs(measured - beta21 / 3.0)
    passed = (
        deviation <= mixing_bound(s) + tolerance
        and abs(measured - weighted) <= tolerance
        and term_gap <= tolerance
    )
    return CaseRecord(
        index=index,
        input=f"w={w} s={s} x={x}",
        measured=measured,
        oracle=beta21 / 3.0,
        passed=passed,
        deviation=deviation,
        details={"bound": mixing_bound(s), "weighted": weighted, "term_gap": term_gap},
    )


def _corner_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    w = _width(rng, cfg)
    t = int(rng.integers(0, cfg.sizes.max_t + 1))
    word = [random_circuit(w, 0, cfg.sizes.depth, Alphabet.CLIFFORD_T, rng) for _ in range(t)]
    u = random_corner_unitary(w, rng)
    report = corner_pair_experiment(word, u, width=w)
    excess = max(0.0, report.diff - report.bound)
    return CaseRecord(
        index=index,
        input=f"w={w} t={t}",
        measured=report.diff,
        oracle=report.bound,
        passed=excess <= cfg.effective_tolerance,
        deviation=excess,
    )


def _fourier_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    w = _width(rng, cfg)
    pi = random_permutation(w, rng)
    report = fourier_permutation_experiment(pi, w)
    return _compare(index, f"w={w} pi={' '.join(str(p) for p in pi)}", report.lhs, report.rhs, cfg)


def _witness_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    w = _width(rng, cfg, floor=2)
    circuit, expected = entangled_example(w)
    state = dense_run(circuit)
    report = witness_check(state)
    state_gap = float(np.max(np.abs(state.matrix - to_dense(expected))))
    deviation = max(state_gap, abs(report.v1), abs(report.v2 - 1.0))
    return CaseRecord(
        index=index,
        input=f"w={w}",
        measured=report.v2.real,
        oracle=1.0,
        passed=deviation <= cfg.effective_tolerance and report.entangled_flag,
        deviation=deviation,
        details={"v1": abs(report.v1), "state_gap": state_gap},
    )


def _squaring_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    w = _width(rng, cfg)
    y = random_circuit(w, cfg.sizes.input_len, cfg.sizes.depth, Alphabet.CLIFFORD_T, rng)
    x = _random_bits(rng, y.input_len)
    squared = square_for_trace(y)
    measured = scaled_trace(squared, x).real
    via_gadget = run_beta(trace_estimation_circuit(squared), x, EngineKind.DENSE)
    oracle = beta_of(dense_run(y, x))
    record = _compare(index, f"w={w} x={x}", measured, oracle, cfg, via_gadget=via_gadget)
    gadget_gap = abs(via_gadget - oracle)
    if gadget_gap > record.deviation:
        record = record.model_copy(update={
            "deviation": gadget_gap,
            "passed": gadget_gap <= cfg.effective_tolerance,
        })
    return record


def _reduction_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    n_raw = cfg.sizes.input_len
    n_derived = int(rng.integers(1, REDUCTION_MAX_DERIVED_BITS + 1))
    r_width = _width(rng, cfg, floor=2)
    r_circuits = [
        random_circuit(r_width, n_raw, cfg.sizes.depth, Alphabet.CNOT_ONLY, rng)
        for _ in range(n_derived)
    ]
    main_width = _width(rng, cfg)
    main = random_circuit(main_width, n_derived, cfg.sizes.depth, Alphabet.CLIFFORD_T, rng)
    x = _random_bits(rng, n_raw)

    composed = reduction_compose(r_circuits, main, raw_input_len=n_raw)
    derived = derived_input(r_circuits, x)
    measured = beta_cd(composed, x, 2, 1)
    oracle = beta_of(dense_run(main, derived))
    return _compare(index, f"w={composed.width} x={x} r={derived}", measured, oracle, cfg)


_BOOLEAN_GADGETS = {
    "and": (and_gadget, lambda bits: bits[0] & bits[1]),
    "xor": (xor_gadget, lambda bits: bits[0] ^ bits[1]),
    "not": (not_gadget, lambda bits: 1 - bits[0]),
}


def _boolean_table(cfg: ExperimentConfig) -> List[Tuple[str, int, str]]:
    """Every (gadget, width, input) combination, in a fixed order."""
    table = []
    for name, (builder, _) in _BOOLEAN_GADGETS.items():
        for w in range(cfg.sizes.min_width, cfg.sizes.max_width + 1):
            n = builder(w).input_len
            table.extend((name, w, format(v, f"0{n}b")) for v in range(1 << n))
    return table


def _boolean_case(index: int, rng: np.random.Generator, cfg: ExperimentConfig) -> CaseRecord:
    name, w, x = _boolean_table(cfg)[index]
    builder, truth = _BOOLEAN_GADGETS[name]
    measured = run_beta(builder(w), x, EngineKind.DENSE)
    oracle = -1.0 if truth([int(b) for b in x]) else 1.0
    return _compare(index, f"{name} w={w} x={x}", measured, oracle, cfg)


_CASES: Dict[ExperimentKind, CaseFunction] = {
    ExperimentKind.CROSS_ENGINE: _cross_engine_case,
    ExperimentKind.TRACE_EST: _trace_est_case,
    ExperimentKind.PARITY_L: _parity_l_case,
    ExperimentKind.MIXING: _mixing_case,
    ExperimentKind.CORNER: _corner_case,
    ExperimentKind.FOURIER: _fourier_case,
    ExperimentKind.WITNESS: _witness_case,
    ExperimentKind.SQUARING: _squaring_case,
    ExperimentKind.REDUCTION: _reduction_case,
    ExperimentKind.BOOLEAN: _boolean_case,
}


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

def _largest_dense_width(cfg: ExperimentConfig) -> int:
    """Widest register the kind simulates densely for the configured sizes."""
    sizes = cfg.sizes
    w = sizes.max_width
    if cfg.kind == ExperimentKind.TRACE_EST:
        return w + 1
    if cfg.kind == ExperimentKind.SQUARING:
        return w + 1
    if cfg.kind == ExperimentKind.MIXING:
        return max(w, 2) + 2 * max(sizes.s_values)
    if cfg.kind == ExperimentKind.REDUCTION:
        return 2 * max(w, 2)
    return max(w, 2) if cfg.kind in (ExperimentKind.WITNESS, ExperimentKind.PARITY_L) else w


def check_config(cfg: ExperimentConfig) -> None:
    """Reject configurations whose corpus cannot run within the engine caps.

    Raises:
        ExperimentConfigError: On a width beyond the dense or brute-force cap
    """
    settings = get_settings()
    needed = _largest_dense_width(cfg)
    if needed > settings.dense_cap:
        raise ExperimentConfigError(
            f"{cfg.kind.value} needs width {needed}, over the dense cap {settings.dense_cap}"
        )
    if cfg.kind == ExperimentKind.FOURIER and cfg.sizes.max_width > settings.fourier_brute_cap:
        raise ExperimentConfigError(
            f"fourier width {cfg.sizes.max_width} exceeds the brute-force cap {settings.fourier_brute_cap}"
        )


def case_count(cfg: ExperimentConfig) -> int:
    if cfg.kind == ExperimentKind.BOOLEAN:
        return len(_boolean_table(cfg))
    return cfg.sizes.cases


def run_case(cfg: ExperimentConfig, index: int) -> CaseRecord:
    """Run one corpus entry; any exception becomes a failed record."""
    try:
        return _CASES[cfg.kind](index, case_rng(cfg.seed, index), cfg)
    except Exception as e:
        logger.warning(f"{cfg.kind.value} case {index} failed: {type(e).__name__}: {e}")
        return CaseRecord(index=index, passed=False, error=f"{type(e).__name__}: {e}")


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run every case of an experiment and summarise.

    Args:
        cfg: Experiment configuration

    Returns:
        ExperimentReport with cases sorted by index

    Raises:
        ExperimentConfigError: If the configuration exceeds the engine caps
    """
    check_config(cfg)
    count = case_count(cfg)
    workers = get_settings().experiment_workers
    logger.info(f"Running {cfg.kind.value}: {count} case(s), seed {cfg.seed}, {workers} worker(s)")

    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        cases = list(pool.map(lambda i: run_case(cfg, i), range(count)))
    wall_ms = (time.perf_counter() - started) * 1000.0

    cases.sort(key=lambda record: record.index)
    deviations = [record.deviation for record in cases if record.deviation is not None]
    summary = ExperimentSummary(
        total=len(cases),
        passed=sum(record.passed for record in cases),
        max_dev=max(deviations, default=0.0),
        wall_ms=wall_ms,
    )
    logger.info(f"{cfg.kind.value}: {summary.passed}/{summary.total} passed, max deviation {summary.max_dev:.3g}")
    return ExperimentReport(config=cfg, cases=cases, summary=summary)
