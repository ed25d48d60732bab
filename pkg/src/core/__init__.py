"""Core business logic modules."""

from src.core.circuit_parser import Alphabet, normalize, parse, print_circuit, random_circuit
from src.core.engines import (
    EngineKind,
    beta_cd,
    beta_of,
    decide,
    decompose,
    dense_run,
    pauli_run,
    run_beta,
    sample,
)
from src.core.gadgets import (
    and_gadget,
    entangled_example,
    estimate_trace,
    markov_mixing_circuit,
    not_gadget,
    parity_l_compile,
    reduction_compose,
    trace_estimation_circuit,
    witness_check,
    xor_gadget,
)
from src.core.oracle_experiments import corner_pair_experiment, fourier_permutation_experiment
from src.core.experiment_runner import run_experiment
from src.core.report_io import load_report, write_report
from src.core.statistics import shots_required

__all__ = [
    "Alphabet",
    "normalize",
    "parse",
    "print_circuit",
    "random_circuit",
    "EngineKind",
    "beta_cd",
    "beta_of",
    "decide",
    "decompose",
    "dense_run",
    "pauli_run",
    "run_beta",
    "sample",
    "and_gadget",
    "entangled_example",
    "estimate_trace",
    "markov_mixing_circuit",
    "not_gadget",
    "parity_l_compile",
    "reduction_compose",
    "trace_estimation_circuit",
    "witness_check",
    "xor_gadget",
    "corner_pair_experiment",
    "fourier_permutation_experiment",
    "run_experiment",
    "load_report",
    "write_report",
    "shots_required",
]
