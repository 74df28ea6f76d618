"""Statevector simulation of the Deutsch and Deutsch-Jozsa algorithms."""

__version__ = "0.1.0"

from .algorithms import (
    ClassicalResult,
    DJResult,
    classical_baseline,
    deutsch,
    deutsch_jozsa,
    final_amplitudes_closed_form,
)
from .circuit import Circuit, run
from .errors import DJSimError, PromiseViolation
from .gates import GateMatrix, gate, tensor
from .noise import NoiseModel, sample_with_noise
from .oracle import (
    FunctionClass,
    OracleCircuit,
    TruthTable,
    classify,
    parse_truth_table,
    synthesize_gates,
    synthesize_permutation,
)
from .qasm import QasmError, QasmProgram, execute, parse
from .state import (
    ShotHistogram,
    StateVector,
    apply_controlled,
    apply_permutation,
    apply_single,
    init_zero_state,
    probabilities,
    sample_shots,
)
