"""Ordered gate lists with terminal measurements."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import AliasingError, GateError, QubitRangeError, UnsupportedFeature
from .gates import gate as make_gate
from .state import (
    StateVector,
    apply_controlled,
    apply_permutation,
    apply_single,
    check_permutation,
    init_zero_state,
)

SINGLE = frozenset({"I", "X", "Y", "Z", "H", "S", "Sdg", "Ry", "Rz"})


@dataclass(frozen=True)
class Instruction:
    """One step of a circuit.

    ``name`` is a single-qubit gate name, ``"CNOT"`` (qubits = control,
    target), ``"MCX"`` (qubits = controls..., target) or ``"ORACLE"``
    (a full-register basis permutation; ``qubits`` lists every qubit it
    touches).  Only ``ORACLE`` steps count as oracle queries.
    """

    name: str
    qubits: tuple[int, ...]
    param: float | None = None
    perm: np.ndarray | None = field(default=None, repr=False, compare=False)


def mcx_permutation(num_qubits: int, controls, target: int) -> np.ndarray:
    """Basis map of X on ``target`` controlled on all of ``controls`` being 1."""
    k = np.arange(1 << num_qubits, dtype=np.int64)
    cmask = 0
    for c in controls:
        cmask |= 1 << c
    fire = (k & cmask) == cmask
    return np.where(fire, k ^ (1 << target), k)


class Circuit:
    def __init__(self, num_qubits: int, num_clbits: int = 0):
        self.num_qubits = num_qubits
        self.num_clbits = num_clbits
        self.instructions: list[Instruction] = []
        self.measurements: list[tuple[int, int]] = []

    def _check(self, qubits):
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise QubitRangeError(f"qubit {q} out of range for {self.num_qubits} qubits")
        if len(set(qubits)) != len(qubits):
            raise AliasingError(f"repeated qubit operand in {qubits}")
        measured = {q for q, _ in self.measurements}
        if measured.intersection(qubits):
            raise UnsupportedFeature("gate after measurement is not supported")

    def append(self, name: str, *qubits: int, param: float | None = None) -> "Circuit":
        if name in SINGLE:
            if len(qubits) != 1:
                raise GateError(f"{name} takes one qubit")
            make_gate(name, param)
        elif name == "CNOT":
            if len(qubits) != 2:
                raise GateError("CNOT takes control and target")
        elif name == "MCX":
            if len(qubits) < 1:
                raise GateError("MCX needs a target")
        else:
            raise GateError(f"unknown instruction {name!r}")
        self._check(qubits)
        self.instructions.append(Instruction(name, tuple(int(q) for q in qubits), param))
        return self

    def h(self, q):
        return self.append("H", q)

    def x(self, q):
        return self.append("X", q)

    def cx(self, control, target):
        return self.append("CNOT", control, target)

    def oracle(self, perm, label: str = "U_f") -> "Circuit":
        p = check_permutation(perm, 1 << self.num_qubits)
        qubits = tuple(range(self.num_qubits))
        self._check(qubits)
        self.instructions.append(Instruction("ORACLE", qubits, perm=p))
        return self

    def measure(self, qubit: int, clbit: int) -> "Circuit":
        if not 0 <= qubit < self.num_qubits:
            raise QubitRangeError(f"qubit {qubit} out of range")
        if not 0 <= clbit < self.num_clbits:
            raise QubitRangeError(f"classical bit {clbit} out of range")
        self.measurements.append((qubit, clbit))
        return self

    @property
    def oracle_queries(self) -> int:
        return sum(1 for ins in self.instructions if ins.name == "ORACLE")

    def measured_qubits(self) -> list[int] | None:
        """Qubit feeding each classical bit, or None if a bit holds no qubit.

        Later measurements into the same classical bit win.
        """
        feed: dict[int, int] = {}
        for q, c in self.measurements:
            feed[c] = q
        if sorted(feed) != list(range(self.num_clbits)):
            return None
        return [feed[c] for c in range(self.num_clbits)]

    def __len__(self):
        return len(self.instructions)


def apply_instruction(state: StateVector, ins: Instruction) -> None:
    if ins.name in SINGLE:
        apply_single(state, make_gate(ins.name, ins.param), ins.qubits[0])
    elif ins.name == "CNOT":
        apply_controlled(state, make_gate("X"), ins.qubits[0], ins.qubits[1])
    elif ins.name == "MCX":
        *controls, target = ins.qubits
        apply_permutation(state, mcx_permutation(state.num_qubits, controls, target))
    elif ins.name == "ORACLE":
        apply_permutation(state, ins.perm)
    else:
        raise GateError(f"unknown instruction {ins.name!r}")


def run(circuit: Circuit, state: StateVector | None = None,
        after: Callable[[int, Instruction, StateVector], None] | None = None) -> StateVector:
    """Execute every instruction in order and return the final state.

    ``after(i, instruction, state)`` is called after each step; the noise
    module hooks in here.
    """
    state = init_zero_state(circuit.num_qubits) if state is None else state
    if state.num_qubits != circuit.num_qubits:
        raise QubitRangeError("state and circuit sizes differ")
    for i, ins in enumerate(circuit.instructions):
        apply_instruction(state, ins)
        if after is not None:
            after(i, ins, state)
    return state
