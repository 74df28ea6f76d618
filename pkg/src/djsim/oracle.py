"""Boolean-function oracles.

A function ``f: {0,1}^n -> {0,1}`` is stored as its truth table, indexed by
the integer ``x = sum_i x_i 2**i``.  Its oracle ``U_f |x>|y> = |x>|y ^ f(x)>``
lives on ``n + 1`` qubits with the ancilla ``y`` at qubit ``n``, so basis
index ``x + 2**n * y``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .circuit import mcx_permutation
from .errors import TruthTableError


class FunctionClass(enum.Enum):
    CONSTANT = "Constant"
    BALANCED = "Balanced"
    NEITHER = "Neither"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TruthTable:
    n: int
    outputs: tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise TruthTableError(f"n must be a positive integer, got {self.n!r}")
        outs = tuple(int(b) for b in self.outputs)
        if len(outs) != 1 << self.n:
            raise TruthTableError(f"n={self.n} needs {1 << self.n} outputs, got {len(outs)}")
        if any(b not in (0, 1) for b in outs):
            raise TruthTableError("outputs must be bits")
        object.__setattr__(self, "outputs", outs)

    @classmethod
    def from_outputs(cls, outputs) -> "TruthTable":
        outs = [int(b) for b in outputs]
        n = len(outs).bit_length() - 1
        if n < 1 or len(outs) != 1 << n:
            raise TruthTableError(f"output count {len(outs)} is not a power of two >= 2")
        return cls(n, tuple(outs))

    @classmethod
    def from_function(cls, n: int, f) -> "TruthTable":
        return cls(n, tuple(int(f(x)) & 1 for x in range(1 << n)))

    def __call__(self, x: int) -> int:
        return self.outputs[x]

    def as_array(self) -> np.ndarray:
        return np.array(self.outputs, dtype=np.int64)


class OracleGate(NamedTuple):
    """X on ``target`` controlled on every qubit in ``controls``."""

    controls: tuple[int, ...]
    target: int

    @property
    def name(self) -> str:
        return {0: "x", 1: "cx"}.get(len(self.controls), "mcx")

    def to_qasm(self) -> str:
        operands = ", ".join(f"q[{q}]" for q in (*self.controls, self.target))
        return f"{self.name} {operands};"


@dataclass(frozen=True)
class OracleCircuit:
    n: int
    permutation: np.ndarray = field(repr=False)
    gate_list: tuple[OracleGate, ...] | None = None

    @property
    def num_qubits(self) -> int:
        return self.n + 1

    @property
    def ancilla(self) -> int:
        return self.n


def classify(t: TruthTable) -> FunctionClass:
    ones = sum(t.outputs)
    if ones in (0, len(t.outputs)):
        return FunctionClass.CONSTANT
    if 2 * ones == len(t.outputs):
        return FunctionClass.BALANCED
    return FunctionClass.NEITHER


def synthesize_permutation(t: TruthTable) -> OracleCircuit:
    n = t.n
    k = np.arange(1 << (n + 1), dtype=np.int64)
    x = k & ((1 << n) - 1)
    perm = k ^ (t.as_array()[x] << n)
    perm.setflags(write=False)
    return OracleCircuit(n, perm)


def anf_coefficients(t: TruthTable) -> np.ndarray:
    """Algebraic normal form: ``f(x) = XOR_S a[S] AND_{i in S} x_i``.

    ``a[S]`` is indexed by the bitmask of ``S``.
    """
    a = t.as_array().copy()
    step = 1
    while step < a.size:
        v = a.reshape(-1, 2, step)
        v[:, 1, :] ^= v[:, 0, :]
        step <<= 1
    return a


def synthesize_gates(t: TruthTable) -> OracleCircuit:
    """Oracle as a list of (multi-)controlled X gates onto the ancilla.

    Uses the positive-polarity Reed-Muller expansion, so no X-conjugation
    of controls is needed; each monomial becomes one gate.
    """
    n = t.n
    coeffs = anf_coefficients(t)
    gates = []
    for mask in sorted(np.flatnonzero(coeffs), key=lambda m: (bin(m).count("1"), m)):
        gates.append(OracleGate(tuple(i for i in range(n) if mask >> i & 1), n))
    perm = compose_gates(n + 1, gates)
    perm.setflags(write=False)
    return OracleCircuit(n, perm, tuple(gates))


def compose_gates(num_qubits: int, gates) -> np.ndarray:
    """Basis permutation of applying ``gates`` left to right."""
    perm = np.arange(1 << num_qubits, dtype=np.int64)
    for g in gates:
        perm = mcx_permutation(num_qubits, g.controls, g.target)[perm]
    return perm


_HEADER = re.compile(r"n\s*=\s*(\d+)")


def parse_truth_table(text: str) -> TruthTable:
    """Parse the ``n=<int>`` / ``<bits> <bit>`` text format.

    Inputs are written most significant bit first and must be listed in
    ascending order.  ``#`` starts a comment line; blank lines are skipped.
    """
    n = None
    outputs: list[int] = []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last = lineno
        if n is None:
            m = _HEADER.fullmatch(line)
            if not m:
                raise TruthTableError(f"expected header 'n=<int>', got {line!r}", lineno)
            n = int(m.group(1))
            if n < 1:
                raise TruthTableError("n must be >= 1", lineno)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TruthTableError(f"expected '<input> <bit>', got {line!r}", lineno)
        bits, out = parts
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise TruthTableError(f"input {bits!r} is not a {n}-bit binary string", lineno)
        if out not in ("0", "1"):
            raise TruthTableError(f"output {out!r} is not a bit", lineno)
        x = int(bits, 2)
        if x < len(outputs):
            raise TruthTableError(f"duplicate or out-of-order input {bits}", lineno)
        if x > len(outputs):
            missing = format(len(outputs), f"0{n}b")
            raise TruthTableError(f"missing input {missing} before {bits}", lineno)
        outputs.append(int(out))
    if n is None:
        raise TruthTableError("empty truth table", last or 1)
    if len(outputs) != 1 << n:
        raise TruthTableError(f"n={n} needs {1 << n} entries, got {len(outputs)}", last)
    return TruthTable(n, tuple(outputs))


def format_truth_table(t: TruthTable) -> str:
    lines = [f"n={t.n}"]
    lines += [f"{x:0{t.n}b} {b}" for x, b in enumerate(t.outputs)]
    return "\n".join(lines) + "\n"
