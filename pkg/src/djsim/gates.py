"""Unitary matrices for the supported gate set.

Single-qubit gates are 2x2 and act in the ``(|0>, |1>)`` basis.  The stored
CNOT is 4x4 in textbook ``|control, target>`` order, i.e. row/column index
``2 * control + target``; the simulator never multiplies by it directly
(see :func:`djsim.state.apply_controlled`).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import GateError, UnitarityError

UNITARY_TOL = 1e-12

_SQRT1_2 = 1.0 / np.sqrt(2.0)

_FIXED = {
    "I": [[1, 0], [0, 1]],
    "X": [[0, 1], [1, 0]],
    "Y": [[0, -1j], [1j, 0]],
    "Z": [[1, 0], [0, -1]],
    "H": [[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]],
    "S": [[1, 0], [0, 1j]],
    "Sdg": [[1, 0], [0, -1j]],
    "CNOT": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
}
_PARAMETRIC = ("Ry", "Rz")

GATE_NAMES = tuple(_FIXED) + _PARAMETRIC


@dataclass(frozen=True)
class GateMatrix:
    name: str
    matrix: np.ndarray = field(repr=False)
    param: float | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4, 8, 16):
            raise GateError(f"gate {self.name!r} has bad shape {m.shape}")
        check_unitary(m, name=f"gate {self.name!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Row-major flat view of the matrix."""
        return self.matrix.reshape(-1)

    def __eq__(self, other):
        if not isinstance(other, GateMatrix):
            return NotImplemented
        return (self.name == other.name and self.param == other.param
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.name, self.param, self.matrix.tobytes()))


def unitarity_defect(m: np.ndarray) -> float:
    """Largest entry of ``|U^dagger U - I|``."""
    m = np.asarray(m)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def check_unitary(m: np.ndarray, tol: float = UNITARY_TOL, name: str = "gate") -> None:
    defect = unitarity_defect(m)
    if not defect <= tol:
        raise UnitarityError(f"{name} is not unitary (max |U^dag U - I| = {defect:.3g})")


@functools.lru_cache(maxsize=None)
def _fixed(name: str) -> GateMatrix:
    return GateMatrix(name, np.array(_FIXED[name], dtype=np.complex128))


def gate(name: str, param: float | None = None) -> GateMatrix:
    """Return the matrix for gate ``name``.

    ``Ry`` and ``Rz`` require an angle in radians; every other gate rejects one.

    >>> gate("H").matrix.round(4).real.tolist()
    [[0.7071, 0.7071], [0.7071, -0.7071]]
    """
    if name in _FIXED:
        if param is not None:
            raise GateError(f"gate {name} takes no parameter")
        return _fixed(name)
    if name not in _PARAMETRIC:
        raise GateError(f"unknown gate {name!r}; expected one of {', '.join(GATE_NAMES)}")
    if param is None:
        raise GateError(f"gate {name} needs an angle")
    theta = float(param)
    if not np.isfinite(theta):
        raise GateError(f"gate {name} angle must be finite, got {param!r}")
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if name == "Ry":
        m = [[c, -s], [s, c]]
    else:
        m = [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]]
    return GateMatrix(name, np.array(m, dtype=np.complex128), theta)


def tensor(a: GateMatrix, b: GateMatrix) -> GateMatrix:
    """Kronecker product ``a (x) b``.

    ``a`` acts on the more significant factor, as in ``np.kron``.
    """
    return GateMatrix(f"{a.name}⊗{b.name}", np.kron(a.matrix, b.matrix))
