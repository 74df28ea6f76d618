"""Parser and executor for a small OpenQASM 2.0 subset.

Supported: the ``OPENQASM 2.0;`` header, an optional ``include`` line
(ignored), ``qreg``/``creg`` declarations, the gates id, x, y, z, h, s, sdg,
ry, rz and cx, ``measure`` and ``barrier``.  Register operands broadcast the
way OpenQASM does (``h q;`` applies to every qubit of ``q``).  Angles accept
numbers and ``pi`` combined with ``*``, ``/`` and unary minus.

Measurements must be terminal: once a qubit is measured no gate may touch it.
Qubits of all ``qreg`` declarations are numbered in declaration order, and so
are classical bits; histogram keys print the highest classical bit first.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

from .circuit import Circuit, run
from .errors import DJSimError, UnsupportedFeature
from .noise import NoiseModel, sample_with_noise
from .state import ShotHistogram, StateVector, check_shots, max_qubits, sample_shots

GATES = {
    # name: (circuit instruction, qubit operands, angle params)
    "id": ("I", 1, 0),
    "x": ("X", 1, 0),
    "y": ("Y", 1, 0),
    "z": ("Z", 1, 0),
    "h": ("H", 1, 0),
    "s": ("S", 1, 0),
    "sdg": ("Sdg", 1, 0),
    "ry": ("Ry", 1, 1),
    "rz": ("Rz", 1, 1),
    "cx": ("CNOT", 2, 0),
}

_KEYWORDS = {"OPENQASM", "include", "qreg", "creg", "measure", "barrier"}
_UNSUPPORTED = {"gate", "opaque", "if", "reset", "U", "CX"}


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.col}: {self.message}"


class QasmError(DJSimError):
    """One or more located problems in a QASM source."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Operand:
    reg: str
    index: int | None = None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def __str__(self):
        return self.reg if self.index is None else f"{self.reg}[{self.index}]"


@dataclass(frozen=True)
class GateStmt:
    name: str
    params: tuple[float, ...]
    operands: tuple[Operand, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MeasureStmt:
    source: Operand
    dest: Operand
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BarrierStmt:
    operands: tuple[Operand, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


Statement = Union[GateStmt, MeasureStmt, BarrierStmt]


@dataclass
class QasmProgram:
    version: str
    qregs: list[tuple[str, int]]
    cregs: list[tuple[str, int]]
    statements: list[Statement]
    includes: list[str] = field(default_factory=list)

    @property
    def num_qubits(self) -> int:
        return sum(size for _, size in self.qregs)

    @property
    def num_clbits(self) -> int:
        return sum(size for _, size in self.cregs)


# ---------------------------------------------------------------- lexer

@dataclass(frozen=True)
class Token:
    kind: str  # id, int, real, string, sym, eof
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<sym>->|==|[;,\[\]()*/+\-{}])
""", re.VERBOSE)


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise QasmError([Diagnostic(line, col, f"unexpected character {source[pos]!r}")])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------- parser

class _Abort(Exception):
    pass


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.diags: list[Diagnostic] = []
        self.qregs: dict[str, int] = {}
        self.cregs: dict[str, int] = {}
        self.qreg_order: list[tuple[str, int]] = []
        self.creg_order: list[tuple[str, int]] = []
        self.statements: list[Statement] = []
        self.includes: list[str] = []
        self.measured: set[tuple[str, int]] = set()

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, tok: Token, msg: str):
        self.diags.append(Diagnostic(tok.line, tok.col, msg))

    def fail(self, tok: Token, msg: str):
        self.error(tok, msg)
        raise _Abort

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind in ("string", "eof"):
            shown = "end of file" if t.kind == "eof" else repr(t.text)
            self.fail(t, f"expected {text!r}, got {shown}")
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            shown = "end of file" if t.kind == "eof" else repr(t.text)
            self.fail(t, f"expected {what}, got {shown}")
        return self.next()

    def recover(self):
        while self.peek().kind != "eof" and self.peek().text != ";":
            self.next()
        if self.peek().text == ";":
            self.next()

    # grammar
    def program(self) -> QasmProgram:
        try:
            self.expect("OPENQASM")
            ver = self.peek()
            if ver.kind not in ("real", "int"):
                self.fail(ver, "expected version number after OPENQASM")
            self.next()
            if ver.text not in ("2.0", "2"):
                self.error(ver, f"unsupported OpenQASM version {ver.text}; only 2.0")
            self.expect(";")
            if self.peek().text == "include":
                self.next()
                name = self.expect_kind("string", "file name string")
                self.includes.append(name.text.strip('"'))
                self.expect(";")
        except _Abort:
            return None
        while self.peek().kind != "eof":
            start = self.i
            try:
                self.statement()
            except _Abort:
                # errors raised after the closing ';' need no resync
                if not (self.i > start and self.toks[self.i - 1].text == ";"):
                    self.recover()
        return QasmProgram("2.0", self.qreg_order, self.creg_order, self.statements,
                           self.includes)

    def statement(self):
        t = self.peek()
        if t.kind != "id":
            self.fail(t, f"expected a statement, got {t.text!r}")
        if t.text in ("qreg", "creg"):
            return self.declaration()
        if t.text == "measure":
            return self.measure()
        if t.text == "barrier":
            return self.barrier()
        if t.text == "include":
            self.fail(t, "include must directly follow the header")
        if t.text == "OPENQASM":
            self.fail(t, "duplicate OPENQASM header")
        if t.text in _UNSUPPORTED:
            self.fail(t, f"'{t.text}' is not supported in this subset")
        return self.gate()

    def declaration(self):
        kw = self.next()
        name = self.expect_kind("id", "register name")
        self.expect("[")
        size_tok = self.expect_kind("int", "register size")
        self.expect("]")
        self.expect(";")
        size = int(size_tok.text)
        if name.text in _KEYWORDS or name.text in GATES:
            self.fail(name, f"register name {name.text!r} is reserved")
        if name.text in self.qregs or name.text in self.cregs:
            self.fail(name, f"register {name.text!r} already declared")
        if size < 1:
            self.fail(size_tok, "register size must be at least 1")
        if kw.text == "qreg":
            self.qregs[name.text] = size
            self.qreg_order.append((name.text, size))
        else:
            self.cregs[name.text] = size
            self.creg_order.append((name.text, size))

    def operand(self, kind: str) -> Operand:
        regs = self.qregs if kind == "quantum" else self.cregs
        other = self.cregs if kind == "quantum" else self.qregs
        name = self.expect_kind("id", f"{kind} register")
        index = None
        idx_tok = None
        if self.peek().text == "[":
            self.next()
            idx_tok = self.expect_kind("int", "index")
            self.expect("]")
            index = int(idx_tok.text)
        if name.text not in regs:
            what = "is a classical register" if kind == "quantum" else "is a quantum register"
            if name.text in other:
                self.fail(name, f"{name.text!r} {what}")
            self.fail(name, f"undeclared {kind} register {name.text!r}")
        if index is not None and index >= regs[name.text]:
            self.fail(idx_tok, f"index {index} out of range for {name.text}[{regs[name.text]}]")
        return Operand(name.text, index, name.line, name.col)

    def expand(self, op: Operand, kind: str) -> list[tuple[str, int]]:
        size = (self.qregs if kind == "quantum" else self.cregs)[op.reg]
        return [(op.reg, op.index)] if op.index is not None else [(op.reg, i) for i in range(size)]

    def gate(self):
        name = self.next()
        if name.text not in GATES:
            self.fail(name, f"unknown gate {name.text!r}")
        _, arity, nparams = GATES[name.text]
        params: list[float] = []
        if self.peek().text == "(":
            paren = self.next()
            if self.peek().text != ")":
                params.append(self.expr())
                while self.peek().text == ",":
                    self.next()
                    params.append(self.expr())
            self.expect(")")
            if nparams == 0:
                self.fail(paren, f"gate {name.text} takes no parameters")
        if len(params) != nparams:
            self.fail(name, f"gate {name.text} takes {nparams} parameter(s), got {len(params)}")
        operands = [self.operand("quantum")]
        while self.peek().text == ",":
            self.next()
            operands.append(self.operand("quantum"))
        self.expect(";")
        if len(operands) != arity:
            self.fail(name, f"gate {name.text} takes {arity} qubit operand(s), got {len(operands)}")
        expanded = [self.expand(op, "quantum") for op in operands]
        if arity == 2:
            sizes = {len(e) for e in expanded if len(e) > 1}
            if len(sizes) > 1:
                self.fail(operands[1], "register operands have different sizes")
            width = sizes.pop() if sizes else 1
            pairs = [tuple(e[i] if len(e) > 1 else e[0] for e in expanded) for i in range(width)]
            for a, b in pairs:
                if a == b:
                    self.fail(operands[1], f"cx control and target are both {a[0]}[{a[1]}]")
        touched = [q for e in expanded for q in e]
        for q in touched:
            if q in self.measured:
                self.fail(name, f"gate {name.text} on {q[0]}[{q[1]}] after it was measured; "
                                "only terminal measurements are supported")
        self.statements.append(GateStmt(name.text, tuple(params), tuple(operands),
                                        name.line, name.col))

    def measure(self):
        kw = self.next()
        src = self.operand("quantum")
        self.expect("->")
        dst = self.operand("classical")
        self.expect(";")
        qs = self.expand(src, "quantum")
        cs = self.expand(dst, "classical")
        if len(qs) != len(cs):
            self.fail(dst, f"cannot measure {len(qs)} qubit(s) into {len(cs)} bit(s)")
        self.measured.update(qs)
        self.statements.append(MeasureStmt(src, dst, kw.line, kw.col))

    def barrier(self):
        kw = self.next()
        ops = [self.operand("quantum")]
        while self.peek().text == ",":
            self.next()
            ops.append(self.operand("quantum"))
        self.expect(";")
        self.statements.append(BarrierStmt(tuple(ops), kw.line, kw.col))

    def expr(self) -> float:
        value = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.next()
            rhs = self.unary()
            if op.text == "*":
                value *= rhs
            else:
                if rhs == 0:
                    self.fail(op, "division by zero in angle")
                value /= rhs
        return value

    def unary(self) -> float:
        t = self.peek()
        if t.text == "-":
            self.next()
            return -self.unary()
        if t.kind in ("int", "real"):
            self.next()
            return float(t.text)
        if t.kind == "id" and t.text == "pi":
            self.next()
            return math.pi
        shown = "end of file" if t.kind == "eof" else repr(t.text)
        self.fail(t, f"expected a number or pi in angle, got {shown}")


def parse(source: str) -> QasmProgram:
    """Parse and validate ``source``; raise :class:`QasmError` on problems."""
    if source.startswith("\ufeff"):
        source = source[1:]
    p = _Parser(source)
    prog = p.program()
    if p.diags or prog is None:
        raise QasmError(p.diags)
    if prog.num_qubits == 0:
        raise QasmError([Diagnostic(p.toks[-1].line, max(1, p.toks[-1].col - 1),
                                    "program declares no qreg")])
    return prog


def parse_file(path) -> QasmProgram:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------- printer

def _fmt_angle(x: float) -> str:
    return repr(float(x))


def to_source(prog: QasmProgram) -> str:
    """Canonical text; ``parse(to_source(p))`` equals ``p`` structurally."""
    out = [f"OPENQASM {prog.version};"]
    out += [f'include "{inc}";' for inc in prog.includes]
    out += [f"qreg {name}[{size}];" for name, size in prog.qregs]
    out += [f"creg {name}[{size}];" for name, size in prog.cregs]
    for st in prog.statements:
        if isinstance(st, GateStmt):
            params = f"({', '.join(_fmt_angle(a) for a in st.params)})" if st.params else ""
            out.append(f"{st.name}{params} {', '.join(map(str, st.operands))};")
        elif isinstance(st, MeasureStmt):
            out.append(f"measure {st.source} -> {st.dest};")
        else:
            out.append(f"barrier {', '.join(map(str, st.operands))};")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- executor

def _offsets(regs):
    offsets, total = {}, 0
    for name, size in regs:
        offsets[name] = (total, size)
        total += size
    return offsets


def to_circuit(prog: QasmProgram) -> Circuit:
    nq = prog.num_qubits
    if nq > max_qubits():
        raise UnsupportedFeature(f"program needs {nq} qubits; the cap is {max_qubits()}")
    qoff = _offsets(prog.qregs)
    coff = _offsets(prog.cregs)

    def flat(op, offs):
        start, size = offs[op.reg]
        return [start + op.index] if op.index is not None else list(range(start, start + size))

    c = Circuit(nq, prog.num_clbits)
    for st in prog.statements:
        if isinstance(st, GateStmt):
            instr, arity, _ = GATES[st.name]
            lists = [flat(op, qoff) for op in st.operands]
            width = max(len(x) for x in lists)
            for i in range(width):
                qubits = [x[i] if len(x) > 1 else x[0] for x in lists]
                c.append(instr, *qubits, param=st.params[0] if st.params else None)
        elif isinstance(st, MeasureStmt):
            for q, b in zip(flat(st.source, qoff), flat(st.dest, coff)):
                c.measure(q, b)
    return c


def simulate(prog: QasmProgram) -> StateVector:
    """Final pre-measurement state."""
    return run(to_circuit(prog))


def _spread(hist: ShotHistogram, bits: list[int], width: int) -> ShotHistogram:
    if bits == list(range(width)):
        return hist
    counts: dict[str, int] = {}
    for key, n in hist.counts.items():
        full = ["0"] * width
        for i, b in enumerate(bits):
            full[width - 1 - b] = key[len(bits) - 1 - i]
        k = "".join(full)
        counts[k] = counts.get(k, 0) + n
    return ShotHistogram(counts, hist.shots, hist.seed, width)


def execute(prog: QasmProgram, shots: int = 8000, seed: int = 0,
            noise: NoiseModel | None = None) -> ShotHistogram:
    """Run ``prog`` and histogram the classical register contents.

    Classical bits never written by a measurement read 0.
    """
    check_shots(shots)
    circuit = to_circuit(prog)
    feed: dict[int, int] = {}
    for q, b in circuit.measurements:
        feed[b] = q
    bits = sorted(feed)
    qubits = [feed[b] for b in bits]
    width = prog.num_clbits
    if not bits:
        # nothing measured: every shot reads all zeros
        if width == 0:
            raise UnsupportedFeature("program has no classical register to report")
        return ShotHistogram({"0" * width: int(shots)}, int(shots), int(seed), width)
    if noise is None:
        hist = sample_shots(run(circuit), shots, seed, qubits=qubits)
    else:
        hist = sample_with_noise(circuit, noise, shots, seed, qubits=qubits)
    return _spread(hist, bits, width)
