"""Parse an OpenQASM 2.0 program, print it back, and sample it."""

from djsim import execute, parse
from djsim.qasm import QasmError, simulate, to_source

SOURCE = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[4];
creg c[3];
x q[3];
h q;
cx q[2], q[3];   // oracle for f(x) = x2
h q[0]; h q[1]; h q[2];
measure q[0] -> c[0];
measure q[1] -> c[1];
measure q[2] -> c[2];
"""

prog = parse(SOURCE)
print(to_source(prog))
print("nonzero amplitudes:")
state = simulate(prog)
for i, a in enumerate(state.amplitudes):
    if abs(a) > 1e-12:
        print(f"  |{i:04b}>  {a.real:+.4f}")
print("counts:", execute(prog, shots=1000, seed=1).counts)

try:
    parse("OPENQASM 2.0;\nqreg q[2];\ncx q[1], q[1];\n")
except QasmError as exc:
    print("rejected:", exc.diagnostics[0])
