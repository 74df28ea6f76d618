"""Decide all four one-bit functions with a single oracle call each."""

import itertools

from djsim import TruthTable, classical_baseline, deutsch

for outs in itertools.product((0, 1), repeat=2):
    t = TruthTable(1, outs)
    q = deutsch(t)
    c = classical_baseline(t)
    print(f"f(0)={outs[0]} f(1)={outs[1]}  measured {q.first_register_outcome}"
          f"  -> {q.verdict}  (quantum {q.oracle_queries} query, classical {c.queries_used})")
