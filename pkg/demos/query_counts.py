"""Oracle calls needed to decide constant vs balanced with certainty."""

from djsim import TruthTable, classical_baseline, deutsch_jozsa

print(" n  quantum  classical(worst)")
for n in range(1, 9):
    # a constant function forces the classical search to its worst case
    t = TruthTable(n, (0,) * (1 << n))
    q = deutsch_jozsa(t, n)
    c = classical_baseline(t)
    print(f"{n:2d}  {q.oracle_queries:7d}  {c.queries_used:9d}")
