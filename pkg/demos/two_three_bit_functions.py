"""Run the 3-bit constant and balanced examples and look inside the final state.

The constant function is f(x) = 1; the balanced one is f(x) = 1 for x > 3.
"""

import numpy as np

from djsim import TruthTable, deutsch_jozsa, final_amplitudes_closed_form, synthesize_gates
from djsim.algorithms import first_register_amplitudes

examples = {
    "constant": TruthTable(3, (1,) * 8),
    "balanced": TruthTable.from_function(3, lambda x: int(x > 3)),
}

for label, t in examples.items():
    oracle = synthesize_gates(t)
    print(f"{label}: oracle gates {[g.to_qasm() for g in oracle.gate_list]}")

    r = deutsch_jozsa(oracle, 3, shots=8000, seed=0)
    amps = first_register_amplitudes(r.final_state)
    err = np.max(np.abs(amps - final_amplitudes_closed_form(t)))
    print(f"  verdict {r.verdict}, outcome {r.first_register_outcome}, P(000) = {r.zero_probability:.3f}")
    print(f"  histogram {r.histogram.counts}")
    print(f"  first-register amplitudes {np.round(amps.real, 6).tolist()}")
    print(f"  max deviation from the closed form: {err:.1e}")
