"""Readout flips turn the ideal 100% peaks into the ~95% / ~93% seen on hardware.

For three measured bits each flipped with probability p, the correct key
survives with probability (1 - p)**3, so p is chosen by inverting that.
"""

from djsim import NoiseModel, TruthTable, sample_with_noise, synthesize_permutation
from djsim.algorithms import dj_circuit
from djsim.noise import readout_rate_for_dominant

SHOTS = 8000

for label, outs, key, target in [("constant", (1,) * 8, "000", 0.95),
                                 ("balanced", (0,) * 4 + (1,) * 4, "100", 0.93)]:
    circuit = dj_circuit(synthesize_permutation(TruthTable(3, outs)))
    p = readout_rate_for_dominant(target)
    h = sample_with_noise(circuit, NoiseModel(readout_flip=p), SHOTS, seed=0)
    print(f"{label}: p = {p:.5f}, {key} seen {h[key]}/{SHOTS} = {h.frequency(key):.3f}")
    for k, v in h.most_common()[1:4]:
        print(f"    {k}: {v}")

# gate-level depolarizing noise lowers the peak further
circuit = dj_circuit(synthesize_permutation(TruthTable(3, (1,) * 8)))
for p in (0.0, 0.005, 0.02):
    h = sample_with_noise(circuit, NoiseModel(depolarizing=p), SHOTS, seed=0)
    print(f"depolarizing {p}: P(000) ~ {h.frequency('000'):.3f}")
