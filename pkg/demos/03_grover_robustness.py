# %% [markdown]
# # Grover search with a coherent error
#
# How strong can a constant error be before the search stops succeeding
# with probability at least 1 - epsilon? The tolerance shrinks like 1/sqrt(N).

# %%
import math

from gronbound import (build_grover, default_perturbation, gamma_tolerance,
                       robustness_sweep, success_probability)

for n in (16, 256, 1024, 4096):
    g = gamma_tolerance(n, 0.1)
    print(f"N={n:5d}  gamma_max={g:.6f}  gamma_max*sqrt(N)={g * math.sqrt(n):.6f}")

# %% [markdown]
# Simulate the two-level model at that tolerance and check the guarantee.

# %%
model = build_grover("effective", 1024)
g = gamma_tolerance(1024, 0.1)
p = success_probability(model, default_perturbation(model, g), model.T_nominal)
print(f"psucc at gamma_max: {p:.5f} (guaranteed >= 0.9)")

# %% [markdown]
# A sweep over gamma, including an oscillating error, for the full 16-item
# model with the error on qubit 1.

# %%
report = robustness_sweep(build_grover("full", 16), [0.0, 0.01, 0.05, 0.1],
                          envelopes=["constant", ("sinusoidal", 1.0)])
for r in report.rows:
    print(f"gamma={r.gamma:5.3f} {r.envelope:16s} psucc={r.psucc_sim:.4f} "
          f"lower={r.psucc_lower:.4f} certified={r.certified}")
