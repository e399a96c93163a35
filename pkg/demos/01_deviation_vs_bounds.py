# %% [markdown]
# # How far does a perturbed state drift?
#
# Two copies of a state evolve from the same start: one under H, one under
# H + K(t). The distance between them is bounded by quantities that only
# need the norm of K(t). This script simulates both and compares.

# %%
import numpy as np

from gronbound import (EnvelopeNorm, PerturbationSpec, bound_general_closed,
                       bound_linear, evolve_pair)
from gronbound.linalg import random_hermitian, random_state

rng = np.random.default_rng(0)
dim = 8
H = random_hermitian(dim, 1.5, rng)          # ||H|| = 1.5
G = random_hermitian(dim, 0.3, rng)          # ||K|| = 0.3
psi0 = random_state(dim, rng)

# %% [markdown]
# ## Constant error

# %%
K = PerturbationSpec.constant(G)
trace = evolve_pair(H, K, psi0, T=5.0)
env = EnvelopeNorm.constant(0.3)
for t in (1.0, 2.5, 5.0):
    k = np.searchsorted(trace.times, t)
    print(f"t={t:4.1f}  actual={trace.deviation[k]:.4f}  "
          f"linear={bound_linear(env, t):.4f}  gronwall={bound_general_closed(env, t):.4f}")

# %% [markdown]
# ## Oscillating error
#
# With K(t) = sin(2t) G the norm envelope is 0.3 |sin 2t|, so both bounds
# shrink by roughly 2/pi.

# %%
K = PerturbationSpec.sinusoidal(G, 2.0)
trace = evolve_pair(H, K, psi0, T=5.0)
env = K.envelope_norm()
print(f"actual={trace.deviation[-1]:.4f}  linear={bound_linear(env, 5.0):.4f}  "
      f"gronwall={bound_general_closed(env, 5.0):.4f}")

# %% [markdown]
# The norm never drifts, since each step is an exact unitary:

# %%
print("max | ||phi|| - 1 | =", np.max(np.abs(np.linalg.norm(trace.phi, axis=1) - 1)))
