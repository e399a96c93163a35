# %% [markdown]
# # Oscillating vs constant errors: closed-form bounds
#
# For kappa(t) = gamma |sin(omega t)| at whole half-periods T = N pi / omega,
# the bound C(gamma, omega) gamma T e^{gamma T} can be compared with the
# constant-error bound e^{gamma T} - 1. Slow oscillation (small omega) makes
# the first one larger.

# %%
import math

from gronbound import bound_constant, bound_sinusoidal, c_factor
from gronbound.bounds import EnvelopeNorm, bound_general, bound_general_closed

gamma = 0.15
for omega in (math.pi, math.pi / 4):
    print(f"omega = {omega:.4f}, C = {c_factor(gamma, omega):.6f}")
    step = math.pi / omega
    for k in range(1, int(20 / step) + 1):
        T = k * step
        print(f"  T={T:5.1f}  oscillating={bound_sinusoidal(gamma, omega, T):9.4f}  "
              f"constant={bound_constant(gamma, T):9.4f}")

# %% [markdown]
# The closed forms are relaxations. The tight integral bound for the same
# envelope is exp(int kappa) - 1, and quadrature agrees with it:

# %%
env = EnvelopeNorm.sinusoidal(gamma, math.pi / 4)
print(bound_general(env, 16.0), bound_general_closed(env, 16.0), bound_sinusoidal(gamma, math.pi / 4, 16.0))

# %% [markdown]
# To write the two panels as CSV plus SVG charts from the shell:
#
#     gronbound fig1 --out fig1 --svg fig1
