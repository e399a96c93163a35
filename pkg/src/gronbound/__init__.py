"""Gronwall-type deviation bounds for coherently perturbed quantum evolution."""
from .bounds import (BoundCurve, EnvelopeNorm, bound_constant, bound_curve,
                     bound_general, bound_general_closed, bound_linear,
                     bound_sinusoidal, bound_sinusoidal_per_period, c_factor)
from .dynamics import (EvolutionTrace, PerturbationSpec, StepSizeError,
                       evolve_pair, pointwise_inequality_residual)
from .grover import (GroverModel, RobustnessReport, build_grover,
                     default_perturbation, gamma_tolerance, robustness_sweep,
                     success_lower_bound, success_lower_bound_constant,
                     success_probability)
from .linalg import (SIGMA_Y, ComplexState, HermitianOperator, embed_pauli_y,
                     operator_norm, unitary_step)

__version__ = "0.1.0"
