"""
Continuous-time Grover search under coherent errors.

Two models are provided:

``effective``
    The two-level rotation in the ordered basis ``(|w_bar>, |w>)`` with
    ``H = Omega sigma_y``, ``theta = arcsin(1/sqrt(N))`` and ``Omega = 2 theta``.
    The start state ``(cos theta, sin theta)`` rotates at rate Omega and hits
    ``|w>`` exactly at ``T_exact = (pi/2 - theta) / Omega``; the nominal runtime
    is ``T_paper = pi / (2 Omega)``.

``full``
    Analog search on ``N = 2**n`` basis states with
    ``H = |w><w| + |+><+|``, which reaches ``|w>`` at ``t = pi sqrt(N) / 2``.
    That time is stored as ``T_exact``.

Perturbations default to ``gamma sigma_y`` (effective) and ``gamma Y`` on one
qubit (full).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .bounds import EnvelopeNorm, bound_constant, bound_general_closed
from .dynamics import PerturbationSpec, default_steps, evolve_pair
from .linalg import (MAX_QUBITS, SIGMA_Y, ComplexState, HermitianOperator,
                     embed_pauli_y, operator_norm)

__all__ = [
    "CERT_SLACK",
    "GroverModel",
    "RobustnessReport",
    "RobustnessRow",
    "build_grover",
    "default_perturbation",
    "gamma_tolerance",
    "robustness_sweep",
    "success_lower_bound",
    "success_lower_bound_constant",
    "success_lower_bound_linearized",
    "success_probability",
]

CERT_SLACK = 1e-6


@dataclass(frozen=True, eq=False)
class GroverModel:
    kind: str
    n_items: int
    item: int
    target: int
    theta: float
    omega: float
    T_paper: float
    T_exact: float
    hamiltonian: HermitianOperator
    initial: ComplexState

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    @property
    def T_nominal(self) -> float:
        """Runtime ``pi sqrt(N) / 4`` assumed by :func:`gamma_tolerance`."""
        return math.pi * math.sqrt(self.n_items) / 4

    @property
    def n_qubits(self) -> int:
        """Qubits spanned by the model's Hilbert space (1 for the effective model)."""
        return int(round(math.log2(self.dim)))

    def ideal_overlap(self, T: float) -> float:
        """``|<w|psi(T)>|`` for the unperturbed evolution."""
        psi = self.hamiltonian.propagator(T) @ self.initial.amplitudes
        return float(abs(psi[self.target]))


def build_grover(kind: str, n_items: int, item: int = 0) -> GroverModel:
    """Build an effective (two-level) or full (``2**n``-level) search model.

    ``item`` is the marked database index ``w``; the effective model only
    records it, since its basis is ``(|w_bar>, |w>)`` regardless.
    """
    n_items = int(n_items)
    if n_items < 2:
        raise ValueError(f"database size must be >= 2, got {n_items}")
    if not 0 <= item < n_items:
        raise ValueError(f"marked item {item} out of range 0..{n_items - 1}")
    theta = math.asin(1.0 / math.sqrt(n_items))
    omega = 2.0 * theta
    T_paper = math.pi / (2.0 * omega)

    if kind == "effective":
        H = omega * SIGMA_Y
        init = ComplexState(np.array([math.cos(theta), math.sin(theta)]))
        return GroverModel(kind, n_items, item, 1, theta, omega, T_paper,
                           (math.pi / 2 - theta) / omega, H, init)
    if kind == "full":
        n = n_items.bit_length() - 1
        if 2 ** n != n_items:
            raise ValueError(f"full model needs a power-of-two size, got {n_items}")
        if n > MAX_QUBITS:
            raise ValueError(f"full model limited to {MAX_QUBITS} qubits, got {n}")
        plus = np.full(n_items, 1.0 / math.sqrt(n_items))
        H = np.outer(plus, plus).astype(np.complex128)
        H[item, item] += 1.0
        return GroverModel(kind, n_items, item, item, theta, omega, T_paper,
                           math.pi * math.sqrt(n_items) / 2, HermitianOperator(H),
                           ComplexState(plus))
    raise ValueError(f"unknown model kind {kind!r}")


def default_perturbation(model: GroverModel, gamma: float, omega: Optional[float] = None,
                         error_qubit: int = 1) -> PerturbationSpec:
    """``gamma Y`` (constant) or ``gamma sin(omega t) Y`` on ``error_qubit``."""
    if model.kind == "effective":
        gen = gamma * SIGMA_Y
    else:
        gen = gamma * embed_pauli_y(model.n_qubits, error_qubit)
    if omega is None:
        return PerturbationSpec.constant(gen)
    return PerturbationSpec.sinusoidal(gen, omega)


def _check_dims(model, K):
    if K.generator.dim != model.dim:
        raise ValueError(f"dimension mismatch: K is {K.generator.dim}, model is {model.dim}")


def success_probability(model: GroverModel, K: PerturbationSpec, T: Optional[float] = None,
                        steps: Optional[int] = None) -> float:
    """``|<w|phi(T)>|^2`` with ``phi`` evolved under ``H + K(t)``.

    ``T`` defaults to ``model.T_exact``.
    """
    _check_dims(model, K)
    T = model.T_exact if T is None else T
    trace = evolve_pair(model.hamiltonian, K, model.initial, T, steps)
    return min(1.0, float(abs(trace.phi[-1, model.target]) ** 2))


def success_lower_bound(deviation_bound: float, ideal_overlap: float = 1.0) -> float:
    """``max(0, |<w|psi(T)>| - bound)^2``.

    With the default ``ideal_overlap = 1`` this is ``(1 - bound)^2`` clamped
    at zero once the bound reaches 1. Passing the actual overlap of the ideal
    state keeps the certificate rigorous at times where ``psi(T) != |w>``.
    """
    if deviation_bound < 0:
        raise ValueError(f"deviation bound must be nonnegative, got {deviation_bound}")
    return max(0.0, ideal_overlap - deviation_bound) ** 2


def success_lower_bound_constant(gamma: float, T: float) -> float:
    """``max(0, 2 - exp(gamma T))^2`` for a constant error of norm ``gamma``."""
    if gamma < 0 or T < 0:
        raise ValueError("gamma and T must be nonnegative")
    return success_lower_bound(bound_constant(gamma, T))


def success_lower_bound_linearized(gamma: float, T: float) -> float:
    """Small ``gamma T`` expansion ``1 - 2 gamma T`` (not clamped; reporting only)."""
    return 1.0 - 2.0 * gamma * T


def gamma_tolerance(n_items: int, epsilon: float) -> float:
    """Largest constant error strength keeping ``P_succ >= 1 - epsilon``.

    Uses the runtime ``T = pi sqrt(N) / 4``:
    ``gamma = 4 / (pi sqrt(N)) * ln(2 - sqrt(1 - epsilon))``.
    """
    if n_items < 2:
        raise ValueError(f"database size must be >= 2, got {n_items}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    return 4.0 / (math.pi * math.sqrt(n_items)) * math.log(2.0 - math.sqrt(1.0 - epsilon))


@dataclass(frozen=True)
class RobustnessRow:
    gamma: float
    envelope: str
    T: float
    dev_bound: float
    dev_actual: float
    psucc_sim: float
    psucc_lower: float
    certified: bool
    ideal_residual: float
    gamma_tolerance_used: bool = False


@dataclass
class RobustnessReport:
    model_kind: str
    n_items: int
    rows: list = field(default_factory=list)

    @property
    def all_certified(self) -> bool:
        return all(r.certified for r in self.rows)


Envelope = Union[str, tuple]


def _parse_envelope(env):
    if env == "constant":
        return None
    if isinstance(env, tuple) and len(env) == 2 and env[0] == "sinusoidal":
        return float(env[1])
    raise ValueError(f"envelope must be 'constant' or ('sinusoidal', omega), got {env!r}")


def robustness_sweep(model: GroverModel, gammas: Sequence[float],
                     envelopes: Sequence[Envelope] = ("constant",),
                     steps: Optional[int] = None, T: Optional[float] = None,
                     error_qubit: int = 1, epsilon: Optional[float] = None) -> RobustnessReport:
    """Simulate and certify one row per ``(gamma, envelope)``, in grid order.

    ``T`` defaults to ``T_nominal = pi sqrt(N) / 4`` for the effective model
    and to the full model's own optimal time ``T_exact`` otherwise. If ``epsilon`` is given, the
    tolerance ``gamma_tolerance(N, epsilon)`` is appended to the gamma grid
    and those rows are flagged.

    The deviation bound is ``exp(gamma T) - 1`` for constant errors and the
    closed Gronwall bound for sinusoidal ones. The certificate is
    ``success_lower_bound(dev_bound, |<w|psi(T)>|)``.
    """
    gammas = [float(g) for g in gammas]
    if not (gammas or epsilon is not None) or not envelopes:
        raise ValueError("gamma grid and envelope list must be nonempty")
    flags = [False] * len(gammas)
    if epsilon is not None:
        gammas.append(gamma_tolerance(model.n_items, epsilon))
        flags.append(True)
    if T is None:
        T = model.T_nominal if model.kind == "effective" else model.T_exact
    overlap = model.ideal_overlap(T)
    h_norm = operator_norm(model.hamiltonian)

    report = RobustnessReport(model.kind, model.n_items)
    for gamma, flag in zip(gammas, flags):
        if gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {gamma}")
        for env in envelopes:
            omega = _parse_envelope(env)
            K = default_perturbation(model, gamma, omega, error_qubit)
            n_steps = steps if steps is not None else default_steps(T, h_norm, gamma)
            trace = evolve_pair(model.hamiltonian, K, model.initial, T, n_steps)
            psucc = min(1.0, float(abs(trace.phi[-1, model.target]) ** 2))
            if omega is None:
                dev_bound = bound_constant(gamma, T)
                label = "constant"
            else:
                dev_bound = bound_general_closed(EnvelopeNorm.sinusoidal(gamma, omega), T)
                label = f"sinusoidal({omega!r})"
            lower = success_lower_bound(dev_bound, overlap)
            report.rows.append(RobustnessRow(
                gamma, label, T, dev_bound, float(trace.deviation[-1]), psucc, lower,
                psucc >= lower - CERT_SLACK, 1.0 - overlap, flag))
    return report
