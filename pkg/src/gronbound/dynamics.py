"""
Paired Schrodinger evolution of an ideal and a perturbed state.

``psi`` evolves under ``H(t)`` and ``phi`` under ``H(t) + K(t)`` from a
shared initial state on a shared uniform grid. Each step applies the exact
exponential of the generator evaluated at the step midpoint (second-order
Magnus / exponential midpoint), so both trajectories stay unit-norm up to
rounding. No renormalisation is applied anywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .bounds import EnvelopeNorm
from .linalg import ComplexState, HermitianOperator, operator_norm

__all__ = [
    "MAX_RATE_DT",
    "PerturbationSpec",
    "EvolutionTrace",
    "StepSizeError",
    "default_steps",
    "evolve_pair",
    "pointwise_inequality_residual",
    "residual_tolerance",
]

MAX_RATE_DT = 0.1

Hamiltonian = Union[HermitianOperator, Callable[[float], HermitianOperator]]


class StepSizeError(ValueError):
    """Raised when ``dt * (||H|| + max kappa)`` exceeds :data:`MAX_RATE_DT`."""


@dataclass(frozen=True, eq=False)
class PerturbationSpec:
    """Perturbation ``K(t) = envelope(t) * generator`` with a fixed generator.

    Because the spatial part is fixed, ``||K(t)|| = ||generator|| |envelope(t)|``
    exactly.
    """

    generator: HermitianOperator
    envelope: Callable[[float], float]
    kind: str = "custom"
    omega: Optional[float] = None

    @classmethod
    def constant(cls, generator: HermitianOperator) -> PerturbationSpec:
        return cls(generator, lambda t: 1.0, "constant")

    @classmethod
    def sinusoidal(cls, generator: HermitianOperator, omega: float) -> PerturbationSpec:
        omega = float(omega)
        if not omega > 0:
            raise ValueError(f"omega must be positive, got {omega}")
        return cls(generator, lambda t: math.sin(omega * t), "sinusoidal", omega)

    @property
    def gamma(self) -> float:
        """Spectral norm of the generator."""
        return operator_norm(self.generator)

    def at(self, t: float) -> HermitianOperator:
        return float(self.envelope(t)) * self.generator

    def kappa(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        env = np.vectorize(lambda x: float(self.envelope(x)), otypes=[float])(t)
        return self.gamma * np.abs(env)

    def max_kappa(self, times=None) -> float:
        if self.kind in ("constant", "sinusoidal"):
            return self.gamma
        if times is None:
            raise ValueError("custom envelopes need sample times to bound kappa")
        return float(np.max(self.kappa(times)))

    def envelope_norm(self, T: Optional[float] = None, samples: int = 4097) -> EnvelopeNorm:
        """Matching :class:`EnvelopeNorm`; custom envelopes are tabulated on ``[0, T]``."""
        if self.kind == "constant":
            return EnvelopeNorm.constant(self.gamma)
        if self.kind == "sinusoidal":
            return EnvelopeNorm.sinusoidal(self.gamma, self.omega)
        if T is None:
            raise ValueError("tabulating a custom envelope needs T")
        t = np.linspace(0.0, T, samples)
        return EnvelopeNorm.tabulated(t, self.kappa(t))


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    """Both trajectories on the shared grid plus ``deviation = ||psi - phi||``.

    ``psi`` and ``phi`` are ``(len(times), dim)`` complex arrays; row ``k`` is
    the state at ``times[k]``. ``h_norm`` is the largest ``||H||`` seen at the
    step midpoints, kept for discretisation tolerances.
    """

    times: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    deviation: np.ndarray
    h_norm: float
    max_kappa: float

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def state(self, k: int, which: str = "phi") -> ComplexState:
        return ComplexState(getattr(self, which)[k])


def _hamiltonian_at(H, t):
    return H(t) if callable(H) and not isinstance(H, HermitianOperator) else H


def default_steps(T: float, h_norm: float, gamma: float) -> int:
    """``max(1000, ceil(20 T (||H|| + gamma)))``."""
    return max(1000, math.ceil(20.0 * T * (h_norm + gamma)))


def evolve_pair(H: Hamiltonian, K: PerturbationSpec, psi0: ComplexState, T: float,
                steps: Optional[int] = None) -> EvolutionTrace:
    """Integrate the ideal and perturbed equations from ``psi0`` up to ``T``.

    Parameters
    ----------
    H : HermitianOperator or callable
        Ideal Hamiltonian, or a function ``t -> HermitianOperator``.
    K : PerturbationSpec
        Perturbation added to ``H`` for the second trajectory.
    psi0 : ComplexState
        Common unit-norm initial state.
    T : float
        Final time, ``T > 0``.
    steps : int, optional
        Number of uniform steps. Defaults to :func:`default_steps`.

    Raises
    ------
    StepSizeError
        If ``dt * (||H|| + max kappa) > 0.1``.
    """
    T = float(T)
    if not (np.isfinite(T) and T > 0):
        raise ValueError(f"T must be finite and positive, got {T}")
    if abs(psi0.norm() - 1.0) > 1e-9:
        raise ValueError(f"initial state must be unit norm, got {psi0.norm()}")
    if K.generator.dim != psi0.dim:
        raise ValueError(f"dimension mismatch: K is {K.generator.dim}, state is {psi0.dim}")

    static_h = isinstance(H, HermitianOperator)
    if static_h:
        if H.dim != psi0.dim:
            raise ValueError(f"dimension mismatch: H is {H.dim}, state is {psi0.dim}")
        h_norm = operator_norm(H)
    else:
        h_norm = None

    if steps is None:
        if h_norm is None:
            h_norm_probe = max(operator_norm(H(t)) for t in np.linspace(0, T, 33))
        else:
            h_norm_probe = h_norm
        steps = default_steps(T, h_norm_probe, K.max_kappa(np.linspace(0, T, 1025)))
    steps = int(steps)
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")

    dt = T / steps
    times = np.linspace(0.0, T, steps + 1)
    mids = times[:-1] + 0.5 * dt
    envs = np.array([float(K.envelope(t)) for t in mids])
    max_kappa = K.max_kappa(mids)

    if not static_h:
        hs = [H(t) for t in mids]
        for h in hs:
            if h.dim != psi0.dim:
                raise ValueError(f"dimension mismatch: H(t) is {h.dim}, state is {psi0.dim}")
        h_norm = max(operator_norm(h) for h in hs)

    rate = dt * (h_norm + max_kappa)
    if rate > MAX_RATE_DT:
        raise StepSizeError(
            f"dt * (||H|| + max kappa) = {rate:.4g} exceeds {MAX_RATE_DT}; "
            f"use at least {math.ceil(T * (h_norm + max_kappa) / MAX_RATE_DT)} steps")

    dim = psi0.dim
    psi = np.empty((steps + 1, dim), dtype=np.complex128)
    phi = np.empty((steps + 1, dim), dtype=np.complex128)
    psi[0] = phi[0] = psi0.amplitudes

    const_k = K.kind == "constant"
    if static_h:
        u_ideal = H.propagator(dt)
        if const_k:
            u_pert = (H + K.at(0.0)).propagator(dt)
    for k in range(steps):
        if static_h:
            psi[k + 1] = u_ideal @ psi[k]
            if const_k:
                phi[k + 1] = u_pert @ phi[k]
            else:
                g = HermitianOperator(H.entries + envs[k] * K.generator.entries)
                phi[k + 1] = g.propagator(dt) @ phi[k]
        else:
            h = hs[k]
            psi[k + 1] = h.propagator(dt) @ psi[k]
            g = HermitianOperator(h.entries + envs[k] * K.generator.entries)
            phi[k + 1] = g.propagator(dt) @ phi[k]

    deviation = np.linalg.norm(psi - phi, axis=1)
    for a in (times, psi, phi, deviation):
        a.setflags(write=False)
    return EvolutionTrace(times, psi, phi, deviation, float(h_norm), float(max_kappa))


def residual_tolerance(trace: EvolutionTrace) -> float:
    """``10 dt^2 (||H|| + max kappa)^3 + 1e-8``."""
    return 10.0 * trace.dt ** 2 * (trace.h_norm + trace.max_kappa) ** 3 + 1e-8


def pointwise_inequality_residual(trace: EvolutionTrace, K: PerturbationSpec) -> np.ndarray:
    """``kappa(t_k) (1 + dev_k) - d dev / dt`` at interior grid points.

    The derivative is a central difference. Every entry should be at least
    ``-residual_tolerance(trace)``.
    """
    if trace.times.size < 3:
        raise ValueError("need at least 3 grid points")
    t = trace.times
    d = trace.deviation
    slope = (d[2:] - d[:-2]) / (t[2:] - t[:-2])
    return K.kappa(t[1:-1]) * (1.0 + d[1:-1]) - slope
