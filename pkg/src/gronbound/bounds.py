"""
Analytic upper bounds on the deviation ``||psi(T) - phi(T)||``.

All bounds depend only on the perturbation-norm envelope
``kappa(t) = ||K(t)||``, described by :class:`EnvelopeNorm`:

* ``bound_linear``         -- ``int_0^T kappa``, valid for Hermitian K.
* ``bound_general``        -- ``int_0^T kappa(s) exp(int_s^T kappa) ds`` by
  nested composite Simpson quadrature.
* ``bound_general_closed`` -- the same quantity in closed form,
  ``exp(int_0^T kappa) - 1``.
* ``bound_constant``       -- ``exp(gamma T) - 1`` for ``kappa = gamma``.
* ``bound_sinusoidal``     -- ``C(gamma, omega) gamma T exp(gamma T)`` for
  ``kappa = gamma |sin(omega t)|`` at whole half-periods ``T = N pi / omega``.

Bounds are returned raw; they may exceed 2, the trivial cap on the distance
between two unit vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "EnvelopeNorm",
    "BoundCurve",
    "DEFAULT_QUAD_POINTS",
    "bound_constant",
    "bound_curve",
    "bound_general",
    "bound_general_closed",
    "bound_linear",
    "bound_sinusoidal",
    "bound_sinusoidal_per_period",
    "c_factor",
    "n_periods",
]

DEFAULT_QUAD_POINTS = 4096
PERIOD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class EnvelopeNorm:
    """Norm envelope ``kappa(t)`` of a perturbation.

    Use the constructors :meth:`constant`, :meth:`sinusoidal` and
    :meth:`tabulated`. Tabulated envelopes are linearly interpolated between
    their nodes.
    """

    kind: str
    gamma: float = 0.0
    omega: Optional[float] = None
    table_t: Optional[np.ndarray] = None
    table_kappa: Optional[np.ndarray] = None

    @classmethod
    def constant(cls, gamma: float) -> EnvelopeNorm:
        gamma = float(gamma)
        if not (np.isfinite(gamma) and gamma >= 0):
            raise ValueError(f"gamma must be finite and nonnegative, got {gamma}")
        return cls("constant", gamma)

    @classmethod
    def sinusoidal(cls, gamma: float, omega: float) -> EnvelopeNorm:
        gamma, omega = float(gamma), float(omega)
        if not (np.isfinite(gamma) and gamma >= 0):
            raise ValueError(f"gamma must be finite and nonnegative, got {gamma}")
        if not (np.isfinite(omega) and omega > 0):
            raise ValueError(f"omega must be finite and positive, got {omega}")
        return cls("sinusoidal", gamma, omega)

    @classmethod
    def tabulated(cls, t, kappa) -> EnvelopeNorm:
        t = np.array(t, dtype=float)
        k = np.array(kappa, dtype=float)
        if t.ndim != 1 or t.shape != k.shape or t.size < 2:
            raise ValueError("tabulated envelope needs matching 1-d arrays with >= 2 nodes")
        if np.any(np.diff(t) <= 0):
            raise ValueError("tabulated times must be strictly increasing")
        if not (np.all(np.isfinite(k)) and np.all(k >= 0)):
            raise ValueError("tabulated kappa must be finite and nonnegative")
        t.setflags(write=False)
        k.setflags(write=False)
        return cls("tabulated", float(k.max()), None, t, k)

    @property
    def analytic(self) -> bool:
        return self.kind in ("constant", "sinusoidal")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return np.full_like(t, self.gamma)
        if self.kind == "sinusoidal":
            return self.gamma * np.abs(np.sin(self.omega * t))
        return np.interp(t, self.table_t, self.table_kappa)

    def integral(self, t):
        """Exact ``int_0^t kappa(u) du`` for the analytic kinds."""
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return self.gamma * t
        if self.kind == "sinusoidal":
            # each half-period of |sin| contributes 2/omega
            x = self.omega * t
            full = np.floor(x / np.pi)
            rem = x - full * np.pi
            return (self.gamma / self.omega) * (2.0 * full + 1.0 - np.cos(rem))
        raise ValueError("tabulated envelopes have no closed-form integral; use quadrature")

    def breakpoints(self, T: float) -> np.ndarray:
        """Points in ``[0, T]`` where kappa may fail to be smooth, ends included."""
        if self.kind == "constant":
            inner = np.empty(0)
        elif self.kind == "sinusoidal":
            step = np.pi / self.omega
            inner = step * np.arange(1, int(np.floor(T / step)) + 1)
        else:
            if self.table_t[0] > 0 or self.table_t[-1] < T:
                raise ValueError(
                    f"tabulated envelope covers [{self.table_t[0]}, {self.table_t[-1]}], "
                    f"not [0, {T}]")
            inner = self.table_t
        pts = np.concatenate(([0.0], inner[(inner > 0) & (inner < T)], [T]))
        # drop slivers produced by rounding next to T
        keep = np.concatenate(([True], np.diff(pts) > 1e-12 * max(T, 1.0)))
        pts = pts[keep]
        pts[-1] = T
        return pts

    def label(self) -> str:
        if self.kind == "constant":
            return f"constant(gamma={self.gamma!r})"
        if self.kind == "sinusoidal":
            return f"sinusoidal(gamma={self.gamma!r}, omega={self.omega!r})"
        return f"tabulated({self.table_t.size} nodes)"


def _check_T(T):
    T = float(T)
    if not np.isfinite(T) or T < 0:
        raise ValueError(f"T must be finite and nonnegative, got {T}")
    return T


def _cumulative_simpson(f, h):
    """Running integral of samples ``f`` (odd length, spacing ``h``).

    Even nodes use composite Simpson; odd nodes add the half-panel
    quadratic rule ``h/12 (5 f0 + 8 f1 - f2)``.
    """
    n = f.size - 1
    out = np.zeros(f.size)
    f0, f1, f2 = f[0:n - 1:2], f[1:n:2], f[2:n + 1:2]
    panels = (h / 3.0) * (f0 + 4.0 * f1 + f2)
    out[2::2] = np.cumsum(panels)
    out[1::2] = out[0:n - 1:2] + (h / 12.0) * (5.0 * f0 + 8.0 * f1 - f2)
    return out


def _simpson(f, h):
    return (h / 3.0) * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())


def _pieces(env, T, quad_points):
    """Sample grids on each smooth piece of kappa over ``[0, T]``.

    Analytic envelopes get ``quad_points`` Simpson intervals per piece (a
    half-period for the sinusoid); tabulated envelopes, which are linear
    between nodes, share ``quad_points`` across pieces with at least two each.
    """
    pts = env.breakpoints(T)
    n_pieces = pts.size - 1
    if env.analytic:
        per = np.full(n_pieces, quad_points)
    else:
        lengths = np.diff(pts)
        per = np.maximum(2, np.round(quad_points * lengths / T)).astype(int)
    per = per + (per % 2)
    return [np.linspace(a, b, n + 1) for a, b, n in zip(pts[:-1], pts[1:], per)]


def _quadrature(env, T, quad_points):
    """Return (int_0^T kappa, int_0^T kappa(s) exp(int_s^T kappa) ds)."""
    if T == 0:
        return 0.0, 0.0
    grids = _pieces(env, T, quad_points)
    kappas, cums = [], []
    offset = 0.0
    for s in grids:
        k = env(s)
        c = offset + _cumulative_simpson(k, s[1] - s[0])
        offset = c[-1]
        kappas.append(k)
        cums.append(c)
    total = offset
    outer = 0.0
    for s, k, c in zip(grids, kappas, cums):
        outer += _simpson(k * np.exp(total - c), s[1] - s[0])
    return float(total), float(outer)


def bound_general(env: EnvelopeNorm, T: float, quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    """Integral form of the Gronwall deviation bound, by quadrature.

    Evaluates ``int_0^T kappa(s) exp(int_s^T kappa(u) du) ds`` with composite
    Simpson on both integrals. The inner integral is a cumulative table, so
    the cost is linear in the number of nodes. Quadrature grids are split at
    the kinks of kappa (zeros of the sinusoid, tabulation nodes).
    """
    T = _check_T(T)
    if quad_points < 64:
        raise ValueError(f"quad_points must be >= 64, got {quad_points}")
    return _quadrature(env, T, int(quad_points))[1]


def bound_general_closed(env: EnvelopeNorm, T: float) -> float:
    """``exp(int_0^T kappa) - 1``, equal to :func:`bound_general` identically."""
    T = _check_T(T)
    if not env.analytic:
        raise ValueError("closed form needs a constant or sinusoidal envelope; use bound_general")
    return float(np.expm1(env.integral(T)))


def bound_linear(env: EnvelopeNorm, T: float, quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    """``int_0^T kappa``: the deviation bound for Hermitian K and unit states."""
    T = _check_T(T)
    if env.analytic:
        return float(env.integral(T))
    return _quadrature(env, T, int(quad_points))[0]


def bound_constant(gamma: float, T: float) -> float:
    return math.expm1(gamma * T)


def c_factor(gamma: float, omega: float) -> float:
    """Prefactor ``omega^2 (1 + exp(-gamma pi / omega)) / (pi (gamma^2 + omega^2))``."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    return omega ** 2 * (1.0 + math.exp(-gamma * math.pi / omega)) / (math.pi * (gamma ** 2 + omega ** 2))


def n_periods(omega: float, T: float) -> int:
    """Integer N with ``T = N pi / omega``; raises if T is not such a multiple."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    x = T * omega / math.pi
    n = round(x)
    if abs(x - n) > PERIOD_TOL * max(1.0, abs(x)) or n < 1:
        raise ValueError(f"T = {T} is not a positive integer multiple of pi/omega = {math.pi / omega}")
    return int(n)


def bound_sinusoidal(gamma: float, omega: float, T: float) -> float:
    """``C(gamma, omega) gamma T exp(gamma T)`` for ``kappa = gamma |sin(omega t)|``.

    Only defined when T is a whole number of half-periods ``pi / omega``.
    """
    n_periods(omega, T)
    return c_factor(gamma, omega) * gamma * T * math.exp(gamma * T)


def bound_sinusoidal_per_period(gamma: float, omega: float, n: int) -> float:
    """Same bound assembled from the single-period integral, N periods, T = N pi/omega."""
    T = n * math.pi / omega
    one_period = (1.0 / omega) * (1.0 + math.exp(-gamma * math.pi / omega)) / ((gamma / omega) ** 2 + 1.0)
    return gamma * math.exp(gamma * T) * n * one_period


@dataclass(frozen=True)
class BoundCurve:
    times: np.ndarray
    linear: np.ndarray
    gronwall: np.ndarray
    closed_form: Optional[np.ndarray]
    label: str


def bound_curve(env: EnvelopeNorm, times) -> BoundCurve:
    """Evaluate the bounds of ``env`` on a time grid starting at 0.

    ``closed_form`` is the constant or sinusoidal formula; for the sinusoid
    it is NaN off the whole-half-period points. It is ``None`` for tabulated
    envelopes.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0 or t[0] != 0 or np.any(np.diff(t) <= 0):
        raise ValueError("times must be a strictly increasing grid starting at 0")
    if env.analytic:
        linear = env.integral(t)
        gronwall = np.expm1(linear)
    else:
        linear = np.array([bound_linear(env, x) for x in t])
        gronwall = np.array([bound_general(env, x) for x in t])

    closed = None
    if env.kind == "constant":
        closed = np.expm1(env.gamma * t)
    elif env.kind == "sinusoidal":
        closed = np.full(t.size, np.nan)
        for i, x in enumerate(t):
            if x == 0:
                closed[i] = 0.0
                continue
            try:
                closed[i] = bound_sinusoidal(env.gamma, env.omega, x)
            except ValueError:
                pass

    if np.any(linear < 0) or np.any(linear > gronwall + 1e-9):
        raise AssertionError("linear bound must lie in [0, gronwall]")
    return BoundCurve(t, linear, gronwall, closed, env.label())
