"""
Dense complex linear algebra for small quantum systems.

Everything here works on plain complex128 numpy arrays wrapped in two thin,
immutable containers: :class:`ComplexState` for state vectors and
:class:`HermitianOperator` for Hamiltonians and perturbation generators.
Exponentials are taken through the Hermitian eigendecomposition, which is
cached on the operator so repeated stepping with a fixed generator costs one
``eigh`` call.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "MAX_DIM",
    "MAX_QUBITS",
    "HERMITIAN_TOL",
    "ComplexState",
    "HermitianOperator",
    "SIGMA_Y",
    "basis_state",
    "embed_pauli_y",
    "operator_norm",
    "random_hermitian",
    "random_state",
    "unitary_step",
]

MAX_QUBITS = 12
MAX_DIM = 2 ** MAX_QUBITS
HERMITIAN_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ComplexState:
    """State vector with read-only complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError(f"amplitudes must be a non-empty vector, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: ComplexState) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense Hermitian matrix, checked at construction.

    The eigendecomposition is computed lazily and reused by
    :func:`operator_norm` and :func:`unitary_step`; propagators
    ``exp(-i A dt)`` are memoised per ``dt``.
    """

    entries: np.ndarray
    _propagators: dict = field(default_factory=dict, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"operator must be a non-empty square matrix, got shape {m.shape}")
        if m.shape[0] > MAX_DIM:
            raise ValueError(f"dimension {m.shape[0]} exceeds cap {MAX_DIM}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        asym = np.max(np.abs(m - m.conj().T))
        if asym > HERMITIAN_TOL:
            raise ValueError(f"operator is not Hermitian (max |A - A^dagger| = {asym:.3e})")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        w, v = np.linalg.eigh(self.entries)
        w.setflags(write=False)
        v.setflags(write=False)
        return w, v

    def propagator(self, dt: float) -> np.ndarray:
        """Return ``exp(-i A dt)`` as a dense unitary matrix."""
        dt = float(dt)
        with self._lock:
            u = self._propagators.get(dt)
        if u is None:
            w, v = self.eigh
            u = (v * np.exp(-1j * w * dt)) @ v.conj().T
            u.setflags(write=False)
            with self._lock:
                # bounded: a trace uses one or two distinct step sizes
                if len(self._propagators) > 16:
                    self._propagators.clear()
                self._propagators[dt] = u
        return u

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        return HermitianOperator(self.entries + other.entries)

    def __mul__(self, c: float) -> HermitianOperator:
        c = float(c)
        return HermitianOperator(c * self.entries)

    __rmul__ = __mul__

    def __matmul__(self, state: ComplexState) -> ComplexState:
        return ComplexState(self.entries @ state.amplitudes)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


SIGMA_Y = HermitianOperator(np.array([[0, -1j], [1j, 0]]))


def operator_norm(a: HermitianOperator) -> float:
    """Spectral norm of a Hermitian operator, ``max |eigenvalue|``."""
    w, _ = a.eigh
    return float(np.max(np.abs(w)))


def embed_pauli_y(n_qubits: int, target: int) -> HermitianOperator:
    """Pauli-y on qubit ``target`` (1-based, qubit 1 is the leftmost factor).

    Returns ``I ⊗ ... ⊗ σ_y ⊗ ... ⊗ I`` on ``2**n_qubits`` dimensions.
    """
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
    if not 1 <= target <= n_qubits:
        raise ValueError(f"target must be in 1..{n_qubits}, got {target}")
    left = np.eye(2 ** (target - 1))
    right = np.eye(2 ** (n_qubits - target))
    return HermitianOperator(np.kron(np.kron(left, SIGMA_Y.entries), right))


def unitary_step(a: HermitianOperator, dt: float, state: ComplexState) -> ComplexState:
    """Apply ``exp(-i A dt)`` to ``state``."""
    if not np.isfinite(dt):
        raise ValueError(f"dt must be finite, got {dt}")
    if a.dim != state.dim:
        raise ValueError(f"dimension mismatch: operator {a.dim}, state {state.dim}")
    return ComplexState(a.propagator(dt) @ state.amplitudes)


def basis_state(dim: int, index: int) -> ComplexState:
    if not 0 <= index < dim:
        raise ValueError(f"index {index} out of range for dimension {dim}")
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return ComplexState(v)


def random_hermitian(dim: int, norm: float, rng: np.random.Generator) -> HermitianOperator:
    """Random Hermitian matrix rescaled to spectral norm ``norm``.

    Real and imaginary parts are i.i.d. standard normal; the sample is
    symmetrised as ``(A + A^dagger) / 2``.
    """
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (a + a.conj().T)
    scale = np.max(np.abs(np.linalg.eigvalsh(h)))
    h = h * (norm / scale)
    # kill rounding asymmetry from the rescale
    h = 0.5 * (h + h.conj().T)
    return HermitianOperator(h)


def random_state(dim: int, rng: np.random.Generator) -> ComplexState:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return ComplexState(v / np.linalg.norm(v))
