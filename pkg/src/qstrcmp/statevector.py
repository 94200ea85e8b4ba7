"""Single-register state-vector kernel.

Amplitudes live in a contiguous complex128 array indexed by basis label.
Every operation is pure: inputs are never mutated and a new
:class:`StateVector` is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

MAX_QUBITS = 20
NORM_TOL = 1e-12


class DimensionMismatch(ValueError):
    """Raised when two objects refer to registers of different sizes."""


@dataclass(frozen=True)
class RegisterConfig:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise TypeError(f"qubit count must be an integer, got {self.n!r}")
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {self.n}")

    @property
    def N(self) -> int:
        return 1 << int(self.n)

    @classmethod
    def from_dim(cls, dim: int) -> "RegisterConfig":
        """Config for a register of basis dimension ``dim`` (a power of two)."""
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"dimension must be a power of two >= 2, got {dim}")
        return cls(dim.bit_length() - 1)


@dataclass(frozen=True, eq=False)
class StateVector:
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)


@dataclass(frozen=True)
class MarkedSet:
    dim: int
    members: tuple[int, ...] = field(default=())

    def __post_init__(self):
        members = tuple(sorted({int(m) for m in self.members}))
        if members and (members[0] < 0 or members[-1] >= self.dim):
            raise ValueError(f"marked indices must lie in [0, {self.dim})")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, dim: int, members: Iterable[int] = ()) -> "MarkedSet":
        return cls(dim, tuple(members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members

    def __iter__(self):
        return iter(self.members)


def uniform_state(cfg: RegisterConfig) -> StateVector:
    N = cfg.N
    return StateVector(np.full(N, 1.0 / np.sqrt(N), dtype=np.complex128))


def apply_phase_flip(state: StateVector, marked: MarkedSet) -> StateVector:
    if state.dim != marked.dim:
        raise DimensionMismatch(
            f"state has dimension {state.dim} but marked set has dimension {marked.dim}"
        )
    amps = state.amps.copy()
    if marked.members:
        idx = np.fromiter(marked.members, dtype=np.intp, count=len(marked))
        amps[idx] = -amps[idx]
    return StateVector(amps)


def apply_diffusion(state: StateVector) -> StateVector:
    """Reflect about the uniform superposition: ``a[x] -> 2*mean(a) - a[x]``."""
    # np.sum uses pairwise summation with a fixed order, so the mean is bit-stable
    mean = np.sum(state.amps) / state.dim
    return StateVector(2.0 * mean - state.amps)


def grover_iterate(state: StateVector, marked: MarkedSet, k: int) -> StateVector:
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    if state.dim != marked.dim:
        raise DimensionMismatch(
            f"state has dimension {state.dim} but marked set has dimension {marked.dim}"
        )
    for _ in range(k):
        state = apply_diffusion(apply_phase_flip(state, marked))
    return state


def measurement_distribution(state: StateVector) -> np.ndarray:
    return state.amps.real ** 2 + state.amps.imag ** 2


def _uniform_double(seed: int) -> float:
    # First 64-bit output of PCG64 (numpy's bit-stream is version-stable), top 53 bits.
    raw = np.random.PCG64(seed).random_raw()
    return float(int(raw) >> 11) * 2.0 ** -53


def sample_from_distribution(probs: np.ndarray, u: float) -> int:
    """Invert the cumulative distribution at ``u`` in [0, 1).

    Returns the lowest index whose cumulative mass exceeds ``u``; outcomes
    with zero probability are never returned.
    """
    cdf = np.cumsum(probs)
    idx = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
    if idx >= len(probs):
        idx = int(np.flatnonzero(probs)[-1])
    return idx


def sample_measurement(state: StateVector, seed: int) -> int:
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return sample_from_distribution(measurement_distribution(state), _uniform_double(seed))


def sample_many(state: StateVector, seed: int, shots: int) -> np.ndarray:
    """Draw ``shots`` outcomes from one PCG64 stream seeded by ``seed``."""
    raw = np.random.PCG64(seed).random_raw(shots).astype(np.uint64)
    u = (raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    probs = measurement_distribution(state)
    cdf = np.cumsum(probs)
    idx = np.searchsorted(cdf, u * cdf[-1], side="right")
    return np.minimum(idx, np.flatnonzero(probs)[-1])
