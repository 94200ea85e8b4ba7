"""Brute-force simulation over all N registers.

Each register is an N-level qudit and the joint amplitude array has shape
``(N,) * N``: axis 0 is the searched register, axes 1..N-1 the ancillas.
The oracle evaluates every sub-oracle on the actual content of its register,
so nothing about the ancilla labels is assumed. This backend exists only to
cross-check the reduced single-register backend and is capped at N = 4.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .protocol import ComparisonInstance, build_sub_oracle, compare
from .statevector import DimensionMismatch, StateVector

MAX_JOINT_N = 4
SUPPORT_TOL = 1e-12


class SupportViolation(RuntimeError):
    """Amplitude found on an ancilla tuple other than (1, ..., N-1)."""


@dataclass(frozen=True, eq=False)
class JointState:
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128)
        N = amps.shape[0]
        if amps.shape != (N,) * N:
            raise ValueError(f"joint amplitudes must have shape (N,)*N, got {amps.shape}")
        if not 2 <= N <= MAX_JOINT_N:
            raise ValueError(f"joint simulation supports N in [2, {MAX_JOINT_N}], got {N}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def n_registers(self) -> int:
        return self.amps.ndim

    @property
    def register_dim(self) -> int:
        return self.amps.shape[0]

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


def ancilla_tuple(N: int) -> tuple[int, ...]:
    return tuple(range(1, N))


def _check_n(N: int):
    if N not in (2, 4):
        raise ValueError(f"joint simulation requires N in {{2, 4}}, got {N}")


def prepare_joint(inst: ComparisonInstance) -> JointState:
    N = inst.N
    _check_n(N)
    amps = np.zeros((N,) * N, dtype=np.complex128)
    amps[(slice(None),) + ancilla_tuple(N)] = 1.0 / np.sqrt(N)
    return JointState(amps)


def joint_oracle_mask(inst: ComparisonInstance) -> np.ndarray:
    """Boolean array over the joint basis: AND over i of f_i(r_i)."""
    N = inst.N
    mask = np.ones((N,) * N, dtype=bool)
    for i in range(N):
        shape = [1] * N
        shape[i] = N
        mask &= build_sub_oracle(inst, i).astype(bool).reshape(shape)
    return mask


def apply_joint_oracle(state: JointState, inst: ComparisonInstance) -> JointState:
    if state.register_dim != inst.N:
        raise DimensionMismatch(
            f"joint state has register dimension {state.register_dim}, instance has N={inst.N}"
        )
    return JointState(np.where(joint_oracle_mask(inst), -state.amps, state.amps))


def apply_joint_diffusion(state: JointState) -> JointState:
    """(2|u><u| - I) on register 0, identity on the ancilla registers."""
    amps = state.amps
    mean = np.sum(amps, axis=0, keepdims=True) / state.register_dim
    return JointState(2.0 * mean - amps)


def off_support_mass(state: JointState) -> float:
    """Probability mass on ancilla tuples other than (1, ..., N-1)."""
    rest = state.amps.copy()
    rest[(slice(None),) + ancilla_tuple(state.register_dim)] = 0.0
    return float(np.sum(np.abs(rest) ** 2))


def extract_first_register(state: JointState) -> StateVector:
    N = state.register_dim
    support = (slice(None),) + ancilla_tuple(N)
    rest = state.amps.copy()
    rest[support] = 0.0
    worst = float(np.max(np.abs(rest)))
    if worst > SUPPORT_TOL:
        bad = np.unravel_index(int(np.argmax(np.abs(rest))), rest.shape)
        raise SupportViolation(
            f"amplitude {worst:.3e} on joint tuple {tuple(int(x) for x in bad)}; "
            "ancilla registers left their fixed labels"
        )
    return StateVector(state.amps[support])


def run_joint_protocol(
    inst: ComparisonInstance, k: int, trace: Optional[list] = None
) -> JointState:
    """Prepare, then apply ``k`` rounds of joint oracle followed by joint diffusion.

    If ``trace`` is a list, every intermediate state is appended to it.
    """
    state = prepare_joint(inst)
    if trace is not None:
        trace.append(state)
    for _ in range(k):
        state = apply_joint_oracle(state, inst)
        if trace is not None:
            trace.append(state)
        state = apply_joint_diffusion(state)
        if trace is not None:
            trace.append(state)
    return state


_BATTERY_BASES = {
    2: ("ab", "aa", "ba"),
    4: ("abcd", "abca", "aaaa", "abab", "aabb", "dcba", "abcc", "baaa"),
}


def instance_battery(N: int) -> list[ComparisonInstance]:
    """Fixed set of instances: equal, head/tail mismatch, repeated symbols.

    For every base string ``a`` the subjects are ``a`` itself, ``a`` with one
    position replaced by a fresh symbol, ``a`` with position 0 replaced by each
    other symbol of ``a``, and the reversal of ``a``.
    """
    _check_n(N)
    out, seen = [], set()
    for a in _BATTERY_BASES[N]:
        subjects = [a, a[::-1]]
        subjects += [a[:i] + "x" + a[i + 1:] for i in range(N)]
        subjects += [s + a[1:] for s in sorted(set(a)) if s != a[0]]
        for b in subjects:
            if (a, b) not in seen:
                seen.add((a, b))
                out.append(ComparisonInstance.from_strings(a, b))
    return out


@dataclass(frozen=True)
class ValidationReport:
    N: int
    instances: int
    max_iterations: int
    max_deviation: float
    max_off_support_mass: float
    max_norm_drift: float

    @property
    def passivity(self) -> bool:
        return self.max_off_support_mass < SUPPORT_TOL

    @property
    def ok(self) -> bool:
        return self.max_deviation < 1e-9 and self.passivity


def validate_backends(N: int, max_iterations: int = 4) -> ValidationReport:
    """Compare reduced and joint backends on the battery for k = 0..max_iterations."""
    battery = instance_battery(N)
    dev = off = drift = 0.0
    for inst in battery:
        trace: list = []
        run_joint_protocol(inst, max_iterations, trace=trace)
        for st in trace:
            off = max(off, off_support_mass(st))
            drift = max(drift, abs(st.norm_squared() - 1.0))
        # trace holds prepare, then (oracle, diffusion) pairs; index 2k is after k rounds
        for k in range(max_iterations + 1):
            reduced = compare(inst, k=k).final_state.amps
            full = extract_first_register(trace[2 * k]).amps
            dev = max(dev, float(np.max(np.abs(reduced - full))))
    return ValidationReport(N, len(battery), max_iterations, dev, off, drift)
