"""String comparison by Grover amplification.

Two strings of length ``N = 2**n`` are compiled into ``N`` per-position
sub-oracles. Sub-oracle ``i`` answers "does the subject symbol at label ``v``
equal the pattern symbol at position ``i``?". The first register is prepared
in uniform superposition while registers ``1..N-1`` hold the fixed labels
``1..N-1``, so only the first register's label varies and the AND of all
sub-oracles reduces to a marked set over ``[0, N)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .statevector import (
    MarkedSet,
    RegisterConfig,
    StateVector,
    grover_iterate,
    measurement_distribution,
    sample_measurement,
    uniform_state,
)

DEFAULT_PAD = "\x00"


class Verdict(str, enum.Enum):
    EQUAL = "EQUAL"
    UNEQUAL = "UNEQUAL"


class Mode(str, enum.Enum):
    EXACT = "exact"
    SAMPLE = "sample"


def _next_pow2(length: int) -> int:
    return 1 << max(length - 1, 0).bit_length()


def _free_pad_symbol(alphabet: frozenset) -> str:
    code = ord(DEFAULT_PAD)
    while chr(code) in alphabet:
        code += 1
    return chr(code)


@dataclass(frozen=True)
class ComparisonInstance:
    """Pattern ``a`` and subject ``b``, already padded to a power-of-two length."""

    a: tuple
    b: tuple
    cfg: RegisterConfig
    alphabet: frozenset
    original_length: int = 0
    pad_symbol: Optional[str] = None

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError(f"string lengths differ: {len(self.a)} != {len(self.b)}")
        if len(self.a) != self.cfg.N:
            raise ValueError(f"string length {len(self.a)} does not match register dimension {self.cfg.N}")
        if not self.original_length:
            object.__setattr__(self, "original_length", len(self.a))

    @property
    def N(self) -> int:
        return self.cfg.N

    @property
    def n(self) -> int:
        return self.cfg.n

    @property
    def is_equal(self) -> bool:
        return self.a == self.b

    @classmethod
    def from_strings(cls, a: Sequence, b: Sequence, pad: Optional[str] = None) -> "ComparisonInstance":
        """Build an instance, right-padding both strings to the next power of two.

        Unequal lengths are only accepted when an explicit ``pad`` symbol is
        given. The pad symbol must not occur in either string; by default the
        lowest code point at or above NUL that is absent from both strings is used.
        """
        a, b = tuple(a), tuple(b)
        if not a or not b:
            raise ValueError("strings must be nonempty")
        if len(a) != len(b) and pad is None:
            raise ValueError(
                f"string lengths differ ({len(a)} != {len(b)}); pass a pad symbol to pad both"
            )
        alphabet = frozenset(a) | frozenset(b)
        if pad is None:
            pad = _free_pad_symbol(alphabet)
        elif pad in alphabet:
            raise ValueError(f"pad symbol {pad!r} occurs in the input strings")
        length = max(len(a), len(b))
        N = _next_pow2(length)
        if N < 2:
            raise ValueError("strings of length 1 give a zero-qubit register; minimum length is 2")
        padded_a = a + (pad,) * (N - len(a))
        padded_b = b + (pad,) * (N - len(b))
        used_pad = pad if N != len(a) or N != len(b) else None
        return cls(
            padded_a,
            padded_b,
            RegisterConfig.from_dim(N),
            frozenset(padded_a) | frozenset(padded_b),
            original_length=length,
            pad_symbol=used_pad,
        )


@dataclass(frozen=True, eq=False)
class OracleSpec:
    """Sub-oracle truth tables (built on demand) and the derived marked set."""

    instance: ComparisonInstance
    marked: MarkedSet

    def table(self, i: int) -> np.ndarray:
        return build_sub_oracle(self.instance, i)

    @property
    def tables(self) -> np.ndarray:
        """All N tables as an (N, N) array; O(N^2) memory, meant for small N."""
        return np.stack([self.table(i) for i in range(self.instance.N)])


@dataclass(frozen=True)
class CombinedInputState:
    first: StateVector
    ancilla_labels: tuple[int, ...]
    ancilla_qubits: int


@dataclass(frozen=True, eq=False)
class ComparisonTranscript:
    instance: ComparisonInstance
    oracle: OracleSpec
    iterations: int
    mode: Mode
    seed: Optional[int]
    final_state: StateVector
    final_distribution: np.ndarray
    measured: Optional[int]
    verdict: Verdict
    verdict_probabilities: dict

    @property
    def p_equal(self) -> float:
        return self.verdict_probabilities[Verdict.EQUAL]

    @property
    def p_unequal(self) -> float:
        return self.verdict_probabilities[Verdict.UNEQUAL]


def build_sub_oracle(inst: ComparisonInstance, i: int) -> np.ndarray:
    """Truth table of sub-oracle ``i``: entry ``v`` is 1 iff ``b[v] == a[i]``."""
    if not 0 <= i < inst.N:
        raise IndexError(f"position {i} out of range [0, {inst.N})")
    target = inst.a[i]
    return np.fromiter((sym == target for sym in inst.b), dtype=np.uint8, count=inst.N)


def combine_sub_oracles(inst: ComparisonInstance) -> OracleSpec:
    # register i >= 1 holds label i, so sub-oracle i is only evaluated at v = i
    tail_ok = all(inst.b[i] == inst.a[i] for i in range(1, inst.N))
    members = np.flatnonzero(build_sub_oracle(inst, 0)) if tail_ok else ()
    return OracleSpec(inst, MarkedSet.of(inst.N, members))


def prepare_combined_state(inst: ComparisonInstance) -> CombinedInputState:
    N, n = inst.N, inst.n
    return CombinedInputState(
        first=uniform_state(inst.cfg),
        ancilla_labels=tuple(range(1, N)),
        ancilla_qubits=(N - 1) * n,
    )


def default_iterations(cfg: RegisterConfig) -> int:
    """Optimal Grover count for a single marked state, ``floor(pi/4 * sqrt(N))``."""
    return max(1, math.floor(math.pi / 4 * math.sqrt(cfg.N)))


def compare(
    inst: ComparisonInstance,
    k: Optional[int] = None,
    mode: Mode | str = Mode.EXACT,
    seed: int = 0,
) -> ComparisonTranscript:
    """Run the full protocol and decide EQUAL iff the first register reads 0.

    In exact mode the verdict is the more likely outcome (EQUAL only when its
    probability strictly exceeds 1/2). In sample mode one measurement is drawn
    with ``seed`` and the verdict follows it.
    """
    mode = Mode(mode)
    if k is None:
        k = default_iterations(inst.cfg)
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    oracle = combine_sub_oracles(inst)
    start = prepare_combined_state(inst).first
    final = grover_iterate(start, oracle.marked, k)
    dist = measurement_distribution(final)
    p_equal = float(dist[0])
    probs = {Verdict.EQUAL: p_equal, Verdict.UNEQUAL: float(np.sum(dist[1:]))}
    measured = None
    if mode is Mode.SAMPLE:
        measured = sample_measurement(final, seed)
        verdict = Verdict.EQUAL if measured == 0 else Verdict.UNEQUAL
    else:
        verdict = Verdict.EQUAL if p_equal > 0.5 else Verdict.UNEQUAL
    return ComparisonTranscript(
        instance=inst,
        oracle=oracle,
        iterations=k,
        mode=mode,
        seed=seed if mode is Mode.SAMPLE else None,
        final_state=final,
        final_distribution=dist,
        measured=measured,
        verdict=verdict,
        verdict_probabilities=probs,
    )
