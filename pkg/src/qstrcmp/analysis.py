"""Closed-form amplitude amplification and the claim audit.

With ``M`` of ``N`` labels marked and ``theta = asin(sqrt(M/N))``, after ``k``
Grover iterations the marked set carries ``sin^2((2k+1) theta)`` of the
probability, shared equally among the marked labels, and the rest is shared
equally among the unmarked ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .protocol import (
    ComparisonInstance,
    combine_sub_oracles,
    compare,
    default_iterations,
    prepare_combined_state,
)

CLAIM_TOL = 1e-9


def grover_angle(N: int, M: int) -> float:
    if not 0 <= M <= N:
        raise ValueError(f"marked count must be in [0, {N}], got {M}")
    return math.asin(math.sqrt(M / N))


def success_probability(N: int, M: int, k: int) -> float:
    """Total probability on the marked set after ``k`` iterations.

    ``M = 0`` has no marked set to amplify and returns 0.
    """
    if M == 0:
        return 0.0
    theta = grover_angle(N, M)
    return math.sin((2 * k + 1) * theta) ** 2


def outcome_probability(N: int, M: int, k: int, label_marked: bool) -> float:
    """Probability of reading one particular label after ``k`` iterations."""
    if M == 0:
        return 1.0 / N
    if label_marked:
        return success_probability(N, M, k) / M
    if M == N:
        raise ValueError("every label is marked; an unmarked label does not exist")
    return math.cos((2 * k + 1) * grover_angle(N, M)) ** 2 / (N - M)


def marked_count(inst: ComparisonInstance) -> int:
    return len(combine_sub_oracles(inst).marked)


def false_equal_probability(inst: ComparisonInstance, k: int) -> float:
    """P(outcome 0) for differing strings, from the closed form."""
    if inst.is_equal:
        raise ValueError("false-equal probability is only defined for differing strings")
    marked = combine_sub_oracles(inst).marked
    # 0 is marked only when b[0] == a[0] and the tail matches, i.e. a == b
    assert 0 not in marked
    return outcome_probability(inst.N, len(marked), k, label_marked=False)


def ancilla_count(N: int) -> int:
    if N < 2 or N & (N - 1):
        raise ValueError(f"N must be a power of two >= 2, got {N}")
    return (N - 1) * (N.bit_length() - 1)


@dataclass(frozen=True)
class ClaimFlag:
    name: str
    description: str
    applicable: bool
    passed: Optional[bool]
    measured: float
    threshold: Optional[float] = None


@dataclass(frozen=True)
class ClaimReport:
    a: str
    b: str
    N: int
    n: int
    equal_strings: bool
    marked_count: int
    marked: tuple[int, ...]
    theta: float
    k_used: int
    p_equal_verdict: float
    p_false_equal: Optional[float]
    p_false_unequal: Optional[float]
    ancilla_qubits: int
    claim_flags: dict = field(default_factory=dict)


def _symbols(seq) -> str:
    return "".join(str(s) for s in seq)


def audit_claims(inst: ComparisonInstance, k: Optional[int] = None) -> ClaimReport:
    """Measure the protocol on ``inst`` and score the correctness claims.

    C1  equal strings read 0 with certainty
    C2  differing strings never read 0
    C3  the oracle marks at most one label
    C4  the prepared ancilla count equals (N-1)*log2(N)
    """
    if k is None:
        k = default_iterations(inst.cfg)
    tr = compare(inst, k=k)
    M = len(tr.oracle.marked)
    p0 = tr.p_equal
    equal = inst.is_equal
    prepared = prepare_combined_state(inst).ancilla_qubits

    flags = {
        "C1": ClaimFlag(
            "C1", "equal strings measured as 0 with probability 1",
            applicable=equal,
            passed=(p0 >= 1 - CLAIM_TOL) if equal else None,
            measured=p0, threshold=1 - CLAIM_TOL,
        ),
        "C2": ClaimFlag(
            "C2", "unequal strings never measured as 0",
            applicable=not equal,
            passed=(p0 <= CLAIM_TOL) if not equal else None,
            measured=p0, threshold=CLAIM_TOL,
        ),
        "C3": ClaimFlag(
            "C3", "oracle marks a single basis state",
            applicable=True, passed=M <= 1, measured=float(M), threshold=1.0,
        ),
        "C4": ClaimFlag(
            "C4", "ancilla qubits equal (N-1)*log2(N)",
            applicable=True, passed=prepared == ancilla_count(inst.N),
            measured=float(prepared), threshold=float(ancilla_count(inst.N)),
        ),
    }
    return ClaimReport(
        a=_symbols(inst.a),
        b=_symbols(inst.b),
        N=inst.N,
        n=inst.n,
        equal_strings=equal,
        marked_count=M,
        marked=tr.oracle.marked.members,
        theta=grover_angle(inst.N, M),
        k_used=k,
        p_equal_verdict=p0,
        p_false_equal=None if equal else p0,
        p_false_unequal=tr.p_unequal if equal else None,
        ancilla_qubits=prepared,
        claim_flags=flags,
    )
