import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qstrcmp.joint import (
    JointState,
    SupportViolation,
    apply_joint_diffusion,
    apply_joint_oracle,
    extract_first_register,
    instance_battery,
    off_support_mass,
    prepare_joint,
    run_joint_protocol,
    validate_backends,
)
from qstrcmp.protocol import ComparisonInstance, compare
from qstrcmp.statevector import DimensionMismatch


def inst(a, b):
    return ComparisonInstance.from_strings(a, b)


def nonzero(state):
    return {tuple(int(i) for i in idx) for idx in zip(*np.nonzero(np.abs(state.amps) > 1e-15))}


def flipped(before, after):
    return {idx for idx in nonzero(before) if np.isclose(after.amps[idx], -before.amps[idx])}


def all_ones(N):
    return JointState(np.full((N,) * N, N ** (-N / 2), dtype=complex))


class TestPrepare:
    def test_n2(self):
        s = prepare_joint(inst("ab", "ab"))
        assert nonzero(s) == {(0, 1), (1, 1)}
        np.testing.assert_allclose(s.amps[0, 1], 2 ** -0.5)

    def test_n4(self):
        s = prepare_joint(inst("abcd", "abcd"))
        assert nonzero(s) == {(v, 1, 2, 3) for v in range(4)}
        np.testing.assert_allclose(s.amps[:, 1, 2, 3], 0.5)

    @pytest.mark.parametrize("a", ["ab", "abcd"])
    def test_support_size(self, a):
        assert len(nonzero(prepare_joint(inst(a, a)))) == len(a)

    def test_too_large(self):
        with pytest.raises(ValueError):
            prepare_joint(inst("abcdefgh", "abcdefgh"))


class TestOracle:
    def test_equal_n2_flips_one_tuple(self):
        # all-ones state so every tuple is visible to the oracle
        s = all_ones(2)
        assert flipped(s, apply_joint_oracle(s, inst("ab", "ab"))) == {(0, 1)}

    def test_tail_mismatch_flips_nothing(self):
        s = all_ones(2)
        assert flipped(s, apply_joint_oracle(s, inst("ab", "ax"))) == set()

    def test_equal_n4(self):
        s = prepare_joint(inst("abcd", "abcd"))
        assert flipped(s, apply_joint_oracle(s, inst("abcd", "abcd"))) == {(0, 1, 2, 3)}

    def test_evaluates_actual_register_contents(self):
        # brute force over every tuple with the literal AND of f_i(r_i)
        a, b = "abca", "acba"
        s = all_ones(4)
        out = apply_joint_oracle(s, inst(a, b))
        for r in itertools.product(range(4), repeat=4):
            fires = all(b[r[i]] == a[i] for i in range(4))
            assert np.sign(out.amps[r].real) == (-1 if fires else 1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            apply_joint_oracle(prepare_joint(inst("ab", "ab")), inst("abcd", "abcd"))


class TestDiffusion:
    @pytest.mark.parametrize("a,b", [("abcd", "abcx"), ("ab", "ba"), ("abca", "abca")])
    def test_prepared_is_fixed(self, a, b):
        s = prepare_joint(inst(a, b))
        np.testing.assert_allclose(apply_joint_diffusion(s).amps, s.amps, atol=1e-15)

    def test_concentrated(self):
        amps = np.zeros((4,) * 4, dtype=complex)
        amps[0, 1, 2, 3] = 1
        out = apply_joint_diffusion(JointState(amps))
        assert out.amps[0, 1, 2, 3] == pytest.approx(-0.5)
        np.testing.assert_allclose(out.amps[1:, 1, 2, 3], 0.5)
        assert off_support_mass(out) == 0

    @settings(max_examples=50, deadline=None)
    @given(st.sampled_from([2, 4]), st.integers(0, 2**32 - 1))
    def test_unitary_on_random_states(self, N, seed):
        rng = np.random.default_rng(seed)
        v = rng.normal(size=(N,) * N) + 1j * rng.normal(size=(N,) * N)
        s = JointState(v / np.linalg.norm(v))
        assert abs(apply_joint_diffusion(s).norm_squared() - 1) <= 1e-12
        i = inst("abcd"[:N], "abcd"[:N])
        assert abs(apply_joint_oracle(s, i).norm_squared() - 1) <= 1e-12


class TestExtract:
    def test_prepared(self):
        np.testing.assert_allclose(extract_first_register(prepare_joint(inst("abcd", "abcx"))).amps, 0.5)

    def test_after_protocol(self):
        s = run_joint_protocol(inst("abcd", "abcd"), 1)
        np.testing.assert_allclose(extract_first_register(s).amps, [1, 0, 0, 0], atol=1e-12)

    def test_support_violation(self):
        amps = np.zeros((4,) * 4, dtype=complex)
        amps[0, 2, 2, 3] = 1
        with pytest.raises(SupportViolation):
            extract_first_register(JointState(amps))


def test_battery_size_and_coverage():
    b2, b4 = instance_battery(2), instance_battery(4)
    assert len(b2) + len(b4) >= 50
    kinds = set()
    for i in b2 + b4:
        a, b = "".join(i.a), "".join(i.b)
        if a == b:
            kinds.add("repeated" if len(set(a)) < len(a) else "equal")
        elif a[1:] != b[1:]:
            kinds.add("tail")
        else:
            kinds.add("head")
    assert kinds == {"equal", "repeated", "tail", "head"}


@pytest.mark.parametrize("N", [2, 4])
def test_backend_equivalence_and_passivity(N):
    for i in instance_battery(N):
        trace = []
        run_joint_protocol(i, 4, trace=trace)
        for st_ in trace:
            assert off_support_mass(st_) <= 1e-12
            assert abs(st_.norm_squared() - 1) <= 1e-12
        for k in range(5):
            np.testing.assert_allclose(
                extract_first_register(trace[2 * k]).amps, compare(i, k=k).final_state.amps, rtol=0, atol=1e-9
            )


@pytest.mark.parametrize("N", [2, 4])
def test_validate_report(N):
    rep = validate_backends(N)
    assert rep.ok and rep.passivity
    assert rep.max_deviation < 1e-9


def test_validate_rejects_n8():
    with pytest.raises(ValueError):
        validate_backends(8)
