"""Clifford group enumeration, gate sampling, inverse compilation, channels."""

import numpy as np
import pytest

from rbmpo.errors import InputError
from rbmpo.noise import phase_flip
from rbmpo.quantum import (
    HADAMARD,
    I2,
    PHASE_S,
    GateSet,
    KrausChannel,
    apply_channel,
    basis_state,
    compile_undo,
    dagger,
    equal_up_to_phase,
    fix_global_phase,
    sample_sequence,
    single_qubit_cliffords,
    validate_density_matrix,
)


@pytest.fixture(scope="module")
def cliffords():
    return single_qubit_cliffords()


class TestCliffordGroup:
    def test_count_is_24(self, cliffords):
        assert len(cliffords) == 24

    def test_pairwise_distinct_up_to_phase(self, cliffords):
        gates = cliffords.gates
        for i in range(24):
            for j in range(i + 1, 24):
                assert not equal_up_to_phase(gates[i], gates[j])

    def test_exhaustive_closure(self, cliffords):
        gates = cliffords.gates
        for a in gates:
            for b in gates:
                prod = a @ b
                assert any(equal_up_to_phase(prod, g, tol=1e-10) for g in gates)

    def test_inverses_present(self, cliffords):
        for g in cliffords.gates:
            assert any(equal_up_to_phase(dagger(g), h) for h in cliffords.gates)

    def test_contains_generators(self, cliffords):
        for target in (I2, HADAMARD, PHASE_S):
            assert any(equal_up_to_phase(target, g) for g in cliffords.gates)

    def test_flagged_as_two_design(self, cliffords):
        assert cliffords.is_two_design


class TestSampling:
    def test_singleton_set(self):
        gs = GateSet(gates=(HADAMARD,), label="h_only")
        rng = np.random.default_rng(0)
        seq = sample_sequence(gs, 5, rng)
        assert len(seq) == 5
        assert all(np.array_equal(g, HADAMARD) for g in seq)

    def test_seeded_determinism(self, cliffords):
        a = sample_sequence(cliffords, 50, np.random.default_rng(123))
        b = sample_sequence(cliffords, 50, np.random.default_rng(123))
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_uniform_frequencies(self, cliffords):
        rng = np.random.default_rng(1)
        draws = 24000
        seq = sample_sequence(cliffords, draws, rng)
        keys = [tuple(np.round(g.ravel(), 8)) for g in cliffords.gates]
        index = {k: i for i, k in enumerate(keys)}
        counts = np.zeros(24)
        for g in seq:
            counts[index[tuple(np.round(g.ravel(), 8))]] += 1
        p = 1.0 / 24.0
        sigma = np.sqrt(draws * p * (1 - p))
        assert np.all(np.abs(counts - draws * p) <= 5 * sigma)

    def test_errors(self, cliffords):
        with pytest.raises(InputError):
            sample_sequence(cliffords, 0, np.random.default_rng(0))


class TestCompileUndo:
    def test_hadamard_self_inverse(self):
        assert np.linalg.norm(compile_undo([HADAMARD]) - HADAMARD) < 1e-12

    def test_two_gate_sequence(self):
        undo = compile_undo([PHASE_S, HADAMARD])
        assert np.linalg.norm(undo - dagger(HADAMARD @ PHASE_S)) < 1e-12

    def test_random_sequence_inverts_to_phase(self, cliffords):
        rng = np.random.default_rng(2)
        gates = sample_sequence(cliffords, 10, rng)
        undo = compile_undo(gates)
        prod = np.eye(2, dtype=complex)
        for g in gates:
            prod = g @ prod
        total = undo @ prod
        phase = total[0, 0]
        assert abs(abs(phase) - 1) < 1e-10
        assert np.linalg.norm(total - phase * np.eye(2)) < 1e-10

    def test_channel_level_identity(self, cliffords):
        # immune to the global phase: the composed map acts as identity on states
        rng = np.random.default_rng(3)
        gates = sample_sequence(cliffords, 6, rng)
        undo = compile_undo(gates)
        z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        rho = z @ dagger(z)
        rho /= np.trace(rho)
        out = rho
        for g in list(gates) + [undo]:
            out = g @ out @ dagger(g)
        assert np.linalg.norm(out - rho) < 1e-10

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            compile_undo([])


class TestApplyChannel:
    def test_identity_channel(self):
        ch = KrausChannel((np.eye(2, dtype=complex),))
        rho = basis_state(0, 2)
        assert np.array_equal(apply_channel(ch, rho), rho)

    def test_phase_flip_scales_coherence(self):
        p = 0.06
        ch = phase_flip(p).channel
        plus = np.full((2, 2), 0.5, dtype=complex)
        out = apply_channel(ch, plus)
        # independent 2x2 arithmetic: off-diagonals scale by 1 - 2p
        assert abs(out[0, 1] - 0.5 * (1 - 2 * p)) < 1e-14
        assert abs(out[0, 0] - 0.5) < 1e-14

    @pytest.mark.parametrize("seed", range(3))
    def test_preserves_state_validity(self, seed):
        rng = np.random.default_rng(600 + seed)
        z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        rho = z @ dagger(z)
        rho /= np.trace(rho)
        out = apply_channel(phase_flip(0.3).channel, rho)
        validate_density_matrix(out)
        assert abs(np.trace(out) - 1) < 1e-12

    def test_kraus_completeness_enforced(self):
        with pytest.raises(InputError):
            KrausChannel((0.5 * np.eye(2, dtype=complex),))


def test_fix_global_phase_is_canonical():
    rng = np.random.default_rng(4)
    u = single_qubit_cliffords().gates[7]
    phased = np.exp(1j * rng.uniform(0, 2 * np.pi)) * u
    assert np.linalg.norm(fix_global_phase(phased) - fix_global_phase(u)) < 1e-12
