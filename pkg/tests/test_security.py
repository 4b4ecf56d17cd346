import numpy as np
import pytest

from qwpkc.protocol import (
    SecretKey,
    WalkConfig,
    encrypt,
    generate_public_key,
    sample_secret_key,
)
from qwpkc.security import (
    EavesdropperTable,
    KeyDistribution,
    SecurityReport,
    candidate_message,
    check_density_matrix,
    cipher_density,
    exhaustive_eavesdropper,
    holevo_report,
    public_key_density,
    public_key_density_full,
    shannon_entropy_secret_key,
    von_neumann_entropy,
)
from qwpkc.walk import (
    COIN_LEFT,
    COIN_RIGHT,
    CoinParams,
    QuantumState,
    apply_translation,
    build_coin,
)


def dense_step_matrix(n_positions, coin):
    dim = 2 * n_positions
    shift = np.zeros((dim, dim), dtype=complex)
    for i in range(n_positions):
        shift[2 * ((i + 1) % n_positions) + COIN_RIGHT, 2 * i + COIN_RIGHT] = 1.0
        shift[2 * ((i - 1) % n_positions) + COIN_LEFT, 2 * i + COIN_LEFT] = 1.0
    return shift @ np.kron(np.eye(n_positions), coin)


def dense_translation_matrix(n_positions, shift_by):
    dim = 2 * n_positions
    matrix = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        basis = np.zeros(dim, dtype=complex)
        basis[j] = 1.0
        moved = apply_translation(QuantumState(n_positions, basis), shift_by)
        matrix[:, j] = moved.amplitudes
    return matrix


class TestCheckDensityMatrix:
    def test_accepts_maximally_mixed(self):
        check_density_matrix(np.eye(8) / 8)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            check_density_matrix(np.ones((2, 3)))

    def test_rejects_non_hermitian(self):
        rho = np.eye(4) / 4
        rho[0, 1] = 0.1
        with pytest.raises(ValueError, match="Hermitian"):
            check_density_matrix(rho)

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValueError, match="trace"):
            check_density_matrix(np.eye(4) / 2)

    def test_rejects_negative_eigenvalue(self):
        rho = np.diag([1.5, -0.5]).astype(complex)
        with pytest.raises(ValueError, match="negative"):
            check_density_matrix(rho)


class TestPublicKeyDensity:
    @pytest.mark.parametrize("coin_index", [1, 2, 3, 4])
    @pytest.mark.parametrize("steps", [0, 1, 3])
    def test_power_of_two_circle_is_maximally_mixed(self, coin_index, steps):
        cfg = WalkConfig(2, coin_divisor=4, t_min=1, t_max=4)
        rho = public_key_density(cfg, coin_index, steps)
        assert np.abs(rho - np.eye(8) / 8).max() <= 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_other_sizes_stay_maximally_mixed(self, n):
        cfg = WalkConfig(n, coin_divisor=4, t_min=1, t_max=4)
        dim = 2 * 2**n
        rho = public_key_density(cfg, 1, 3)
        assert np.abs(rho - np.eye(dim) / dim).max() <= 1e-12

    def test_valid_density_matrix(self):
        cfg = WalkConfig(3, coin_divisor=5, t_min=1, t_max=4)
        check_density_matrix(public_key_density(cfg, 2, 4))

    def test_oversized_circle_rejected(self):
        with pytest.raises(ValueError, match="dense"):
            public_key_density(WalkConfig(7), 1, 1)

    def test_negative_steps_rejected(self):
        with pytest.raises(ValueError):
            public_key_density(WalkConfig(2), 1, -1)

    def test_matches_dense_ensemble_oracle(self):
        # on a circle larger than the message space the ensemble is a proper
        # subspace projector pushed through the walk, not the identity
        cfg = WalkConfig(1, circle_size=6, coin_divisor=3, t_min=1, t_max=2)
        coin = build_coin(CoinParams.from_index(1, 3))
        step = dense_step_matrix(6, coin)
        walk = np.linalg.matrix_power(step, 2)
        projector = np.zeros((12, 12), dtype=complex)
        projector[0, 0] = projector[1, 1] = projector[2, 2] = projector[3, 3] = 0.25
        expected = walk @ projector @ walk.conj().T
        rho = public_key_density(cfg, 1, 2)
        assert np.abs(rho - expected).max() <= 1e-12
        assert np.abs(rho - np.eye(12) / 12).max() > 0.01

    def test_full_key_space_average(self):
        cfg = WalkConfig(2, coin_divisor=3, t_min=1, t_max=2)
        total = np.zeros((8, 8), dtype=complex)
        for coin_index in (1, 2, 3):
            for steps in (1, 2):
                total += public_key_density(cfg, coin_index, steps)
        assert np.abs(public_key_density_full(cfg) - total / 6).max() <= 1e-14

    def test_full_average_on_power_of_two_circle(self):
        cfg = WalkConfig(2, coin_divisor=2, t_min=1, t_max=3)
        assert np.abs(public_key_density_full(cfg) - np.eye(8) / 8).max() <= 1e-12


class TestCipherDensity:
    def test_message_zero_equals_public_key(self):
        cfg = WalkConfig(2, coin_divisor=4, t_min=1, t_max=4)
        rho_pk = public_key_density(cfg, 3, 2)
        assert np.array_equal(cipher_density(cfg, 0, 3, 2), rho_pk)

    def test_message_independent_on_power_of_two_circle(self):
        cfg = WalkConfig(3, coin_divisor=4, t_min=1, t_max=4)
        base = cipher_density(cfg, 0, 1, 3)
        for message in range(1, 8):
            assert np.abs(cipher_density(cfg, message, 1, 3) - base).max() <= 1e-12

    def test_matches_conjugation_oracle(self):
        cfg = WalkConfig(1, circle_size=6, coin_divisor=3, t_min=1, t_max=2)
        rho = public_key_density(cfg, 2, 1)
        translation = dense_translation_matrix(6, 1)
        expected = translation @ rho @ translation.conj().T
        assert np.abs(cipher_density(cfg, 1, 2, 1) - expected).max() <= 1e-12

    def test_message_out_of_range(self):
        cfg = WalkConfig(2)
        with pytest.raises(ValueError):
            cipher_density(cfg, 4, 1, 1)


class TestVonNeumannEntropy:
    def test_pure_state_zero(self):
        amps = np.zeros(8, dtype=complex)
        amps[3] = 1.0
        rho = np.outer(amps, amps.conj())
        assert abs(von_neumann_entropy(rho)) <= 1e-9

    def test_maximally_mixed_sixteen(self):
        assert abs(von_neumann_entropy(np.eye(16) / 16) - 4.0) <= 1e-9

    def test_two_level_mixture(self):
        rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        assert abs(von_neumann_entropy(rho) - 1.0) <= 1e-9

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            von_neumann_entropy(np.diag([1.5, -0.5]).astype(complex))

    def test_tiny_negative_noise_tolerated(self):
        rho = np.diag([1.0, -1e-13]).astype(complex)
        assert abs(von_neumann_entropy(rho)) <= 1e-9


class TestShannonEntropy:
    def test_minimal_configuration(self):
        cfg = WalkConfig(0, circle_size=2, coin_divisor=1, t_min=1, t_max=1)
        assert shannon_entropy_secret_key(cfg) == 1.0

    def test_reference_configuration(self):
        cfg = WalkConfig(3, coin_divisor=4, t_min=2, t_max=5)
        assert shannon_entropy_secret_key(cfg) == 8.0

    @pytest.mark.parametrize("n,divisor,t_min,t_max", [(2, 3, 1, 5), (4, 7, 2, 9)])
    def test_closed_form(self, n, divisor, t_min, t_max):
        cfg = WalkConfig(n, coin_divisor=divisor, t_min=t_min, t_max=t_max)
        expected = np.log2(divisor * (t_max - t_min + 1)) + (n + 1)
        assert shannon_entropy_secret_key(cfg) == expected

    def test_against_elementwise_sum(self):
        # brute-force oracle: -sum p log2 p over the explicit product
        # distribution must agree with the closed form
        cfg = WalkConfig(3, coin_divisor=5, t_min=2, t_max=7)
        dist = KeyDistribution.uniform(cfg)
        total = 0.0
        for p_coin in dist.coin_probs:
            for p_steps in dist.step_probs:
                for p_init in dist.initial_probs:
                    p = p_coin * p_steps * p_init
                    total -= p * np.log2(p)
        assert abs(shannon_entropy_secret_key(cfg) - total) <= 1e-9


class TestKeyDistribution:
    def test_uniform_components_sum_to_one(self):
        dist = KeyDistribution.uniform(WalkConfig(3, coin_divisor=4, t_min=2, t_max=5))
        assert abs(dist.coin_probs.sum() - 1.0) <= 1e-12
        assert abs(dist.step_probs.sum() - 1.0) <= 1e-12
        assert abs(dist.initial_probs.sum() - 1.0) <= 1e-12

    def test_key_probability_is_product(self):
        dist = KeyDistribution.uniform(WalkConfig(2, coin_divisor=3, t_min=1, t_max=2))
        assert dist.key_prob == pytest.approx(1 / (3 * 2 * 8), abs=1e-15)
        assert dist.key_prob == pytest.approx(
            dist.coin_probs[0] * dist.step_probs[0] * dist.initial_probs[0], abs=1e-15
        )


class TestHolevoReport:
    def test_reference_configuration(self):
        cfg = WalkConfig(3, coin_divisor=4, t_min=2, t_max=5)
        report = holevo_report(cfg)
        assert abs(report.von_neumann_entropy_bits - 4.0) <= 1e-9
        assert report.shannon_entropy_bits == 8.0
        assert report.holevo_bound_bits == report.von_neumann_entropy_bits
        assert abs(report.holevo_gap_bits - 4.0) <= 1e-9
        assert report.consistent_key_count is None

    def test_degenerate_key_space_zero_gap(self):
        cfg = WalkConfig(2, coin_divisor=1, t_min=1, t_max=1)
        report = holevo_report(cfg)
        assert abs(report.holevo_gap_bits) <= 1e-9
        assert abs(report.von_neumann_entropy_bits - 3.0) <= 1e-9

    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("divisor,t_count", [(1, 2), (2, 1), (4, 4), (8, 3)])
    def test_gap_tracks_walk_and_step_choices(self, n, divisor, t_count):
        cfg = WalkConfig(n, coin_divisor=divisor, t_min=1, t_max=t_count)
        report = holevo_report(cfg)
        assert abs(report.holevo_gap_bits - np.log2(divisor * t_count)) <= 1e-9

    def test_explicit_walk_choice(self):
        cfg = WalkConfig(2, coin_divisor=4, t_min=1, t_max=3)
        for coin_index in (1, 2, 3, 4):
            for steps in (1, 2, 3):
                report = holevo_report(cfg, coin_index=coin_index, steps=steps)
                assert abs(report.von_neumann_entropy_bits - 3.0) <= 1e-9

    def test_as_dict_fields(self):
        report = SecurityReport(3.0, 5.0, 3.0, 2.0)
        payload = report.as_dict()
        assert set(payload) == {
            "von_neumann_entropy_bits",
            "shannon_entropy_bits",
            "holevo_bound_bits",
            "holevo_gap_bits",
            "consistent_key_count",
        }
        assert payload["consistent_key_count"] is None


class TestCandidateMessage:
    def test_honest_key_recovers_message(self):
        cfg = WalkConfig(3, coin_divisor=4, t_min=2, t_max=5)
        rng = np.random.default_rng(8)
        for _ in range(20):
            key = sample_secret_key(cfg, rng)
            message = int(rng.integers(8))
            cipher = encrypt(generate_public_key(key, cfg), message)
            assert candidate_message(cipher, cfg, key) == message

    def test_shifted_key_shifts_message(self):
        # a candidate with start position l - delta reads message m + delta
        cfg = WalkConfig(3, coin_divisor=4, t_min=2, t_max=5)
        rng = np.random.default_rng(13)
        for _ in range(20):
            key = sample_secret_key(cfg, rng)
            message = int(rng.integers(8))
            delta = int(rng.integers(1, 8))
            cipher = encrypt(generate_public_key(key, cfg), message)
            shifted = SecretKey(
                key.coin_index,
                key.steps,
                (key.start_position - delta) % 8,
                key.start_coin,
            )
            assert candidate_message(cipher, cfg, shifted) == (message + delta) % 8

    def test_branching_wrong_coin_is_ambiguous(self):
        cfg = WalkConfig(3, coin_divisor=8, t_min=3, t_max=5)
        honest = SecretKey(coin_index=8, steps=3, start_position=2, start_coin="R")
        cipher = encrypt(generate_public_key(honest, cfg), 1)
        wrong = SecretKey(coin_index=1, steps=3, start_position=2, start_coin="R")
        assert candidate_message(cipher, cfg, wrong) is None


class TestExhaustiveEavesdropper:
    def test_degenerate_family_uniform_counts(self):
        # d = 1, |T| = 1, n = 2: eight keys, every message claimed twice
        cfg = WalkConfig(2, coin_divisor=1, t_min=1, t_max=1)
        key = SecretKey(1, 1, 3, "L")
        cipher = encrypt(generate_public_key(key, cfg), 2)
        table = exhaustive_eavesdropper(cipher, cfg)
        assert table.total_keys == 8
        assert table.ambiguous == 0
        assert table.message_counts == {0: 2, 1: 2, 2: 2, 3: 2}

    def test_counts_uniform_across_messages(self):
        rng = np.random.default_rng(17)
        for n, divisor, t_max in ((2, 2, 2), (2, 4, 3), (3, 4, 2)):
            cfg = WalkConfig(n, coin_divisor=divisor, t_min=1, t_max=t_max)
            key = sample_secret_key(cfg, rng)
            message = int(rng.integers(2**n))
            cipher = encrypt(generate_public_key(key, cfg), message)
            table = exhaustive_eavesdropper(cipher, cfg)
            values = set(table.message_counts.values())
            assert len(values) == 1
            assert min(values) > 0

    def test_partition_with_ambiguous_keys(self):
        # a d = 3 family mixes branching coins with the identity coin, so
        # some candidates are excluded but the tally still partitions
        cfg = WalkConfig(2, coin_divisor=3, t_min=1, t_max=2)
        key = SecretKey(3, 1, 0, "R")
        cipher = encrypt(generate_public_key(key, cfg), 3)
        table = exhaustive_eavesdropper(cipher, cfg)
        assert table.total_keys == 3 * 2 * 4 * 2
        assert table.ambiguous > 0
        assert sum(table.message_counts.values()) + table.ambiguous == table.total_keys

    def test_true_message_always_claimed(self):
        rng = np.random.default_rng(23)
        cfg = WalkConfig(3, coin_divisor=6, t_min=1, t_max=3)
        key = sample_secret_key(cfg, rng)
        message = 5
        cipher = encrypt(generate_public_key(key, cfg), message)
        table = exhaustive_eavesdropper(cipher, cfg)
        assert table.message_counts[message] > 0

    def test_enumeration_caps(self):
        state = QuantumState.basis(4, 0, COIN_RIGHT)
        with pytest.raises(ValueError, match="cap"):
            exhaustive_eavesdropper(
                state, WalkConfig(2, coin_divisor=17, t_min=1, t_max=1)
            )
        with pytest.raises(ValueError, match="cap"):
            exhaustive_eavesdropper(
                state, WalkConfig(2, coin_divisor=2, t_min=1, t_max=17)
            )
        with pytest.raises(ValueError, match="cap"):
            exhaustive_eavesdropper(
                QuantumState.basis(32, 0, COIN_RIGHT),
                WalkConfig(5, coin_divisor=2, t_min=1, t_max=2),
            )

    def test_dimension_mismatch(self):
        cfg = WalkConfig(3, coin_divisor=2, t_min=1, t_max=2)
        with pytest.raises(ValueError, match="positions"):
            exhaustive_eavesdropper(QuantumState.basis(4, 0, COIN_RIGHT), cfg)

    def test_table_is_frozen(self):
        table = EavesdropperTable({0: 1}, 0, 1)
        with pytest.raises(AttributeError):
            table.ambiguous = 5
