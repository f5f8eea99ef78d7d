import numpy as np
import pytest

from hetcoord import (DomainError, NetworkConfig, ReceivedPowerModel, Strategy,
                      build_beamformers, build_topology, concatenated_channel,
                      draw_channels, noise_variances, slnr, slnr_beamformer)


def random_instance(rng, z=4, rows=5):
    h = rng.standard_normal(z) + 1j * rng.standard_normal(z)
    leakage = rng.standard_normal((rows, z)) + 1j * rng.standard_normal((rows, z))
    return h, leakage


def null_space_projector(leakage):
    # independent oracle: explicit projector onto the orthogonal complement
    # of the leakage row space
    q, _ = np.linalg.qr(leakage.conj().T, mode="reduced")
    return np.eye(leakage.shape[1]) - q @ q.conj().T


class TestSlnrBeamformer:
    def test_empty_leakage_is_matched_filter(self, rng):
        h, _ = random_instance(rng)
        w = slnr_beamformer(h, np.zeros((0, 4)), 1.0)
        expected = h.conj() / np.linalg.norm(h)
        np.testing.assert_allclose(w, expected, atol=1e-12)

    def test_unit_norm(self, rng):
        for _ in range(50):
            h, leakage = random_instance(rng)
            w = slnr_beamformer(h, leakage, 0.3)
            assert abs(np.linalg.norm(w) ** 2 - 1.0) < 1e-12

    def test_maximizer_beats_random_search(self, rng):
        # random-search oracle for the maximizer property
        for _ in range(50):
            h, leakage = random_instance(rng, rows=5)
            sigma2 = float(rng.uniform(0.1, 2.0))
            w = slnr_beamformer(h, leakage, sigma2)
            best = slnr(w, h, leakage, sigma2)
            cand = rng.standard_normal((1000, 4)) + 1j * rng.standard_normal((1000, 4))
            cand /= np.linalg.norm(cand, axis=1, keepdims=True)
            num = np.abs(cand @ h) ** 2
            den = sigma2 + (np.abs(leakage @ cand.T) ** 2).sum(axis=0)
            assert best >= (num / den).max()

    def test_null_steering_limit(self, rng):
        # with more antennas than leakage rows and vanishing noise, the
        # beamformer lands in the leakage null space
        for _ in range(50):
            h, leakage = random_instance(rng, z=4, rows=3)
            w = slnr_beamformer(h, leakage, 1e-12)
            assert np.linalg.norm(leakage @ w) < 1e-4 * np.linalg.norm(h)
            proj = null_space_projector(leakage) @ h.conj()
            cos = abs(w @ proj.conj()) / np.linalg.norm(proj)
            assert cos == pytest.approx(1.0, abs=1e-6)

    def test_scale_consistency(self, rng):
        # scaling sigma^2 and all row powers together leaves w fixed up to phase
        h, leakage = random_instance(rng)
        w1 = slnr_beamformer(h, leakage, 0.7)
        c = 137.0
        w2 = slnr_beamformer(np.sqrt(c) * h, np.sqrt(c) * leakage, c * 0.7)
        assert abs(abs(w1 @ w2.conj()) - 1.0) < 1e-9

    def test_nonpositive_noise_rejected(self, rng):
        h, leakage = random_instance(rng)
        for sigma2 in (0.0, -1.0):
            with pytest.raises(DomainError):
                slnr_beamformer(h, leakage, sigma2)


class TestSlnr:
    def test_unit_ratio_case(self):
        # w orthogonal to all leakage rows and |h w|^2 = sigma^2
        w = np.array([1.0, 0.0], dtype=complex)
        leakage = np.array([[0.0, 1.0]], dtype=complex)
        h = np.array([2.0, 0.0], dtype=complex)
        assert slnr(w, h, leakage, 4.0) == pytest.approx(1.0)

    def test_matched_filter_value(self, rng):
        h, _ = random_instance(rng)
        w = h.conj() / np.linalg.norm(h)
        val = slnr(w, h, np.zeros((0, 4)), 2.0)
        assert val == pytest.approx(np.linalg.norm(h) ** 2 / 2.0, rel=1e-12)

    def test_matches_bruteforce_quotient(self, rng):
        # independent re-implementation by direct summation
        for _ in range(20):
            h, leakage = random_instance(rng, rows=6)
            w = slnr_beamformer(h, leakage, 0.5)
            num = abs(sum(h[i] * w[i] for i in range(4))) ** 2
            den = 0.5
            for row in leakage:
                den += abs(sum(row[i] * w[i] for i in range(4))) ** 2
            assert slnr(w, h, leakage, 0.5) == pytest.approx(num / den, rel=1e-12)


class TestConcatenatedChannel:
    @pytest.fixture
    def network(self, default_config, small_topology):
        model = ReceivedPowerModel.from_config(default_config)
        real = draw_channels(small_topology, model, np.random.default_rng(3))
        return small_topology, real

    def test_no_coord_macro_rows(self, network):
        topo, real = network
        user = topo.served[0][0]
        m = concatenated_channel(Strategy.NO_COORD, 0, user, real, topo)
        assert m.shape == (5, 4)

    def test_full_coord_macro_rows(self, network):
        topo, real = network
        user = topo.served[0][0]
        m = concatenated_channel(Strategy.FULL, 0, user, real, topo)
        assert m.shape == (13, 4)

    def test_macro_only_micro_equals_no_coord(self, network):
        topo, real = network
        user = topo.served[1][2]
        a = concatenated_channel(Strategy.MACRO_ONLY, 1, user, real, topo)
        b = concatenated_channel(Strategy.NO_COORD, 1, user, real, topo)
        np.testing.assert_array_equal(a, b)
        assert a.shape == (3, 2)

    def test_no_inter_tier_micro_rows(self, network):
        # own co-users plus the other microcell's users; macro users excluded
        topo, real = network
        user = topo.served[1][0]
        m = concatenated_channel(Strategy.NO_INTER_TIER, 1, user, real, topo)
        assert m.shape == (3 + 4, 2)

    def test_rows_come_from_design_copy(self, network):
        topo, real = network
        import hetcoord

        rng = np.random.default_rng(9)
        corrupted = hetcoord.corrupt_csi(real, 0.9, rng)
        user = topo.served[0][0]
        a = concatenated_channel(Strategy.NO_COORD, 0, user, corrupted, topo,
                                 use_imperfect=True)
        b = concatenated_channel(Strategy.NO_COORD, 0, user, corrupted, topo,
                                 use_imperfect=False)
        assert not np.allclose(a, b)


class TestBuildBeamformers:
    def test_unit_norms_and_shapes(self, small_topology, small_realization):
        noise = noise_variances(small_topology, small_realization.power_mean, 10.0)
        beams = build_beamformers(Strategy.NO_COORD, small_realization,
                                  small_topology, noise)
        shapes = [v.shape for v in beams.vectors]
        assert shapes == [(6, 4), (4, 2), (4, 2)]
        for v in beams.vectors:
            np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1.0, atol=1e-12)

    def test_matches_reference_op(self, small_topology, small_realization):
        # the batched kernel agrees with the single-pair reference everywhere
        noise = noise_variances(small_topology, small_realization.power_mean, 10.0)
        for strategy in Strategy:
            beams = build_beamformers(strategy, small_realization, small_topology, noise)
            for n in range(small_topology.num_sites):
                for a, k in enumerate(small_topology.served[n]):
                    leakage = concatenated_channel(strategy, n, k,
                                                   small_realization, small_topology)
                    w = slnr_beamformer(small_realization.channels[n][k], leakage,
                                        noise[k])
                    np.testing.assert_allclose(beams.vectors[n][a], w, atol=1e-9)

    def test_perfect_csi_consistency(self, small_topology, small_realization):
        noise = noise_variances(small_topology, small_realization.power_mean, 10.0)
        a = build_beamformers(Strategy.FULL, small_realization, small_topology,
                              noise, use_imperfect=False)
        b = build_beamformers(Strategy.FULL, small_realization, small_topology,
                              noise, use_imperfect=True)  # design == channels here
        for va, vb in zip(a.vectors, b.vectors):
            np.testing.assert_array_equal(va, vb)

    def test_full_differs_from_no_coord_at_macro(self, small_topology, small_realization):
        noise = noise_variances(small_topology, small_realization.power_mean, 10.0)
        nc = build_beamformers(Strategy.NO_COORD, small_realization, small_topology, noise)
        fc = build_beamformers(Strategy.FULL, small_realization, small_topology, noise)
        dist = np.linalg.norm(nc.vectors[0] - fc.vectors[0])
        assert dist > 1e-6

    def test_zero_microcells_strategy_collapse(self, rng):
        cfg = NetworkConfig(num_microcells=0)
        topo = build_topology(cfg, rng)
        real = draw_channels(topo, ReceivedPowerModel.from_config(cfg), rng)
        noise = noise_variances(topo, real.power_mean, 10.0)
        sets = [build_beamformers(s, real, topo, noise) for s in Strategy]
        for other in sets[1:]:
            for va, vb in zip(sets[0].vectors, other.vectors):
                np.testing.assert_array_equal(va, vb)

    def test_built_from_label(self, small_topology, small_realization):
        import hetcoord

        noise = noise_variances(small_topology, small_realization.power_mean, 10.0)
        rng = np.random.default_rng(11)
        corrupted = hetcoord.corrupt_csi(small_realization, 0.9, rng)
        beams = build_beamformers(Strategy.FULL, corrupted, small_topology, noise,
                                  use_imperfect=True)
        assert beams.built_from == "imperfect(rho=0.9)"
