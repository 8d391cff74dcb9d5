"""Seeded samplers: determinism, support containment, distributional checks."""

import numpy as np
import pytest
from scipy.stats import spearmanr

from slicedw.samplers import (
    PriorSpec,
    derive_rng,
    epoch_shuffled_batches,
    sample_minibatch,
    sample_prior,
    sample_swiss_roll,
    sample_swiss_roll_labeled,
    sample_unit_sphere,
)


class TestDeriveRng:
    def test_same_seed_same_stream(self):
        a = derive_rng(42, 1).standard_normal(10)
        b = derive_rng(42, 1).standard_normal(10)
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = derive_rng(42, 0).standard_normal(10)
        b = derive_rng(42, 1).standard_normal(10)
        assert not np.array_equal(a, b)


class TestUnitSphere:
    def test_row_norms(self):
        thetas = sample_unit_sphere(50, 2, derive_rng(0))
        assert thetas.shape == (50, 2)
        assert np.max(np.abs(np.linalg.norm(thetas, axis=1) - 1.0)) < 1e-12

    def test_one_dimensional_sphere_is_signs(self):
        thetas = sample_unit_sphere(200, 1, derive_rng(1))
        assert set(np.unique(thetas)) == {-1.0, 1.0}

    def test_mean_direction_vanishes(self):
        thetas = sample_unit_sphere(100_000, 3, derive_rng(2))
        assert np.linalg.norm(thetas.mean(axis=0)) < 0.02

    def test_determinism(self):
        assert np.array_equal(
            sample_unit_sphere(20, 4, derive_rng(3)), sample_unit_sphere(20, 4, derive_rng(3))
        )

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            sample_unit_sphere(0, 2, derive_rng(0))
        with pytest.raises(ValueError):
            sample_unit_sphere(5, 0, derive_rng(0))


class TestPriorSpec:
    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            PriorSpec(kind="gaussian")

    def test_rejects_planar_kinds_off_plane(self):
        for kind in ("ring", "circle", "bowl"):
            with pytest.raises(ValueError, match="dim 2"):
                PriorSpec(kind=kind, dim=3)

    def test_uniform_box_any_dim(self):
        assert PriorSpec(kind="uniform_box", dim=7).dim == 7

    def test_ring_needs_ordered_radii(self):
        with pytest.raises(ValueError, match="r_inner < r_outer"):
            PriorSpec(kind="ring", r_inner=1.0, r_outer=0.5)

    def test_bounding_boxes(self):
        assert PriorSpec("uniform_box", half_width=2.0).bounding_box() == (-2.0, 2.0)
        assert PriorSpec("ring", r_outer=1.5).bounding_box() == (-1.5, 1.5)
        lo, hi = PriorSpec("circle", radius=1.0, noise=0.1).bounding_box()
        assert hi == pytest.approx(1.3)
        assert PriorSpec("bowl").bounding_box() == (-1.0, 1.0)


class TestSamplePrior:
    def test_uniform_box_support_and_mean(self):
        spec = PriorSpec("uniform_box", dim=2, half_width=1.0)
        z = sample_prior(spec, 10_000, derive_rng(4))
        assert z.shape == (10_000, 2)
        assert np.all(np.abs(z) <= 1.0)
        assert np.max(np.abs(z.mean(axis=0))) < 0.03

    def test_ring_support(self):
        spec = PriorSpec("ring", r_inner=0.5, r_outer=1.0)
        radii = np.linalg.norm(sample_prior(spec, 5000, derive_rng(5)), axis=1)
        assert radii.min() >= 0.5
        assert radii.max() <= 1.0

    def test_ring_is_area_uniform(self):
        # area-uniform annulus: P(r <= t) = (t^2 - r0^2) / (r1^2 - r0^2)
        spec = PriorSpec("ring", r_inner=0.5, r_outer=1.0)
        radii = np.linalg.norm(sample_prior(spec, 20_000, derive_rng(6)), axis=1)
        median = np.median(radii)
        assert median == pytest.approx(np.sqrt((0.25 + 1.0) / 2.0), abs=0.01)

    def test_circle_degenerate_noise(self):
        spec = PriorSpec("circle", radius=1.0, noise=0.0)
        radii = np.linalg.norm(sample_prior(spec, 2000, derive_rng(7)), axis=1)
        assert np.max(np.abs(radii - 1.0)) < 1e-12

    def test_circle_noise_spread(self):
        spec = PriorSpec("circle", radius=1.0, noise=0.02)
        radii = np.linalg.norm(sample_prior(spec, 20_000, derive_rng(8)), axis=1)
        within = np.mean(np.abs(radii - 1.0) <= 2 * 0.02)
        assert within > 0.93

    def test_bowl_support_and_shape(self):
        spec = PriorSpec("bowl", exponent=2.0)
        z = sample_prior(spec, 20_000, derive_rng(9))
        assert np.all(np.abs(z) <= 1.0)
        # mass pushed away from the origin relative to the uniform box
        uniform = sample_prior(PriorSpec("uniform_box"), 20_000, derive_rng(10))
        assert np.mean(np.linalg.norm(z, axis=1) < 0.3) < 0.5 * np.mean(
            np.linalg.norm(uniform, axis=1) < 0.3
        )

    def test_determinism(self):
        spec = PriorSpec("bowl")
        assert np.array_equal(
            sample_prior(spec, 500, derive_rng(11)), sample_prior(spec, 500, derive_rng(11))
        )

    def test_rejects_zero_samples(self):
        with pytest.raises(ValueError):
            sample_prior(PriorSpec("uniform_box"), 0, derive_rng(0))


class TestSwissRoll:
    def test_support_without_noise(self):
        pts = sample_swiss_roll(1000, 0.0, derive_rng(12))
        assert pts.shape == (1000, 3)
        assert np.all(np.abs(pts) <= 1.0)

    def test_determinism(self):
        assert np.array_equal(
            sample_swiss_roll(100, 0.05, derive_rng(13)), sample_swiss_roll(100, 0.05, derive_rng(13))
        )

    def test_radius_tracks_unrolled_parameter(self):
        pts, t = sample_swiss_roll_labeled(5000, 0.0, derive_rng(14))
        radius = np.hypot(pts[:, 0], pts[:, 2])
        rho = spearmanr(radius, t).statistic
        assert rho > 0.99

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            sample_swiss_roll(0, 0.0, derive_rng(0))
        with pytest.raises(ValueError):
            sample_swiss_roll(10, -0.1, derive_rng(0))


class TestMinibatches:
    def test_full_batch_is_permutation(self):
        data = np.arange(20, dtype=float).reshape(10, 2)
        batch = sample_minibatch(data, 10, derive_rng(15))
        assert sorted(map(tuple, batch)) == sorted(map(tuple, data))

    def test_determinism(self):
        data = derive_rng(16).normal(size=(50, 3))
        a = sample_minibatch(data, 8, derive_rng(17))
        b = sample_minibatch(data, 8, derive_rng(17))
        assert np.array_equal(a, b)

    def test_rejects_oversized_batch(self):
        with pytest.raises(ValueError, match="batch size"):
            sample_minibatch(np.zeros((5, 2)), 6, derive_rng(0))

    def test_epoch_covers_every_index_once(self):
        rng = derive_rng(18)
        seen = np.concatenate(list(epoch_shuffled_batches(103, 10, rng)))
        assert sorted(seen) == list(range(103))

    def test_epoch_batch_count(self):
        batches = list(epoch_shuffled_batches(60_000, 500, derive_rng(19)))
        assert len(batches) == 120
        assert all(len(b) == 500 for b in batches)

    def test_epochs_reshuffle(self):
        rng = derive_rng(20)
        first = np.concatenate(list(epoch_shuffled_batches(64, 16, rng)))
        second = np.concatenate(list(epoch_shuffled_batches(64, 16, rng)))
        assert not np.array_equal(first, second)
