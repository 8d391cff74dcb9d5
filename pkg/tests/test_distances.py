"""Distance operations against hand computations and independent oracles."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicedw.distances import (
    brute_force_wasserstein,
    exact_wasserstein_small,
    js_divergence_1d,
    project,
    quantile_wasserstein_1d,
    reconstruction_cost,
    sliced_wasserstein,
    sliced_wasserstein_gradient,
    sliced_wasserstein_per_direction,
    sort_pairing,
    to_metric,
    wasserstein_1d,
)
from slicedw.samplers import derive_rng, sample_unit_sphere

TWO_LOG_TWO = 2.0 * np.log(2.0)


def finite_difference(f, x, eps=1e-5):
    """Central finite differences of a scalar function over an array."""
    grad = np.zeros_like(x)
    for idx in np.ndindex(*x.shape):
        plus = x.copy()
        minus = x.copy()
        plus[idx] += eps
        minus[idx] -= eps
        grad[idx] = (f(plus) - f(minus)) / (2.0 * eps)
    return grad


def tie_free_clouds(rng, n, d, l, min_gap=1e-4):
    """Random clouds plus directions whose projections of cloud a are well separated."""
    while True:
        a = rng.uniform(-1.0, 1.0, size=(n, d))
        b = rng.uniform(-1.0, 1.0, size=(n, d))
        thetas = sample_unit_sphere(l, d, rng)
        pa = a @ thetas.T
        gaps = np.diff(np.sort(pa, axis=0), axis=0)
        if gaps.size == 0 or gaps.min() > min_gap:
            return a, b, thetas


# --------------------------------------------------------------------------
# project
# --------------------------------------------------------------------------


class TestProject:
    def test_axis_projections(self):
        cloud = np.array([[1.0, 2.0]])
        assert project(cloud, [1.0, 0.0])[0] == 1.0
        assert project(cloud, [0.0, 1.0])[0] == 2.0

    def test_diagonal_projection(self):
        cloud = np.array([[1.0, 1.0], [-1.0, -1.0]])
        theta = np.array([1.0, 1.0]) / np.sqrt(2.0)
        out = project(cloud, theta)
        assert out == pytest.approx([np.sqrt(2.0), -np.sqrt(2.0)])

    def test_preserves_sample_order(self):
        rng = derive_rng(0)
        cloud = rng.normal(size=(10, 3))
        theta = sample_unit_sphere(1, 3, rng)[0]
        out = project(cloud, theta)
        assert out == pytest.approx(cloud @ theta)

    def test_linearity(self):
        rng = derive_rng(1)
        a = rng.normal(size=(6, 3))
        b = rng.normal(size=(6, 3))
        theta = sample_unit_sphere(1, 3, rng)[0]
        lhs = project(2.0 * a + 0.5 * b, theta)
        assert lhs == pytest.approx(2.0 * project(a, theta) + 0.5 * project(b, theta))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            project(np.zeros((2, 3)), [1.0, 0.0])

    def test_rejects_non_unit_direction(self):
        with pytest.raises(ValueError, match="unit norm"):
            project(np.zeros((2, 2)), [1.0, 1.0])


# --------------------------------------------------------------------------
# wasserstein_1d
# --------------------------------------------------------------------------


class TestWasserstein1d:
    def test_identical(self):
        assert wasserstein_1d([0.0, 1.0], [0.0, 1.0], 2) == 0.0

    def test_single_pair(self):
        assert wasserstein_1d([0.0], [3.0], 2) == 9.0

    def test_sorting_beats_pairing(self):
        # sort a to {1,2,3}; mean of gaps to {0,0,0} is (1+2+3)/3
        assert wasserstein_1d([1.0, 3.0, 2.0], [0.0, 0.0, 0.0], 1) == pytest.approx(2.0)

    def test_power_form_not_root(self):
        # two points both shifted by 3, p=2: mean squared gap is 9, not 3
        assert wasserstein_1d([0.0, 1.0], [3.0, 4.0], 2) == pytest.approx(9.0)

    def test_zero_iff_same_multiset(self):
        assert wasserstein_1d([2.0, 1.0], [1.0, 2.0], 2) == 0.0
        assert wasserstein_1d([2.0, 1.0], [1.0, 2.0 + 1e-9], 2) > 0.0

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError, match="equal length"):
            wasserstein_1d([1.0], [1.0, 2.0], 1)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            wasserstein_1d([], [], 2)

    def test_rejects_bad_exponent(self):
        with pytest.raises(ValueError, match="exponent"):
            wasserstein_1d([1.0], [1.0], 3)

    @given(
        st.lists(st.floats(-100, 100), min_size=1, max_size=20),
        st.floats(-50, 50),
        st.sampled_from([1, 2]),
    )
    @settings(max_examples=200, deadline=None)
    def test_translation_identity(self, values, shift, p):
        a = np.asarray(values)
        got = wasserstein_1d(a, a + shift, p)
        assert got == pytest.approx(abs(shift) ** p, abs=1e-12, rel=1e-12)

    @given(
        st.lists(st.floats(-10, 10), min_size=1, max_size=12),
        st.lists(st.floats(-10, 10), min_size=1, max_size=12),
        st.sampled_from([1, 2]),
    )
    @settings(max_examples=200, deadline=None)
    def test_symmetry(self, xs, ys, p):
        n = min(len(xs), len(ys))
        a, b = np.asarray(xs[:n]), np.asarray(ys[:n])
        assert wasserstein_1d(a, b, p) == wasserstein_1d(b, a, p)


def test_sort_pairing_is_stable_permutation():
    a = np.array([3.0, 1.0, 3.0, 0.0])
    b = np.array([2.0, 2.0, 5.0, 1.0])
    idx_a, idx_b = sort_pairing(a, b)
    assert sorted(idx_a) == [0, 1, 2, 3]
    assert sorted(idx_b) == [0, 1, 2, 3]
    assert np.all(np.diff(a[idx_a]) >= 0)
    assert np.all(np.diff(b[idx_b]) >= 0)
    # equal values keep original order
    assert list(idx_a) == [3, 1, 0, 2]
    assert list(idx_b) == [3, 0, 1, 2]


# --------------------------------------------------------------------------
# quantile_wasserstein_1d
# --------------------------------------------------------------------------


class TestQuantileWasserstein:
    def test_equal_uniforms(self):
        inv = lambda t: t
        assert quantile_wasserstein_1d(inv, inv, 100, 1) == 0.0

    @pytest.mark.parametrize("tau", [0.3, -0.7, 2.0])
    @pytest.mark.parametrize("m", [1, 7, 100])
    def test_shifted_uniform_is_exact_for_any_m(self, tau, m):
        got = quantile_wasserstein_1d(lambda t: t, lambda t: t + tau, m, 1)
        assert got == pytest.approx(abs(tau), abs=1e-15)

    def test_stretched_uniform(self):
        # integral of |t - 2t| over (0,1) is 1/2
        got = quantile_wasserstein_1d(lambda t: t, lambda t: 2.0 * t, 1000, 1)
        assert got == pytest.approx(0.5, abs=1e-6)

    def test_rejects_zero_points(self):
        with pytest.raises(ValueError, match="m_points"):
            quantile_wasserstein_1d(lambda t: t, lambda t: t, 0, 1)


# --------------------------------------------------------------------------
# sliced_wasserstein
# --------------------------------------------------------------------------


class TestSlicedWasserstein:
    def test_identical_clouds(self):
        rng = derive_rng(2)
        cloud = rng.normal(size=(20, 3))
        thetas = sample_unit_sphere(10, 3, rng)
        assert sliced_wasserstein(cloud, cloud, thetas, 2) == 0.0

    def test_singletons_single_direction(self):
        a = np.array([[0.5, -1.0, 2.0]])
        b = np.array([[1.5, 0.0, 1.0]])
        theta = sample_unit_sphere(1, 3, derive_rng(3))
        expected = float(theta[0] @ (a[0] - b[0])) ** 2
        assert sliced_wasserstein(a, b, theta, 2) == pytest.approx(expected, rel=1e-12)

    def test_monte_carlo_mean_projection(self):
        # E_theta (theta . v)^2 = |v|^2 / d on the unit sphere
        rng = derive_rng(4)
        d = 4
        v = np.array([[0.3, -1.2, 0.7, 0.4]])
        thetas = sample_unit_sphere(100_000, d, rng)
        got = sliced_wasserstein(np.zeros((1, d)), v, thetas, 2)
        expected = float(v[0] @ v[0]) / d
        assert got == pytest.approx(expected, rel=0.02)

    def test_matches_wasserstein_1d_in_one_dimension(self):
        rng = derive_rng(5)
        a = rng.normal(size=(9, 1))
        b = rng.normal(size=(9, 1))
        thetas = np.array([[1.0]])
        sw = sliced_wasserstein(a, b, thetas, 2)
        w1d = wasserstein_1d(a[:, 0], b[:, 0], 2)
        exact = exact_wasserstein_small(a, b, 2)
        assert sw == pytest.approx(w1d, abs=1e-10)
        assert sw == pytest.approx(exact, abs=1e-10)

    def test_symmetry(self):
        rng = derive_rng(6)
        a = rng.normal(size=(7, 3))
        b = rng.normal(size=(7, 3))
        thetas = sample_unit_sphere(11, 3, rng)
        assert sliced_wasserstein(a, b, thetas, 2) == sliced_wasserstein(b, a, thetas, 2)

    def test_per_direction_mean(self):
        rng = derive_rng(7)
        a = rng.normal(size=(6, 2))
        b = rng.normal(size=(6, 2))
        thetas = sample_unit_sphere(13, 2, rng)
        per = sliced_wasserstein_per_direction(a, b, thetas, 2)
        assert per.shape == (13,)
        assert sliced_wasserstein(a, b, thetas, 2) == pytest.approx(per.mean(), rel=1e-15)
        for l, theta in enumerate(thetas):
            assert per[l] == pytest.approx(wasserstein_1d(a @ theta, b @ theta, 2), rel=1e-12)

    def test_lower_bounds_exact_cost(self):
        # spherical averaging can only shrink the p=2 cost
        rng = derive_rng(8)
        for _ in range(10):
            n, d = int(rng.integers(2, 9)), int(rng.integers(2, 5))
            a = rng.uniform(-1, 1, size=(n, d))
            b = rng.uniform(-1, 1, size=(n, d))
            thetas = sample_unit_sphere(2000, d, rng)
            per = sliced_wasserstein_per_direction(a, b, thetas, 2)
            se = per.std(ddof=1) / np.sqrt(per.size)
            assert per.mean() <= exact_wasserstein_small(a, b, 2) + 3.0 * se

    def test_rejects_mismatches(self):
        thetas = np.array([[1.0, 0.0]])
        with pytest.raises(ValueError, match="sample counts"):
            sliced_wasserstein(np.zeros((2, 2)), np.zeros((3, 2)), thetas, 2)
        with pytest.raises(ValueError, match="ambient dimension"):
            sliced_wasserstein(np.zeros((2, 2)), np.zeros((2, 3)), thetas, 2)
        with pytest.raises(ValueError, match="dimension"):
            sliced_wasserstein(np.zeros((2, 3)), np.zeros((2, 3)), thetas, 2)


# --------------------------------------------------------------------------
# sliced_wasserstein_gradient
# --------------------------------------------------------------------------


class TestSlicedWassersteinGradient:
    def test_zero_at_coincidence(self):
        rng = derive_rng(9)
        cloud = rng.normal(size=(5, 3))
        thetas = sample_unit_sphere(4, 3, rng)
        assert np.all(sliced_wasserstein_gradient(cloud, cloud, thetas) == 0.0)

    def test_singleton_closed_form(self):
        x = np.array([[0.2, -0.4]])
        z = np.array([[1.0, 0.3]])
        theta = sample_unit_sphere(1, 2, derive_rng(10))
        grad = sliced_wasserstein_gradient(x, z, theta)
        expected = 2.0 * float(theta[0] @ (x[0] - z[0])) * theta[0]
        assert grad[0] == pytest.approx(expected, rel=1e-12)

    def test_matches_finite_differences(self):
        rng = derive_rng(11)
        for _ in range(20):
            a, b, thetas = tie_free_clouds(rng, n=5, d=3, l=7)
            grad = sliced_wasserstein_gradient(a, b, thetas)
            fd = finite_difference(lambda x: sliced_wasserstein(x, b, thetas, 2), a)
            rel = np.linalg.norm(grad - fd) / max(np.linalg.norm(fd), 1e-12)
            assert rel < 1e-4


# --------------------------------------------------------------------------
# exact_wasserstein_small
# --------------------------------------------------------------------------


class TestExactWasserstein:
    def test_identical(self):
        cloud = derive_rng(12).normal(size=(6, 2))
        assert exact_wasserstein_small(cloud, cloud, 2) == 0.0

    def test_permutation_match(self):
        a = np.array([[0.0, 0.0], [1.0, 0.0]])
        b = np.array([[1.0, 0.0], [0.0, 0.0]])
        assert exact_wasserstein_small(a, b, 2) == 0.0

    @pytest.mark.parametrize("p", [1, 2])
    def test_matches_factorial_enumeration(self, p):
        rng = derive_rng(13)
        for _ in range(60):
            n, d = int(rng.integers(1, 9)), int(rng.integers(1, 5))
            a = rng.uniform(-2, 2, size=(n, d))
            b = rng.uniform(-2, 2, size=(n, d))
            got = exact_wasserstein_small(a, b, p)
            assert got == pytest.approx(brute_force_wasserstein(a, b, p), abs=1e-10)

    def test_symmetry(self):
        rng = derive_rng(14)
        a = rng.normal(size=(7, 3))
        b = rng.normal(size=(7, 3))
        assert exact_wasserstein_small(a, b, 2) == exact_wasserstein_small(b, a, 2)

    def test_zero_iff_same_multiset(self):
        rng = derive_rng(15)
        a = rng.normal(size=(5, 2))
        shuffled = a[rng.permutation(5)]
        assert exact_wasserstein_small(a, shuffled, 2) == 0.0
        assert exact_wasserstein_small(a, shuffled + 1e-6, 2) > 0.0

    def test_cap_rejection_mentions_alternative(self):
        big = np.zeros((65, 2))
        with pytest.raises(ValueError, match="sliced_wasserstein"):
            exact_wasserstein_small(big, big, 2)
        assert exact_wasserstein_small(np.zeros((65, 2)), np.zeros((65, 2)), 2, max_points=65) == 0.0


# --------------------------------------------------------------------------
# reconstruction_cost
# --------------------------------------------------------------------------


class TestReconstructionCost:
    def test_zero_at_identity(self):
        cloud = derive_rng(16).normal(size=(8, 3))
        assert reconstruction_cost(cloud, cloud, 2) == 0.0

    def test_single_squared_norm(self):
        assert reconstruction_cost([[0.0, 0.0]], [[3.0, 4.0]], 2) == pytest.approx(25.0)

    def test_uses_index_pairing_not_sorting(self):
        x = np.array([[0.0], [2.0]])
        y = np.array([[2.0], [0.0]])
        assert reconstruction_cost(x, y, 1) == pytest.approx(2.0)
        assert wasserstein_1d(x[:, 0], y[:, 0], 1) == 0.0

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            reconstruction_cost(np.zeros((2, 2)), np.zeros((3, 2)), 2)


# --------------------------------------------------------------------------
# js_divergence_1d
# --------------------------------------------------------------------------


def uniform_pdf(lo, hi):
    width = hi - lo
    return lambda xs: ((xs >= lo) & (xs <= hi)).astype(float) / width


class TestJsDivergence:
    def test_identical_pdfs(self):
        pdf = uniform_pdf(0.0, 1.0)
        assert js_divergence_1d(pdf, pdf, (-1.0, 2.0, 1000)) == 0.0

    def test_disjoint_supports_saturate(self):
        got = js_divergence_1d(uniform_pdf(0.0, 1.0), uniform_pdf(2.0, 3.0), (-0.5, 3.5, 40_000))
        assert got == pytest.approx(TWO_LOG_TWO, abs=1e-3)

    def test_half_overlap_closed_form(self):
        # shifted unit uniforms with overlap 1 - tau: JS = 2 tau log 2
        got = js_divergence_1d(uniform_pdf(0.0, 1.0), uniform_pdf(0.5, 1.5), (-0.5, 2.0, 10_000))
        assert 0.0 < got < TWO_LOG_TWO
        assert got == pytest.approx(np.log(2.0), abs=1e-3)

    def test_clamped_to_range(self):
        got = js_divergence_1d(uniform_pdf(0.0, 1.0), uniform_pdf(5.0, 6.0), (-1.0, 7.0, 50_000))
        assert 0.0 <= got <= TWO_LOG_TWO

    def test_rejects_bad_grid(self):
        pdf = uniform_pdf(0.0, 1.0)
        with pytest.raises(ValueError, match="bins"):
            js_divergence_1d(pdf, pdf, (0.0, 1.0, 1))
        with pytest.raises(ValueError, match="lo < hi"):
            js_divergence_1d(pdf, pdf, (1.0, 0.0, 100))
        with pytest.raises(ValueError, match="triple"):
            js_divergence_1d(pdf, pdf, (0.0, 1.0))

    def test_rejects_negative_pdf(self):
        with pytest.raises(ValueError, match="nonnegative"):
            js_divergence_1d(lambda xs: -np.ones_like(xs), uniform_pdf(0, 1), (0.0, 1.0, 10))


# --------------------------------------------------------------------------
# to_metric
# --------------------------------------------------------------------------


def test_to_metric():
    assert to_metric(9.0, 2) == 3.0
    assert to_metric(9.0, 1) == 9.0
    with pytest.raises(ValueError, match="nonnegative"):
        to_metric(-1.0, 2)


def test_brute_force_small_case():
    # crossing pairing is optimal here: match (0,0)->(1,1) would cost more
    a = np.array([[0.0, 0.0], [2.0, 0.0]])
    b = np.array([[2.1, 0.0], [0.2, 0.0]])
    expected = ((0.2**2) + (0.1**2)) / 2.0
    assert brute_force_wasserstein(a, b, 2) == pytest.approx(expected, abs=1e-12)
