import math

import numpy as np
import pytest

from src.domain.exceptions import InputError, ResolutionError, SamplingError
from src.domain.services import closed_form_spectra, heat_mass, monte_carlo, special_functions
from src.domain.value_objects import DomainSpec, HeatMethod, MCConfig


def reflection(eps: float, t: float) -> float:
    """Survival of standard Brownian motion started at distance eps from a wall."""
    return 2.0 * special_functions.normal_cdf(eps / math.sqrt(t)) - 1.0


@pytest.mark.domain
@pytest.mark.unit
class TestRegions:
    """Test distance functions of simulation regions"""

    def test_box_distance(self):
        """Test the box distance inside and outside"""
        region = monte_carlo.AnalyticRegion(DomainSpec.box([1.0, 2.0]))
        points = np.array([[0.5, 1.0], [0.1, 1.9], [-0.1, 0.5]])
        assert region.distance(points) == pytest.approx([0.5, 0.1, -0.1])

    def test_disk_distance(self):
        """Test the radial distance"""
        region = monte_carlo.AnalyticRegion(DomainSpec.disk(2.0))
        assert region.distance(np.array([[0.0, 0.0], [1.5, 0.0]])) == pytest.approx([2.0, 0.5])

    def test_mask_distance_is_node_distance_less_half_a_cell(self, coarse_square_mask):
        """Test that interpolation reproduces node distances shifted by h/2"""
        region = monte_carlo.MaskRegion(coarse_square_mask)
        points = coarse_square_mask.node_coordinates()
        expected = coarse_square_mask.inside_distance - coarse_square_mask.h / 2.0
        assert region.distance(points) == pytest.approx(expected)

    def test_mask_boundary_sits_between_inside_and_outside_nodes(self, coarse_square_mask):
        """Test that the absorbing boundary lies midway to the first outside node"""
        region = monte_carlo.MaskRegion(coarse_square_mask)
        h = coarse_square_mask.h
        points = np.array([[h / 2.0, 0.5], [0.5, 1.0 - h / 2.0], [h / 4.0, 0.5]])
        assert region.distance(points) == pytest.approx([0.0, 0.0, -h / 4.0], abs=1e-12)

    def test_mask_strip_area_matches_strip_measure(self, coarse_square_mask):
        """Test that the sampled strip has the area the mask reports"""
        region = monte_carlo.MaskRegion(coarse_square_mask)
        eps = 0.25
        centres = (np.arange(400) + 0.5) / 400
        gx, gy = np.meshgrid(centres, centres)
        distance = region.distance(np.column_stack([gx.ravel(), gy.ravel()]))
        area = np.count_nonzero((distance > 0) & (distance <= eps)) / centres.size ** 2
        assert area == pytest.approx(region.strip_measure(eps), rel=0.03)

    def test_region_for_mask_domain(self, coarse_square_mask):
        """Test region selection"""
        assert isinstance(monte_carlo.region_for(DomainSpec.from_mask(coarse_square_mask)),
                          monte_carlo.MaskRegion)
        assert isinstance(monte_carlo.region_for(DomainSpec.disk(1.0)), monte_carlo.AnalyticRegion)

    def test_half_space_has_no_strip(self):
        """Test that the half-space cannot seed strip samples"""
        with pytest.raises(InputError):
            monte_carlo.HalfSpaceRegion().strip_measure(0.1)


@pytest.mark.domain
@pytest.mark.unit
class TestStartSamplers:
    """Test starting-point distributions"""

    def test_strip_samples_lie_in_strip(self, rng):
        """Test rejection sampling of the boundary strip"""
        region = monte_carlo.AnalyticRegion(DomainSpec.box([1.0, 1.0]))
        points = monte_carlo.StripStart(region, 0.1).sample(rng, 500)
        distance = region.distance(points)
        assert points.shape == (500, 2)
        assert np.all((distance > 0) & (distance <= 0.1))

    def test_inefficient_strip_raises_error(self, rng):
        """Test the rejection efficiency floor"""
        region = monte_carlo.AnalyticRegion(DomainSpec.box([1.0, 1.0]))
        with pytest.raises(SamplingError):
            monte_carlo.StripStart(region, 1e-9).sample(rng, 10)


@pytest.mark.domain
@pytest.mark.unit
class TestSurvival:
    """Test absorbed Brownian motion"""

    def test_half_space_matches_reflection_principle(self):
        """Test survival against 2Φ(eps/√t) - 1"""
        eps, t = 0.1, 0.01
        start = monte_carlo.PointStart([eps], scale=eps)
        config = MCConfig(n_paths=20000, seed=7)
        estimate = monte_carlo.mc_survival(monte_carlo.HalfSpaceRegion(), start, t, config)
        assert abs(estimate.probability - reflection(eps, t)) < 5 * estimate.stderr + 0.005

    def test_survival_curve_is_monotone(self):
        """Test that one set of paths gives a non-increasing curve"""
        eps = 0.1
        start = monte_carlo.PointStart([eps], scale=eps)
        curve = monte_carlo.mc_survival_curve(monte_carlo.HalfSpaceRegion(), start,
                                              [0.01, 0.02, 0.04], MCConfig(n_paths=5000, seed=1))
        probabilities = [estimate.probability for estimate in curve]
        assert probabilities == sorted(probabilities, reverse=True)

    def test_result_independent_of_thread_count(self):
        """Test that chunk seeding makes threads irrelevant"""
        start = monte_carlo.PointStart([0.1], scale=0.1)
        region = monte_carlo.HalfSpaceRegion()
        single = monte_carlo.mc_survival(region, start, 0.01,
                                         MCConfig(n_paths=5000, chunk_size=1000, threads=1, seed=3))
        pooled = monte_carlo.mc_survival(region, start, 0.01,
                                         MCConfig(n_paths=5000, chunk_size=1000, threads=4, seed=3))
        assert single == pooled

    def test_time_below_resolution(self):
        """Test that fewer than ten steps are refused"""
        start = monte_carlo.PointStart([0.1], scale=0.1)
        with pytest.raises(ResolutionError):
            monte_carlo.mc_survival(monte_carlo.HalfSpaceRegion(), start, 5e-4, MCConfig())

    def test_decreasing_times_rejected(self):
        """Test that survival times must increase"""
        start = monte_carlo.PointStart([0.1], scale=0.1)
        with pytest.raises(InputError):
            monte_carlo.mc_survival_curve(monte_carlo.HalfSpaceRegion(), start, [0.02, 0.01],
                                          MCConfig(n_paths=1000))


@pytest.mark.domain
@pytest.mark.unit
class TestMonteCarloHeatMass:
    """Test the sampled heat mass"""

    def test_interval_heat_mass_matches_spectral_value(self, interval_spectrum):
        """Test that paths run to 2t reproduce the heat semigroup at t"""
        eps, t = 0.1, 0.01
        region = monte_carlo.AnalyticRegion(DomainSpec.box([1.0]))
        sample = monte_carlo.mc_heat_mass(region, eps, t, MCConfig(n_paths=20000, seed=11))
        strip = heat_mass.exact_strip_coefficients(interval_spectrum, eps)
        exact = heat_mass.spectral_heat_mass(strip, interval_spectrum, t).value
        assert abs(sample.value - exact) < 5 * sample.stderr + 0.01 * exact

    def test_curve_is_tagged_monte_carlo(self):
        """Test the curve method and sorted times"""
        region = monte_carlo.AnalyticRegion(DomainSpec.box([1.0, 1.0]))
        curve = monte_carlo.mc_heat_curve(region, 0.1, [0.02, 0.01], MCConfig(n_paths=2000, seed=5))
        assert curve.method == HeatMethod.MONTE_CARLO
        assert [sample.t for sample in curve.samples] == [0.01, 0.02]
        assert all(0 < sample.value <= heat_mass.strip_volume(DomainSpec.box([1.0, 1.0]), 0.1)
                   for sample in curve.samples)
