import math

import numpy as np
import pytest

from src.domain.exceptions import InputError, ResolutionError
from src.domain.services import closed_form_spectra, discrete_laplacian, eigensolver, mean_census
from src.domain.value_objects import CensusConfig, Convention, DomainSpec, EigSolveConfig


@pytest.fixture(scope="module")
def grid_square():
    """Unit square at h = 1/32 with its six lowest grid modes"""
    mask = discrete_laplacian.rasterize(DomainSpec.box([1.0, 1.0]), 1.0 / 32.0)
    result = eigensolver.smallest_eigs(discrete_laplacian.assemble_dirichlet(mask), EigSolveConfig(m=6))
    spectrum = eigensolver.grid_spectrum(DomainSpec.from_mask(mask), result)
    return mask, result, mean_census.compute_means(spectrum, result, mask)


@pytest.fixture(scope="module")
def fine_interval():
    """Unit interval at h = 1/128, wide enough for strips from 4h up to half the inradius"""
    mask = discrete_laplacian.rasterize(DomainSpec.box([1.0]), 1.0 / 128.0)
    result = eigensolver.smallest_eigs(discrete_laplacian.assemble_dirichlet(mask), EigSolveConfig(m=6))
    return mask, result


FINE_WIDTHS = [1 / 32, 1 / 16, 1 / 8, 1 / 4]


@pytest.mark.domain
@pytest.mark.unit
class TestPowerLawFit:
    """Test log-log least squares"""

    def test_exact_power_law(self):
        """Test that y = 3x² is recovered"""
        x = np.array([1.0, 2.0, 4.0, 8.0])
        fit = mean_census.power_law_fit(x, 3.0 * x ** 2)
        assert fit.exponent == pytest.approx(2.0)
        assert fit.prefactor == pytest.approx(3.0)
        assert fit.residual == pytest.approx(0.0, abs=1e-12)

    def test_non_positive_values_raise_error(self):
        """Test that logs need positive data"""
        with pytest.raises(InputError):
            mean_census.power_law_fit([1.0, 2.0], [0.0, 1.0])


@pytest.mark.domain
@pytest.mark.unit
class TestComputeMeans:
    """Test eigenfunction means"""

    def test_exact_spectra_pass_through(self, square_spectrum):
        """Test that closed-form means are kept"""
        assert mean_census.compute_means(square_spectrum) is square_spectrum

    def test_grid_means_are_nonnegative_and_close_to_exact(self, grid_square):
        """Test sign normalisation and the ground-state mean 8/π²"""
        _, result, spectrum = grid_square
        assert np.all(spectrum.means >= 0)
        assert spectrum.means[0] == pytest.approx(8.0 / math.pi ** 2, rel=0.01)
        assert np.all(result.vectors.sum(axis=0) >= -1e-12)

    def test_grid_means_need_vectors(self, grid_square):
        """Test that grid spectra require eigenvectors"""
        _, _, spectrum = grid_square
        with pytest.raises(InputError):
            mean_census.compute_means(spectrum)


@pytest.mark.domain
@pytest.mark.unit
class TestClassify:
    """Test nonzero-mean classification"""

    def test_canonical_flags_all_odd_labels(self, square_spectrum):
        """Test that exactly the all-odd box modes are flagged"""
        flags = mean_census.classify(square_spectrum, CensusConfig())
        expected = [all(a % 2 == 1 for a in label) for label in square_spectrum.labels]
        assert list(flags) == expected

    def test_cluster_convention_flags_first_mode(self, square_spectrum):
        """Test one flag per cluster, placed on its first mode"""
        flags = mean_census.classify(square_spectrum, CensusConfig(convention=Convention.CLUSTER))
        labels = square_spectrum.labels
        first = labels.index((1, 3))
        assert flags[first]
        assert not flags[first + 1]
        assert not flags[labels.index((1, 2))]
        assert flags.sum() <= mean_census.classify(square_spectrum, CensusConfig()).sum()

    def test_grid_tolerance_discards_odd_even_modes(self, grid_square):
        """Test that discretization-scaled tolerances zero out symmetric modes"""
        _, _, spectrum = grid_square
        flags = mean_census.classify(spectrum, CensusConfig.for_grid())
        # modes 1..6: (1,1) (1,2)+(2,1) (2,2) (1,3)+(3,1)
        assert list(flags) == [True, False, False, False, True, False]

    def test_scaled_tolerance_needs_grid_domain(self, square_spectrum):
        """Test that analytic domains cannot use grid tolerances"""
        with pytest.raises(InputError):
            mean_census.classify(square_spectrum, CensusConfig.for_grid())

    def test_restricted_spectrum_rejected(self):
        """Test that a nonzero-mean-only spectrum cannot be counted"""
        restricted = closed_form_spectra.nonzero_mean_modes(DomainSpec.box([1.0, 1.0]), 200.0)
        with pytest.raises(InputError):
            mean_census.classify(restricted, CensusConfig())


@pytest.mark.domain
@pytest.mark.unit
class TestStatistics:
    """Test statistics around the counting function"""

    def test_parseval_partial_sums(self, interval_spectrum):
        """Test that S(n) increases towards the length"""
        summary = mean_census.parseval_partial(interval_spectrum)
        assert np.all(np.diff(summary.partial) >= 0)
        assert summary.gap == pytest.approx(0.0, abs=1e-3)

    def test_ht_constant_of_interval(self, interval_spectrum):
        """Test sqrt(λ_a)·|∫φ_a| = 2√2 for every odd a, attained first at a = 1"""
        ht = mean_census.ht_constant(interval_spectrum)
        assert ht.value == pytest.approx(2.0 * math.sqrt(2.0))
        assert ht.argmax == 0
        assert ht.label == (1,)

    def test_weyl_fit_of_square(self):
        """Test the fitted Weyl constant against 4π²/(ω_2|Ω|) = 4π"""
        spectrum = closed_form_spectra.enumerate_box([1.0, 1.0], 1000)
        model = mean_census.weyl_fit(spectrum)
        assert model.c_analytic == pytest.approx(4.0 * math.pi)
        assert model.relative_error < 0.05
        assert model.exponent == pytest.approx(1.0, abs=0.05)

    def test_weyl_fit_needs_enough_modes(self, square_spectrum):
        """Test the minimum spectrum length"""
        with pytest.raises(InputError):
            mean_census.weyl_fit(square_spectrum)

    def test_interval_counts_half_the_modes(self, interval_spectrum):
        """Test N_A(n) = ceil(n/2) on the interval"""
        report = mean_census.build_report(interval_spectrum, CensusConfig())
        assert report.count_at(1000) == 500
        assert report.count_at(7) == 4
        assert report.fitted_exponent.exponent == pytest.approx(1.0, abs=0.01)
        assert report.weyl is not None

    def test_margin_needs_one_hundred_modes(self, square_spectrum):
        """Test the margin range check"""
        report = mean_census.build_report(square_spectrum.head(50), CensusConfig())
        assert report.margin is None
        with pytest.raises(InputError):
            mean_census.theorem_margin(report, 2)

    def test_margin_on_square(self, square_spectrum):
        """Test that the margin starts at n = 10 and stays positive"""
        report = mean_census.build_report(square_spectrum, CensusConfig())
        margin = report.margin
        assert margin.n[0] == 10
        assert margin.min_value > 0
        assert margin.min_at >= 100

    def test_density_table(self, interval_spectrum, square_spectrum):
        """Test the per-domain density at the last n"""
        table = mean_census.density_table({
            "interval": mean_census.build_report(interval_spectrum, CensusConfig()),
            "square": mean_census.build_report(square_spectrum, CensusConfig()),
        })
        assert table["interval"]["density"] == pytest.approx(0.5)
        assert table["square"]["n"] == 200


@pytest.mark.domain
@pytest.mark.unit
class TestBoundaryMass:
    """Test strip integrals of grid modes"""

    def test_widths_must_span_a_factor_of_eight(self, grid_square):
        """Test the sweep validation"""
        mask, result, _ = grid_square
        with pytest.raises(InputError):
            mean_census.boundary_mass_fit(result, mask, 0, [0.2, 0.3, 0.4, 0.5])

    def test_widths_below_resolution(self, grid_square):
        """Test the 4h floor"""
        mask, result, _ = grid_square
        with pytest.raises(ResolutionError):
            mean_census.boundary_mass_fit(result, mask, 0, [0.01, 0.02, 0.04, 0.08])

    def test_widths_past_half_the_inradius(self, grid_square):
        """Test the inradius/2 ceiling"""
        mask, result, _ = grid_square
        with pytest.raises(InputError, match="inradius"):
            mean_census.boundary_mass_fit(result, mask, 0, [0.125, 0.25, 0.5, 1.0])

    def test_strip_masses_grow_with_width(self, fine_interval):
        """Test monotone strip masses and a super-linear L² exponent"""
        mask, result = fine_interval
        fit = mean_census.boundary_mass_fit(result, mask, 0, FINE_WIDTHS)
        assert np.all(np.diff(fit.strip_l2) >= 0)
        assert np.all(np.diff(fit.strip_l1) >= 0)
        assert fit.alpha_l2 > 1.0

    def test_band_fits_every_mode(self, fine_interval):
        """Test the per-mode fits and their min/median summary"""
        mask, result = fine_interval
        band = mean_census.boundary_mass_band(result, mask, FINE_WIDTHS)
        assert [fit.mode_index for fit in band.fits] == list(range(6))
        assert band.alpha_l2_min == pytest.approx(band.alpha_l2.min())
        assert band.alpha_l2_min <= band.alpha_l2_median
        assert band.alpha_l2[band.weakest_mode] == pytest.approx(band.alpha_l2_min)
        assert band.alpha_l2_min >= 0.4
        assert all(fit.strip_l2[-1] <= 1.0 + 1e-9 for fit in band.fits)

    def test_band_checks_the_widths(self, fine_interval):
        """Test that the band applies the same width checks"""
        mask, result = fine_interval
        with pytest.raises(InputError, match="inradius"):
            mean_census.boundary_mass_band(result, mask, [1 / 32, 1 / 16, 1 / 8, 1 / 2])

    def test_wavelength_strip_mass_marks_thin_strips(self, grid_square):
        """Test that strips thinner than half a cell report nan"""
        mask, result, spectrum = grid_square
        mass, scaled = mean_census.wavelength_strip_mass(result, mask, spectrum, 1e-3)
        assert np.all(np.isnan(mass))
        mass, scaled = mean_census.wavelength_strip_mass(result, mask, spectrum, 1.0)
        assert np.all(np.isfinite(mass))
        assert scaled == pytest.approx(mass)
