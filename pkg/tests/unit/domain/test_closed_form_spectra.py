import math

import numpy as np
import pytest
from scipy import special

from src.domain.exceptions import BudgetError, IncompleteBaseError, InputError
from src.domain.services import closed_form_spectra
from src.domain.value_objects import DomainSpec


@pytest.mark.domain
@pytest.mark.unit
class TestBoxSpectrum:
    """Test the box enumeration"""

    def test_unit_square_leading_modes(self):
        """Test λ = π²(a² + b²) with ties broken by label"""
        spectrum = closed_form_spectra.enumerate_box([1.0, 1.0], 6)
        assert spectrum.labels == [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)]
        assert spectrum.lambdas == pytest.approx(math.pi ** 2 * np.array([2, 5, 5, 8, 10, 10]))

    def test_interval_means(self, interval_spectrum):
        """Test ∫φ_a = 2√2/(aπ) for odd a and 0 for even a"""
        means = interval_spectrum.means
        assert means[0] == pytest.approx(2 * math.sqrt(2) / math.pi)
        assert means[1] == 0.0
        assert means[2] == pytest.approx(2 * math.sqrt(2) / (3 * math.pi))

    def test_box_means_factorize(self):
        """Test that box means are products of interval means"""
        spectrum = closed_form_spectra.enumerate_box([2.0, 1.0], 1)
        expected = (closed_form_spectra.interval_mean(np.array([1]), 2.0)[0]
                    * closed_form_spectra.interval_mean(np.array([1]), 1.0)[0])
        assert spectrum.means[0] == pytest.approx(expected)

    def test_square_cluster_sizes(self, square_spectrum):
        """Test that (a, b) and (b, a) share a cluster"""
        clusters = square_spectrum.clusters
        assert clusters[0] == (0,)
        assert clusters[1] == (1, 2)

    def test_parseval_partial_sum_approaches_volume(self):
        """Test Σ mean² → |Ω| on the unit interval"""
        spectrum = closed_form_spectra.enumerate_box([1.0], 2000)
        assert float(np.sum(spectrum.means ** 2)) == pytest.approx(1.0, abs=1e-3)

    def test_dimension_limit(self):
        """Test that five-dimensional boxes are rejected"""
        with pytest.raises(InputError):
            closed_form_spectra.enumerate_box([1.0] * 5, 10)

    def test_budget_guard(self):
        """Test that the tuple budget is enforced"""
        with pytest.raises(BudgetError):
            closed_form_spectra.enumerate_box([1.0, 1.0, 1.0], 5000, budget=100)

    def test_zero_modes_rejected(self):
        """Test n >= 1"""
        with pytest.raises(InputError):
            closed_form_spectra.enumerate_box([1.0], 0)


@pytest.mark.domain
@pytest.mark.unit
class TestDiskSpectrum:
    """Test the disk enumeration"""

    def test_first_eigenvalue(self):
        """Test λ_1 = j_{0,1}²"""
        spectrum = closed_form_spectra.enumerate_disk(1.0, 1)
        assert spectrum.lambdas[0] == pytest.approx(2.404825557695773 ** 2, rel=1e-12)
        assert spectrum.labels[0] == (0, 1, 0)

    def test_angular_modes_come_in_pairs(self):
        """Test cosine and sine branches share an eigenvalue"""
        spectrum = closed_form_spectra.enumerate_disk(1.0, 3)
        assert spectrum.labels[1:] == [(1, 1, 0), (1, 1, 1)]
        assert spectrum.lambdas[1] == pytest.approx(spectrum.lambdas[2])
        assert spectrum.means[1] == 0.0

    def test_radial_means(self):
        """Test ∫φ = 2√π R / j_{0,k}"""
        spectrum = closed_form_spectra.enumerate_disk(2.0, 50)
        radial = [k for k, label in enumerate(spectrum.labels) if label[0] == 0]
        zeros = special.jn_zeros(0, len(radial))
        assert spectrum.means[radial] == pytest.approx(2 * math.sqrt(math.pi) * 2.0 / zeros)

    def test_eigenvalues_match_scipy_zeros(self):
        """Test the first hundred eigenvalues against scipy zeros"""
        spectrum = closed_form_spectra.enumerate_disk(1.0, 100)
        reference = []
        for m in range(0, 30):
            for zero in special.jn_zeros(m, 10):
                reference += [zero ** 2] * (1 if m == 0 else 2)
        reference = np.sort(reference)[:100]
        assert spectrum.lambdas == pytest.approx(reference, rel=1e-11)


@pytest.mark.domain
@pytest.mark.unit
class TestBallSpectrum:
    """Test the 3D ball enumeration"""

    def test_first_mode_and_multiplicity(self):
        """Test λ_1 = π² and the 3-fold l = 1 cluster"""
        spectrum = closed_form_spectra.enumerate_ball3(1.0, 4)
        assert spectrum.lambdas[0] == pytest.approx(math.pi ** 2)
        assert spectrum.labels[1:] == [(1, 1, 0), (1, 1, 1), (1, 1, 2)]

    def test_radial_mean(self):
        """Test ∫φ = 4R^{3/2}/(√(2π)·k)"""
        spectrum = closed_form_spectra.enumerate_ball3(1.0, 1)
        assert spectrum.means[0] == pytest.approx(4.0 / math.sqrt(2 * math.pi))


@pytest.mark.domain
@pytest.mark.unit
class TestComposition:
    """Test tensor composition with an interval"""

    def test_square_from_interval(self):
        """Test that [0,1] × [0,1] composed equals the enumerated square exactly"""
        base = closed_form_spectra.enumerate_box([1.0], 400)
        composed = closed_form_spectra.tensor_compose(base, 1.0, 2000)
        direct = closed_form_spectra.enumerate_box([1.0, 1.0], 2000)

        assert composed.labels == direct.labels
        assert np.array_equal(composed.lambdas, direct.lambdas)
        assert np.array_equal(composed.means, direct.means)
        assert composed.clusters == direct.clusters

    def test_cube_from_square_keeps_exact_ties(self, square_spectrum):
        """Test that permuted cube labels stay in one cluster after composition"""
        composed = closed_form_spectra.tensor_compose(square_spectrum, 1.0, 100)
        direct = closed_form_spectra.enumerate_box([1.0, 1.0, 1.0], 100)

        assert composed.labels == direct.labels
        assert np.array_equal(composed.lambdas, direct.lambdas)
        assert composed.largest_cluster() == direct.largest_cluster()

    @pytest.mark.parametrize("base_kind", ["interval", "disk"])
    def test_zero_mean_count_lower_bound(self, base_kind):
        """Test that at least n/2 − d_max of the composed modes have zero mean"""
        if base_kind == "interval":
            base = closed_form_spectra.enumerate_box([1.0], 400)
        else:
            base = closed_form_spectra.enumerate_disk(1.0, 400)
        n = 300
        composed = closed_form_spectra.tensor_compose(base, 1.0, n)

        zero_mean = int(np.count_nonzero(composed.means == 0.0))
        assert zero_mean >= n / 2 - composed.largest_cluster()

    def test_short_base_raises_error(self):
        """Test that an incomplete base is detected"""
        base = closed_form_spectra.enumerate_box([1.0], 2)
        with pytest.raises(IncompleteBaseError):
            closed_form_spectra.tensor_compose(base, 1.0, 20)

    def test_cylinder_domain(self):
        """Test the composed domain metadata"""
        base = closed_form_spectra.enumerate_disk(1.0, 200)
        cylinder = closed_form_spectra.tensor_compose(base, 1.0, 20)
        assert cylinder.domain.dim == 3
        assert cylinder.lambdas[0] == pytest.approx(2.404825557695773 ** 2 + math.pi ** 2)


@pytest.mark.domain
@pytest.mark.unit
class TestNonzeroMeanModes:
    """Test the restriction to modes with nonzero mean"""

    def test_box_keeps_all_odd_tuples(self):
        """Test that only all-odd labels survive"""
        spectrum = closed_form_spectra.nonzero_mean_modes(DomainSpec.box([1.0, 1.0]), 200.0)
        assert spectrum.mean_support_only
        assert all(a % 2 == 1 for label in spectrum.labels for a in label)
        assert np.all(spectrum.means > 0)

    def test_disk_keeps_radial_modes(self):
        """Test that only m = 0 survives on the disk"""
        spectrum = closed_form_spectra.nonzero_mean_modes(DomainSpec.disk(1.0), 500.0)
        assert {label[0] for label in spectrum.labels} == {0}
        assert spectrum.n == len(special.jn_zeros(0, 10)[special.jn_zeros(0, 10) ** 2 <= 500.0])

    def test_weyl_count_leading_term(self):
        """Test the one-term Weyl count of the unit square"""
        count = closed_form_spectra.weyl_count(1.0, 0.0, 2, 4 * math.pi * 100)
        assert count == pytest.approx(100.0)
