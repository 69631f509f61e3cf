import math

import numpy as np
import pytest

from src.domain.exceptions import DegenerateDomainError, InputError, InvalidPolygonError, ResolutionError
from src.domain.services import discrete_laplacian
from src.domain.value_objects import DomainSpec

L_SHAPE = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]


@pytest.mark.domain
@pytest.mark.unit
class TestRasterize:
    """Test node rasters of analytic domains and polygons"""

    def test_unit_square_inside_nodes(self):
        """Test that h = 1/64 leaves 63 × 63 inside nodes"""
        mask = discrete_laplacian.rasterize(DomainSpec.box([1.0, 1.0]), 1.0 / 64.0)
        assert mask.n_inside == 63 * 63
        assert not mask.smooth_boundary
        assert mask.perimeter == pytest.approx(4.0)

    def test_interval_mask(self):
        """Test the 1D raster"""
        mask = discrete_laplacian.rasterize(DomainSpec.box([1.0]), 0.1)
        assert mask.dim == 1
        assert mask.n_inside == 9

    def test_distance_of_square_nodes(self, coarse_square_mask):
        """Test that node distances equal the distance to the nearest edge"""
        coords = coarse_square_mask.node_coordinates()
        exact = np.min(np.minimum(coords, 1.0 - coords), axis=1)
        assert coarse_square_mask.inside_distance == pytest.approx(exact)

    def test_disk_area(self):
        """Test the disk raster area and smooth-boundary flag"""
        mask = discrete_laplacian.rasterize(DomainSpec.disk(1.0), 1.0 / 64.0)
        assert mask.smooth_boundary
        assert mask.area == pytest.approx(math.pi, rel=0.03)

    def test_l_shape_polygon(self):
        """Test the L-shaped polygon raster"""
        mask = discrete_laplacian.rasterize(L_SHAPE, 1.0 / 16.0)
        assert mask.area == pytest.approx(3.0, rel=0.15)
        assert mask.perimeter == pytest.approx(8.0)
        assert not mask.smooth_boundary

    def test_self_intersecting_polygon_raises_error(self):
        """Test that a bow-tie is rejected"""
        with pytest.raises(InvalidPolygonError):
            discrete_laplacian.rasterize([(0, 0), (1, 1), (1, 0), (0, 1)], 0.1)

    def test_too_few_vertices_raise_error(self):
        """Test that a polygon needs three vertices"""
        with pytest.raises(InvalidPolygonError):
            discrete_laplacian.validate_polygon([(0, 0), (1, 0)])

    def test_ball_cannot_be_rasterized(self):
        """Test that 3D domains are rejected"""
        with pytest.raises(InputError):
            discrete_laplacian.rasterize(DomainSpec.ball3(1.0), 0.1)

    def test_non_positive_spacing_raises_error(self):
        """Test the spacing check"""
        with pytest.raises(InputError):
            discrete_laplacian.rasterize(DomainSpec.box([1.0, 1.0]), 0.0)

    def test_empty_raster_raises_error(self):
        """Test that an all-outside raster is degenerate"""
        with pytest.raises(DegenerateDomainError):
            discrete_laplacian.from_raster(np.zeros((3, 3), dtype=bool), 0.1)

    def test_from_raster_pads(self):
        """Test that raw rasters get an outside frame"""
        mask = discrete_laplacian.from_raster(np.ones((3, 4), dtype=bool), 0.25)
        assert mask.inside.shape == (5, 6)
        assert mask.n_inside == 12
        assert mask.origin == (-0.25, -0.25)


@pytest.mark.domain
@pytest.mark.unit
class TestAssemble:
    """Test the five-point Dirichlet operator"""

    def test_operator_is_symmetric_with_expected_stencil(self, coarse_square_mask):
        """Test symmetry, diagonal and row sums"""
        op = discrete_laplacian.assemble_dirichlet(coarse_square_mask)
        h2 = (1.0 / 16.0) ** 2
        matrix = op.matrix
        assert op.dimension == 225
        assert abs(matrix - matrix.T).max() == 0.0
        assert matrix.diagonal() == pytest.approx(np.full(225, 4.0 / h2))
        # corner nodes have two inside neighbours
        assert matrix[0].sum() == pytest.approx(2.0 / h2)

    def test_one_dimensional_operator(self):
        """Test the 1D second-difference operator"""
        mask = discrete_laplacian.rasterize(DomainSpec.box([1.0]), 0.25)
        dense = discrete_laplacian.assemble_dirichlet(mask).matrix.toarray()
        expected = 16.0 * np.array([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
        assert dense == pytest.approx(expected)


@pytest.mark.domain
@pytest.mark.unit
class TestStripCells:
    """Test boundary strips on the raster"""

    def test_strip_of_square(self, coarse_square_mask):
        """Test that the outer ring of nodes forms the one-cell strip"""
        selected, measure = discrete_laplacian.strip_cells(coarse_square_mask, 1.0 / 16.0)
        assert selected.size == 4 * 15 - 4
        assert measure == pytest.approx(56 / 256)

    def test_strip_below_resolution(self, coarse_square_mask):
        """Test that strips thinner than h/2 are rejected"""
        with pytest.raises(ResolutionError):
            discrete_laplacian.strip_cells(coarse_square_mask, 0.01)
