import pytest

from src.application.services.acceptance import (
    DISK_FIDELITY_CELLS,
    L_SHAPE,
    MARGIN_CELLS,
    SQUARE_FIDELITY_CELLS,
    grid_spacing,
    polygon_box,
)
from src.domain.services import discrete_laplacian
from src.domain.value_objects import DomainSpec
from src.infrastructure import create_container

FAST_CRITERIA = ["bessel", "parseval", "degeneracy", "gamma_tail"]
SLOW_CRITERIA = ["cube_fraction", "disk_ball_scaling", "theorem_margin", "ht_constant", "reflection",
                 "heat_gap", "heat_content", "grid_fidelity", "determinism"]


@pytest.fixture(scope="module")
def acceptance():
    return create_container().acceptance()


@pytest.mark.application
@pytest.mark.integration
class TestAcceptanceSuite:
    """Acceptance criteria run through the wired container"""

    def test_registry_is_complete(self, acceptance):
        """Test that every criterion is covered here"""
        assert sorted(acceptance.names) == sorted(FAST_CRITERIA + SLOW_CRITERIA)

    @pytest.mark.parametrize("name", FAST_CRITERIA)
    def test_fast_criterion(self, acceptance, name):
        """Test the criteria that finish within seconds"""
        result = acceptance.run_one(name)
        assert result.passed, result.detail

    @pytest.mark.slow
    @pytest.mark.parametrize("name", SLOW_CRITERIA)
    def test_slow_criterion(self, acceptance, name):
        """Test the criteria that solve grids or simulate paths"""
        result = acceptance.run_one(name)
        assert result.passed, result.detail

    def test_events_published_per_criterion(self):
        """Test one event per evaluated criterion"""
        container = create_container()
        results = container.acceptance().execute(["degeneracy", "bessel"])

        published = container.event_bus().published
        assert [event.name for event in published] == [result.name for result in results]


@pytest.mark.application
@pytest.mark.integration
class TestCriterionGrids:
    """Grid resolutions named by the criteria, in cells across the bounding box"""

    def test_theorem_margin_uses_512_cells_across_the_l_shape(self):
        """Test that the L-shape raster is 512 cells wide"""
        h = grid_spacing(polygon_box(L_SHAPE), MARGIN_CELLS)
        mask = discrete_laplacian.rasterize(L_SHAPE, h)
        assert MARGIN_CELLS == 512
        assert (mask.nx - 3, mask.ny - 3) == (512, 512)

    def test_fidelity_grids(self):
        """Test 256 cells across the square and 512 across the disk"""
        square = DomainSpec.box([1.0, 1.0])
        disk = DomainSpec.disk(1.0)
        assert grid_spacing(square.bounding_box, SQUARE_FIDELITY_CELLS) == pytest.approx(1 / 256)
        assert grid_spacing(disk.bounding_box, DISK_FIDELITY_CELLS) == pytest.approx(1 / 256)
        assert DISK_FIDELITY_CELLS == 512
