import pytest

from src.application.services import (
    AcceptanceService,
    ComputeSpectrumService,
    DensityReportService,
    RunCensusService,
    RunHeatService,
    RunMonteCarloService,
)
from src.infrastructure.container import Container, create_container
from src.infrastructure.messaging import LoggingEventBus
from src.infrastructure.repositories import FileGeometryRepository, FileResultRepository


@pytest.mark.infrastructure
@pytest.mark.unit
class TestContainer:
    """Test the dependency injection container"""

    def test_services_are_wired(self):
        """Test that every command service can be built"""
        container = create_container()

        assert isinstance(container.compute_spectrum(), ComputeSpectrumService)
        assert isinstance(container.run_census(), RunCensusService)
        assert isinstance(container.run_heat(), RunHeatService)
        assert isinstance(container.run_monte_carlo(), RunMonteCarloService)
        assert isinstance(container.density_report(), DensityReportService)
        assert isinstance(container.acceptance(), AcceptanceService)

    def test_infrastructure_singletons(self):
        """Test that repositories and the bus are shared"""
        container = create_container()

        assert isinstance(container.result_repository(), FileResultRepository)
        assert isinstance(container.geometry_repository(), FileGeometryRepository)
        assert container.event_bus() is container.event_bus()
        assert isinstance(container.event_bus(), LoggingEventBus)

    def test_services_are_factories(self):
        """Test that each call builds a fresh service"""
        container = Container()
        assert container.compute_spectrum() is not container.compute_spectrum()

    def test_environment_defaults(self):
        """Test the thread and chunk defaults"""
        container = create_container()

        assert container.config.threads() == 1
        assert container.config.chunk_size() == 4096

    def test_environment_overrides(self, monkeypatch):
        """Test MEANSPEC_THREADS and MEANSPEC_MC_CHUNK"""
        monkeypatch.setenv("MEANSPEC_THREADS", "6")
        monkeypatch.setenv("MEANSPEC_MC_CHUNK", "512")
        container = create_container()

        assert container.config.threads() == 6
        assert container.config.chunk_size() == 512
