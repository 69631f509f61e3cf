from dependency_injector import containers, providers
from src.infrastructure.repositories import FileGeometryRepository, FileResultRepository
from src.infrastructure.messaging import LoggingEventBus
from src.application.services import (
    AcceptanceService,
    ComputeSpectrumService,
    DensityReportService,
    RunCensusService,
    RunHeatService,
    RunMonteCarloService,
)

DEFAULT_THREADS = 1
DEFAULT_CHUNK_SIZE = 4096


class Container(containers.DeclarativeContainer):
    """Dependency injection container"""

    # Configuration
    config = providers.Configuration()

    # Infrastructure
    result_repository = providers.Singleton(FileResultRepository)

    geometry_repository = providers.Singleton(FileGeometryRepository)

    event_bus = providers.Singleton(LoggingEventBus)

    # Services
    compute_spectrum = providers.Factory(
        ComputeSpectrumService,
        result_repository=result_repository,
        geometry_repository=geometry_repository,
        event_bus=event_bus
    )

    run_census = providers.Factory(
        RunCensusService,
        spectrum_service=compute_spectrum,
        result_repository=result_repository,
        event_bus=event_bus
    )

    run_heat = providers.Factory(
        RunHeatService,
        spectrum_service=compute_spectrum,
        result_repository=result_repository,
        event_bus=event_bus
    )

    run_monte_carlo = providers.Factory(
        RunMonteCarloService,
        spectrum_service=compute_spectrum,
        result_repository=result_repository,
        event_bus=event_bus
    )

    density_report = providers.Factory(
        DensityReportService,
        spectrum_service=compute_spectrum,
        result_repository=result_repository
    )

    acceptance = providers.Factory(
        AcceptanceService,
        spectrum_service=compute_spectrum,
        census_service=run_census,
        monte_carlo_service=run_monte_carlo,
        event_bus=event_bus
    )


def create_container() -> Container:
    """Create and configure the container"""
    container = Container()

    # Load configuration from environment variables
    container.config.threads.from_env("MEANSPEC_THREADS", default=DEFAULT_THREADS, as_=int)
    container.config.chunk_size.from_env("MEANSPEC_MC_CHUNK", default=DEFAULT_CHUNK_SIZE, as_=int)

    return container
