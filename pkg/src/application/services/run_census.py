import uuid
from typing import Any, Dict

from src.application.commands import RunConfig
from src.application.services.compute_spectrum import ComputeSpectrumService, EventBus, SpectrumRun
from src.commons.decorators import timed
from src.commons.utils import logger
from src.domain.entities import CensusReport
from src.domain.events import CensusCompleted
from src.domain.repositories import ResultRepository
from src.domain.services import mean_census
from src.domain.value_objects import CensusConfig

MIN_BOUNDARY_WIDTHS = 4


def census_config_for(run: SpectrumRun, config: RunConfig) -> CensusConfig:
    """Canonical fixed-tolerance census for exact spectra, cluster census with scaled tolerance on grids"""
    base = CensusConfig.for_grid() if run.on_grid else CensusConfig()
    if config.convention is not None:
        return base.model_copy(update={"convention": config.convention})
    return base


class RunCensusService:
    """Service counting nonzero-mean eigenfunctions and collecting the census statistics"""

    def __init__(self, spectrum_service: ComputeSpectrumService, result_repository: ResultRepository,
                 event_bus: EventBus):
        self._spectrum_service = spectrum_service
        self._result_repository = result_repository
        self._event_bus = event_bus

    @timed("census")
    def report(self, config: RunConfig) -> Dict[str, Any]:
        """Census report of config.domain as a JSON-ready dictionary"""
        run = self._spectrum_service.run(config)
        census = census_config_for(run, config)
        report = mean_census.build_report(run.spectrum, census, alpha=config.alpha)
        document = report.to_dict()
        document["source"] = str(run.spectrum.source)
        document["largest_cluster"] = run.spectrum.largest_cluster()
        if run.mask is not None:
            document["smooth_boundary"] = run.mask.smooth_boundary
        if run.on_grid and len(config.eps) >= MIN_BOUNDARY_WIDTHS:
            band = mean_census.boundary_mass_band(run.eig, run.mask, config.eps)
            document["boundary_mass"] = band.to_dict()
        self._log(report)
        return document

    def _log(self, report: CensusReport) -> None:
        logger.info("Census complete", extra={
            "domain": report.domain,
            "n_max": report.n_max,
            "count": report.count_at(report.n_max),
            "convention": str(report.convention),
        })

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        """Execute the census command and write the report as one JSON document"""
        document = self.report(config)
        self._result_repository.write_json(config.output, document)
        self._event_bus.publish([CensusCompleted.create(
            run_id=str(uuid.uuid4()),
            domain=config.domain,
            n_max=document["n_max"],
            count=document["counting"][-1],
            convention=document["convention"],
        )])
        return {"domain": config.domain, "n_max": document["n_max"], "count": document["counting"][-1]}
