from typing import Any, Dict, List

from src.application.commands import RunConfig
from src.application.services.compute_spectrum import ComputeSpectrumService
from src.application.services.run_census import census_config_for
from src.domain.repositories import ResultRepository
from src.domain.services import mean_census


class DensityReportService:
    """Service comparing the nonzero-mean density N_A(n)/n across several domains"""

    def __init__(self, spectrum_service: ComputeSpectrumService, result_repository: ResultRepository):
        self._spectrum_service = spectrum_service
        self._result_repository = result_repository

    def table(self, config: RunConfig, domains: List[str]) -> Dict[str, Dict[str, float]]:
        reports = {}
        for domain in domains:
            domain_config = config.model_copy(update={"domain": domain})
            run = self._spectrum_service.run(domain_config)
            reports[domain] = mean_census.build_report(run.spectrum, census_config_for(run, domain_config))
        return mean_census.density_table(reports)

    def execute(self, config: RunConfig, domains: List[str]) -> Dict[str, Any]:
        """Execute the density command for every descriptor in domains"""
        table = self.table(config, domains)
        if config.output_format == "csv":
            rows = [{"domain": name, **values} for name, values in table.items()]
            self._result_repository.write_csv(config.output, rows, ["domain", "n", "count", "density"])
        else:
            self._result_repository.write_json(config.output, table)
        return table
