import uuid
from typing import Any, Dict, List

from src.application.commands import RunConfig
from src.application.services.compute_spectrum import ComputeSpectrumService, EventBus, analytic_domain
from src.commons.decorators import timed
from src.commons.utils import logger
from src.domain.events import HeatEvaluated
from src.domain.repositories import ResultRepository
from src.domain.services import monte_carlo, special_functions
from src.domain.value_objects import DomainSpec, HeatMethod

SURVIVAL_COLUMNS = ["eps", "t", "value", "stderr", "method", "exact"]
HEAT_COLUMNS = ["eps", "t", "value", "stderr", "method"]
# default times, as multiples of eps²
DEFAULT_TIME_FACTORS = (0.25, 1.0, 4.0)


def reflection_survival(eps: float, t: float) -> float:
    """Survival of a path started eps away from a flat boundary: 2Φ(eps/√t) - 1"""
    return 2.0 * special_functions.normal_cdf(eps / t ** 0.5) - 1.0


class RunMonteCarloService:
    """Service simulating absorbed Brownian motion: half-line survival or strip heat mass"""

    def __init__(self, spectrum_service: ComputeSpectrumService, result_repository: ResultRepository,
                 event_bus: EventBus):
        self._spectrum_service = spectrum_service
        self._result_repository = result_repository
        self._event_bus = event_bus

    def region(self, config: RunConfig) -> monte_carlo.Region:
        descriptor = config.descriptor
        if descriptor.kind == "halfspace":
            return monte_carlo.HalfSpaceRegion()
        if descriptor.analytic and config.method == "exact":
            return monte_carlo.region_for(analytic_domain(descriptor))
        mask = self._spectrum_service.load_mask(descriptor, config.grid_h)
        return monte_carlo.region_for(DomainSpec.from_mask(mask, name=descriptor.text))

    @staticmethod
    def times(config: RunConfig, eps: float) -> List[float]:
        if config.t is not None:
            return list(config.t)
        return [factor * eps * eps for factor in DEFAULT_TIME_FACTORS]

    @timed("monte_carlo")
    def simulate(self, config: RunConfig) -> List[Dict[str, Any]]:
        """One row per (eps, t): survival for the half-line, strip heat mass otherwise"""
        region = self.region(config)
        mc = config.mc_config()
        rows: List[Dict[str, Any]] = []
        for eps in config.eps:
            times = self.times(config, eps)
            if isinstance(region, monte_carlo.HalfSpaceRegion):
                start = monte_carlo.PointStart([eps], scale=eps)
                estimates = monte_carlo.mc_survival_curve(region, start, times, mc)
                for t, estimate in zip(times, estimates):
                    rows.append({"eps": eps, "t": t, "value": estimate.probability, "stderr": estimate.stderr,
                                 "method": str(HeatMethod.MONTE_CARLO), "exact": reflection_survival(eps, t)})
            else:
                curve = monte_carlo.mc_heat_curve(region, eps, times, mc)
                rows.extend({"eps": eps, **row} for row in curve.to_rows())
            logger.info("Paths simulated", extra={"domain": config.domain, "eps": eps, "paths": mc.n_paths,
                                                  "dt": mc.resolved_dt(eps), "threads": mc.threads})
        return rows

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        """Execute the mc command"""
        rows = self.simulate(config)
        columns = SURVIVAL_COLUMNS if config.descriptor.kind == "halfspace" else HEAT_COLUMNS
        if config.output_format == "json":
            self._result_repository.write_json(config.output, {"domain": config.domain, "rows": rows})
        else:
            self._result_repository.write_csv(config.output, rows, columns)
        self._event_bus.publish([HeatEvaluated.create(
            run_id=str(uuid.uuid4()),
            domain=config.domain,
            method=str(HeatMethod.MONTE_CARLO),
            samples=len(rows),
        )])
        return {"domain": config.domain, "samples": len(rows)}
