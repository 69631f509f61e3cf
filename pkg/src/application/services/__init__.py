from .compute_spectrum import ComputeSpectrumService, SpectrumRun
from .run_census import RunCensusService
from .run_heat import RunHeatService
from .run_monte_carlo import RunMonteCarloService
from .density_report import DensityReportService
from .acceptance import AcceptanceService, CriterionResult

__all__ = [
    "ComputeSpectrumService",
    "SpectrumRun",
    "RunCensusService",
    "RunHeatService",
    "RunMonteCarloService",
    "DensityReportService",
    "AcceptanceService",
    "CriterionResult",
]
