from dataclasses import dataclass
import uuid
from typing import Any, Dict, List, Optional, Protocol

from src.application.commands import DomainDescriptor, RunConfig
from src.commons.decorators import timed
from src.commons.utils import logger
from src.domain.entities import EigResult, GridMask, Spectrum
from src.domain.events import DomainEvent, SpectrumComputed
from src.domain.exceptions import IncompleteBaseError, InputError
from src.domain.repositories import GeometryRepository, ResultRepository
from src.domain.services import closed_form_spectra, discrete_laplacian, eigensolver, mean_census
from src.domain.value_objects import DomainSpec, EigSolveConfig


class EventBus(Protocol):
    """Protocol for event publishing"""
    def publish(self, events: List[DomainEvent]) -> None:
        """Publish a list of domain events"""
        pass


@dataclass
class SpectrumRun:
    """A computed spectrum with the grid data it came from, if any"""
    spectrum: Spectrum
    analytic: Optional[DomainSpec] = None
    eig: Optional[EigResult] = None
    mask: Optional[GridMask] = None

    @property
    def on_grid(self) -> bool:
        return self.eig is not None


def analytic_domain(descriptor: DomainDescriptor) -> DomainSpec:
    if descriptor.kind == "box":
        return DomainSpec.box(descriptor.lengths)
    if descriptor.kind == "disk":
        return DomainSpec.disk(descriptor.radius)
    if descriptor.kind == "ball3":
        return DomainSpec.ball3(descriptor.radius)
    raise InputError(f"'{descriptor.text}' is not an analytic domain")


def spectrum_rows(spectrum: Spectrum) -> List[Dict[str, Any]]:
    cluster_ids = spectrum.cluster_ids()
    return [
        {
            "index": k + 1,
            "lambda": float(mode.lam),
            "mean": float(mode.mean),
            "label": list(mode.label),
            "source": str(mode.source),
            "residual": float(mode.residual),
            "cluster_id": int(cluster_ids[k]),
        }
        for k, mode in enumerate(spectrum.modes)
    ]


class ComputeSpectrumService:
    """Service building the spectrum of a domain descriptor, exactly or on a grid"""

    def __init__(self, result_repository: ResultRepository, geometry_repository: GeometryRepository,
                 event_bus: EventBus):
        self._result_repository = result_repository
        self._geometry_repository = geometry_repository
        self._event_bus = event_bus

    def load_mask(self, descriptor: DomainDescriptor, h: float) -> GridMask:
        """Node raster of a descriptor; mask files carry their own spacing"""
        if descriptor.kind == "mask":
            return self._geometry_repository.load_mask(descriptor.path)
        if descriptor.kind == "poly":
            return discrete_laplacian.rasterize(self._geometry_repository.load_polygon(descriptor.path), h)
        if descriptor.kind == "halfspace":
            raise InputError("The half-space has no discrete spectrum")
        return discrete_laplacian.rasterize(analytic_domain(descriptor), h)

    @timed("grid_solve")
    def solve_grid(self, mask: GridMask, n: int, seed: int = 0, residual_tol: float = 1e-8,
                   name: str = "mask") -> SpectrumRun:
        operator = discrete_laplacian.assemble_dirichlet(mask)
        logger.info("Operator assembled", extra={"domain": name, "dimension": operator.dimension, "h": mask.h})
        result = eigensolver.smallest_eigs(operator, EigSolveConfig(m=n, seed=seed, residual_tol=residual_tol))
        logger.info("Eigenpairs converged", extra={"domain": name, "m": result.m, "iterations": result.iterations,
                                                   "max_residual": result.max_residual})
        spectrum = eigensolver.grid_spectrum(DomainSpec.from_mask(mask, name=name), result)
        spectrum = mean_census.compute_means(spectrum, result, mask)
        return SpectrumRun(spectrum=spectrum, eig=result, mask=mask)

    @timed("spectrum")
    def run(self, config: RunConfig) -> SpectrumRun:
        """Spectrum of config.domain with n modes"""
        descriptor = config.descriptor
        if descriptor.kind == "halfspace":
            raise InputError("The half-space has no discrete spectrum")
        if descriptor.analytic and config.method == "exact":
            domain = analytic_domain(descriptor)
            if config.interval is not None:
                run = SpectrumRun(spectrum=self._compose(domain, config.interval, config.n), analytic=None)
            else:
                run = SpectrumRun(spectrum=closed_form_spectra.exact_spectrum(domain, config.n), analytic=domain)
        else:
            mask = self.load_mask(descriptor, config.grid_h)
            run = self.solve_grid(mask, config.n, config.seed, config.residual_tol, name=descriptor.text)
            if descriptor.analytic:
                run.analytic = analytic_domain(descriptor)
            if config.interval is not None:
                run = SpectrumRun(spectrum=closed_form_spectra.tensor_compose(run.spectrum, config.interval, config.n))
        logger.info("Spectrum ready", extra={"domain": descriptor.text, "n": run.spectrum.n,
                                             "source": str(run.spectrum.source),
                                             "lambda_max": run.spectrum.lambda_max})
        return run

    def _compose(self, base_domain: DomainSpec, length: float, n: int) -> Spectrum:
        base_n = n
        while True:
            base = closed_form_spectra.exact_spectrum(base_domain, base_n)
            try:
                return closed_form_spectra.tensor_compose(base, length, n)
            except IncompleteBaseError:
                base_n *= 2

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        """Execute the spectrum command and write one JSON line per mode"""
        run = self.run(config)
        self._result_repository.write_json_lines(config.output, spectrum_rows(run.spectrum))
        self._event_bus.publish([SpectrumComputed.create(
            run_id=str(uuid.uuid4()),
            domain=config.domain,
            n=run.spectrum.n,
            source=str(run.spectrum.source),
            lambda_max=run.spectrum.lambda_max,
        )])
        return {"domain": config.domain, "n": run.spectrum.n, "lambda_max": run.spectrum.lambda_max}
