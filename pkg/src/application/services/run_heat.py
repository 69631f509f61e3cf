from dataclasses import asdict, dataclass, field
from pathlib import Path
import uuid
from typing import Any, Dict, List, Optional

import numpy as np

from src.application.commands import RunConfig
from src.application.services.compute_spectrum import ComputeSpectrumService, EventBus, analytic_domain
from src.application.services.run_census import census_config_for
from src.commons.decorators import timed
from src.commons.utils import logger
from src.domain.entities import ChainSum, GapRow, HeatContentRow, HeatCurve, Spectrum, StripData, TailSum
from src.domain.events import HeatEvaluated
from src.domain.exceptions import InputError
from src.domain.repositories import ResultRepository
from src.domain.services import closed_form_spectra, heat_mass, mean_census
from src.domain.value_objects import DomainSpec

DEFAULT_CONTENT_TIMES = tuple(float(t) for t in np.geomspace(1e-4, 1e-2, 9))
HEAT_TIME_POINTS = 7
# worst-case truncation bound aimed for when choosing the exact cutoff
CUTOFF_ACCURACY = 1e-4
# heat content uses modes up to λ = CONTENT_DECAY / t_min
CONTENT_DECAY = 40.0
TAIL_MAX_EPS = 0.1
PARSEVAL_MARGIN = 0.5 * heat_mass.PARSEVAL_TOLERANCE

CURVE_COLUMNS = ["eps", "t", "value", "stderr", "method"]
GAP_COLUMNS = ["eps", "gap", "ratio", "c1", "c2", "chain_sum", "chain_ratio"]
CONTENT_COLUMNS = ["t", "value", "expansion", "residual", "scaled_residual", "two_term_slope", "three_term"]
TAIL_COLUMNS = ["eps", "d", "c_weyl", "c_cutoff", "value", "ratio", "cutoff", "k_start", "n_terms",
                "integral", "euler_maclaurin", "minimal_cutoff"]


@dataclass
class HeatTables:
    """Everything the heat command reports for one domain"""
    domain: str
    curves: Dict[float, HeatCurve] = field(default_factory=dict)
    gaps: List[GapRow] = field(default_factory=list)
    chains: List[ChainSum] = field(default_factory=list)
    content: List[HeatContentRow] = field(default_factory=list)
    tails: List[Dict[str, Any]] = field(default_factory=list)

    def curve_rows(self) -> List[Dict[str, Any]]:
        return [{"eps": eps, **row} for eps, curve in self.curves.items() for row in curve.to_rows()]

    def gap_rows(self) -> List[Dict[str, Any]]:
        return [{**asdict(gap), "chain_sum": chain.value, "chain_ratio": chain.ratio}
                for gap, chain in zip(self.gaps, self.chains)]

    def content_rows(self) -> List[Dict[str, Any]]:
        return [asdict(row) for row in self.content]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "domain": self.domain,
            "curves": [{"eps": eps, "truncation_bound": curve.truncation_bound, "samples": curve.to_rows()}
                       for eps, curve in self.curves.items()],
            "gap": self.gap_rows(),
            "content": self.content_rows(),
            "tail": self.tails,
        }


def heat_times(config: RunConfig, eps: float) -> List[float]:
    """Requested times, or c·eps² for c spread geometrically over [c1, c2]"""
    if config.t is not None:
        return list(config.t)
    return [float(c) * eps * eps for c in np.geomspace(config.c1, config.c2, HEAT_TIME_POINTS)]


def tail_rows(domain: DomainSpec, eps_values: List[float], c_cutoff: float) -> List[Dict[str, Any]]:
    """Weyl-model tail beyond B = (c/eps²)·log(1/eps) for every eps in (0, 0.1]"""
    d = domain.dim
    c_weyl = mean_census.weyl_constant(d, domain.volume)
    rows = []
    for eps in eps_values:
        if eps > TAIL_MAX_EPS:
            continue
        tail: TailSum = heat_mass.lemma4_tail(c_weyl, d, eps, c_cutoff)
        rows.append({"eps": eps, "d": d, "c_weyl": c_weyl, "c_cutoff": c_cutoff, **asdict(tail),
                     "minimal_cutoff": heat_mass.minimal_cutoff(c_weyl, d, eps)})
    return rows


class RunHeatService:
    """Service evaluating the heat mass of boundary strips and the estimates built on it"""

    def __init__(self, spectrum_service: ComputeSpectrumService, result_repository: ResultRepository,
                 event_bus: EventBus):
        self._spectrum_service = spectrum_service
        self._result_repository = result_repository
        self._event_bus = event_bus

    def _exact_spectrum(self, domain: DomainSpec, config: RunConfig, content_times: List[float]) -> Spectrum:
        lam_max = CONTENT_DECAY / min(content_times)
        for eps in config.eps:
            earliest = min(heat_times(config, eps) + [config.c1 * eps * eps])
            strip = heat_mass.strip_volume(domain, eps)
            lam_max = max(lam_max, heat_mass.required_cutoff(earliest, strip, domain.volume, CUTOFF_ACCURACY))
        spectrum = closed_form_spectra.nonzero_mean_modes(domain, lam_max)
        # heat content needs the mean-value Parseval sum close to the volume
        while domain.volume - float(np.sum(spectrum.means ** 2)) > PARSEVAL_MARGIN * domain.volume:
            lam_max *= 2.0
            spectrum = closed_form_spectra.nonzero_mean_modes(domain, lam_max)
        logger.info("Exact cutoff chosen", extra={"domain": str(domain), "lambda_max": lam_max, "modes": spectrum.n})
        return spectrum

    @timed("heat")
    def evaluate(self, config: RunConfig) -> HeatTables:
        descriptor = config.descriptor
        if config.interval is not None:
            raise InputError("Heat mass is evaluated on boxes, disks, balls and grid domains only")
        tables = HeatTables(domain=config.domain)
        flags: Optional[np.ndarray] = None
        if descriptor.analytic and config.method == "exact":
            domain = analytic_domain(descriptor)
            content_times = list(config.content_t or DEFAULT_CONTENT_TIMES)
            spectrum = self._exact_spectrum(domain, config, content_times)
            strips = {eps: heat_mass.exact_strip_coefficients(spectrum, eps) for eps in config.eps}
            tables.content = heat_mass.heat_content_table(spectrum, content_times)
        else:
            run = self._spectrum_service.run(config)
            spectrum = run.spectrum
            domain = run.analytic or spectrum.domain
            strips = {eps: heat_mass.grid_strip_coefficients(run.eig, run.mask, eps) for eps in config.eps}
            flags = mean_census.classify(spectrum, census_config_for(run, config))
        for eps, strip in strips.items():
            self._evaluate_strip(tables, strip, spectrum, config, flags)
        tables.tails = tail_rows(domain, config.eps, config.c_cutoff)
        return tables

    def _evaluate_strip(self, tables: HeatTables, strip: StripData, spectrum: Spectrum, config: RunConfig,
                        flags: Optional[np.ndarray]) -> None:
        eps = strip.eps
        tables.curves[eps] = heat_mass.heat_curve(strip, spectrum, heat_times(config, eps))
        gap = heat_mass.lemma1_gap(strip, spectrum, config.gap_params)
        tables.gaps.append(gap)
        tables.chains.append(heat_mass.proof_chain_sum(spectrum, eps, config.gap_params, flags))
        logger.info("Strip evaluated", extra={"eps": eps, "strip_measure": strip.strip_measure,
                                              "gap": gap.gap, "gap_ratio": gap.ratio})

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        """Execute the heat command: curves, gap table, heat content and tail tables"""
        tables = self.evaluate(config)
        if config.output_format == "json":
            self._result_repository.write_json(config.output, tables.to_dict())
        else:
            self._write_csv(config.output, tables)
        samples = sum(len(curve.samples) for curve in tables.curves.values())
        self._event_bus.publish([HeatEvaluated.create(
            run_id=str(uuid.uuid4()),
            domain=config.domain,
            method="spectral",
            samples=samples,
        )])
        return {"domain": config.domain, "samples": samples, "gap": [g.gap for g in tables.gaps]}

    def _write_csv(self, output: Optional[str], tables: HeatTables) -> None:
        """Curves go to output; the other tables to <stem>_gap.csv, <stem>_content.csv and <stem>_tail.csv"""
        sections = [
            (None, tables.curve_rows(), CURVE_COLUMNS),
            ("gap", tables.gap_rows(), GAP_COLUMNS),
            ("content", tables.content_rows(), CONTENT_COLUMNS),
            ("tail", tables.tails, TAIL_COLUMNS),
        ]
        for suffix, rows, columns in sections:
            if suffix is not None and not rows:
                continue
            self._result_repository.write_csv(sidecar_path(output, suffix), rows, columns)


def sidecar_path(output: Optional[str], suffix: Optional[str]) -> Optional[str]:
    if output is None or suffix is None:
        return output
    path = Path(output)
    return str(path.with_name(f"{path.stem}_{suffix}{path.suffix or '.csv'}"))
