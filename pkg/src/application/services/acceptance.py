"""Acceptance suite run by ``meanspec check``.

Every criterion returns (passed, detail) and runs with fixed seeds, so two runs
print the same verdicts.
"""
from dataclasses import dataclass
import filecmp
import math
from pathlib import Path
import tempfile
import time
import uuid
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from src.application.commands import RunConfig
from src.application.services.compute_spectrum import ComputeSpectrumService, EventBus
from src.application.services.run_census import RunCensusService
from src.application.services.run_monte_carlo import RunMonteCarloService, reflection_survival
from src.commons.utils import logger
from src.domain.events import CriterionEvaluated
from src.domain.exceptions import InputError
from src.domain.services import (
    closed_form_spectra,
    discrete_laplacian,
    eigensolver,
    heat_mass,
    mean_census,
    monte_carlo,
    special_functions,
)
from src.domain.value_objects import CensusConfig, Convention, DomainSpec, EigSolveConfig, HeatGapParams, MCConfig

Outcome = Tuple[bool, str]

L_SHAPE = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]
# grid resolutions as cells across the longest side of the bounding box
MARGIN_CELLS = 512
SQUARE_FIDELITY_CELLS = 256
DISK_FIDELITY_CELLS = 512
SEED = 20240601


def grid_spacing(bounding_box: Sequence[Tuple[float, float]], cells: int) -> float:
    """Spacing that puts `cells` grid cells across the longest side of a bounding box"""
    return max(hi - lo for lo, hi in bounding_box) / cells


def polygon_box(vertices: Sequence[Tuple[float, float]]) -> Tuple[Tuple[float, float], ...]:
    points = np.asarray(vertices, dtype=float)
    return tuple((float(points[:, k].min()), float(points[:, k].max())) for k in (0, 1))


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    seconds: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name:<18} {self.seconds:8.2f}s  {self.detail}"


def _within(value: float, lo: float, hi: float) -> bool:
    return lo <= value <= hi


def _discrete_square(h: float, m: int) -> np.ndarray:
    """Smallest m eigenvalues of the five-point operator on the unit square."""
    p = int(round(1.0 / h)) - 1
    a = np.arange(1, p + 1)
    axis = 4.0 / h ** 2 * np.sin(a * np.pi * h / 2.0) ** 2
    return np.sort((axis[:, None] + axis[None, :]).ravel())[:m]


class AcceptanceService:
    """Service running the named acceptance criteria"""

    def __init__(self, spectrum_service: ComputeSpectrumService, census_service: RunCensusService,
                 monte_carlo_service: RunMonteCarloService, event_bus: EventBus):
        self._spectrum_service = spectrum_service
        self._census_service = census_service
        self._monte_carlo_service = monte_carlo_service
        self._event_bus = event_bus
        self._criteria: Dict[str, Callable[[], Outcome]] = {
            "bessel": self.bessel,
            "cube_fraction": self.cube_fraction,
            "disk_ball_scaling": self.disk_ball_scaling,
            "theorem_margin": self.theorem_margin,
            "parseval": self.parseval,
            "ht_constant": self.ht_constant,
            "reflection": self.reflection,
            "heat_gap": self.heat_gap,
            "heat_content": self.heat_content,
            "gamma_tail": self.gamma_tail,
            "grid_fidelity": self.grid_fidelity,
            "degeneracy": self.degeneracy,
            "determinism": self.determinism,
        }

    @property
    def names(self) -> List[str]:
        return list(self._criteria)

    def run_one(self, name: str) -> CriterionResult:
        start = time.perf_counter()
        try:
            passed, detail = self._criteria[name]()
        except Exception as error:
            logger.exception("Criterion raised", extra={"criterion": name})
            passed, detail = False, f"{type(error).__name__}: {error}"
        seconds = time.perf_counter() - start
        result = CriterionResult(name=name, passed=bool(passed), seconds=seconds, detail=detail)
        logger.info("Criterion evaluated", extra={"criterion": name, "passed": result.passed,
                                                  "seconds": round(seconds, 3)})
        return result

    def execute(self, only: Optional[Sequence[str]] = None) -> List[CriterionResult]:
        """Execute the selected criteria (all by default) in registry order"""
        selected = list(only) if only else self.names
        unknown = [name for name in selected if name not in self._criteria]
        if unknown:
            raise InputError(f"Unknown criteria: {', '.join(unknown)}; known: {', '.join(self.names)}")
        run_id = str(uuid.uuid4())
        results = []
        for name in self.names:
            if name not in selected:
                continue
            result = self.run_one(name)
            results.append(result)
            self._event_bus.publish([CriterionEvaluated.create(
                run_id=run_id, name=name, passed=result.passed, seconds=result.seconds, detail=result.detail)])
        return results

    def bessel(self) -> Outcome:
        oracle = {(0, 1): special.jn_zeros(0, 1)[0], (1, 1): special.jn_zeros(1, 1)[0]}
        errors = {key: abs(special_functions.bessel_zero(*key) - value) for key, value in oracle.items()}
        worst = max(errors.values())
        if worst > 1e-9:
            return False, f"zero mismatch {worst:.2e} against scipy"
        for m in range(21):
            zeros = [special_functions.bessel_zero(m, k) for k in range(1, 52)]
            upper = [special_functions.bessel_zero(m + 1, k) for k in range(1, 51)]
            for k in range(50):
                if not zeros[k] < upper[k] < zeros[k + 1]:
                    return False, f"interlacing broken at m={m}, k={k + 1}"
        return True, f"j01, j11 within {worst:.1e}; interlacing holds for m <= 20, k <= 50"

    def cube_fraction(self) -> Outcome:
        square = closed_form_spectra.enumerate_box([1.0, 1.0], 20_000)
        cube = closed_form_spectra.enumerate_box([1.0, 1.0, 1.0], 50_000)
        f2 = float(mean_census.classify(square, CensusConfig()).mean())
        f3 = float(mean_census.classify(cube, CensusConfig()).mean())
        passed = _within(f2, 0.23, 0.27) and _within(f3, 0.105, 0.145)
        return passed, f"square {f2:.4f}, cube {f3:.4f}"

    def disk_ball_scaling(self) -> Outcome:
        disk = mean_census.build_report(closed_form_spectra.enumerate_disk(1.0, 10_000), CensusConfig())
        ball = mean_census.build_report(closed_form_spectra.enumerate_ball3(1.0, 20_000), CensusConfig())
        count = disk.count_at(10_000)
        expected = 2.0 / math.pi * 100.0
        e_disk, e_ball = disk.fitted_exponent.exponent, ball.fitted_exponent.exponent
        passed = (_within(e_disk, 0.45, 0.55) and abs(count - expected) <= 0.2 * expected
                  and _within(e_ball, 0.28, 0.40))
        return passed, f"disk exponent {e_disk:.3f}, N_A(10000) = {count}; ball exponent {e_ball:.3f}"

    def theorem_margin(self) -> Outcome:
        square = closed_form_spectra.enumerate_box([1.0, 1.0], 200)
        disk = closed_form_spectra.enumerate_disk(1.0, 200)
        lshape_h = grid_spacing(polygon_box(L_SHAPE), MARGIN_CELLS)
        lshape = self._spectrum_service.solve_grid(discrete_laplacian.rasterize(L_SHAPE, lshape_h), 200, SEED,
                                                   name="lshape")
        details, passed = [], True
        for name, spectrum, census in (("square", square, CensusConfig()), ("disk", disk, CensusConfig()),
                                       ("lshape", lshape.spectrum, CensusConfig.for_grid())):
            report = mean_census.build_report(spectrum, census)
            margin = mean_census.theorem_margin(report, spectrum.domain.dim)
            at_100 = float(margin.margin[margin.n == 100][0])
            ok = bool(np.all(margin.margin > 0)) and margin.margin[-1] > at_100
            passed &= ok
            details.append(f"{name} m(100)={at_100:.2f} m(200)={margin.margin[-1]:.2f}")
        return passed, "; ".join(details)

    def parseval(self) -> Outcome:
        interval = mean_census.parseval_partial(closed_form_spectra.enumerate_box([1.0], 1000))
        square = mean_census.parseval_partial(closed_form_spectra.enumerate_box([1.0, 1.0], 10_000))
        disk = mean_census.parseval_partial(closed_form_spectra.enumerate_disk(1.0, 10_000))
        monotone = all(np.all(np.diff(s.partial) >= 0) for s in (interval, square, disk))
        s1, s2, s3 = interval.partial[-1], square.partial[-1], disk.partial[-1] / math.pi
        passed = monotone and s1 >= 0.999 and _within(s2, 0.97, 1.0) and _within(s3, 0.97, 1.0)
        return passed, f"interval {s1:.5f}, square {s2:.5f}, disk/pi {s3:.5f}, monotone={monotone}"

    def ht_constant(self) -> Outcome:
        results = []
        for lengths, n, expected in (([1.0], 1000, 2.0 * math.sqrt(2.0)),
                                     ([1.0, 1.0], 10_000, 8.0 * math.sqrt(2.0) / math.pi)):
            first = mean_census.ht_constant(closed_form_spectra.enumerate_box(lengths, n))
            doubled = mean_census.ht_constant(closed_form_spectra.enumerate_box(lengths, 2 * n))
            results.append((abs(first.value - expected) <= 1e-10 and first.argmax == doubled.argmax,
                            f"d={len(lengths)}: {first.value:.12f} at {first.label}"))
        return all(ok for ok, _ in results), "; ".join(text for _, text in results)

    def reflection(self) -> Outcome:
        eps, times = 0.1, [0.0025, 0.01, 0.04]
        config = MCConfig(n_paths=100_000, seed=SEED, bridge_correction=True)
        estimates = monte_carlo.mc_survival_curve(monte_carlo.HalfSpaceRegion(),
                                                  monte_carlo.PointStart([eps], scale=eps), times, config)
        details, passed = [], True
        for t, estimate in zip(times, estimates):
            exact = reflection_survival(eps, t)
            z = abs(estimate.probability - exact) / estimate.stderr
            passed &= z <= 3.0
            details.append(f"t={t:g}: {estimate.probability:.4f} vs {exact:.4f} ({z:.1f} se)")
        return passed, "; ".join(details)

    def heat_gap(self) -> Outcome:
        disk = DomainSpec.disk(1.0)
        params = HeatGapParams(c1=1.0, c2=100.0)
        sweep = [0.02, 0.04, 0.08]
        cutoff = heat_mass.required_cutoff(params.c1 * sweep[0] ** 2, heat_mass.strip_volume(disk, sweep[0]),
                                           disk.volume, 1e-4)
        spectrum = closed_form_spectra.nonzero_mean_modes(disk, cutoff)
        ratios = [heat_mass.lemma1_gap(heat_mass.exact_strip_coefficients(spectrum, eps), spectrum, params).ratio
                  for eps in sweep]
        positive = all(r > 0 for r in ratios)
        spread = max(ratios) / min(ratios) if positive else float("inf")
        eps, t = 0.05, 0.0025
        spectral = heat_mass.spectral_heat_mass(heat_mass.exact_strip_coefficients(spectrum, eps), spectrum, t)
        simulated = monte_carlo.mc_heat_mass(monte_carlo.region_for(disk), eps, t,
                                             MCConfig(n_paths=100_000, seed=SEED))
        z = abs(simulated.value - spectral.value) / simulated.stderr
        passed = positive and spread <= 2.5 and z <= 3.0
        ratio_text = ", ".join(f"{r:.4f}" for r in ratios)
        return passed, f"gap/eps [{ratio_text}] spread {spread:.3f}; MC vs spectral {z:.1f} se"

    def heat_content(self) -> Outcome:
        disk_times = np.geomspace(1e-4, 1e-2, 9)
        disk = closed_form_spectra.nonzero_mean_modes(DomainSpec.disk(1.0), 40.0 / disk_times[0])
        scaled = [row.scaled_residual for row in heat_mass.heat_content_table(disk, disk_times)]
        spread = max(scaled) / min(scaled)
        square_times = np.geomspace(1e-5, 1e-4, 5)
        square = closed_form_spectra.nonzero_mean_modes(DomainSpec.box([1.0, 1.0]), 40.0 / square_times[0])
        target = 8.0 / math.sqrt(math.pi)
        slopes = [row.two_term_slope for row in heat_mass.heat_content_table(square, square_times)]
        worst = max(abs(s - target) / target for s in slopes)
        passed = spread <= 10.0 and worst <= 0.05
        return passed, f"disk residual spread {spread:.2f}; square slope off by {worst:.2%}"

    def gamma_tail(self) -> Outcome:
        details, passed = [], True
        for d, c_cutoff in ((2, 2.0), (3, 4.0)):
            c_weyl = mean_census.weyl_constant(d, 1.0)
            for eps in (1e-2, 1e-3):
                tail = heat_mass.lemma4_tail(c_weyl, d, eps, c_cutoff)
                ok = tail.ratio <= 0.1
                if d == 3:
                    ok &= abs(tail.value - tail.integral) <= 0.01 * tail.integral
                passed &= ok
                details.append(f"d={d} eps={eps:g} ratio={tail.ratio:.2e}")
        return passed, "; ".join(details)

    def grid_fidelity(self) -> Outcome:
        square_domain = DomainSpec.box([1.0, 1.0])
        square_h = grid_spacing(square_domain.bounding_box, SQUARE_FIDELITY_CELLS)
        square_mask = discrete_laplacian.rasterize(square_domain, square_h)
        square = self._spectrum_service.solve_grid(square_mask, 20, SEED, name="square")
        exact = closed_form_spectra.enumerate_box([1.0, 1.0], 20)
        continuum = np.max(np.abs(square.spectrum.lambdas / exact.lambdas - 1.0))
        discrete = np.max(np.abs(square.spectrum.lambdas / _discrete_square(square_h, 20) - 1.0))
        mean_error = 0.0
        for members in exact.head(10).clusters:
            idx = list(members)
            reference = np.linalg.norm(exact.means[idx])
            error = abs(np.linalg.norm(square.spectrum.means[idx]) - reference)
            mean_error = max(mean_error, error / reference if reference > 0 else error)
        disk_domain = DomainSpec.disk(1.0)
        disk_h = grid_spacing(disk_domain.bounding_box, DISK_FIDELITY_CELLS)
        disk_mask = discrete_laplacian.rasterize(disk_domain, disk_h)
        disk = self._spectrum_service.solve_grid(disk_mask, 10, SEED, name="disk")
        bessel = closed_form_spectra.enumerate_disk(1.0, 10).lambdas
        disk_error = np.max(np.abs(disk.spectrum.lambdas / bessel - 1.0))
        passed = continuum <= 5e-3 and discrete <= 1e-7 and mean_error <= 0.02 and disk_error <= 0.01
        return passed, (f"square continuum {continuum:.2e}, discrete {discrete:.2e}, means {mean_error:.2e}; "
                        f"disk {disk_error:.2e}")

    def degeneracy(self) -> Outcome:
        square = closed_form_spectra.enumerate_box([1.0, 1.0], 10)
        canonical = mean_census.classify(square, CensusConfig(convention=Convention.CANONICAL))
        cluster = mean_census.classify(square, CensusConfig(convention=Convention.CLUSTER))
        counts = {}
        for pair in ((1, 2), (1, 3)):
            members = next(c for c in square.clusters if square.labels[c[0]] == pair)
            idx = list(members)
            counts[pair] = (int(canonical[idx].sum()), int(cluster[idx].sum()))
        passed = counts[(1, 3)] == (2, 1) and counts[(1, 2)] == (0, 0)
        return passed, f"(1,3)/(3,1) canonical/cluster {counts[(1, 3)]}; (1,2)/(2,1) {counts[(1, 2)]}"

    def determinism(self) -> Outcome:
        runs = [
            (self._spectrum_service, {"domain": "box:1x1", "n": 100}, None),
            (self._spectrum_service, {"domain": "disk:1", "n": 100}, None),
            (self._census_service, {"domain": "disk:1", "n": 500}, None),
            (self._monte_carlo_service, {"domain": "halfspace", "eps": [0.1], "t": [0.01], "paths": 20_000,
                                         "seed": SEED, "output_format": "csv"}, (1, 8)),
        ]
        with tempfile.TemporaryDirectory() as workdir:
            for number, (service, fields, threads) in enumerate(runs):
                first_threads, second_threads = threads or (1, 1)
                outputs = []
                for repeat, count in enumerate((first_threads, second_threads)):
                    path = str(Path(workdir) / f"run{number}_{repeat}.out")
                    service.execute(RunConfig(output=path, threads=count, **fields))
                    outputs.append(path)
                if not filecmp.cmp(outputs[0], outputs[1], shallow=False):
                    return False, f"outputs of {fields['domain']} differ between reruns"
        return True, f"{len(runs)} commands byte-identical on rerun (threads 1 vs 8 for mc)"
