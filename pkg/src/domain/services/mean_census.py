"""Mean values of eigenfunctions, the nonzero-mean census and its statistics."""
import math
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..entities import (
  BoundaryMassBand,
  BoundaryMassFit,
  CensusReport,
  EigResult,
  ExponentFit,
  GridMask,
  HTConstant,
  MarginSummary,
  ParsevalSummary,
  Spectrum,
  WeylModel,
)
from ..exceptions import InputError, ResolutionError
from ..value_objects import CensusConfig, Convention, DomainKind, ModeSource, ZeroTolPolicy
from .closed_form_spectra import unit_ball_volume

MARGIN_START = 10
MARGIN_MIN_FROM = 100
WEYL_MIN_MODES = 500


def power_law_fit(x: Sequence[float], y: Sequence[float]) -> ExponentFit:
  """Unweighted least squares of log y against log x."""
  x = np.asarray(x, dtype=float)
  y = np.asarray(y, dtype=float)
  if x.size < 2 or np.any(x <= 0) or np.any(y <= 0):
    raise InputError("Power-law fit needs at least two positive points")
  design = np.column_stack([np.log(x), np.ones(x.size)])
  coef, *_ = np.linalg.lstsq(design, np.log(y), rcond=None)
  residual = float(np.sqrt(np.mean((design @ coef - np.log(y)) ** 2)))
  return ExponentFit(exponent=float(coef[0]), prefactor=float(math.exp(coef[1])),
                     x_lo=float(x.min()), x_hi=float(x.max()), residual=residual)


def compute_means(spectrum: Spectrum, vectors: Optional[EigResult] = None,
                  mask: Optional[GridMask] = None) -> Spectrum:
  """Fill in ∫φ_k for every mode.

  Exact spectra already carry closed-form means. Grid means are h^d·Σφ_i;
  each vector of `vectors` is flipped in place so that its mean is >= 0.
  """
  if spectrum.source == ModeSource.EXACT:
    return spectrum
  if vectors is None or mask is None:
    raise InputError("Grid spectra need eigenvectors and the grid mask to compute means")
  if vectors.vectors.shape != (mask.n_inside, spectrum.n):
    raise InputError("Eigenvectors do not match the mask and the spectrum")
  means = mask.cell_measure * vectors.vectors.sum(axis=0)
  negative = means < 0
  vectors.vectors[:, negative] *= -1.0
  return spectrum.with_means(np.abs(means))


def zero_tolerances(spectrum: Spectrum, config: CensusConfig) -> np.ndarray:
  """Per-mode threshold below which a mean counts as zero."""
  if config.zero_tol_policy == ZeroTolPolicy.FIXED:
    return np.full(spectrum.n, config.zero_tol_abs)
  if spectrum.domain.kind != DomainKind.MASK:
    raise InputError("Discretization-scaled tolerances need a grid domain")
  h = spectrum.domain.mask.h
  return np.maximum(config.c_tol * h * h * np.sqrt(spectrum.lambdas), config.zero_tol_abs)


def classify(spectrum: Spectrum, config: CensusConfig) -> np.ndarray:
  """Per-mode membership in the nonzero-mean set.

  Canonical: each mode on its own. Cluster: one flag per degeneracy cluster,
  on its first mode, set when the cluster's mean vector is nonzero.
  """
  if spectrum.mean_support_only:
    raise InputError("Census needs the full spectrum, not only the nonzero-mean modes")
  means = np.abs(spectrum.means)
  tolerance = zero_tolerances(spectrum, config)
  if config.convention == Convention.CANONICAL:
    return means > tolerance
  flags = np.zeros(spectrum.n, dtype=bool)
  for members in spectrum.clusters:
    idx = list(members)
    flags[idx[0]] = np.linalg.norm(means[idx]) > tolerance[idx].max()
  return flags


def counting_exponent(counting: np.ndarray) -> Optional[ExponentFit]:
  """Exponent of N_A(n) over the top half of the index range."""
  n = np.arange(1, counting.size + 1)
  upper = n >= max(counting.size // 2, 1)
  x, y = n[upper], counting[upper]
  if np.count_nonzero(y > 0) < 2 or x.size < 2:
    return None
  positive = y > 0
  return power_law_fit(x[positive], y[positive])


def theorem_margin(report: CensusReport, d: int, alpha: float = 0.5) -> MarginSummary:
  """m(n) = N_A(n)·(log n)^{d/2} / n^{alpha/d} for n in [10, n_max].

  alpha = 1/2 is the general lower bound; a boundary-mass exponent alpha
  gives the sharper curve.
  """
  if report.n_max < MARGIN_MIN_FROM:
    raise InputError(f"Theorem margin needs at least {MARGIN_MIN_FROM} modes")
  n = np.arange(MARGIN_START, report.n_max + 1)
  margin = report.counting[n - 1] * np.log(n) ** (d / 2.0) / n ** (alpha / d)
  tail = n >= MARGIN_MIN_FROM
  lowest = int(np.argmin(margin[tail]))
  positive = tail & (margin > 0)
  slope = power_law_fit(n[positive], margin[positive]).exponent if positive.sum() >= 2 else 0.0
  return MarginSummary(n=n, margin=margin, alpha=alpha, min_value=float(margin[tail][lowest]),
                       min_at=int(n[tail][lowest]), trend_slope=slope)


def parseval_partial(spectrum: Spectrum) -> ParsevalSummary:
  """S(n) = Σ_{k<=n} (∫φ_k)²."""
  return ParsevalSummary(partial=np.cumsum(spectrum.means ** 2), volume=spectrum.domain.volume)


def ht_constant(spectrum: Spectrum) -> HTConstant:
  """max_k sqrt(λ_k)·|∫φ_k|, first index attaining it."""
  values = np.sqrt(spectrum.lambdas) * np.abs(spectrum.means)
  argmax = int(np.argmax(values))
  return HTConstant(value=float(values[argmax]), argmax=argmax, label=spectrum.modes[argmax].label)


def weyl_constant(d: int, volume: float) -> float:
  """4π² / (ω_d·|Ω|)^{2/d}."""
  return 4.0 * math.pi ** 2 / (unit_ball_volume(d) * volume) ** (2.0 / d)


def weyl_fit(spectrum: Spectrum) -> WeylModel:
  """Fit λ_k ≈ c·k^{2/d} on the upper half of the computed range."""
  if spectrum.n < WEYL_MIN_MODES:
    raise InputError(f"Weyl fit needs at least {WEYL_MIN_MODES} modes")
  d = spectrum.domain.dim
  k = np.arange(1, spectrum.n + 1)
  upper = k >= spectrum.n // 2
  free = power_law_fit(k[upper], spectrum.lambdas[upper])
  c_fixed = float(np.exp(np.mean(np.log(spectrum.lambdas[upper]) - (2.0 / d) * np.log(k[upper]))))
  return WeylModel(d=d, c_weyl=c_fixed, exponent=free.exponent, c_free=free.prefactor,
                   c_analytic=weyl_constant(d, spectrum.domain.volume))


def build_report(spectrum: Spectrum, config: CensusConfig, alpha: float = 0.5) -> CensusReport:
  """Classify and attach every statistic the spectrum length allows."""
  flags = classify(spectrum, config)
  report = CensusReport(domain=str(spectrum.domain), d=spectrum.domain.dim,
                        convention=config.convention, flags=flags, ht=ht_constant(spectrum),
                        parseval=parseval_partial(spectrum))
  report.fitted_exponent = counting_exponent(report.counting)
  if report.n_max >= MARGIN_MIN_FROM:
    report.margin = theorem_margin(report, report.d, alpha)
  if report.n_max >= WEYL_MIN_MODES:
    report.weyl = weyl_fit(spectrum)
  return report


def _strip_integrals(phi: np.ndarray, mask: GridMask, eps: float) -> Tuple[float, float]:
  near = mask.inside_distance <= eps
  values = phi[near]
  return (float(mask.cell_measure * np.sum(values ** 2)),
          float(abs(mask.cell_measure * np.sum(values))))


def _strip_widths(eps_grid: Sequence[float], mask: GridMask) -> np.ndarray:
  """Sorted widths, checked against [4h, inradius/2] and the factor-of-8 span."""
  eps = np.sort(np.asarray(eps_grid, dtype=float))
  if eps.size < 4 or eps[-1] / eps[0] < 8.0:
    raise InputError("Boundary-mass fits need at least 4 widths spanning a factor of 8")
  if eps[0] < 4.0 * mask.h:
    raise ResolutionError(f"Strip width {eps[0]} is below 4h = {4.0 * mask.h}")
  upper = 0.5 * mask.inradius
  if eps[-1] > upper * (1.0 + 1e-12):
    raise InputError(f"Strip width {eps[-1]} exceeds half the inradius, {upper}")
  return eps


def _fit_mode(vectors: EigResult, mask: GridMask, mode_index: int, eps: np.ndarray) -> BoundaryMassFit:
  phi = vectors.vectors[:, mode_index]
  pairs = np.array([_strip_integrals(phi, mask, e) for e in eps])
  l2, l1 = pairs[:, 0], pairs[:, 1]
  fit_l2 = power_law_fit(eps, l2)
  positive = l1 > 0
  alpha_l1 = power_law_fit(eps[positive], l1[positive]).exponent if positive.sum() >= 2 else float("nan")
  return BoundaryMassFit(mode_index=mode_index, eps_grid=eps, strip_l2=l2, strip_l1=l1,
                         alpha_l2=fit_l2.exponent, alpha_l1=alpha_l1, fit_residual=fit_l2.residual)


def boundary_mass_fit(vectors: EigResult, mask: GridMask, mode_index: int,
                      eps_grid: Sequence[float]) -> BoundaryMassFit:
  """Strip integrals ∫_{d<=eps} φ² and |∫_{d<=eps} φ| with their log-log exponents."""
  return _fit_mode(vectors, mask, mode_index, _strip_widths(eps_grid, mask))


def boundary_mass_band(vectors: EigResult, mask: GridMask,
                       eps_grid: Sequence[float]) -> BoundaryMassBand:
  """Boundary-mass fits of every computed mode, summarised by min and median α_l2."""
  eps = _strip_widths(eps_grid, mask)
  return BoundaryMassBand(fits=[_fit_mode(vectors, mask, k, eps) for k in range(vectors.m)])


def wavelength_strip_mass(vectors: EigResult, mask: GridMask, spectrum: Spectrum,
                          delta: float) -> Tuple[np.ndarray, np.ndarray]:
  """∫ φ_k² over the strip of width delta/sqrt(λ_k), and that mass divided by delta².

  Modes whose strip is thinner than half a grid cell report nan.
  """
  mass = np.full(spectrum.n, np.nan)
  for k, lam in enumerate(spectrum.lambdas):
    width = delta / math.sqrt(lam)
    if width < mask.h / 2.0:
      continue
    mass[k] = _strip_integrals(vectors.vectors[:, k], mask, width)[0]
  return mass, mass / delta ** 2


def density_table(reports: Dict[str, CensusReport]) -> Dict[str, Dict[str, float]]:
  """N_A(n)/n at the last computed n, per domain."""
  return {
    name: {"n": report.n_max, "count": report.count_at(report.n_max),
           "density": float(report.density[-1])}
    for name, report in reports.items()
  }
