"""Heat mass of boundary-strip initial data and the spectral tail estimates.

M(t) = Σ_k e^{-λ_k t}·⟨f, φ_k⟩·∫φ_k for f the indicator of {d(x, Ω^c) <= eps}.
Only modes with nonzero mean contribute, so exact spectra restricted to those
modes are accepted wherever a full spectrum is.
"""
import math
from typing import Iterable, List, Optional, Sequence

import numpy as np

from ..entities import (
  ChainSum,
  EigResult,
  GapRow,
  GridMask,
  HeatContentRow,
  HeatCurve,
  HeatSample,
  HeatValue,
  Spectrum,
  StripData,
  TailSum,
)
from ..exceptions import InputError, InsufficientSpectrumError, ParsevalGapError, ResolutionError
from ..value_objects import DomainKind, DomainSpec, HeatGapParams, HeatMethod, ModeSource
from . import special_functions
from .discrete_laplacian import strip_cells

TRUNCATION_ACCURACY = 0.01
PARSEVAL_TOLERANCE = 0.01
RELATIVE_CUTOFF = 1e-18
DEFAULT_DIRECT_TERMS = 2_000_000
_BLOCK = 65_536


def grid_strip_coefficients(vectors: EigResult, mask: GridMask, eps: float) -> StripData:
  """⟨f, φ_k⟩ = h^d·Σ_{strip} φ_k for grid modes."""
  if eps < 4.0 * mask.h:
    raise ResolutionError(f"Strip width {eps} is below 4h = {4.0 * mask.h}")
  selected, measure = strip_cells(mask, eps)
  coefficients = mask.cell_measure * vectors.vectors[selected, :].sum(axis=0)
  return StripData(eps=eps, coefficients=coefficients, strip_measure=measure)


def strip_volume(domain: DomainSpec, eps: float) -> float:
  """Measure of {x in Ω: d(x, Ω^c) <= eps} for boxes, the disk and the ball."""
  if domain.kind == DomainKind.BOX:
    inner = math.prod(max(length - 2.0 * eps, 0.0) for length in domain.lengths)
    return domain.volume - inner
  if domain.kind == DomainKind.DISK:
    return domain.volume - math.pi * max(domain.radius - eps, 0.0) ** 2
  if domain.kind == DomainKind.BALL3:
    return domain.volume - 4.0 / 3.0 * math.pi * max(domain.radius - eps, 0.0) ** 3
  raise InputError(f"No closed-form strip for {domain}")


def _box_inner_fraction(label, lengths, eps: float) -> float:
  if any(eps >= 0.5 * length for length in lengths):
    return 0.0
  fraction = 1.0
  for a, length in zip(label, lengths):
    fraction *= math.cos(a * math.pi * eps / length)
  return fraction


def _disk_inner_fraction(label, radius: float, eps: float) -> float:
  if eps >= radius:
    return 0.0
  rho = 1.0 - eps / radius
  zero = special_functions.bessel_zero(0, label[1])
  return rho * special_functions.bessel_j(1, zero * rho) / special_functions.bessel_j(1, zero)


def _ball_inner_fraction(label, radius: float, eps: float) -> float:
  if eps >= radius:
    return 0.0
  k = label[1]
  b = k * math.pi / radius
  s = radius - eps
  return (math.sin(b * s) / b - s * math.cos(b * s)) * (-1) ** (k + 1) / radius


def exact_strip_coefficients(spectrum: Spectrum, eps: float) -> StripData:
  """⟨f, φ_k⟩ in closed form: the mean minus the integral over the inner parallel set."""
  if spectrum.source != ModeSource.EXACT:
    raise InputError("Closed-form strip coefficients need an exact spectrum")
  domain = spectrum.domain
  coefficients = np.zeros(spectrum.n)
  for k, mode in enumerate(spectrum.modes):
    if mode.mean == 0.0:
      continue
    if domain.kind == DomainKind.BOX:
      inner = _box_inner_fraction(mode.label, domain.lengths, eps)
    elif domain.kind == DomainKind.DISK:
      inner = _disk_inner_fraction(mode.label, domain.radius, eps)
    elif domain.kind == DomainKind.BALL3:
      inner = _ball_inner_fraction(mode.label, domain.radius, eps)
    else:
      raise InputError(f"No closed-form strip for {domain}")
    coefficients[k] = mode.mean * (1.0 - inner)
  return StripData(eps=eps, coefficients=coefficients, strip_measure=strip_volume(domain, eps))


def truncation_bound(strip: StripData, spectrum: Spectrum, t: float) -> float:
  """Cauchy-Schwarz bound on the modes above λ_max."""
  mean_tail = math.sqrt(max(spectrum.domain.volume - float(np.sum(spectrum.means ** 2)), 0.0))
  return math.exp(-spectrum.lambda_max * t) * strip.coefficient_tail * mean_tail


def required_cutoff(t: float, strip_measure: float, volume: float,
                    accuracy: float = TRUNCATION_ACCURACY) -> float:
  """Eigenvalue level making the worst-case truncation bound fall below accuracy·strip."""
  ratio = math.sqrt(strip_measure * volume) / (accuracy * strip_measure)
  return max(math.log(ratio), 1.0) / t


def spectral_heat_mass(strip: StripData, spectrum: Spectrum, t: float,
                       accuracy: float = TRUNCATION_ACCURACY) -> HeatValue:
  """M(t) over the computed modes with the bound on the omitted ones."""
  if not (t > 0):
    raise InputError("Heat time must be positive")
  if strip.coefficients.size != spectrum.n:
    raise InputError("Strip coefficients do not match the spectrum")
  bound = truncation_bound(strip, spectrum, t)
  if bound > accuracy * strip.strip_measure:
    raise InsufficientSpectrumError(
      f"Truncation bound {bound:.3e} exceeds {accuracy:.0%} of the strip measure at t={t:g}")
  value = float(np.sum(np.exp(-spectrum.lambdas * t) * strip.coefficients * spectrum.means))
  return HeatValue(value=value, truncation_bound=bound)


def heat_curve(strip: StripData, spectrum: Spectrum, times: Iterable[float]) -> HeatCurve:
  samples, bound = [], 0.0
  for t in sorted(times):
    result = spectral_heat_mass(strip, spectrum, t)
    samples.append(HeatSample(t=t, value=result.value))
    bound = max(bound, result.truncation_bound)
  return HeatCurve(samples=samples, method=HeatMethod.SPECTRAL, truncation_bound=bound)


def lemma1_gap(strip: StripData, spectrum: Spectrum, params: HeatGapParams) -> GapRow:
  """M(c1·eps²) - M(c2·eps²) and its ratio to eps."""
  eps = strip.eps
  early = spectral_heat_mass(strip, spectrum, params.c1 * eps * eps)
  late = spectral_heat_mass(strip, spectrum, params.c2 * eps * eps)
  gap = early.value - late.value
  return GapRow(eps=eps, gap=gap, ratio=gap / eps, c1=params.c1, c2=params.c2)


def heat_content(spectrum: Spectrum, t: float,
                 parseval_tolerance: float = PARSEVAL_TOLERANCE) -> HeatContentRow:
  """M_1(t) = Σ (∫φ_k)²·e^{-λ_k t} against |Ω| - (2/√π)|∂Ω|√t + ((d-1)/2)·t·∫H.

  The third term is used only where the boundary curvature is modelled and
  smooth (disk, ball); boxes are compared with two terms.
  """
  domain = spectrum.domain
  squares = spectrum.means ** 2
  gap = domain.volume - float(np.sum(squares))
  if gap > parseval_tolerance * domain.volume:
    raise ParsevalGapError(f"Parseval gap {gap:.3e} exceeds {parseval_tolerance:.0%} of the volume")
  value = float(np.sum(squares * np.exp(-spectrum.lambdas * t)))
  expansion = domain.volume - 2.0 / math.sqrt(math.pi) * domain.perimeter * math.sqrt(t)
  three_term = domain.kind in (DomainKind.DISK, DomainKind.BALL3)
  if three_term:
    expansion += 0.5 * (domain.dim - 1) * t * domain.curvature_integral
  residual = value - expansion
  return HeatContentRow(t=t, value=value, expansion=expansion, residual=residual,
                        scaled_residual=abs(residual) / t ** 1.5,
                        two_term_slope=(domain.volume - value) / math.sqrt(t),
                        three_term=three_term)


def heat_content_table(spectrum: Spectrum, times: Sequence[float]) -> List[HeatContentRow]:
  return [heat_content(spectrum, t) for t in times]


def _tail_term(k: np.ndarray, c_weyl: float, d: int, eps: float) -> np.ndarray:
  lam = c_weyl * k ** (2.0 / d)
  return np.exp(-lam * eps * eps) / np.sqrt(lam)


def tail_integral(c_weyl: float, d: int, eps: float, lower: float) -> float:
  """∫ e^{-c k^{2/d} eps²}/sqrt(c k^{2/d}) dk over c·k^{2/d} >= lower, via Γ((d-1)/2, lower·eps²)."""
  if d < 2:
    raise InputError("Incomplete-gamma form of the tail needs d >= 2")
  a = c_weyl * eps * eps
  return (c_weyl ** -0.5 * 0.5 * d * a ** (0.5 * (1 - d))
          * special_functions.upper_gamma(0.5 * (d - 1), lower * eps * eps))


def _euler_maclaurin(k0: float, c_weyl: float, d: int, eps: float) -> float:
  """Σ_{k>=k0} f(k) ≈ ∫_{k0}^∞ f + f(k0)/2 - f'(k0)/12."""
  p = 2.0 / d
  a = c_weyl * eps * eps
  f0 = float(_tail_term(np.array([k0]), c_weyl, d, eps)[0])
  df0 = f0 * (-a * p * k0 ** (p - 1.0) - 0.5 * p / k0)
  return tail_integral(c_weyl, d, eps, c_weyl * k0 ** p) + 0.5 * f0 - df0 / 12.0


def lemma4_tail(c_weyl: float, d: int, eps: float, c_cutoff: float,
                max_direct_terms: int = DEFAULT_DIRECT_TERMS) -> TailSum:
  """Σ over c_weyl·k^{2/d} >= B of e^{-c_weyl k^{2/d} eps²}/sqrt(c_weyl k^{2/d}).

  B = (c_cutoff/eps²)·log(1/eps). Terms are summed directly in blocks until
  they drop below 1e-18 of the running sum; a tail longer than
  max_direct_terms is finished with Euler-Maclaurin.
  """
  if not (0 < eps <= 0.1):
    raise InputError("eps must lie in (0, 0.1]")
  if not (c_cutoff > 0 and c_weyl > 0):
    raise InputError("Cutoff and Weyl constants must be positive")
  cutoff = c_cutoff / (eps * eps) * math.log(1.0 / eps)
  k_start = max(1, int(math.ceil((cutoff / c_weyl) ** (d / 2.0) - 1e-9)))
  while c_weyl * k_start ** (2.0 / d) < cutoff:
    k_start += 1
  total = 0.0
  k = k_start
  finished = False
  while k - k_start < max_direct_terms:
    size = min(_BLOCK, k_start + max_direct_terms - k)
    terms = _tail_term(np.arange(k, k + size, dtype=float), c_weyl, d, eps)
    small = np.flatnonzero(terms < RELATIVE_CUTOFF * (total + np.cumsum(terms)))
    if small.size:
      total += float(np.sum(terms[:small[0]]))
      k += int(small[0])
      finished = True
      break
    total += float(np.sum(terms))
    k += size
  used_em = False
  if not finished:
    total += _euler_maclaurin(float(k), c_weyl, d, eps)
    used_em = True
  integral = tail_integral(c_weyl, d, eps, cutoff) if d >= 2 else float("nan")
  return TailSum(value=total, ratio=total / math.sqrt(eps), cutoff=cutoff, k_start=k_start,
                 n_terms=k - k_start, integral=integral, euler_maclaurin=used_em)


def minimal_cutoff(c_weyl: float, d: int, eps: float, eta: float = 0.1,
                   grid: Optional[Sequence[float]] = None) -> Optional[float]:
  """Smallest cutoff constant on the grid whose tail ratio is at most eta."""
  candidates = grid if grid is not None else np.arange(0.5, 8.01, 0.25)
  for c_cutoff in sorted(candidates):
    if lemma4_tail(c_weyl, d, eps, float(c_cutoff)).ratio <= eta:
      return float(c_cutoff)
  return None


def proof_chain_sum(spectrum: Spectrum, eps: float, params: HeatGapParams,
                    flags: Optional[np.ndarray] = None) -> ChainSum:
  """Σ_{k in A} λ_k^{-1/2}·(e^{-λ_k c1 eps²} - e^{-λ_k c2 eps²}) and its ratio to sqrt(eps)."""
  if flags is None:
    flags = np.abs(spectrum.means) > 0
  lam = spectrum.lambdas[np.asarray(flags, dtype=bool)]
  e2 = eps * eps
  value = float(np.sum((np.exp(-lam * params.c1 * e2) - np.exp(-lam * params.c2 * e2)) / np.sqrt(lam)))
  return ChainSum(eps=eps, value=value, ratio=value / math.sqrt(eps), n_terms=int(lam.size))
