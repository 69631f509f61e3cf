from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..value_objects import Convention


@dataclass(frozen=True)
class ExponentFit:
  """Least-squares power law y ≈ prefactor·x^exponent on a log-log range."""
  exponent: float
  prefactor: float
  x_lo: float
  x_hi: float
  residual: float

  def to_dict(self) -> Dict[str, float]:
    return {
      "exponent": self.exponent,
      "prefactor": self.prefactor,
      "x_lo": self.x_lo,
      "x_hi": self.x_hi,
      "residual": self.residual,
    }


@dataclass
class MarginSummary:
  """Counting margin N_A(n)·(log n)^{d/2}/n^{alpha/d} over n >= 10."""
  n: np.ndarray
  margin: np.ndarray
  alpha: float
  min_value: float
  min_at: int
  trend_slope: float

  def to_dict(self) -> Dict[str, Any]:
    return {
      "alpha": self.alpha,
      "min_value": self.min_value,
      "min_at": self.min_at,
      "trend_slope": self.trend_slope,
      "n": self.n.tolist(),
      "margin": self.margin.tolist(),
    }


@dataclass
class ParsevalSummary:
  """Partial sums S(n) of squared means against the volume."""
  partial: np.ndarray
  volume: float

  @property
  def gap(self) -> float:
    return float(self.volume - self.partial[-1])

  def to_dict(self) -> Dict[str, Any]:
    return {"volume": self.volume, "gap": self.gap, "partial": self.partial.tolist()}


@dataclass(frozen=True)
class HTConstant:
  """max_k sqrt(lambda_k)·|mean_k| and where it is attained."""
  value: float
  argmax: int
  label: tuple

  def to_dict(self) -> Dict[str, Any]:
    return {"value": self.value, "argmax": self.argmax, "label": list(self.label)}


@dataclass(frozen=True)
class WeylModel:
  """Fitted growth lambda_k ≈ c_weyl·k^{2/d}."""
  d: int
  c_weyl: float
  exponent: float
  c_free: float
  c_analytic: float

  def __post_init__(self):
    if not (self.c_weyl > 0):
      raise ValueError("Weyl constant must be positive")

  @property
  def relative_error(self) -> float:
    return abs(self.c_weyl - self.c_analytic) / self.c_analytic

  def to_dict(self) -> Dict[str, float]:
    return {
      "d": self.d,
      "c_weyl": self.c_weyl,
      "exponent": self.exponent,
      "c_free": self.c_free,
      "c_analytic": self.c_analytic,
      "relative_error": self.relative_error,
    }


@dataclass
class CensusReport:
  """Counting function of nonzero-mean modes and the spectral statistics around it."""
  domain: str
  d: int
  convention: Convention
  flags: np.ndarray
  ht: HTConstant
  parseval: ParsevalSummary
  fitted_exponent: Optional[ExponentFit] = None
  margin: Optional[MarginSummary] = None
  weyl: Optional[WeylModel] = None
  counting: np.ndarray = field(init=False)

  def __post_init__(self):
    self.flags = np.asarray(self.flags, dtype=bool)
    self.counting = np.cumsum(self.flags)

  @property
  def n_max(self) -> int:
    return int(self.flags.size)

  @property
  def density(self) -> np.ndarray:
    return self.counting / np.arange(1, self.n_max + 1)

  def count_at(self, n: int) -> int:
    return int(self.counting[n - 1])

  def to_dict(self) -> Dict[str, Any]:
    return {
      "domain": self.domain,
      "d": self.d,
      "convention": str(self.convention),
      "n_max": self.n_max,
      "counting": self.counting.tolist(),
      "density": self.density.tolist(),
      "fitted_exponent": self.fitted_exponent.to_dict() if self.fitted_exponent else None,
      "margin": self.margin.to_dict() if self.margin else None,
      "parseval": self.parseval.to_dict(),
      "ht_constant": self.ht.to_dict(),
      "weyl": self.weyl.to_dict() if self.weyl else None,
    }


@dataclass
class BoundaryMassFit:
  """Strip integrals of one mode over an eps sweep and their power-law exponents."""
  mode_index: int
  eps_grid: np.ndarray
  strip_l2: np.ndarray
  strip_l1: np.ndarray
  alpha_l2: float
  alpha_l1: float
  fit_residual: float

  def to_dict(self) -> Dict[str, Any]:
    return {
      "mode_index": self.mode_index,
      "eps": self.eps_grid.tolist(),
      "strip_l2": self.strip_l2.tolist(),
      "strip_l1": self.strip_l1.tolist(),
      "alpha_l2": self.alpha_l2,
      "alpha_l1": self.alpha_l1,
      "fit_residual": self.fit_residual,
    }


@dataclass
class BoundaryMassBand:
  """Boundary-mass fits of every computed mode over one eps sweep."""
  fits: List[BoundaryMassFit]

  @property
  def alpha_l2(self) -> np.ndarray:
    return np.array([fit.alpha_l2 for fit in self.fits])

  @property
  def alpha_l2_min(self) -> float:
    return float(np.nanmin(self.alpha_l2))

  @property
  def alpha_l2_median(self) -> float:
    return float(np.nanmedian(self.alpha_l2))

  @property
  def weakest_mode(self) -> int:
    return self.fits[int(np.nanargmin(self.alpha_l2))].mode_index

  def to_dict(self) -> Dict[str, Any]:
    return {
      "modes": len(self.fits),
      "eps": self.fits[0].eps_grid.tolist(),
      "alpha_l2_min": self.alpha_l2_min,
      "alpha_l2_median": self.alpha_l2_median,
      "weakest_mode": self.weakest_mode,
      "fits": [fit.to_dict() for fit in self.fits],
    }
