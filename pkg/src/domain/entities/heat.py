from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..value_objects import HeatMethod


@dataclass
class StripData:
  """Projections of the boundary-strip indicator onto the computed modes."""
  eps: float
  coefficients: np.ndarray
  strip_measure: float

  def __post_init__(self):
    if not (self.strip_measure > 0):
      raise ValueError("Strip measure must be positive")
    bound = np.sqrt(self.strip_measure) * (1.0 + 1e-9) + 1e-12
    if np.any(np.abs(self.coefficients) > bound):
      raise ValueError("Strip coefficient exceeds the Cauchy-Schwarz bound")

  @property
  def coefficient_tail(self) -> float:
    """L² norm of the strip indicator outside the computed modes."""
    return float(np.sqrt(max(self.strip_measure - float(np.sum(self.coefficients ** 2)), 0.0)))


@dataclass(frozen=True)
class HeatValue:
  value: float
  truncation_bound: float


@dataclass(frozen=True)
class HeatSample:
  t: float
  value: float
  stderr: float = 0.0


@dataclass
class HeatCurve:
  """Heat mass samples over time for one method."""
  samples: List[HeatSample]
  method: HeatMethod
  truncation_bound: float = 0.0

  def __post_init__(self):
    times = [sample.t for sample in self.samples]
    if any(b <= a for a, b in zip(times, times[1:])):
      raise ValueError("Heat curve times must be strictly increasing")

  def to_rows(self) -> List[dict]:
    return [
      {"t": s.t, "value": s.value, "stderr": s.stderr, "method": str(self.method)}
      for s in self.samples
    ]


@dataclass(frozen=True)
class GapRow:
  """Heat-mass loss between c1·eps² and c2·eps²."""
  eps: float
  gap: float
  ratio: float
  c1: float
  c2: float


@dataclass(frozen=True)
class HeatContentRow:
  """Heat content of the constant initial datum against its small-time expansion."""
  t: float
  value: float
  expansion: float
  residual: float
  scaled_residual: float
  two_term_slope: float
  three_term: bool


@dataclass(frozen=True)
class TailSum:
  """Weyl-model spectral tail beyond the cutoff B = (c/eps²)·log(1/eps)."""
  value: float
  ratio: float
  cutoff: float
  k_start: int
  n_terms: int
  integral: float
  euler_maclaurin: bool


@dataclass(frozen=True)
class SurvivalEstimate:
  """Fraction of Brownian paths still alive, with binomial standard error."""
  probability: float
  stderr: float
  n_paths: int


@dataclass(frozen=True)
class ChainSum:
  """Weighted sum over nonzero-mean modes appearing in the counting argument."""
  eps: float
  value: float
  ratio: float
  n_terms: int
  upper_bound: Optional[float] = None
