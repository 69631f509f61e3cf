from dataclasses import dataclass, replace
from typing import Tuple

from .conventions import ModeSource


@dataclass(frozen=True)
class EigenMode:
  """One L²-normalized Dirichlet eigenfunction, summarized.

  `label` is a symmetry tag: box tuples (a_1..a_d), disk (m, k, branch) with
  branch 0 = cosine and 1 = sine, ball (l, k, azimuthal index), grid (index,).
  """
  lam: float
  mean: float
  label: Tuple[int, ...]
  source: ModeSource = ModeSource.EXACT
  residual: float = 0.0

  def __post_init__(self):
    if not (self.lam > 0):
      raise ValueError("Eigenvalue must be positive")
    if self.residual < 0:
      raise ValueError("Residual cannot be negative")

  def with_mean(self, mean: float) -> "EigenMode":
    return replace(self, mean=float(mean))

  @property
  def sort_key(self) -> Tuple[float, Tuple[int, ...]]:
    return (self.lam, self.label)
