from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .spectrum import cluster_indices


@dataclass
class EigResult:
  """Smallest eigenpairs of a sparse operator.

  Columns of `vectors` are orthonormal under the operator's weighted inner
  product (cell measure times the Euclidean one).
  """
  values: np.ndarray
  vectors: np.ndarray
  residuals: np.ndarray
  iterations: int
  cluster_tol: float = 0.0
  clusters: List[Tuple[int, ...]] = field(default_factory=list, init=False)

  def __post_init__(self):
    if self.vectors.ndim != 2 or self.vectors.shape[1] != self.values.size:
      raise ValueError("One eigenvector column per eigenvalue is required")
    if np.any(np.diff(self.values) < 0):
      raise ValueError("Eigenvalues must be ascending")
    self.clusters = cluster_indices(self.values, self.cluster_tol)

  @property
  def m(self) -> int:
    return int(self.values.size)

  @property
  def max_residual(self) -> float:
    return float(self.residuals.max()) if self.residuals.size else 0.0
