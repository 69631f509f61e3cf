from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from ..value_objects import DomainSpec, EigenMode, ModeSource


def cluster_indices(values: Sequence[float], tol: float) -> List[Tuple[int, ...]]:
  """Partition sorted values into maximal runs with relative gap <= tol."""
  values = np.asarray(values, dtype=float)
  if values.size == 0:
    return []
  gaps = np.diff(values)
  breaks = np.flatnonzero(gaps > tol * np.abs(values[1:])) + 1
  return [tuple(int(i) for i in chunk) for chunk in np.split(np.arange(values.size), breaks)]


@dataclass
class Spectrum:
  """Ordered eigenmodes of a domain with their degeneracy clusters."""
  domain: DomainSpec
  modes: List[EigenMode]
  cluster_tol: float = 0.0
  mean_support_only: bool = False
  clusters: List[Tuple[int, ...]] = field(default_factory=list, init=False)

  def __post_init__(self):
    if not self.modes:
      raise ValueError("Spectrum needs at least one mode")
    keys = [mode.sort_key for mode in self.modes]
    if any(keys[i] > keys[i + 1] for i in range(len(keys) - 1)):
      raise ValueError("Spectrum modes must be sorted by eigenvalue then label")
    self.clusters = cluster_indices(self.lambdas, self.cluster_tol)

  @classmethod
  def from_modes(cls, domain: DomainSpec, modes: Iterable[EigenMode], cluster_tol: float = 0.0,
                 mean_support_only: bool = False) -> "Spectrum":
    ordered = sorted(modes, key=lambda mode: mode.sort_key)
    return cls(domain=domain, modes=ordered, cluster_tol=cluster_tol,
               mean_support_only=mean_support_only)

  @property
  def n(self) -> int:
    return len(self.modes)

  @property
  def lambdas(self) -> np.ndarray:
    return np.array([mode.lam for mode in self.modes], dtype=float)

  @property
  def means(self) -> np.ndarray:
    return np.array([mode.mean for mode in self.modes], dtype=float)

  @property
  def labels(self) -> List[Tuple[int, ...]]:
    return [mode.label for mode in self.modes]

  @property
  def source(self) -> ModeSource:
    return self.modes[0].source

  @property
  def lambda_max(self) -> float:
    return self.modes[-1].lam

  def cluster_ids(self) -> np.ndarray:
    """Cluster number of every mode."""
    ids = np.empty(self.n, dtype=int)
    for cid, members in enumerate(self.clusters):
      ids[list(members)] = cid
    return ids

  def largest_cluster(self) -> int:
    return max(len(members) for members in self.clusters)

  def head(self, n: int) -> "Spectrum":
    """First n modes."""
    if n < 1:
      raise ValueError("Cannot take fewer than one mode")
    return Spectrum(domain=self.domain, modes=self.modes[:n], cluster_tol=self.cluster_tol,
                    mean_support_only=self.mean_support_only)

  def with_means(self, means: Sequence[float]) -> "Spectrum":
    if len(means) != self.n:
      raise ValueError("One mean per mode is required")
    modes = [mode.with_mean(mean) for mode, mean in zip(self.modes, means)]
    return Spectrum(domain=self.domain, modes=modes, cluster_tol=self.cluster_tol,
                    mean_support_only=self.mean_support_only)
