from enum import Enum


class DomainKind(Enum):
  """Geometric families a domain descriptor can describe."""
  BOX = "box"
  DISK = "disk"
  BALL3 = "ball3"
  MASK = "mask"
  PRODUCT = "product"

  def __str__(self) -> str:
    return self.value


class ModeSource(Enum):
  """Where an eigenmode came from."""
  EXACT = "exact"
  GRID = "grid"

  def __str__(self) -> str:
    return self.value


class Convention(Enum):
  """How nonzero-mean modes are counted inside degenerate eigenspaces."""
  CANONICAL = "canonical"
  CLUSTER = "cluster"

  def __str__(self) -> str:
    return self.value


class ZeroTolPolicy(Enum):
  """How the numerical-zero threshold for means is chosen."""
  FIXED = "fixed"
  DISCRETIZATION_SCALED = "discretization-scaled"

  def __str__(self) -> str:
    return self.value


class HeatMethod(Enum):
  """Evaluation method of a heat-mass curve."""
  SPECTRAL = "spectral"
  MONTE_CARLO = "monte_carlo"

  def __str__(self) -> str:
    return self.value
