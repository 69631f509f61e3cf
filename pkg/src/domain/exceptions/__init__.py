from typing import Optional, Sequence


class MeanSpecError(Exception):
  """Base class for all domain errors."""


class UnsupportedOrderError(MeanSpecError):
  """Raised when a special function is asked for an order outside its range."""


class ConvergenceError(MeanSpecError):
  """Raised when an iteration does not reach its tolerance."""

  def __init__(self, message: str, residuals: Optional[Sequence[float]] = None):
    super().__init__(message)
    self.residuals = list(residuals) if residuals is not None else []


class BudgetError(MeanSpecError):
  """Raised when an enumeration would exceed its configured budget."""


class IncompleteBaseError(MeanSpecError):
  """Raised when a base spectrum is too short for a tensor composition."""


class DegenerateDomainError(MeanSpecError):
  """Raised when a rasterized domain has no inside cell."""


class InvalidPolygonError(MeanSpecError):
  """Raised for self-intersecting or too small polygons."""


class ResolutionError(MeanSpecError):
  """Raised when a length or time scale is below the grid or step resolution."""


class SizeError(MeanSpecError):
  """Raised when more eigenpairs are requested than the solver supports."""


class InputError(MeanSpecError):
  """Raised when an operation receives inputs of the wrong kind."""


class InsufficientSpectrumError(MeanSpecError):
  """Raised when a spectral sum cannot be truncated within its accuracy."""


class ParsevalGapError(MeanSpecError):
  """Raised when the mean-value Parseval sum is too far from the volume."""


class SamplingError(MeanSpecError):
  """Raised when rejection sampling is too inefficient."""


class DescriptorError(MeanSpecError):
  """Raised when a domain descriptor cannot be parsed."""


__all__ = [
  "MeanSpecError",
  "UnsupportedOrderError",
  "ConvergenceError",
  "BudgetError",
  "IncompleteBaseError",
  "DegenerateDomainError",
  "InvalidPolygonError",
  "ResolutionError",
  "SizeError",
  "InputError",
  "InsufficientSpectrumError",
  "ParsevalGapError",
  "SamplingError",
  "DescriptorError",
]
