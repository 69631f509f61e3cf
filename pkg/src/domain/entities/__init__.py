from .spectrum import Spectrum, cluster_indices
from .grid import GridMask, SparseOperator
from .eig_result import EigResult
from .census import (
  CensusReport,
  ExponentFit,
  MarginSummary,
  ParsevalSummary,
  HTConstant,
  WeylModel,
  BoundaryMassFit,
  BoundaryMassBand,
)
from .heat import (
  StripData,
  HeatValue,
  HeatSample,
  HeatCurve,
  GapRow,
  HeatContentRow,
  TailSum,
  SurvivalEstimate,
  ChainSum,
)

__all__ = [
  "Spectrum",
  "cluster_indices",
  "GridMask",
  "SparseOperator",
  "EigResult",
  "CensusReport",
  "ExponentFit",
  "MarginSummary",
  "ParsevalSummary",
  "HTConstant",
  "WeylModel",
  "BoundaryMassFit",
  "BoundaryMassBand",
  "StripData",
  "HeatValue",
  "HeatSample",
  "HeatCurve",
  "GapRow",
  "HeatContentRow",
  "TailSum",
  "SurvivalEstimate",
  "ChainSum",
]
