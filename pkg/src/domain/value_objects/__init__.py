from .conventions import DomainKind, ModeSource, Convention, ZeroTolPolicy, HeatMethod
from .domain_spec import DomainSpec
from .eigen_mode import EigenMode
from .settings import EvalTolerances, EigSolveConfig, CensusConfig, MCConfig, HeatGapParams

__all__ = [
  "DomainKind",
  "ModeSource",
  "Convention",
  "ZeroTolPolicy",
  "HeatMethod",
  "DomainSpec",
  "EigenMode",
  "EvalTolerances",
  "EigSolveConfig",
  "CensusConfig",
  "MCConfig",
  "HeatGapParams",
]
