from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .conventions import Convention, ZeroTolPolicy


class EvalTolerances(BaseModel):
  """Accuracy knobs for the special-function evaluators."""
  model_config = ConfigDict(frozen=True)

  abs_tol: float = Field(default=1e-12, gt=0)
  max_terms: int = Field(default=500, ge=50)
  newton_max_iter: int = Field(default=60, ge=8)


class EigSolveConfig(BaseModel):
  """Settings of the smallest-eigenpair solver."""
  model_config = ConfigDict(frozen=True)

  m: int = Field(ge=1)
  residual_tol: float = Field(default=1e-8, gt=0, lt=1)
  max_outer_iter: int = Field(default=5000, ge=1)
  inner_cg_tol: Optional[float] = Field(default=None, gt=0, lt=1)
  seed: int = Field(default=0, ge=0, lt=2 ** 64)
  cluster_tol: float = Field(default=1e-6, ge=0)
  inverse: Literal["factorized", "cg"] = "factorized"
  dense_cutoff: int = Field(default=32, ge=1)
  krylov_dim: Optional[int] = Field(default=None, ge=2)

  @property
  def inner_tol(self) -> float:
    """Inner CG tolerance, tied to the outer residual unless set."""
    return self.inner_cg_tol if self.inner_cg_tol is not None else self.residual_tol / 100.0


class CensusConfig(BaseModel):
  """How means are classified as zero or nonzero."""
  model_config = ConfigDict(frozen=True)

  convention: Convention = Convention.CANONICAL
  zero_tol_abs: float = Field(default=1e-9, gt=0)
  zero_tol_policy: ZeroTolPolicy = ZeroTolPolicy.FIXED
  c_tol: float = Field(default=10.0, gt=0)

  @classmethod
  def for_grid(cls) -> "CensusConfig":
    return cls(convention=Convention.CLUSTER, zero_tol_policy=ZeroTolPolicy.DISCRETIZATION_SCALED)


class MCConfig(BaseModel):
  """Monte Carlo settings for absorbed Brownian motion."""
  model_config = ConfigDict(frozen=True)

  n_paths: int = Field(default=100_000, ge=1000)
  dt: Optional[float] = Field(default=None, gt=0)
  seed: int = Field(default=0, ge=0, lt=2 ** 64)
  bridge_correction: bool = True
  chunk_size: int = Field(default=4096, ge=1)
  threads: int = Field(default=1, ge=1)

  def resolved_dt(self, eps: float) -> float:
    """Step size; defaults to (eps/10)² so a step resolves the strip."""
    return self.dt if self.dt is not None else (eps / 10.0) ** 2


class HeatGapParams(BaseModel):
  """Time constants of the heat-mass gap, t = c·ε²."""
  model_config = ConfigDict(frozen=True)

  c1: float = 1.0
  c2: float = 100.0

  @model_validator(mode="after")
  def _check_order(self) -> "HeatGapParams":
    if not (0 < self.c1 < self.c2):
      raise ValueError("Heat gap constants must satisfy 0 < c1 < c2")
    return self
