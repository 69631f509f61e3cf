"""Smallest eigenpairs of the assembled Dirichlet operator.

Shift-invert Lanczos at shift 0 (ARPACK through scipy), with the inverse
applied by a sparse LU factorization or by Jacobi-preconditioned CG. Small
operators go through a dense symmetric decomposition.
"""
from typing import Callable

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, cg, eigsh, factorized

from ..entities import EigResult, SparseOperator, Spectrum
from ..exceptions import ConvergenceError, SizeError
from ..value_objects import DomainSpec, EigSolveConfig, EigenMode, ModeSource


class _CountingInverse:
  """Applies A^{-1} and counts the applications."""

  def __init__(self, matrix, config: EigSolveConfig):
    self.calls = 0
    if config.inverse == "factorized":
      self._solve = factorized(matrix.tocsc())
    else:
      self._solve = self._cg_solver(matrix, config.inner_tol)

  @staticmethod
  def _cg_solver(matrix, tol: float) -> Callable[[np.ndarray], np.ndarray]:
    inverse_diagonal = 1.0 / matrix.diagonal()
    jacobi = LinearOperator(matrix.shape, matvec=lambda x: inverse_diagonal * x, dtype=float)

    def solve(b: np.ndarray) -> np.ndarray:
      x, info = cg(matrix, b, rtol=tol, atol=0.0, M=jacobi, maxiter=10 * matrix.shape[0])
      if info != 0:
        raise ConvergenceError(f"Inner CG stopped with info={info}")
      return x

    return solve

  def __call__(self, b: np.ndarray) -> np.ndarray:
    self.calls += 1
    return self._solve(np.ravel(b))


def residual_norms(matrix, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
  """‖Av - λv‖ / ‖λv‖ per column."""
  if values.size == 0:
    return np.zeros(0)
  applied = matrix @ vectors
  scaled = vectors * values[None, :]
  return np.linalg.norm(applied - scaled, axis=0) / np.linalg.norm(scaled, axis=0)


def _dense(op: SparseOperator, config: EigSolveConfig):
  if config.m > op.dimension:
    raise SizeError(f"Requested {config.m} eigenpairs of a {op.dimension}-dimensional operator")
  values, vectors = linalg.eigh(op.matrix.toarray(), subset_by_index=[0, config.m - 1])
  return values, vectors, 1


def _lanczos(op: SparseOperator, config: EigSolveConfig):
  n = op.dimension
  if 2 * config.m >= n:
    raise SizeError(f"Iterative solve needs m < dimension/2, got m={config.m}, dimension={n}")
  inverse = _CountingInverse(op.matrix, config)
  opinv = LinearOperator((n, n), matvec=inverse, dtype=float)
  v0 = np.random.default_rng(config.seed).standard_normal(n)
  ncv = config.krylov_dim or min(n - 1, max(2 * config.m + 1, 20))
  try:
    values, vectors = eigsh(op.matrix, k=config.m, sigma=0.0, which="LM", OPinv=opinv, v0=v0,
                            ncv=ncv, maxiter=config.max_outer_iter, tol=config.residual_tol * 1e-2)
  except ArpackNoConvergence as error:
    best = residual_norms(op.matrix, error.eigenvalues, error.eigenvectors)
    raise ConvergenceError(f"Lanczos did not converge after {config.max_outer_iter} restarts",
                           residuals=best.tolist()) from error
  return values, vectors, inverse.calls


def smallest_eigs(op: SparseOperator, config: EigSolveConfig) -> EigResult:
  """The m algebraically smallest eigenpairs, vectors normalised to h^d·Σv² = 1."""
  if op.dimension <= config.dense_cutoff:
    values, vectors, iterations = _dense(op, config)
  else:
    values, vectors, iterations = _lanczos(op, config)
  order = np.argsort(values, kind="stable")
  values, vectors = values[order], vectors[:, order]
  residuals = residual_norms(op.matrix, values, vectors)
  if np.any(residuals > config.residual_tol):
    raise ConvergenceError(
      f"Residuals up to {residuals.max():.3e} exceed tolerance {config.residual_tol:.1e}",
      residuals=residuals.tolist())
  vectors = vectors / np.sqrt(op.cell_measure)
  return EigResult(values=values, vectors=vectors, residuals=residuals, iterations=iterations,
                   cluster_tol=config.cluster_tol)


def grid_spectrum(domain: DomainSpec, result: EigResult) -> Spectrum:
  """Spectrum of grid modes labelled by index; means stay zero until computed."""
  modes = [
    EigenMode(lam=float(lam), mean=0.0, label=(k + 1,), source=ModeSource.GRID,
              residual=float(res))
    for k, (lam, res) in enumerate(zip(result.values, result.residuals))
  ]
  return Spectrum(domain=domain, modes=modes, cluster_tol=result.cluster_tol)
