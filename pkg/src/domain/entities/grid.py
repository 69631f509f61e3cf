from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy import sparse


@dataclass
class GridMask:
  """Node raster of a domain with the distance of every node to the complement.

  Node (i, j) sits at origin + (i·h, j·h); arrays are indexed [j, i] in 2D
  and [i] in 1D. `distance` is positive exactly on inside nodes.
  """
  h: float
  inside: np.ndarray
  distance: np.ndarray
  origin: Tuple[float, ...]
  perimeter: float
  smooth_boundary: bool = True
  _index_map: Optional[np.ndarray] = field(default=None, init=False, repr=False)

  def __post_init__(self):
    if not (self.h > 0):
      raise ValueError("Grid spacing must be positive")
    if self.inside.shape != self.distance.shape:
      raise ValueError("Distance field must match the raster")
    if self.inside.ndim not in (1, 2):
      raise ValueError("Only 1D and 2D rasters are supported")
    if not self.inside.any():
      raise ValueError("Mask has no inside node")
    if np.any((self.distance > 0) != self.inside):
      raise ValueError("Distance must be positive exactly on inside nodes")

  @property
  def dim(self) -> int:
    return self.inside.ndim

  @property
  def nx(self) -> int:
    return self.inside.shape[-1]

  @property
  def ny(self) -> int:
    return self.inside.shape[0] if self.dim == 2 else 1

  @property
  def n_inside(self) -> int:
    return int(self.inside.sum())

  @property
  def cell_measure(self) -> float:
    return self.h ** self.dim

  @property
  def area(self) -> float:
    return self.n_inside * self.cell_measure

  @property
  def inradius(self) -> float:
    return float(self.distance.max())

  @property
  def index_map(self) -> np.ndarray:
    """Operator row of every inside node, -1 elsewhere (row-major order)."""
    if self._index_map is None:
      index = np.full(self.inside.shape, -1, dtype=np.int64)
      index[self.inside] = np.arange(self.n_inside)
      self._index_map = index
    return self._index_map

  @property
  def inside_distance(self) -> np.ndarray:
    """Distance of inside nodes in operator order."""
    return self.distance[self.inside]

  def node_coordinates(self) -> np.ndarray:
    """Coordinates of inside nodes in operator order, shape (n, dim)."""
    if self.dim == 1:
      i = np.flatnonzero(self.inside)
      return (self.origin[0] + i * self.h)[:, None]
    j, i = np.nonzero(self.inside)
    return np.column_stack([self.origin[0] + i * self.h, self.origin[1] + j * self.h])

  @property
  def bounding_box(self) -> Tuple[Tuple[float, float], ...]:
    if self.dim == 1:
      return ((self.origin[0], self.origin[0] + (self.nx - 1) * self.h),)
    return ((self.origin[0], self.origin[0] + (self.nx - 1) * self.h),
            (self.origin[1], self.origin[1] + (self.ny - 1) * self.h))


@dataclass
class SparseOperator:
  """Assembled finite-difference Dirichlet Laplacian in CSR layout."""
  matrix: sparse.csr_matrix
  h: float
  dim: int = 2
  symmetric: bool = True

  def __post_init__(self):
    rows, cols = self.matrix.shape
    if rows != cols:
      raise ValueError("Operator must be square")

  @property
  def dimension(self) -> int:
    return self.matrix.shape[0]

  @property
  def row_offsets(self) -> np.ndarray:
    return self.matrix.indptr

  @property
  def column_indices(self) -> np.ndarray:
    return self.matrix.indices

  @property
  def values(self) -> np.ndarray:
    return self.matrix.data

  @property
  def cell_measure(self) -> float:
    return self.h ** self.dim

  @classmethod
  def from_matrix(cls, matrix, cell_measure: float = 1.0) -> "SparseOperator":
    """Wrap a plain symmetric matrix whose inner product has the given weight."""
    return cls(matrix=sparse.csr_matrix(matrix, dtype=float), h=cell_measure, dim=1)
