"""Node rasters, the five-point Dirichlet Laplacian and boundary strips."""
import math
from typing import Sequence, Tuple, Union

from matplotlib.path import Path
import numpy as np
from scipy import ndimage, sparse

from ..entities import GridMask, SparseOperator
from ..exceptions import DegenerateDomainError, InputError, InvalidPolygonError, ResolutionError
from ..value_objects import DomainKind, DomainSpec

Vertices = Sequence[Tuple[float, float]]

# nodes closer than this fraction of h to the boundary count as outside
_BOUNDARY_SLACK = 1e-9


def _axis_nodes(lo: float, hi: float, h: float) -> Tuple[float, int]:
  """Origin and node count of a raster covering [lo, hi] with one padding node per side."""
  count = int(math.ceil((hi - lo) / h - 1e-9)) + 3
  return lo - h, count


def _raster(bounds: Tuple[Tuple[float, float], ...], h: float):
  axes = []
  origin = []
  for lo, hi in bounds:
    start, count = _axis_nodes(lo, hi, h)
    origin.append(start)
    axes.append(start + np.arange(count) * h)
  return tuple(origin), axes


def from_inside(inside: np.ndarray, h: float, origin: Tuple[float, ...], perimeter: float = None,
                smooth_boundary: bool = False) -> GridMask:
  """Attach the Euclidean distance field to a boolean node raster.

  The raster must already carry outside nodes around the domain; the distance
  of an inside node is measured to the nearest outside node.
  """
  inside = np.asarray(inside, dtype=bool)
  if not inside.any():
    raise DegenerateDomainError("Raster has no inside node")
  distance = ndimage.distance_transform_edt(inside, sampling=h)
  if perimeter is None:
    perimeter = estimate_perimeter(inside, h)
  return GridMask(h=h, inside=inside, distance=distance, origin=tuple(origin), perimeter=perimeter,
                  smooth_boundary=smooth_boundary)


def from_raster(rows: np.ndarray, h: float) -> GridMask:
  """Mask from a raw raster whose node (i, j) sits at (i·h, j·h); pads one outside node per side."""
  rows = np.asarray(rows, dtype=bool)
  padded = np.pad(rows, 1, constant_values=False)
  return from_inside(padded, h, tuple(-h for _ in range(rows.ndim)))


def estimate_perimeter(inside: np.ndarray, h: float) -> float:
  """Boundary length from inside/outside neighbour pairs, corrected for staircase bias."""
  if inside.ndim == 1:
    return 2.0
  crossings = 0
  for axis in (0, 1):
    crossings += int(np.count_nonzero(np.diff(inside.astype(np.int8), axis=axis)))
  return crossings * h * math.pi / 4.0


def _segments(vertices: np.ndarray) -> np.ndarray:
  return np.stack([vertices, np.roll(vertices, -1, axis=0)], axis=1)


def _cross(o, a, b) -> float:
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _segments_meet(p1, p2, q1, q2) -> bool:
  d1, d2 = _cross(q1, q2, p1), _cross(q1, q2, p2)
  d3, d4 = _cross(p1, p2, q1), _cross(p1, p2, q2)
  if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4):
    return True

  def on_segment(a, b, c) -> bool:
    return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))

  return ((d1 == 0 and on_segment(q1, q2, p1)) or (d2 == 0 and on_segment(q1, q2, p2))
          or (d3 == 0 and on_segment(p1, p2, q1)) or (d4 == 0 and on_segment(p1, p2, q2)))


def validate_polygon(vertices: Vertices) -> np.ndarray:
  """Vertex array of a simple polygon; raises InvalidPolygonError otherwise."""
  points = np.asarray(vertices, dtype=float)
  if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 3:
    raise InvalidPolygonError("Polygon needs at least three (x, y) vertices")
  if np.allclose(points[0], points[-1]) and points.shape[0] > 3:
    points = points[:-1]
  segments = _segments(points)
  count = len(segments)
  for i in range(count):
    for j in range(i + 1, count):
      if j == i + 1 or (i == 0 and j == count - 1):
        continue
      if _segments_meet(*segments[i], *segments[j]):
        raise InvalidPolygonError(f"Polygon edges {i} and {j} intersect")
  area = 0.5 * abs(np.dot(points[:, 0], np.roll(points[:, 1], -1))
                   - np.dot(points[:, 1], np.roll(points[:, 0], -1)))
  if area == 0.0:
    raise InvalidPolygonError("Polygon encloses no area")
  return points


def _distance_to_edges(nodes: np.ndarray, points: np.ndarray) -> np.ndarray:
  best = np.full(nodes.shape[0], np.inf)
  for a, b in _segments(points):
    edge = b - a
    t = np.clip(((nodes - a) @ edge) / float(edge @ edge), 0.0, 1.0)
    nearest = a + t[:, None] * edge
    best = np.minimum(best, np.hypot(*(nodes - nearest).T))
  return best


def rasterize_polygon(vertices: Vertices, h: float) -> GridMask:
  points = validate_polygon(vertices)
  bounds = tuple((float(points[:, k].min()), float(points[:, k].max())) for k in (0, 1))
  origin, (xs, ys) = _raster(bounds, h)
  gx, gy = np.meshgrid(xs, ys)
  nodes = np.column_stack([gx.ravel(), gy.ravel()])
  inside = Path(points).contains_points(nodes)
  inside &= _distance_to_edges(nodes, points) > _BOUNDARY_SLACK * h
  perimeter = float(np.sum(np.hypot(*np.diff(np.vstack([points, points[:1]]), axis=0).T)))
  return from_inside(inside.reshape(gx.shape), h, origin, perimeter, smooth_boundary=False)


def rasterize(domain: Union[DomainSpec, Vertices], h: float) -> GridMask:
  """Node raster of an analytic domain (1D/2D box, disk) or a simple polygon.

  Nodes strictly inside the domain are inside; the unit square at h = 1/64
  gives 63 × 63 inside nodes.
  """
  if not (h > 0):
    raise InputError("Grid spacing must be positive")
  if not isinstance(domain, DomainSpec):
    return rasterize_polygon(domain, h)
  if domain.kind == DomainKind.MASK:
    return domain.mask
  if domain.kind == DomainKind.BOX and domain.dim <= 2:
    origin, axes = _raster(domain.bounding_box, h)
    inside = None
    for k, (coords, length) in enumerate(zip(axes, domain.lengths)):
      slack = np.minimum(coords, length - coords) > _BOUNDARY_SLACK * h
      axis_inside = slack if domain.dim == 1 else (slack[None, :] if k == 0 else slack[:, None])
      inside = axis_inside if inside is None else inside & axis_inside
    if domain.dim == 2:
      inside = np.broadcast_to(inside, (axes[1].size, axes[0].size)).copy()
    return from_inside(inside, h, origin, domain.perimeter, smooth_boundary=False)
  if domain.kind == DomainKind.DISK:
    origin, (xs, ys) = _raster(domain.bounding_box, h)
    gx, gy = np.meshgrid(xs, ys)
    inside = domain.radius - np.hypot(gx, gy) > _BOUNDARY_SLACK * h
    return from_inside(inside, h, origin, domain.perimeter, smooth_boundary=True)
  raise InputError(f"Cannot rasterize {domain}; only 1D/2D boxes, disks, polygons and masks")


def assemble_dirichlet(mask: GridMask) -> SparseOperator:
  """Finite-difference -Δ on the inside nodes, Dirichlet outside.

  Diagonal 2·dim/h², -1/h² per inside neighbour.
  """
  index = mask.index_map
  h2 = mask.h * mask.h
  n = mask.n_inside
  rows = [np.arange(n)]
  cols = [np.arange(n)]
  vals = [np.full(n, 2.0 * mask.dim / h2)]
  for axis in range(mask.dim):
    here = np.take(index, np.arange(index.shape[axis] - 1), axis=axis)
    there = np.take(index, np.arange(1, index.shape[axis]), axis=axis)
    linked = (here >= 0) & (there >= 0)
    a, b = here[linked], there[linked]
    off = np.full(a.size, -1.0 / h2)
    rows += [a, b]
    cols += [b, a]
    vals += [off, off]
  matrix = sparse.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(n, n)).tocsr()
  matrix.sort_indices()
  return SparseOperator(matrix=matrix, h=mask.h, dim=mask.dim)


def strip_cells(mask: GridMask, eps: float) -> Tuple[np.ndarray, float]:
  """Operator indices of inside nodes within eps of the complement, and their measure."""
  if eps < mask.h / 2.0:
    raise ResolutionError(f"Strip width {eps} is below half the grid spacing {mask.h}")
  selected = np.flatnonzero(mask.inside_distance <= eps)
  if selected.size == 0:
    raise ResolutionError(f"No node within {eps} of the boundary")
  return selected, selected.size * mask.cell_measure
