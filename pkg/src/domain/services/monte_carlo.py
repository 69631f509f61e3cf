"""Absorbed Brownian motion.

Paths are standard Brownian motion (increments of standard deviation sqrt(dt)
per coordinate), killed on leaving the region and, with the bridge
correction, with probability exp(-2·d_before·d_after/dt) per step. The heat
semigroup e^{tΔ} is Brownian motion run for time 2t.

Paths are simulated in chunks of fixed size; chunk c draws from
SeedSequence(seed, spawn_key=(c,)), so results do not depend on the number
of worker threads.
"""
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
import math
from typing import List, Sequence

import numpy as np
from scipy import ndimage

from ..entities import GridMask, HeatCurve, HeatSample, SurvivalEstimate
from ..exceptions import InputError, ResolutionError, SamplingError
from ..value_objects import DomainKind, DomainSpec, HeatMethod, MCConfig
from .heat_mass import strip_volume

MIN_STEPS = 10
MIN_EFFICIENCY = 1e-4


class Region(ABC):
  """Open set paths live in, described by a signed distance to its boundary."""

  dim: int

  @abstractmethod
  def distance(self, points: np.ndarray) -> np.ndarray:
    """Distance to the boundary, positive inside and <= 0 outside."""

  def bounding_box(self) -> np.ndarray:
    raise InputError(f"{type(self).__name__} has no bounded strip to sample")

  def strip_measure(self, eps: float) -> float:
    raise InputError(f"{type(self).__name__} has no bounded strip to sample")


class HalfSpaceRegion(Region):
  """{x > 0} on the line; only the normal coordinate matters for exit times."""

  dim = 1

  def distance(self, points: np.ndarray) -> np.ndarray:
    return points[:, 0]


class AnalyticRegion(Region):
  """Box, disk or ball with its exact distance function."""

  def __init__(self, domain: DomainSpec):
    if domain.kind not in (DomainKind.BOX, DomainKind.DISK, DomainKind.BALL3):
      raise InputError(f"No analytic distance for {domain}")
    self.domain = domain
    self.dim = domain.dim

  def distance(self, points: np.ndarray) -> np.ndarray:
    if self.domain.kind == DomainKind.BOX:
      lengths = np.asarray(self.domain.lengths)
      return np.min(np.minimum(points, lengths[None, :] - points), axis=1)
    return self.domain.radius - np.linalg.norm(points, axis=1)

  def bounding_box(self) -> np.ndarray:
    return np.asarray(self.domain.bounding_box, dtype=float)

  def strip_measure(self, eps: float) -> float:
    return strip_volume(self.domain, eps)


class MaskRegion(Region):
  """Grid domain; the distance field is interpolated bilinearly between nodes.

  Every inside node owns a cell of side h, so the boundary sits half a cell
  past the last inside node and the interpolated distance is shifted by h/2.
  This keeps the simulated strip consistent with `strip_measure`.
  """

  def __init__(self, mask: GridMask):
    self.mask = mask
    self.dim = mask.dim

  def distance(self, points: np.ndarray) -> np.ndarray:
    origin = np.asarray(self.mask.origin)
    grid = ((points - origin[None, :]) / self.mask.h).T
    if self.dim == 2:
      grid = grid[::-1]
    nodal = ndimage.map_coordinates(self.mask.distance, grid, order=1, mode="constant", cval=0.0)
    return nodal - 0.5 * self.mask.h

  def bounding_box(self) -> np.ndarray:
    return np.asarray(self.mask.bounding_box, dtype=float)

  def strip_measure(self, eps: float) -> float:
    return int(np.count_nonzero(self.mask.inside_distance <= eps)) * self.mask.cell_measure


def region_for(domain: DomainSpec) -> Region:
  if domain.kind == DomainKind.MASK:
    return MaskRegion(domain.mask)
  return AnalyticRegion(domain)


class StartSampler(ABC):
  """Distribution of path starting points; `scale` sets the default step."""

  scale: float

  @abstractmethod
  def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
    """n starting points, shape (n, dim)."""


class PointStart(StartSampler):

  def __init__(self, point: Sequence[float], scale: float):
    self.point = np.asarray(point, dtype=float)
    self.scale = scale

  def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
    return np.tile(self.point, (n, 1))


class StripStart(StartSampler):
  """Uniform points of {0 < d(x) <= eps}, by rejection from the bounding box."""

  def __init__(self, region: Region, eps: float):
    self.region = region
    self.scale = eps
    self.box = region.bounding_box()

  def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
    lo, hi = self.box[:, 0], self.box[:, 1]
    accepted: List[np.ndarray] = []
    have = proposed = 0
    batch = max(4 * n, 1024)
    while have < n:
      points = lo + (hi - lo) * rng.random((batch, lo.size))
      proposed += batch
      dist = self.region.distance(points)
      keep = points[(dist > 0) & (dist <= self.scale)]
      accepted.append(keep)
      have += keep.shape[0]
      if have < n and proposed >= n / MIN_EFFICIENCY:
        raise SamplingError(f"Strip rejection efficiency {have / proposed:.2e} below {MIN_EFFICIENCY}")
    return np.concatenate(accepted)[:n]


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
  return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


def _simulate_chunk(region: Region, start: StartSampler, n: int, dt: float,
                    record_steps: Sequence[int], bridge: bool, rng: np.random.Generator) -> np.ndarray:
  """Survivor counts at each recorded step for one chunk of n paths."""
  x = start.sample(rng, n)
  alive = region.distance(x) > 0
  counts = np.zeros(len(record_steps), dtype=np.int64)
  sigma = math.sqrt(dt)
  slot = 0
  for step in range(1, record_steps[-1] + 1):
    normals = rng.standard_normal(x.shape)
    uniforms = rng.random(n)
    before = region.distance(x)
    x = x + sigma * normals
    after = region.distance(x)
    killed = after <= 0
    if bridge:
      crossing = np.exp(-2.0 * np.maximum(before, 0.0) * np.maximum(after, 0.0) / dt)
      killed |= uniforms < crossing
    alive &= ~killed
    while slot < len(record_steps) and record_steps[slot] == step:
      counts[slot] = int(np.count_nonzero(alive))
      slot += 1
  return counts


def _steps_for(times: Sequence[float], dt: float) -> List[int]:
  steps = [max(1, int(round(t / dt))) for t in times]
  if any(b < a for a, b in zip(steps, steps[1:])):
    raise InputError("Survival times must be increasing")
  return steps


def _run(region: Region, start: StartSampler, times: Sequence[float], config: MCConfig) -> List[SurvivalEstimate]:
  if not times:
    raise InputError("At least one time is required")
  dt = config.resolved_dt(start.scale)
  if min(times) < MIN_STEPS * dt:
    raise ResolutionError(f"Time {min(times):g} is below {MIN_STEPS} steps of dt={dt:g}")
  steps = _steps_for(times, dt)
  n_chunks = -(-config.n_paths // config.chunk_size)

  def chunk(index: int) -> np.ndarray:
    size = min(config.chunk_size, config.n_paths - index * config.chunk_size)
    return _simulate_chunk(region, start, size, dt, steps, config.bridge_correction,
                           _chunk_rng(config.seed, index))

  with ThreadPoolExecutor(max_workers=config.threads) as pool:
    totals = sum(pool.map(chunk, range(n_chunks)))
  estimates = []
  for survivors in totals:
    p = survivors / config.n_paths
    estimates.append(SurvivalEstimate(probability=float(p),
                                      stderr=float(math.sqrt(p * (1.0 - p) / config.n_paths)),
                                      n_paths=config.n_paths))
  return estimates


def mc_survival(region: Region, start: StartSampler, t: float, config: MCConfig) -> SurvivalEstimate:
  """Probability that a path started from `start` is still alive at time t."""
  return _run(region, start, [t], config)[0]


def mc_survival_curve(region: Region, start: StartSampler, times: Sequence[float],
                      config: MCConfig) -> List[SurvivalEstimate]:
  """Survival at every time of an increasing grid from one set of paths."""
  return _run(region, start, list(times), config)


def mc_heat_mass(region: Region, eps: float, t: float, config: MCConfig) -> HeatSample:
  """strip_measure × survival to time 2t of paths started uniformly in the strip."""
  return mc_heat_curve(region, eps, [t], config).samples[0]


def mc_heat_curve(region: Region, eps: float, times: Sequence[float], config: MCConfig) -> HeatCurve:
  measure = region.strip_measure(eps)
  ordered = sorted(times)
  estimates = _run(region, StripStart(region, eps), [2.0 * t for t in ordered], config)
  samples = [HeatSample(t=t, value=measure * e.probability, stderr=measure * e.stderr)
             for t, e in zip(ordered, estimates)]
  return HeatCurve(samples=samples, method=HeatMethod.MONTE_CARLO)
