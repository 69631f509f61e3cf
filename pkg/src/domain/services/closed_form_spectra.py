"""Exact Dirichlet spectra of boxes, the disk and the 3D ball."""
import math
from typing import List, Optional, Tuple

import numpy as np

from ..entities import Spectrum
from ..exceptions import BudgetError, IncompleteBaseError, InputError, UnsupportedOrderError
from ..value_objects import DomainKind, DomainSpec, EigenMode, EvalTolerances, ModeSource
from . import special_functions

MAX_BOX_DIM = 4
DEFAULT_BUDGET = 5_000_000
CUTOFF_GROWTH = 1.1


def unit_ball_volume(d: int) -> float:
  return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def weyl_count(volume: float, perimeter: float, d: int, lam: float) -> float:
  """Two-term Weyl estimate of the number of eigenvalues below lam."""
  leading = unit_ball_volume(d) / (2.0 * math.pi) ** d * volume * lam ** (d / 2.0)
  if d == 1:
    boundary = 0.25 * perimeter
  else:
    boundary = 0.25 * unit_ball_volume(d - 1) / (2.0 * math.pi) ** (d - 1) * perimeter * lam ** ((d - 1) / 2.0)
  return leading - boundary


def weyl_cutoff(domain: DomainSpec, n: int, slack: float = 1.02) -> float:
  """Eigenvalue level whose two-term Weyl count reaches n·slack."""
  d = domain.dim
  lam = (n * (2.0 * math.pi) ** d / (unit_ball_volume(d) * domain.volume)) ** (2.0 / d)
  while weyl_count(domain.volume, domain.perimeter, d, lam) < n * slack:
    lam *= 1.02
  return lam


def interval_mean(a: np.ndarray, length: float) -> np.ndarray:
  """∫ sqrt(2/L)·sin(aπx/L) over [0, L]: 2·sqrt(2L)/(aπ) for odd a, 0 for even a."""
  a = np.asarray(a)
  return np.where(a % 2 == 1, 2.0 * math.sqrt(2.0 * length) / (a * np.pi), 0.0)


def _axis_term(a: np.ndarray, length: float) -> np.ndarray:
  return (a * np.pi / length) ** 2


def _box_modes_below(lengths: Tuple[float, ...], lam_max: float, budget: int,
                     odd_only: bool = False) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
  # Σ (a_i/L_i)², times π² at the end: permuted tuples of a cube tie exactly
  q = np.zeros(1)
  q_max = lam_max / np.pi ** 2
  mean = np.ones(1)
  labels = np.zeros((1, 0), dtype=np.int64)
  for length in lengths:
    a_max = int(math.floor(length * math.sqrt(lam_max) / math.pi))
    a = np.arange(1, a_max + 1, 2 if odd_only else 1, dtype=np.int64)
    if a.size == 0:
      return np.zeros(0), np.zeros(0), np.zeros((0, len(lengths)), dtype=np.int64)
    if q.size * a.size > budget:
      raise BudgetError(f"Box enumeration needs {q.size * a.size} tuples, budget is {budget}")
    candidate = q[:, None] + ((a / length) ** 2)[None, :]
    rows, cols = np.nonzero(candidate <= q_max)
    q = candidate[rows, cols]
    mean = mean[rows] * interval_mean(a, length)[cols]
    labels = np.column_stack([labels[rows], a[cols]])
  return np.pi ** 2 * q, mean, labels


def _sorted_modes(lam: np.ndarray, mean: np.ndarray, labels: List[tuple],
                  n: Optional[int], source: ModeSource = ModeSource.EXACT,
                  residuals: Optional[np.ndarray] = None) -> List[EigenMode]:
  keyed = sorted(range(len(labels)), key=lambda i: (lam[i], labels[i]))
  if n is not None:
    keyed = keyed[:n]
  res = residuals if residuals is not None else np.zeros(len(labels))
  return [EigenMode(lam=float(lam[i]), mean=float(mean[i]), label=labels[i], source=source,
                    residual=float(res[i])) for i in keyed]


def _box_spectrum(domain: DomainSpec, lam_max: float, n: Optional[int], budget: int,
                  odd_only: bool = False) -> Tuple[List[EigenMode], int]:
  lam, mean, labels = _box_modes_below(domain.lengths, lam_max, budget, odd_only)
  tuples = [tuple(int(v) for v in row) for row in labels]
  order = np.lexsort(tuple(labels[:, j] for j in range(labels.shape[1] - 1, -1, -1)) + (lam,))
  if n is not None:
    order = order[:n]
  modes = [EigenMode(lam=float(lam[i]), mean=float(mean[i]), label=tuples[i]) for i in order]
  return modes, lam.size


def _disk_modes_below(radius: float, lam_max: float, tol: EvalTolerances,
                      radial_only: bool = False):
  s = radius * math.sqrt(lam_max)
  lam, mean, labels = [], [], []
  m = 0
  while True:
    try:
      if special_functions.bessel_zero(m, 1, tol) > s:
        break
    except UnsupportedOrderError as error:
      raise BudgetError(f"Disk enumeration needs Bessel order {m}") from error
    for k, zero in enumerate(special_functions.bessel_zeros(m, s, tol), start=1):
      value = (zero / radius) ** 2
      if m == 0:
        lam.append(value)
        mean.append(2.0 * math.sqrt(math.pi) * radius / zero)
        labels.append((0, k, 0))
      else:
        for branch in (0, 1):
          lam.append(value)
          mean.append(0.0)
          labels.append((m, k, branch))
    if radial_only:
      break
    m += 1
  return np.array(lam), np.array(mean), labels


def _ball3_modes_below(radius: float, lam_max: float, tol: EvalTolerances,
                       radial_only: bool = False):
  s = radius * math.sqrt(lam_max)
  lam, mean, labels = [], [], []
  l = 0
  while True:
    try:
      if special_functions.sph_bessel_zero(l, 1, tol) > s:
        break
    except UnsupportedOrderError as error:
      raise BudgetError(f"Ball enumeration needs spherical order {l}") from error
    k = 1
    while True:
      zero = special_functions.sph_bessel_zero(l, k, tol)
      if zero > s:
        break
      value = (zero / radius) ** 2
      if l == 0:
        lam.append(value)
        mean.append(4.0 * radius ** 1.5 / (math.sqrt(2.0 * math.pi) * k))
        labels.append((0, k, 0))
      else:
        for i in range(2 * l + 1):
          lam.append(value)
          mean.append(0.0)
          labels.append((l, k, i))
      k += 1
    if radial_only:
      break
    l += 1
  return np.array(lam), np.array(mean), labels


def modes_below(domain: DomainSpec, lam_max: float, n: Optional[int] = None,
                tol: EvalTolerances = special_functions.DEFAULT_TOLERANCES,
                budget: int = DEFAULT_BUDGET) -> List[EigenMode]:
  """All exact modes with eigenvalue <= lam_max, sorted (optionally the first n)."""
  if domain.kind == DomainKind.BOX:
    return _box_spectrum(domain, lam_max, n, budget)[0]
  if domain.kind == DomainKind.DISK:
    lam, mean, labels = _disk_modes_below(domain.radius, lam_max, tol)
  elif domain.kind == DomainKind.BALL3:
    lam, mean, labels = _ball3_modes_below(domain.radius, lam_max, tol)
  else:
    raise InputError(f"No closed-form spectrum for {domain.kind} domains")
  if len(labels) > budget:
    raise BudgetError(f"Enumeration produced {len(labels)} modes, budget is {budget}")
  return _sorted_modes(lam, mean, labels, n)


def _enumerate(domain: DomainSpec, n: int, tol: EvalTolerances, budget: int) -> Spectrum:
  if n < 1:
    raise InputError("At least one mode must be requested")
  lam_max = weyl_cutoff(domain, n)
  while True:
    modes = modes_below(domain, lam_max, None, tol, budget)
    if len(modes) >= n:
      return Spectrum(domain=domain, modes=modes[:n])
    lam_max *= CUTOFF_GROWTH


def enumerate_box(lengths, n: int, budget: int = DEFAULT_BUDGET) -> Spectrum:
  """The n smallest Dirichlet modes of the box prod [0, L_i]."""
  if not 1 <= len(lengths) <= MAX_BOX_DIM:
    raise InputError(f"Boxes of dimension 1..{MAX_BOX_DIM} are supported, got {len(lengths)}")
  return _enumerate(DomainSpec.box(lengths), n, special_functions.DEFAULT_TOLERANCES, budget)


def enumerate_disk(radius: float, n: int,
                   tol: EvalTolerances = special_functions.DEFAULT_TOLERANCES,
                   budget: int = DEFAULT_BUDGET) -> Spectrum:
  """The n smallest modes of the disk; angular orders m >= 1 appear as two branches."""
  return _enumerate(DomainSpec.disk(radius), n, tol, budget)


def enumerate_ball3(radius: float, n: int,
                    tol: EvalTolerances = special_functions.DEFAULT_TOLERANCES,
                    budget: int = DEFAULT_BUDGET) -> Spectrum:
  """The n smallest modes of the 3D ball, 2l+1 copies per (l, k)."""
  return _enumerate(DomainSpec.ball3(radius), n, tol, budget)


def exact_spectrum(domain: DomainSpec, n: int, budget: int = DEFAULT_BUDGET) -> Spectrum:
  if domain.kind == DomainKind.BOX:
    return enumerate_box(domain.lengths, n, budget)
  if domain.kind == DomainKind.DISK:
    return enumerate_disk(domain.radius, n, budget=budget)
  if domain.kind == DomainKind.BALL3:
    return enumerate_ball3(domain.radius, n, budget=budget)
  raise InputError(f"No closed-form spectrum for {domain}")


def _box_lattice_sums(base: Spectrum) -> Optional[np.ndarray]:
  """Σ (a_i/L_i)² per mode of an exact box spectrum, None for any other base."""
  lengths = base.domain.lengths
  if base.domain.kind != DomainKind.BOX or base.source != ModeSource.EXACT:
    return None
  if any(len(label) != len(lengths) for label in base.labels):
    return None
  labels = np.array(base.labels, dtype=np.int64)
  q = np.zeros(base.n)
  for j, side in enumerate(lengths):
    q = q + (labels[:, j] / side) ** 2
  return q


def tensor_compose(base: Spectrum, interval_length: float, n: int) -> Spectrum:
  """Spectrum of base × [0, L] from a base spectrum.

  Complete up to the n-th composed eigenvalue only when that eigenvalue lies
  below lambda_base_max + (pi/L)²; otherwise IncompleteBaseError. Exact box
  bases are summed in the π²·Σ(a_i/L_i)² form of enumerate_box, so a product
  of intervals reproduces the box spectrum bit for bit.
  """
  if base.mean_support_only:
    raise InputError("Cannot compose a spectrum restricted to nonzero means")
  length = float(interval_length)
  cap = base.lambda_max + _axis_term(np.array([1]), length)[0]
  lattice = _box_lattice_sums(base)
  lam, mean, labels, residual = [], [], [], []
  for index, mode in enumerate(base.modes):
    a_max = int(math.floor(length * math.sqrt(max(cap - mode.lam, 0.0)) / math.pi))
    a = np.arange(1, a_max + 1, dtype=np.int64)
    if lattice is None:
      values = mode.lam + _axis_term(a, length)
    else:
      values = np.pi ** 2 * (lattice[index] + (a / length) ** 2)
    means = mode.mean * interval_mean(a, length)
    for i in np.flatnonzero(values < cap):
      lam.append(values[i])
      mean.append(means[i])
      labels.append(mode.label + (int(a[i]),))
      residual.append(mode.residual)
  if len(labels) < n:
    raise IncompleteBaseError(
      f"Base with {base.n} modes yields only {len(labels)} complete composed modes, {n} requested")
  modes = _sorted_modes(np.array(lam), np.array(mean), labels, n, base.source, np.array(residual))
  domain = DomainSpec.product(base.domain, length)
  return Spectrum(domain=domain, modes=modes, cluster_tol=base.cluster_tol)


def nonzero_mean_modes(domain: DomainSpec, lam_max: float,
                       tol: EvalTolerances = special_functions.DEFAULT_TOLERANCES,
                       budget: int = DEFAULT_BUDGET) -> Spectrum:
  """Every exact mode below lam_max whose mean is nonzero.

  Boxes keep all-odd tuples, the disk and the ball their radial modes. Heat
  sums weighted by the means only see these modes.
  """
  if domain.kind == DomainKind.BOX:
    modes = _box_spectrum(domain, lam_max, None, budget, odd_only=True)[0]
  elif domain.kind == DomainKind.DISK:
    modes = _sorted_modes(*_disk_modes_below(domain.radius, lam_max, tol, radial_only=True), None)
  elif domain.kind == DomainKind.BALL3:
    modes = _sorted_modes(*_ball3_modes_below(domain.radius, lam_max, tol, radial_only=True), None)
  else:
    raise InputError(f"No closed-form spectrum for {domain}")
  if not modes:
    raise InputError(f"No nonzero-mean mode below {lam_max}")
  return Spectrum(domain=domain, modes=modes, mean_support_only=True)
