"""Special functions behind the closed-form spectra and the heat-mass estimates.

Bessel J regimes (integer order m):
  x <= 12                  power series
  12 < x < max(25, 2m)     Miller backward recurrence, normalised by
                           J0 + 2·sum J_2k = 1
  otherwise                Hankel asymptotic for J0, J1 and forward recurrence

Zeros of one order are found in increasing k: zero k is the first sign
change after zero k - 1 (after a lower bound for k = 1), refined by Newton
from McMahon's or the uniform large-order expansion inside that bracket,
with bisection as fallback. Each zero therefore has the right index.
"""
import math
import threading
from typing import Callable, Dict, List, Optional, Tuple

from scipy.optimize import brentq

from ..exceptions import ConvergenceError, UnsupportedOrderError
from ..value_objects import EvalTolerances

MAX_ORDER = 200
MAX_SPHERICAL_ORDER = 100
SERIES_LIMIT = 12.0
HANKEL_LIMIT = 25.0

AIRY_FIRST_ZERO = -2.338107410459767
# smallest gap between zeros of J_0
ORDER_ZERO_MIN_GAP = 3.0
SCAN_STEP = 1.0
MAX_SCAN_STEPS = 64

DEFAULT_TOLERANCES = EvalTolerances()

_RESCALE = 1e250


def _check_order(order: int, limit: int = MAX_ORDER):
  if order < 0 or order > limit:
    raise UnsupportedOrderError(f"Order {order} outside supported range [0, {limit}]")


def _series(order: int, x: float, tol: EvalTolerances) -> float:
  if x == 0.0:
    return 1.0 if order == 0 else 0.0
  half = 0.5 * x
  term = math.exp(order * math.log(half) - math.lgamma(order + 1))
  total = term
  q = -half * half
  for k in range(1, tol.max_terms):
    term *= q / (k * (k + order))
    total += term
    if abs(term) < 1e-17 * max(abs(total), 1e-300) and k > half:
      return total
  raise ConvergenceError(f"Bessel series did not converge for order {order} at x={x}")


def _hankel(nu: int, x: float) -> float:
  mu = 4.0 * nu * nu
  p, q = 1.0, 0.0
  term = 1.0
  previous = math.inf
  for k in range(1, 200):
    term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
    if abs(term) >= previous or abs(term) < 1e-17:
      break
    previous = abs(term)
    if k % 2 == 1:
      q += term * (-1) ** ((k - 1) // 2)
    else:
      p += term * (-1) ** (k // 2)
  chi = x - (0.5 * nu + 0.25) * math.pi
  return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def _miller(order: int, x: float) -> Tuple[float, float]:
  top = max(order + 1, x)
  start = 2 * ((int(top) + 16 + int(math.sqrt(160.0 * top))) // 2)
  j_next, j_here = 0.0, 1e-30
  norm = 0.0
  wanted_m = wanted_m1 = 0.0
  for k in range(start, 0, -1):
    j_prev = 2.0 * k / x * j_here - j_next
    j_next, j_here = j_here, j_prev
    # j_here now holds J_{k-1}
    if abs(j_here) > _RESCALE:
      j_here /= _RESCALE
      j_next /= _RESCALE
      norm /= _RESCALE
      wanted_m /= _RESCALE
      wanted_m1 /= _RESCALE
    if (k - 1) % 2 == 0 and k - 1 > 0:
      norm += 2.0 * j_here
    if k - 1 == order:
      wanted_m = j_here
    if k - 1 == order + 1:
      wanted_m1 = j_here
  norm += j_here
  return wanted_m / norm, wanted_m1 / norm


def _forward(order: int, x: float) -> Tuple[float, float]:
  j_prev, j_here = _hankel(0, x), _hankel(1, x)
  if order == 0:
    return j_prev, j_here
  for k in range(1, order + 1):
    j_prev, j_here = j_here, 2.0 * k / x * j_here - j_prev
  return j_prev, j_here


def _bessel_pair(order: int, x: float, tol: EvalTolerances) -> Tuple[float, float]:
  """(J_order(x), J_{order+1}(x))."""
  if x <= SERIES_LIMIT:
    return _series(order, x, tol), _series(order + 1, x, tol)
  if x < max(HANKEL_LIMIT, 2.0 * order):
    return _miller(order, x)
  return _forward(order, x)


def bessel_j(order: int, x: float, tol: EvalTolerances = DEFAULT_TOLERANCES) -> float:
  """J_order(x) for integer order 0..200 and x >= 0."""
  _check_order(order)
  if x < 0:
    raise ValueError("Bessel argument must be nonnegative")
  return _bessel_pair(order, float(x), tol)[0]


def _airy_zero(k: int) -> float:
  """Asymptotic k-th zero a_k < 0 of the Airy function Ai."""
  t = 3.0 * math.pi / 8.0 * (4 * k - 1)
  return -t ** (2.0 / 3.0) * (1.0 + 5.0 / 48.0 * t ** -2 - 5.0 / 36.0 * t ** -4)


def _mcmahon(nu: float, k: int) -> float:
  mu = 4.0 * nu * nu
  beta = (k + 0.5 * nu - 0.25) * math.pi
  eight_beta = 8.0 * beta
  return (beta - (mu - 1.0) / eight_beta
          - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * eight_beta ** 3))


def _uniform(nu: float, k: int) -> float:
  # leading term of the uniform expansion: j ≈ ν·z(ζ), ζ = ν^{-2/3}·a_k,
  # (2/3)(-ζ)^{3/2} = sqrt(z² - 1) - arcsec z
  target = 2.0 / 3.0 * (-_airy_zero(k) * nu ** (-2.0 / 3.0)) ** 1.5
  z = brentq(lambda y: math.sqrt(y * y - 1.0) - math.acos(1.0 / y) - target, 1.0, target + 3.0)
  return nu * z


def zero_guess(nu: float, k: int) -> float:
  """Asymptotic location of the k-th positive zero of J_nu.

  McMahon's expansion once k exceeds the order, the uniform (Airy-type)
  expansion for the zeros of high orders below that.
  """
  if nu < 1.0 or k > nu:
    return _mcmahon(nu, k)
  return _uniform(nu, k)


def _scan_start(nu: float, previous: Optional[float]) -> float:
  """Point below the next zero with no zero in between."""
  if previous is None:
    # j_{nu,1} > nu - a_1·(nu/2)^{1/3}
    return max(0.5, 0.98 * (nu - AIRY_FIRST_ZERO * (nu / 2.0) ** (1.0 / 3.0)))
  return previous + (math.pi if nu >= 0.5 else ORDER_ZERO_MIN_GAP)


def _refine_zero(value: Callable[[float], Tuple[float, float]], guess: float, lo: float, hi: float,
                 tol: EvalTolerances) -> float:
  """Newton from `guess` inside the sign-change bracket [lo, hi], bisection if it leaves."""
  x = guess if lo < guess < hi else 0.5 * (lo + hi)
  for _ in range(tol.newton_max_iter):
    f, df = value(x)
    if df == 0.0:
      break
    step = f / df
    x -= step
    if not (lo < x < hi):
      break
    if abs(step) <= max(tol.abs_tol, 4.0 * math.ulp(x)):
      return x
  return brentq(lambda y: value(y)[0], lo, hi, xtol=tol.abs_tol, rtol=1e-15,
                maxiter=tol.max_terms)


def _next_zero(value: Callable[[float], Tuple[float, float]], nu: float, k: int,
               previous: Optional[float], tol: EvalTolerances, what: str) -> float:
  """Zero k, the first sign change after zero k - 1.

  Zeros of J_nu are more than 3 apart, so steps of SCAN_STEP never pass two
  of them.
  """
  lo = _scan_start(nu, previous)
  f_lo = value(lo)[0]
  for _ in range(MAX_SCAN_STEPS):
    if f_lo == 0.0:
      return lo
    hi = lo + SCAN_STEP
    f_hi = value(hi)[0]
    if f_lo * f_hi <= 0.0:
      return _refine_zero(value, zero_guess(nu, k), lo, hi, tol)
    lo, f_lo = hi, f_hi
  raise ConvergenceError(f"Could not bracket {what} after x={lo:.6f}")


_ZERO_TABLES: Dict[Tuple[str, int, EvalTolerances], List[float]] = {}
_ZERO_LOCK = threading.Lock()


def _zero_from_table(kind: str, order: int, k: int, tol: EvalTolerances) -> float:
  if kind == "J":
    nu = float(order)

    def value(x: float) -> Tuple[float, float]:
      j_m, j_m1 = _bessel_pair(order, x, tol)
      return j_m, order / x * j_m - j_m1
  else:
    nu = order + 0.5

    def value(x: float) -> Tuple[float, float]:
      return _sph_pair(order, x)

  with _ZERO_LOCK:
    zeros = _ZERO_TABLES.setdefault((kind, order, tol), [])
    while len(zeros) < k:
      index = len(zeros) + 1
      previous = zeros[-1] if zeros else None
      zeros.append(_next_zero(value, nu, index, previous, tol, f"zero {index} of {kind}_{order}"))
    return zeros[k - 1]


def bessel_zero(order: int, k: int, tol: EvalTolerances = DEFAULT_TOLERANCES) -> float:
  """k-th positive zero j_{order,k} of J_order."""
  _check_order(order)
  if k < 1:
    raise ValueError("Zero index starts at 1")
  return _zero_from_table("J", order, k, tol)


def bessel_zeros(order: int, x_max: float, tol: EvalTolerances = DEFAULT_TOLERANCES) -> List[float]:
  """All positive zeros of J_order below x_max, ascending."""
  zeros = []
  k = 1
  while True:
    zero = bessel_zero(order, k, tol)
    if zero >= x_max:
      return zeros
    zeros.append(zero)
    k += 1


def _sph_pair(l: int, x: float) -> Tuple[float, float]:
  """(j_l(x), j_l'(x)) for x > 0."""
  s, c = math.sin(x), math.cos(x)
  j0 = s / x
  if l == 0:
    return j0, c / x - s / (x * x)
  j1 = s / (x * x) - c / x
  if x >= l:
    j_prev, j_here = j0, j1
    for n in range(1, l):
      j_prev, j_here = j_here, (2 * n + 1) / x * j_here - j_prev
  else:
    start = l + 16 + int(math.sqrt(160.0 * l))
    j_next, j_cur = 0.0, 1e-30
    j_l = j_lm1 = 0.0
    for n in range(start, 0, -1):
      j_next, j_cur = j_cur, (2 * n + 1) / x * j_cur - j_next
      # j_cur now holds j_{n-1}
      if abs(j_cur) > _RESCALE:
        j_cur /= _RESCALE
        j_next /= _RESCALE
        j_l /= _RESCALE
        j_lm1 /= _RESCALE
      if n - 1 == l:
        j_l = j_cur
      if n - 1 == l - 1:
        j_lm1 = j_cur
    # j_cur = j_0, j_next = j_1 in the unnormalised sequence
    scale = j0 / j_cur if abs(j0) >= abs(j1) else j1 / j_next
    j_prev, j_here = j_lm1 * scale, j_l * scale
  return j_here, j_prev - (l + 1) / x * j_here


def sph_bessel_j(l: int, x: float) -> float:
  """Spherical Bessel function j_l(x) for 0 <= l <= 100."""
  _check_order(l, MAX_SPHERICAL_ORDER)
  if x < 0:
    raise ValueError("Bessel argument must be nonnegative")
  if x == 0.0:
    return 1.0 if l == 0 else 0.0
  return _sph_pair(l, float(x))[0]


def sph_bessel_zero(l: int, k: int, tol: EvalTolerances = DEFAULT_TOLERANCES) -> float:
  """k-th positive zero of the spherical Bessel function j_l."""
  _check_order(l, MAX_SPHERICAL_ORDER)
  if k < 1:
    raise ValueError("Zero index starts at 1")
  if l == 0:
    return k * math.pi
  return _zero_from_table("j", l, k, tol)


def normal_cdf(x: float) -> float:
  """Standard normal distribution function."""
  return min(1.0, max(0.0, 0.5 * math.erfc(-x / math.sqrt(2.0))))


def upper_gamma(s: float, x: float, tol: EvalTolerances = DEFAULT_TOLERANCES) -> float:
  """Upper incomplete gamma Γ(s, x) for 0 < s <= 50, x >= 0.

  Continued fraction (modified Lentz) above s + 1, Γ(s) minus the lower
  series below.
  """
  if not (0 < s <= 50):
    raise ValueError("Shape parameter must lie in (0, 50]")
  if x < 0:
    raise ValueError("Argument must be nonnegative")
  if x == 0.0:
    return math.gamma(s)
  prefactor = math.exp(-x + s * math.log(x))
  accuracy = 1e-15
  tiny = 1e-300
  if x > s + 1.0:
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, tol.max_terms + 1):
      an = -i * (i - s)
      b += 2.0
      d = an * d + b
      if abs(d) < tiny:
        d = tiny
      c = b + an / c
      if abs(c) < tiny:
        c = tiny
      d = 1.0 / d
      delta = d * c
      h *= delta
      if abs(delta - 1.0) < accuracy:
        return prefactor * h
    raise ConvergenceError(f"Incomplete gamma continued fraction stalled at s={s}, x={x}")
  term = 1.0 / s
  total = term
  ap = s
  for _ in range(tol.max_terms):
    ap += 1.0
    term *= x / ap
    total += term
    if abs(term) < abs(total) * accuracy:
      return math.gamma(s) - prefactor * total
  raise ConvergenceError(f"Incomplete gamma series stalled at s={s}, x={x}")
