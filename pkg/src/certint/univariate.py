"""Guaranteed univariate algorithms on a finite interval [a, b].

Three adaptive solvers share the same data-driven machinery:

* :func:`funappx` -- locally adaptive piecewise-linear approximation.
  Each subinterval carries its own uniform grid and cone constant; a
  subinterval is certified once its estimated sup-norm interpolation
  error falls below ``abstol``, and is otherwise split at its midpoint
  (both halves regridded with ``ninit`` fresh points).
* :func:`funmin` -- global minimum value plus the subset of [a, b]
  certified to contain every global minimizer, on a uniform grid that
  doubles until the function-value gap or the candidate-set length is
  small enough.
* :func:`integral` -- adaptive trapezoidal quadrature on a doubling
  uniform grid.

All three compute their error estimates from centered second differences
and the deviation of local slopes from the secant slope; when the sampled
data contradict the assumed cone inequality, the cone constant (``nstar``
or ``tau``) is doubled before any new points are spent.  The estimates are
upper bounds for every function inside the cone, which is what the
guarantee tests exercise.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import Budget, SolverDiagnostics
from .errors import ConfigurationError, EvaluationError

__all__ = [
    "IntervalProblem",
    "PiecewiseLinearApprox",
    "MinimizerResult",
    "ConeState",
    "ninit_rule",
    "funappx",
    "eval_approx",
    "funmin",
    "integral",
]

_MAX_CONE_DOUBLINGS = 64


@dataclass(frozen=True)
class IntervalProblem:
    """A univariate problem: batched callback ``f`` on [a, b] with budgets.

    ``f`` must accept an ndarray of abscissae and return an equal-length
    ndarray of values; it is assumed pure.
    """

    f: Callable[[np.ndarray], np.ndarray]
    a: float = 0.0
    b: float = 1.0
    abstol: float = 1e-6
    nlo: int = 10
    nhi: int = 1000
    budget: Budget = field(default_factory=Budget)

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
            raise ConfigurationError(
                f"interval must be finite with a < b, got [{self.a}, {self.b}]"
            )
        if not (self.abstol > 0):
            raise ConfigurationError("abstol must be positive")
        if not (3 <= self.nlo <= self.nhi):
            raise ConfigurationError("need 3 <= nlo <= nhi")


@dataclass(frozen=True)
class PiecewiseLinearApprox:
    """Linear interpolant through (knots, values), extended linearly outside."""

    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if k.ndim != 1 or k.shape != v.shape or k.size < 2:
            raise ConfigurationError("knots/values must be equal-length 1-d, size >= 2")
        if not np.all(np.diff(k) > 0):
            raise ConfigurationError("knots must be strictly increasing")
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "values", v)

    def __call__(self, xs) -> np.ndarray:
        return eval_approx(self, xs)


@dataclass(frozen=True)
class MinimizerResult:
    """Certified minimum value and the region containing all minimizers."""

    fmin: float
    volumeX: float
    intervals: list
    errest: float


@dataclass
class ConeState:
    """Cone constants as the solvers left them."""

    nstar_per_interval: list
    tau: int
    tauchange: bool


def ninit_rule(nlo: int, nhi: int, a: float, b: float) -> int:
    """Initial point count interpolating between nlo and nhi by length.

    ceil(nhi * (nlo/nhi)^(1/(1+(b-a)))), clamped to [nlo, nhi] and >= 3.
    """
    if not (3 <= nlo <= nhi):
        raise ConfigurationError("need 3 <= nlo <= nhi")
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise ConfigurationError("need finite a < b")
    raw = math.ceil(nhi * (nlo / nhi) ** (1.0 / (1.0 + (b - a))))
    return max(3, min(max(raw, nlo), nhi))


def _call_f(f, xs: np.ndarray, what: str) -> np.ndarray:
    ys = np.asarray(f(xs), dtype=float)
    if ys.shape != xs.shape:
        raise EvaluationError(
            f"{what}: callback returned shape {ys.shape} for input {xs.shape}"
        )
    if not np.all(np.isfinite(ys)):
        raise EvaluationError(f"{what}: callback returned NaN or Inf")
    return ys


# ---------------------------------------------------------------------------
# funappx: locally adaptive piecewise-linear approximation
# ---------------------------------------------------------------------------

# The centered second difference smooths true curvature by O((w h)^2) for
# oscillation scale w; this inflation keeps errest an upper bound once the
# grid resolves f'', which is the regime in which the solver stops.
_CURVATURE_INFLATION = 1.1


class _Sub:
    """One subinterval with its own grid and cone constant."""

    __slots__ = ("t0", "t1", "xs", "ys", "nstar", "errest", "needs_split")

    def __init__(self, f, t0, t1, ninit, nstar):
        self.t0 = t0
        self.t1 = t1
        self.xs = np.linspace(t0, t1, ninit)
        self.ys = _call_f(f, self.xs, "funappx")
        length = t1 - t0
        h = length / (ninit - 1)
        second = self.ys[:-2] - 2.0 * self.ys[1:-1] + self.ys[2:]
        big_f = np.max(np.abs(second)) / (h * h) if second.size else 0.0
        slopes = np.diff(self.ys) / h
        secant = (self.ys[-1] - self.ys[0]) / length
        v = np.max(np.abs(slopes - secant))
        # data version of the cone inequality ||f''|| <= (2 nstar / len) v,
        # with the slope deviation corrected for what sampling can hide
        violated = big_f * length > 2.0 * nstar * (v + 0.5 * h * big_f)
        if violated:
            for _ in range(_MAX_CONE_DOUBLINGS):
                nstar *= 2
                if big_f * length <= 2.0 * nstar * (v + 0.5 * h * big_f):
                    break
        self.nstar = nstar
        # absent a violation big_f <= cone_cap, so the cap can shave at
        # most the inflation and never undercuts the data bound
        cone_cap = 2.0 * nstar * (v + 0.5 * h * big_f) / length
        f_hat = min(_CURVATURE_INFLATION * big_f, max(cone_cap, big_f))
        self.errest = f_hat * h * h / 8.0
        self.needs_split = violated


def funappx(p: IntervalProblem):
    """Locally adaptive linear-spline approximation of ``p.f`` on [a, b].

    Returns ``(approx, diagnostics)``.  Exit flag bit 1 (value 1) marks an
    exhausted point budget, bit 2 (value 2) an exhausted iteration budget;
    in both cases the approximant is still returned and ``errest`` reports
    the bound actually achieved.
    """
    t_start = time.perf_counter()
    ninit = ninit_rule(p.nlo, p.nhi, p.a, p.b)
    nstar0 = ninit - 2
    subs = [_Sub(p.f, p.a, p.b, ninit, nstar0)]
    n_evals = ninit
    npoints = ninit
    exit_flags = 0
    iters = 0

    while True:
        pending = [s for s in subs
                   if s.errest > p.abstol or s.needs_split]
        if not pending:
            break
        if iters >= p.budget.maxiter:
            exit_flags |= 2
            break
        iters += 1
        out_of_budget = False
        new_subs = []
        for s in subs:
            if not out_of_budget and (s.errest > p.abstol or s.needs_split):
                if npoints + (ninit - 1) > p.budget.nmax:
                    exit_flags |= 1
                    out_of_budget = True
                    new_subs.append(s)
                    continue
                mid = 0.5 * (s.t0 + s.t1)
                left = _Sub(p.f, s.t0, mid, ninit, s.nstar)
                right = _Sub(p.f, mid, s.t1, ninit, s.nstar)
                n_evals += 2 * ninit
                npoints += ninit - 1
                new_subs.extend((left, right))
            else:
                new_subs.append(s)
        subs = new_subs
        if out_of_budget:
            break

    knots = np.concatenate([s.xs[:-1] for s in subs] + [subs[-1].xs[-1:]])
    values = np.concatenate([s.ys[:-1] for s in subs] + [subs[-1].ys[-1:]])
    approx = PiecewiseLinearApprox(knots, values)
    errest = max(s.errest for s in subs)
    cone = ConeState(
        nstar_per_interval=[s.nstar for s in subs],
        tau=2 * max(s.nstar for s in subs) + 1,
        tauchange=any(s.nstar != nstar0 for s in subs),
    )
    diag = SolverDiagnostics(
        algorithm="funappx",
        n_evals=n_evals,
        n_points=npoints,
        iterations=iters,
        errest=errest,
        exit_flags=exit_flags,
        elapsed_seconds=time.perf_counter() - t_start,
        extra={
            "ninit": ninit,
            "nstar": cone.nstar_per_interval,
            "tauchange": cone.tauchange,
            "n_subintervals": len(subs),
            "abstol": p.abstol,
        },
    )
    return approx, diag


def eval_approx(approx: PiecewiseLinearApprox, xs) -> np.ndarray:
    """Evaluate the interpolant; knots reproduce stored values bit-exactly
    and points outside [a, b] extrapolate along the end segments."""
    x = np.asarray(xs, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    k, v = approx.knots, approx.values
    idx = np.clip(np.searchsorted(k, x, side="right") - 1, 0, k.size - 2)
    slope = (v[idx + 1] - v[idx]) / (k[idx + 1] - k[idx])
    out = v[idx] + (x - k[idx]) * slope
    # exact hits on knots bypass the arithmetic above
    pos = np.searchsorted(k, x)
    hit = (pos < k.size) & (k[np.minimum(pos, k.size - 1)] == x)
    out[hit] = v[pos[hit]]
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# funmin: guaranteed global minimization
# ---------------------------------------------------------------------------

def _doubled_grid(f, xs, ys, what):
    """Insert midpoints into a uniform grid, reusing existing values."""
    mids = 0.5 * (xs[:-1] + xs[1:])
    ymid = _call_f(f, mids, what)
    nx = np.empty(xs.size * 2 - 1)
    ny = np.empty_like(nx)
    nx[0::2], nx[1::2] = xs, mids
    ny[0::2], ny[1::2] = ys, ymid
    return nx, ny


def funmin(p: IntervalProblem, tolx: float = 1e-3):
    """Global minimum of ``p.f`` on [a, b] with a certified error bound.

    Stops when the gap between the best sampled value and the certified
    lower bound is at most ``abstol``, or when the total length of the
    subintervals that may contain a minimizer is at most ``tolx``.
    Returns ``(MinimizerResult, diagnostics)``; exitflag 1 means the point
    budget was reached first.
    """
    if not (tolx > 0):
        raise ConfigurationError("tolx must be positive")
    t_start = time.perf_counter()
    ninit = ninit_rule(p.nlo, p.nhi, p.a, p.b)
    tau = 2 * ninit - 3
    tauchange = False
    length = p.b - p.a

    xs = np.linspace(p.a, p.b, ninit)
    ys = _call_f(p.f, xs, "funmin")
    exit_flags = 0
    iters = 0

    while True:
        n = xs.size
        h = length / (n - 1)
        second = ys[:-2] - 2.0 * ys[1:-1] + ys[2:]
        big_f = np.max(np.abs(second)) / (h * h) if second.size else 0.0
        slopes = np.diff(ys) / h
        secant = (ys[-1] - ys[0]) / length
        v = np.max(np.abs(slopes - secant))
        for _ in range(_MAX_CONE_DOUBLINGS):
            if big_f * length <= tau * (v + 0.5 * h * big_f):
                break
            tau *= 2
            tauchange = True

        denom = length - 0.5 * tau * h
        f_bound = tau * v / denom if denom > 0 else np.inf
        f_bound = max(f_bound, big_f)
        dip = f_bound * h * h / 8.0

        upper = float(np.min(ys))
        cell_min = np.minimum(ys[:-1], ys[1:])
        errest = dip if np.isfinite(dip) else np.inf
        candidates = cell_min - dip < upper + p.abstol
        volume_x = h * int(np.count_nonzero(candidates))

        if errest <= p.abstol or volume_x <= tolx:
            break
        if 2 * (n - 1) + 1 > p.budget.nmax:
            exit_flags |= 1
            break
        iters += 1
        xs, ys = _doubled_grid(p.f, xs, ys, "funmin")

    intervals = _merge_cells(xs, candidates)
    result = MinimizerResult(
        fmin=upper,
        volumeX=volume_x,
        intervals=intervals,
        errest=float(errest),
    )
    cone = ConeState(nstar_per_interval=[(tau - 1) // 2], tau=tau,
                     tauchange=tauchange)
    diag = SolverDiagnostics(
        algorithm="funmin",
        n_evals=xs.size,
        n_points=xs.size,
        iterations=iters,
        errest=float(errest) if np.isfinite(errest) else float("inf"),
        exit_flags=exit_flags,
        elapsed_seconds=time.perf_counter() - t_start,
        extra={
            "ninit": ninit,
            "tau": cone.tau,
            "tauchange": cone.tauchange,
            "volumeX": volume_x,
            "intervals": [list(iv) for iv in intervals],
            "abstol": p.abstol,
            "tolx": tolx,
        },
    )
    return result, diag


def _merge_cells(xs: np.ndarray, mask: np.ndarray) -> list:
    """Merge adjacent flagged cells [x_i, x_i+1] into disjoint intervals."""
    intervals = []
    i = 0
    m = mask.size
    while i < m:
        if mask[i]:
            j = i
            while j + 1 < m and mask[j + 1]:
                j += 1
            intervals.append([float(xs[i]), float(xs[j + 1])])
            i = j + 1
        i += 1
    return intervals


# ---------------------------------------------------------------------------
# integral: adaptive trapezoidal quadrature
# ---------------------------------------------------------------------------

def integral(p: IntervalProblem):
    """Adaptive trapezoidal integration of ``p.f`` over [a, b].

    Returns ``(q, diagnostics)``.  Exit flag bit 1 marks point-budget
    exhaustion, bit 2 the iteration cap; ``nstar`` doubles (and
    ``tauchange`` is set) whenever the sampled data contradict the cone
    inequality, before any further points are spent.
    """
    t_start = time.perf_counter()
    ninit = ninit_rule(p.nlo, p.nhi, p.a, p.b)
    nstar = ninit - 2
    tauchange = False
    length = p.b - p.a

    xs = np.linspace(p.a, p.b, ninit)
    ys = _call_f(p.f, xs, "integral")
    exit_flags = 0
    iters = 1

    while True:
        n = xs.size
        h = length / (n - 1)
        slopes = np.diff(ys) / h
        secant = (ys[-1] - ys[0]) / length
        # slope data below the rounding floor is measurement noise, not
        # curvature; snapping it keeps exactly-integrable cases at errest 0
        noise = 8.0 * np.finfo(float).eps * float(np.max(np.abs(ys))) / h
        dev = np.abs(slopes - secant)
        dev[dev <= noise] = 0.0
        curv = np.abs(np.diff(slopes))
        curv[curv <= noise] = 0.0
        v_hat = h * float(np.sum(dev))
        w_hat = float(np.sum(curv))
        for _ in range(_MAX_CONE_DOUBLINGS):
            if w_hat <= (nstar / (2.0 * length)) * (v_hat + 0.5 * h * w_hat):
                break
            nstar *= 2
            tauchange = True

        tau_tilde = nstar / (2.0 * length)
        denom = 1.0 - 0.5 * tau_tilde * h
        v_bound = tau_tilde * v_hat / denom if denom > 0 else np.inf
        v_bound = max(v_bound, w_hat)
        errest = v_bound * h * h / 12.0
        q = h * (np.sum(ys) - 0.5 * (ys[0] + ys[-1]))

        if errest <= p.abstol:
            break
        if 2 * (n - 1) + 1 > p.budget.nmax:
            exit_flags |= 1
            break
        if iters >= p.budget.maxiter:
            exit_flags |= 2
            break
        iters += 1
        xs, ys = _doubled_grid(p.f, xs, ys, "integral")

    cone = ConeState(nstar_per_interval=[nstar], tau=2 * nstar + 1,
                     tauchange=tauchange)
    diag = SolverDiagnostics(
        algorithm="integral",
        n_evals=xs.size,
        n_points=xs.size,
        iterations=iters,
        errest=float(errest) if np.isfinite(errest) else float("inf"),
        exit_flags=exit_flags,
        elapsed_seconds=time.perf_counter() - t_start,
        extra={
            "ninit": ninit,
            "nstar": nstar,
            "tau": cone.tau,
            "tauchange": cone.tauchange,
            "abstol": p.abstol,
        },
    )
    return float(q), diag
