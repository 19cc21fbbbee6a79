"""Shared domain types: tolerances, budgets, random streams, diagnostics.

The generalized tolerance combines an absolute and a relative part either
by taking the larger of the two (``Max``) or by a theta-weighted linear
combination (``Comb``); every solver in the package phrases its stopping
rule through :func:`tolfun`.

Randomness flows from a single seedable source, :class:`RngStream`, which
hands out statistically independent child streams by index.  Normal
variates are produced by applying the inverse normal CDF to the uniform
stream (Wichura-class rational approximation via ``scipy.special.ndtri``),
so one uniform source drives all sampling deterministically and streams
can be split without correlations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .errors import ConfigurationError


class TolType(enum.Enum):
    """How absolute and relative tolerances combine."""

    MAX = "max"
    COMB = "comb"


@dataclass(frozen=True)
class ToleranceSpec:
    """Absolute/relative error tolerance with its combination rule.

    ``abstol`` is in the units of the estimand, ``reltol`` is
    dimensionless in [0, 1], and ``theta`` weights the ``Comb`` rule
    (theta = 1 is pure absolute, theta = 0 pure relative).
    """

    abstol: float = 1e-2
    reltol: float = 1e-1
    toltype: TolType = TolType.MAX
    theta: float = 1.0

    def __post_init__(self):
        if not (self.abstol >= 0.0):
            raise ConfigurationError(f"abstol must be >= 0, got {self.abstol}")
        if not (0.0 <= self.reltol <= 1.0):
            raise ConfigurationError(f"reltol must be in [0,1], got {self.reltol}")
        if not (0.0 <= self.theta <= 1.0):
            raise ConfigurationError(f"theta must be in [0,1], got {self.theta}")
        if self.toltype is TolType.MAX:
            if self.abstol == 0.0 and self.reltol == 0.0:
                raise ConfigurationError(
                    "with toltype 'max', abstol and reltol cannot both be 0"
                )
        elif self.toltype is TolType.COMB:
            if self.theta == 1.0 and self.abstol == 0.0:
                raise ConfigurationError(
                    "with toltype 'comb' and theta = 1, abstol cannot be 0"
                )
            if self.theta == 0.0 and self.reltol == 0.0:
                raise ConfigurationError(
                    "with toltype 'comb' and theta = 0, reltol cannot be 0"
                )
        else:
            raise ConfigurationError(f"unknown toltype {self.toltype!r}")


def tolfun(spec: ToleranceSpec, mu_abs: float) -> float:
    """Generalized error tolerance at estimand magnitude ``mu_abs``.

    Max rule: max(abstol, reltol * mu_abs).
    Comb rule: theta * abstol + (1 - theta) * reltol * mu_abs.
    """
    if mu_abs < 0.0 or not np.isfinite(mu_abs):
        raise ConfigurationError(f"mu_abs must be finite and >= 0, got {mu_abs}")
    if spec.toltype is TolType.MAX:
        return max(spec.abstol, spec.reltol * mu_abs)
    return spec.theta * spec.abstol + (1.0 - spec.theta) * spec.reltol * mu_abs


@dataclass(frozen=True)
class Budget:
    """Resource limits shared by the adaptive solvers."""

    nmax: int = 10_000_000
    maxiter: int = 1000
    tbudget_seconds: float = 100.0
    nbudget: int = 1_000_000_000

    def __post_init__(self):
        for name in ("nmax", "maxiter", "nbudget"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive")
        if not (self.tbudget_seconds > 0):
            raise ConfigurationError("tbudget_seconds must be positive")


@dataclass(frozen=True)
class RngStream:
    """Deterministic, splittable uniform source.

    Identical (seed, stream_index) pairs reproduce the same unbounded
    sequence of doubles in [0, 1); distinct indices give independent
    streams.  Instances are immutable; consumers create a stateful
    generator with :meth:`generator` and advance that.
    """

    seed: int = 0
    stream_index: int = 0

    def child(self, index: int) -> "RngStream":
        """Stream with the same seed and a different index."""
        return RngStream(self.seed, index)

    def generator(self) -> np.random.Generator:
        """Fresh numpy generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(entropy=self.seed,
                                    spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(ss))


def uniform_stream(rng: RngStream, n: int) -> np.ndarray:
    """First ``n`` uniform [0,1) doubles of the stream."""
    if n < 0:
        raise ConfigurationError("n must be >= 0")
    if n == 0:
        return np.empty(0)
    return rng.generator().random(n)


def normal_stream(rng: RngStream, n: int) -> np.ndarray:
    """First ``n`` standard-normal draws, via inverse CDF of the uniforms."""
    if n < 0:
        raise ConfigurationError("n must be >= 0")
    if n == 0:
        return np.empty(0)
    u = rng.generator().random(n)
    # ndtri(0) = -inf; the uniform stream can emit exactly 0.0.
    np.clip(u, np.finfo(float).tiny, None, out=u)
    return ndtri(u)


@dataclass
class SolverDiagnostics:
    """Per-run output record mirroring each algorithm's result structure.

    ``exit_flags`` is a bitset whose meaning is algorithm-specific; it is 0
    on every path whose postcondition claims the guarantee.  ``extra``
    carries algorithm-specific fields (nstar list, tau, ninit, volumeX,
    kurtmax, hmu/tol history, ...).
    """

    algorithm: str
    n_evals: int = 0
    n_points: int = 0
    iterations: int = 0
    errest: float = 0.0
    exit_flags: int = 0
    elapsed_seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def check(self) -> None:
        if not (self.n_evals >= self.n_points >= 0):
            raise ConfigurationError("diagnostics require n_evals >= n_points >= 0")
        if self.errest < 0 or self.elapsed_seconds < 0:
            raise ConfigurationError("errest and elapsed_seconds must be >= 0")

    def to_json_dict(self) -> dict:
        """JSON-ready view. Wall-clock time is excluded so that reports for
        a fixed seed are byte-identical across runs."""
        return {
            "algorithm": self.algorithm,
            "n_evals": int(self.n_evals),
            "n_points": int(self.n_points),
            "iterations": int(self.iterations),
            "errest": float(self.errest),
            "exit_flags": int(self.exit_flags),
            "extra": _jsonable(self.extra),
        }


def _jsonable(obj):
    """Recursively convert numpy scalars/arrays for json serialization."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj
