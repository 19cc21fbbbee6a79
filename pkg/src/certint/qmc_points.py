"""Deterministic low-discrepancy point generation and fast transforms.

Two point families back the adaptive cubature:

* :class:`SobolGenerator` -- the digital Sobol' sequence in base 2, built
  from a bundled direction-number table (Joe-Kuo style, dimensions up to
  1111, 53 output bits), optionally randomized by a per-dimension digital
  shift (XOR mask) that preserves the net structure.
* :class:`LatticeGenerator` -- an extensible rank-1 lattice from a bundled
  generating vector (odd integers, valid for up to 2^26 points and 250
  dimensions), optionally randomized by an additive mod-1 shift.

Both expose natural-index point access (``points(start, stop)``) plus the
sequence-order block API used by the doubling cubature loop: Sobol'
blocks come in Gray-code order and lattice blocks in van der Corput
(bit-reversal) order, so that doubling the sample extends rather than
regenerates it.

The module also houses the periodizing variable transforms and thin
power-of-two FFT / fast Walsh-Hadamard transform entry points.
"""

from __future__ import annotations

import enum
import hashlib
import os
from typing import Callable

import numpy as np

from .core import RngStream
from .errors import ConfigurationError, DataFileError

__all__ = [
    "SobolGenerator",
    "LatticeGenerator",
    "Periodizer",
    "sobol_block",
    "lattice_block",
    "fwht_inplace",
    "fft",
    "periodize",
    "periodizer_map_weight",
]

SOBOL_MAX_DIM = 1111
SOBOL_MAX_BITS = 53
LATTICE_MAX_DIM = 250
LATTICE_MAX_M = 26

_DATA_ENV = "GAILRS_DATA_DIR"
_SOBOL_FILE = "sobol_direction_numbers.txt"
_LATTICE_FILE = "lattice_generating_vector.txt"
# Checksums of the bundled data files; regeneration scripts live in
# scripts/.  Overriding GAILRS_DATA_DIR skips the checksum pinning but the
# format validation still applies.
_PINNED_SHA256 = {
    _SOBOL_FILE:
        "2d9024247e666f1bbc7d162494d9568f56b58e13b574cfb82e9647eb61c7158f",
    _LATTICE_FILE:
        "48c29c0f75f7437df8da7b98386ca94dc96a320aa3f4f0c332c6333d07750bae",
}

_cache: dict = {}


def _data_path(name: str) -> str:
    override = os.environ.get(_DATA_ENV)
    if override:
        return os.path.join(override, name)
    return os.path.join(os.path.dirname(__file__), "data", name)


def _load_text(name: str) -> list:
    path = _data_path(name)
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise DataFileError(f"cannot read data file {path}: {exc}") from exc
    if not os.environ.get(_DATA_ENV):
        digest = hashlib.sha256(raw).hexdigest()
        want = _PINNED_SHA256[name]
        if want != digest:
            raise DataFileError(
                f"checksum mismatch for {name}: got {digest}, expected {want}"
            )
    lines = raw.decode("ascii").splitlines()
    return [ln for ln in lines if ln and not ln.startswith("#")]


def _sobol_table() -> np.ndarray:
    """(SOBOL_MAX_DIM, SOBOL_MAX_BITS) direction integers, uint64."""
    if "sobol" in _cache:
        return _cache["sobol"]
    rows = _load_text(_SOBOL_FILE)
    if rows and rows[0].lstrip().startswith("d"):
        rows = rows[1:]
    v = np.zeros((SOBOL_MAX_DIM, SOBOL_MAX_BITS), dtype=np.uint64)
    # dimension 1: van der Corput, m_k = 1 for all k
    for k in range(SOBOL_MAX_BITS):
        v[0, k] = np.uint64(1) << np.uint64(SOBOL_MAX_BITS - 1 - k)
    seen = 1
    for ln in rows:
        parts = ln.split()
        d, s, a = int(parts[0]), int(parts[1]), int(parts[2])
        ms = [int(x) for x in parts[3:3 + s]]
        if d > SOBOL_MAX_DIM:
            break
        if len(ms) != s:
            raise DataFileError(f"direction-number row for d={d} is truncated")
        vk = [0] * SOBOL_MAX_BITS
        for k in range(min(s, SOBOL_MAX_BITS)):
            vk[k] = ms[k] << (SOBOL_MAX_BITS - 1 - k)
        for k in range(s, SOBOL_MAX_BITS):
            val = vk[k - s] ^ (vk[k - s] >> s)
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    val ^= vk[k - i]
            vk[k] = val
        v[d - 1, :] = vk
        seen = max(seen, d)
    if seen < SOBOL_MAX_DIM:
        raise DataFileError(
            f"direction-number table covers only {seen} dimensions, "
            f"need {SOBOL_MAX_DIM}"
        )
    _cache["sobol"] = v
    return v


def _lattice_vector() -> np.ndarray:
    if "lattice" in _cache:
        return _cache["lattice"]
    rows = _load_text(_LATTICE_FILE)
    if rows and rows[0].lstrip().startswith("dim"):
        rows = rows[1:]
    z = np.zeros(LATTICE_MAX_DIM, dtype=np.int64)
    count = 0
    for ln in rows:
        d_str, z_str = ln.split()
        d, zj = int(d_str), int(z_str)
        if d > LATTICE_MAX_DIM:
            break
        if zj % 2 == 0:
            raise DataFileError(f"generating vector entry {d} is even")
        z[d - 1] = zj
        count = max(count, d)
    if count < LATTICE_MAX_DIM:
        raise DataFileError(
            f"generating vector covers only {count} dimensions, "
            f"need {LATTICE_MAX_DIM}"
        )
    _cache["lattice"] = z
    return z


class SobolGenerator:
    """Randomized Sobol' sequence in up to 1111 dimensions.

    With an ``rng`` the generator matrices are scrambled by random unit
    lower-triangular bit matrices (linear matrix scrambling, Matousek
    style) and the output is digitally shifted; both preserve the digital
    net structure.  The plain digital shift alone leaves sparse-spectrum
    integrands (products of coordinates, say) with a systematic O(2^-m)
    alignment error that the coefficient-based bound cannot observe, so
    the scramble is required for the error certificates to hold.  Without
    an ``rng`` the raw net is produced.
    """

    def __init__(self, dimension: int, rng: RngStream | None = None,
                 scramble: bool = True):
        if not (1 <= dimension <= SOBOL_MAX_DIM):
            raise ConfigurationError(
                f"Sobol' dimension must be in [1, {SOBOL_MAX_DIM}], got {dimension}"
            )
        self.dimension = dimension
        self._v = _sobol_table()[:dimension]  # (d, 53) uint64
        if rng is None:
            self.digital_shift = np.zeros(dimension, dtype=np.uint64)
        else:
            gen = rng.generator()
            if scramble:
                self._v = _matrix_scramble(self._v, gen)
            self.digital_shift = gen.integers(
                0, 1 << SOBOL_MAX_BITS, size=dimension, dtype=np.uint64
            )

    def points(self, start: int, stop: int) -> np.ndarray:
        """Points with natural digital indices [start, stop), shape (n, d)."""
        if not (0 <= start <= stop < (1 << SOBOL_MAX_BITS) + 1):
            raise ConfigurationError("index range out of bounds")
        idx = np.arange(start, stop, dtype=np.uint64)
        state = np.zeros((idx.size, self.dimension), dtype=np.uint64)
        bits = int(stop - 1).bit_length() if stop > 1 else 1
        for b in range(bits):
            mask = (idx >> np.uint64(b)) & np.uint64(1) == 1
            if np.any(mask):
                state[mask] ^= self._v[:, b]
        state ^= self.digital_shift
        return state.astype(np.float64) / float(1 << SOBOL_MAX_BITS)

    def block(self, m_lo: int, m_hi: int) -> np.ndarray:
        """Sequence points for positions [2^m_lo, 2^m_hi), Gray-code order."""
        if not (0 <= m_lo < m_hi <= SOBOL_MAX_BITS):
            raise ConfigurationError("need 0 <= m_lo < m_hi <= 53")
        j = np.arange(1 << m_lo, 1 << m_hi, dtype=np.uint64)
        gray = j ^ (j >> np.uint64(1))
        state = np.zeros((j.size, self.dimension), dtype=np.uint64)
        for b in range(m_hi):
            mask = (gray >> np.uint64(b)) & np.uint64(1) == 1
            if np.any(mask):
                state[mask] ^= self._v[:, b]
        state ^= self.digital_shift
        return state.astype(np.float64) / float(1 << SOBOL_MAX_BITS)


def _matrix_scramble(v: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    """Left-multiply each dimension's generator matrix by a random unit
    lower-triangular bit matrix (rows act on output digits; digit p of the
    result mixes digits <= p of the input, so leading-digit structure and
    the net property survive)."""
    d = v.shape[0]
    bits = SOBOL_MAX_BITS
    rows = np.arange(bits, dtype=np.uint64)
    diag = np.uint64(1) << (np.uint64(bits - 1) - rows)
    # random bits strictly above the diagonal position of each row
    high = (~np.uint64(0) >> np.uint64(64 - bits)) & ~(
        (np.uint64(1) << (np.uint64(bits) - rows)) - np.uint64(1))
    rand = gen.integers(0, 1 << bits, size=(d, bits), dtype=np.uint64)
    masks = (rand & high[None, :]) | diag[None, :]          # (d, bits)
    par = np.bitwise_count(masks[:, :, None] & v[:, None, :]) & np.uint64(1)
    shifts = np.uint64(bits - 1) - rows                      # row p -> bit 52-p
    return (par.astype(np.uint64) << shifts[None, :, None]).sum(axis=1)


def sobol_block(gen: SobolGenerator, m_lo: int, m_hi: int) -> np.ndarray:
    """Gray-code-ordered digitally shifted Sobol' points, positions
    [2^m_lo, 2^m_hi); appending consecutive blocks (after the prefix
    ``gen.points(0, 2^m_lo)``) extends the same sequence."""
    return gen.block(m_lo, m_hi)


class LatticeGenerator:
    """Shifted extensible rank-1 lattice in up to 250 dimensions."""

    def __init__(self, dimension: int, rng: RngStream | None = None,
                 shift: np.ndarray | None = None):
        if not (1 <= dimension <= LATTICE_MAX_DIM):
            raise ConfigurationError(
                f"lattice dimension must be in [1, {LATTICE_MAX_DIM}], got {dimension}"
            )
        self.dimension = dimension
        self.generating_vector = _lattice_vector()[:dimension].copy()
        if shift is not None:
            shift = np.asarray(shift, dtype=float)
            if shift.shape != (dimension,) or np.any(shift < 0) or np.any(shift >= 1):
                raise ConfigurationError("shift must be a d-vector in [0,1)")
            self.shift = shift
        elif rng is not None:
            self.shift = rng.generator().random(dimension)
        else:
            self.shift = np.zeros(dimension)

    def points_at_level(self, m: int, indices: np.ndarray) -> np.ndarray:
        """frac(k z / 2^m + shift) for natural indices k, shape (n, d)."""
        if not (0 <= m <= LATTICE_MAX_M):
            raise ConfigurationError(f"need 0 <= m <= {LATTICE_MAX_M}")
        k = np.asarray(indices, dtype=np.int64)
        prod = (k[:, None] * self.generating_vector[None, :]) & ((1 << m) - 1)
        pts = prod.astype(np.float64) / float(1 << m) + self.shift
        return np.mod(pts, 1.0)

    def block(self, m_lo: int, m_hi: int) -> np.ndarray:
        """Sequence points for positions [2^m_lo, 2^m_hi), van der Corput
        order: position i contributes frac(phi2(i) * z + shift)."""
        if not (0 <= m_lo < m_hi <= LATTICE_MAX_M):
            raise ConfigurationError(f"need 0 <= m_lo < m_hi <= {LATTICE_MAX_M}")
        i = np.arange(1 << m_lo, 1 << m_hi, dtype=np.int64)
        pts = _radical_inverse(i)[:, None] * self.generating_vector[None, :]
        return np.mod(pts + self.shift, 1.0)

    def prefix(self, m: int) -> np.ndarray:
        """First 2^m sequence points (van der Corput order, origin first)."""
        if not (0 <= m <= LATTICE_MAX_M):
            raise ConfigurationError(f"need 0 <= m <= {LATTICE_MAX_M}")
        i = np.arange(1 << m, dtype=np.int64)
        pts = _radical_inverse(i)[:, None] * self.generating_vector[None, :]
        return np.mod(pts + self.shift, 1.0)


def lattice_block(gen: LatticeGenerator, m_lo: int, m_hi: int) -> np.ndarray:
    """Rank-1 lattice points in radical-inverse order for positions
    [2^m_lo, 2^m_hi), so successive blocks refine the same lattice."""
    return gen.block(m_lo, m_hi)


def _radical_inverse(i: np.ndarray) -> np.ndarray:
    """Base-2 van der Corput radical inverse of nonnegative integers."""
    x = np.zeros(i.shape, dtype=np.float64)
    scale = 0.5
    work = i.copy()
    while np.any(work > 0):
        x += scale * (work & 1)
        work >>= 1
        scale *= 0.5
    return x


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def _check_pow2(n: int) -> None:
    if n < 1 or (n & (n - 1)) != 0:
        raise ConfigurationError(f"length must be a power of two, got {n}")


def fwht_inplace(values: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform, mutating ``values``.

    Applying it twice multiplies the input by its length.
    """
    a = np.asarray(values)
    if a.ndim != 1:
        raise ConfigurationError("fwht expects a 1-d array")
    n = a.shape[0]
    _check_pow2(n)
    h = 1
    while h < n:
        view = a.reshape(-1, 2 * h)
        left = view[:, :h].copy()
        right = view[:, h:]
        view[:, :h] = left + right
        view[:, h:] = left - right
        h *= 2
    return a


def fft(values: np.ndarray) -> np.ndarray:
    """Standard unnormalized DFT of a power-of-two-length sequence."""
    a = np.asarray(values)
    if a.ndim != 1:
        raise ConfigurationError("fft expects a 1-d array")
    _check_pow2(a.shape[0])
    return np.fft.fft(a)


class Periodizer(enum.Enum):
    """Per-coordinate variable transforms that preserve the integral."""

    ID = "id"
    BAKER = "baker"
    C0 = "c0"
    C1 = "c1"
    C1SIN = "c1sin"


def periodizer_map_weight(variant: Periodizer, u: np.ndarray):
    """Coordinate map phi(u) and weight phi'(u) for one transform.

    Baker's tent map is measure preserving (weight 1); the polynomial and
    Sidi maps carry their Jacobian as the weight so that the transformed
    integrand keeps the same integral over the unit cube.
    """
    if variant is Periodizer.ID:
        return u, np.ones_like(u)
    if variant is Periodizer.BAKER:
        return 1.0 - np.abs(2.0 * u - 1.0), np.ones_like(u)
    if variant is Periodizer.C0:
        return u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u)
    if variant is Periodizer.C1:
        return u**3 * (10.0 - 15.0 * u + 6.0 * u * u), \
            30.0 * (u * (1.0 - u)) ** 2
    if variant is Periodizer.C1SIN:
        two_pi = 2.0 * np.pi
        return u - np.sin(two_pi * u) / two_pi, 1.0 - np.cos(two_pi * u)
    raise ConfigurationError(f"unknown periodizer {variant!r}")


def periodize(f: Callable[[np.ndarray], np.ndarray],
              variant: Periodizer) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap an integrand on [0,1]^d so the wrapped version is periodic
    (to the smoothness the variant provides) with the same integral."""
    if variant is Periodizer.ID:
        return f

    def wrapped(u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        mapped, weight = periodizer_map_weight(variant, u)
        vals = np.asarray(f(mapped), dtype=float).reshape(-1)
        if u.ndim == 1:
            return vals * np.prod(weight)
        return vals * np.prod(weight, axis=1)

    return wrapped
