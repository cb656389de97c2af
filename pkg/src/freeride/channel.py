"""Binary-input output-symmetric (BIOS) memoryless channels.

Two variants are provided: BPSK over AWGN (``y = (-1)^x + z``) and the BSC.
Both expose the symmetry map ``pi`` with ``P(y|1) = P(pi(y)|0)``, LLRs
``log P(y|0)/P(y|1)``, the flipping operation and a capacity estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

# LLR magnitude used in place of infinity (noiseless AWGN, BSC with p in {0, 1}).
LLR_MAX = 40.0


def qfunc(x):
    """Gaussian tail probability Q(x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def sigma_from_snr_db(snr_db: float) -> float:
    """Noise std-dev for unit-energy BPSK with SNR = 10 log10(1/sigma^2)."""
    return 10.0 ** (-snr_db / 20.0)


def snr_db_from_sigma(sigma: float) -> float:
    return -20.0 * math.log10(sigma)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def _phi(x):
    # -log tanh(x/2), accurate for large x
    with np.errstate(divide="ignore", over="ignore"):
        return np.log1p(2.0 / np.expm1(x))


def tanh_rule(llrs, axis: int = -1) -> np.ndarray:
    """Parity LLR ``2 atanh(prod tanh(L_j / 2))`` along ``axis``.

    Evaluated in the log domain (sum of ``-log tanh(|L|/2)``) so that
    saturated inputs keep full precision. Inputs are clamped to ``±LLR_MAX``.
    """
    a = np.clip(np.asarray(llrs, dtype=float), -LLR_MAX, LLR_MAX)
    neg = np.sum(a < 0, axis=axis) & 1
    mag = _phi(np.sum(_phi(np.abs(a)), axis=axis))
    return np.where(neg == 1, -mag, mag)


class BiosChannel:
    """Common surface of the channel variants."""

    def transmit(self, x, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def pi(self, y):
        raise NotImplementedError

    def density(self, y, x: int):
        raise NotImplementedError

    def llr(self, y) -> np.ndarray:
        raise NotImplementedError

    def hard_decision(self, y) -> np.ndarray:
        raise NotImplementedError

    def hard_crossover(self) -> float:
        raise NotImplementedError

    def flip(self, y, w) -> np.ndarray:
        """``y ⊞ w``: apply ``pi`` wherever ``w`` is 1."""
        y = np.asarray(y)
        w = np.asarray(w)
        if y.shape[-1] != w.shape[-1]:
            raise ValueError(f"length mismatch: {y.shape[-1]} vs {w.shape[-1]}")
        return np.where(w.astype(bool), self.pi(y), y)

    def posterior_flip_prob(self, y) -> np.ndarray:
        """``min{P(y|0), P(y|1)} / (P(y|0) + P(y|1))`` = ``1 / (1 + e^|L|)``."""
        a = np.abs(self.llr(y))
        return np.exp(-np.logaddexp(0.0, a))

    def capacity(self, samples: int = 100_000, rng: np.random.Generator | None = None) -> tuple[float, float]:
        return bios_capacity(self, samples, rng)


@dataclass(frozen=True)
class BpskAwgn(BiosChannel):
    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")

    @classmethod
    def from_snr_db(cls, snr_db: float) -> "BpskAwgn":
        return cls(sigma_from_snr_db(snr_db))

    @property
    def snr_db(self) -> float:
        return snr_db_from_sigma(self.sigma)

    def transmit(self, x, rng):
        s = 1.0 - 2.0 * np.asarray(x, dtype=float)
        if self.sigma == 0:
            return s
        return s + self.sigma * rng.standard_normal(s.shape)

    def pi(self, y):
        return -np.asarray(y)

    def density(self, y, x):
        y = np.asarray(y, dtype=float)
        mean = 1.0 - 2.0 * x
        return np.exp(-0.5 * ((y - mean) / self.sigma) ** 2) / (math.sqrt(2 * math.pi) * self.sigma)

    def llr(self, y):
        y = np.asarray(y, dtype=float)
        if self.sigma == 0:
            return LLR_MAX * np.sign(y)
        return 2.0 * y / self.sigma**2

    def hard_decision(self, y):
        return (np.asarray(y) < 0).astype(np.uint8)

    def hard_crossover(self):
        if self.sigma == 0:
            return 0.0
        return float(qfunc(1.0 / self.sigma))


@dataclass(frozen=True)
class Bsc(BiosChannel):
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    def transmit(self, x, rng):
        x = np.asarray(x, dtype=np.uint8)
        if self.p == 0:
            return x.copy()
        return x ^ (rng.random(x.shape) < self.p).astype(np.uint8)

    def pi(self, y):
        return 1 - np.asarray(y)

    def density(self, y, x):
        y = np.asarray(y)
        return np.where(y == x, 1.0 - self.p, self.p)

    def _llr_magnitude(self) -> float:
        if self.p in (0.0, 1.0):
            return LLR_MAX if self.p == 0 else -LLR_MAX
        return math.log((1 - self.p) / self.p)

    def llr(self, y):
        return self._llr_magnitude() * (1.0 - 2.0 * np.asarray(y, dtype=float))

    def hard_decision(self, y):
        return np.asarray(y, dtype=np.uint8)

    def hard_crossover(self):
        return self.p


def bios_capacity(ch: BiosChannel, samples: int = 100_000, rng: np.random.Generator | None = None) -> tuple[float, float]:
    """Capacity in bits/use and its standard error.

    BSC uses ``1 - H2(p)`` (std error 0). Otherwise a Monte Carlo average of
    ``log2 P(Y|0)/P(Y)`` with ``Y ~ P(.|0)`` and equiprobable inputs.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if isinstance(ch, Bsc):
        return 1.0 - binary_entropy(ch.p), 0.0
    rng = np.random.default_rng() if rng is None else rng
    y = ch.transmit(np.zeros(samples, dtype=np.uint8), rng)
    terms = capacity_terms(ch.llr(y))
    se = float(terms.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return float(terms.mean()), se


def capacity_terms(llr_given_zero: np.ndarray) -> np.ndarray:
    """Per-sample ``log2 P(y|0)/P(y)`` from the LLR of an output drawn given x=0."""
    return 1.0 - np.logaddexp(0.0, -np.asarray(llr_given_zero)) / math.log(2.0)
