"""Accessible capacity of short payload codes.

``C_a = C_BIOS - I(C; Y~)/n`` where the mutual information is that of the
payload link without superposition. Both terms are estimated from the same
channel draws (common random numbers), so the standard error reported for
``C_a`` is that of the per-sample difference.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .channel import LLR_MAX, BiosChannel, bios_capacity, capacity_terms

MAX_K = 16
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ShortCode:
    codewords: np.ndarray
    name: str = ""

    def __post_init__(self):
        cw = np.asarray(self.codewords, dtype=np.uint8)
        size = cw.shape[0]
        if size & (size - 1) or not np.any(np.all(cw == 0, axis=1)):
            raise ValueError("a linear code has 2^k codewords including zero")
        seen = {r.tobytes() for r in cw}
        if len(seen) != size:
            raise ValueError("duplicate codewords")
        # closure only checked where it is cheap
        if size <= 256 and any((a ^ b).tobytes() not in seen for a in cw for b in cw):
            raise ValueError("codeword list is not closed under addition")
        object.__setattr__(self, "codewords", cw)

    @property
    def n(self) -> int:
        return self.codewords.shape[1]

    @property
    def k(self) -> int:
        return int(math.log2(self.codewords.shape[0]))

    @property
    def rate(self) -> float:
        return self.k / self.n

    @classmethod
    def from_generator(cls, G, name: str = "") -> "ShortCode":
        G = np.asarray(G, dtype=np.int64) & 1
        k = G.shape[0]
        if k > MAX_K:
            raise ValueError(f"enumeration limited to k <= {MAX_K}")
        msgs = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.int64).reshape(-1, k)
        return cls(((msgs @ G) & 1).astype(np.uint8), name)


def repetition_code(n: int = 2) -> ShortCode:
    return ShortCode.from_generator(np.ones((1, n), dtype=np.uint8), f"repetition[{n},1]")


def extended_hamming_code() -> ShortCode:
    G = [
        [1, 0, 0, 0, 0, 1, 1, 1],
        [0, 1, 0, 0, 1, 0, 1, 1],
        [0, 0, 1, 0, 1, 1, 0, 1],
        [0, 0, 0, 1, 1, 1, 1, 0],
    ]
    return ShortCode.from_generator(G, "extended-hamming[8,4]")


@dataclass(frozen=True)
class CapacityEstimate:
    value: float
    std_err: float
    samples: int


def sample_terms(sc: ShortCode, ch: BiosChannel, samples: int, rng: np.random.Generator):
    """Per-sample (capacity term, normalised mutual-information term), both in bits per use."""
    if sc.k > MAX_K:
        raise ValueError(f"enumeration limited to k <= {MAX_K}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    cws = sc.codewords.astype(np.float64)
    ln2 = math.log(2.0)
    cap, mi = [], []
    for start in range(0, samples, _CHUNK):
        b = min(_CHUNK, samples - start)
        idx = rng.integers(0, cws.shape[0], size=b)
        c = sc.codewords[idx]
        llr = np.clip(ch.llr(ch.transmit(c, rng)), -LLR_MAX, LLR_MAX)
        # log P(y|c') - log P(y|0) = -<c', llr>
        scores = -llr @ cws.T
        true = scores[np.arange(b), idx]
        mi.append((true - logsumexp(scores, axis=1) + sc.k * ln2) / ln2 / sc.n)
        cap.append(capacity_terms(np.where(c == 1, -llr, llr)).mean(axis=1))
    return np.concatenate(cap), np.concatenate(mi)


def _estimate(x: np.ndarray) -> CapacityEstimate:
    se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
    return CapacityEstimate(float(x.mean()), se, int(x.size))


def code_mutual_information(sc: ShortCode, ch: BiosChannel, samples: int, rng: np.random.Generator) -> CapacityEstimate:
    """Monte Carlo ``I(C; Y)/n`` in bits with uniformly drawn codewords."""
    return _estimate(sample_terms(sc, ch, samples, rng)[1])


def accessible_capacity(sc: ShortCode, ch: BiosChannel, samples: int, rng: np.random.Generator) -> CapacityEstimate:
    cap, mi = sample_terms(sc, ch, samples, rng)
    return _estimate(cap - mi)


@dataclass(frozen=True)
class CapacityPoint:
    c_bios: CapacityEstimate
    mutual_info: CapacityEstimate
    accessible: CapacityEstimate
    lower_bound: CapacityEstimate


def capacity_point(sc: ShortCode, ch: BiosChannel, samples: int, rng: np.random.Generator) -> CapacityPoint:
    """All curve quantities from one set of channel draws."""
    return point_from_terms(*sample_terms(sc, ch, samples, rng), sc.rate)


def point_from_terms(cap: np.ndarray, mi: np.ndarray, rate: float) -> CapacityPoint:
    c_bios = _estimate(cap)
    bound = CapacityEstimate(c_bios.value - rate, c_bios.std_err, c_bios.samples)
    return CapacityPoint(c_bios, _estimate(mi), _estimate(cap - mi), bound)


def lower_bound(ch: BiosChannel, R0: float, samples: int, rng: np.random.Generator) -> CapacityEstimate:
    """``C_BIOS - R0``; may be negative."""
    if not 0.0 <= R0 <= 1.0:
        raise ValueError("R0 must lie in [0, 1]")
    c, se = bios_capacity(ch, samples, rng)
    return CapacityEstimate(c - R0, se, samples)
