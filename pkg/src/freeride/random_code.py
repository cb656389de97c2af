"""Random free-ride codes with exhaustive-search syndrome decoding.

Extra bits ``v`` are encoded by a Bernoulli(1/2) generator matrix ``G1`` and
superimposed on the LDPC codeword. The receiver scores every candidate
``s = vG1``: hard decisions count unsatisfied checks ``N(s) = W((ŷ+s)Hᵀ)``,
soft decisions sum the tanh-rule check LLRs ``Λ(s)``.

Candidates are enumerated in increasing integer order of ``v`` read MSB-first
(``v[0]`` is the most significant bit), so ``argmin``/``argmax`` taking the first
hit breaks ties towards the smallest ``v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate
from scipy.special import log_ndtr

from .channel import BiosChannel
from .gf2 import DenseBitMatrix, as_bits, mat_vec_mul, rank, vec_mat_mul, weight
from .ldpc import LdpcCode, check_llrs

# Candidate syndrome tables are kept in memory up to this many extra bits.
TABLE_MAX_K1 = 12
_CHUNK = 1024


class GenerationError(RuntimeError):
    pass


def candidate_messages(k1: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Messages with integer index in ``[start, stop)``, one per row, MSB first."""
    stop = 2**k1 if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(k1 - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def message_index(v) -> int:
    out = 0
    for b in np.asarray(v).ravel():
        out = (out << 1) | int(b)
    return out


@dataclass(frozen=True, eq=False)
class RandomFreeRideCode:
    code: LdpcCode
    G1: DenseBitMatrix
    # k1 x m: syndromes of the rows of G1
    syndrome_basis: np.ndarray
    table: np.ndarray | None = None

    @property
    def k1(self) -> int:
        return self.G1.rows

    @property
    def n(self) -> int:
        return self.G1.cols

    def encode(self, v) -> np.ndarray:
        v = as_bits(v)
        if v.shape[-1] != self.k1:
            raise ValueError(f"extra message length {v.shape[-1]} != k1={self.k1}")
        return vec_mat_mul(v, self.G1)

    def candidate_syndromes(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """``sHᵀ`` for candidates ``start..stop`` (from the table when present)."""
        stop = 2**self.k1 if stop is None else stop
        if self.table is not None:
            return self.table[start:stop]
        V = candidate_messages(self.k1, start, stop).astype(np.float64)
        return ((V @ self.syndrome_basis.astype(np.float64)).astype(np.int64) & 1).astype(np.uint8)

    @cached_property
    def _sign_table(self) -> np.ndarray:
        return 1.0 - 2.0 * self.table.astype(np.float64)

    def _sign_chunks(self):
        total = 2**self.k1
        if self.table is not None:
            yield 0, self._sign_table
            return
        for start in range(0, total, _CHUNK):
            stop = min(total, start + _CHUNK)
            yield start, 1.0 - 2.0 * self.candidate_syndromes(start, stop).astype(np.float64)

    def _correlate(self, vec: np.ndarray) -> np.ndarray:
        """``sum_i (-1)^{(sHᵀ)_i} vec_i`` for every candidate (columns) and row of ``vec``."""
        vec = np.atleast_2d(vec)
        out = np.empty((vec.shape[0], 2**self.k1))
        for start, signs in self._sign_chunks():
            out[:, start : start + signs.shape[0]] = vec @ signs.T
        return out

    def decode(self, channel: BiosChannel, y, decoder: str = "hdd"):
        if decoder == "hdd":
            return hdd_decode(self, channel, y)
        if decoder == "sdd":
            return sdd_decode(self, channel, y)
        raise ValueError(f"unknown decoder {decoder!r}")


def generate(
    k1: int, code: LdpcCode, rng: np.random.Generator, *, table_max_k1: int = TABLE_MAX_K1, max_tries: int = 100
) -> RandomFreeRideCode:
    """Draw ``G1`` with i.i.d. fair bits until its rows lie in distinct cosets of the payload code."""
    if k1 < 0 or k1 > code.m:
        raise ValueError(f"k1 must lie in [0, m={code.m}]")
    for _ in range(max_tries):
        G1 = rng.integers(0, 2, size=(k1, code.n), dtype=np.uint8)
        frc = from_generator(code, G1, table_max_k1=table_max_k1)
        if frc is not None:
            return frc
    raise GenerationError(f"rank(G1 Hᵀ) < {k1} after {max_tries} draws")


def from_generator(code: LdpcCode, G1, *, table_max_k1: int = TABLE_MAX_K1) -> RandomFreeRideCode | None:
    """Wrap a given ``G1``; returns None when ``G1 Hᵀ`` is rank deficient."""
    G1 = as_bits(np.asarray(G1).reshape(-1, code.n))
    k1 = G1.shape[0]
    basis = mat_vec_mul(code.H, G1) if k1 else np.zeros((0, code.m), np.uint8)
    if k1 and rank(DenseBitMatrix.from_array(basis)) < k1:
        return None
    dense = DenseBitMatrix.from_array(G1) if k1 else DenseBitMatrix.zeros(0, code.n)
    frc = RandomFreeRideCode(code, dense, basis)
    if k1 <= table_max_k1:
        frc = RandomFreeRideCode(code, dense, basis, frc.candidate_syndromes())
    return frc


def unsat_count(code: LdpcCode, y_hard, s, s_syndrome=None) -> int:
    """``N(s) = W((ŷ + s)Hᵀ)``; with a stored ``sHᵀ`` it is ``W(ŷHᵀ + sHᵀ)``."""
    y_hard, s = as_bits(y_hard), as_bits(s)
    if y_hard.shape[-1] != code.n or s.shape[-1] != code.n:
        raise ValueError("y_hard and s must have length n")
    if s_syndrome is None:
        return weight(code.syndrome(y_hard ^ s))
    return weight(code.syndrome(y_hard) ^ as_bits(s_syndrome))


def unsat_counts(frc: RandomFreeRideCode, y_hard) -> np.ndarray:
    """``N(s)`` for every candidate; batch rows give a ``(B, 2^k1)`` array."""
    a = frc.code.syndrome(as_bits(y_hard))
    corr = frc._correlate(1.0 - 2.0 * a.astype(np.float64))
    counts = np.rint((frc.code.m - corr) / 2).astype(np.int64)
    return counts if np.ndim(y_hard) > 1 else counts[0]


def soft_scores(frc: RandomFreeRideCode, llr) -> np.ndarray:
    """``Λ(s)`` for every candidate.

    Flipping LLR signs on the support of ``s`` flips the sign of exactly those
    check LLRs whose check contains an odd number of flipped positions, so
    ``Λ(s) = sum_i (-1)^{(sHᵀ)_i} Λ_i(x)``.
    """
    L = check_llrs(frc.code, llr)
    out = frc._correlate(L)
    return out if np.ndim(llr) > 1 else out[0]


def _finish(frc: RandomFreeRideCode, best: np.ndarray, batched: bool):
    v = candidate_messages(frc.k1)[best] if frc.k1 else np.zeros((best.size, 0), np.uint8)
    w = frc.encode(v) if frc.k1 else np.zeros((best.size, frc.n), np.uint8)
    return (v, w) if batched else (v[0], w[0])


def hdd_decode(frc: RandomFreeRideCode, channel: BiosChannel, y):
    """Hard-decision exhaustive search: the candidate with fewest unsatisfied checks."""
    y_hard = channel.hard_decision(y)
    batched = np.ndim(y_hard) > 1
    counts = np.atleast_2d(unsat_counts(frc, y_hard))
    return _finish(frc, np.argmin(counts, axis=1), batched)


def sdd_decode(frc: RandomFreeRideCode, channel: BiosChannel, y):
    """Soft-decision exhaustive search: the candidate with the largest ``Λ(s)``."""
    llr = channel.llr(y)
    batched = np.ndim(llr) > 1
    scores = np.atleast_2d(soft_scores(frc, llr))
    return _finish(frc, np.argmax(scores, axis=1), batched)


@dataclass(frozen=True)
class SyndromeStatModel:
    m: int
    rho: int
    p_b: float
    p: float
    mu0: float
    sigma0_sq: float
    mu1: float
    sigma1_sq: float


def unsat_check_prob(p_b: float, rho: int) -> float:
    """Probability that a weight-``rho`` check is violated on a BSC(``p_b``)."""
    return 0.5 * (1.0 - (1.0 - 2.0 * p_b) ** rho)


def stat_model(code: LdpcCode, channel: BiosChannel) -> SyndromeStatModel:
    if code.rho is None:
        raise ValueError("syndrome statistics need a check-regular code")
    p_b = channel.hard_crossover()
    rho, m = code.rho, code.m
    p = unsat_check_prob(p_b, rho)
    return SyndromeStatModel(
        m=m,
        rho=rho,
        p_b=p_b,
        p=p,
        mu0=m * p,
        sigma0_sq=m / 4 * (1.0 - (1.0 - 2.0 * p_b) ** (2 * rho)),
        mu1=m / 2,
        sigma1_sq=m / 4,
    )


def wer_estimate(model: SyndromeStatModel, k1: int) -> float:
    """Gaussian-approximation word error rate of hard-decision decoding.

    ``1 - E_t[Q((2t - m)/sqrt(m))^(2^k1 - 1)]`` with ``t ~ N(mu0, sigma0^2)``;
    the integrand is evaluated as ``-expm1(K log Q)`` to avoid cancellation.
    """
    if k1 < 1:
        raise ValueError("k1 must be >= 1")
    m = model.m
    K = 2.0**k1 - 1.0
    sq = math.sqrt(m)

    def miss(t):
        return -math.expm1(K * float(log_ndtr((m - 2.0 * t) / sq)))

    s0 = math.sqrt(model.sigma0_sq)
    if s0 == 0.0:
        return miss(model.mu0)

    def integrand(t):
        z = (t - model.mu0) / s0
        return math.exp(-0.5 * z * z) / (math.sqrt(2 * math.pi) * s0) * miss(t)

    lo, hi = model.mu0 - 10 * s0, model.mu0 + 10 * s0
    val, _ = integrate.quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-10, limit=400, points=[model.mu0])
    return min(1.0, max(0.0, val))


def syndrome_histogram(frc: RandomFreeRideCode, channel: BiosChannel, trials: int, rng: np.random.Generator):
    """Histograms (length m+1) of ``N(w)`` and of ``N(s)`` for one random wrong ``s`` per trial."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if frc.k1 < 1:
        raise ValueError("a wrong candidate needs k1 >= 1")
    m = frc.code.m
    hist_correct = np.zeros(m + 1, dtype=np.int64)
    hist_wrong = np.zeros(m + 1, dtype=np.int64)
    for _ in range(trials):
        n_w, n_s = histogram_trial(frc, channel, rng)
        hist_correct[n_w] += 1
        hist_wrong[n_s] += 1
    return hist_correct, hist_wrong


def histogram_trial(frc: RandomFreeRideCode, channel: BiosChannel, rng: np.random.Generator) -> tuple[int, int]:
    code = frc.code
    u = rng.integers(0, 2, code.k, dtype=np.uint8)
    v_idx = int(rng.integers(2**frc.k1))
    wrong = int(rng.integers(2**frc.k1 - 1))
    wrong += wrong >= v_idx
    v = candidate_messages(frc.k1, v_idx, v_idx + 1)[0]
    x = code.encode(u) ^ frc.encode(v)
    a = code.syndrome(channel.hard_decision(channel.transmit(x, rng)))
    table = frc.candidate_syndromes(v_idx, v_idx + 1)[0], frc.candidate_syndromes(wrong, wrong + 1)[0]
    return weight(a ^ table[0]), weight(a ^ table[1])
