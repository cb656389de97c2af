"""Structured free-ride codes designed on the syndrome channel.

Multiplying hard decisions by ``Hᵀ`` nulls the payload codeword and leaves the
syndrome channel ``ŷHᵀ = wHᵀ + ẑHᵀ``. A syndrome code with generator ``Gs``
(k1 x m) is lifted to a free-ride code with ``G1 Hᵀ = Gs`` through an
invertible column subset of H. Two syndrome codes are provided:

* repetition: ``Gs = diag{1^m1, ..., 1^m1}``, decoded by majority logic;
* first-order Reed-Muller: disjoint RM(1, eta) blocks, decoded by the fast
  Hadamard transform (exact ML per block).

RM(1, eta) generator rows are ordered ``[all-ones, x_{eta-1}, ..., x_0]`` where
``x_i`` at position ``j`` is bit ``i`` of ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .channel import BiosChannel
from .gf2 import DenseBitMatrix, as_bits, invert, mat_vec_mul, rank, vec_mat_mul
from .ldpc import LdpcCode, check_phi_sums
from .random_code import candidate_messages, unsat_check_prob

EXHAUSTIVE_MAX_K1 = 24


@dataclass(frozen=True, eq=False)
class SyndromeCode:
    """Cartesian product of small codes on disjoint syndrome coordinates.

    ``blocks`` lists ``(start, length)`` column ranges; ``block_dims`` the
    number of message bits per block. For RM codes ``eta`` is the order
    parameter and ``pad`` the number of dropped trailing message bits of the
    last block (their monomial coefficients are fixed to zero).
    """

    Gs: DenseBitMatrix
    kind: str
    blocks: tuple[tuple[int, int], ...]
    block_dims: tuple[int, ...]
    eta: int | None = None
    pad: int = 0

    @property
    def k1(self) -> int:
        return self.Gs.rows

    @property
    def m(self) -> int:
        return self.Gs.cols

    @property
    def m1(self) -> int:
        return self.blocks[0][1]

    def encode(self, v) -> np.ndarray:
        return vec_mat_mul(as_bits(v), self.Gs)


def build_repetition(k1: int, m: int) -> SyndromeCode:
    """``k1`` all-ones blocks of length ``floor(m / k1)``; leftover columns unused."""
    if k1 < 1:
        raise ValueError("k1 must be >= 1")
    if k1 > m:
        raise ValueError(f"k1={k1} exceeds syndrome length m={m}")
    m1 = m // k1
    Gs = np.zeros((k1, m), dtype=np.uint8)
    for i in range(k1):
        Gs[i, i * m1 : (i + 1) * m1] = 1
    blocks = tuple((i * m1, m1) for i in range(k1))
    return SyndromeCode(DenseBitMatrix.from_array(Gs), "repetition", blocks, (1,) * k1)


def rm1_generator(eta: int) -> np.ndarray:
    """Generator of RM(1, eta): ``(eta + 1) x 2^eta`` in the documented row order."""
    j = np.arange(2**eta)
    rows = [np.ones(2**eta, dtype=np.uint8)]
    rows += [((j >> i) & 1).astype(np.uint8) for i in range(eta - 1, -1, -1)]
    return np.array(rows, dtype=np.uint8)


def _rm_layout(k1: int, m: int, eta: int, padded: bool):
    d = eta + 1
    if not padded and k1 % d:
        return None
    kp = -(-k1 // d) * d
    nblocks = kp // d
    if nblocks * 2**eta > 2 * m:
        return None
    Gs = np.zeros((kp, m), dtype=np.uint8)
    base = rm1_generator(eta)
    blocks = []
    for b in range(nblocks):
        start = b * 2**eta
        length = min(2**eta, m - start)
        if length < d:
            return None
        Gs[b * d : (b + 1) * d, start : start + length] = base[:, :length]
        blocks.append((start, length))
    pad = kp - k1
    Gs = Gs[:k1]
    if rank(DenseBitMatrix.from_array(Gs)) != k1:
        return None
    dims = (d,) * (nblocks - 1) + (d - pad,)
    return SyndromeCode(DenseBitMatrix.from_array(Gs), "rm1", tuple(blocks), dims, eta, pad)


def build_rm1(k1: int, m: int, eta: int | None = None) -> SyndromeCode:
    """Product of RM(1, eta) blocks placed left to right, the last one punctured if needed.

    Without an explicit ``eta`` the largest ``eta >= 1`` is chosen such that
    ``(eta + 1)`` divides ``k1``, the blocks need at most ``2m`` positions and
    the (possibly punctured) generator keeps full rank. If no such ``eta``
    exists, the message is padded with zero bits to a multiple of ``eta + 1``.
    """
    if k1 < 1 or k1 > m:
        raise ValueError(f"need 1 <= k1 <= m, got k1={k1}, m={m}")
    if eta is not None:
        for padded in (False, True):
            sc = _rm_layout(k1, m, eta, padded)
            if sc is not None:
                return sc
        raise ValueError(f"RM(1,{eta}) blocks cannot carry k1={k1} bits in m={m}")
    top = int(math.floor(math.log2(2 * m)))
    for padded in (False, True):
        for e in range(top, 0, -1):
            sc = _rm_layout(k1, m, e, padded)
            if sc is not None:
                return sc
    raise ValueError(f"no feasible RM(1, eta) layout for k1={k1}, m={m}")


@dataclass(frozen=True, eq=False)
class StructuredFreeRideCode:
    code: LdpcCode
    syndrome_code: SyndromeCode
    G1: DenseBitMatrix
    pivot_cols: np.ndarray

    @property
    def k1(self) -> int:
        return self.G1.rows

    @property
    def n(self) -> int:
        return self.G1.cols

    def encode(self, v) -> np.ndarray:
        """``w = vG1``; its syndrome is ``vGs``."""
        v = as_bits(v)
        if v.shape[-1] != self.k1:
            raise ValueError(f"extra message length {v.shape[-1]} != k1={self.k1}")
        return vec_mat_mul(v, self.G1)

    def decode(self, channel: BiosChannel, y, decoder: str = "hdd"):
        model = syndrome_channel(self.code, channel, y, decoder)
        sc = self.syndrome_code
        if sc.kind == "repetition":
            v = mlg_decode_repetition(sc, model)
        else:
            v = fht_ml_decode_rm(sc, model)
        return v, self.encode(v)


def lift(code: LdpcCode, sc: SyndromeCode) -> StructuredFreeRideCode:
    """``G1 = [Gs (H1^-1)ᵀ]`` on the leftmost invertible column set of H, zero elsewhere."""
    if sc.m != code.m:
        raise ValueError(f"syndrome code length {sc.m} != m={code.m}")
    pivots = np.setdiff1d(np.arange(code.n), code.info_positions)
    H1 = DenseBitMatrix.from_array(code.H.to_array()[:, pivots])
    H1inv = invert(H1).to_array().astype(np.float64)
    part = (sc.Gs.to_array().astype(np.float64) @ H1inv.T).astype(np.int64) & 1
    G1 = np.zeros((sc.k1, code.n), dtype=np.uint8)
    G1[:, pivots] = part
    if not np.array_equal(mat_vec_mul(code.H, G1), sc.Gs.to_array()):
        raise AssertionError("lifted generator does not reproduce Gs")
    return StructuredFreeRideCode(code, sc, DenseBitMatrix.from_array(G1), pivots)


@dataclass(frozen=True)
class SyndromeChannelModel:
    """Memoryless approximation of the syndrome channel for one observation.

    ``syndrome`` holds the hard syndrome bits ``ŷHᵀ``; ``llrs`` are positive
    when a check is more likely satisfied.
    """

    cross_probs: np.ndarray
    llrs: np.ndarray
    syndrome: np.ndarray
    mode: str


def syndrome_channel(code: LdpcCode, ch: BiosChannel, y, mode: str = "hdd") -> SyndromeChannelModel:
    y_hard = ch.hard_decision(y)
    syn = code.syndrome(y_hard)
    if mode == "hdd":
        p_b = ch.hard_crossover()
        rw = code.H.row_weights()
        p = np.array([unsat_check_prob(p_b, int(r)) for r in rw]) if code.rho is None else np.full(code.m, unsat_check_prob(p_b, code.rho))
        with np.errstate(divide="ignore"):
            mag = np.log1p(-p) - np.log(p)
        mag = np.minimum(mag, 40.0)
        p = np.broadcast_to(p, syn.shape)
        return SyndromeChannelModel(p.copy(), (1.0 - 2.0 * syn) * mag, syn, mode)
    if mode == "sdd":
        llr = ch.llr(y)
        neg, s = check_phi_sums(code, llr)
        cross = -0.5 * np.expm1(-s)
        with np.errstate(divide="ignore"):
            mag = np.log1p(2.0 / np.expm1(s))
        return SyndromeChannelModel(cross, np.where(neg == 1, -mag, mag), syn, mode)
    raise ValueError(f"unknown mode {mode!r}")


def mlg_decode_repetition(sc: SyndromeCode, model: SyndromeChannelModel) -> np.ndarray:
    """Majority logic per block: HDD votes on syndrome bits, SDD takes the sign of the LLR sum.

    Ties (and a zero sum) decode to 0.
    """
    if sc.kind != "repetition":
        raise ValueError("majority-logic decoding needs a repetition syndrome code")
    batch = model.syndrome.shape[:-1]
    out = np.zeros(batch + (sc.k1,), dtype=np.uint8)
    for i, (start, length) in enumerate(sc.blocks):
        if model.mode == "hdd":
            ones = model.syndrome[..., start : start + length].sum(axis=-1)
            out[..., i] = 2 * ones > length
        else:
            out[..., i] = model.llrs[..., start : start + length].sum(axis=-1) < 0
    return out


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis (natural order)."""
    a = np.array(a, dtype=np.float64)
    n = a.shape[-1]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    lead = a.shape[:-1]
    h = 1
    while h < n:
        v = a.reshape(lead + (n // (2 * h), 2, h))
        x, y = v[..., 0, :].copy(), v[..., 1, :].copy()
        v[..., 0, :] = x + y
        v[..., 1, :] = x - y
        h *= 2
    return a


def _first_max(scores: np.ndarray) -> np.ndarray:
    """Index of the first score within a relative 1e-9 of the row maximum."""
    top = scores.max(axis=-1, keepdims=True)
    finite = np.where(np.isfinite(scores), np.abs(scores), 0.0)
    tol = 1e-9 * (1.0 + finite.max(axis=-1, keepdims=True))
    return np.argmax(scores >= top - tol, axis=-1)


def fht_ml_decode_rm(sc: SyndromeCode, model: SyndromeChannelModel) -> np.ndarray:
    """Exact ML per RM(1, eta) block via the Hadamard transform of the syndrome LLRs.

    Correlation with codeword ``a0 * 1 + sum_i k_i x_i`` equals
    ``(-1)^a0 * W[k]``, so the scores of all messages in increasing integer
    order are ``[W, -W]``. Punctured positions enter as zero LLRs.
    """
    if sc.kind != "rm1":
        raise ValueError("Hadamard decoding needs an RM(1, eta) syndrome code")
    eta = sc.eta
    size = 2**eta
    llrs = model.llrs
    mags = np.abs(model.llrs)
    if model.mode == "hdd" and mags.size and np.all(mags == mags.flat[0]):
        # equal reliabilities: correlate with ±1 so ties are exact
        llrs = 1.0 - 2.0 * model.syndrome.astype(np.float64)
    batch = llrs.shape[:-1]
    out = []
    for (start, length), dim in zip(sc.blocks, sc.block_dims):
        block = np.zeros(batch + (size,))
        block[..., :length] = llrs[..., start : start + length]
        W = fwht(block)
        scores = np.concatenate([W, -W], axis=-1)
        drop = eta + 1 - dim
        if drop:
            # dropped trailing monomials must have zero coefficients
            allowed = (np.arange(2 * size) & (2**drop - 1)) == 0
            scores = np.where(allowed, scores, -np.inf)
        best = _first_max(scores)
        bits = (best[..., None] >> np.arange(eta, -1, -1)) & 1
        out.append(bits[..., :dim].astype(np.uint8))
    return np.concatenate(out, axis=-1)


def hdd_min_distance_decode(sc: SyndromeCode, syndrome) -> np.ndarray:
    """Exhaustive ``argmin_v W(syndrome + vGs)``, ties to the smallest ``v``."""
    k1 = sc.k1
    if k1 > EXHAUSTIVE_MAX_K1:
        raise ValueError(f"exhaustive search limited to k1 <= {EXHAUSTIVE_MAX_K1}")
    syndrome = as_bits(syndrome)
    signs = 1.0 - 2.0 * syndrome.astype(np.float64)
    Gs = sc.Gs.to_array().astype(np.float64)
    best_d, best_i = None, 0
    for start in range(0, 2**k1, 4096):
        stop = min(2**k1, start + 4096)
        V = candidate_messages(k1, start, stop).astype(np.float64)
        cw = ((V @ Gs).astype(np.int64) & 1).astype(np.float64)
        dist = (sc.m - (1.0 - 2.0 * cw) @ signs) / 2
        i = int(np.argmin(dist))
        if best_d is None or dist[i] < best_d:
            best_d, best_i = dist[i], start + i
    return candidate_messages(k1, best_i, best_i + 1)[0]


def wer_estimate_repetition(m1: int, p: float, k1: int) -> float:
    """Word error estimate for repetition blocks on an ideal BSC(p) syndrome channel.

    Per block ``beta = sum_{i >= ceil(m1/2)} C(m1, i) p^i (1-p)^(m1-i)``; the
    word estimate is ``1 - (1 - beta)^k1``.
    """
    if not 0.0 <= p <= 0.5:
        raise ValueError("p must lie in [0, 1/2]")
    beta = float(binom.sf(math.ceil(m1 / 2) - 1, m1, p))
    return -math.expm1(k1 * math.log1p(-beta)) if beta < 1 else 1.0
