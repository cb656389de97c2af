"""Regular LDPC payload codes: construction, alist I/O, encoding and sum-product decoding."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .channel import LLR_MAX, _phi
from .gf2 import DenseBitMatrix, SparseBitMatrix, as_bits, mat_vec_mul, row_reduce, vec_mat_mul


class LdpcConstructionError(RuntimeError):
    pass


class RankDeficientError(ValueError):
    pass


@dataclass(frozen=True)
class DecodeResult:
    codeword_estimate: np.ndarray
    converged: bool
    iterations_used: int
    posterior: np.ndarray


@dataclass(frozen=True, eq=False)
class LdpcCode:
    H: SparseBitMatrix
    G: DenseBitMatrix
    info_positions: np.ndarray
    gamma: int | None = None
    rho: int | None = None

    @classmethod
    def from_parity_check(cls, H: SparseBitMatrix) -> "LdpcCode":
        G, info = derive_generator(H)
        cw, rw = H.col_weights(), H.row_weights()
        gamma = int(cw[0]) if cw.size and np.all(cw == cw[0]) else None
        rho = int(rw[0]) if rw.size and np.all(rw == rw[0]) else None
        return cls(H, G, info, gamma, rho)

    @property
    def n(self) -> int:
        return self.H.cols

    @property
    def m(self) -> int:
        return self.H.rows

    @property
    def k(self) -> int:
        return self.G.rows

    @property
    def rate(self) -> float:
        return self.k / self.n

    def encode(self, u) -> np.ndarray:
        u = as_bits(u)
        if u.shape[-1] != self.k:
            raise ValueError(f"message length {u.shape[-1]} != k={self.k}")
        return vec_mat_mul(u, self.G)

    def syndrome(self, v) -> np.ndarray:
        v = as_bits(v)
        if v.shape[-1] != self.n:
            raise ValueError(f"word length {v.shape[-1]} != n={self.n}")
        return mat_vec_mul(self.H, v)

    def extract_message(self, c) -> np.ndarray:
        """Payload bits of a codeword (G is systematic on ``info_positions``)."""
        return np.asarray(c)[..., self.info_positions]

    def decode(self, llr, max_iters: int = 50) -> DecodeResult:
        return sum_product_decode(self, llr, max_iters)

    @cached_property
    def _graph(self) -> "_TannerGraph":
        return _TannerGraph(self.H)


def construct_regular(
    n: int, gamma: int, rho: int, seed: int = 0, *, girth6: bool = True, max_tries: int = 100
) -> LdpcCode:
    """Seeded greedy (PEG-like) construction of a full-rank (gamma, rho)-regular code.

    Variables are connected one at a time to the least-filled checks; with
    ``girth6`` any check that would close a length-4 cycle is excluded. A draw
    that gets stuck or whose H is rank deficient is retried with a fresh stream.
    """
    if n <= 0 or gamma <= 0 or rho <= 0 or (n * gamma) % rho:
        raise ValueError(f"n*gamma must be divisible by rho (n={n}, gamma={gamma}, rho={rho})")
    m = n * gamma // rho
    if gamma > m or rho > n:
        raise ValueError("degrees exceed matrix dimensions")
    for attempt in range(max_tries):
        rng = np.random.default_rng([seed, attempt])
        rows = _greedy_edges(n, m, gamma, rho, rng, girth6)
        if rows is None:
            continue
        H = SparseBitMatrix.from_rows(rows, n)
        try:
            return LdpcCode.from_parity_check(H)
        except RankDeficientError:
            continue
    raise LdpcConstructionError(f"no full-rank ({gamma},{rho}) code of length {n} after {max_tries} tries")


def _greedy_edges(n, m, gamma, rho, rng, girth6):
    deg = np.zeros(m, dtype=np.int64)
    check_vars: list[list[int]] = [[] for _ in range(m)]
    var_checks: list[list[int]] = [[] for _ in range(n)]
    big = rho + 1
    for j in rng.permutation(n):
        blocked = np.zeros(m, dtype=bool)
        chosen = []
        for _ in range(gamma):
            load = np.where(blocked | (deg >= rho), big, deg)
            lo = load.min()
            if lo == big:
                return None
            cands = np.flatnonzero(load == lo)
            c = int(cands[rng.integers(cands.size)])
            chosen.append(c)
            deg[c] += 1
            blocked[c] = True
            if girth6:
                for j2 in check_vars[c]:
                    blocked[var_checks[j2]] = True
        for c in chosen:
            check_vars[c].append(int(j))
        var_checks[j] = chosen
    return check_vars


def derive_generator(H: SparseBitMatrix | DenseBitMatrix) -> tuple[DenseBitMatrix, np.ndarray]:
    """Systematic generator ``G`` with ``G Hᵀ = 0`` and its information positions.

    The information positions are the non-pivot columns of the reduced H.
    """
    Hd = H.to_dense() if isinstance(H, SparseBitMatrix) else H
    R, r, pivots = row_reduce(Hd)
    if r != Hd.rows:
        raise RankDeficientError(f"H has rank {r} < {Hd.rows} rows")
    n = Hd.cols
    free = np.setdiff1d(np.arange(n), pivots)
    k = free.size
    Ra = R.to_array()
    G = np.zeros((k, n), dtype=np.uint8)
    G[np.arange(k), free] = 1
    if r:
        G[:, pivots] = Ra[:r, free].T
    return DenseBitMatrix.from_array(G) if k else DenseBitMatrix.zeros(0, n), free


class _TannerGraph:
    """Edge index tables for vectorised flooding. Edge ``E`` is a padding dummy."""

    def __init__(self, H: SparseBitMatrix):
        self.n, self.m = H.cols, H.rows
        E = H.nnz
        self.E = E
        self.edge_var = H.indices
        # check-major table of edge ids (CSR order means edge id = position)
        self.check_edges = _edge_table(H.indptr, H.row_weights(), E)
        order = np.argsort(H.indices, kind="stable")
        cw = H.col_weights()
        vptr = np.zeros(self.n + 1, dtype=np.int64)
        vptr[1:] = np.cumsum(cw)
        self.var_edges = _edge_table(vptr, cw, E, order)
        # variable ids per check, padded with a dummy variable n
        self.check_vars = H.padded_rows(fill=self.n)


def _edge_table(ptr, widths, fill, order=None):
    rows = widths.size
    width = int(widths.max()) if rows else 0
    out = np.full((rows, width), fill, dtype=np.int64)
    ids = np.arange(ptr[-1]) if order is None else order
    rid = np.repeat(np.arange(rows), widths)
    pos = np.arange(ptr[-1]) - np.repeat(ptr[:-1], widths)
    out[rid, pos] = ids
    return out


def _parity_ok(g: _TannerGraph, hard: np.ndarray) -> bool:
    ext = np.append(hard, 0)
    return not np.any(ext[g.check_vars].sum(axis=1) & 1)


def _leave_one_out_product(t: np.ndarray) -> np.ndarray:
    ones = np.ones((t.shape[0], 1))
    pre = np.cumprod(np.hstack([ones, t[:, :-1]]), axis=1)
    suf = np.cumprod(np.hstack([ones, t[:, :0:-1]]), axis=1)[:, ::-1]
    return pre * suf


def sum_product_decode(code: LdpcCode, llr, max_iters: int = 50) -> DecodeResult:
    """Flooding sum-product decoding with the tanh check rule.

    Stops as soon as the hard decision satisfies every check (tested before the
    first iteration too). A posterior of exactly zero counts as undecided, so
    an all-zero LLR input never reports convergence.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    llr = np.clip(np.asarray(llr, dtype=float), -LLR_MAX, LLR_MAX)
    if llr.shape != (code.n,):
        raise ValueError(f"llr length {llr.shape} != n={code.n}")
    g = code._graph
    lim = np.nextafter(1.0, 0.0)

    total = llr
    hard = (total < 0).astype(np.uint8)
    if _parity_ok(g, hard) and np.all(total != 0):
        return DecodeResult(hard, True, 0, total)

    v2c = np.empty(g.E + 1)
    c2v = np.zeros(g.E + 1)
    v2c[: g.E] = llr[g.edge_var]
    for it in range(1, max_iters + 1):
        v2c[g.E] = LLR_MAX * 2  # dummy edge: tanh -> 1
        t = np.tanh(0.5 * v2c[g.check_edges])
        ex = np.clip(_leave_one_out_product(t), -lim, lim)
        c2v[g.check_edges] = 2.0 * np.arctanh(ex)
        c2v[g.E] = 0.0
        total = llr + c2v[g.var_edges].sum(axis=1)
        v2c[: g.E] = total[g.edge_var] - c2v[: g.E]
        hard = (total < 0).astype(np.uint8)
        if _parity_ok(g, hard) and np.all(total != 0):
            return DecodeResult(hard, True, it, total)
    return DecodeResult(hard, False, max_iters, total)


def check_phi_sums(code: LdpcCode, llr) -> tuple[np.ndarray, np.ndarray]:
    """Per check: parity of negative LLRs and ``sum_j -log tanh(|L_j|/2)``.

    ``llr`` may be one vector or a batch of rows. The check LLR of the tanh
    rule is ``(-1)^parity * phi(sum)`` and the probability that the check is
    violated by hard decisions is ``(1 - exp(-sum)) / 2``.
    """
    a = np.clip(np.asarray(llr, dtype=float), -LLR_MAX, LLR_MAX)
    tab = code._graph.check_vars
    pad = tab == code.n
    idx = np.where(pad, 0, tab)
    g = a[..., idx]
    phis = np.where(pad, 0.0, _phi(np.abs(g)))
    neg = (np.where(pad, False, g < 0).sum(axis=-1) & 1).astype(np.uint8)
    return neg, phis.sum(axis=-1)


def check_llrs(code: LdpcCode, llr) -> np.ndarray:
    """Tanh-rule LLR of every parity check being satisfied."""
    neg, s = check_phi_sums(code, llr)
    mag = _phi(s)
    return np.where(neg == 1, -mag, mag)


def read_alist(path: str | Path) -> SparseBitMatrix:
    """Parse a MacKay alist file (1-based indices, zero padding tolerated)."""
    nums = [int(t) for t in Path(path).read_text().split()]
    it = iter(nums)
    n, m = next(it), next(it)
    next(it), next(it)  # max weights
    col_w = [next(it) for _ in range(n)]
    row_w = [next(it) for _ in range(m)]
    max_cw = max(col_w) if col_w else 0
    max_rw = max(row_w) if row_w else 0
    cols = []
    for j in range(n):
        entries = [next(it) for _ in range(max_cw)]
        cols.append([e - 1 for e in entries if e > 0])
    rows = []
    for i in range(m):
        entries = [next(it) for _ in range(max_rw)]
        rows.append([e - 1 for e in entries if e > 0])
    H = SparseBitMatrix.from_rows(rows, n)
    from_cols = np.zeros((m, n), dtype=np.uint8)
    for j, cl in enumerate(cols):
        from_cols[cl, j] = 1
    if not np.array_equal(from_cols, H.to_array()):
        raise ValueError("alist column and row lists disagree")
    if any(len(r) != w for r, w in zip(rows, row_w)) or any(len(c) != w for c, w in zip(cols, col_w)):
        raise ValueError("alist weight profile does not match index lists")
    return H


def write_alist(H: SparseBitMatrix, path: str | Path) -> None:
    cw, rw = H.col_weights(), H.row_weights()
    a = H.to_array()
    max_cw, max_rw = int(cw.max(initial=0)), int(rw.max(initial=0))
    lines = [f"{H.cols} {H.rows}", f"{max_cw} {max_rw}", " ".join(map(str, cw)), " ".join(map(str, rw))]
    for j in range(H.cols):
        idx = list(np.flatnonzero(a[:, j]) + 1) + [0] * (max_cw - int(cw[j]))
        lines.append(" ".join(map(str, idx)))
    for i in range(H.rows):
        idx = list(H.row(i) + 1) + [0] * (max_rw - int(rw[i]))
        lines.append(" ".join(map(str, idx)))
    Path(path).write_text("\n".join(lines) + "\n")


def has_four_cycle(H: SparseBitMatrix) -> bool:
    """True if two columns of H share more than one row (a length-4 cycle)."""
    pairs = []
    for i in range(H.rows):
        r = H.row(i)
        a, b = np.triu_indices(r.size, 1)
        pairs.append(r[a] * H.cols + r[b])
    if not pairs:
        return False
    allp = np.concatenate(pairs)
    return np.unique(allp).size != allp.size
