"""Monte Carlo experiments: configuration, seeding, aggregation and output.

Every trial draws from its own stream ``default_rng([seed, snr_index,
trial_index])``. Trials are processed in fixed chunks of ``batch`` trials, so
the result is the same for any worker count: chunks are merged in order and
the stop rule truncates at the exact trial that reaches ``max_errors``.
"""

from __future__ import annotations

import collections
import csv
import dataclasses
import hashlib
import json
import math
import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import capacity as cap
from .channel import BpskAwgn
from .gf2 import weight
from .ldpc import LdpcCode, construct_regular, read_alist
from .random_code import candidate_messages, generate
from .structured import build_repetition, build_rm1, lift
from .superposition import cancel_and_decode

EXPERIMENTS = ("histogram", "wer_extra", "ber_payload", "capacity_curve", "prop1_check")
SCHEMES = ("random", "rep", "rm1")
DECODERS = ("hdd", "sdd")
SHORT_CODES = {"repetition[2,1]": cap.repetition_code, "extended-hamming[8,4]": cap.extended_hamming_code}

# Seed word separating the G1 draw from the per-trial streams.
_G1_STREAM = 0x6731


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    experiment: str = "ber_payload"
    n: int = 8064
    gamma: int = 3
    rho: int = 6
    code_seed: int = 1
    alist: str | None = None
    scheme: str = "random"
    k1: int = 5
    decoder: str = "hdd"
    snr_list: tuple[float, ...] = (1.0,)
    max_trials: int = 10_000_000
    max_errors: int = 200
    seed: int = 0
    max_iters: int = 50
    batch: int = 64
    # capacity_curve only
    samples: int = 1_000_000
    workers: int = 1
    out: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "snr_list", tuple(float(s) for s in self.snr_list))
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}")
        if self.decoder not in DECODERS:
            raise ConfigError(f"decoder must be one of {DECODERS}")
        if not self.snr_list or not all(math.isfinite(s) for s in self.snr_list):
            raise ConfigError("snr_list must be a nonempty list of finite values")
        for name in ("max_trials", "max_errors", "max_iters", "batch", "samples", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.k1 < 0:
            raise ConfigError("k1 must be non-negative")
        if self.scheme != "random" and self.k1 == 0 and self.experiment != "capacity_curve":
            raise ConfigError("structured schemes need k1 >= 1")
        if self.experiment in ("wer_extra", "histogram", "prop1_check") and self.k1 == 0:
            raise ConfigError(f"{self.experiment} needs k1 >= 1")
        if self.experiment == "histogram" and self.scheme != "random":
            raise ConfigError("histograms are defined for the random scheme")

    def hash(self) -> str:
        """Digest of every field that affects results (not ``out`` or ``workers``)."""
        d = dataclasses.asdict(self)
        d.pop("out")
        d.pop("workers")
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def trial_rng(seed: int, snr_index: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng([seed, snr_index, trial_index])


def binomial_se(errors: int, total: int) -> float:
    if total <= 0:
        return float("nan")
    p = errors / total
    return math.sqrt(p * (1.0 - p) / total)


def parse_snr(text: str) -> tuple[float, ...]:
    """``START:STOP:STEP`` (STOP inclusive), a comma list, or one value."""
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
            raise ConfigError(f"bad SNR range {text!r}")
        count = int(math.floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1
        return tuple(round(parts[0] + i * parts[2], 10) for i in range(count))
    return tuple(float(x) for x in text.split(","))


# ---------------------------------------------------------------- context


@dataclass(eq=False)
class _Context:
    config: SimConfig
    code: LdpcCode
    frc: object | None


_CTX: _Context | None = None


def build_code(config: SimConfig) -> LdpcCode:
    if config.alist:
        return LdpcCode.from_parity_check(read_alist(config.alist))
    return construct_regular(config.n, config.gamma, config.rho, seed=config.code_seed)


def build_free_ride(config: SimConfig, code: LdpcCode):
    if config.k1 == 0:
        return None
    if config.scheme == "random":
        return generate(config.k1, code, np.random.default_rng([config.seed, _G1_STREAM]))
    if config.scheme == "rep":
        return lift(code, build_repetition(config.k1, code.m))
    return lift(code, build_rm1(config.k1, code.m))


def _context(config: SimConfig, code: LdpcCode | None = None) -> _Context:
    global _CTX
    if _CTX is None or _CTX.config != config:
        code = build_code(config) if code is None else code
        _CTX = _Context(config, code, build_free_ride(config, code))
    return _CTX


# ---------------------------------------------------------------- trials

# Per-trial record columns.
EXTRA, SC_BITS, SC_WORD, GENIE_BITS, GENIE_WORD = range(5)


def _draw(ctx: _Context, ch: BpskAwgn, rng: np.random.Generator):
    code, frc = ctx.code, ctx.frc
    u = rng.integers(0, 2, code.k, dtype=np.uint8)
    c = code.encode(u)
    if frc is None:
        return u, np.zeros(0, np.uint8), np.zeros(code.n, np.uint8), ch.transmit(c, rng)
    v = rng.integers(0, 2, frc.k1, dtype=np.uint8)
    w = frc.encode(v)
    return u, v, w, ch.transmit(c ^ w, rng)


def _payload_errors(ctx: _Context, ch, y, w_hat, u) -> tuple[int, int]:
    res = cancel_and_decode(ctx.code, ch, y, w_hat, ctx.config.max_iters)
    bits = int(np.count_nonzero(ctx.code.extract_message(res.codeword_estimate) != u))
    return bits, int(bits > 0)


def _run_chunk(snr_index: int, start: int, stop: int) -> np.ndarray:
    ctx = _CTX
    cfg = ctx.config
    ch = BpskAwgn.from_snr_db(cfg.snr_list[snr_index])
    draws = [_draw(ctx, ch, trial_rng(cfg.seed, snr_index, t)) for t in range(start, stop)]
    rec = np.zeros((stop - start, 5), dtype=np.int64)
    if ctx.frc is not None:
        V = np.stack([d[1] for d in draws])
        Y = np.stack([d[3] for d in draws])
        V_hat, W_hat = ctx.frc.decode(ch, Y, cfg.decoder)
        rec[:, EXTRA] = np.any(V_hat != V, axis=1)
    else:
        W_hat = np.zeros((stop - start, ctx.code.n), np.uint8)
    if cfg.experiment == "wer_extra":
        return rec
    for i, (u, _, w, y) in enumerate(draws):
        rec[i, SC_BITS], rec[i, SC_WORD] = _payload_errors(ctx, ch, y, W_hat[i], u)
        if cfg.experiment == "prop1_check":
            if rec[i, EXTRA]:
                rec[i, GENIE_BITS], rec[i, GENIE_WORD] = _payload_errors(ctx, ch, y, w, u)
            else:
                rec[i, GENIE_BITS], rec[i, GENIE_WORD] = rec[i, SC_BITS], rec[i, SC_WORD]
    return rec


def _histogram_chunk(snr_index: int, start: int, stop: int) -> np.ndarray:
    """Rows ``(N(w), N(s))`` with ``s`` a uniformly drawn wrong candidate."""
    ctx = _CTX
    cfg, code, frc = ctx.config, ctx.code, ctx.frc
    ch = BpskAwgn.from_snr_db(cfg.snr_list[snr_index])
    out = np.zeros((stop - start, 2), dtype=np.int64)
    for i, t in enumerate(range(start, stop)):
        rng = trial_rng(cfg.seed, snr_index, t)
        u, v, w, y = _draw(ctx, ch, rng)
        v_idx = int(sum(int(b) << (frc.k1 - 1 - j) for j, b in enumerate(v)))
        wrong = int(rng.integers(2**frc.k1 - 1))
        wrong += wrong >= v_idx
        a = code.syndrome(ch.hard_decision(y))
        s = frc.encode(candidate_messages(frc.k1, wrong, wrong + 1)[0])
        out[i] = weight(a ^ code.syndrome(w)), weight(a ^ code.syndrome(s))
    return out


def _ordered_chunks(fn, snr_index: int, config: SimConfig, pool):
    """Yield chunk results in trial order; with a pool a small window runs ahead."""
    bounds = ((s, min(s + config.batch, config.max_trials)) for s in range(0, config.max_trials, config.batch))
    if pool is None:
        for a, b in bounds:
            yield fn(snr_index, a, b)
        return
    pending = collections.deque()
    for a, b in bounds:
        pending.append(pool.apply_async(fn, (snr_index, a, b)))
        if len(pending) >= 2 * config.workers:
            yield pending.popleft().get()
    while pending:
        yield pending.popleft().get()


def _stop_column(config: SimConfig) -> int | None:
    if config.experiment == "wer_extra":
        return EXTRA
    if config.experiment in ("ber_payload", "prop1_check"):
        return SC_WORD
    return None


def _collect(fn, snr_index: int, config: SimConfig, pool) -> np.ndarray:
    col = _stop_column(config)
    parts, errors = [], 0
    gen = _ordered_chunks(fn, snr_index, config, pool)
    for rec in gen:
        if col is not None:
            cum = errors + np.cumsum(rec[:, col])
            hit = np.flatnonzero(cum >= config.max_errors)
            if hit.size:
                parts.append(rec[: hit[0] + 1])
                break
            errors = int(cum[-1])
        parts.append(rec)
    gen.close()
    return np.concatenate(parts)


class _Pool:
    """Fork-based pool that inherits the already built context."""

    def __init__(self, workers: int):
        self.pool = multiprocessing.get_context("fork").Pool(workers) if workers > 1 else None

    def __enter__(self):
        return self.pool

    def __exit__(self, *exc):
        if self.pool is not None:
            self.pool.terminate()
            self.pool.join()


# ---------------------------------------------------------------- results


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    trials: int
    word_errors_extra: int | None
    bit_errors_payload: int | None
    payload_bits: int | None
    wer: float | None
    ber: float | None
    std_err_wer: float | None
    std_err_ber: float | None
    word_errors_payload: int | None = None
    fer_payload: float | None = None
    std_err_fer: float | None = None


@dataclass(frozen=True)
class Prop1Row:
    snr_db: float
    trials: int
    lambda0_tilde: float
    lambda1: float
    lambda0: float
    std_err_lambda0_tilde: float
    std_err_lambda1: float
    std_err_lambda0: float
    margin: float
    std_err_margin: float
    payload_bits: int
    bit_errors_genie: int
    bit_errors_sc: int
    ber_genie: float
    ber_sc: float
    std_err_ber_genie: float
    std_err_ber_sc: float


@dataclass(frozen=True)
class CapacityRow:
    snr_db: float
    code: str
    rate: float
    samples: int
    c_bios: float
    std_err_c_bios: float
    mutual_info: float
    std_err_mutual_info: float
    accessible: float
    std_err_accessible: float
    lower_bound: float
    std_err_lower_bound: float


@dataclass(frozen=True)
class HistogramRow:
    snr_db: float
    n_value: int
    count_correct: int
    count_wrong: int


@dataclass(frozen=True)
class SweepResult:
    config: SimConfig
    rows: tuple
    # histogram experiment: per-SNR raw (N(w), N(s)) samples
    samples: tuple = field(default=(), repr=False)

    def columns(self) -> list[str]:
        if not self.rows:
            return []
        names = [f.name for f in dataclasses.fields(self.rows[0])]
        names = [n for n in names if any(getattr(r, n) is not None for r in self.rows)]
        return names + ["seed", "config_hash"]

    def records(self) -> list[dict]:
        cols, h = self.columns(), self.config.hash()
        out = []
        for r in self.rows:
            d = {c: getattr(r, c) for c in cols[:-2]}
            d["seed"], d["config_hash"] = self.config.seed, h
            out.append(d)
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=self.columns())
            writer.writeheader()
            writer.writerows(self.records())

    def write_json(self, path) -> None:
        doc = {"config": dataclasses.asdict(self.config), "config_hash": self.config.hash(), "rows": self.records()}
        Path(path).write_text(json.dumps(doc, indent=2))


# ---------------------------------------------------------------- experiments


def run(config: SimConfig, code: LdpcCode | None = None) -> SweepResult:
    """Dispatch on ``config.experiment``; ``code`` may be passed to skip construction."""
    if config.experiment == "capacity_curve":
        return capacity_curve(config)
    if config.experiment == "histogram":
        return histogram(config, code)
    if config.experiment == "prop1_check":
        return prop1_check(config, code)
    ctx = _context(config, code)
    rows = []
    with _Pool(config.workers) as pool:
        for i, snr in enumerate(config.snr_list):
            rec = _collect(_run_chunk, i, config, pool)
            rows.append(_sweep_row(snr, rec, ctx, config))
    return SweepResult(config, tuple(rows))


def _sweep_row(snr: float, rec: np.ndarray, ctx: _Context, config: SimConfig) -> SweepRow:
    trials = rec.shape[0]
    extra = ctx.frc is not None
    we = int(rec[:, EXTRA].sum()) if extra else None
    row = dict(
        snr_db=snr,
        trials=trials,
        word_errors_extra=we,
        wer=we / trials if extra else None,
        std_err_wer=binomial_se(we, trials) if extra else None,
        bit_errors_payload=None,
        payload_bits=None,
        ber=None,
        std_err_ber=None,
    )
    if config.experiment == "ber_payload":
        bits = trials * ctx.code.k
        be, fe = int(rec[:, SC_BITS].sum()), int(rec[:, SC_WORD].sum())
        row.update(
            bit_errors_payload=be,
            payload_bits=bits,
            ber=be / bits,
            std_err_ber=binomial_se(be, bits),
            word_errors_payload=fe,
            fer_payload=fe / trials,
            std_err_fer=binomial_se(fe, trials),
        )
    return SweepRow(**row)


def prop1_check(config: SimConfig, code: LdpcCode | None = None) -> SweepResult:
    """Genie-aided, extra-bit and full successive-cancellation error rates on common noise."""
    config = dataclasses.replace(config, experiment="prop1_check")
    ctx = _context(config, code)
    rows = []
    with _Pool(config.workers) as pool:
        for i, snr in enumerate(config.snr_list):
            rec = _collect(_run_chunk, i, config, pool)
            N = rec.shape[0]
            bits = N * ctx.code.k
            g, l1, l0 = (int(rec[:, c].sum()) for c in (GENIE_WORD, EXTRA, SC_WORD))
            se = [binomial_se(x, N) for x in (g, l1, l0)]
            bg, bs = int(rec[:, GENIE_BITS].sum()), int(rec[:, SC_BITS].sum())
            rows.append(
                Prop1Row(
                    snr_db=snr,
                    trials=N,
                    lambda0_tilde=g / N,
                    lambda1=l1 / N,
                    lambda0=l0 / N,
                    std_err_lambda0_tilde=se[0],
                    std_err_lambda1=se[1],
                    std_err_lambda0=se[2],
                    margin=(g + l1 - l0) / N,
                    std_err_margin=math.sqrt(sum(s * s for s in se)),
                    payload_bits=bits,
                    bit_errors_genie=bg,
                    bit_errors_sc=bs,
                    ber_genie=bg / bits,
                    ber_sc=bs / bits,
                    std_err_ber_genie=binomial_se(bg, bits),
                    std_err_ber_sc=binomial_se(bs, bits),
                )
            )
    return SweepResult(config, tuple(rows))


def histogram(config: SimConfig, code: LdpcCode | None = None) -> SweepResult:
    """Histograms of ``N(w)`` and ``N(s)``, ``s`` wrong, over ``max_trials`` trials per SNR."""
    config = dataclasses.replace(config, experiment="histogram")
    ctx = _context(config, code)
    m = ctx.code.m
    rows, samples = [], []
    with _Pool(config.workers) as pool:
        for i, snr in enumerate(config.snr_list):
            rec = _collect(_histogram_chunk, i, config, pool)
            samples.append(rec)
            hc = np.bincount(rec[:, 0], minlength=m + 1)
            hw = np.bincount(rec[:, 1], minlength=m + 1)
            for nv in np.flatnonzero(hc + hw):
                rows.append(HistogramRow(snr, int(nv), int(hc[nv]), int(hw[nv])))
    return SweepResult(config, tuple(rows), tuple(samples))


_CAP_BLOCK = 1 << 17


def _capacity_block(snr_index: int, code_index: int, block: int, size: int):
    cfg = _CTX.config
    sc = list(SHORT_CODES.values())[code_index]()
    rng = np.random.default_rng([cfg.seed, snr_index, code_index, block])
    return cap.sample_terms(sc, BpskAwgn.from_snr_db(cfg.snr_list[snr_index]), size, rng)


def capacity_curve(config: SimConfig) -> SweepResult:
    """Accessible capacity and its lower bound for the short codes over the SNR sweep.

    Samples are split in fixed blocks with their own streams so the worker
    count does not change the estimate.
    """
    global _CTX
    config = dataclasses.replace(config, experiment="capacity_curve")
    _CTX = _Context(config, None, None)
    blocks = [(b, min(_CAP_BLOCK, config.samples - b * _CAP_BLOCK)) for b in range(-(-config.samples // _CAP_BLOCK))]
    rows = []
    with _Pool(config.workers) as pool:
        for i, snr in enumerate(config.snr_list):
            for j, (name, make) in enumerate(SHORT_CODES.items()):
                args = [(i, j, b, size) for b, size in blocks]
                parts = pool.starmap(_capacity_block, args) if pool else [_capacity_block(*a) for a in args]
                c = np.concatenate([p[0] for p in parts])
                mi = np.concatenate([p[1] for p in parts])
                pt = cap.point_from_terms(c, mi, make().rate)
                rows.append(
                    CapacityRow(
                        snr_db=snr,
                        code=name,
                        rate=make().rate,
                        samples=config.samples,
                        c_bios=pt.c_bios.value,
                        std_err_c_bios=pt.c_bios.std_err,
                        mutual_info=pt.mutual_info.value,
                        std_err_mutual_info=pt.mutual_info.std_err,
                        accessible=pt.accessible.value,
                        std_err_accessible=pt.accessible.std_err,
                        lower_bound=pt.lower_bound.value,
                        std_err_lower_bound=pt.lower_bound.std_err,
                    )
                )
    return SweepResult(config, tuple(rows))
