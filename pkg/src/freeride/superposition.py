"""Superposition of extra bits on the payload and successive-cancellation decoding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import BiosChannel
from .ldpc import DecodeResult, LdpcCode


@dataclass(frozen=True)
class ScResult:
    u_hat: np.ndarray
    v_hat: np.ndarray
    w_hat: np.ndarray
    payload: DecodeResult


def superimpose(code: LdpcCode, frc, u, v) -> np.ndarray:
    """``x = uG0 + vG1``; ``frc=None`` transmits the payload alone."""
    c = code.encode(u)
    if frc is None or frc.k1 == 0:
        return c
    return c ^ frc.encode(v)


def cancel_and_decode(code: LdpcCode, channel: BiosChannel, y, w_hat, max_iters: int = 50) -> DecodeResult:
    """Flip ``ŵ`` out of the observation and run the payload decoder."""
    y_tilde = channel.flip(y, w_hat)
    return code.decode(channel.llr(y_tilde), max_iters)


def successive_cancellation(
    code: LdpcCode, frc, channel: BiosChannel, y, max_iters: int = 50, decoder: str = "hdd"
) -> ScResult:
    """Decode the extra bits first, cancel their codeword, then decode the payload.

    Works with any free-ride code exposing ``k1`` and ``decode(channel, y, decoder)``.
    """
    if frc is None or frc.k1 == 0:
        v_hat = np.zeros(0, dtype=np.uint8)
        w_hat = np.zeros(code.n, dtype=np.uint8)
    else:
        v_hat, w_hat = frc.decode(channel, y, decoder)
    res = cancel_and_decode(code, channel, y, w_hat, max_iters)
    return ScResult(code.extract_message(res.codeword_estimate), v_hat, w_hat, res)
