import numpy as np
import pytest

from freeride.channel import BpskAwgn, Bsc
from freeride.random_code import generate
from freeride.structured import build_rm1, lift
from freeride.superposition import cancel_and_decode, successive_cancellation, superimpose


def test_superimpose(code128, rng):
    u = rng.integers(0, 2, 64, dtype=np.uint8)
    c = code128.encode(u)
    assert np.array_equal(superimpose(code128, None, u, None), c)
    frc = generate(4, code128, rng)
    v = np.array([1, 0, 1, 1], np.uint8)
    x = superimpose(code128, frc, u, v)
    assert np.array_equal(x ^ c, frc.encode(v))
    assert np.array_equal(code128.syndrome(x), code128.syndrome(frc.encode(v)))


def test_flip_removes_w_exactly_on_bsc(code128, rng):
    ch = Bsc(0.05)
    frc = generate(5, code128, rng)
    for _ in range(20):
        c = code128.encode(rng.integers(0, 2, 64, dtype=np.uint8))
        w = frc.encode(rng.integers(0, 2, 5, dtype=np.uint8))
        e = (rng.random(128) < 0.05).astype(np.uint8)
        y = c ^ w ^ e
        assert np.array_equal(ch.flip(y, w), c ^ e)


def test_genie_cancellation_is_transparent_on_awgn(code1008, rng):
    # flipping w out of y equals sending c with the noise sign-flipped on supp(w)
    ch = BpskAwgn.from_snr_db(1.5)
    frc = generate(5, code1008, rng)
    for _ in range(5):
        u = rng.integers(0, 2, code1008.k, dtype=np.uint8)
        c = code1008.encode(u)
        w = frc.encode(rng.integers(0, 2, 5, dtype=np.uint8))
        noise = ch.sigma * rng.standard_normal(code1008.n)
        y = (1.0 - 2.0 * (c ^ w)) + noise
        direct = code1008.decode(ch.llr((1.0 - 2.0 * c) + noise * (1.0 - 2.0 * w)))
        genie = cancel_and_decode(code1008, ch, y, w)
        assert np.array_equal(genie.codeword_estimate, direct.codeword_estimate)


@pytest.mark.parametrize("decoder", ["hdd", "sdd"])
def test_successive_cancellation_noiseless(code128, rng, decoder):
    ch = BpskAwgn(0.0)
    for frc in (generate(6, code128, rng), lift(code128, build_rm1(4, 64)), None):
        k1 = 0 if frc is None else frc.k1
        u = rng.integers(0, 2, 64, dtype=np.uint8)
        v = rng.integers(0, 2, k1, dtype=np.uint8)
        y = ch.transmit(superimpose(code128, frc, u, v), rng)
        res = successive_cancellation(code128, frc, ch, y, decoder=decoder)
        assert np.array_equal(res.u_hat, u)
        assert np.array_equal(res.v_hat, v)
        assert res.payload.converged


def test_flip_length_mismatch():
    with pytest.raises(ValueError):
        BpskAwgn(1.0).flip(np.zeros(4), np.zeros(3, np.uint8))
