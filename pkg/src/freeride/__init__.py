"""Free-ride extra bits superimposed on LDPC-coded payloads."""

from .channel import BiosChannel, BpskAwgn, Bsc, bios_capacity, tanh_rule
from .gf2 import DenseBitMatrix, SparseBitMatrix, invert, mat_vec_mul, rank, row_reduce, vec_mat_mul
from .ldpc import LdpcCode, construct_regular, read_alist, sum_product_decode, write_alist
from .random_code import RandomFreeRideCode, hdd_decode, sdd_decode, stat_model, wer_estimate
from .structured import (
    StructuredFreeRideCode,
    build_repetition,
    build_rm1,
    fht_ml_decode_rm,
    lift,
    mlg_decode_repetition,
    wer_estimate_repetition,
)
from .superposition import successive_cancellation, superimpose

__version__ = "0.1.0"

__all__ = [
    "BiosChannel", "BpskAwgn", "Bsc", "bios_capacity", "tanh_rule",
    "DenseBitMatrix", "SparseBitMatrix", "invert", "mat_vec_mul", "rank", "row_reduce", "vec_mat_mul",
    "LdpcCode", "construct_regular", "read_alist", "sum_product_decode", "write_alist",
    "RandomFreeRideCode", "hdd_decode", "sdd_decode", "stat_model", "wer_estimate",
    "StructuredFreeRideCode", "build_repetition", "build_rm1", "fht_ml_decode_rm", "lift",
    "mlg_decode_repetition", "wer_estimate_repetition",
    "successive_cancellation", "superimpose",
]
