"""Horizontally interleaved linearized Reed-Solomon codes with Gao-like decoding."""

from .channel import decompose, interleaved_weight, sample_error, sum_rank_weight, transmit
from .code import HilrsCode, LrsCode, build_hilrs, build_lrs
from .decode import DecodeResult, decoding_radius, failure_bound, gao_decode
from .ff import FieldTower, make_tower
from .skew import SkewPoly

__all__ = [
    "DecodeResult",
    "FieldTower",
    "HilrsCode",
    "LrsCode",
    "SkewPoly",
    "build_hilrs",
    "build_lrs",
    "decoding_radius",
    "decompose",
    "failure_bound",
    "gao_decode",
    "interleaved_weight",
    "make_tower",
    "sample_error",
    "sum_rank_weight",
    "transmit",
]
