"""CRC attachment and checking over bit vectors.

The bitwise register implementation is the reference; a cached GF(2)
matrix form of the same map handles frame batches quickly (a CRC with a
fixed init value is affine in the message bits).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["CrcSpec", "CRC8", "CRC16", "crc_bits", "crc_attach", "crc_check",
           "crc_check_batch"]


@dataclass(frozen=True)
class CrcSpec:
    width: int
    polynomial: int  # generator without the leading x^width term
    init: int = 0
    reflect: bool = False
    final_xor: int = 0


CRC8 = CrcSpec(width=8, polynomial=0x07)
CRC16 = CrcSpec(width=16, polynomial=0x1021)


def crc_bits(payload, spec):
    """CRC register bits (MSB first) for a bit-vector payload."""
    bits = np.asarray(payload, dtype=np.uint8).tolist()
    if spec.reflect:
        bits = bits[::-1]
    reg = spec.init
    top = 1 << (spec.width - 1)
    mask = (1 << spec.width) - 1
    for b in bits:
        fb = ((reg >> (spec.width - 1)) & 1) ^ int(b)
        reg = ((reg << 1) & mask)
        if fb:
            reg ^= spec.polynomial
    reg ^= spec.final_xor
    out = [(reg >> (spec.width - 1 - i)) & 1 for i in range(spec.width)]
    if spec.reflect:
        out = out[::-1]
    return np.array(out, dtype=np.uint8)


def crc_attach(payload, spec):
    payload = np.asarray(payload, dtype=np.uint8)
    return np.concatenate([payload, crc_bits(payload, spec)])


def crc_check(bits, spec):
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size < spec.width:
        return False
    expected = crc_bits(bits[:bits.size - spec.width], spec)
    return bool(np.array_equal(bits[bits.size - spec.width:], expected))


@lru_cache(maxsize=32)
def _affine_map(spec, length):
    # crc(m) = c0 ^ (m @ M mod 2), valid because the register update is
    # linear in the message for fixed init/final_xor
    zero = crc_bits(np.zeros(length, dtype=np.uint8), spec)
    M = np.empty((length, spec.width), dtype=np.uint8)
    e = np.zeros(length, dtype=np.uint8)
    for i in range(length):
        e[i] = 1
        M[i] = crc_bits(e, spec) ^ zero
        e[i] = 0
    return M, zero


def crc_check_batch(bits, spec):
    """Vectorized crc_check over the leading axes of a (..., n) bit array."""
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.shape[-1]
    if n < spec.width:
        raise ValueError("bit vectors shorter than the CRC width")
    M, zero = _affine_map(spec, n - spec.width)
    payload = bits[..., :n - spec.width]
    expected = (payload @ M & 1) ^ zero
    return np.all(expected == bits[..., n - spec.width:], axis=-1)
