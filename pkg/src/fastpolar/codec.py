"""Polar encoding and full-tree successive-cancellation decoding.

All soft-value operations work on the trailing axis so the same routines
serve single frames, frame batches and per-path arrays in list decoding.
A node owning 2^t LLRs consumes its parent's 2^(t+1) values through
``f_step``/``g_step``.
"""

import numpy as np

__all__ = ["encode", "polar_transform", "f_step", "g_step", "combine", "sc_decode",
           "sc_decode_batch"]

# arctanh argument clamp; keeps the exact f-function finite at +-1
_ATANH_CLIP = 1.0 - 2.0**-52


def polar_transform(u):
    """u @ G^(kron n) over GF(2), in-place butterfly on the trailing axis."""
    x = np.array(u, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    if N & (N - 1):
        raise ValueError("length must be a power of two")
    x = np.ascontiguousarray(x)
    h = 1
    while h < N:
        v = x.reshape(x.shape[:-1] + (N // (2 * h), 2 * h))
        v[..., :h] ^= v[..., h:]
        h *= 2
    return x


def encode(u, code):
    """Encode message vector u (zeros at frozen indices) into a codeword."""
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != code.N:
        raise ValueError(f"u must have length {code.N}")
    if np.any(u[..., code.flags == 0] != 0):
        raise ValueError("nonzero value at a frozen index")
    return polar_transform(u)


def f_step(alpha, minsum=False):
    """Soft update for the left child; halves the trailing axis."""
    alpha = np.asarray(alpha, dtype=np.float64)
    m = alpha.shape[-1] // 2
    if alpha.shape[-1] != 2 * m:
        raise ValueError("f_step needs an even-length LLR vector")
    a, b = alpha[..., :m], alpha[..., m:]
    if minsum:
        return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    prod = np.tanh(a / 2.0) * np.tanh(b / 2.0)
    return 2.0 * np.arctanh(np.clip(prod, -_ATANH_CLIP, _ATANH_CLIP))


def g_step(alpha, beta_left):
    """Soft update for the right child, given the left partial sums."""
    alpha = np.asarray(alpha, dtype=np.float64)
    m = alpha.shape[-1] // 2
    beta_left = np.asarray(beta_left)
    if beta_left.shape[-1] != m:
        raise ValueError("beta_left length must be half of alpha's")
    a, b = alpha[..., :m], alpha[..., m:]
    return b + (1.0 - 2.0 * beta_left) * a


def combine(beta_left, beta_right):
    """Partial-sum merge: (bl ^ br, br)."""
    bl = np.asarray(beta_left, dtype=np.uint8)
    br = np.asarray(beta_right, dtype=np.uint8)
    return np.concatenate([bl ^ br, br], axis=-1)


def sc_decode_batch(channel_llrs, code, minsum=False):
    """SC-decode a (B, N) batch of LLR frames.

    Returns (u_hat, x_hat), both (B, N) uint8 arrays.
    """
    alpha = np.atleast_2d(np.asarray(channel_llrs, dtype=np.float64))
    B, N = alpha.shape
    if N != code.N:
        raise ValueError(f"expected {code.N} LLRs per frame, got {N}")
    flags = code.flags
    u_hat = np.zeros((B, N), dtype=np.uint8)

    def descend(a, lo, size):
        if size == 1:
            if flags[lo]:
                bit = (a[:, 0] < 0).astype(np.uint8)
            else:
                bit = np.zeros(B, dtype=np.uint8)
            u_hat[:, lo] = bit
            return bit[:, None]
        half = size // 2
        bl = descend(f_step(a, minsum), lo, half)
        br = descend(g_step(a, bl), lo + half, half)
        return combine(bl, br)

    x_hat = descend(alpha, 0, N)
    return u_hat, x_hat


def sc_decode(channel_llrs, code, minsum=False):
    """SC-decode one frame; returns (u_hat, x_hat)."""
    u_hat, x_hat = sc_decode_batch(np.asarray(channel_llrs)[None, :], code, minsum)
    return u_hat[0], x_hat[0]
