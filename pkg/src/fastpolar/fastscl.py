"""Fast SCL decoding over a pruned decode plan.

Special nodes fork and prune paths directly from the LLRs at the node
root instead of descending to the leaves.  With the min-sum f-update the
surviving path set (bit histories and metrics) matches tree-descent SCL
exactly for every node kind except RG-PC, whose metric is exact only with
respect to a descent that ignores the AF-bit constraints.
"""

import numpy as np

from .codec import combine, f_step, g_step, polar_transform
from .listdec import PathSet, select_output

__all__ = ["fast_scl_decode", "fast_scl_decode_batch", "fast_scl_decode_paths_batch"]


def _relu_neg(a):
    # Eq-(7) penalty for deciding 0 everywhere: |alpha| where the hard
    # decision disagrees
    return np.where(a < 0, -a, 0.0)


def _relu_pos(a):
    return np.where(a >= 0, a, 0.0)


def _gather(arr, src):
    return np.take_along_axis(arr, src[:, :, None], axis=1)


def _extend_serial(ps, alpha, beta, cols):
    """Bit-serial Rate-1 extension over ``cols``: one fork per column."""
    for i in cols:
        a = alpha[:, :, i]
        src, bits = ps.fork(_relu_neg(a), _relu_pos(a))
        alpha = _gather(alpha, src)
        beta = _gather(beta, src)
        beta[:, :, i] = bits
    return alpha, beta


def _toggle_at(bits, col, flip):
    f = np.zeros_like(bits)
    np.put_along_axis(f, col[..., None], flip[..., None].astype(bits.dtype), axis=-1)
    bits ^= f


def _extend_spc_cols(ps, alpha, beta, cols):
    """Single-parity-check extension over ``cols`` (Wagner with list forks).

    Per path, the least reliable column is the parity bit: its penalty is
    charged up front when the hard decisions violate parity, and every
    other column forks between keeping its hard decision (no penalty) and
    flipping it, which also toggles the parity bit, at cost
    |alpha_i| + (1 - 2s)|alpha_p| where s tracks the parity bit's current
    flip state.  The resulting metric is the exact node-root metric of
    every even-parity candidate.
    """
    colarr = np.asarray(cols)
    M = colarr.size
    sub = alpha[:, :, colarr]
    absa = np.abs(sub)
    p_rel = np.argmin(absa, axis=-1)  # per-path parity-bit column
    hd = (sub < 0).astype(np.uint8)
    gamma = np.bitwise_xor.reduce(hd, axis=-1)
    pen_p = np.take_along_axis(absa, p_rel[..., None], -1)[..., 0]
    ps.penalize(gamma * pen_p)
    s_p = gamma.astype(np.uint8)  # 1 while the parity bit sits flipped
    bits = hd.copy()
    # natural column order with the per-path parity bit pushed out
    idx = np.broadcast_to(np.arange(M), sub.shape).copy()
    order = np.argsort(np.where(idx == p_rel[..., None], M, idx), axis=-1,
                       kind="stable")[..., :M - 1]
    for e in range(M - 1):
        j = order[:, :, e]
        a_j = np.take_along_axis(absa, j[..., None], -1)[..., 0]
        pen_flip = a_j + (1.0 - 2.0 * s_p) * pen_p
        src, flip = ps.fork(np.zeros_like(a_j), pen_flip)
        alpha = _gather(alpha, src)
        beta = _gather(beta, src)
        absa, bits, order = (_gather(x, src) for x in (absa, bits, order))
        pen_p = np.take_along_axis(pen_p, src, axis=1)
        s_p = np.take_along_axis(s_p, src, axis=1)
        p_rel = np.take_along_axis(p_rel, src, axis=1)
        hd = _gather(hd, src)
        _toggle_at(bits, order[:, :, e], flip)
        s_p = s_p ^ flip
    hd_p = np.take_along_axis(hd, p_rel[..., None], -1)[..., 0]
    np.put_along_axis(bits, p_rel[..., None], (hd_p ^ s_p)[..., None], axis=-1)
    beta[:, :, colarr] = bits
    return alpha, beta


def _extend_gpc(ps, alpha, np_sub, minsum):
    """Parity-check-node extension matching the descent path set.

    The node splits as (same-Np half, Rate-1 half) down to its all-frozen
    block, so recursing that shape with the node-level Rate-0/Rate-1/SPC
    extensions keeps the surviving paths identical to tree descent; the
    Np interleaved parity constraints are enforced by the structure.
    """
    B, P, size = alpha.shape
    if size == np_sub:
        ps.penalize(_relu_neg(alpha).sum(axis=-1))
        return np.zeros((B, P, size), dtype=np.uint8)
    if np_sub == 1:
        beta = np.zeros((B, P, size), dtype=np.uint8)
        _, beta = _extend_spc_cols(ps, alpha, beta, list(range(size)))
        return beta
    gen = len(ps.maps)
    bl = _extend_gpc(ps, f_step(alpha, minsum), np_sub, minsum)
    alpha = ps.realign(alpha, gen)
    gen_r = len(ps.maps)
    half = size // 2
    beta_r = np.zeros((B, ps.P, half), dtype=np.uint8)
    _, br = _extend_serial(ps, g_step(alpha, bl), beta_r, list(range(half)))
    bl = ps.realign(bl, gen_r)
    return combine(bl, br)


def _extend_node(ps, alpha, plan, minsum):
    kind = plan.kind
    B, P, size = alpha.shape

    if kind == "rate0":
        ps.penalize(_relu_neg(alpha).sum(axis=-1))
        return np.zeros((B, ps.P, size), dtype=np.uint8)

    if kind == "rate1":
        beta = np.zeros((B, P, size), dtype=np.uint8)
        _, beta = _extend_serial(ps, alpha, beta, list(range(size)))
        return beta

    if kind == "rep":
        src, bits = ps.fork(_relu_neg(alpha).sum(axis=-1), _relu_pos(alpha).sum(axis=-1))
        return np.repeat(bits[:, :, None], size, axis=2)

    if kind == "spc":
        beta = np.zeros((B, P, size), dtype=np.uint8)
        _, beta = _extend_spc_cols(ps, alpha, beta, list(range(size)))
        return beta

    if kind in ("gpc", "rgpc"):
        return _extend_gpc(ps, alpha, plan.np_sub, minsum)

    if kind == "grep":
        # fold through the all-frozen left siblings, charging their
        # Rate-0 penalties level by level
        p = plan.rate_c.stage
        while alpha.shape[-1] > (1 << p):
            half = alpha.shape[-1] // 2
            ps.penalize(_relu_neg(f_step(alpha, minsum)).sum(axis=-1))
            alpha = alpha[..., half:] + alpha[..., :half]
        beta_rc = _extend_node(ps, alpha, plan.rate_c, minsum)
        reps = size >> p
        return np.concatenate([beta_rc] * reps, axis=-1)

    if kind == "split":
        gen = len(ps.maps)
        bl = _extend_node(ps, f_step(alpha, minsum), plan.left, minsum)
        alpha = ps.realign(alpha, gen)
        gen_r = len(ps.maps)
        br = _extend_node(ps, g_step(alpha, bl), plan.right, minsum)
        bl = ps.realign(bl, gen_r)
        return combine(bl, br)

    raise ValueError(f"unknown node kind {kind!r}")


def fast_scl_decode_paths_batch(channel_llrs, plan, L, minsum=True):
    """Batched fast SCL; returns (u (B, P, N), pm (B, P)) sorted by metric."""
    if L < 1:
        raise ValueError("list size must be >= 1")
    alpha = np.atleast_2d(np.asarray(channel_llrs, dtype=np.float64))
    B, N = alpha.shape
    if N != plan.size:
        raise ValueError(f"expected {plan.size} LLRs per frame")
    ps = PathSet(B, N, L)
    beta = _extend_node(ps, alpha[:, None, :], plan, minsum)
    order = np.argsort(ps.pm, axis=1, kind="stable")
    pm = np.take_along_axis(ps.pm, order, axis=1)
    x = np.take_along_axis(beta, order[:, :, None], axis=1)
    return polar_transform(x), pm


def fast_scl_decode_batch(channel_llrs, code, plan, L, crc=None, minsum=True):
    """Batched fast SCL decode; returns (u_hat (B, N), pm (B,))."""
    u, pm = fast_scl_decode_paths_batch(channel_llrs, plan, L, minsum)
    return select_output(u, pm, code, crc)


def fast_scl_decode(channel_llrs, code, plan, L, crc=None, minsum=True):
    """Fast SCL decode of one frame; returns (u_hat, pm)."""
    u_hat, pm = fast_scl_decode_batch(np.asarray(channel_llrs)[None, :], code, plan, L, crc, minsum)
    return u_hat[0], float(pm[0])
