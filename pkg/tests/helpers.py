"""Shared oracles for the test suite."""

import numpy as np

from fastpolar.codec import f_step, g_step, polar_transform


def kron_generator(n):
    """Explicit generator matrix: n-fold Kronecker power of [[1,0],[1,1]]."""
    g = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    out = np.array([[1]], dtype=np.uint8)
    for _ in range(n):
        out = np.kron(out, g)
    return out


def path_metric_of(llrs, u, minsum=True):
    """Leaf-by-leaf metric of a fixed bit history: |alpha| wherever the
    decision disagrees with the hard decision, summed over the tree."""

    def rec(alpha, bits):
        if alpha.shape[-1] == 1:
            return abs(alpha[0]) if bits[0] != (alpha[0] < 0) else 0.0
        half = len(bits) // 2
        bl = polar_transform(bits[:half].copy())
        return rec(f_step(alpha, minsum), bits[:half]) + rec(g_step(alpha, bl), bits[half:])

    return rec(np.asarray(llrs, dtype=np.float64), np.asarray(bits_array(u), dtype=np.uint8))


def bits_array(u):
    return np.asarray(u, dtype=np.uint8)


def canon_paths(u, pm, digits=6):
    """Order-independent canonical form of a path set for comparison."""
    return sorted((round(float(p), digits), tuple(int(b) for b in row))
                  for p, row in zip(pm, u))


def even_parity_words(length):
    """All binary words of the given length with XOR zero."""
    words = []
    for w in range(1 << length):
        bits = [(w >> k) & 1 for k in range(length)]
        if sum(bits) % 2 == 0:
            words.append(np.array(bits, dtype=np.uint8))
    return words


def ml_even_parity(alpha):
    """Brute-force ML over the even-parity code: maximize correlation
    sum((1-2b) * alpha)."""
    alpha = np.asarray(alpha, dtype=np.float64)
    best, best_corr = None, -np.inf
    for word in even_parity_words(len(alpha)):
        corr = float(np.dot(1.0 - 2.0 * word, alpha))
        if corr > best_corr:
            best, best_corr = word, corr
    return best
