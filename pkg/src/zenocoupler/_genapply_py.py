"""Pure-numpy fallback for the generator-application kernel.

Mirrors the Cython signature in _genapply.pyx; used when the compiled
extension is unavailable or disabled via ZENOCOUPLER_FORCE_PY_KERNEL.
"""

import numpy as np


def apply_generator(x, out, neg_k, neg_g, sa, s1, s2, w1):
    out[:] = 0
    # -k a b1^: target (na, n1) fed from (na+1, n1-1)
    out[:-1, 1:, :] += (
        neg_k * sa[1:, None, None] * s1[None, 1:, None] * x[1:, :-1, :]
    )
    # -k* a^ b1: target (na, n1) fed from (na-1, n1+1)
    out[1:, :-1, :] += (
        np.conj(neg_k) * sa[1:, None, None] * s1[None, 1:, None] * x[:-1, 1:, :]
    )
    # -g b1^2 b2^: target (n1, n2) fed from (n1+2, n2-1)
    out[:, :-2, 1:] += (
        neg_g * w1[None, :-2, None] * s2[None, None, 1:] * x[:, 2:, :-1]
    )
    # -g* b1^^2 b2: target (n1, n2) fed from (n1-2, n2+1)
    out[:, 2:, :-1] += (
        np.conj(neg_g) * w1[None, :-2, None] * s2[None, None, 1:] * x[:, :-2, 1:]
    )
    return out
