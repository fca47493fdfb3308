"""Optional numba-accelerated inner kernel for the pulse-window RHS.

Falls back to scipy sparse arithmetic when numba is unavailable; results
agree to machine precision either way.
"""

from __future__ import annotations

import numpy as np

try:
    import numba

    @numba.njit(cache=True, fastmath=True)
    def _fused_rhs(indptr, indices, data, phase, C, coef, out):  # pragma: no cover
        n, m = C.shape
        W = phase.reshape(-1, 1) * C
        for r in range(n):
            acc = np.zeros(m, dtype=np.complex128)
            for k in range(indptr[r], indptr[r + 1]):
                v = data[k]
                wc = W[indices[k]]
                for j in range(m):
                    acc[j] += v * wc[j]
            pc = coef * np.conj(phase[r])
            for j in range(m):
                out[r, j] = pc * acc[j]
        return out

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def make_rhs_kernel(vop):
    """(phase, C, coef) -> coef * conj(phase) o (V @ (phase o C)).

    `phase` is the interaction-picture diagonal exp(-i E (t - t0)); `coef`
    carries i * U_peak * Lambda^2(t).
    """
    if HAVE_NUMBA:
        indptr, indices, data = vop.indptr, vop.indices, vop.data

        def kernel(phase, C, coef, out):
            return _fused_rhs(indptr, indices, data, phase, C, coef, out)

    else:

        def kernel(phase, C, coef, out):
            W = phase[:, None] * C
            W = vop @ W
            np.multiply(coef * np.conj(phase)[:, None], W, out=out)
            return out

    return kernel
