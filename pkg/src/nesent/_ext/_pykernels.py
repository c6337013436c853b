"""Pure-Python twin of ``_ckernels.pyx``.

Both modules perform the same floating-point operations in the same order,
so a given input produces bit-identical weights on either backend.
"""

import numpy as np

RESCALE_BELOW = 1e-6


def pegasos_train(indptr, indices, y, order, reg, dim):
    """Stochastic subgradient descent on the L2-regularized hinge loss.

    ``indptr``/``indices`` hold binary rows in CSR layout, ``y`` is +1/-1 per
    row and ``order`` lists the row visited at each step (all epochs
    concatenated). Step ``t`` (1-based) uses rate ``1 / (reg * t)``. The
    weight vector is stored as ``scale * v`` so the shrink step is O(1).
    """
    v = [0.0] * dim
    scale = 1.0
    t = 0
    indptr = indptr.tolist()
    indices = indices.tolist()
    y = y.tolist()
    for row in order.tolist():
        t += 1
        eta = 1.0 / (reg * t)
        lo, hi = indptr[row], indptr[row + 1]
        dot = 0.0
        for k in range(lo, hi):
            dot += v[indices[k]]
        score = scale * dot
        scale = scale * (1.0 - 1.0 / t)
        if scale == 0.0:
            for j in range(dim):
                v[j] = 0.0
            scale = 1.0
        label = y[row]
        if label * score < 1.0:
            coef = eta * label / scale
            for k in range(lo, hi):
                v[indices[k]] += coef
        if scale < RESCALE_BELOW:
            for j in range(dim):
                v[j] = v[j] * scale
            scale = 1.0
    return np.array([x * scale for x in v], dtype=np.float64)


def sparse_margins(indptr, indices, w, bias):
    """``w . x + bias`` for each binary CSR row, summed in index order."""
    w = w.tolist()
    indices = indices.tolist()
    ptr = indptr.tolist()
    out = np.empty(len(ptr) - 1, dtype=np.float64)
    for r in range(len(ptr) - 1):
        acc = 0.0
        for k in range(ptr[r], ptr[r + 1]):
            acc += w[indices[k]]
        out[r] = acc + bias
    return out
