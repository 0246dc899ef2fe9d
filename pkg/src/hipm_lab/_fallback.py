"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and results; used when the extension is not built or when
``HIPM_LAB_PURE_PYTHON=1`` is set.
"""

import numpy as np


def w1_sorted(x1, w1, x2, w2):
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    xs = np.concatenate((x1, x2))
    dw = np.concatenate((np.asarray(w1, dtype=float), -np.asarray(w2, dtype=float)))
    order = np.argsort(xs, kind="stable")
    xs = xs[order]
    diff = np.cumsum(dw[order])
    return float(np.sum(np.abs(diff[:-1]) * np.diff(xs)))


def _uniform_width(W):
    k = W.shape[1]
    return bool(np.all(W == 1.0 / k))


def pairwise_w1(X1, W1, X2, W2):
    X1 = np.asarray(X1, dtype=float)
    X2 = np.asarray(X2, dtype=float)
    W1 = np.asarray(W1, dtype=float)
    W2 = np.asarray(W2, dtype=float)
    n1, n2 = X1.shape[0], X2.shape[0]
    out = np.empty((n1, n2))
    if X1.shape[1] == X2.shape[1] and _uniform_width(W1) and _uniform_width(W2):
        # equal-size uniform members: quantile functions share breakpoints
        for r in range(n1):
            out[r] = np.abs(X2 - X1[r]).mean(axis=1)
        return out
    k1, k2 = X1.shape[1], X2.shape[1]
    C1 = np.cumsum(W1, axis=1)
    C2 = np.cumsum(W2, axis=1)
    C1[:, -1] = 1.0
    C2[:, -1] = 1.0
    rows = np.arange(n2)[:, None]
    flat2 = (np.minimum(C2, 1.0) + 2.0 * rows).ravel()
    for r in range(n1):
        c1 = np.minimum(C1[r], 1.0)
        levels = np.sort(np.hstack((np.broadcast_to(c1, (n2, k1)), C2)), axis=1)
        levels = np.hstack((np.zeros((n2, 1)), np.minimum(levels, 1.0)))
        du = np.diff(levels, axis=1)
        mids = 0.5 * (levels[:, 1:] + levels[:, :-1])
        q1 = X1[r][np.minimum(np.searchsorted(c1, mids.ravel()), k1 - 1)]
        idx2 = np.searchsorted(flat2, (mids + 2.0 * rows).ravel()) - np.repeat(rows.ravel() * k2, k1 + k2)
        idx2 = np.clip(idx2, 0, k2 - 1) + np.repeat(rows.ravel() * k2, k1 + k2)
        q2 = X2.ravel()[idx2]
        out[r] = (np.abs(q1 - q2).reshape(n2, k1 + k2) * du).sum(axis=1)
    return out


def assignment(cost):
    C = np.asarray(cost, dtype=float)
    n = C.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used[1:]
            cur = C[i0 - 1] - u[i0] - v[1:]
            better = free & (cur < minv[1:])
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            masked = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            u[p[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    perm = np.empty(n, dtype=np.int64)
    perm[p[1:] - 1] = np.arange(n)
    return perm
