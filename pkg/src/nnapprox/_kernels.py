"""Hot numeric kernels: batched network evaluation and greedy covering.

Both kernels exist twice, as numba @njit functions and as pure-numpy
fallbacks.  The active backend is chosen by the NNAPPROX_BACKEND environment
variable ("numba", "numpy", or "auto"; default auto picks numba when it
imports).  benchmarks/bench_kernels.py compares the two paths.

Layers are passed in a packed block-diagonal form (see network.Network):
    layer_ptr[l]  : first block of layer l in the block table
    block_meta[b] : (row_offset, col_offset, rows, cols) of block b
    block_ptr[b]  : start of block b's row-major data in block_data
"""

import os

import numpy as np

ACT_IDENTITY = 0
ACT_RELU = 1
ACT_ABS = 2

_ENV = os.environ.get("NNAPPROX_BACKEND", "auto").strip().lower()
if _ENV not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"NNAPPROX_BACKEND={_ENV!r} not understood (use auto, numba or numpy)"
    )

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False
    if _ENV == "numba":
        raise RuntimeError("NNAPPROX_BACKEND=numba but numba is not importable")

USE_NUMBA = HAVE_NUMBA and _ENV != "numpy"

_threads = os.environ.get("NNAPPROX_THREADS")
if _threads and HAVE_NUMBA:
    numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# batched chain evaluation


def _eval_chain_np(layer_ptr, block_meta, block_ptr, block_data, widths, x, act):
    n_layers = len(layer_ptr) - 1
    cur = x
    for l in range(n_layers):
        rows = widths[l + 1]
        out = np.zeros((x.shape[0], rows))
        for b in range(layer_ptr[l], layer_ptr[l + 1]):
            ro, co, r, c = block_meta[b]
            blk = block_data[block_ptr[b] : block_ptr[b + 1]].reshape(r, c)
            out[:, ro : ro + r] = cur[:, co : co + c] @ blk.T
        if l < n_layers - 1:
            if act == ACT_ABS:
                np.abs(out, out=out)
            elif act == ACT_RELU:
                np.maximum(out, 0.0, out=out)
        cur = out
    return cur


if HAVE_NUMBA:

    _TILE = 256

    @njit(cache=True)
    def _eval_chain_nb(layer_ptr, block_meta, block_ptr, block_data, widths, x, act):
        n_points = x.shape[0]
        n_layers = len(layer_ptr) - 1
        max_w = 0
        for w in widths:
            max_w = max(max_w, w)
        out = np.empty((n_points, widths[n_layers]))
        cur = np.empty((max_w, _TILE))
        nxt = np.empty((max_w, _TILE))
        for start in range(0, n_points, _TILE):
            tile = min(_TILE, n_points - start)
            for c in range(widths[0]):
                for t in range(tile):
                    cur[c, t] = x[start + t, c]
            for l in range(n_layers):
                rows = widths[l + 1]
                for r_ in range(rows):
                    for t in range(tile):
                        nxt[r_, t] = 0.0
                for b in range(layer_ptr[l], layer_ptr[l + 1]):
                    ro = block_meta[b, 0]
                    co = block_meta[b, 1]
                    r = block_meta[b, 2]
                    c = block_meta[b, 3]
                    base = block_ptr[b]
                    for rr in range(r):
                        off = base + rr * c
                        for cc in range(c):
                            w = block_data[off + cc]
                            if w != 0.0:
                                for t in range(tile):
                                    nxt[ro + rr, t] += w * cur[co + cc, t]
                if l < n_layers - 1:
                    if act == ACT_ABS:
                        for r_ in range(rows):
                            for t in range(tile):
                                nxt[r_, t] = abs(nxt[r_, t])
                    elif act == ACT_RELU:
                        for r_ in range(rows):
                            for t in range(tile):
                                if nxt[r_, t] < 0.0:
                                    nxt[r_, t] = 0.0
                tmp = cur
                cur = nxt
                nxt = tmp
            for c in range(widths[n_layers]):
                for t in range(tile):
                    out[start + t, c] = cur[c, t]
        return out


def eval_chain(packed, x, act_code, backend=None):
    """Evaluate a packed layer chain on a batch x of shape (n_points, p0)."""
    layer_ptr, block_meta, block_ptr, block_data, widths = packed
    use = USE_NUMBA if backend is None else backend == "numba"
    if use and HAVE_NUMBA:
        return _eval_chain_nb(
            layer_ptr, block_meta, block_ptr, block_data, widths, x, act_code
        )
    return _eval_chain_np(
        layer_ptr, block_meta, block_ptr, block_data, widths, x, act_code
    )


# ---------------------------------------------------------------------------
# greedy covering in the empirical l2 metric


def _greedy_cover_np(v, eps2_sum):
    centers = []
    for i in range(v.shape[0]):
        covered = False
        for j in centers:
            d = v[i] - v[j]
            if d @ d < eps2_sum:
                covered = True
                break
        if not covered:
            centers.append(i)
    return np.asarray(centers, dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def _greedy_cover_nb(v, eps2_sum):
        n_vec, n_pts = v.shape
        centers = np.empty(n_vec, dtype=np.int64)
        k = 0
        for i in range(n_vec):
            covered = False
            for j in range(k):
                cj = centers[j]
                s = 0.0
                for c in range(n_pts):
                    d = v[i, c] - v[cj, c]
                    s += d * d
                    if s >= eps2_sum:
                        break
                if s < eps2_sum:
                    covered = True
                    break
            if not covered:
                centers[k] = i
                k += 1
        return centers[:k]


def greedy_cover(vectors, eps, backend=None):
    """Indices of a greedy eps-net over rows of `vectors` in the metric
    dist(u, v) = sqrt(mean((u - v)^2)); a row is covered when dist < eps."""
    v = np.ascontiguousarray(vectors, dtype=np.float64)
    eps2_sum = eps * eps * v.shape[1]
    use = USE_NUMBA if backend is None else backend == "numba"
    if use and HAVE_NUMBA:
        return _greedy_cover_nb(v, eps2_sum)
    return _greedy_cover_np(v, eps2_sum)
