"""Pure numpy versions of the compiled kernels in ``_ckernels.pyx``."""

import numpy as np

_CHUNK = 1 << 20


def zeta_main_sums(t, nterms):
    t = np.ascontiguousarray(t, dtype=np.float64)
    nterms = np.ascontiguousarray(nterms, dtype=np.int64)
    out = np.empty(t.shape[0], dtype=np.complex128)
    for i, (ti, ni) in enumerate(zip(t, nterms)):
        n = np.arange(1, int(ni), dtype=np.float64)
        lg = np.log(n)
        out[i] = np.sum(np.exp(-0.5 * lg) * np.exp(-1j * (ti * lg)))
    return out


def half_sums(values):
    out = np.zeros(1, dtype=np.int64)
    for v in np.asarray(values, dtype=np.int64):
        out = np.concatenate((out - v, out, out + v))
    return out


def closest_pair(a_sorted, b, skip_a, skip_b):
    a_sorted = np.asarray(a_sorted, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    na = a_sorted.shape[0]
    best, best_i, best_j = -1, -1, -1
    for start in range(0, b.shape[0], _CHUNK):
        bb = b[start:start + _CHUNK]
        pos = np.searchsorted(a_sorted, -bb)
        for off in (-2, -1, 0, 1):
            idx = pos + off
            ok = (idx >= 0) & (idx < na)
            jj = np.nonzero(ok)[0]
            ii = idx[ok]
            vals = np.abs(a_sorted[ii] + bb[jj])
            trivial = (ii == skip_a) & (jj + start == skip_b)
            vals = np.where(trivial, np.iinfo(np.int64).max, vals)
            if vals.size == 0:
                continue
            k = int(np.argmin(vals))
            if vals[k] != np.iinfo(np.int64).max and (best < 0 or vals[k] < best):
                best, best_i, best_j = int(vals[k]), int(ii[k]), int(jj[k]) + start
    return best, best_i, best_j


def pairs_within(a_sorted, b, bound):
    a_sorted = np.asarray(a_sorted, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    lo = np.searchsorted(a_sorted, -b - bound, side="left")
    hi = np.searchsorted(a_sorted, -b + bound, side="right")
    counts = hi - lo
    jb = np.repeat(np.arange(b.shape[0], dtype=np.int64), counts)
    first = np.repeat(lo, counts)
    offsets = np.arange(jb.shape[0], dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    return first + offsets, jb
