# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled percentile kernel (see _percentile_py for the reference
semantics; the two must stay bit-identical)."""

import numpy as np

BACKEND = "compiled"

_RULE_CODES = {"strict": 0, "weak": 1, "mid": 2}


def percentile_values(citations, rule):
    """Percentile value in [0, 100] for every count, input order preserved."""
    cdef Py_ssize_t n = len(citations)
    if n == 0:
        raise ValueError("empty reference set")
    cdef int code
    try:
        code = _RULE_CODES[rule]
    except KeyError:
        raise ValueError(f"unknown counting rule: {rule!r}") from None

    arr = np.ascontiguousarray(citations, dtype=np.int64)
    order_arr = np.ascontiguousarray(np.argsort(arr, kind="stable"), dtype=np.intp)
    out_arr = np.empty(n, dtype=np.float64)

    cdef long long[::1] c = arr
    cdef Py_ssize_t[::1] order = order_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i = 0, j, k
    cdef long long value
    cdef double score, dn = <double> n

    with nogil:
        while i < n:
            value = c[order[i]]
            j = i
            while j < n and c[order[j]] == value:
                j += 1
            if code == 0:
                score = (100.0 * <double> i) / dn
            elif code == 1:
                score = (100.0 * <double> j) / dn
            else:
                score = (50.0 * <double> (i + j)) / dn
            for k in range(i, j):
                out[order[k]] = score
            i = j
    return out_arr.tolist()


def class_counts(values, lowers):
    """Count values per rank class (closed below / open above, last class
    closed at the top). ``lowers`` is the ascending list of lower bounds."""
    cdef Py_ssize_t k = len(lowers)
    if k == 0:
        raise ValueError("scheme has no classes")
    v = np.ascontiguousarray(values, dtype=np.float64)
    lo = np.ascontiguousarray(lowers, dtype=np.float64)
    idx = np.searchsorted(lo, v, side="right") - 1
    if idx.size and int(idx.min()) < 0:
        bad = float(v[int(np.argmin(idx))])
        raise ValueError(f"value {bad} below the first class boundary {float(lo[0])}")
    return np.bincount(idx, minlength=k).tolist()
