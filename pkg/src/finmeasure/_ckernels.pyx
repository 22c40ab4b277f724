# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the kernels in ``_pykernels``.

Values arrive as int64; the dispatcher in ``kernels`` only routes tables
here when every intermediate sum fits in a signed 64-bit integer.
"""

from array import array

cdef enum:
    MONOTONE = 0
    NULL_ADDITIVE = 1
    NULL_UNION = 2
    SUBADDITIVE = 3
    FINITELY_ADDITIVE = 4


def variation_table(vals, int n, long long emask):
    cdef long long[:] v = array("q", vals)
    out_arr = array("q", bytes(8 << n))
    cdef long long[:] out = out_arr
    cdef long long s = 0, low, rest, sub, best, cand
    while True:
        s = (s - emask) & emask
        if s == 0:
            break
        low = s & -s
        rest = s ^ low
        best = v[s]
        sub = rest
        while sub:
            sub = (sub - 1) & rest
            cand = v[sub | low] + out[rest ^ sub]
            if cand > best:
                best = cand
        out[s] = best
    return out_arr.tolist()


def first_violation(vals, int n, int kind):
    cdef long long[:] v = array("q", vals)
    cdef long long size = 1 << n
    cdef long long full = size - 1
    cdef long long a, b, s, comp, va, i, k
    cdef long long[:] nulls
    cdef long long nnull = 0

    if kind == MONOTONE:
        for a in range(size):
            va = v[a]
            if va == 0:
                continue
            comp = full ^ a
            s = 0
            while True:
                s = (s - comp) & comp
                if s == 0:
                    break
                if v[a | s] < va:
                    return a, a | s
        return None
    if kind == NULL_ADDITIVE or kind == NULL_UNION:
        nulls_arr = array("q", [b for b in range(size) if v[b] == 0])
        nulls = nulls_arr
        nnull = len(nulls_arr)
        if kind == NULL_ADDITIVE:
            for a in range(size):
                va = v[a]
                for i in range(nnull):
                    b = nulls[i]
                    if v[a | b] != va:
                        return a, b
        else:
            for k in range(nnull):
                a = nulls[k]
                for i in range(nnull):
                    b = nulls[i]
                    if v[a | b] != 0:
                        return a, b
        return None
    if kind == SUBADDITIVE:
        for a in range(size):
            va = v[a]
            for b in range(a, size):
                if v[a | b] > va + v[b]:
                    return a, b
        return None
    if kind == FINITELY_ADDITIVE:
        for a in range(size):
            va = v[a]
            comp = full ^ a
            s = 0
            while True:
                s = (s - comp) & comp
                if s == 0:
                    break
                if v[a | s] != va + v[s]:
                    return a, s
        return None
    raise ValueError(f"unknown property kind {kind}")


def atom_flags(vals, int n):
    cdef long long[:] v = array("q", vals)
    cdef long long size = 1 << n
    out = bytearray(size)
    cdef unsigned char[:] o = out
    cdef long long a, sub
    cdef int ok
    for a in range(1, size):
        if v[a] <= 0:
            continue
        ok = 1
        sub = a
        while sub:
            sub = (sub - 1) & a
            if sub == 0:
                break
            if v[sub] > 0 and v[a ^ sub] > 0:
                ok = 0
                break
        o[a] = ok
    return out
