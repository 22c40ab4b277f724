"""Pure-Python kernels over integer value tables indexed by block masks.

Every function here has a twin in ``_ckernels.pyx``; both must return
identical results.  ``vals[mask]`` is the (integer-scaled) value of the
measurable set whose blocks are the set bits of ``mask``.
"""

MONOTONE = 0
NULL_ADDITIVE = 1
NULL_UNION = 2
SUBADDITIVE = 3
FINITELY_ADDITIVE = 4


def variation_table(vals, n, emask):
    """Max over partitions of S of the sum of values, for every S within emask.

    Entries for masks not contained in ``emask`` are left at 0.
    """
    out = [0] * (1 << n)
    s = 0
    while True:
        s = (s - emask) & emask
        if s == 0:
            break
        low = s & -s
        rest = s ^ low
        best = vals[s]
        sub = rest
        while sub:
            sub = (sub - 1) & rest
            cand = vals[sub | low] + out[rest ^ sub]
            if cand > best:
                best = cand
        out[s] = best
    return out


def first_violation(vals, n, kind):
    """First (A, B) in lexicographic mask order violating property ``kind``."""
    size = 1 << n
    full = size - 1
    if kind == MONOTONE:
        for a in range(size):
            va = vals[a]
            if va == 0:
                continue
            comp = full ^ a
            s = 0
            while True:
                s = (s - comp) & comp
                if s == 0:
                    break
                if vals[a | s] < va:
                    return a, a | s
        return None
    if kind == NULL_ADDITIVE:
        nulls = [b for b in range(size) if vals[b] == 0]
        for a in range(size):
            va = vals[a]
            for b in nulls:
                if vals[a | b] != va:
                    return a, b
        return None
    if kind == NULL_UNION:
        nulls = [b for b in range(size) if vals[b] == 0]
        for a in nulls:
            for b in nulls:
                if vals[a | b] != 0:
                    return a, b
        return None
    if kind == SUBADDITIVE:
        # symmetric: the first violating A always has its first partner B >= A
        for a in range(size):
            va = vals[a]
            for b in range(a, size):
                if vals[a | b] > va + vals[b]:
                    return a, b
        return None
    if kind == FINITELY_ADDITIVE:
        for a in range(size):
            va = vals[a]
            comp = full ^ a
            s = 0
            while True:
                s = (s - comp) & comp
                if s == 0:
                    break
                if vals[a | s] != va + vals[s]:
                    return a, s
        return None
    raise ValueError(f"unknown property kind {kind}")


def atom_flags(vals, n):
    """bytearray with 1 at every mask that is an atom of the table."""
    size = 1 << n
    out = bytearray(size)
    for a in range(1, size):
        va = vals[a]
        if va <= 0:
            continue
        ok = 1
        sub = a
        while sub:
            sub = (sub - 1) & a
            if sub == 0:
                break
            if vals[sub] > 0 and vals[a ^ sub] > 0:
                ok = 0
                break
        out[a] = ok
    return out
