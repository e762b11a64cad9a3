"""Reference implementations of the bit-row kernels.

A finite relation on n points is a list of n row masks; bit ``b`` of row ``a``
is set iff ``a R b``.  These functions are the fallback used when the compiled
extension is unavailable, and the oracle the compiled versions are tested
against.
"""

import numpy as np

# Upper bound on the number of argument-pair combinations materialised at once
# by apply_op_rows.
_CHUNK = 1 << 22


def compose_rows(r, s):
    out = []
    for row in r:
        acc = 0
        while row:
            low = row & -row
            acc |= s[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return out


def transitive_closure_rows(r):
    rows = list(r)
    n = len(rows)
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    return rows


def _pair_arrays(rows, n):
    xs, ys = [], []
    for a, row in enumerate(rows):
        while row:
            low = row & -row
            xs.append(a)
            ys.append(low.bit_length() - 1)
            row ^= low
    return np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64)


def apply_op_rows(table, n, arity, args):
    """Rows of {(w(a), w(b)) : a_j R_j b_j} for an operation table.

    ``table`` is the flattened row-major table (last argument fastest).
    """
    table = np.asarray(table, dtype=np.int64)
    out = [0] * n
    if arity == 0:
        if n:
            k = int(table[0])
            out[k] = 1 << k
        return out
    pairs = [_pair_arrays(rows, n) for rows in args]
    if any(len(xs) == 0 for xs, _ in pairs):
        return out
    # Collapse the leading arguments into prefix indices while the product stays
    # small, then finish the last argument in chunks.
    ix = np.zeros(1, dtype=np.int64)
    iy = np.zeros(1, dtype=np.int64)
    base = 1
    for xs, ys in pairs[:-1]:
        base *= n
        ix = (ix[:, None] * n + xs[None, :]).ravel()
        iy = (iy[:, None] * n + ys[None, :]).ravel()
        codes = np.unique(ix * base + iy)
        ix, iy = codes // base, codes % base
    lx, ly = pairs[-1]
    codes = set()
    step = max(1, _CHUNK // max(1, len(lx)))
    for start in range(0, len(ix), step):
        cx = (ix[start:start + step, None] * n + lx[None, :]).ravel()
        cy = (iy[start:start + step, None] * n + ly[None, :]).ravel()
        u = table[cx]
        v = table[cy]
        codes.update(np.unique(u * n + v).tolist())
    for c in codes:
        out[c // n] |= 1 << (c % n)
    return out
