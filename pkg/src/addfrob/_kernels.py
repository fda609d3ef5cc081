"""Table-driven inner loops over a finite field.

Field elements are small integers; arithmetic goes through the lookup tables
built in :mod:`addfrob.gf`.  Every kernel has a numba version and a pure-numpy
version.  The numba path is used unless ``ADDFROB_NUMBA=0`` is set in the
environment (or numba fails to import).
"""

import os

import numpy as np

_WANT_NUMBA = os.environ.get("ADDFROB_NUMBA", "1").lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# numpy reference implementations


def np_poly_mul(a, b, add, mul):
    la, lb = a.shape[0], b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(la + lb - 1, dtype=np.int64)
    for i in range(la):
        ai = a[i]
        if ai:
            out[i:i + lb] = add[out[i:i + lb], mul[ai, b]]
    return out


def np_poly_divmod(a, b, add, mul, neg, inv):
    la, lb = a.shape[0], b.shape[0]
    if la < lb:
        return np.zeros(0, dtype=np.int64), a.copy()
    r = a.copy()
    q = np.zeros(la - lb + 1, dtype=np.int64)
    lead_inv = inv[b[lb - 1]]
    nb = neg[b]
    for k in range(la - lb, -1, -1):
        c = r[k + lb - 1]
        if c:
            c = mul[c, lead_inv]
            q[k] = c
            r[k:k + lb] = add[r[k:k + lb], mul[c, nb]]
    return q, r[:lb - 1]


def _np_trim(a):
    n = a.shape[0]
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def np_poly_gcd(a, b, add, mul, neg, inv):
    """Monic gcd by the Euclidean algorithm (zero if both are zero)."""
    a, b = _np_trim(a), _np_trim(b)
    while b.shape[0]:
        a, b = b, _np_trim(np_poly_divmod(a, b, add, mul, neg, inv)[1])
    if a.shape[0] == 0:
        return a.copy()
    return mul[inv[a[-1]], a]


def np_rref(m, add, mul, neg, inv):
    """Reduced row echelon form in place; returns the pivot columns."""
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.shape[0] == 0:
            continue
        k = r + nz[0]
        if k != r:
            tmp = m[r].copy()
            m[r] = m[k]
            m[k] = tmp
        m[r] = mul[inv[m[r, c]], m[r]]
        for i in range(rows):
            if i != r and m[i, c]:
                f = neg[m[i, c]]
                m[i] = add[m[i], mul[f, m[r]]]
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=np.int64)


def np_pair_extent(t1, t2, add, chunk=64):
    """Highest and lowest nonzero index of t1[i] + t2[j] for every pair (-1 for zero).

    Rows of t1/t2 are coefficient vectors of one common length.
    """
    n1, n2, length = t1.shape[0], t2.shape[0], t1.shape[1]
    high = np.empty((n1, n2), dtype=np.int64)
    low = np.empty((n1, n2), dtype=np.int64)
    for start in range(0, n1, chunk):
        s = add[t1[start:start + chunk, None, :], t2[None, :, :]]
        nz = s != 0
        anynz = nz.any(axis=2)
        last = length - 1 - np.argmax(nz[:, :, ::-1], axis=2)
        first = np.argmax(nz, axis=2)
        high[start:start + chunk] = np.where(anynz, last, -1)
        low[start:start + chunk] = np.where(anynz, first, -1)
    return high, low


# ---------------------------------------------------------------------------
# numba versions

if HAVE_NUMBA:

    @njit(cache=True)
    def nb_poly_mul(a, b, add, mul):
        la, lb = a.shape[0], b.shape[0]
        if la == 0 or lb == 0:
            return np.zeros(0, dtype=np.int64)
        out = np.zeros(la + lb - 1, dtype=np.int64)
        for i in range(la):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(lb):
                bj = b[j]
                if bj != 0:
                    out[i + j] = add[out[i + j], mul[ai, bj]]
        return out

    @njit(cache=True)
    def nb_poly_divmod(a, b, add, mul, neg, inv):
        la, lb = a.shape[0], b.shape[0]
        if la < lb:
            return np.zeros(0, dtype=np.int64), a.copy()
        r = a.copy()
        q = np.zeros(la - lb + 1, dtype=np.int64)
        lead_inv = inv[b[lb - 1]]
        for k in range(la - lb, -1, -1):
            c = r[k + lb - 1]
            if c != 0:
                c = mul[c, lead_inv]
                q[k] = c
                for j in range(lb):
                    if b[j] != 0:
                        r[k + j] = add[r[k + j], mul[c, neg[b[j]]]]
        return q, r[:lb - 1].copy()

    @njit(cache=True)
    def _nb_deg(a, n):
        while n > 0 and a[n - 1] == 0:
            n -= 1
        return n

    @njit(cache=True)
    def nb_poly_gcd(a, b, add, mul, neg, inv):
        # in-place Euclid on two buffers; la/lb are the current lengths
        x = a.copy()
        y = b.copy()
        la = _nb_deg(x, x.shape[0])
        lb = _nb_deg(y, y.shape[0])
        while lb > 0:
            lead_inv = inv[y[lb - 1]]
            for k in range(la - lb, -1, -1):
                c = x[k + lb - 1]
                if c != 0:
                    c = mul[c, lead_inv]
                    for j in range(lb):
                        if y[j] != 0:
                            x[k + j] = add[x[k + j], mul[c, neg[y[j]]]]
            la = _nb_deg(x, min(la, lb - 1))
            x, y = y, x
            la, lb = lb, la
        out = x[:la].copy()
        if la > 0:
            f = inv[out[la - 1]]
            for j in range(la):
                out[j] = mul[f, out[j]]
        return out

    @njit(cache=True)
    def nb_rref(m, add, mul, neg, inv):
        rows, cols = m.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        npiv = 0
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            k = -1
            for i in range(r, rows):
                if m[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(cols):
                    t = m[r, j]
                    m[r, j] = m[k, j]
                    m[k, j] = t
            f = inv[m[r, c]]
            for j in range(cols):
                m[r, j] = mul[f, m[r, j]]
            for i in range(rows):
                if i != r and m[i, c] != 0:
                    g = neg[m[i, c]]
                    for j in range(cols):
                        if m[r, j] != 0:
                            m[i, j] = add[m[i, j], mul[g, m[r, j]]]
            pivots[npiv] = c
            npiv += 1
            r += 1
        return pivots[:npiv].copy()

    @njit(cache=True)
    def nb_pair_extent(t1, t2, add):
        n1, n2, length = t1.shape[0], t2.shape[0], t1.shape[1]
        high = np.empty((n1, n2), dtype=np.int64)
        low = np.empty((n1, n2), dtype=np.int64)
        for i in range(n1):
            for j in range(n2):
                h = -1
                for k in range(length - 1, -1, -1):
                    if add[t1[i, k], t2[j, k]] != 0:
                        h = k
                        break
                lo = -1
                if h >= 0:
                    for k in range(h + 1):
                        if add[t1[i, k], t2[j, k]] != 0:
                            lo = k
                            break
                high[i, j] = h
                low[i, j] = lo
        return high, low

    poly_mul = nb_poly_mul
    poly_divmod = nb_poly_divmod
    poly_gcd = nb_poly_gcd
    rref = nb_rref
    pair_extent = nb_pair_extent
else:
    poly_mul = np_poly_mul
    poly_divmod = np_poly_divmod
    poly_gcd = np_poly_gcd
    rref = np_rref
    pair_extent = np_pair_extent


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
