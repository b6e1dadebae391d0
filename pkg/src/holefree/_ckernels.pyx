# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the functions in ``_pykernels``.

Planar routines run on C ``long long`` coordinates when every coordinate is
below ``2**30`` in absolute value. Then all differences fit in 31 bits and
every cross product in 63, so no step can overflow. Larger coordinates (the
embedded point sets have thousands of bits) go to the arbitrary-precision
code in ``_pykernels``. Results, witnesses and call counts are identical to
the pure-Python backend on every input.
"""

from libc.stdlib cimport malloc, free, calloc

import numpy as np

from holefree import _pykernels

BACKEND = "cython"

_SMALL = 1 << 30
_DENSE_LEVEL = 24

ctypedef long long ll


# ---------------------------------------------------------------- boxes

def box_violation(codes, level, ks, lo, hi):
    """Same contract as ``_pykernels.box_violation``; dense counting up to 2**24 boxes."""
    if level > _DENSE_LEVEL:
        return _pykernels.box_violation(codes, level, ks, lo, hi)
    n, s = codes.shape
    idx = np.zeros(n, dtype=np.uint64)
    for i in range(s):
        k = ks[i]
        idx = (idx << np.uint64(k)) | (codes[:, i] >> np.uint64(level - k))
    counts = np.bincount(idx.astype(np.int64), minlength=1 << level).astype(np.int64)
    cdef long long[::1] cv = counts
    cdef Py_ssize_t key, nb = 1 << level
    cdef long long c, clo = lo, chi = hi
    for key in range(nb):
        c = cv[key]
        if c == 0:
            if clo > 0:
                return key, 0
            continue
        if c < clo or c > chi:
            return key, int(c)
    return None


# ---------------------------------------------------------------- planar helpers

cdef inline ll _cross(const ll* X, const ll* Y, int o, int a, int b) nogil:
    return (X[a] - X[o]) * (Y[b] - Y[o]) - (Y[a] - Y[o]) * (X[b] - X[o])


cdef inline ll _cross_pt(const ll* X, const ll* Y, int o, int a, ll qx, ll qy) nogil:
    return (X[a] - X[o]) * (qy - Y[o]) - (Y[a] - Y[o]) * (qx - X[o])


cdef inline bint _less(const ll* X, const ll* Y, int i, int j) nogil:
    return X[i] < X[j] or (X[i] == X[j] and Y[i] < Y[j])


cdef int _hull(const ll* X, const ll* Y, const int* idx, int k, int* out, int* buf) nogil:
    """Strict CCW hull of ``idx[:k]`` (distinct indices) into ``out``; returns its size."""
    cdef int i, j, t, h, lo_n, up_n
    for i in range(k):
        buf[i] = idx[i]
    for i in range(1, k):
        t = buf[i]
        j = i - 1
        while j >= 0 and _less(X, Y, t, buf[j]):
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = t
    if k < 3:
        for i in range(k):
            out[i] = buf[i]
        return k
    # lower chain in out[0:], upper chain appended after it
    h = 0
    for i in range(k):
        while h >= 2 and _cross(X, Y, out[h - 2], out[h - 1], buf[i]) <= 0:
            h -= 1
        out[h] = buf[i]
        h += 1
    lo_n = h
    for i in range(k - 1, -1, -1):
        while h - lo_n >= 2 and _cross(X, Y, out[h - 2], out[h - 1], buf[i]) <= 0:
            h -= 1
        out[h] = buf[i]
        h += 1
    # drop the last point of each chain: out = lower[:-1] + upper[:-1]
    up_n = h - lo_n
    for i in range(up_n - 1):
        out[lo_n - 1 + i] = out[lo_n + i]
    return lo_n - 1 + up_n - 1


cdef inline bint _inside(const ll* X, const ll* Y, const int* hull, int h, int q) nogil:
    cdef int t
    for t in range(h):
        if _cross_pt(X, Y, hull[t], hull[(t + 1) % h], X[q], Y[q]) <= 0:
            return False
    return True


cdef bint _small(pts):
    for p in pts:
        if len(p) != 2:
            return False
        for v in p:
            if type(v) is not int or not -_SMALL < v < _SMALL:
                return False
    return True


cdef class _Planar:
    """Coordinates copied into C arrays, plus scratch space sized for ``n``."""
    cdef ll* X
    cdef ll* Y
    cdef int n
    cdef int* hull
    cdef int* buf
    cdef char* mark

    def __cinit__(self, pts):
        cdef int i
        self.n = len(pts)
        m = self.n if self.n > 0 else 1
        self.X = <ll*> malloc(m * sizeof(ll))
        self.Y = <ll*> malloc(m * sizeof(ll))
        self.hull = <int*> malloc(2 * m * sizeof(int) + 8)
        self.buf = <int*> malloc(m * sizeof(int) + 8)
        self.mark = <char*> calloc(m, 1)
        if not (self.X and self.Y and self.hull and self.buf and self.mark):
            raise MemoryError()
        for i in range(self.n):
            self.X[i] = pts[i][0]
            self.Y[i] = pts[i][1]

    def __dealloc__(self):
        free(self.X)
        free(self.Y)
        free(self.hull)
        free(self.buf)
        free(self.mark)


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull2d(pts, idx):
    """Strict convex hull (counter-clockwise, no collinear vertices) of ``pts[idx]``."""
    if not _small(pts):
        return _pykernels.hull2d(pts, idx)
    order = sorted(set(idx))
    cdef _Planar P = _Planar(pts)
    cdef int k = len(order), i, h
    cdef int* sel = <int*> malloc((k + 1) * sizeof(int))
    cdef int* out = <int*> malloc((2 * k + 2) * sizeof(int))
    cdef int* buf = <int*> malloc((k + 1) * sizeof(int))
    try:
        for i in range(k):
            sel[i] = order[i]
        h = _hull(P.X, P.Y, sel, k, out, buf)
        return [out[i] for i in range(h)]
    finally:
        free(sel)
        free(out)
        free(buf)


# ---------------------------------------------------------------- hole-free scan

def holefree_scan_2d(pts, ell, max_calls):
    """Same contract as ``_pykernels.holefree_scan_2d``."""
    if not _small(pts):
        return _pykernels.holefree_scan_2d(pts, ell, max_calls)
    cdef _Planar P = _Planar(pts)
    cdef int n = P.n, k = ell, i, j, h, v, status = 0
    cdef long long calls = 0, cap = max_calls
    cdef bint covered
    if k > n or k < 0:
        return 0, None, 0
    cdef int* S = <int*> malloc((k + 1) * sizeof(int))
    cdef char* inS = <char*> calloc(n + 1, 1)
    try:
        for i in range(k):
            S[i] = i
        while True:
            h = _hull(P.X, P.Y, S, k, P.hull, P.buf)
            covered = False
            if h >= 3:
                for i in range(h):
                    P.mark[P.hull[i]] = 1
                for i in range(k):
                    inS[S[i]] = 1
                for i in range(k):
                    v = S[i]
                    if P.mark[v]:
                        continue
                    calls += 1
                    if _inside(P.X, P.Y, P.hull, h, v):
                        covered = True
                        break
                if not covered:
                    for v in range(n):
                        if inS[v]:
                            continue
                        calls += 1
                        if _inside(P.X, P.Y, P.hull, h, v):
                            covered = True
                            break
                for i in range(h):
                    P.mark[P.hull[i]] = 0
                for i in range(k):
                    inS[S[i]] = 0
            else:
                calls += 1
            if not covered:
                status = 1
                break
            if calls > cap:
                status = 3
                break
            # next combination in lexicographic order
            i = k - 1
            while i >= 0 and S[i] == n - k + i:
                i -= 1
            if i < 0:
                break
            S[i] += 1
            for j in range(i + 1, k):
                S[j] = S[j - 1] + 1
        if status == 0:
            return 0, None, calls
        return status, tuple(S[i] for i in range(k)), calls
    finally:
        free(S)
        free(inS)


# ---------------------------------------------------------------- largest empty polygon

cdef inline int _ang_cmp(const ll* X, const ll* Y, int p, int i, int j) nogil:
    cdef ll c = _cross(X, Y, p, i, j)
    cdef ll di, dj
    if c > 0:
        return -1
    if c < 0:
        return 1
    di = (X[i] - X[p]) * (X[i] - X[p]) + (Y[i] - Y[p]) * (Y[i] - Y[p])
    dj = (X[j] - X[p]) * (X[j] - X[p]) + (Y[j] - Y[p]) * (Y[j] - Y[p])
    return (di > dj) - (di < dj)


cdef bint _triangle_empty(const ll* X, const ll* Y, int a, int b, int c, int n) nogil:
    cdef int q
    for q in range(n):
        if q == a or q == b or q == c:
            continue
        if (_cross_pt(X, Y, a, b, X[q], Y[q]) > 0 and _cross_pt(X, Y, b, c, X[q], Y[q]) > 0
                and _cross_pt(X, Y, c, a, X[q], Y[q]) > 0):
            return False
    return True


def empty_polygon_dp(pts):
    """Same contract as ``_pykernels.empty_polygon_dp``."""
    if not _small(pts):
        return _pykernels.empty_polygon_dp(pts)
    cdef _Planar P = _Planar(pts)
    cdef const ll* X = P.X
    cdef const ll* Y = P.Y
    cdef int n = P.n, p, i, j, t, k, a, b, c, val, par, x, y, best = 0, ln
    cdef long long calls = 0
    witness = ()
    if n < 3:
        return 0, (), 0
    cdef int* cand = <int*> malloc(n * sizeof(int))
    cdef int* f = <int*> malloc(n * n * sizeof(int))
    cdef int* parent = <int*> malloc(n * n * sizeof(int))
    cdef int* chain = <int*> malloc((n + 1) * sizeof(int))
    try:
        for p in range(n):
            k = 0
            for i in range(n):
                if Y[i] > Y[p] or (Y[i] == Y[p] and X[i] > X[p]):
                    # stable insertion by angle around p
                    j = k
                    while j > 0 and _ang_cmp(X, Y, p, i, cand[j - 1]) < 0:
                        cand[j] = cand[j - 1]
                        j -= 1
                    cand[j] = i
                    k += 1
            for i in range(k * k):
                f[i] = 0
                parent[i] = -1
            for b in range(k):
                for a in range(b):
                    if _cross(X, Y, p, cand[a], cand[b]) <= 0:
                        continue
                    calls += 1
                    if not _triangle_empty(X, Y, p, cand[a], cand[b], n):
                        continue
                    val = 3
                    par = -1
                    for c in range(a):
                        if f[a * k + c] + 1 > val and _cross(X, Y, cand[c], cand[a], cand[b]) > 0:
                            val = f[a * k + c] + 1
                            par = c
                    f[b * k + a] = val
                    parent[b * k + a] = par
                    if val > best:
                        chain[0] = cand[b]
                        chain[1] = cand[a]
                        ln = 2
                        x = b
                        y = a
                        while parent[x * k + y] != -1:
                            t = parent[x * k + y]
                            x = y
                            y = t
                            chain[ln] = cand[y]
                            ln += 1
                        chain[ln] = p
                        ln += 1
                        best = val
                        witness = tuple(sorted(chain[i] for i in range(ln)))
        return best, witness, calls
    finally:
        free(cand)
        free(f)
        free(parent)
        free(chain)


# ---------------------------------------------------------------- subset searches

cdef bint _convex_empty(_Planar P, const int* S, int k, bint need_empty, bint* convex):
    """Hull of ``S``; sets ``convex`` and, if asked, returns emptiness."""
    cdef int h = _hull(P.X, P.Y, S, k, P.hull, P.buf), i, q
    cdef bint empty = True
    convex[0] = h == k
    if not convex[0] or not need_empty:
        return False
    for i in range(k):
        P.mark[S[i]] = 1
    for q in range(P.n):
        if not P.mark[q] and _inside(P.X, P.Y, P.hull, h, q):
            empty = False
            break
    for i in range(k):
        P.mark[S[i]] = 0
    return empty


cdef struct _BruteState:
    int best
    long long calls
    long long max_calls
    int cap_size
    bint cap


cdef void _brute_rec(_Planar P, int* S, int depth, int start, _BruteState* st, int* best_set):
    cdef int j, k = depth + 1, i
    cdef bint convex, empty
    for j in range(start, P.n):
        if st.cap:
            return
        S[depth] = j
        st.calls += 1
        if st.calls > st.max_calls:
            st.cap = True
            return
        if k >= 3:
            if k > st.best:
                empty = _convex_empty(P, S, k, True, &convex)
            else:
                _convex_empty(P, S, k, False, &convex)
                empty = False
            if not convex:
                continue
            if k > st.best and empty:
                st.best = k
                for i in range(k):
                    best_set[i] = S[i]
                if k >= st.cap_size:
                    st.cap = True
                    return
        if k < st.cap_size:
            _brute_rec(P, S, depth + 1, j + 1, st, best_set)


def brute_max_hole_2d(pts, cap_size, max_calls):
    """Same contract as ``_pykernels.brute_max_hole_2d``."""
    if not _small(pts):
        return _pykernels.brute_max_hole_2d(pts, cap_size, max_calls)
    cdef _Planar P = _Planar(pts)
    cdef _BruteState st
    st.best = 0
    st.calls = 0
    st.max_calls = max_calls
    st.cap_size = min(cap_size, P.n + 1)
    st.cap = False
    cdef int* S = <int*> malloc((P.n + 2) * sizeof(int))
    cdef int* best_set = <int*> malloc((P.n + 2) * sizeof(int))
    try:
        _brute_rec(P, S, 0, 0, &st, best_set)
        return st.best, tuple(best_set[i] for i in range(st.best)), st.calls, bool(st.cap)
    finally:
        free(S)
        free(best_set)


cdef long long _count_rec(_Planar P, int* S, int depth, int start, int ell):
    cdef int j, k = depth + 1
    cdef long long total = 0
    cdef bint convex, empty
    for j in range(start, P.n):
        S[depth] = j
        if k >= 3:
            empty = _convex_empty(P, S, k, k == ell, &convex)
            if not convex:
                continue
        if k == ell:
            if k < 3:
                empty = True
            if empty:
                total += 1
        else:
            total += _count_rec(P, S, depth + 1, j + 1, ell)
    return total


def count_holes_2d(pts, ell):
    """Same contract as ``_pykernels.count_holes_2d``."""
    if not _small(pts):
        return _pykernels.count_holes_2d(pts, ell)
    if ell < 3:
        return 0
    cdef _Planar P = _Planar(pts)
    cdef int* S = <int*> malloc((ell + 1) * sizeof(int))
    try:
        return int(_count_rec(P, S, 0, 0, ell))
    finally:
        free(S)
