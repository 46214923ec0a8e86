# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; same functions and results as ``_kernels_py``.

Machine-word paths are taken only when an a-priori bound shows that no
intermediate value can leave int64; otherwise the loops run on Python
integers, which are exact at any size.
"""

from libc.stdlib cimport malloc, free

from . import _kernels_py

cdef long long I63 = (1 << 62)


cdef inline int _fits(object v, long long bound):
    return -bound < v < bound


def poly_mul(a, b):
    """Product of two nonempty ascending coefficient sequences."""
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    cdef long long ma = 0, mb = 0, x, y
    cdef long long *ca
    cdef long long *cb
    cdef long long *cc
    cdef list out
    if na < nb:
        a, b = b, a
        na, nb = nb, na
    # word path: |c_k| <= nb * max|a| * max|b| < 2^62
    for v in a:
        if not _fits(v, I63):
            return _kernels_py.poly_mul(a, b)
        x = v
        if x < 0:
            x = -x
        if x > ma:
            ma = x
    for v in b:
        if not _fits(v, I63):
            return _kernels_py.poly_mul(a, b)
        x = v
        if x < 0:
            x = -x
        if x > mb:
            mb = x
    if ma and mb and (ma > I63 // mb or ma * mb > I63 // nb):
        return _list_mul_obj(a, b)
    ca = <long long *> malloc(na * sizeof(long long))
    cb = <long long *> malloc(nb * sizeof(long long))
    cc = <long long *> malloc((na + nb - 1) * sizeof(long long))
    if not ca or not cb or not cc:
        free(ca); free(cb); free(cc)
        raise MemoryError()
    try:
        for i in range(na):
            ca[i] = a[i]
        for j in range(nb):
            cb[j] = b[j]
        for i in range(na + nb - 1):
            cc[i] = 0
        for j in range(nb):
            y = cb[j]
            if y:
                for i in range(na):
                    cc[i + j] += ca[i] * y
        out = [cc[i] for i in range(na + nb - 1)]
    finally:
        free(ca); free(cb); free(cc)
    return out


cdef list _list_mul_obj(a, b):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    cdef list c = [0] * (na + nb - 1)
    cdef list la = list(a)
    for j in range(nb):
        bj = b[j]
        if bj:
            for i in range(na):
                c[i + j] += la[i] * bj
    return c


def eval_homogeneous(coeffs, p, q):
    """Sum of c_i p^i q^(d-i); equals q^d P(p/q)."""
    cdef Py_ssize_t n = len(coeffs), i
    if n == 0:
        return 0
    acc = coeffs[n - 1]
    qp = q
    if q == 1:
        for i in range(n - 2, -1, -1):
            acc = acc * p + coeffs[i]
        return acc
    for i in range(n - 2, -1, -1):
        acc = acc * p + coeffs[i] * qp
        qp *= q
    return acc


def divmod_unit(a, d):
    """Division by a polynomial with leading coefficient +-1."""
    cdef Py_ssize_t dd = len(d) - 1, i, j, off
    cdef list r = list(a)
    cdef list dl = list(d)
    cdef list qq
    cdef int neg = d[dd] != 1
    if len(r) - 1 < dd:
        while r and r[len(r) - 1] == 0:
            r.pop()
        return (), tuple(r)
    qq = [0] * (len(r) - dd)
    for i in range(len(r) - 1, dd - 1, -1):
        c = -r[i] if neg else r[i]
        if c:
            off = i - dd
            qq[off] = c
            for j in range(dd + 1):
                if dl[j]:
                    r[off + j] -= c * dl[j]
    del r[dd:]
    while r and r[len(r) - 1] == 0:
        r.pop()
    while qq and qq[len(qq) - 1] == 0:
        qq.pop()
    return tuple(qq), tuple(r)


def sign_variations(chain, p, q):
    """Sign changes of a polynomial sequence at p/q (q > 0), zeros skipped."""
    cdef int count = 0, last = 0, s
    for coeffs in chain:
        v = eval_homogeneous(coeffs, p, q)
        if v:
            s = 1 if v > 0 else -1
            if last and s != last:
                count += 1
            last = s
    return count


cdef inline bint _has_multiple(long long lo, long long hi, long long scale):
    # smallest multiple of scale that is >= lo, compared with hi
    cdef long long t = lo // scale
    if t * scale < lo:
        t += 1
    return t * scale <= hi


cdef void _rec(long long *lo1, long long *hi1, long long *lo2, long long *hi2,
               Py_ssize_t n, Py_ssize_t start, int depth, int max_size,
               long long s1lo, long long s1hi, long long s2lo, long long s2hi,
               long long scale, int *idx, list out):
    cdef Py_ssize_t i
    cdef int t
    cdef long long a1, b1, a2, b2
    for i in range(start, n):
        a1 = s1lo + lo1[i]
        b1 = s1hi + hi1[i]
        a2 = s2lo + lo2[i]
        b2 = s2hi + hi2[i]
        idx[depth] = <int> i
        if _has_multiple(a1, b1, scale) and _has_multiple(a2, b2, scale):
            out.append(tuple([idx[t] for t in range(depth + 1)]))
        if depth + 1 < max_size:
            _rec(lo1, hi1, lo2, hi2, n, i + 1, depth + 1, max_size,
                 a1, b1, a2, b2, scale, idx, out)


def subset_candidates(lo1, hi1, lo2, hi2, scale, max_size):
    """Subsets of roots whose power sums p1, p2 may both be integers.

    Same contract as the pure-Python version.  The int64 path needs every
    partial sum to stay below 2^62; larger inputs use the fallback.
    """
    cdef Py_ssize_t n = len(lo1), i
    cdef int ms = max_size
    cdef long long bound
    cdef long long *buf
    cdef int *idx
    cdef list out = []
    if ms <= 0 or n == 0:
        return out
    if ms > n:
        ms = <int> n
    bound = I63 // ms
    for seq in (lo1, hi1, lo2, hi2):
        for v in seq:
            if not _fits(v, bound):
                return _kernels_py.subset_candidates(lo1, hi1, lo2, hi2, scale, max_size)
    if not (0 < scale < I63):
        return _kernels_py.subset_candidates(lo1, hi1, lo2, hi2, scale, max_size)
    buf = <long long *> malloc(4 * n * sizeof(long long))
    idx = <int *> malloc(ms * sizeof(int))
    if not buf or not idx:
        free(buf); free(idx)
        raise MemoryError()
    try:
        for i in range(n):
            buf[i] = lo1[i]
            buf[n + i] = hi1[i]
            buf[2 * n + i] = lo2[i]
            buf[3 * n + i] = hi2[i]
        _rec(buf, buf + n, buf + 2 * n, buf + 3 * n, n, 0, 0, ms,
             0, 0, 0, 0, scale, idx, out)
    finally:
        free(buf); free(idx)
    return out
