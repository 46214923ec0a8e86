"""Pure-Python implementations of the inner loops.

The compiled module ``weilforge._ckernels`` exposes the same functions
with the same signatures; :mod:`weilforge.kernels` picks one at import.
"""

from __future__ import annotations


def poly_mul(a, b):
    """Product of two nonempty ascending coefficient sequences."""
    if len(a) < len(b):
        a, b = b, a
    c = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj:
            for i, ai in enumerate(a):
                c[i + j] += ai * bj
    return c


def eval_homogeneous(coeffs, p, q):
    """Sum of c_i p^i q^(d-i); equals q^d P(p/q)."""
    n = len(coeffs)
    if n == 0:
        return 0
    acc = coeffs[-1]
    qp = q
    for i in range(n - 2, -1, -1):
        acc = acc * p + coeffs[i] * qp
        qp *= q
    return acc


def divmod_unit(a, d):
    """Division by a polynomial with leading coefficient +-1.

    Returns (quotient, remainder) as trimmed tuples.
    """
    r = list(a)
    dd = len(d) - 1
    lc = d[-1]
    if len(r) - 1 < dd:
        while r and r[-1] == 0:
            r.pop()
        return (), tuple(r)
    q = [0] * (len(r) - dd)
    for i in range(len(r) - 1, dd - 1, -1):
        c = r[i] if lc == 1 else -r[i]
        if c:
            q[i - dd] = c
            off = i - dd
            for j in range(dd + 1):
                r[off + j] -= c * d[j]
    del r[dd:]
    while r and r[-1] == 0:
        r.pop()
    while q and q[-1] == 0:
        q.pop()
    return tuple(q), tuple(r)


def sign_variations(chain, p, q):
    """Sign changes of a polynomial sequence at p/q (q > 0), zeros skipped."""
    count = 0
    last = 0
    for coeffs in chain:
        v = eval_homogeneous(coeffs, p, q)
        if v:
            s = 1 if v > 0 else -1
            if last and s != last:
                count += 1
            last = s
    return count


def subset_candidates(lo1, hi1, lo2, hi2, scale, max_size):
    """Subsets of roots whose power sums p1, p2 may both be integers.

    ``lo1[i] <= scale*r_i <= hi1[i]`` and ``lo2[i] <= scale*r_i^2 <= hi2[i]``
    are integer enclosures.  Yields index tuples (ascending) of size
    1..max_size for which the enclosures of scale*sum(r) and
    scale*sum(r^2) each contain a multiple of ``scale``.
    """
    n = len(lo1)
    out = []
    idx = [0] * max_size

    def has_multiple(lo, hi):
        # some integer t with lo <= t*scale <= hi
        return -((-lo) // scale) * scale <= hi

    def rec(start, depth, s1lo, s1hi, s2lo, s2hi):
        for i in range(start, n):
            a1, b1 = s1lo + lo1[i], s1hi + hi1[i]
            a2, b2 = s2lo + lo2[i], s2hi + hi2[i]
            idx[depth] = i
            if has_multiple(a1, b1) and has_multiple(a2, b2):
                out.append(tuple(idx[:depth + 1]))
            if depth + 1 < max_size:
                rec(i + 1, depth + 1, a1, b1, a2, b2)

    if max_size > 0:
        rec(0, 0, 0, 0, 0, 0)
    return out
