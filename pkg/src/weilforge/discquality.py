"""Compliant representations of odd integers and their certified quality.

A monic integer polynomial Q(z) is a compliant representation of the odd
integer m when Q(2) = m and Q = (z - 1)^deg Q modulo 2, with every
complex root of Q in the open disc |z| < sqrt(2).  Its quality is the
minimum of |Q| on the circle |z| = sqrt(2); we carry the integer
``quality7``, a certified lower bound for 7 * quality (exact floor when
computed directly).

The disc condition is decided exactly by a Schur-Cohn positive
definiteness test; quality uses the circle norm R(t) with
R(z + 2/z) = Q(z) Q(2/z), minimized over t in [-2 sqrt 2, 2 sqrt 2].
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, comb, gcd, isqrt

from .exactpoly import (
    IntPoly,
    NotDivisible,
    X,
    exact_div,
    poly_gcd_rational,
    quad_reduce,
    squarefree_part,
)
from .family import naf
from .kernels import eval_homogeneous
from .realroots import SturmChain, isolate

SRC_EXHAUST = 'exhaust'
SRC_COMPOSE = 'compose'
SRC_EXTEND = 'extend'
SOURCES = (SRC_EXHAUST, SRC_COMPOSE, SRC_EXTEND)

EXACT_THRESHOLD = 56  # below this, composite bounds are replaced by exact values
EXTEND_MIN = 49  # quality7 needed before multiplying by z^4 - 1
TABLE_LIMIT = 50000
Z4M1 = IntPoly((-1, 0, 0, 0, 1))
_T2M8 = IntPoly((-8, 0, 1))


class NotCompliant(ValueError):
    pass


class QualityUnderflow(ValueError):
    pass


class QualityTooLow(ValueError):
    pass


# -- disc test -------------------------------------------------------------

def circle_norm(q: IntPoly) -> IntPoly:
    """R(t) = 2A^2 + tAB + B^2 where Q = A(t) z + B(t) mod z^2 - tz + 2."""
    a, b = quad_reduce(q)
    return a * a * 2 + X * a * b + b * b


def _disc_poly(q: IntPoly) -> IntPoly:
    """H(v) = G(2v) where G(z^2) = (-1)^deg Q(z) Q(-z)."""
    qq = q * q.scale_var(-1)
    sign = -1 if (q.degree or 0) % 2 else 1
    return IntPoly(sign * c << (i // 2) for i, c in enumerate(qq.coeffs) if i % 2 == 0)


def schur_cohn_minors(h: IntPoly) -> list[int]:
    """Leading principal minors of the Schur-Cohn form of H, by Bareiss.

    Stops at the first nonpositive minor (it is the last entry returned).
    """
    hc = h.coeffs
    n = len(hc) - 1
    if n <= 0:
        return []
    rc = hc[::-1]
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            s = 0
            for t in range(i + 1):
                s += rc[i - t] * rc[j - t] - hc[i - t] * hc[j - t]
            a[i][j] = a[j][i] = s
    minors = []
    prev = 1
    for k in range(n):
        piv = a[k][k]
        minors.append(piv)
        if piv <= 0:
            break
        rowk = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * piv - aik * rowk[j]) // prev
        prev = piv
    return minors


def roots_in_disc(q: IntPoly) -> bool:
    """True iff every complex root of Q satisfies |z| < sqrt(2)."""
    if q.is_zero():
        raise ValueError('zero polynomial')
    if not q.degree:
        return True
    h = _disc_poly(q)
    minors = schur_cohn_minors(h)
    return len(minors) == h.degree and all(mi > 0 for mi in minors)


def mod2_ok(q: IntPoly) -> bool:
    """Q = (z - 1)^deg Q coefficientwise mod 2, i.e. c_i = C(deg, i) mod 2."""
    d = q.degree or 0
    return all((c - comb(d, i)) % 2 == 0 for i, c in enumerate(q.coeffs))


def is_compliant(q: IntPoly, m: int | None = None) -> bool:
    if q.is_zero() or not q.is_monic():
        return False
    if m is not None and q(2) != m:
        return False
    return q(2) > 0 and mod2_ok(q) and roots_in_disc(q)


# -- quality ---------------------------------------------------------------

def _floor_sqrt_x_plus_y_sqrt2(x: int, y: int) -> int:
    """floor(sqrt(x + y*sqrt(2))) for x + y*sqrt(2) >= 0."""

    def le(qq: int) -> bool:  # qq^2 <= x + y sqrt2
        lhs = qq * qq - x
        if y >= 0:
            return lhs <= 0 or lhs * lhs <= 2 * y * y
        return lhs < 0 and lhs * lhs >= 2 * y * y

    ys = isqrt(2 * y * y)
    approx = x + (ys if y >= 0 else -ys)
    q0 = isqrt(max(approx, 0))
    while q0 > 0 and not le(q0):
        q0 -= 1
    while le(q0 + 1):
        q0 += 1
    return q0


def _abs_bound(p: IntPoly, radius: Fraction) -> Fraction:
    """Upper bound for |P(t)| on |t| <= radius."""
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * radius + abs(c)
    return acc


# dyadic brackets around 2*sqrt(2): 2896/1024 < 2 sqrt 2 < 2897/1024
_EDGE_LO = Fraction(2896, 1024)
_EDGE_HI = Fraction(2897, 1024)


def _edge_brackets(chain: SturmChain):
    lo, hi = _EDGE_LO, _EDGE_HI
    for _ in range(400):
        if chain.count(lo, hi) == 0 and chain.count(-hi, -lo) == 0:
            return lo, hi
        mid = (lo + hi) / 2
        if mid * mid < 8:
            lo = mid
        else:
            hi = mid
    raise RuntimeError('could not clear the edge brackets')


def _critical_floor(r49: IntPoly, d_sf: IntPoly, m2: int, l: Fraction, r: Fraction) -> int:
    """floor(sqrt(S(theta))) for S = 49 R and theta the unique root of d_sf in [l, r].

    theta is a critical point of S, so |S(theta) - S(e)| <= m2 (e - theta)^2 / 2
    for either endpoint e, where m2 bounds |S''| on the interval.  Works over
    a common denominator: l = lo/den, r = hi/den.
    """
    sc, dc = r49.coeffs, d_sf.coeffs
    deg = len(sc) - 1
    if l == r:
        v = r49(l)
        return isqrt(max(v.numerator // v.denominator, 0))
    den = l.denominator * r.denominator // gcd(l.denominator, r.denominator)
    lo, hi = l.numerator * (den // l.denominator), r.numerator * (den // r.denominator)
    s_l = _sign(eval_homogeneous(dc, lo, den))
    seeded = _seed_bracket(dc, lo, hi, den, s_l)
    if seeded is not None:
        lo, hi, den = seeded
    for it in range(400):
        dpow = den ** deg
        sl = eval_homogeneous(sc, lo, den)
        sr = eval_homogeneous(sc, hi, den)
        # err * den^deg = m2 (hi - lo)^2 den^(deg - 2) / 2, rounded up
        w = hi - lo
        num = m2 * w * w * dpow
        errd = -((-num) // (2 * den * den))
        lower = max(sl, sr) - errd
        upper = min(sl, sr) + errd
        lo_q = isqrt(lower // dpow) if lower > 0 else 0
        hi_q = isqrt(upper // dpow) if upper > 0 else 0
        if lo_q == hi_q:
            return lo_q
        if it >= 24 and it % 8 == 0 and hi_q * hi_q * dpow >= lower:
            # S(theta) may equal a perfect square exactly
            g = poly_gcd_rational(d_sf, r49 - hi_q * hi_q)
            if g.degree:
                fl, fr = Fraction(lo, den), Fraction(hi, den)
                if SturmChain(g).count(fl, fr) or g.sign_at(fl) == 0:
                    return hi_q
        lo, hi, den = 2 * lo, 2 * hi, 2 * den
        mid = (lo + hi) // 2
        s = _sign(eval_homogeneous(dc, mid, den))
        if s == 0:
            return _critical_floor(r49, d_sf, m2, Fraction(mid, den), Fraction(mid, den))
        if s == s_l:
            lo = mid
        else:
            hi = mid
    raise RuntimeError('quality refinement did not converge')


def _seed_bracket(dc, lo: int, hi: int, den: int, s_l: int):
    """Shrink [lo/den, hi/den] around its root using a float Newton guess.

    The guess is only a proposal: the returned bracket is accepted after
    exact sign checks at both of its (dyadic) endpoints.
    """
    try:
        a, b = lo / den, hi / den
        x = (a + b) / 2
        fc = [float(c) for c in dc]
        dfc = [i * c for i, c in enumerate(fc)][1:]
        for _ in range(60):
            fx = dfx = 0.0
            for c in reversed(fc):
                fx = fx * x + c
            for c in reversed(dfc):
                dfx = dfx * x + c
            if dfx == 0.0:
                return None
            nx = x - fx / dfx
            if not a <= nx <= b:
                nx = (a + b) / 2 if not a <= x <= b else x
                break
            if nx == x:
                break
            x = nx
    except (OverflowError, ZeroDivisionError):
        return None
    delta = max(abs(x), 1.0) * 2.0 ** -44
    fl, fr = Fraction(x - delta), Fraction(x + delta)
    if not (Fraction(lo, den) <= fl and fr <= Fraction(hi, den)):
        return None
    d2 = fl.denominator * fr.denominator // gcd(fl.denominator, fr.denominator)
    nlo, nhi = fl.numerator * (d2 // fl.denominator), fr.numerator * (d2 // fr.denominator)
    if _sign(eval_homogeneous(dc, nlo, d2)) == s_l and _sign(eval_homogeneous(dc, nhi, d2)) == -s_l:
        return nlo, nhi, d2
    return None


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def quality7_unchecked(q: IntPoly) -> int:
    """floor(7 * min |Q| on |z| = sqrt 2), assuming Q has no root on the circle."""
    rr = circle_norm(q)
    r49 = rr * 49
    if not rr.degree:
        return isqrt(max(r49[0], 0))
    # endpoint values: R = alpha + beta t mod t^2 - 8
    _, rem = r49.divmod_monic(_T2M8)
    alpha, beta = rem[0], rem[1]
    best = min(_floor_sqrt_x_plus_y_sqrt2(alpha, 2 * beta),
               _floor_sqrt_x_plus_y_sqrt2(alpha, -2 * beta))
    dr = r49.derivative()
    if dr.is_zero():
        return best
    d_sf = squarefree_part(dr)
    while d_sf.degree and d_sf.degree >= 2:
        try:
            d_sf = exact_div(d_sf, _T2M8)
        except NotDivisible:
            break
    if not d_sf.degree:
        return best
    chain = SturmChain(d_sf)
    lo, _ = _edge_brackets(chain)
    m2 = ceil(_abs_bound(dr.derivative(), _EDGE_HI))
    for l, r in isolate(d_sf, -lo, lo, chain):
        best = min(best, _critical_floor(r49, d_sf, m2, l, r))
        if best == 0:
            break
    return best


def quality7(q: IntPoly) -> int:
    """Largest integer at most 7 * min{|Q(z)| : |z| = sqrt 2}, for compliant-disc Q."""
    if not roots_in_disc(q):
        raise NotCompliant('Q has a root outside the open disc |z| < sqrt 2')
    return quality7_unchecked(q)


# -- representations -------------------------------------------------------

@dataclass(frozen=True)
class CompliantRep:
    m: int
    q: IntPoly
    quality7: int
    src: str = SRC_EXHAUST

    def better_than(self, other: CompliantRep | None) -> bool:
        """Canonical preference: quality7, then lower degree, then coefficients."""
        if other is None:
            return True
        if self.quality7 != other.quality7:
            return self.quality7 > other.quality7
        return self.q.sort_key() < other.q.sort_key()

    def to_record(self) -> dict:
        return {'m': self.m, 'coeffs': list(self.q.coeffs),
                'quality7': self.quality7, 'src': self.src}

    @classmethod
    def from_record(cls, rec: dict) -> CompliantRep:
        return cls(int(rec['m']), IntPoly(int(c) for c in rec['coeffs']),
                   int(rec['quality7']), rec.get('src', SRC_EXHAUST))

    def problems(self, exact: bool = True) -> list[str]:
        out = []
        q = self.q
        if q.is_zero() or not q.is_monic():
            out.append('Q is not monic')
            return out
        if self.m < 1 or self.m % 2 == 0:
            out.append('m must be odd and positive')
        if q(2) != self.m:
            out.append('Q(2) != m')
        if not mod2_ok(q):
            out.append('Q is not (z-1)^deg mod 2')
        if self.src not in SOURCES:
            out.append(f'unknown source {self.src!r}')
        if self.quality7 < 0:
            out.append('negative quality7')
        if exact:
            if not roots_in_disc(q):
                out.append('Q has a root outside |z| < sqrt 2')
            elif quality7_unchecked(q) < self.quality7:
                out.append('claimed quality7 exceeds the certified value')
        return out


def _exhaust_degree(n: int) -> dict[int, CompliantRep]:
    ranges = [range(-3, 4, 2) if comb(n, i) % 2 else range(-2, 3, 2) for i in range(n)]
    best: dict[int, CompliantRep] = {}
    for t in product(*ranges):
        q = IntPoly(t + (1,))
        if not roots_in_disc(q):
            continue
        rep = CompliantRep(q(2), q, quality7_unchecked(q), SRC_EXHAUST)
        if rep.better_than(best.get(rep.m)):
            best[rep.m] = rep
    return best


def exhaust_low_degree(max_degree: int = 7, jobs: int = 1) -> dict[int, CompliantRep]:
    """Best compliant representation per m among monic Q of degree 1..7, |c_i| <= 3."""
    degrees = list(range(1, max_degree + 1))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_exhaust_degree, degrees))
    else:
        parts = [_exhaust_degree(n) for n in degrees]
    table: dict[int, CompliantRep] = {}
    for part in parts:
        for m, rep in part.items():
            if rep.better_than(table.get(m)):
                table[m] = rep
    return dict(sorted(table.items()))


def compose_bound(q1: int, q2: int, c: int) -> int:
    """Certified quality7 of Q1*Q2 + c from the factors' quality7 values."""
    return (q1 * q2) // 7 - 7 * abs(c)


def compose_certified(r1: CompliantRep, r2: CompliantRep, c: int) -> CompliantRep | None:
    """Q1*Q2 + c with a certified quality7, or None if it is not compliant.

    The cheap bound is used when it reaches the exact-recomputation
    threshold; otherwise compliance (when the bound does not already imply
    it) and quality7 are computed exactly.
    """
    bound = compose_bound(r1.quality7, r2.quality7, c)
    q = r1.q * r2.q + c
    if bound >= EXACT_THRESHOLD:
        return CompliantRep(r1.m * r2.m + c, q, bound, SRC_COMPOSE)
    if r1.quality7 * r2.quality7 <= 49 * abs(c) and not roots_in_disc(q):
        return None
    return CompliantRep(r1.m * r2.m + c, q, max(bound, quality7_unchecked(q)), SRC_COMPOSE)


def compose_reps(r1: CompliantRep, r2: CompliantRep, c: int) -> CompliantRep:
    if r1.quality7 * r2.quality7 <= 49 * abs(c):
        raise QualityUnderflow(f'qualities {r1.quality7}, {r2.quality7} do not cover |c| = {abs(c)}')
    q = r1.q * r2.q + c
    bound = compose_bound(r1.quality7, r2.quality7, c)
    if bound < EXACT_THRESHOLD:
        # the positive certified bound already rules out roots on or outside the circle
        bound = max(bound, quality7_unchecked(q))
    return CompliantRep(r1.m * r2.m + c, q, bound, SRC_COMPOSE)


def extend_rep(r: CompliantRep, c: int) -> CompliantRep:
    """(z^4 - 1) Q + c, a representation of 15 m + c with quality7 >= 3 q - 7|c|."""
    if c % 2 or abs(c) > 14:
        raise ValueError('c must be even with |c| <= 14')
    if r.quality7 < EXTEND_MIN:
        raise QualityTooLow(f'quality7 {r.quality7} < {EXTEND_MIN}')
    return CompliantRep(15 * r.m + c, Z4M1 * r.q + c, 3 * r.quality7 - 7 * abs(c), SRC_EXTEND)


# -- table -----------------------------------------------------------------

class RepTable(dict):
    """Mapping m -> CompliantRep for odd m."""

    max_m: int = 0
    exhaust_count: int | None = None  # distinct m found by the exhaust, when built here

    def records(self) -> list[dict]:
        return [self[m].to_record() for m in sorted(self)]

    def dumps(self) -> str:
        return ''.join(json.dumps(r) + '\n' for r in self.records())

    def save(self, path) -> None:
        tmp = f'{path}.tmp'
        with open(tmp, 'w', encoding='utf-8') as fh:
            fh.write(self.dumps())
        os.replace(tmp, path)

    @classmethod
    def loads(cls, text: str) -> RepTable:
        t = cls()
        for line in text.splitlines():
            if line.strip():
                rep = CompliantRep.from_record(json.loads(line))
                t[rep.m] = rep
        t.max_m = max(t, default=0)
        return t

    @classmethod
    def load(cls, path) -> RepTable:
        with open(path, encoding='utf-8') as fh:
            return cls.loads(fh.read())

    def problems(self, exact: bool = True, jobs: int = 1) -> dict[int, list[str]]:
        items = sorted(self.items())
        if jobs > 1 and len(items) > 256:
            chunks = [(items[i::jobs * 4], exact) for i in range(jobs * 4)]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_problems_worker, chunks))
        else:
            parts = [_problems_worker((items, exact))]
        return dict(sorted((m, p) for part in parts for m, p in part.items()))


def _problems_worker(args) -> dict[int, list[str]]:
    items, exact = args
    out = {}
    for m, rep in items:
        p = rep.problems(exact)
        if rep.m != m:
            p.append('key does not match m')
        if p:
            out[m] = p
    return out


def _nearest_odd_pair(m: int, m1: int) -> list[int]:
    # odd m2 nearest to m/m1: 2*floor((m/m1 + 1)/2) - 1 and 2*ceil(...) - 1
    num, den = m + m1, 2 * m1
    lo = num // den
    hi = -((-num) // den)
    return sorted({2 * lo - 1, 2 * hi - 1})


def best_composite(m: int, table: dict[int, CompliantRep],
                   seed: CompliantRep | None = None) -> CompliantRep | None:
    """Best representation of m from products of two smaller table entries."""
    best = seed
    if best is not None and best.quality7 >= EXACT_THRESHOLD:
        return best
    for m1 in range(3, ceil_sqrt(m), 2):
        r1 = table.get(m1)
        if r1 is None:
            continue
        for m2 in _nearest_odd_pair(m, m1):
            if not (1 <= m2 < m):
                continue
            r2 = table.get(m2)
            if r2 is None:
                continue
            c = m - m1 * m2
            cand = compose_certified(r1, r2, c)
            if cand is not None and cand.better_than(best):
                best = cand
        if best is not None and best.quality7 >= EXACT_THRESHOLD:
            break
    return best


def ceil_sqrt(m: int) -> int:
    r = isqrt(m)
    return r if r * r == m else r + 1


def _block_worker(args):
    ms, snapshot = args
    table = snapshot
    out = []
    for m in ms:
        rep = best_composite(m, table, table.get(m))
        out.append(rep)
    return out


def build_table(max_m: int, jobs: int = 1, base: RepTable | None = None,
                progress=None) -> RepTable:
    """Compliant representations for odd m <= max_m.

    Entries for m depend only on entries below m / 3 + 2 and below sqrt(m),
    so the odd m in [M, 3M - 6) can be processed independently once every
    entry below M is final.  Results do not depend on ``jobs``.
    """
    if max_m < 1:
        raise ValueError('max_m must be positive')
    table = RepTable()
    start = 1
    if base is not None and base:
        for m in sorted(base):
            if m <= max_m:
                table[m] = base[m]
        start = base.max_m + 1 if base.max_m else 1
        if start % 2 == 0:
            start += 1
    exhaust = exhaust_low_degree(jobs=jobs)
    for m, rep in exhaust.items():
        if start <= m <= max_m:
            table[m] = rep
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        lo = start
        while lo <= max_m:
            hi = min(max_m + 1, max(lo + 2, 3 * lo - 6))
            ms = list(range(lo if lo % 2 else lo + 1, hi, 2))
            if pool is None or len(ms) < 64:
                for m in ms:
                    rep = best_composite(m, table, table.get(m))
                    if rep is not None:
                        table[m] = rep
            else:
                nchunk = jobs * 4
                chunks = [ms[i::nchunk] for i in range(nchunk)]
                snap = {m: r for m, r in table.items() if m < lo}
                pending = {m: table.get(m) for m in ms}
                for chunk, reps in zip(chunks, pool.map(
                        _block_worker, [(c, {**snap, **{m: pending[m] for m in c if pending[m]}})
                                        for c in chunks])):
                    for m, rep in zip(chunk, reps):
                        if rep is not None:
                            table[m] = rep
            if progress:
                progress(hi - 1, len(table))
            lo = hi
    finally:
        if pool is not None:
            pool.shutdown()
    result = RepTable(sorted(table.items()))
    result.max_m = max_m
    result.exhaust_count = sum(1 for m in exhaust if m <= max_m)
    return result


def naf_compliant(m: int) -> CompliantRep | None:
    """The NAF digit polynomial of m, when it is itself compliant."""
    q = naf(m).poly()
    if m % 2 and mod2_ok(q) and roots_in_disc(q):
        return CompliantRep(m, q, quality7_unchecked(q), SRC_EXHAUST)
    return None


def compliant_rep(m: int, table: dict[int, CompliantRep] | None = None) -> CompliantRep:
    """A compliant representation of the odd integer m >= 1."""
    if m < 1 or m % 2 == 0:
        raise ValueError('m must be odd and positive')
    fast = naf_compliant(m)
    if fast is not None:
        return fast
    table = table if table is not None else {}
    if m in table:
        return table[m]
    if m >= TABLE_LIMIT:
        m1 = 2 * ((m + 15) // 30) - 1  # nearest odd integer to m / 15
        c = m - 15 * m1
        return extend_rep(compliant_rep(m1, table), c)
    raise KeyError(f'no compliant representation of {m} in the table; build a table covering it')


def sampled_soundness(rep: CompliantRep, samples: int = 1000,
                      eps: Fraction = Fraction(1, 1000)) -> bool:
    """R(t) >= (quality7/7)^2 at evenly spaced rationals in [-2 sqrt 2 + eps, 2 sqrt 2 - eps].

    The edge uses the rational lower bound 2896/1024 for 2 sqrt 2.  Points
    are t_i = num_i / den with a common denominator, so each test is one
    homogeneous integer evaluation.
    """
    if samples < 2:
        raise ValueError('need at least two samples')
    rr = (circle_norm(rep.q) * 49).coeffs
    edge = _EDGE_LO - eps
    steps = samples - 1
    den = edge.denominator * steps
    target = rep.quality7 * rep.quality7 * den ** (len(rr) - 1)
    for i in range(samples):
        num = edge.numerator * (2 * i - steps)
        if eval_homogeneous(rr, num, den) < target:
            return False
    return True


def verify_quality_claim(rep: CompliantRep) -> bool:
    return roots_in_disc(rep.q) and quality7_unchecked(rep.q) >= rep.quality7


__all__ = [
    'CompliantRep',
    'NotCompliant',
    'QualityTooLow',
    'QualityUnderflow',
    'RepTable',
    'build_table',
    'circle_norm',
    'compliant_rep',
    'compose_reps',
    'exhaust_low_degree',
    'extend_rep',
    'is_compliant',
    'mod2_ok',
    'quality7',
    'roots_in_disc',
    'sampled_soundness',
    'schur_cohn_minors',
]

