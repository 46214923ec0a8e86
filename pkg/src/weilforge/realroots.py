"""Exact real-root counting and location with Sturm sequences.

Counting convention: ``sturm_count(P, c, d)`` is the number of distinct
real roots in the half-open interval (c, d].

The target interval is [a, b] = [3 - 2*sqrt(2), 3 + 2*sqrt(2)], the two
roots of x^2 - 6x + 1.  Roots exactly at a or b are handled by dividing
out x^2 - 6x + 1 first; every other comparison is against rational
brackets of a and b, so no algebraic-number arithmetic is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import ceil, floor

from . import kernels
from .exactpoly import (
    ONE,
    IntPoly,
    NotDivisible,
    exact_div,
    is_squarefree,
    poly_gcd_rational,
    pseudo_rem,
    squarefree_part,
)

ENDPOINT_POLY = IntPoly((1, -6, 1))
MAX_BISECTIONS = 4000


class PreconditionViolated(ValueError):
    pass


class RefinementError(RuntimeError):
    """Iteration cap hit; indicates an internal error, not bad input."""


class SturmChain:
    """Sturm sequence of the squarefree part of a nonzero polynomial."""

    __slots__ = ('base', 'chain')

    def __init__(self, p: IntPoly):
        if p.is_zero():
            raise ValueError('Sturm chain of the zero polynomial')
        sf = squarefree_part(p)
        self.base = sf
        chain = [sf]
        if sf.degree:
            a, b = sf, sf.derivative().primitive()
            chain.append(b)
            while b.degree:
                r = -pseudo_rem(a, b)  # positive multiple of -rem(a, b)
                if r.is_zero():
                    break
                a, b = b, r.divide_content()
                chain.append(b)
        self.chain = tuple(q.coeffs for q in chain)

    def variations(self, x: Fraction) -> int:
        return kernels.sign_variations(self.chain, x.numerator, x.denominator)

    def count(self, c: Fraction, d: Fraction) -> int:
        """Distinct roots in (c, d]."""
        c, d = Fraction(c), Fraction(d)
        if c >= d:
            return 0
        return self.variations(c) - self.variations(d)

    def total_real(self) -> int:
        """Number of distinct real roots (sign pattern at -inf and +inf)."""
        lo = hi = 0
        last_lo = last_hi = 0
        for coeffs in self.chain:
            s_hi = 1 if coeffs[-1] > 0 else -1
            s_lo = s_hi if (len(coeffs) - 1) % 2 == 0 else -s_hi
            if last_hi and s_hi != last_hi:
                hi += 1
            if last_lo and s_lo != last_lo:
                lo += 1
            last_hi, last_lo = s_hi, s_lo
        return lo - hi


def sturm_count(p: IntPoly, c, d) -> int:
    """Number of distinct real roots of P in (c, d]."""
    return SturmChain(p).count(Fraction(c), Fraction(d))


def root_bound(p: IntPoly) -> Fraction:
    """Cauchy bound: every complex root has |z| < bound."""
    lc = abs(p.lc)
    m = max((abs(a) for a in p.coeffs[:-1]), default=0)
    return Fraction(m, lc) + 1


# -- the interval [a, b] ---------------------------------------------------

@dataclass(frozen=True)
class IntervalAB:
    """Rational brackets a_lo < a < a_hi and b_lo < b < b_hi."""

    a_lo: Fraction = Fraction(171, 1000)
    a_hi: Fraction = Fraction(172, 1000)
    b_lo: Fraction = Fraction(5828, 1000)
    b_hi: Fraction = Fraction(5829, 1000)

    def check(self) -> bool:
        e = ENDPOINT_POLY
        return (e.sign_at(self.a_lo) > 0 > e.sign_at(self.a_hi)
                and e.sign_at(self.b_lo) < 0 < e.sign_at(self.b_hi)
                and self.a_hi < self.b_lo)

    def refine_a(self) -> IntervalAB:
        mid = (self.a_lo + self.a_hi) / 2
        if ENDPOINT_POLY.sign_at(mid) > 0:
            return replace(self, a_lo=mid)
        return replace(self, a_hi=mid)

    def refine_b(self) -> IntervalAB:
        mid = (self.b_lo + self.b_hi) / 2
        if ENDPOINT_POLY.sign_at(mid) < 0:
            return replace(self, b_lo=mid)
        return replace(self, b_hi=mid)


AB = IntervalAB()


@dataclass(frozen=True)
class RootReport:
    poly: IntPoly
    endpoint_multiplicity: int
    all_in_interval: bool
    distinct: bool
    isolating_brackets: tuple[tuple[Fraction, Fraction], ...] = ()
    reduced: IntPoly = field(default=ONE, compare=False)
    ab: IntervalAB = field(default=AB, compare=False)


def _split_endpoints(p: IntPoly) -> tuple[int, IntPoly]:
    e = 0
    while p.degree and p.degree >= 2:
        try:
            q = exact_div(p, ENDPOINT_POLY)
        except NotDivisible:
            break
        p, e = q, e + 1
    return e, p


def _nonzero_bracket(base: IntPoly, chain: SturmChain, lo: Fraction, hi: Fraction):
    """Turn (lo, hi] holding exactly one root into a sign-change bracket."""
    s_hi = base.sign_at(hi)
    if s_hi == 0:
        return hi, hi
    for _ in range(MAX_BISECTIONS):
        s_lo = base.sign_at(lo)
        if s_lo and s_lo != s_hi:
            return lo, hi
        mid = (lo + hi) / 2
        s_mid = base.sign_at(mid)
        if s_mid == 0 and chain.count(lo, mid) == 1:
            return mid, mid
        if chain.count(mid, hi) == 1:
            lo = mid
        else:
            hi, s_hi = mid, s_mid
            if s_hi == 0:
                return hi, hi
    raise RefinementError('could not separate a root from a bracket endpoint')


def isolate(p: IntPoly, lo: Fraction, hi: Fraction, chain: SturmChain | None = None):
    """Isolating brackets for the distinct roots of P in (lo, hi], left to right.

    Each bracket is ``(l, r)`` with either l == r an exact root, or
    sign(P(l)) != sign(P(r)) and exactly one root strictly between.
    """
    chain = chain or SturmChain(p)
    base = chain.base
    out = []
    stack = [(Fraction(lo), Fraction(hi), chain.count(lo, hi))]
    steps = 0
    while stack:
        l, r, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(_nonzero_bracket(base, chain, l, r))
            continue
        steps += 1
        if steps > MAX_BISECTIONS * max(1, base.degree or 1):
            raise RefinementError('root isolation did not terminate')
        mid = (l + r) / 2
        n_left = chain.count(l, mid)
        stack.append((mid, r, n - n_left))
        stack.append((l, mid, n_left))
    out.sort()
    return out


def verify_roots_in_ab(p: IntPoly, require_distinct: bool = True,
                       ab: IntervalAB = AB) -> RootReport:
    """Decide whether every root of P is real and lies in [a, b]."""
    if p.is_zero():
        raise ValueError('zero polynomial')
    e, rest = _split_endpoints(p)
    if not rest.degree:
        return RootReport(p, e, True, e <= 1, (), rest, ab)
    chain = SturmChain(rest)
    for _ in range(MAX_BISECTIONS):
        if chain.count(ab.a_lo, ab.a_hi) == 0:
            break
        ab = ab.refine_a()
    else:
        raise RefinementError('bracket around a did not clear')
    for _ in range(MAX_BISECTIONS):
        if chain.count(ab.b_lo, ab.b_hi) == 0:
            break
        ab = ab.refine_b()
    else:
        raise RefinementError('bracket around b did not clear')
    sf_deg = chain.base.degree
    # roots in (a_lo, b_hi] avoid both cleared brackets, so they lie in (a, b)
    inside = chain.count(ab.a_lo, ab.b_hi)
    all_in = inside == sf_deg and chain.total_real() == sf_deg
    sqfree = sf_deg == rest.degree
    distinct = sqfree and e <= 1 and not (e == 1 and _shares_endpoint(rest))
    brackets: tuple = ()
    if all_in:
        brackets = tuple(isolate(chain.base, ab.a_lo, ab.b_hi, chain))
    return RootReport(p, e, all_in, distinct, brackets, rest, ab)


def _shares_endpoint(rest: IntPoly) -> bool:
    return (poly_gcd_rational(rest, ENDPOINT_POLY).degree or 0) > 0


def refine_bracket(base: IntPoly, l: Fraction, r: Fraction, width: Fraction):
    if l == r:
        return l, r
    s_l = base.sign_at(l)
    for _ in range(MAX_BISECTIONS):
        if r - l <= width:
            return l, r
        mid = (l + r) / 2
        s = base.sign_at(mid)
        if s == 0:
            return mid, mid
        if s == s_l:
            l = mid
        else:
            r = mid
    raise RefinementError('bracket refinement did not terminate')


def refine_root_brackets(report: RootReport, width_bound) -> RootReport:
    """Shrink every isolating bracket to width <= width_bound."""
    if not (report.all_in_interval and report.distinct):
        raise PreconditionViolated('report must be all-in-interval and distinct')
    w = Fraction(width_bound)
    base = report.reduced.primitive()
    new = tuple(refine_bracket(base, l, r, w) for l, r in report.isolating_brackets)
    if new == report.isolating_brackets:
        return report
    return replace(report, isolating_brackets=new)


# -- small factors ---------------------------------------------------------

def _floor_scaled(x: Fraction, scale: int) -> int:
    return (x.numerator * scale) // x.denominator


def _ceil_scaled(x: Fraction, scale: int) -> int:
    return -((-x.numerator * scale) // x.denominator)


def _product_enclosure(brackets):
    """Interval coefficients of prod (x - r_i); all r_i > 0 here.

    Coefficients alternate in sign: e_j of the roots times (-1)^j.  With
    positive roots the elementary symmetric functions are monotone in each
    root, so lower/upper bounds come from lower/upper endpoints.
    """
    lo = [Fraction(1)]
    hi = [Fraction(1)]
    for l, r in brackets:
        nlo = lo + [Fraction(0)]
        nhi = hi + [Fraction(0)]
        for j in range(len(lo)):
            nlo[j + 1] += l * lo[j]
            nhi[j + 1] += r * hi[j]
        lo, hi = nlo, nhi
    return lo, hi


def _integer_in(lo: Fraction, hi: Fraction):
    """Integers in [lo, hi]: returns (count, the integer when unique)."""
    a, b = ceil(lo), floor(hi)
    if a > b:
        return 0, None
    return b - a + 1, a


def _candidate_factor(brackets, base: IntPoly, idx):
    """Exact monic factor from a subset of roots, or None."""
    sub = [brackets[i] for i in idx]
    for _ in range(200):
        lo, hi = _product_enclosure(sub)
        e = []
        ambiguous = []
        for j in range(1, len(lo)):
            cnt, val = _integer_in(lo[j], hi[j])
            if cnt == 0:
                return None
            if cnt > 1:
                ambiguous.append(j)
            e.append(val)
        if not ambiguous:
            break
        sub = [refine_bracket(base, l, r, (r - l) / 4 or Fraction(0)) for l, r in sub]
    else:
        raise RefinementError('coefficient enclosure did not tighten')
    d = len(sub)
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    for j, ej in enumerate(e, start=1):
        coeffs[d - j] = ej if j % 2 == 0 else -ej
    cand = IntPoly(coeffs)
    try:
        exact_div(base, cand)
    except NotDivisible:
        return None
    return cand


def small_factor_split(p: IntPoly, max_deg: int, report: RootReport | None = None,
                       precision_bits: int = 48):
    """All monic irreducible factors of P of degree <= max_deg, and the cofactor.

    P must be monic and squarefree with all roots in [a, b].  Returns
    ``(factors, F)`` with P = F * prod(factors) and factors sorted by
    degree then coefficients.  Every monic integer factor of P of degree
    <= max_deg is a product of returned factors.
    """
    if not p.is_monic():
        raise PreconditionViolated('P must be monic')
    if not is_squarefree(p):
        raise PreconditionViolated('P must be squarefree')
    if max_deg >= (p.degree or 0):
        raise PreconditionViolated('max_deg must be below deg P')
    if max_deg <= 0:
        return [], p
    if report is None:
        report = verify_roots_in_ab(p)
    if not report.all_in_interval:
        raise PreconditionViolated('P must have all roots in [a, b]')

    factors: list[IntPoly] = []
    if report.endpoint_multiplicity and max_deg >= 2:
        factors.append(ENDPOINT_POLY)

    base = report.reduced
    brackets = list(report.isolating_brackets)
    n = len(brackets)
    if n:
        width = Fraction(1, 1 << precision_bits)
        brackets = [refine_bracket(base, l, r, width) for l, r in brackets]
        scale = 1 << precision_bits
        lo1 = [_floor_scaled(l, scale) - 1 for l, _ in brackets]
        hi1 = [_ceil_scaled(r, scale) + 1 for _, r in brackets]
        lo2 = [_floor_scaled(l * l, scale) - 1 for l, _ in brackets]
        hi2 = [_ceil_scaled(r * r, scale) + 1 for _, r in brackets]
        cands = kernels.subset_candidates(lo1, hi1, lo2, hi2, scale, min(max_deg, n))
        found: dict[frozenset, IntPoly] = {}
        for idx in sorted(cands, key=lambda t: (len(t), t)):
            cand = _candidate_factor(brackets, base, idx)
            if cand is not None:
                found[frozenset(idx)] = cand
        for key, cand in found.items():
            if not any(other < key for other in found):
                factors.append(cand)
    factors.sort(key=IntPoly.sort_key)
    cof = p
    for q in factors:
        cof = exact_div(cof, q)
    return factors, cof


def brute_force_subset_factors(p: IntPoly, max_deg: int) -> list[IntPoly]:
    """Irreducible small factors via plain subset enumeration (test oracle)."""
    report = verify_roots_in_ab(p)
    base = report.reduced.primitive()
    brackets = [refine_bracket(base, l, r, Fraction(1, 1 << 48))
                for l, r in report.isolating_brackets]
    divs = {}
    for size in range(1, max_deg + 1):
        for idx in combinations(range(len(brackets)), size):
            c = _candidate_factor(brackets, base, idx)
            if c is not None:
                divs[frozenset(idx)] = c
    keys = list(divs)
    return sorted((divs[k] for k in keys if not any(o < k for o in keys)),
                  key=IntPoly.sort_key)
