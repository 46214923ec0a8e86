"""Polynomial families built from Chebyshev recurrences, and signed binary digits.

``f(n)`` is x^n T_n(x + 1/x - 4); ``g(n, k)`` is the k-fold smoothing
(x - 1)^-k sum_j C(k, j) f(n + j), always a polynomial of degree 2n + k.
A :class:`BinaryRep` of m drives the signed combinations
``sum_i (-1)^(i+k) a_i g(n, i)``, which have constant term (-1)^k m.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from math import comb

from .exactpoly import ONE, IntPoly, X, exact_div

NAF = 'naf'
NAF_VARIANT = 'naf-v2ge4-variant'
COMPLIANT = 'compliant'
KINDS = (NAF, NAF_VARIANT, COMPLIANT)

_X2_4X_1 = IntPoly((1, -4, 1))
_X2 = IntPoly((0, 0, 1))
_XM1 = IntPoly((-1, 1))
_XM3 = IntPoly((-3, 1))


class RequiresPositiveN(ValueError):
    pass


class WrongValuation(ValueError):
    pass


class InfiniteValuation(ValueError):
    pass


def v2(x: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if x == 0:
        raise InfiniteValuation('v2(0) is infinite')
    x = abs(x)
    return (x & -x).bit_length() - 1


@cache
def chebyshev_T(n: int) -> IntPoly:
    """Dickson-normalized Chebyshev polynomial: T_n(2 cos t) = 2 cos(n t)."""
    if n < 0:
        raise ValueError('n must be nonnegative')
    if n == 0:
        return IntPoly.const(2)
    if n == 1:
        return X
    return X * chebyshev_T(n - 1) - chebyshev_T(n - 2)


@cache
def f(n: int) -> IntPoly:
    if n < 0:
        raise ValueError('n must be nonnegative')
    if n == 0:
        return IntPoly.const(2)
    if n == 1:
        return _X2_4X_1
    for j in range(2, n - 1, 64):  # warm the cache to keep recursion shallow
        f(j)
    return _X2_4X_1 * f(n - 1) - _X2 * f(n - 2)


@cache
def g(n: int, k: int) -> IntPoly:
    """g_{n,k} via the first smoothing step, then the three-term recurrence in k."""
    if n < 0 or k < 0:
        raise ValueError('n and k must be nonnegative')
    if k == 0:
        return f(n)
    if k == 1:
        return exact_div(f(n) + f(n + 1), _XM1)
    return _XM3 * g(n, k - 1) - g(n, k - 2) * 2


def g_binomial(n: int, k: int) -> IntPoly:
    """g_{n,k} straight from the binomial definition (cross-check only)."""
    s = sum((f(n + j) * comb(k, j) for j in range(k + 1)), IntPoly())
    return exact_div(s, _XM1 ** k)


def w(k: int) -> int:
    """(1+i)^k + (1-i)^k, by w_k = 2 w_{k-1} - 2 w_{k-2}."""
    a, b = 2, 2
    for _ in range(k):
        a, b = b, 2 * b - 2 * a
    return a


@dataclass(frozen=True)
class BinaryRep:
    """Signed-digit representation m = sum a_i 2^i with a_k = 1."""

    m: int
    digits: tuple[int, ...]
    kind: str

    @property
    def k(self) -> int:
        return len(self.digits) - 1

    def poly(self) -> IntPoly:
        return IntPoly(self.digits)

    def problems(self) -> list[str]:
        """Violated invariants (empty when the representation is sound)."""
        out = []
        d = self.digits
        if self.kind not in KINDS:
            out.append(f'unknown kind {self.kind!r}')
        if not d or d[-1] != 1:
            out.append('top digit is not 1')
        if sum(a << i for i, a in enumerate(d)) != self.m:
            out.append('digits do not sum to m')
        if self.kind == NAF:
            if any(a not in (-1, 0, 1) for a in d):
                out.append('NAF digit outside {-1,0,1}')
            if any(d[i] and d[i + 1] for i in range(len(d) - 1)):
                out.append('adjacent nonzero NAF digits')
            if self.m >= 1 and self.k != k_of(self.m):
                out.append('NAF length differs from k(m)')
        elif self.kind == NAF_VARIANT:
            if self.m < 1 or v2(self.m) < 4:
                out.append('variant needs v2(m) >= 4')
            else:
                base = naf(self.m).digits
                if d != (2, -1, 0, 0) + base[4:]:
                    out.append('variant digits do not match NAF tail')
        elif self.kind == COMPLIANT:
            q = IntPoly(d)
            ref = _XM1 ** q.degree if q.degree else ONE
            if any((a - b) % 2 for a, b in zip(d, ref.coeffs)):
                out.append('digit polynomial is not (z-1)^k mod 2')
        return out


def k_of(m: int) -> int:
    """Top NAF index floor(log2(3m)) - 1."""
    return (3 * m).bit_length() - 2


def naf(m: int) -> BinaryRep:
    """Nonadjacent form of m >= 1 (digits least significant first)."""
    if m < 1:
        raise ValueError('m must be positive')
    digits = []
    r = m
    while r:
        if r & 1:
            a = 2 - (r & 3)  # +1 if r = 1 mod 4, -1 if r = 3 mod 4
            r -= a
        else:
            a = 0
        digits.append(a)
        r >>= 1
    rep = BinaryRep(m, tuple(digits), NAF)
    assert rep.k == k_of(m)
    return rep


def naf_variant(m: int) -> BinaryRep:
    """NAF of m with digits (0,0,0,0) at the bottom replaced by (2,-1,0,0).

    The replacement adds 2*1 - 1*2 = 0, so the digits still sum to m; the
    signed combination of these digits is h_{n,m} + (-1)^k (2 g_{n,0} + g_{n,1}).
    """
    if m < 1 or v2(m) < 4:
        raise WrongValuation(f'v2({m}) < 4')
    base = naf(m).digits
    return BinaryRep(m, (2, -1, 0, 0) + base[4:], NAF_VARIANT)


def compliant_binary_rep(coeffs) -> BinaryRep:
    q = IntPoly(coeffs)
    return BinaryRep(q(2), q.coeffs, COMPLIANT)


def signed_combination(rep: BinaryRep, n: int) -> IntPoly:
    """sum_i (-1)^(i+k) a_i g(n, i); monic of degree 2n + k."""
    if n < 1:
        raise RequiresPositiveN('signed combinations need n >= 1')
    k = rep.k
    acc = IntPoly()
    for i, a in enumerate(rep.digits):
        if a:
            acc = acc + g(n, i) * (a if (i + k) % 2 == 0 else -a)
    return acc


def h(n: int, m: int) -> IntPoly:
    return signed_combination(naf(m), n)


def h_prime(m: int, n: int) -> IntPoly:
    return signed_combination(naf_variant(m), n)


def mod2_vanishing_order(digits) -> int:
    """Order at x = 0 of sum a_i (x+1)^i over F_2 (digits taken mod 2)."""
    acc = [0]
    for i, a in enumerate(digits):
        if a % 2:
            row = [comb(i, j) & 1 for j in range(i + 1)]
            if len(row) > len(acc):
                acc += [0] * (len(row) - len(acc))
            for j, b in enumerate(row):
                acc[j] ^= b
    for j, b in enumerate(acc):
        if b:
            return j
    raise ValueError('digit polynomial vanishes mod 2')
