"""Exact univariate polynomial arithmetic over the integers.

Polynomials are dense coefficient tuples in ascending order: the
polynomial c_0 + c_1 x + ... + c_d x^d corresponds to ``(c_0, ..., c_d)``
with ``c_d != 0``.  The zero polynomial is the empty tuple.  Rational
numbers are :class:`fractions.Fraction` throughout (exported as ``Rat``).

Nothing in this module touches floating point.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from fractions import Fraction
from math import gcd

from . import kernels

Rat = Fraction


class NotDivisible(ArithmeticError):
    """Raised by :func:`exact_div` when the remainder is nonzero."""


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPoly:
    """Immutable dense polynomial with integer coefficients."""

    __slots__ = ('_hash', 'coeffs')

    def __init__(self, coeffs: Iterable[int] = ()):
        c = _trim(int(a) for a in coeffs)
        object.__setattr__(self, 'coeffs', c)
        object.__setattr__(self, '_hash', None)

    def __setattr__(self, name, value):
        raise AttributeError('IntPoly is immutable')

    def __reduce__(self):
        return (IntPoly, (self.coeffs,))

    @classmethod
    def _raw(cls, coeffs: tuple[int, ...]) -> IntPoly:
        # coeffs must already be trimmed ints
        p = object.__new__(cls)
        object.__setattr__(p, 'coeffs', coeffs)
        object.__setattr__(p, '_hash', None)
        return p

    @classmethod
    def const(cls, c: int) -> IntPoly:
        return cls._raw((c,) if c else ())

    @classmethod
    def x(cls) -> IntPoly:
        return cls._raw((0, 1))

    @classmethod
    def monomial(cls, n: int, c: int = 1) -> IntPoly:
        return cls._raw((0,) * n + (c,)) if c else cls._raw(())

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> IntPoly:
        p = cls.const(1)
        for r in roots:
            p = p * cls._raw((-r, 1) if r else (0, 1))
        return p

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int | None:
        """Degree, or ``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lc == 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        if i < 0:
            raise IndexError('negative coefficient index')
        return 0

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == ((other,) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(('IntPoly', self.coeffs))
            object.__setattr__(self, '_hash', h)
        return h

    def sort_key(self) -> tuple:
        """Canonical order: by degree, then lexicographic coefficients."""
        return (len(self.coeffs), self.coeffs)

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(other) -> IntPoly:
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly.const(other)
        return NotImplemented

    def __add__(self, other) -> IntPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, bi in enumerate(b):
            c[i] += bi
        return IntPoly._raw(_trim(c))

    __radd__ = __add__

    def __neg__(self) -> IntPoly:
        return IntPoly._raw(tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> IntPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> IntPoly:
        return (-self) + other

    def __mul__(self, other) -> IntPoly:
        if isinstance(other, int):
            if other == 0:
                return IntPoly._raw(())
            return IntPoly._raw(tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return IntPoly._raw(())
        return IntPoly._raw(tuple(kernels.poly_mul(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> IntPoly:
        if e < 0:
            raise ValueError('negative exponent')
        result = IntPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, n: int) -> IntPoly:
        """Multiply by x**n."""
        if not self.coeffs:
            return self
        return IntPoly._raw((0,) * n + self.coeffs)

    def scale_var(self, s: int) -> IntPoly:
        """Return P(s*x)."""
        c, p = [], 1
        for a in self.coeffs:
            c.append(a * p)
            p *= s
        return IntPoly(c)

    def reversed(self) -> IntPoly:
        """Coefficient reversal x^deg P(1/x)."""
        return IntPoly(self.coeffs[::-1])

    def derivative(self) -> IntPoly:
        return IntPoly._raw(_trim(i * a for i, a in enumerate(self.coeffs) if i))

    def content(self) -> int:
        g = 0
        for a in self.coeffs:
            g = gcd(g, a)
            if g == 1:
                break
        return g

    def primitive(self) -> IntPoly:
        """Primitive part with positive leading coefficient (zero stays zero)."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.coeffs[-1] < 0:
            g = -g
        if g == 1:
            return self
        return IntPoly._raw(tuple(a // g for a in self.coeffs))

    def divide_content(self) -> IntPoly:
        """Divide by the positive content, keeping every sign."""
        g = self.content()
        if g <= 1:
            return self
        return IntPoly._raw(tuple(a // g for a in self.coeffs))

    def mod_int(self, q: int) -> IntPoly:
        """Reduce coefficients into [0, q)."""
        return IntPoly(a % q for a in self.coeffs)

    # -- evaluation --------------------------------------------------------

    def __call__(self, x):
        if isinstance(x, IntPoly):
            return compose(self, x)
        if isinstance(x, Fraction):
            num = kernels.eval_homogeneous(self.coeffs, x.numerator, x.denominator)
            d = len(self.coeffs) - 1
            return Fraction(num, x.denominator ** d) if d > 0 else Fraction(num)
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def sign_at(self, x: Fraction | int) -> int:
        """Sign of P(x) at a rational point, without forming the fraction."""
        if isinstance(x, int):
            x = Fraction(x)
        v = kernels.eval_homogeneous(self.coeffs, x.numerator, x.denominator)
        return (v > 0) - (v < 0)

    # -- division ----------------------------------------------------------

    def divmod_monic(self, d: IntPoly) -> tuple[IntPoly, IntPoly]:
        """Division by a divisor whose leading coefficient is +1 or -1."""
        if d.lc not in (1, -1):
            raise ValueError('divisor must have unit leading coefficient')
        q, r = kernels.divmod_unit(self.coeffs, d.coeffs)
        return IntPoly(q), IntPoly(r)

    def __repr__(self) -> str:
        return f'IntPoly({list(self.coeffs)})'

    def __str__(self) -> str:
        return to_text(self)


ZERO = IntPoly()
ONE = IntPoly.const(1)
X = IntPoly.x()


def to_text(p: IntPoly, var: str = 'x') -> str:
    """Descending-power rendering such as ``x^3 - 7*x^2 + 10*x - 2``."""
    if p.is_zero():
        return '0'
    parts: list[str] = []
    for i in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f'{var}^{i}'
            body = mono if mag == 1 else f'{mag}*{mono}'
        if not parts:
            parts.append(body if c > 0 else f'-{body}')
        else:
            parts.append(f'+ {body}' if c > 0 else f'- {body}')
    return ' '.join(parts)


def compose(p: IntPoly, q: IntPoly) -> IntPoly:
    """Return P(Q(x)) by Horner's rule."""
    acc = ZERO
    for a in reversed(p.coeffs):
        acc = acc * q + a
    return acc


def divmod_exact_rational(p: IntPoly, d: IntPoly) -> tuple[list[Fraction], list[Fraction]]:
    """Long division over Q; returns (quotient, remainder) as Fraction lists."""
    if d.is_zero():
        raise ZeroDivisionError('polynomial division by zero')
    r = [Fraction(a) for a in p.coeffs]
    dd = len(d.coeffs) - 1
    lc = d.coeffs[-1]
    if len(r) - 1 < dd:
        return [], r
    q = [Fraction(0)] * (len(r) - dd)
    for i in range(len(r) - 1, dd - 1, -1):
        c = r[i] / lc
        if c:
            q[i - dd] = c
            for j, dj in enumerate(d.coeffs):
                r[i - dd + j] -= c * dj
    rem = r[:dd]
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


def exact_div(p: IntPoly, d: IntPoly) -> IntPoly:
    """Quotient P / D, raising :class:`NotDivisible` unless the remainder is zero."""
    if d.is_zero():
        raise ZeroDivisionError('polynomial division by zero')
    if p.is_zero():
        return ZERO
    if d.lc in (1, -1):
        q, r = kernels.divmod_unit(p.coeffs, d.coeffs)
        if r:
            raise NotDivisible(f'{p!r} is not divisible by {d!r}')
        return IntPoly(q)
    q, r = divmod_exact_rational(p, d)
    if r or any(c.denominator != 1 for c in q):
        raise NotDivisible(f'{p!r} is not divisible by {d!r}')
    return IntPoly(int(c) for c in q)


def divides(d: IntPoly, p: IntPoly) -> bool:
    try:
        exact_div(p, d)
    except NotDivisible:
        return False
    return True


def substitute_linear(p: IntPoly, s: int, b: int) -> IntPoly:
    """Return P(s*x + b) exactly (Taylor shift followed by sign scaling)."""
    if s not in (1, -1):
        raise ValueError('s must be +1 or -1')
    c = list(p.coeffs)
    n = len(c)
    # Taylor shift by b: repeated synthetic division
    if b:
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += b * c[j + 1]
    if s == -1:
        c = [a if i % 2 == 0 else -a for i, a in enumerate(c)]
    return IntPoly(c)


def pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Sign-preserving pseudo-remainder: |lc(b)|^(deg a - deg b + 1) * a mod b."""
    da, db = len(a.coeffs) - 1, len(b.coeffs) - 1
    if da < db:
        return a
    r = list(a.coeffs)
    lc = b.coeffs[-1]
    alc = abs(lc)
    sgn = 1 if lc > 0 else -1
    bc = b.coeffs
    for i in range(da, db - 1, -1):
        c = r[i]
        # r <- |lc| r - sign(lc) c x^(i-db) b
        r = [alc * v for v in r]
        if c:
            sc = sgn * c
            off = i - db
            for j, bj in enumerate(bc):
                r[off + j] -= sc * bj
        r.pop()
    return IntPoly(r)


def poly_gcd_rational(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive generator (positive leading coefficient) of gcd(P, Q) over Q."""
    if p.is_zero() and q.is_zero():
        raise ValueError('gcd of two zero polynomials')
    a, b = p.primitive(), q.primitive()
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if len(a.coeffs) < len(b.coeffs):
        a, b = b, a
    while not b.is_zero():
        if len(b.coeffs) == 1:
            return ONE
        a, b = b, pseudo_rem(a, b).primitive()
    return a.primitive()


def squarefree_part(p: IntPoly) -> IntPoly:
    """Primitive squarefree part P / gcd(P, P')."""
    if len(p.coeffs) <= 2:
        return p.primitive()
    g = poly_gcd_rational(p, p.derivative())
    if len(g.coeffs) == 1:
        return p.primitive()
    return exact_div(p.primitive(), g).primitive()


def is_squarefree(p: IntPoly) -> bool:
    if len(p.coeffs) <= 2:
        return True
    return len(poly_gcd_rational(p, p.derivative()).coeffs) == 1


def quad_reduce(q: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Reduce Q(x) modulo x^2 - t x + 2 over Z[t].

    Returns ``(A, B)``, polynomials in t, with Q(x) = A(t) x + B(t) modulo
    x^2 - t x + 2.  Uses x^(j+1) = t x^j - 2 x^(j-1) on the pair (A_j, B_j)
    representing x^j.
    """
    t = X
    a_acc, b_acc = ZERO, ZERO
    aj, bj = ZERO, ONE  # x^0
    for j, c in enumerate(q.coeffs):
        if c:
            a_acc = a_acc + aj * c
            b_acc = b_acc + bj * c
        if j + 1 < len(q.coeffs):
            # x^(j+1) = x * (aj x + bj) = aj (t x - 2) + bj x
            aj, bj = aj * t + bj, aj * -2
    return a_acc, b_acc


def random_poly(rng: random.Random, max_deg: int, bound: int, monic: bool = False) -> IntPoly:
    d = rng.randint(0, max_deg)
    c = [rng.randint(-bound, bound) for _ in range(d + 1)]
    if monic:
        c[-1] = 1
    return IntPoly(c)


def poly_from_json(seq: Sequence) -> IntPoly:
    """Coefficients may be JSON ints or decimal strings."""
    return IntPoly(int(v) for v in seq)
