"""2-adic Newton polygons and segment irreducibility certificates.

Convention: the point at abscissa i carries v_2 of the coefficient of
x^(deg - i), so a monic polynomial's polygon starts at (0, 0) and ends at
(deg, v_2(P(0))).  This is the mirror image of the more common
constant-term-on-the-left picture.

A segment with coprime width and height belongs to a single irreducible
factor over Q_2 whose degree is the width.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .exactpoly import IntPoly, substitute_linear
from .family import InfiniteValuation, v2  # noqa: F401  (re-exported)

NAF_V2_ODD = 'naf-v2-odd'
NAF_V2_2 = 'naf-v2-2'
NAF_V2_GE4 = 'naf-v2-ge4'
COMPLIANT_EISENSTEIN = 'compliant-eisenstein'

GCD_ONE = 'gcd-one'
SPLIT_TEST = 'lemma75-split-test'


class ZeroConstantTerm(ValueError):
    pass


class NotCertified(ValueError):
    def __init__(self, message: str, diagnostic: dict | None = None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, int], ...]

    def segments(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[i + 1][0] - v[i][0], v[i + 1][1] - v[i][1]) for i in range(len(v) - 1)]

    def slope_zero_end(self) -> int:
        """Abscissa where the horizontal part ends (0 if there is none)."""
        if len(self.vertices) > 1 and self.vertices[1][1] == 0:
            return self.vertices[1][0]
        return 0

    def as_lists(self) -> list[list[int]]:
        return [list(p) for p in self.vertices]


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon_2(p: IntPoly) -> NewtonPolygon:
    """Lower convex hull of (i, v_2(c_{deg-i})), vertices only."""
    if p.is_zero() or p.coeffs[0] == 0:
        raise ZeroConstantTerm('Newton polygon needs a nonzero constant term')
    deg = p.degree
    pts = [(i, v2(p.coeffs[deg - i])) for i in range(deg + 1) if p.coeffs[deg - i]]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return NewtonPolygon(tuple(hull))


def eisenstein_shifted(p: IntPoly) -> bool:
    """Eisenstein at 2 for P(x + 1)."""
    if not p.degree:
        return False
    s = substitute_linear(p, 1, 1)
    c = s.coeffs
    if c[-1] % 2 == 0:
        return False
    if any(a % 2 for a in c[:-1]):
        return False
    return c[0] % 4 == 2


@dataclass(frozen=True)
class SegmentContext:
    m: int
    n: int
    k: int
    d: int
    construction: str


@dataclass(frozen=True)
class SegmentCert:
    segment: tuple[int, int]
    certified_irreducible_2adic: bool
    reason: str | None
    d: int
    start: tuple[int, int] = (0, 0)
    split_witness: dict | None = field(default=None, compare=False)

    @property
    def factor_degree(self) -> int:
        return self.segment[0]


def designated_segment(np: NewtonPolygon, construction: str):
    """Index of the segment the construction certifies, or None."""
    segs = np.segments()
    if not segs:
        return None
    if construction == NAF_V2_GE4:
        # the segment climbing from height 0 to height 1
        for i, (dx, dy) in enumerate(segs):
            if np.vertices[i][1] == 0 and dy == 1:
                return i
        return None
    return len(segs) - 1


def certify_tail_segment(p: IntPoly, np: NewtonPolygon, ctx: SegmentContext) -> SegmentCert:
    idx = designated_segment(np, ctx.construction)
    if idx is None:
        raise NotCertified('no designated segment', {'vertices': np.as_lists()})
    dx, dy = np.segments()[idx]
    start = np.vertices[idx]
    diag = {'n': ctx.n, 'segment': [dx, dy], 'vertices': np.as_lists()}
    d_poly = ctx.k - np.slope_zero_end() if ctx.construction != NAF_V2_GE4 else ctx.k - start[0]
    if ctx.construction in (NAF_V2_ODD, NAF_V2_2, NAF_V2_GE4) and d_poly != ctx.d:
        diag['d_polygon'] = d_poly
        diag['d_mod2'] = ctx.d
        raise NotCertified('polygon has not reached its stable shape', diag)
    if gcd(dx, dy) == 1:
        return SegmentCert((dx, dy), True, GCD_ONE, ctx.d, start)
    if ctx.construction == NAF_V2_2 and dy == 2 and ctx.d % 2 == 0:
        return _split_test(p, np, ctx, idx, diag)
    raise NotCertified('segment width and height share a factor', diag)


def _split_test(p: IntPoly, np: NewtonPolygon, ctx: SegmentContext, idx: int, diag: dict) -> SegmentCert:
    """Rule out a split of the height-2 tail segment into two equal factors.

    A split would force the coefficient of x^(n + d/2) to be 0 mod 8 when
    the constant term is -4 mod 16, and 4 mod 8 when it is 4 mod 16.
    """
    dx, dy = np.segments()[idx]
    start = np.vertices[idx]
    e = ctx.n + ctx.d // 2
    mid_abscissa = start[0] + dx // 2
    if p.degree - mid_abscissa != e:
        raise NotCertified('split-test midpoint does not match n + d/2', diag)
    const16 = p.coeffs[0] % 16
    coeff8 = p[e] % 8
    if const16 == 12:
        forced = 0
    elif const16 == 4:
        forced = 4
    else:
        raise NotCertified('constant term is not +-4 mod 16', diag)
    witness = {'coeff_index': e, 'coeff_mod8': coeff8, 'const_mod16': const16, 'forced_mod8': forced}
    if coeff8 == forced:
        diag['split_witness'] = witness
        raise NotCertified('split test inconclusive for this n', diag)
    return SegmentCert((dx, dy), True, SPLIT_TEST, ctx.d, start, witness)
