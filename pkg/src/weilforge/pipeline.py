"""From an order m to certified Weil polynomials over F_2.

For each m we build a family member P_n with all roots in [a, b] and
constant term (-1)^deg m.  An irreducible factor F of it is certified
and mapped through P -> Q(x) = (-1)^deg P(3 - x) -> R(x) = x^deg Q(x + 2/x).
R is the Weil polynomial of a simple abelian variety of dimension deg F over
F_2 with R(1) = m points.

Odd m: P_n comes from a compliant representation and F = P_n is
Eisenstein after x -> x + 1.  Even m: a Newton polygon segment certifies a
2-adic factor of degree B, every factor of degree <= D = deg P - B with
roots in [a, b] is removed exactly, and B > D pins down F.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

from .discquality import (
    CompliantRep,
    RepTable,
    build_table,
    compliant_rep,
    roots_in_disc,
)
from .exactpoly import IntPoly, poly_from_json, substitute_linear
from .family import (
    COMPLIANT,
    BinaryRep,
    compliant_binary_rep,
    mod2_vanishing_order,
    naf,
    naf_variant,
    signed_combination,
    v2,
)
from .padic import (
    COMPLIANT_EISENSTEIN,
    NAF_V2_2,
    NAF_V2_GE4,
    NAF_V2_ODD,
    NotCertified,
    SegmentContext,
    certify_tail_segment,
    eisenstein_shifted,
    newton_polygon_2,
)
from .realroots import RootReport, small_factor_split, verify_roots_in_ab

CONSTRUCTIONS = (COMPLIANT_EISENSTEIN, NAF_V2_ODD, NAF_V2_2, NAF_V2_GE4)
EISENSTEIN_SHIFT = 'eisenstein-shift'
NP_SEGMENT = 'np-segment'
N_BUDGET = 64
J_BUDGET = 8
CERT_VERSION = 1
SAFE_INT = 1 << 53

_Z_MINUS_1 = IntPoly((-1, 1))


class ExceptionalPolynomial(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    def __init__(self, message: str, partial: list, failures: list):
        super().__init__(message)
        self.partial = partial
        self.failures = failures


# -- Weil transform ----------------------------------------------------------

def weil_transform(p: IntPoly) -> tuple[IntPoly, IntPoly, int]:
    """(Q, R, order) with Q = (-1)^deg P(3 - x) and R = x^deg Q(x + 2/x)."""
    g = p.degree
    if not g or not p.is_monic():
        raise ValueError('P must be monic of positive degree')
    q = substitute_linear(p, -1, 3)
    if g % 2:
        q = -q
    # x^g Q(x + 2/x) = sum_i q_i (x^2 + 2)^i x^(g - i)
    r = [0] * (2 * g + 1)
    for i, qi in enumerate(q.coeffs):
        if qi:
            for j in range(i + 1):
                r[g - i + 2 * j] += qi * comb(i, j) * (1 << (i - j))
    rr = IntPoly(r)
    if rr == IntPoly((-2, 0, 1)):
        raise ExceptionalPolynomial('R = x^2 - 2 is excluded')
    return q, rr, q(3)


def functional_equation_ok(r: IntPoly, g: int) -> bool:
    c = r.coeffs
    if len(c) != 2 * g + 1:
        return False
    return all((c[i] << i) == (c[2 * g - i] << g) for i in range(2 * g + 1))


def _signed_const(p: IntPoly) -> int:
    return -p[0] if p.degree % 2 else p[0]


# -- certificates --------------------------------------------------------------

@dataclass(frozen=True)
class Irreducibility:
    kind: str
    np_vertices: tuple[tuple[int, int], ...]
    segment: tuple[int, int]
    residual_bound: int
    split_witness: dict | None = None


@dataclass(frozen=True)
class WeilCertificate:
    m: int
    n: int
    construction: str
    rep: BinaryRep
    P_n: IntPoly
    removed_factors: tuple[IntPoly, ...]
    F: IntPoly
    irreducibility: Irreducibility
    weil_Q: IntPoly
    weil_R: IntPoly
    order: int
    root_report: RootReport | None = field(default=None, compare=False, repr=False)

    @property
    def g(self) -> int:
        return self.F.degree

    def to_json_obj(self) -> dict:
        irr = self.irreducibility
        return {
            'version': CERT_VERSION,
            'm': _enc(self.m),
            'n': self.n,
            'construction': self.construction,
            'rep': {'kind': self.rep.kind, 'coeffs': _enc_seq(self.rep.digits), 'k': self.rep.k},
            'P_n': _enc_seq(self.P_n.coeffs),
            'removed_factors': [_enc_seq(q.coeffs) for q in self.removed_factors],
            'F': _enc_seq(self.F.coeffs),
            'irreducibility': {
                'kind': irr.kind,
                'np_vertices': [list(v) for v in irr.np_vertices],
                'segment': list(irr.segment),
                'residual_bound': irr.residual_bound,
                'split_witness': irr.split_witness,
            },
            'weil': {'Q': _enc_seq(self.weil_Q.coeffs), 'R': _enc_seq(self.weil_R.coeffs),
                     'order': _enc(self.order), 'g': self.g},
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> WeilCertificate:
        if obj.get('version') != CERT_VERSION:
            raise ValueError(f'unsupported certificate version {obj.get("version")!r}')
        m = int(obj['m'])
        rep_obj = obj['rep']
        digits = tuple(int(a) for a in rep_obj['coeffs'])
        rep = BinaryRep(digits_value(digits), digits, rep_obj['kind'])
        irr = obj['irreducibility']
        w = obj['weil']
        return cls(
            m=m, n=int(obj['n']), construction=obj['construction'], rep=rep,
            P_n=poly_from_json(obj['P_n']),
            removed_factors=tuple(poly_from_json(q) for q in obj['removed_factors']),
            F=poly_from_json(obj['F']),
            irreducibility=Irreducibility(
                irr['kind'], tuple(tuple(int(a) for a in v) for v in irr['np_vertices']),
                tuple(int(a) for a in irr['segment']), int(irr['residual_bound']),
                irr.get('split_witness')),
            weil_Q=poly_from_json(w['Q']), weil_R=poly_from_json(w['R']),
            order=int(w['order']))

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())


def _enc(x: int):
    return str(x) if abs(x) >= SAFE_INT else x


def _enc_seq(seq) -> list:
    return [_enc(a) for a in seq]


def digits_value(digits) -> int:
    return sum(a << i for i, a in enumerate(digits))


def dump_certificates(certs) -> str:
    return json.dumps([c.to_json_obj() for c in certs], indent=1) + '\n'


def load_certificates(text: str) -> list[WeilCertificate]:
    obj = json.loads(text)
    if isinstance(obj, dict):
        obj = [obj]
    return [WeilCertificate.from_json_obj(o) for o in obj]


def _make_cert(m, n, construction, rep, p, removed, f, irr, report) -> WeilCertificate:
    q, r, order = weil_transform(f)
    return WeilCertificate(m, n, construction, rep, p, tuple(removed), f, irr, q, r, order, report)


# -- odd orders ----------------------------------------------------------------

def odd_rep(m: int, table: dict | None = None) -> CompliantRep:
    """Compliant representation of odd m, building a table on demand if needed."""
    try:
        return compliant_rep(m, table)
    except KeyError:
        built = build_table(m, base=table if isinstance(table, RepTable) else None)
        return compliant_rep(m, built)


def even_degree_rep(rep: CompliantRep) -> BinaryRep:
    q = rep.q
    if q.degree % 2:
        q = q * _Z_MINUS_1
    return compliant_binary_rep(q.coeffs)


def construct_odd(m: int, count: int, table: dict | None = None,
                  j_max: int = J_BUDGET, failures: list | None = None) -> list[WeilCertificate]:
    if m < 1 or m % 2 == 0:
        raise ValueError('m must be odd and positive')
    if count < 1:
        raise ValueError('count must be positive')
    failures = [] if failures is None else failures
    rep = even_degree_rep(odd_rep(m, table))
    k = rep.k
    out: list[WeilCertificate] = []
    seen: set[IntPoly] = set()
    for j in range(j_max + 1):
        n = (1 << j) - k // 2
        if n < 1:
            continue
        p = signed_combination(rep, n)
        if not eisenstein_shifted(p):
            failures.append({'n': n, 'reason': 'not Eisenstein after shift'})
            continue
        report = verify_roots_in_ab(p)
        if not (report.all_in_interval and report.distinct):
            failures.append({'n': n, 'reason': 'roots not distinct inside [a, b]'})
            continue
        if p in seen:
            failures.append({'n': n, 'reason': 'duplicate F'})
            continue
        shifted = newton_polygon_2(substitute_linear(p, 1, 1))
        irr = Irreducibility(EISENSTEIN_SHIFT, shifted.vertices, (p.degree, 1), 0)
        out.append(_make_cert(m, n, COMPLIANT_EISENSTEIN, rep, p, (), p, irr, report))
        seen.add(p)
        if len(out) == count:
            return out
    raise BudgetExhausted(f'j budget {j_max} exhausted for m={m}', out, failures)


# -- even orders ---------------------------------------------------------------

def even_family(m: int) -> tuple[str, BinaryRep, int]:
    """(construction, digit representation, d) for even m."""
    e = v2(m)
    if e % 2:
        rep, construction = naf(m), NAF_V2_ODD
    elif e == 2:
        rep, construction = naf(m), NAF_V2_2
    else:
        rep, construction = naf_variant(m), NAF_V2_GE4
    return construction, rep, mod2_vanishing_order(rep.digits)


def try_even(m: int, n: int, construction: str, rep: BinaryRep, d: int):
    """A certificate for this n, or the reason this n does not certify."""
    p = signed_combination(rep, n)
    np = newton_polygon_2(p)
    try:
        seg = certify_tail_segment(p, np, SegmentContext(m, n, rep.k, d, construction))
    except NotCertified as exc:
        return None, str(exc)
    big = seg.factor_degree
    small = p.degree - big
    if big <= small:
        return None, f'certified factor degree {big} does not exceed residual {small}'
    report = verify_roots_in_ab(p)
    if not (report.all_in_interval and report.distinct):
        return None, 'roots not distinct inside [a, b]'
    removed, f = small_factor_split(p, small, report)
    if any(_signed_const(q) != 1 for q in removed):
        return None, 'removed factor with constant term other than +-1'
    if not f.degree or _signed_const(f) != m:
        return None, 'cofactor does not carry the order'
    irr = Irreducibility(NP_SEGMENT, np.vertices, seg.segment, small, seg.split_witness)
    return _make_cert(m, n, construction, rep, p, removed, f, irr, report), None


def construct_even(m: int, count: int, n_max: int = N_BUDGET,
                   failures: list | None = None) -> list[WeilCertificate]:
    if m < 2 or m % 2:
        raise ValueError('m must be even and positive')
    if count < 1:
        raise ValueError('count must be positive')
    failures = [] if failures is None else failures
    construction, rep, d = even_family(m)
    out: list[WeilCertificate] = []
    seen: set[IntPoly] = set()
    for n in range(1, n_max + 1):
        cert, reason = try_even(m, n, construction, rep, d)
        if cert is None:
            failures.append({'n': n, 'reason': reason})
            continue
        if cert.F in seen:
            failures.append({'n': n, 'reason': 'duplicate F'})
            continue
        seen.add(cert.F)
        out.append(cert)
        if len(out) == count:
            return out
    raise BudgetExhausted(f'n budget {n_max} exhausted for m={m}', out, failures)


def _sort_key(c: WeilCertificate):
    return (c.g, c.n, c.F.coeffs)


def construct(m: int, count: int = 1, table: dict | None = None,
              n_max: int = N_BUDGET, j_max: int = J_BUDGET) -> list[WeilCertificate]:
    if m < 1:
        raise ValueError('m must be positive')
    try:
        if m % 2:
            certs = construct_odd(m, count, table, j_max)
        else:
            certs = construct_even(m, count, n_max)
    except BudgetExhausted as exc:
        exc.partial = sorted(exc.partial, key=_sort_key)
        raise
    return sorted(certs, key=_sort_key)


# -- verification --------------------------------------------------------------

def certificate_problems(cert: WeilCertificate) -> list[str]:
    """Every invariant of the certificate that fails to re-verify from scratch."""
    out: list[str] = []
    try:
        _check(cert, out)
    except Exception as exc:  # noqa: BLE001  (malformed input must not crash the verifier)
        out.append(f'verification error: {type(exc).__name__}: {exc}')
    return out


def verify_certificate(cert: WeilCertificate) -> bool:
    return not certificate_problems(cert)


def _check(c: WeilCertificate, out: list[str]) -> None:
    m, rep = c.m, c.rep
    if m < 1:
        out.append('m must be positive')
        return
    if c.construction not in CONSTRUCTIONS:
        out.append('unknown construction')
        return
    out.extend(f'rep: {p}' for p in rep.problems())
    if rep.m != m:
        out.append('rep digits do not sum to m')
    if m % 2:
        if c.construction != COMPLIANT_EISENSTEIN:
            out.append('odd m needs the compliant construction')
        if rep.kind != COMPLIANT or rep.k % 2 or not roots_in_disc(rep.poly()):
            out.append('rep is not an even-degree compliant representation')
    else:
        construction, expected, _ = even_family(m)
        if c.construction != construction or rep != expected:
            out.append('rep or construction does not match v2(m)')
    if out:
        return
    p = signed_combination(rep, c.n)
    if p != c.P_n:
        out.append('P_n does not match the family member')
        return
    prod = c.F
    for q in c.removed_factors:
        prod = prod * q
    if prod != c.P_n:
        out.append('F times removed factors is not P_n')
    if not c.F.degree or not c.F.is_monic() or _signed_const(c.F) != m:
        out.append('F does not carry the order')
    for q in c.removed_factors:
        if not q.is_monic() or _signed_const(q) != 1:
            out.append('removed factor with constant term other than +-1')
        elif not verify_roots_in_ab(q).all_in_interval:
            out.append('removed factor has roots outside [a, b]')
    report = verify_roots_in_ab(c.P_n)
    if not (report.all_in_interval and report.distinct):
        out.append('P_n roots are not distinct inside [a, b]')
    if out:
        return
    _check_irreducibility(c, report, out)
    _check_weil(c, out)


def _check_irreducibility(c: WeilCertificate, report: RootReport, out: list[str]) -> None:
    irr = c.irreducibility
    if c.construction == COMPLIANT_EISENSTEIN:
        if irr.kind != EISENSTEIN_SHIFT or c.removed_factors or c.F != c.P_n:
            out.append('odd construction must be an unsplit Eisenstein member')
        if not eisenstein_shifted(c.F):
            out.append('F is not Eisenstein after shift')
        shifted = newton_polygon_2(substitute_linear(c.F, 1, 1))
        if shifted.vertices != irr.np_vertices or tuple(irr.segment) != (c.F.degree, 1):
            out.append('recorded shifted polygon does not match')
        return
    if irr.kind != NP_SEGMENT:
        out.append('even construction needs a polygon segment')
        return
    np = newton_polygon_2(c.P_n)
    if np.vertices != irr.np_vertices:
        out.append('recorded polygon does not match P_n')
    _, _, d = even_family(c.m)
    try:
        seg = certify_tail_segment(c.P_n, np, SegmentContext(c.m, c.n, c.rep.k, d, c.construction))
    except NotCertified as exc:
        out.append(f'segment does not certify: {exc}')
        return
    if seg.segment != tuple(irr.segment) or seg.split_witness != irr.split_witness:
        out.append('recorded segment certificate does not match')
    small = c.P_n.degree - seg.factor_degree
    if irr.residual_bound != small or seg.factor_degree <= small:
        out.append('residual bound is wrong or not below the certified degree')
        return
    removed, f = small_factor_split(c.P_n, small, report)
    if tuple(removed) != c.removed_factors or f != c.F:
        out.append('small-factor removal does not reproduce the certificate')


def _check_weil(c: WeilCertificate, out: list[str]) -> None:
    q, r, order = weil_transform(c.F)
    if q != c.weil_Q or r != c.weil_R:
        out.append('Weil transform does not match')
    if order != c.m or c.order != c.m:
        out.append('order is not m')
    g = c.F.degree
    rr = c.weil_R
    if rr.degree != 2 * g or not rr.is_monic():
        out.append('R is not monic of degree 2g')
    if not functional_equation_ok(rr, g):
        out.append('R fails the functional equation')
    if rr(1) != c.m:
        out.append('R(1) != m')
    if rr == IntPoly((-2, 0, 1)):
        out.append('R is the excluded polynomial x^2 - 2')
