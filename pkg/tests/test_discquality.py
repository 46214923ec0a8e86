from __future__ import annotations

import json
import random
from fractions import Fraction

import mpmath
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from weilforge.discquality import (
    EXACT_THRESHOLD,
    SRC_COMPOSE,
    SRC_EXHAUST,
    SRC_EXTEND,
    CompliantRep,
    NotCompliant,
    QualityTooLow,
    QualityUnderflow,
    RepTable,
    build_table,
    circle_norm,
    compliant_rep,
    compose_bound,
    compose_reps,
    exhaust_low_degree,
    extend_rep,
    is_compliant,
    mod2_ok,
    naf_compliant,
    quality7,
    roots_in_disc,
    sampled_soundness,
)
from weilforge.exactpoly import ONE, IntPoly, random_poly
from weilforge.family import naf

from .conftest import to_sympy
from .strategies import nonzero_rationals, polys

Z4M1 = IntPoly((-1, 0, 0, 0, 1))
ZM1 = IntPoly((-1, 1))
ZP1 = IntPoly((1, 1))


def P(*c):
    return IntPoly(c)


def numeric_disc_verdict(q: IntPoly):
    """True/False from high-precision roots, or None within the safety margin."""
    sqf = to_sympy(q).sqf_part()  # repeated roots slow polyroots down; same root set
    if sqf.degree() < 1:
        return True
    with mpmath.workdps(60):
        roots = mpmath.polyroots([int(c) for c in sqf.all_coeffs()], maxsteps=400, extraprec=200)
        mags = [abs(z) ** 2 for z in roots]
        eps = mpmath.mpf(10) ** -30
        if all(m < 2 - eps for m in mags):
            return True
        if any(m > 2 + eps for m in mags):
            return False
    return None


def numeric_quality7(q: IntPoly):
    """7 * min |Q| on |z| = sqrt 2 via exact critical-point isolation in sympy, high precision."""
    t = sp.Symbol('x')
    r = to_sympy(circle_norm(q)).as_expr()
    pts = [-2 * sp.sqrt(2), 2 * sp.sqrt(2)]
    dr = sp.Poly(sp.diff(r, t), t)
    if dr.degree() > 0:
        pts += [z for z in sp.real_roots(dr) if abs(z.evalf(30)) <= 2 * sp.sqrt(2)]
    vals = [sp.N(r.subs(t, z), 50) for z in pts]
    return 7 * sp.sqrt(min(vals)).evalf(50)


class TestCircleNorm:
    def test_examples(self):
        assert circle_norm(ZM1) == P(3, -1)
        assert circle_norm(Z4M1) == P(9, 0, 8, 0, -1)
        assert circle_norm(ONE) == ONE

    @given(polys(max_deg=8, bound=20), nonzero_rationals(5, 7))
    def test_identity(self, q, z0):
        assert circle_norm(q)(z0 + 2 / z0) == q(z0) * q(2 / z0)


class TestCompliance:
    def test_examples(self):
        assert is_compliant(ZM1, 1)
        assert is_compliant(Z4M1, 15)
        assert not is_compliant(P(-2, 1))
        assert not is_compliant(P(-2, 1), 0)

    def test_boundary_roots_rejected(self):
        assert not roots_in_disc(P(-2, 0, 1))  # +-sqrt 2
        assert not roots_in_disc(P(2, 0, 1))
        assert not roots_in_disc(P(2, -2, 1))  # 1 +- i, |z| = sqrt 2
        assert roots_in_disc(P(1, -1, 1))

    def test_mod2_condition(self):
        assert mod2_ok(P(1, 2, 1)) and mod2_ok(P(-1, 0, 0, 0, 1))
        assert not mod2_ok(P(1, 1, 1))
        assert not is_compliant(P(1, 1), 3) or mod2_ok(P(1, 1))

    def test_schur_cohn_oracle(self):
        rng = random.Random(23)
        checked = 0
        for _ in range(200):
            q = random_poly(rng, 6, 4, monic=True)
            if not q.degree:
                continue
            ref = numeric_disc_verdict(q)
            if ref is None:
                continue
            assert roots_in_disc(q) == ref, q
            checked += 1
        assert checked > 150

    @settings(max_examples=150)
    @given(st.lists(st.integers(-3, 3), min_size=1, max_size=6))
    def test_schur_cohn_hypothesis(self, low):
        q = IntPoly(low + [1])
        ref = numeric_disc_verdict(q)
        if ref is not None:
            assert roots_in_disc(q) == ref

    def test_weight_condition_implies_compliance(self):
        for m in range(1, 2001):
            d = naf(m).digits
            k = len(d) - 1
            e = sum(Fraction(abs(a), 2 ** ((k - i) // 2)) for i, a in enumerate(d[:-1]) if (k - i) % 2 == 0)
            o = sum(Fraction(abs(a), 2 ** ((k - i - 1) // 2)) for i, a in enumerate(d[:-1]) if (k - i) % 2)
            if e < 1 and o * o < 2 * (1 - e) ** 2:
                assert roots_in_disc(IntPoly(d)), m


class TestQuality:
    def test_examples(self):
        assert quality7(ZM1) == 2
        assert quality7(Z4M1) == 21
        assert quality7(ONE) == 7
        assert quality7(ZP1) == 2

    def test_not_compliant(self):
        with pytest.raises(NotCompliant):
            quality7(P(-2, 1))

    def test_against_numeric_oracle(self):
        rng = random.Random(29)
        done = 0
        while done < 40:
            q = random_poly(rng, 6, 3, monic=True)
            if not q.degree or not roots_in_disc(q):
                continue
            ref = numeric_quality7(q)
            fl = int(sp.floor(ref))
            if abs(ref - fl) < 1e-20 or abs(ref - fl - 1) < 1e-20:
                continue
            assert quality7(q) == fl, q
            done += 1

    def test_exact_minimum_hits_integer(self):
        # min |z^4 - 1| on the circle is exactly 3, so 7 * 3 = 21 and the square has 63
        assert quality7(Z4M1) == 21
        assert quality7(Z4M1 * Z4M1) == 63

    def test_exhaust_values_against_oracle(self):
        table = exhaust_low_degree()
        for m in (1, 3, 5, 15, 45, 51, 101, 459):
            rep = table[m]
            ref = numeric_quality7(rep.q)
            assert rep.quality7 <= ref < rep.quality7 + 1


class TestExhaust:
    def test_count_and_range(self):
        table = exhaust_low_degree()
        assert len(table) == 167
        assert max(table) <= 459 and all(m % 2 for m in table)

    def test_witnesses(self):
        table = exhaust_low_degree()
        assert table[1].quality7 >= 2
        assert table[15].quality7 >= 21
        assert all(rep.problems() == [] for rep in table.values())

    def test_parallel_identical(self):
        assert exhaust_low_degree(max_degree=5, jobs=2) == exhaust_low_degree(max_degree=5)

    def test_brute_force_small_degrees(self):
        # independent enumeration for degree <= 3 over all |c_i| <= 3
        from itertools import product
        found = {}
        for n in range(1, 4):
            for t in product(range(-3, 4), repeat=n):
                q = IntPoly(t + (1,))
                if mod2_ok(q) and numeric_disc_verdict(q):
                    found.setdefault(q(2), []).append(q)
        table = exhaust_low_degree(max_degree=3)
        assert set(found) == set(table)


class TestCompose:
    def test_examples(self):
        r3 = CompliantRep(3, ZP1, 2)
        r9 = compose_reps(r3, r3, 0)
        assert r9.m == 9 and r9.q == P(1, 2, 1) and r9.quality7 == quality7(P(1, 2, 1))
        r15 = CompliantRep(15, Z4M1, 21)
        r227 = compose_reps(r15, r15, 2)
        assert r227.m == 227 and compose_bound(21, 21, 2) == 49
        assert r227.quality7 >= 49 and r227.quality7 == quality7(r227.q)
        with pytest.raises(QualityUnderflow):
            compose_reps(r3, r3, 2)

    def test_compose_quality_is_sound(self):
        table = exhaust_low_degree()
        ms = sorted(table)[:25]
        for m1 in ms[::4]:
            for m2 in ms[::5]:
                for c in (-2, 0, 2):
                    r1, r2 = table[m1], table[m2]
                    if r1.quality7 * r2.quality7 <= 49 * abs(c):
                        continue
                    rep = compose_reps(r1, r2, c)
                    assert rep.problems() == []
                    assert rep.src == SRC_COMPOSE

    def test_extend(self):
        r = CompliantRep(3095, P(1), 49)  # synthetic carrier for the arithmetic
        assert extend_rep(r, 14).quality7 == 49
        assert extend_rep(r, 0).quality7 == 147
        with pytest.raises(QualityTooLow):
            extend_rep(CompliantRep(3095, P(1), 48), 0)
        with pytest.raises(ValueError):
            extend_rep(r, 3)


class TestTable:
    def test_small_table_complete(self, small_table):
        assert all(m in small_table for m in range(1, 3002, 2))
        assert small_table.problems() == {}
        assert small_table.exhaust_count == 167

    def test_table_contains_exhaust(self, small_table):
        for m, rep in exhaust_low_degree().items():
            assert small_table[m].quality7 >= rep.quality7

    def test_jobs_independent(self):
        a = build_table(801)
        b = build_table(801, jobs=2)
        assert a.dumps() == b.dumps()

    def test_resume_identical(self):
        full = build_table(1201)
        part = build_table(601)
        assert build_table(1201, base=part).dumps() == full.dumps()

    def test_format_roundtrip(self, small_table, tmp_path):
        path = tmp_path / 't.jsonl'
        small_table.save(path)
        text = path.read_text()
        lines = text.splitlines()
        assert all(ln == ln.rstrip() for ln in lines)
        recs = [json.loads(ln) for ln in lines]
        assert [r['m'] for r in recs] == sorted(r['m'] for r in recs)
        assert all(set(r) == {'m', 'coeffs', 'quality7', 'src'} for r in recs)
        assert {r['src'] for r in recs} <= {SRC_EXHAUST, SRC_COMPOSE, SRC_EXTEND}
        assert RepTable.load(path) == small_table

    def test_corrupt_entry_detected(self, small_table):
        t = RepTable(small_table)
        rep = t[101]
        t[101] = CompliantRep(101, rep.q, rep.quality7 + 7, rep.src)
        assert 101 in t.problems()
        t[103] = CompliantRep(103, rep.q, 1, rep.src)
        assert 'Q(2) != m' in t.problems()[103]

    def test_sampled_soundness(self, small_table):
        assert all(sampled_soundness(small_table[m]) for m in list(small_table)[::7])
        bad = CompliantRep(15, Z4M1, 22)
        assert not sampled_soundness(bad)

    def test_exact_threshold_constant(self):
        assert EXACT_THRESHOLD == 56


class TestCompliantRep:
    def test_examples(self, small_table):
        assert compliant_rep(1, small_table).q in (ONE, ZM1)
        r15 = compliant_rep(15, small_table)
        assert r15.q == Z4M1 and naf_compliant(15) == r15

    def test_naf_fast_path_list(self):
        for m in (15, 45, 51, 75, 77, 85):
            assert naf_compliant(m) is not None

    def test_extension_example(self, small_table):
        t = build_table(3401, base=small_table)
        ext = extend_rep(t[3095], 2)
        assert ext.m == 46427 and ext.quality7 == 3 * t[3095].quality7 - 14
        assert ext.problems() == []

    def test_recursion_above_limit(self, small_table):
        t = build_table(3401, base=small_table)
        # 750019 = 15 * 50001 + 4 and 50001 = 15 * 3333 + 6
        big = compliant_rep(750019, t)
        assert big.m == 750019 and big.q(2) == 750019
        assert big.q == (t[3333].q * Z4M1 + 6) * Z4M1 + 4
        assert big.problems() == []

    def test_missing_table_entry(self):
        with pytest.raises(KeyError):
            compliant_rep(349, {})

    def test_even_rejected(self):
        with pytest.raises(ValueError):
            compliant_rep(4, {})
