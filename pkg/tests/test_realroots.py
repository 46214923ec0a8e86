from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weilforge.discquality import exhaust_low_degree
from weilforge.exactpoly import ONE, IntPoly
from weilforge.family import compliant_binary_rep, f, h, signed_combination
from weilforge.realroots import (
    AB,
    ENDPOINT_POLY,
    PreconditionViolated,
    SturmChain,
    brute_force_subset_factors,
    refine_root_brackets,
    small_factor_split,
    sturm_count,
    verify_roots_in_ab,
)

from .conftest import sympy_real_roots, to_sympy


def P(*c):
    return IntPoly(c)


def from_roots(roots):
    p = ONE
    for r in roots:
        p = p * IntPoly((-r.numerator, r.denominator))
    return p


class TestSturm:
    def test_examples(self):
        assert sturm_count(P(2, -3, 1), 0, Fraction(3, 2)) == 1
        assert sturm_count(f(1), 0, 6) == 2
        assert sturm_count(P(1, 0, 1), -10, 10) == 0

    def test_half_open_convention(self):
        p = P(2, -3, 1)  # roots 1, 2
        assert sturm_count(p, 1, 2) == 1
        assert sturm_count(p, 0, 1) == 1
        assert sturm_count(p, Fraction(1, 2), 2) == 2

    def test_multiple_roots_counted_once(self):
        p = P(-1, 1) ** 3 * P(-4, 1)
        assert sturm_count(p, 0, 10) == 2

    def test_random_rational_roots(self):
        rng = random.Random(11)
        for _ in range(100):
            roots = sorted({Fraction(rng.randint(0, 600), rng.choice([1, 2, 5, 10, 100])) for _ in range(rng.randint(1, 6))})
            roots = [r for r in roots if r <= 6]
            if not roots:
                continue
            p = from_roots(roots)
            c = Fraction(rng.randint(-10, 600), 100)
            d = c + Fraction(rng.randint(1, 400), 100)
            assert sturm_count(p, c, d) == sum(1 for r in roots if c < r <= d)

    @given(st.lists(st.integers(-20, 20), min_size=2, max_size=9).map(IntPoly).filter(lambda p: (p.degree or 0) >= 1))
    def test_total_against_sympy(self, p):
        assert SturmChain(p).total_real() == len(set(sympy_real_roots(p)))


class TestIntervalAB:
    def test_default_brackets(self):
        assert AB.check()
        assert AB.a_lo == Fraction(171, 1000) and AB.b_hi == Fraction(5829, 1000)

    def test_refinement_keeps_sign_change(self):
        ab = AB
        for _ in range(30):
            ab = ab.refine_a().refine_b()
            assert ab.check()
        assert ab.a_hi - ab.a_lo < Fraction(1, 10 ** 9)


class TestVerifyRoots:
    def test_examples(self):
        assert verify_roots_in_ab(f(1)).all_in_interval
        r = verify_roots_in_ab(ENDPOINT_POLY)
        assert r.endpoint_multiplicity == 1 and r.all_in_interval
        assert not verify_roots_in_ab(P(-6, 1)).all_in_interval

    def test_outside_and_complex(self):
        assert not verify_roots_in_ab(P(1, 0, 1)).all_in_interval
        assert not verify_roots_in_ab(P(-1, 1) * P(-6, 1)).all_in_interval
        assert not verify_roots_in_ab(P(-1, 6)).all_in_interval  # 1/6 < a

    def test_distinctness(self):
        assert not verify_roots_in_ab(P(-1, 1) ** 2).distinct
        assert not verify_roots_in_ab(ENDPOINT_POLY ** 2).distinct
        assert verify_roots_in_ab(P(-1, 1) * P(-2, 1)).distinct

    def test_brackets_match_roots(self):
        rep = verify_roots_in_ab(f(3))
        assert len(rep.isolating_brackets) == 6
        base = rep.reduced
        for l, r in rep.isolating_brackets:
            assert l == r or base.sign_at(l) * base.sign_at(r) < 0

    @pytest.mark.parametrize('m', range(1, 51))
    def test_h_family_all_in_and_distinct(self, m):
        for n in range(1, 9):
            rep = verify_roots_in_ab(h(n, m))
            assert rep.all_in_interval and rep.distinct

    def test_compliant_inputs(self):
        for m, rep in sorted(exhaust_low_degree().items()):
            digits = compliant_binary_rep(rep.q.coeffs)
            for n in range(1, 5):
                r = verify_roots_in_ab(signed_combination(digits, n))
                assert r.all_in_interval and r.distinct, (m, n)


class TestRefine:
    def test_f1_width(self):
        rep = refine_root_brackets(verify_roots_in_ab(f(1)), Fraction(1, 1000))
        (l1, r1), (l2, r2) = rep.isolating_brackets
        assert r1 - l1 <= Fraction(1, 1000) and r2 - l2 <= Fraction(1, 1000)
        # 2 - sqrt 3 in [l1, r1]: both endpoints bracket the root of x^2 - 4x + 1
        assert f(1).sign_at(l1) * f(1).sign_at(r1) <= 0 and r1 < 1 < l2

    def test_idempotent(self):
        rep = verify_roots_in_ab(f(2))
        assert refine_root_brackets(rep, Fraction(100)) == rep

    def test_rational_roots(self):
        rep = refine_root_brackets(verify_roots_in_ab(P(-1, 1) * P(-2, 1) * P(-5, 1)), Fraction(1, 10))
        br = rep.isolating_brackets
        assert len(br) == 3
        for (l, r), root in zip(br, (1, 2, 5)):
            assert l <= root <= r and r - l <= Fraction(1, 10)
        assert br[0][1] < br[1][0] and br[1][1] < br[2][0]


class TestSmallFactorSplit:
    def test_examples(self):
        assert small_factor_split(P(-1, 1) * f(1), 1) == ([P(-1, 1)], f(1))
        assert small_factor_split(f(1), 0) == ([], f(1))
        factors, cof = small_factor_split(P(-2, 1) * P(-3, 1), 1)
        assert set(factors) == {P(-2, 1), P(-3, 1)} and cof == ONE
        assert factors == sorted(factors, key=IntPoly.sort_key)

    def test_endpoint_factor(self):
        factors, cof = small_factor_split(ENDPOINT_POLY * f(2), 2)
        assert factors == [ENDPOINT_POLY] and cof == f(2)

    def test_preconditions(self):
        with pytest.raises(PreconditionViolated):
            small_factor_split(P(-1, 1) ** 2 * f(1), 1)
        with pytest.raises(PreconditionViolated):
            small_factor_split(P(-2, 2), 0)
        with pytest.raises(PreconditionViolated):
            small_factor_split(P(-1, 1) * P(-9, 1), 1)

    def test_completeness_random(self):
        rng = random.Random(17)
        pool = [P(-1, 1), P(-2, 1), P(-3, 1), P(-4, 1), P(-5, 1), f(1), P(1, -6, 1),
                P(2, -4, 1), P(1, -3, 1), P(1, -5, 1), P(3, -6, 1), P(7, -6, 1), P(2, -5, 1)]
        for _ in range(50):
            parts = rng.sample(pool, rng.randint(2, 5))
            p = ONE
            for q in parts:
                p = p * q
            d = max(q.degree for q in parts)
            if d >= p.degree:
                continue
            factors, cof = small_factor_split(p, d)
            expected = sorted(parts, key=IntPoly.sort_key)
            assert factors == expected and cof == ONE

    def test_against_sympy_factorization(self):
        for m in (2, 4, 6, 12, 16, 20, 28):
            for n in (1, 2, 3, 4):
                p = h(n, m)
                d = min(5, p.degree - 1)
                factors, cof = small_factor_split(p, d)
                prod = cof
                for q in factors:
                    prod = prod * q
                assert prod == p
                ref = sorted((q for q in sympy_factors(p) if q.degree <= d), key=IntPoly.sort_key)
                assert factors == ref
                assert brute_force_subset_factors(p, d) == [q for q in ref if q != ENDPOINT_POLY]


def sympy_factors(p: IntPoly) -> list[IntPoly]:
    _, fl = to_sympy(p).factor_list()
    return [IntPoly(int(c) for c in reversed(q.all_coeffs())) for q, _ in fl]
