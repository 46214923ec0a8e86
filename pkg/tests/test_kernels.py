from __future__ import annotations

from fractions import Fraction
from itertools import combinations, pairwise

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weilforge import _kernels_py as pyk
from weilforge import kernels

ck = pytest.importorskip('weilforge._ckernels', reason='compiled extension not built')

small = st.integers(-1000, 1000)
huge = st.one_of(small, st.integers(-(1 << 70), 1 << 70), st.sampled_from([(1 << 62) - 1, -(1 << 62), 1 << 63]))
seqs = st.lists(small, min_size=1, max_size=12)
big_seqs = st.lists(huge, min_size=1, max_size=8)


def naive_mul(a, b):
    return [sum(a[i] * b[k - i] for i in range(len(a)) if 0 <= k - i < len(b))
            for k in range(len(a) + len(b) - 1)]


def test_backend_reported():
    assert kernels.BACKEND in ('python', 'cython')


@given(st.one_of(seqs, big_seqs), st.one_of(seqs, big_seqs))
def test_poly_mul(a, b):
    want = naive_mul(a, b)
    assert list(pyk.poly_mul(a, b)) == want
    assert list(ck.poly_mul(a, b)) == want


def test_poly_mul_word_boundary():
    # products right at the int64 guard: one side takes the word path, the other must not
    a = [(1 << 31) - 1] * 3
    assert list(ck.poly_mul(a, a)) == naive_mul(a, a)
    b = [(1 << 61), 1]
    assert list(ck.poly_mul(b, [3, 5])) == naive_mul(b, [3, 5])
    c = [-(1 << 62)] * 2
    assert list(ck.poly_mul(c, c)) == naive_mul(c, c)


@given(st.lists(huge, max_size=10), huge, st.integers(1, 1 << 40))
def test_eval_homogeneous(coeffs, p, q):
    want = sum(c * p ** i * q ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs))
    assert pyk.eval_homogeneous(coeffs, p, q) == want
    assert ck.eval_homogeneous(coeffs, p, q) == want
    assert ck.eval_homogeneous(coeffs, p, 1) == pyk.eval_homogeneous(coeffs, p, 1)


@given(st.lists(huge, max_size=10), st.lists(small, min_size=0, max_size=5), st.sampled_from([1, -1]))
def test_divmod_unit(a, low, lead):
    d = low + [lead]
    q, r = pyk.divmod_unit(a, d)
    assert ck.divmod_unit(a, d) == (q, r)
    # a = q*d + r with deg r < deg d
    prod = naive_mul(list(q), d) if q else []
    width = max(len(a), len(prod), len(r))

    def pad(v):
        return list(v) + [0] * (width - len(v))

    assert [x + y for x, y in zip(pad(prod), pad(r))] == pad(a)
    assert len(r) < len(d)


@given(st.lists(st.lists(small, min_size=1, max_size=6), max_size=6), huge, st.integers(1, 1 << 20))
def test_sign_variations(chain, p, q):
    vals = [pyk.eval_homogeneous(c, p, q) for c in chain]
    signs = [v > 0 for v in vals if v]
    want = sum(1 for x, y in pairwise(signs) if x != y)
    assert pyk.sign_variations(chain, p, q) == want
    assert ck.sign_variations(chain, p, q) == want


def brute_candidates(lo1, hi1, lo2, hi2, scale, max_size):
    out = []
    for size in range(1, max_size + 1):
        for idx in combinations(range(len(lo1)), size):
            ok = True
            for lo, hi in ((lo1, hi1), (lo2, hi2)):
                a = sum(lo[i] for i in idx)
                b = sum(hi[i] for i in idx)
                t = Fraction(a, scale).__ceil__()
                ok = ok and t * scale <= b
            if ok:
                out.append(idx)
    return sorted(out)


@st.composite
def enclosures(draw, bound):
    n = draw(st.integers(0, 7))
    lo1 = draw(st.lists(st.integers(-bound, bound), min_size=n, max_size=n))
    lo2 = draw(st.lists(st.integers(-bound, bound), min_size=n, max_size=n))
    w1 = draw(st.lists(st.integers(0, 40), min_size=n, max_size=n))
    w2 = draw(st.lists(st.integers(0, 40), min_size=n, max_size=n))
    scale = draw(st.integers(1, 64))
    ms = draw(st.integers(0, 9))
    return lo1, [a + w for a, w in zip(lo1, w1)], lo2, [a + w for a, w in zip(lo2, w2)], scale, ms


@settings(max_examples=150)
@given(enclosures(500))
def test_subset_candidates(args):
    want = brute_candidates(*args)
    assert sorted(pyk.subset_candidates(*args)) == want
    assert sorted(ck.subset_candidates(*args)) == want
    assert ck.subset_candidates(*args) == pyk.subset_candidates(*args)


@settings(max_examples=40)
@given(enclosures(1 << 66))
def test_subset_candidates_fallback(args):
    assert ck.subset_candidates(*args) == pyk.subset_candidates(*args)
