"""Shared fixtures and the acceptance-criterion report."""

from __future__ import annotations

import os
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings

from weilforge.exactpoly import IntPoly

settings.register_profile('default', deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('thorough', deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))

_X = sp.Symbol('x')
_CRITERIA: dict[int, dict] = {}


def to_sympy(p: IntPoly) -> sp.Poly:
    return sp.Poly(list(reversed(p.coeffs)) or [0], _X, domain='ZZ')


def sympy_irreducible(p: IntPoly) -> bool:
    _, fl = sp.factor_list(to_sympy(p))
    return len(fl) == 1 and fl[0][1] == 1


def sympy_real_roots(p: IntPoly):
    return [Fraction(r) if r.is_Rational else r for r in sp.real_roots(to_sympy(p))]


@pytest.fixture(scope='session')
def small_table():
    from weilforge.discquality import build_table
    return build_table(3001)


def pytest_configure(config):
    config.addinivalue_line('markers', 'criterion(n, text): acceptance criterion number and summary')


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker('criterion')
    if mark is None or rep.when not in ('setup', 'call'):
        return
    n, text = mark.args
    entry = _CRITERIA.setdefault(n, {'text': text, 'ok': True, 'tests': 0})
    if rep.when == 'call':
        entry['tests'] += 1
    if rep.failed or (rep.when == 'setup' and rep.skipped):
        entry['ok'] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section('acceptance criteria')
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = 'PASS' if e['ok'] and e['tests'] else 'FAIL'
        terminalreporter.write_line(f'criterion {n:2d}: {status}  {e["text"]}')
