"""Command-line interface: ``weilforge <command> ...``.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 budget
exhausted (partial output is still printed), 4 I/O failure.  Results go
to standard output, diagnostics to standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .discquality import EXTEND_MIN, RepTable, build_table, compliant_rep
from .exactpoly import to_text
from .family import RequiresPositiveN, WrongValuation, f, g, h, h_prime, naf
from .pipeline import (
    N_BUDGET,
    BudgetExhausted,
    certificate_problems,
    construct,
    dump_certificates,
    load_certificates,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4
TABLE_ENV = 'WEILFORGE_TABLE'
DEFAULT_TABLE = './compliant_table.jsonl'
QUALITY_FROM = 3095  # extension by z^4 - 1 needs quality7 >= 49 from here on


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    table_path: str
    n_budget: int = N_BUDGET
    jobs: int = 1
    format: str = 'text'

    def __post_init__(self):
        if self.n_budget < 1 or self.jobs < 1:
            raise UsageError('--n-max and --jobs must be positive')


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _config(args) -> CliConfig:
    path = getattr(args, 'table', None) or os.environ.get(TABLE_ENV) or DEFAULT_TABLE
    return CliConfig(path, getattr(args, 'n_max', N_BUDGET), getattr(args, 'jobs', 1),
                     getattr(args, 'format', 'text'))


def _load_table(path: str) -> RepTable | None:
    if not os.path.exists(path):
        return None
    return RepTable.load(path)


def table_summary(table: RepTable) -> dict:
    odd = [m for m in table if m % 2]
    late = [table[m].quality7 for m in table if m >= QUALITY_FROM]
    span = max(table.max_m, max(table, default=0))
    return {
        'entries': len(table),
        'exhaust': table.exhaust_count,
        'max_m': span,
        'missing': sum(1 for m in range(1, span + 1, 2) if m not in table),
        'min_quality7_from_3095': min(late) if late else None,
        'sources': {s: sum(1 for r in table.values() if r.src == s)
                    for s in sorted({r.src for r in table.values()})},
        'even_keys': len(table) - len(odd),
    }


def _summary_line(s: dict) -> str:
    parts = [f'entries={s["entries"]}']
    if s['exhaust'] is not None:
        parts.append(f'exhaust={s["exhaust"]}')
    parts += [f'max_m={s["max_m"]}', f'missing={s["missing"]}',
              f'min_quality7(m>=3095)={s["min_quality7_from_3095"]}']
    return ' '.join(parts)


# -- commands ------------------------------------------------------------------

def cmd_order(args) -> int:
    cfg = _config(args)
    if args.m < 1:
        raise UsageError('m must be positive')
    if args.count < 1:
        raise UsageError('--count must be positive')
    table = _load_table(cfg.table_path) if args.m % 2 else None
    code = EXIT_OK
    try:
        certs = construct(args.m, args.count, table, n_max=cfg.n_budget)
    except BudgetExhausted as exc:
        _err(f'budget exhausted: {exc}')
        for fail in exc.failures:
            _err(f'  n={fail["n"]}: {fail["reason"]}')
        certs, code = exc.partial, EXIT_BUDGET
    if cfg.format == 'json':
        sys.stdout.write(dump_certificates(certs))
    else:
        for c in certs:
            print(f'm={c.m} n={c.n} g={c.g} R(x) = {to_text(c.weil_R)}')
    return code


def cmd_family(args) -> int:
    kind, n = args.kind, args.n
    if n is None or n < 0:
        raise UsageError('--n must be given and nonnegative')
    try:
        if kind == 'f':
            p = f(n)
        elif kind == 'g':
            if args.k is None or args.k < 0:
                raise UsageError('family g needs --k >= 0')
            p = g(n, args.k)
        else:
            if args.m is None or args.m < 1:
                raise UsageError(f'family {kind} needs --m >= 1')
            p = h(n, args.m) if kind == 'h' else h_prime(args.m, n)
    except (WrongValuation, RequiresPositiveN) as exc:
        raise UsageError(str(exc)) from exc
    if args.format == 'json':
        print(json.dumps({'kind': kind, 'n': n, 'coeffs': [str(c) for c in p.coeffs]}))
    else:
        print(to_text(p))
    return EXIT_OK


def cmd_naf(args) -> int:
    if args.m < 1:
        raise UsageError('m must be positive')
    rep = naf(args.m)
    if args.format == 'json':
        print(json.dumps({'m': args.m, 'digits': list(rep.digits), 'k': rep.k}))
    else:
        print(f'digits=[{",".join(str(a) for a in rep.digits)}] k={rep.k}')
    return EXIT_OK


def cmd_compliant(args) -> int:
    cfg = _config(args)
    if args.m < 1 or args.m % 2 == 0:
        raise UsageError('m must be odd and positive')
    table = _load_table(cfg.table_path)
    try:
        rep = compliant_rep(args.m, table)
    except KeyError:
        _err(f'building a table up to {args.m} (none covers it at {cfg.table_path})')
        rep = compliant_rep(args.m, build_table(args.m, jobs=cfg.jobs))
    if cfg.format == 'json':
        print(json.dumps(rep.to_record()))
    else:
        print(f'm={rep.m} Q(z) = {to_text(rep.q, "z")} quality7={rep.quality7} src={rep.src}')
    return EXIT_OK


def cmd_table(args) -> int:
    cfg = _config(args)
    if args.max < 1:
        raise UsageError('--max must be positive')
    out = args.out or cfg.table_path
    base = _load_table(out)
    if base is not None:
        bad = base.problems(exact=True, jobs=cfg.jobs)
        if bad:
            for m, probs in bad.items():
                _err(f'm={m}: {"; ".join(probs)}')
            _err(f'{out}: existing table failed verification; not extending it')
            return EXIT_VERIFY
        _err(f'resuming from {len(base)} verified entries in {out}')
    table = build_table(args.max, jobs=cfg.jobs, base=base)
    table.save(out)
    s = table_summary(table)
    if cfg.format == 'json':
        print(json.dumps(s, sort_keys=True))
    else:
        print(_summary_line(s))
    return EXIT_OK


def _looks_like_table(text: str) -> bool:
    first = next((ln for ln in text.splitlines() if ln.strip()), '')
    try:
        obj = json.loads(first)
    except json.JSONDecodeError:
        return False
    return isinstance(obj, dict) and 'quality7' in obj


def cmd_verify(args) -> int:
    cfg = _config(args)
    with open(args.path, encoding='utf-8') as fh:
        text = fh.read()
    failures = 0
    if _looks_like_table(text):
        table = RepTable.loads(text)
        bad = table.problems(exact=True, jobs=cfg.jobs)
        for m in sorted(table):
            if m >= QUALITY_FROM and table[m].quality7 < EXTEND_MIN:
                bad.setdefault(m, []).append(f'quality7 below {EXTEND_MIN} at m >= {QUALITY_FROM}')
        for m, probs in sorted(bad.items()):
            _err(f'm={m}: {"; ".join(probs)}')
        failures = len(bad)
        s = table_summary(table)
        s['failures'] = failures
        if cfg.format == 'json':
            print(json.dumps(s, sort_keys=True))
        else:
            print(_summary_line(s) + f' failures={failures}')
    else:
        certs = load_certificates(text)
        for i, c in enumerate(certs):
            probs = certificate_problems(c)
            if probs:
                failures += 1
                _err(f'certificate {i} (m={c.m} n={c.n}): {"; ".join(probs)}')
        if cfg.format == 'json':
            print(json.dumps({'certificates': len(certs), 'failures': failures}))
        else:
            print(f'certificates={len(certs)} failures={failures}')
    return EXIT_VERIFY if failures else EXIT_OK


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument('--format', choices=('text', 'json'), default='text')
    tbl = argparse.ArgumentParser(add_help=False)
    tbl.add_argument('--table', help=f'table path (default ${TABLE_ENV} or {DEFAULT_TABLE})')
    jobs = argparse.ArgumentParser(add_help=False)
    jobs.add_argument('--jobs', type=int, default=1)

    p = _Parser(prog='weilforge', description='Certified Weil polynomials over F_2 of given order.')
    p.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = p.add_subparsers(dest='command', required=True, parser_class=_Parser)

    s = sub.add_parser('order', parents=[fmt, tbl], help='certificates for abelian varieties of order m')
    s.add_argument('m', type=int)
    s.add_argument('--count', type=int, default=1)
    s.add_argument('--n-max', type=int, default=N_BUDGET, dest='n_max')
    s.set_defaults(func=cmd_order)

    s = sub.add_parser('family', parents=[fmt], help='print f_n, g_{n,k}, h_{n,m} or h\'_{n,m}')
    s.add_argument('kind', choices=('f', 'g', 'h', 'hprime'))
    s.add_argument('--n', type=int)
    s.add_argument('--k', type=int)
    s.add_argument('--m', type=int)
    s.set_defaults(func=cmd_family)

    s = sub.add_parser('naf', parents=[fmt], help='nonadjacent form of m')
    s.add_argument('m', type=int)
    s.set_defaults(func=cmd_naf)

    s = sub.add_parser('compliant', parents=[fmt, tbl, jobs], help='compliant representation of odd m')
    s.add_argument('m', type=int)
    s.set_defaults(func=cmd_compliant)

    s = sub.add_parser('table', parents=[fmt, tbl, jobs], help='build or extend the representation table')
    s.add_argument('--max', type=int, required=True)
    s.add_argument('--out')
    s.set_defaults(func=cmd_table)

    s = sub.add_parser('verify', parents=[fmt, jobs], help='re-check a table or certificate file')
    s.add_argument('path')
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _err(f'usage error: {exc}')
        return EXIT_USAGE
    except OSError as exc:
        _err(f'I/O error: {exc}')
        return EXIT_IO
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        _err(f'malformed input: {exc}')
        return EXIT_VERIFY


if __name__ == '__main__':
    sys.exit(main())
