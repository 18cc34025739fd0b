"""Command-line interface.

Subcommands::

    eigendetect detect   --eigs FILE --n N --m M | --snapshots FILE | --bins F1,F2,...
    eigendetect simulate --config exp.json --out report.csv [--workers W] [--seed S]
    eigendetect mp       {support,atom,pdf,cdf,moment,clt} --lambda L --c C [--x X] [--k K]
    eigendetect keff     --signal-eigs 10,3 --noise-var 1 --n N --m M
    eigendetect zsep     --lambda-j L --noise-var 1 --n N --m M --beta B

Exit status is 0 on success, 2 on usage or input errors and 3 on domain or
computation errors.
"""
import argparse
import json
import os
import sys
from math import isfinite

import jsonschema

from . import detectors, fileio
from .covariance import EigenSpectrum, bin_spectra, scm_eigenvalues
from .errors import DomainError
from .harness import ExperimentConfig, run_experiment
from .identifiability import effective_count, z_sep
from .rmt import MpLaw

SEED_ENV = 'EIGENDETECT_SEED'

METHOD_FLAGS = {
    'new': 'new',
    'mdl': 'mdl_wk',
    'mdl-mod': 'mdl_modified',
    'aic': 'aic_wk',
}


class UsageError(ValueError):
    pass


def _fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    return '{0:.6g}'.format(v)


def _float_list(text):
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected a comma-separated list of numbers: {0!r}'.format(text))


def _format_result(result, fmt):
    if fmt == 'json':
        return json.dumps(result.to_dict())
    if fmt == 'csv':
        lines = ['k,score'] + ['{0},{1}'.format(k, repr(s) if isfinite(s) else 'inf')
                              for k, s in result.scores]
        return '\n'.join(lines)
    lines = ['k_hat: {0}'.format(result.k_hat), 'method: {0}'.format(result.method), 'k\tscore']
    lines += ['{0}\t{1}'.format(k, _fmt(s)) for k, s in result.scores]
    return '\n'.join(lines)


def _emit(text, out=None):
    if out:
        with open(out, 'w') as fh:
            fh.write(text + '\n')
    else:
        print(text)


def cmd_detect(args):
    method = METHOD_FLAGS[args.method]
    if args.bins:
        if method != 'new':
            raise UsageError('--bins (wideband) is only available with --method new')
        snaps = [fileio.read_snapshots_csv(p, args.complex) for p in args.bins.split(',') if p]
        specs = bin_spectra(snaps)
        if args.beta is not None:
            specs = [EigenSpectrum(s.values, m=s.m, beta=args.beta) for s in specs]
        result = detectors.detect_new_wideband(specs)
    else:
        if args.eigs:
            if args.n is None or args.m is None:
                raise UsageError('--eigs requires --n and --m')
            vals = fileio.read_eigenvalues(args.eigs)
            if len(vals) != args.n:
                raise UsageError('{0} holds {1} eigenvalues but --n is {2}'.format(
                    args.eigs, len(vals), args.n))
            spec = EigenSpectrum(vals, m=args.m, beta=2 if args.beta is None else args.beta)
        else:
            spec = scm_eigenvalues(fileio.read_snapshots_csv(args.snapshots, args.complex))
            if args.beta is not None:
                spec = EigenSpectrum(spec.values, m=spec.m, beta=args.beta)
            if args.dump_eigs:
                fileio.write_eigenvalues(args.dump_eigs, spec.values)
        result = detectors.detect(spec, method)
    _emit(_format_result(result, args.format), args.out)
    return 0


def _resolve_seed(flag, data):
    if flag is not None:
        return flag
    if 'seed' in data:
        return None
    env = os.environ.get(SEED_ENV)
    if env is None:
        return None
    try:
        return int(env)
    except ValueError:
        raise UsageError('{0}={1!r} is not an integer'.format(SEED_ENV, env))


def cmd_simulate(args):
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError('{0}: invalid JSON ({1})'.format(args.config, exc))
    try:
        config = ExperimentConfig.from_dict(data, seed=_resolve_seed(args.seed, data))
    except jsonschema.ValidationError as exc:
        raise UsageError('config schema violation: {0}'.format(exc.message))
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError('config schema violation: {0}'.format(exc))
    report = run_experiment(config, workers=args.workers)
    csv_path, json_path = report.write(args.out, args.sidecar)
    if args.format == 'json':
        print(json.dumps({'csv': str(csv_path), 'sidecar': str(json_path), 'rows': len(report.rows)}))
    else:
        print('wrote {0} ({1} rows) and {2}'.format(csv_path, len(report.rows), json_path))
    return 0


def _flatten(value):
    for v in value:
        if isinstance(v, list):
            yield from _flatten(v)
        else:
            yield v


def _emit_value(args, query, inputs, value):
    if args.format == 'json':
        print(json.dumps({'query': query, 'inputs': inputs, 'value': value}))
    elif isinstance(value, list):
        print(' '.join(_fmt(v) for v in _flatten(value)))
    else:
        print(_fmt(value))


def cmd_mp(args):
    law = MpLaw(noise_var=args.lam, ratio=args.c)
    inputs = {'lambda': args.lam, 'c': args.c}
    q = args.query
    if q in ('pdf', 'cdf'):
        if args.x is None:
            raise UsageError('mp {0} requires --x'.format(q))
        inputs['x'] = args.x
        value = law.pdf(args.x) if q == 'pdf' else law.cdf(args.x)
    elif q == 'moment':
        if args.k is None:
            raise UsageError('mp moment requires --k')
        inputs['k'] = args.k
        value = law.moment(args.k)
    elif q == 'support':
        value = list(law.support())
    elif q == 'atom':
        value = law.atom
    else:
        inputs['beta'] = args.beta
        p = law.clt_params(args.beta)
        value = [list(p.mean_vector), [list(r) for r in p.covariance]]
    _emit_value(args, 'mp ' + q, inputs, value)
    return 0


def cmd_keff(args):
    value = effective_count(args.signal_eigs, args.noise_var, args.n, args.m)
    _emit_value(args, 'keff', {'signal_eigs': args.signal_eigs, 'noise_var': args.noise_var,
                               'n': args.n, 'm': args.m}, value)
    return 0


def cmd_zsep(args):
    value = z_sep(args.lambda_j, args.noise_var, args.n, args.m, args.beta)
    _emit_value(args, 'zsep', {'lambda_j': args.lambda_j, 'noise_var': args.noise_var,
                               'n': args.n, 'm': args.m, 'beta': args.beta}, value)
    return 0


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected an integer: {0!r}'.format(text))
    if v < 1:
        raise argparse.ArgumentTypeError('expected a positive integer: {0!r}'.format(text))
    return v


def build_parser():
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument('--format', choices=['plain', 'json', 'csv'], default='plain')

    parser = argparse.ArgumentParser(
        prog='eigendetect',
        description='Estimate the number of signals in white noise from sample eigenvalues.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('detect', parents=[fmt], help='estimate k from eigenvalues or snapshots')
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument('--eigs', metavar='FILE', help='eigenvalue list (CSV column or JSON array)')
    src.add_argument('--snapshots', metavar='FILE', help='n x m snapshot CSV')
    src.add_argument('--bins', metavar='FILES', help='comma-separated snapshot CSVs, one per frequency bin')
    p.add_argument('--n', type=_positive_int)
    p.add_argument('--m', type=_positive_int)
    p.add_argument('--complex', action='store_true', help='snapshot CSVs hold interleaved re,im columns')
    p.add_argument('--beta', type=int, choices=[1, 2, 4],
                   help='Dyson index (default: 2 for --eigs, from the data otherwise)')
    p.add_argument('--method', choices=sorted(METHOD_FLAGS), default='new')
    p.add_argument('--dump-eigs', metavar='FILE', help='write the snapshot eigenvalues to FILE')
    p.add_argument('--out', metavar='FILE', help='write the result to FILE instead of stdout')
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser('simulate', parents=[fmt], help='run a Monte-Carlo experiment')
    p.add_argument('--config', required=True, metavar='FILE')
    p.add_argument('--out', required=True, metavar='FILE', help='report CSV path')
    p.add_argument('--sidecar', metavar='FILE', help='JSON sidecar path (default: OUT with .json)')
    p.add_argument('--workers', type=_positive_int, default=1)
    p.add_argument('--seed', type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('mp', parents=[fmt], help='Marcenko-Pastur law queries')
    p.add_argument('query', choices=['support', 'atom', 'pdf', 'cdf', 'moment', 'clt'])
    p.add_argument('--lambda', dest='lam', type=float, default=1.0, help='noise variance')
    p.add_argument('--c', type=float, required=True, help='ratio n/m')
    p.add_argument('--x', type=float)
    p.add_argument('--k', type=int)
    p.add_argument('--beta', type=int, choices=[1, 2, 4], default=2)
    p.set_defaults(func=cmd_mp)

    p = sub.add_parser('keff', parents=[fmt], help='effective number of identifiable signals')
    p.add_argument('--signal-eigs', type=_float_list, required=True)
    p.add_argument('--noise-var', type=float, required=True)
    p.add_argument('--n', type=_positive_int, required=True)
    p.add_argument('--m', type=_positive_int, required=True)
    p.set_defaults(func=cmd_keff)

    p = sub.add_parser('zsep', parents=[fmt], help='signal/noise eigenvalue separation metric')
    p.add_argument('--lambda-j', type=float, required=True)
    p.add_argument('--noise-var', type=float, required=True)
    p.add_argument('--n', type=_positive_int, required=True)
    p.add_argument('--m', type=_positive_int, required=True)
    p.add_argument('--beta', type=int, choices=[1, 2, 4], default=2)
    p.set_defaults(func=cmd_zsep)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except DomainError as exc:
        print('error: {0}'.format(exc), file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print('error: {0}'.format(exc), file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
