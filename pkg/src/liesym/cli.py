"""Command-line interface.

    liesym classify --group E0tilde2 --mu 1 --nu 2
    liesym curvature --json algebra.json
    liesym geodesic --nu 4 --v1 1 --v3 1 --t-end 10 --format csv
    liesym symmetry --nu 0.25 --x 1 --s 1
    liesym verify-paper --only geodesics

Exit codes: 0 success, 1 a verification check failed, 2 usage or input error.
"""
import argparse
import contextlib
import json
import logging
import sys
from . import classification, curvature, geodesics, milnor, verify
from .catalog import load_algebra
from .config import RunConfig, Tolerances, DEFAULT_TOLERANCES, resolve_seed
from .enum import G0Form, HaLeeGroup, OutputFormat
from .errors import InputError, LieSymError
from .typing import Any, Iterator, Mapping, Sequence, SupportsWrite


logger = logging.getLogger(__name__)


EXIT_OK      = 0
EXIT_FAILED  = 1
EXIT_USAGE   = 2

_DEFAULT_FORMAT = {'geodesic': OutputFormat.CSV}




# [ Parser ]

def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _add_algebra_args(p: argparse.ArgumentParser):
    src = p.add_argument_group("algebra", "a normal-form group with parameters, or a JSON record")
    src.add_argument('--group', type=str, help=f"one of {', '.join(map(str, HaLeeGroup))}")
    src.add_argument('--mu', type=float)
    src.add_argument('--nu', type=float)
    src.add_argument('--lambda', dest='lam', type=float)
    src.add_argument('--D', type=float)
    src.add_argument('--form', type=str, default=str(G0Form.A1), help="G0 normal form, A1 or A2")
    src.add_argument('--json', dest='json_path', metavar='PATH', help="algebra record (object or list of objects)")


def _add_common_args(p: argparse.ArgumentParser):
    p.add_argument('--tol', type=_positive, help="local-symmetry tolerance (verify-paper: every check bound)")
    p.add_argument('--seed', type=int, help="random seed (default: $LIESYM_SEED or 42)")
    p.add_argument('--out', dest='output_path', metavar='PATH', help="write output here instead of stdout")
    p.add_argument('--format', dest='output_format', type=str, help="json or csv (csv: geodesic only)")
    p.add_argument('-v', '--verbose', action='count', default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='liesym',
        description="Local symmetry of left-invariant metrics on 3-dimensional Lie groups.",
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('classify', help="decide local symmetry of an algebra or normal form")
    _add_algebra_args(p)
    _add_common_args(p)

    p = sub.add_parser('curvature', help="Milnor constants, sectional values and the ∇R residual")
    _add_algebra_args(p)
    _add_common_args(p)

    p = sub.add_parser('geodesic', help="integrate a geodesic of the E0(2) cover against its closed form")
    p.add_argument('--nu', type=float, required=True)
    p.add_argument('--v1', type=float, default=0.0)
    p.add_argument('--v2', type=float, default=0.0)
    p.add_argument('--v3', type=float, default=0.0)
    p.add_argument('--t-end', type=float, default=1.0)
    p.add_argument('--step', type=float, default=1e-3)
    _add_common_args(p)

    p = sub.add_parser('symmetry', help="push the geodesic symmetry at e down to E0(2) through lifts of a point")
    p.add_argument('--nu', type=float, required=True)
    p.add_argument('--x', type=float, default=0.0)
    p.add_argument('--y', type=float, default=0.0)
    p.add_argument('--s', type=float, default=0.0, help="angle in (-pi, pi]")
    p.add_argument('--lifts', type=int, default=3, help="use lifts k = -K..K")
    _add_common_args(p)

    p = sub.add_parser('verify-paper', help="run the verification checks")
    p.add_argument('--only', action='append', default=[], help="check id or group (repeatable, comma separated)")
    p.add_argument('--workers', type=int, default=None)
    _add_common_args(p)
    return parser


_PARAM_NAMES = ('group', 'mu', 'nu', 'lam', 'D', 'form', 'v1', 'v2', 'v3', 't_end', 'step', 'x', 'y', 's', 'lifts', 'workers')


def make_config(args: argparse.Namespace) -> RunConfig:
    fmt = args.output_format
    if fmt is None:
        fmt = _DEFAULT_FORMAT.get(args.command, OutputFormat.JSON)
    elif fmt not in OutputFormat:
        raise InputError(f"unknown output format {fmt!r}; expected json or csv")
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.CSV and args.command != 'geodesic':
        raise InputError(f"--format csv is only available for geodesic, not {args.command}")

    only = tuple(
        name.strip()
        for item in getattr(args, 'only', ())
        for name in item.split(',')
        if name.strip()
    )
    return RunConfig(
        command      =args.command,
        params       ={k: getattr(args, k) for k in _PARAM_NAMES if getattr(args, k, None) is not None},
        json_path    =getattr(args, 'json_path', None),
        tolerance    =args.tol,
        seed         =resolve_seed(args.seed),
        only         =only,
        output_path  =args.output_path,
        output_format=fmt,
    )




# [ Commands ]

def _tolerances(config: RunConfig) -> Tolerances:
    if config.tolerance is None:
        return DEFAULT_TOLERANCES
    return DEFAULT_TOLERANCES.with_overrides(symmetric=config.tolerance)


def _records(config: RunConfig) -> list[Mapping[str, Any]]:
    if config.json_path is not None:
        try:
            with open(config.json_path, encoding='utf-8') as f:
                data = json.load(f)
        except OSError as exc:
            raise InputError(f"cannot read {config.json_path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{config.json_path} is not valid JSON: {exc}") from None
        return data if isinstance(data, list) else [data]

    params = config.params
    if 'group' not in params:
        raise InputError("give --group (with its parameters) or --json PATH")
    record = {k: params[k] for k in ('group', 'mu', 'nu', 'D', 'form') if k in params}
    if 'lam' in params:
        record['lambda'] = params['lam']
    return [record]


_NORMAL_FORM_KEYS = ('mu', 'nu', 'lambda', 'lam')


def _halee_metric(record: Mapping[str, Any]) -> 'classification.HaLeeMetric | None':
    """The normal form a record names, when it names one."""
    if 'group' not in record or 'metric' in record or 'constants' in record:
        return None
    group = HaLeeGroup(record['group']) if record['group'] in HaLeeGroup else None
    if group is None:
        raise InputError(f"unknown group {record['group']!r}")
    if group is not HaLeeGroup.R3 and not any(k in record for k in _NORMAL_FORM_KEYS):
        return None
    return classification.HaLeeMetric(
        group,
        mu  =record.get('mu'),
        nu  =record.get('nu'),
        lam =record.get('lambda', record.get('lam')),
        D   =record.get('D'),
        form=record.get('form', G0Form.A1),
    )


def cmd_classify(config: RunConfig) -> Iterator[dict[str, Any]]:
    tol = _tolerances(config)
    for record in _records(config):
        metric = _halee_metric(record)
        if metric is not None:
            yield classification.classify_halee(metric, tol).to_json()
        else:
            yield classification.classify(load_algebra(record), tol).to_json()


def cmd_curvature(config: RunConfig) -> Iterator[dict[str, Any]]:
    tol = _tolerances(config)
    for record in _records(config):
        metric = _halee_metric(record)
        mla    = metric.algebra() if metric is not None else load_algebra(record)
        frame  = milnor.milnor_frame(mla, tol)
        _, curv, nabla = curvature.frame_tensors(frame)
        yield {
            'kind'             : str(frame.kind),
            'milnor_constants' : list(frame.constants),
            'family'           : milnor.identify_family(frame, tol.frame).to_json(),
            'sectional'        : list(curvature.sectional_curvatures(curv)),
            'residual'         : nabla.residual(),
            'locally_symmetric': nabla.residual() <= tol.symmetric,
            'frame_P'          : frame.P.p.tolist(),
        }


def cmd_geodesic(config: RunConfig, out: SupportsWrite[str]) -> int:
    p  = config.params
    nu = p['nu']
    v  = geodesics.AlgebraVector(p.get('v1', 0.0), p.get('v2', 0.0), p.get('v3', 0.0))
    path   = geodesics.integrate_geodesic(nu, v, p.get('t_end', 1.0), p.get('step', 1e-3))
    closed = geodesics.closed_geodesic_path(nu, v, path.t)
    summary = {
        'nu'           : nu,
        'v'            : [v.v1, v.v2, v.v3],
        'samples'      : len(path),
        'max_deviation': path.max_deviation(closed),
        'energy_drift' : path.energy_drift(),
        'end'          : path.gamma[-1].tolist(),
    }
    if config.output_format is OutputFormat.CSV:
        geodesics.write_csv(out, path)
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
        return EXIT_OK

    for t, g, a, c in zip(path.t, path.gamma, path.alpha, closed.gamma):
        _emit(out, {
            't': t, 'x': g[0], 'y': g[1], 's': g[2],
            'alpha1': a[0], 'alpha2': a[1], 'alpha3': a[2],
            'closed': c.tolist(), 'deviation': float(abs(g - c).max()),
        })
    _emit(out, summary)
    return EXIT_OK


def cmd_symmetry(config: RunConfig) -> dict[str, Any]:
    p  = config.params
    nu = p['nu']
    q  = geodesics.GroupPoint(p.get('x', 0.0), p.get('y', 0.0), p.get('s', 0.0))
    k  = p.get('lifts', 3)
    if k < 0:
        raise InputError(f"--lifts must be non-negative, got {k}")
    consistent, images = geodesics.symmetry_welldefined(nu, q, range(-k, k + 1), _tolerances(config).consistency)
    return {
        'nu'             : nu,
        'point'          : [q.x, q.y, q.s],
        'lifts'          : list(range(-k, k + 1)),
        'consistent'     : consistent,
        'images'         : [[im.x, im.y, im.s] for im in images],
        'symmetric_space': geodesics.is_symmetric_space_E02(nu),
    }


def cmd_verify_paper(config: RunConfig) -> verify.VerificationReport:
    return verify.run_checks(config.tolerance, config.seed, config.only, config.params.get('workers'))




# [ Entry point ]

def _emit(out: SupportsWrite[str], record: Mapping[str, Any]):
    out.write(json.dumps(record, sort_keys=True, default=float) + '\n')


@contextlib.contextmanager
def _output(config: RunConfig) -> Iterator[SupportsWrite[str]]:
    if config.output_path is None:
        yield sys.stdout
        return
    try:
        f = open(config.output_path, 'w', encoding='utf-8', newline='')
    except OSError as exc:
        raise InputError(f"cannot write {config.output_path}: {exc.strerror}") from None
    with f:
        yield f


def run(config: RunConfig) -> int:
    with _output(config) as out:
        if config.command == 'classify':
            for record in cmd_classify(config):
                _emit(out, record)
        elif config.command == 'curvature':
            for record in cmd_curvature(config):
                _emit(out, record)
        elif config.command == 'geodesic':
            return cmd_geodesic(config, out)
        elif config.command == 'symmetry':
            _emit(out, cmd_symmetry(config))
        else:
            report = cmd_verify_paper(config)
            out.write(report.dumps() + '\n')
            for failed in report.failures():
                logger.error("check %s failed: %s", failed.check_id, failed.detail)
            return EXIT_OK if report.passed else EXIT_FAILED
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    logging.basicConfig(
        level=max(logging.DEBUG, logging.WARNING - 10 * args.verbose),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return run(make_config(args))
    except LieSymError as exc:
        print(f"liesym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
