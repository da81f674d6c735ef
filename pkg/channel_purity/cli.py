"""
Command line front end.

  channel-purity nu-p wh:3 --p inf
  channel-purity delta-sweep --p-min 2 --p-max 10 --steps 81 --p inf
  channel-purity find-p0 --tol 1e-6
  channel-purity schmidt-scan --p 5 --grid 60
  channel-purity mu antisym3-squared
  channel-purity verify wh:4 --trials 50

Data goes to stdout (or ``--output``); summaries and logs go to stderr.
"""

import argparse
import json
import logging
import math
import sys
from enum import IntEnum

import numpy as np

from channel_purity import config
from channel_purity.channels import (channel_to_vector, load_channel,
                                     load_tensor_vector, tensor)
from channel_purity.channels.verify import verify_channel
from channel_purity.channels.werner_holevo import wh_channel
from channel_purity.config import OptimizerConfig
from channel_purity.injective import (antisymmetric_vector,
                                      maximally_entangled_factors, mu)
from channel_purity.linalg import Exponent
from channel_purity.purity import (delta_max_entangled, delta_sweep,
                                   find_p0, nu_p_numeric, nu_p_wh_analytic,
                                   schmidt_profile, schmidt_scan,
                                   sign_changes)
from channel_purity.utils import (BracketFailure, NoConvergence, format_float,
                                  get_val, write_csv)

log = logging.getLogger(__name__)

WH_PREFIX = 'wh:'
MAX_WH_DIM = 64


class ExitCode(IntEnum):
    OK = 0
    INPUT_ERROR = 2
    NO_CONVERGENCE = 3
    VERIFY_FAILED = 4


class RunConfig:
    """Options shared by every subcommand.

    >>> RunConfig(restarts=0)
    Traceback (most recent call last):
    ...
    ValueError: restarts must be >= 1, got 0
    """
    FORMATS = ('csv', 'json')

    def __init__(self, seed=None, restarts=None, tolerance=None,
                 output_format='csv', output_path=None, strict=False):
        if restarts is not None and restarts < 1:
            raise ValueError("restarts must be >= 1, got {}".format(restarts))
        if tolerance is not None and not tolerance > 0:
            raise ValueError("tolerance must be > 0, got {}".format(tolerance))
        if output_format not in self.FORMATS:
            raise ValueError("unknown output format {!r}".format(output_format))
        self.seed = config.SEED if seed is None else seed
        self.restarts = restarts
        self.tolerance = tolerance
        self.output_format = output_format
        self.output_path = output_path
        self.strict = strict

    def optimizer(self):
        return OptimizerConfig(restarts=self.restarts, tol=self.tolerance)


def wh_dim(source):
    """Dimension of a ``wh:d`` source, or None for anything else."""
    if not source.startswith(WH_PREFIX):
        return None
    return get_val(source[len(WH_PREFIX):], 3, MAX_WH_DIM)


def build_channel(source, check=True):
    d = wh_dim(source)
    if d is not None:
        return wh_channel(d)
    return load_channel(source, check=check)


def build_vector(source):
    if source == 'antisym3':
        return antisymmetric_vector(3)
    if source == 'antisym3-squared':
        v = antisymmetric_vector(3)
        return v.tensor(v)
    if source.startswith(WH_PREFIX):
        return channel_to_vector(build_channel(source))
    return load_tensor_vector(source)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return format_float(v)
    return v


def emit(run, header, rows):
    """Write a table in the run's output format, to stdout or a file."""
    fh = sys.stdout
    if run.output_path is not None:
        fh = open(run.output_path, 'w', newline='')
    try:
        if run.output_format == 'csv':
            write_csv(fh, header, rows)
        else:
            records = [{k: _json_value(v) for k, v in zip(header, row)}
                       for row in rows]
            json.dump(records, fh, indent=2)
            fh.write('\n')
    finally:
        if fh is not sys.stdout:
            fh.close()


def summary(text):
    print(text, file=sys.stderr)


def cmd_nu_p(args, run):
    p = Exponent.coerce(args.p)
    ch = build_channel(args.source)
    d = wh_dim(args.source)
    analytic = None
    if d is not None:
        analytic = nu_p_wh_analytic(d, p)
    if args.tensor_square:
        ch = tensor(ch, ch)
        if analytic is not None:
            analytic = analytic ** 2

    report = nu_p_numeric(ch, p, run.optimizer(), run.seed)
    gap = ''
    if analytic is not None:
        gap = math.log(report.value) - math.log(analytic)
    schmidt = ''
    if len(ch.input_factors) == 2:
        schmidt = ';'.join(format_float(c) for c in
                           schmidt_profile(report.maximizer,
                                           ch.input_factors))
    emit(run, ['p', 'analytic', 'numeric', 'gap', 'restarts', 'converged',
               'schmidt'],
         [(float(p), '' if analytic is None else analytic, report.value, gap,
           report.restarts_used, int(report.converged), schmidt)])
    if not report.converged and run.strict:
        return ExitCode.NO_CONVERGENCE
    return ExitCode.OK


def cmd_delta_sweep(args, run):
    rows = delta_sweep(args.p_min, args.p_max, args.steps, d=args.dim)
    changes = sign_changes(rows)
    for p in args.p or []:
        p = Exponent.coerce(p)
        rows.append((float(p), delta_max_entangled(p, args.dim)))
    emit(run, ['p', 'delta'], rows)
    if changes:
        for lo, hi in changes:
            summary("sign change in [{}, {}]".format(format_float(lo),
                                                     format_float(hi)))
    else:
        summary("no sign change")
    return ExitCode.OK


def cmd_find_p0(args, run):
    p0 = find_p0(args.tol, d=args.dim, strict=run.strict)
    emit(run, ['p0'], [(p0,)])
    return ExitCode.OK


def cmd_schmidt_scan(args, run):
    scan = schmidt_scan(args.p, args.grid)
    emit(run, ['c1sq', 'c2sq', 'delta'], scan.rows)
    c1sq, c2sq, value = scan.best
    summary("argmax c1sq={} c2sq={} delta={} ({})".format(
        format_float(c1sq), format_float(c2sq), format_float(value),
        scan.kind()))
    return ExitCode.OK


def cmd_mu(args, run):
    v = build_vector(args.source)
    warm = ()
    if args.source == 'antisym3-squared':
        warm = [maximally_entangled_factors((3, 3, 3), (3, 3, 3))]
    fit = mu(v, run.optimizer(), run.seed, warm_starts=warm)
    emit(run, ['value', 'restarts', 'converged'],
         [(fit.value, fit.restarts_used, int(fit.converged))])
    if not fit.converged and run.strict:
        return ExitCode.NO_CONVERGENCE
    return ExitCode.OK


def cmd_verify(args, run):
    d = wh_dim(args.source)
    ch = build_channel(args.source, check=False)
    rng = np.random.default_rng(run.seed)
    report = verify_channel(ch, args.trials, rng, werner_holevo=d is not None,
                            tol=run.tolerance)
    emit(run, ['check', 'value', 'tolerance', 'passed'],
         [(c.name, c.value, c.tolerance, int(c.passed))
          for c in report.checks])
    summary("verify {}: {}".format(args.source,
                                   "pass" if report.passed else "FAIL"))
    if not report.passed:
        return ExitCode.VERIFY_FAILED
    return ExitCode.OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="Master seed (default: $PURITY_SEED or 0)")
    common.add_argument("--restarts", type=int, default=None,
                        help="Optimizer restarts")
    common.add_argument("--tolerance", type=float, default=None,
                        help="Optimizer stopping tolerance, or verification "
                        "tolerance for verify")
    common.add_argument("--format", dest="output_format", default="csv",
                        choices=RunConfig.FORMATS)
    common.add_argument("--output", dest="output_path", default=None,
                        help="Write data here instead of stdout")
    common.add_argument("--strict", action="store_true",
                        help="Exit 3 when an optimizer does not converge")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="channel-purity",
        description="Maximal output purity and injective norms of quantum "
        "channels")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nu-p", parents=[common],
                       help="Maximal output p-norm of a channel")
    p.add_argument("source", help="wh:d or a channel JSON file")
    p.add_argument("--p", required=True, help="Exponent > 1, or inf")
    p.add_argument("--tensor-square", action="store_true",
                   help="Use the channel tensored with itself")
    p.set_defaults(func=cmd_nu_p)

    p = sub.add_parser("delta-sweep", parents=[common],
                       help="Gap at the maximally entangled input over p")
    p.add_argument("--p-min", type=float, default=2.0)
    p.add_argument("--p-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=81)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--p", action="append",
                   help="Extra exponent appended after the sweep (repeatable)")
    p.set_defaults(func=cmd_delta_sweep)

    p = sub.add_parser("find-p0", parents=[common],
                       help="Exponent where the entangled gap crosses zero")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--dim", type=int, default=3)
    p.set_defaults(func=cmd_find_p0)

    p = sub.add_parser("schmidt-scan", parents=[common],
                       help="Gap over the Schmidt simplex, d = 3")
    p.add_argument("--p", required=True, help="Exponent > 1, or inf")
    p.add_argument("--grid", type=int, default=60)
    p.set_defaults(func=cmd_schmidt_scan)

    p = sub.add_parser("mu", parents=[common], help="Injective norm")
    p.add_argument("source",
                   help="antisym3, antisym3-squared, wh:d or a vector JSON "
                   "file")
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("verify", parents=[common],
                       help="Structural checks of a channel")
    p.add_argument("source", help="wh:d or a channel JSON file")
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True)
    try:
        run = RunConfig(args.seed, args.restarts, args.tolerance,
                        args.output_format, args.output_path, args.strict)
        return int(args.func(args, run))
    except NoConvergence as e:
        # only the eigensolver and strict find-p0 raise; no result to report
        log.error("no convergence: {}".format(e))
        return int(ExitCode.NO_CONVERGENCE)
    except (ValueError, KeyError, TypeError, OSError, BracketFailure) as e:
        log.error("{}: {}".format(type(e).__name__, e))
        return int(ExitCode.INPUT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
