"""Command-line experiment driver.

Subcommands: ``order-study``, ``longrun``, ``symplecticity``, ``tableau-dump``.
Exit codes: 0 on success, 1 on usage errors, 2 when a solver fails.
"""

import argparse
import sys

from .errors import InvalidInput, LieSympError
from .harness import (
    METHODS,
    PROBLEMS,
    ExperimentConfig,
    run_longrun,
    run_order_study,
    run_symplecticity_check,
)
from .tableaux import TABLEAUX, format_tableau


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(p, with_h=True):
    p.add_argument("--problem", choices=PROBLEMS, default="dipole")
    p.add_argument("--method", choices=METHODS, default="vrkmk")
    p.add_argument("--tableau", choices=sorted(TABLEAUX), default="gauss1")
    if with_h:
        p.add_argument("--h", type=float, default=None, help="step size")
    p.add_argument("--r", type=int, default=None, dest="cutoff_r",
                   help="override the tableau's dexpinv cut-off")
    p.add_argument("--fp-tol", type=float, default=1e-14,
                   help="stage fixed-point tolerance (default 1e-14)")
    p.add_argument("--fp-max-iter", type=int, default=100,
                   help="stage fixed-point iteration cap (default 100)")
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--preset", default=None,
                   help="named initial data; 'paper-dipole' installs the "
                        "canonical dipole data m=q=beta=1, alpha=0.1, fixed "
                        "g0, mu0 = g0 I g0' e2 (the dipole default)")


def build_parser():
    parser = _Parser(prog="liesymp",
                     description="Symplectic Lie group integrator experiments.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser(
        "order-study",
        help="global-error convergence study against a fine reference",
        description="Integrate to --t-end for a decreasing list of step "
                    "sizes, compare with a reference trajectory (3-stage "
                    "Gauss at h ~ 1e-3), and fit the error slope.",
        epilog="CSV columns: h, error, iterations, slope_local")
    _add_common(p, with_h=False)
    p.add_argument("--h-min", type=float, default=1e-3)
    p.add_argument("--h-max", type=float, default=1e-1)
    p.add_argument("--h-count", type=int, default=12)
    p.add_argument("--t-end", type=float, default=0.5)
    p.add_argument("--error-component", choices=("both", "q", "mu"),
                   default="both",
                   help="which error norm to report (default: sum of both)")

    p = sub.add_parser(
        "longrun",
        help="energy drift over a long trajectory",
        description="Integrate --steps steps (or --t-end / --h) and report "
                    "the energy error time series and its extrema.",
        epilog="CSV columns: t, denergy (thinned by --stride)")
    _add_common(p)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--t-end", type=float, default=1000.0)
    p.add_argument("--stride", type=int, default=None,
                   help="output thinning stride (default: <= 10^4 rows)")

    p = sub.add_parser(
        "symplecticity",
        help="finite-difference Jacobian symplecticity test of one step",
        description="Push a trivialized tangent frame through one step and "
                    "report max |J' Omega1 J - Omega0| (pass <= 1e-6).",
        epilog="CSV columns: method, tableau, h, defect, passed")
    _add_common(p)

    p = sub.add_parser(
        "tableau-dump",
        help="print a Butcher tableau",
        description="Print stage count, c | a rows, b, and cut-off r.")
    p.add_argument("--tableau", choices=sorted(TABLEAUX), required=True)

    return parser


def _config(args, **overrides):
    fields = ("problem", "method", "tableau", "h", "h_min", "h_max", "h_count",
              "steps", "t_end", "cutoff_r", "fp_tol", "fp_max_iter", "out",
              "preset", "stride", "error_component")
    kwargs = {k: getattr(args, k) for k in fields if hasattr(args, k)}
    kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code

    try:
        if args.command == "order-study":
            res = run_order_study(_config(args))
            print(f"# reference: 3-stage Gauss at h = {res.reference_h:g}")
            print(f"{'h':>12}  {'error':>13}  {'iters':>6}  {'slope':>6}")
            for row in res.rows:
                print(f"{row.h:12.6g}  {row.error:13.6e}  "
                      f"{row.mean_iterations:6.1f}  {row.local_slope:6.2f}")
            print(f"fitted slope: {res.slope:.3f} over {res.n_fit} points")
        elif args.command == "longrun":
            res = run_longrun(_config(args))
            print(f"max |dH| = {res.max_abs_denergy:.6e}  "
                  f"(first 10%: {res.first_window_max:.6e}, "
                  f"last 10%: {res.last_window_max:.6e}, "
                  f"mean stage iterations: {res.mean_iterations:.1f})")
        elif args.command == "symplecticity":
            rep = run_symplecticity_check(_config(args))
            verdict = "PASS" if rep.passed else "FAIL"
            print(f"{rep.method}/{rep.tableau} h={rep.h:g}: "
                  f"defect = {rep.defect:.3e} [{verdict}]")
        elif args.command == "tableau-dump":
            print(format_tableau(TABLEAUX[args.tableau]()))
    except InvalidInput as exc:
        print(f"liesymp: error: {exc}", file=sys.stderr)
        return 1
    except LieSympError as exc:
        print(f"liesymp: solver failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
