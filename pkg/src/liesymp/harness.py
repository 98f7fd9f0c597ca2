"""Experiment drivers: order studies, long-run energy drift, symplecticity.

Everything here is deterministic: no random numbers, single-threaded
numerics, and CSV output with 17 significant digits, so identical
configurations reproduce bit-identical files.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import fastpath
from .cotangent import CotangentPoint
from .diagnostics import symplecticity_defect
from .errors import InvalidInput, LieSympError
from .integrators import (
    PHASE_STEPPERS,
    StepConfig,
    integrate,
    integrate_group,
)
from .systems import AbelianOscillator, DipoleSystem, NonregularSystem
from .tableaux import TABLEAUX, gauss_tableau

REFERENCE_H = 1e-3          # step of the reference trajectory (3-stage Gauss)
NOISE_FLOOR_FACTOR = 100.0  # static lower bound on the noise floor, x fp_tol

PROBLEMS = ("dipole", "nonregular", "abelian-oscillator")
METHODS = ("vrkmk", "vcg", "rkmk", "cg", "sprk", "naive")

# Initial data for the non-regular problem (any fixed smooth choice works;
# the q-dynamics is independent of mu for this system).
_NONREGULAR_MU0 = (0.3, -0.2, 0.5)


@dataclass
class ExperimentConfig:
    """Harness-level description of one experiment."""

    problem: str = "dipole"
    method: str = "vrkmk"
    tableau: str = "gauss1"
    h: float | None = None
    h_min: float = 1e-3
    h_max: float = 1e-1
    h_count: int = 12
    steps: int | None = None
    t_end: float = 0.5
    cutoff_r: int | None = None
    fp_tol: float = 1e-14
    fp_max_iter: int = 100
    out: str | None = None
    preset: str | None = None
    stride: int | None = None
    error_component: str = "both"   # both | q | mu

    def step_config(self, h):
        return StepConfig(h=h, fp_tol=self.fp_tol,
                          fp_max_iter=self.fp_max_iter,
                          cutoff_r=self.cutoff_r)


def make_problem(cfg):
    """Instantiate (system, initial state) for a problem id."""
    if cfg.preset is not None and cfg.preset != "paper-dipole":
        raise InvalidInput(f"unknown preset {cfg.preset!r}")
    if cfg.preset == "paper-dipole" and cfg.problem != "dipole":
        raise InvalidInput("--preset paper-dipole applies to the dipole problem")
    if cfg.problem == "dipole":
        sys_ = DipoleSystem()    # preset data: m=q=beta=1, alpha=0.1
        return sys_, sys_.initial_state()
    if cfg.problem == "nonregular":
        sys_ = NonregularSystem()
        return sys_, CotangentPoint(np.eye(3), np.array(_NONREGULAR_MU0))
    if cfg.problem == "abelian-oscillator":
        sys_ = AbelianOscillator(1)
        return sys_, sys_.initial_state()
    raise InvalidInput(f"unknown problem {cfg.problem!r}")


def make_tableau(cfg):
    try:
        return TABLEAUX[cfg.tableau]()
    except KeyError:
        raise InvalidInput(f"unknown tableau {cfg.tableau!r}; "
                           f"choices: {', '.join(sorted(TABLEAUX))}") from None


def _frozen_field(sys_, mu0):
    """Group-only vector field with the momentum frozen at mu0."""
    return lambda q: sys_.f(CotangentPoint(q, mu0)).xi


def _error(z, z_ref, component):
    """|mu - mu_ref|_2 + |q - q_ref|_2 (vector norm plus spectral norm)."""
    q, mu = z
    q_ref, mu_ref = z_ref
    q_err = float(np.linalg.norm(np.asarray(q) - np.asarray(q_ref), 2))
    mu_err = float(np.linalg.norm(mu - mu_ref))
    if component == "q":
        return q_err
    if component == "mu":
        return mu_err
    return q_err + mu_err


def _snap_h_list(t_end, h_min, h_max, h_count):
    """Log-spaced step sizes snapped so n = t_end / h is an integer."""
    if not (0.0 < h_min < h_max):
        raise InvalidInput("need 0 < h_min < h_max")
    targets = np.geomspace(h_max, h_min, h_count)
    n_list = sorted({max(1, round(t_end / h)) for h in targets})
    return [(t_end / n, n) for n in n_list]   # strictly decreasing h


@dataclass
class OrderStudyRow:
    h: float
    n_steps: int
    error: float
    mean_iterations: float
    local_slope: float


@dataclass
class OrderStudyResult:
    rows: list
    slope: float
    n_fit: int
    reference_h: float

    def row_tuples(self):
        return [(r.h, r.error, r.mean_iterations, r.local_slope) for r in self.rows]


def run_order_study(cfg):
    """Global error against a fine reference at t_end, with a fitted slope.

    The reference is the 3-stage Gauss VRKMK trajectory at h ~ 1e-3 (RKMK
    for group-only methods).  Solver failures at a given h are recorded as
    NaN rows rather than aborting the study.  The least-squares slope uses
    only the rows whose error exceeds the stage-iteration noise floor.
    """
    sys_, z0 = make_problem(cfg)
    t = make_tableau(cfg)
    h_list = _snap_h_list(cfg.t_end, cfg.h_min, cfg.h_max, cfg.h_count)
    group_only = cfg.method in ("rkmk", "cg")
    ref_n = max(1, round(cfg.t_end / REFERENCE_H))
    ref_h = cfg.t_end / ref_n
    ref_cfg = StepConfig(h=ref_h, fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter)
    ref_tableau = gauss_tableau(3)

    if group_only:
        f_g = _frozen_field(sys_, z0.mu)
        q_ref, _ = integrate_group(sys_.struct, f_g, z0.q, ref_cfg,
                                   ref_tableau, "rkmk", ref_n)
        z_ref = CotangentPoint(q_ref, z0.mu)
    elif fastpath.supports(sys_, "vrkmk"):
        z_ref = fastpath.fast_integrate(sys_, z0, ref_cfg, ref_tableau,
                                        "vrkmk", ref_n).final
    else:
        z_ref = integrate(sys_, z0, ref_cfg, ref_tableau, "vrkmk", ref_n,
                          store_states=False).final

    rows = []
    for h, n in h_list:
        scfg = cfg.step_config(h)
        try:
            if group_only:
                q_end, iters = integrate_group(sys_.struct, _frozen_field(sys_, z0.mu),
                                               z0.q, scfg, t, cfg.method, n)
                err = _error(CotangentPoint(q_end, z0.mu), z_ref, "q")
            else:
                if fastpath.supports(sys_, cfg.method):
                    traj = fastpath.fast_integrate(sys_, z0, scfg, t, cfg.method, n)
                else:
                    traj = integrate(sys_, z0, scfg, t, cfg.method, n,
                                     store_states=False)
                iters = traj.iterations
                err = _error(traj.final, z_ref, cfg.error_component)
            mean_it = float(np.mean(iters))
        except LieSympError:
            err, mean_it = math.nan, math.nan
        rows.append(OrderStudyRow(h, n, err, mean_it, math.nan))

    # Iteration-noise floor: each step's stage solve is truncated at fp_tol,
    # and the resulting perturbations accumulate over the n = T/h steps, so
    # errors below ~10 * n * fp_tol say nothing about the method's order.
    def floor(row):
        return max(NOISE_FLOOR_FACTOR * cfg.fp_tol,
                   10.0 * row.n_steps * cfg.fp_tol)

    def clean(row):
        return math.isfinite(row.error) and row.error > floor(row)

    for prev, cur in zip(rows, rows[1:]):
        if clean(prev) and clean(cur):
            cur.local_slope = (math.log(prev.error / cur.error)
                               / math.log(prev.h / cur.h))
    fit = [(math.log(r.h), math.log(r.error)) for r in rows if clean(r)]
    if len(fit) >= 2:
        xs, ys = zip(*fit)
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = math.nan
    result = OrderStudyResult(rows, slope, len(fit), ref_h)
    if cfg.out:
        write_csv(cfg.out, ["h", "error", "iterations", "slope_local"],
                  result.row_tuples())
    return result


@dataclass
class LongrunResult:
    times: np.ndarray           # thinned
    denergy: np.ndarray         # thinned H(z_k) - H(z_0)
    max_abs_denergy: float
    first_window_max: float     # max |dH| over the first 10% of the run
    last_window_max: float      # max |dH| over the last 10%
    mean_iterations: float
    final: CotangentPoint


def run_longrun(cfg):
    """Energy drift over a long trajectory; fatal on solver failure."""
    sys_, z0 = make_problem(cfg)
    t = make_tableau(cfg)
    if cfg.h is None:
        raise InvalidInput("longrun requires an explicit step size h")
    n = cfg.steps if cfg.steps is not None else max(1, round(cfg.t_end / cfg.h))
    scfg = cfg.step_config(cfg.h)
    if fastpath.supports(sys_, cfg.method):
        traj = fastpath.fast_integrate(sys_, z0, scfg, t, cfg.method, n)
    else:
        traj = integrate(sys_, z0, scfg, t, cfg.method, n, store_states=False)
    if traj.energies is None:
        raise InvalidInput(f"problem {cfg.problem!r} provides no energy")
    denergy = traj.energies - traj.energies[0]
    window = max(1, (n + 1) // 10)
    stride = cfg.stride if cfg.stride else max(1, math.ceil((n + 1) / 10_000))
    result = LongrunResult(
        times=traj.times[::stride],
        denergy=denergy[::stride],
        max_abs_denergy=float(np.max(np.abs(denergy))),
        first_window_max=float(np.max(np.abs(denergy[:window]))),
        last_window_max=float(np.max(np.abs(denergy[-window:]))),
        mean_iterations=float(np.mean(traj.iterations)),
        final=traj.final,
    )
    if cfg.out:
        write_csv(cfg.out, ["t", "denergy"],
                  list(zip(result.times, result.denergy)))
    return result


@dataclass
class SymplecticityReport:
    method: str
    tableau: str
    h: float
    defect: float
    threshold: float = 1e-6
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.defect <= self.threshold


def run_symplecticity_check(cfg, threshold=1e-6):
    """Finite-difference Jacobian test of one step at the problem's data."""
    sys_, z0 = make_problem(cfg)
    t = make_tableau(cfg)
    h = cfg.h if cfg.h is not None else 1e-2
    scfg = cfg.step_config(h)
    try:
        stepper = PHASE_STEPPERS[cfg.method]
    except KeyError:
        raise InvalidInput(
            f"symplecticity check needs a phase-space method, got {cfg.method!r}"
        ) from None
    defect, _ = symplecticity_defect(
        sys_.struct, lambda z: stepper(sys_, z, scfg, t).state, z0)
    report = SymplecticityReport(cfg.method, cfg.tableau, h, defect, threshold)
    if cfg.out:
        write_csv(cfg.out, ["method", "tableau", "h", "defect", "passed"],
                  [(report.method, report.tableau, report.h, report.defect,
                    int(report.passed))])
    return report


def _csv_cell(value):
    if isinstance(value, str):
        if any(ch in value for ch in ',"\r\n'):
            return '"' + value.replace('"', '""') + '"'
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_csv(path, header, rows):
    """Write an RFC-4180-style CSV with 17 significant digits, final newline."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"while writing {path}: {exc}") from exc
