"""One-step maps on G and on G x g*, the stage solver, and the trajectory driver.

Method families
---------------
* ``rkmk_group_step`` / ``cg_group_step``: classical Lie group steps for
  dq/dt = f_g(q) . q (Runge-Kutta-Munthe-Kaas with a dexpinv cut-off, and
  Crouch-Grossman with frozen-exponential chains).
* ``vrkmk_step`` / ``vcg_step``: their symplectic (variational) extensions
  on the trivialized cotangent bundle, for dz/dt = f(z) . z.
* ``sprk_step``: symplectic partitioned Runge-Kutta on an abelian instance,
  kept as an independent oracle: on R^n both variational families must
  collapse to it exactly.

All implicit stage systems are solved by fixed-point iteration with a mixed
absolute/relative tolerance; stage unknowns are warm-started from the
previous step when driving a trajectory.
"""

from dataclasses import dataclass, replace

import numpy as np

from .cotangent import CotangentPoint
from .errors import BranchCut, Divergence, InvalidInput, LieSympError, NoConvergence
from .tableaux import hat_coefficients


@dataclass(frozen=True)
class StepConfig:
    """Step size and stage-solver knobs shared by every method."""

    h: float
    fp_tol: float = 1e-14
    fp_max_iter: int = 100
    cutoff_r: int | None = None   # overrides the tableau's cut-off when set

    def __post_init__(self):
        if self.h == 0.0:
            raise InvalidInput("step size h must be nonzero")
        if self.fp_tol <= 0.0:
            raise InvalidInput("fp_tol must be positive")
        if self.fp_max_iter < 1:
            raise InvalidInput("fp_max_iter must be >= 1")

    def with_h(self, h):
        return replace(self, h=h)


@dataclass
class StepResult:
    """Output of one step: new state, converged stage vector, sweep count."""

    state: object
    stages: np.ndarray
    iterations: int


def _cutoff(cfg, t):
    if cfg.cutoff_r is not None:
        return cfg.cutoff_r
    return t.cutoff_r if t.cutoff_r is not None else 0


def fixed_point_solve(update, guess, cfg):
    """Iterate ``state <- update(state)`` on a flat vector until stationary.

    Convergence: max coordinate change <= fp_tol * (1 + max|state|).
    Raises Divergence when the iterate norm exceeds 1e6, or when an iterate
    escapes the branch of a kernel map, and NoConvergence when fp_max_iter
    sweeps are exhausted.
    """
    state = np.asarray(guess, dtype=float)
    for it in range(1, cfg.fp_max_iter + 1):
        try:
            new = update(state)
        except BranchCut as exc:
            raise Divergence(f"iterate left the kernel branch: {exc}") from exc
        delta = np.max(np.abs(new - state))
        state = new
        norm = np.max(np.abs(state)) if state.size else 0.0
        if norm > 1e6:
            raise Divergence(f"fixed-point iterate blew up (|state| = {norm:.3g})")
        if delta <= cfg.fp_tol * (1.0 + norm):
            return state, it
    raise NoConvergence(f"no fixed point after {cfg.fp_max_iter} sweeps "
                        f"(last change {delta:.3g})")


def _require_nonzero_b(t):
    if np.any(t.b == 0.0):
        raise InvalidInput("variational steps require b_i != 0 for all stages")


# ---------------------------------------------------------------------------
# Group-only steppers
# ---------------------------------------------------------------------------

def rkmk_group_step(struct, f_g, q0, cfg, t, warm=None):
    """Munthe-Kaas step for dq/dt = f_g(q) . q with dexpinv cut-off r.

    Stage equations: x_i = h sum_j a_ij dexpinv_trunc(r, x_j, xi_j) with
    xi_j = f_g(exp(x_j) q0); update q1 = exp(h sum_i b_i dexpinv_trunc(r,
    x_i, xi_i)) q0.
    """
    s, dim = t.s, struct.dim
    h, r = cfg.h, _cutoff(cfg, t)

    def stage_fields(x):
        xi = np.empty((s, dim))
        for i in range(s):
            xi[i] = f_g(struct.product(struct.exp(x[i]), q0))
        return xi

    def trunc_rows(x, xi):
        d = np.empty((s, dim))
        for i in range(s):
            d[i] = struct.dexpinv_trunc(r, x[i], xi[i])
        return d

    def update(state):
        x = state.reshape(s, dim)
        xi = stage_fields(x)
        return (h * (t.a @ trunc_rows(x, xi))).ravel()

    if warm is None:
        warm = (h * np.outer(t.c, f_g(q0))).ravel()
    state, iters = fixed_point_solve(update, warm, cfg)

    x = state.reshape(s, dim)
    xi = stage_fields(x)
    y = h * (t.b @ trunc_rows(x, xi))
    q1 = struct.product(struct.exp(y), q0)
    return StepResult(q1, state, iters)


def _chain(struct, q0, coeffs, xi, h):
    """Partial products P_j = exp(h c_j xi_j) ... exp(h c_1 xi_1) q0, j = 0..s."""
    out = [q0]
    g = q0
    for j in range(len(coeffs)):
        if coeffs[j] != 0.0:
            g = struct.product(struct.exp(h * coeffs[j] * xi[j]), g)
        out.append(g)
    return out


def cg_group_step(struct, f_g, q0, cfg, t, warm=None):
    """Crouch-Grossman step: frozen exponentials applied stage 1 first.

    Q_i = exp(h a_is xi_s) ... exp(h a_i1 xi_1) q0, xi_i = f_g(Q_i),
    q1 = exp(h b_s xi_s) ... exp(h b_1 xi_1) q0.
    """
    s, dim = t.s, struct.dim
    h = cfg.h

    def update(state):
        xi = state.reshape(s, dim)
        new = np.empty((s, dim))
        for i in range(s):
            new[i] = f_g(_chain(struct, q0, t.a[i], xi, h)[-1])
        return new.ravel()

    if warm is None:
        warm = np.tile(f_g(q0), s)
    state, iters = fixed_point_solve(update, warm, cfg)

    xi = state.reshape(s, dim)
    q1 = _chain(struct, q0, t.b, xi, h)[-1]
    return StepResult(q1, state, iters)


# ---------------------------------------------------------------------------
# Symplectic steppers on G x g*
# ---------------------------------------------------------------------------

def vrkmk_step(sys, z0, cfg, t, warm=None):
    """Variational Runge-Kutta-Munthe-Kaas step on the trivialized T*G.

    Solves, by fixed-point sweeps in the unknowns (X_i, M_i, lambda_i):

        X_i      = h sum_j a_ij dexpinv_trunc(r, X_j, xi_j)
        (xi_i, n_i) = f(exp(X_i) q0, M_i)
        Lambda   = dexp_star(-Y, mu0 + h sum_i b_i Ad_star(exp(X_i), n_i))
        lambda_i = -h b_i dexp_star(X_i, n_i)
                   + h P_r(X_i, xi_i)(b_i Lambda + sum_j a_ji lambda_j)
        M_i      = dexpinv_trunc_star(r, X_i, b_i Lambda
                   + sum_j a_ji lambda_j) / b_i

    then q1 = exp(Y) q0 with Y = h sum_i b_i dexpinv_trunc(r, X_i, xi_i) and
    mu1 = Ad_star(exp(-Y), mu0 + h sum_i b_i Ad_star(exp(X_i), n_i)).
    """
    _require_nonzero_b(t)
    struct = sys.struct
    s, dim = t.s, struct.dim
    h, r = cfg.h, _cutoff(cfg, t)
    a, b, at = t.a, t.b, t.a.T
    q0, mu0 = z0
    nblk = s * dim

    def unpack(state):
        return (state[:nblk].reshape(s, dim),
                state[nblk:2 * nblk].reshape(s, dim),
                state[2 * nblk:].reshape(s, dim))

    def stage_f(x, m):
        xi = np.empty((s, dim))
        n = np.empty((s, dim))
        for i in range(s):
            qi = struct.product(struct.exp(x[i]), q0)
            xi[i], n[i] = sys.f(CotangentPoint(qi, m[i]))
        return xi, n

    def momentum_sum(x, n):
        w = np.array(mu0, dtype=float)
        for i in range(s):
            w += h * b[i] * struct.Ad_star(struct.exp(x[i]), n[i])
        return w

    def trunc_rows(x, xi):
        d = np.empty((s, dim))
        for i in range(s):
            d[i] = struct.dexpinv_trunc(r, x[i], xi[i])
        return d

    def update(state):
        x, m, lam = unpack(state)
        xi, n = stage_f(x, m)
        x_new = h * (a @ trunc_rows(x, xi))
        w = momentum_sum(x_new, n)
        y = h * (b @ trunc_rows(x_new, xi))
        big_lam = struct.dexp_star(-y, w)
        lam_rhs = b[:, None] * big_lam[None, :] + at @ lam
        lam_new = np.empty((s, dim))
        for i in range(s):
            lam_new[i] = (-h * b[i] * struct.dexp_star(x_new[i], n[i])
                          + h * struct.p_star_poly(r, x_new[i], xi[i], lam_rhs[i]))
        m_new = np.empty((s, dim))
        m_rhs = b[:, None] * big_lam[None, :] + at @ lam_new
        for i in range(s):
            m_new[i] = struct.dexpinv_trunc_star(r, x_new[i], m_rhs[i]) / b[i]
        return np.concatenate([x_new.ravel(), m_new.ravel(), lam_new.ravel()])

    if warm is None:
        xi0, n0 = sys.f(z0)
        warm = np.concatenate([
            (h * np.outer(t.c, xi0)).ravel(),
            np.tile(mu0, s),
            (-h * np.outer(b, n0)).ravel(),
        ])
    state, iters = fixed_point_solve(update, warm, cfg)

    x, m, _ = unpack(state)
    xi, n = stage_f(x, m)
    w = momentum_sum(x, n)
    y = h * (b @ trunc_rows(x, xi))
    q1 = struct.product(struct.exp(y), q0)
    mu1 = struct.Ad_star(struct.exp(-y), w)
    return StepResult(CotangentPoint(q1, mu1), state, iters)


def vcg_step(sys, z0, cfg, t, warm=None, use_mu0_form=False):
    """Variational Crouch-Grossman step on the trivialized T*G.

    Unknowns are the stage pairs (xi_i, M_i).  With partial chain products
    q^j = exp(h b_j xi_j) ... exp(h b_1 xi_1) q0 and Q_ij defined likewise
    from row i of the tableau, each sweep evaluates n_i from f(Q_i, M_i),
    updates

        M_i = dexp_star(h b_i xi_i, Ad_star((q^i)^-1, mubar1))
              - h sum_j (b_j a_ji / b_i)
                    dexp_star(h a_ji xi_i, Ad_star(Q_ji^-1, nbar_j)),

    where mubar1 = Ad_star(q0, mu0) + h sum_j b_j nbar_j and
    nbar_j = Ad_star(Q_j, n_j), then refreshes xi_i = f(Q_i, M_i_new).xi
    (Gauss-Seidel ordering in the momentum block, which roughly halves the
    sweep count against updating both blocks from the stale state).
    ``use_mu0_form`` selects the equivalent M update written against mubar0
    instead of mubar1.
    """
    _require_nonzero_b(t)
    struct = sys.struct
    s, dim = t.s, struct.dim
    h = cfg.h
    a, b = t.a, t.b
    q0, mu0 = z0
    nblk = s * dim
    mubar0 = struct.Ad_star(q0, mu0)

    def momentum_update(xi, m):
        qch = _chain(struct, q0, b, xi, h)
        rows = [_chain(struct, q0, a[i], xi, h) for i in range(s)]
        n = np.empty((s, dim))
        for i in range(s):
            _, n[i] = sys.f(CotangentPoint(rows[i][s], m[i]))
        nbar = np.empty((s, dim))
        for i in range(s):
            nbar[i] = struct.Ad_star(rows[i][s], n[i])
        mubar1 = mubar0 + h * (b @ nbar)
        m_new = np.empty((s, dim))
        for i in range(s):
            if use_mu0_form:
                acc = struct.dexp_star(
                    h * b[i] * xi[i],
                    struct.Ad_star(struct.inverse(qch[i + 1]), mubar0))
                for j in range(s):
                    top = struct.dexp_star(
                        h * b[i] * xi[i],
                        struct.Ad_star(struct.inverse(qch[i + 1]), nbar[j]))
                    low = (a[j, i] / b[i]) * struct.dexp_star(
                        h * a[j, i] * xi[i],
                        struct.Ad_star(struct.inverse(rows[j][i + 1]), nbar[j]))
                    acc = acc + h * b[j] * (top - low)
            else:
                acc = struct.dexp_star(
                    h * b[i] * xi[i],
                    struct.Ad_star(struct.inverse(qch[i + 1]), mubar1))
                for j in range(s):
                    if a[j, i] != 0.0:
                        acc = acc - h * (b[j] * a[j, i] / b[i]) * struct.dexp_star(
                            h * a[j, i] * xi[i],
                            struct.Ad_star(struct.inverse(rows[j][i + 1]), nbar[j]))
            m_new[i] = acc
        return m_new, rows, qch, mubar1

    def update(state):
        xi = state[:nblk].reshape(s, dim)
        m = state[nblk:].reshape(s, dim)
        m_new, rows, _, _ = momentum_update(xi, m)
        xi_new = np.empty((s, dim))
        for i in range(s):
            xi_new[i], _ = sys.f(CotangentPoint(rows[i][s], m_new[i]))
        return np.concatenate([xi_new.ravel(), m_new.ravel()])

    if warm is None:
        xi0, _ = sys.f(z0)
        warm = np.concatenate([np.tile(xi0, s), np.tile(mu0, s)])
    state, iters = fixed_point_solve(update, warm, cfg)

    xi = state[:nblk].reshape(s, dim)
    m = state[nblk:].reshape(s, dim)
    _, _, qch, mubar1 = momentum_update(xi, m)
    q1 = qch[s]
    mu1 = struct.Ad_star(struct.inverse(q1), mubar1)
    return StepResult(CotangentPoint(q1, mu1), state, iters)


def sprk_step(sys, z0, cfg, t, warm=None):
    """Symplectic partitioned RK step on an abelian instance (oracle method).

    Positions use (a, b); momenta use the hat coefficients (a_hat, b).
    """
    _require_nonzero_b(t)
    struct = sys.struct
    if np.shape(z0[0]) != (struct.dim,):
        raise InvalidInput("sprk_step runs on abelian instances only "
                           "(coordinate-vector group elements)")
    s, dim = t.s, struct.dim
    h = cfg.h
    a_hat = hat_coefficients(t).a
    q0, p0 = z0
    nblk = s * dim

    def stage_f(qs, ps):
        xi = np.empty((s, dim))
        n = np.empty((s, dim))
        for i in range(s):
            xi[i], n[i] = sys.f(CotangentPoint(qs[i], ps[i]))
        return xi, n

    def update(state):
        qs = state[:nblk].reshape(s, dim)
        ps = state[nblk:].reshape(s, dim)
        xi, n = stage_f(qs, ps)
        return np.concatenate([
            (q0[None, :] + h * (t.a @ xi)).ravel(),
            (p0[None, :] + h * (a_hat @ n)).ravel(),
        ])

    if warm is None:
        xi0, n0 = sys.f(z0)
        warm = np.concatenate([
            (q0[None, :] + h * np.outer(t.c, xi0)).ravel(),
            (p0[None, :] + h * np.outer(a_hat.sum(axis=1), n0)).ravel(),
        ])
    state, iters = fixed_point_solve(update, warm, cfg)

    qs = state[:nblk].reshape(s, dim)
    ps = state[nblk:].reshape(s, dim)
    xi, n = stage_f(qs, ps)
    q1 = q0 + h * (t.b @ xi)
    p1 = p0 + h * (t.b @ n)
    return StepResult(CotangentPoint(q1, p1), state, iters)


def nonsymplectic_control_step(sys, z0, cfg, t, warm=None):
    """Deliberately non-symplectic step used as a negative control.

    Group part: RKMK on the frozen field q -> f(q, mu0).xi; momentum part:
    explicit Euler mu1 = mu0 + h n0, ignoring the coadjoint term of the
    trivialized momentum equation.
    """
    struct = sys.struct
    q0, mu0 = z0
    res = rkmk_group_step(struct, lambda q: sys.f(CotangentPoint(q, mu0)).xi,
                          q0, cfg, t, warm=warm)
    _, n0 = sys.f(z0)
    mu1 = mu0 + cfg.h * n0
    return StepResult(CotangentPoint(res.state, mu1), res.stages, res.iterations)


PHASE_STEPPERS = {
    "vrkmk": vrkmk_step,
    "vcg": vcg_step,
    "sprk": sprk_step,
    "naive": nonsymplectic_control_step,
}


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------

@dataclass
class Trajectory:
    """Recorded output of ``integrate``: samples at t_k = k h."""

    times: np.ndarray
    states: list | None
    energies: np.ndarray | None
    iterations: np.ndarray
    final: CotangentPoint


def integrate(sys, z0, cfg, t, method, n_steps, store_states=True):
    """Apply ``n_steps`` steps of the selected method, warm-starting stages.

    Records (t_k, z_k, H(z_k)) when the system provides an energy; solver
    failures are re-raised with the offending step index attached.
    """
    if n_steps < 1:
        raise InvalidInput("n_steps must be >= 1")
    try:
        step = PHASE_STEPPERS[method]
    except KeyError:
        raise InvalidInput(f"unknown phase-space method {method!r}") from None
    z = CotangentPoint(np.asarray(z0[0], dtype=float),
                       np.asarray(z0[1], dtype=float))
    e0 = sys.energy(z)
    has_energy = e0 is not None
    times = np.arange(n_steps + 1) * cfg.h
    energies = np.empty(n_steps + 1) if has_energy else None
    iterations = np.empty(n_steps, dtype=int)
    states = [z] if store_states else None
    if has_energy:
        energies[0] = e0
    warm = None
    for k in range(n_steps):
        try:
            res = step(sys, z, cfg, t, warm=warm)
        except LieSympError as exc:
            raise type(exc)(f"step {k + 1}/{n_steps}: {exc}") from exc
        z = res.state
        warm = res.stages
        iterations[k] = res.iterations
        if has_energy:
            energies[k + 1] = sys.energy(z)
        if store_states:
            states.append(z)
    return Trajectory(times, states, energies, iterations, z)


def integrate_group(struct, f_g, q0, cfg, t, method, n_steps):
    """Group-only trajectory driver for the ``rkmk`` and ``cg`` methods."""
    if n_steps < 1:
        raise InvalidInput("n_steps must be >= 1")
    step = {"rkmk": rkmk_group_step, "cg": cg_group_step}[method]
    q = np.asarray(q0, dtype=float)
    warm = None
    iterations = np.empty(n_steps, dtype=int)
    for k in range(n_steps):
        try:
            res = step(struct, f_g, q, cfg, t, warm=warm)
        except LieSympError as exc:
            raise type(exc)(f"step {k + 1}/{n_steps}: {exc}") from exc
        q = res.state
        warm = res.stages
        iterations[k] = res.iterations
    return q, iterations


def compose_steps(sys, z0, cfg, t1, t2, gamma, method="vcg"):
    """Step with t1 over gamma*h then t2 over (1-gamma)*h.

    Equals one step of the composed tableau (see tableaux.compose_tableaux)
    up to stage-solver tolerance.
    """
    step = PHASE_STEPPERS[method]
    mid = step(sys, z0, cfg.with_h(gamma * cfg.h), t1).state
    return step(sys, mid, cfg.with_h((1.0 - gamma) * cfg.h), t2).state
