"""Compiled trajectory loops for the dipole problem on SO(3).

The generic steppers in ``integrators`` dispatch through the structure
abstraction one small numpy call at a time, which costs a few milliseconds
per step; a 10^5-step energy-drift run then takes tens of minutes.  This
module mirrors the VRKMK and VCG sweeps in numba-compiled form, specialized
to the dipole system, so long runs finish in seconds.

The update maps are transcriptions of the generic ones (same fixed points,
same convergence metric, same warm starts); ``tests/test_fastpath.py`` pins
the two implementations against each other.  Everything degrades gracefully:
if numba is unavailable, ``HAVE_NUMBA`` is False and callers fall back to
the generic path.
"""

import numpy as np

from .algebra import BERNOULLI
from .cotangent import CotangentPoint
from .errors import Divergence, NoConvergence, Singularity
from .integrators import Trajectory, _cutoff

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap


# B_k / k!, computed exactly as in algebra.LieStructure.dexpinv_trunc
_FACTORIAL = (1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0)
_BOF = np.array([BERNOULLI[k] / _FACTORIAL[k] for k in range(7)])

_OK, _NO_CONVERGENCE, _DIVERGENCE, _SINGULARITY = 0, 1, 2, 3


@njit(cache=True, inline="always")
def _cross_into(a, b, out):
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]


@njit(cache=True, inline="always")
def _matvec_into(g, v, out):
    out[0] = g[0, 0] * v[0] + g[0, 1] * v[1] + g[0, 2] * v[2]
    out[1] = g[1, 0] * v[0] + g[1, 1] * v[1] + g[1, 2] * v[2]
    out[2] = g[2, 0] * v[0] + g[2, 1] * v[1] + g[2, 2] * v[2]


@njit(cache=True, inline="always")
def _matvec_t_into(g, v, out):
    out[0] = g[0, 0] * v[0] + g[1, 0] * v[1] + g[2, 0] * v[2]
    out[1] = g[0, 1] * v[0] + g[1, 1] * v[1] + g[2, 1] * v[2]
    out[2] = g[0, 2] * v[0] + g[1, 2] * v[1] + g[2, 2] * v[2]


@njit(cache=True, inline="always")
def _matmul_into(a, b, out):
    for i in range(3):
        for j in range(3):
            out[i, j] = a[i, 0] * b[0, j] + a[i, 1] * b[1, j] + a[i, 2] * b[2, j]


@njit(cache=True, inline="always")
def _exp_into(x, out):
    t2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
    th = np.sqrt(t2)
    if th < 1e-4:
        ca = 1.0 - t2 / 6.0 + t2 * t2 / 120.0
        cb = 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    else:
        ca = np.sin(th) / th
        cb = (1.0 - np.cos(th)) / t2
    xx = x[0] * x[0]
    yy = x[1] * x[1]
    zz = x[2] * x[2]
    xy = x[0] * x[1]
    xz = x[0] * x[2]
    yz = x[1] * x[2]
    out[0, 0] = 1.0 - cb * (yy + zz)
    out[0, 1] = -ca * x[2] + cb * xy
    out[0, 2] = ca * x[1] + cb * xz
    out[1, 0] = ca * x[2] + cb * xy
    out[1, 1] = 1.0 - cb * (xx + zz)
    out[1, 2] = -ca * x[0] + cb * yz
    out[2, 0] = -ca * x[1] + cb * xz
    out[2, 1] = ca * x[0] + cb * yz
    out[2, 2] = 1.0 - cb * (xx + yy)


@njit(cache=True, inline="always")
def _dexp_star_into(x, mu, out, t1, t2):
    # (dexp_x)^T mu = mu - cb (x cross mu) + cc (x cross (x cross mu))
    q2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
    th = np.sqrt(q2)
    if th < 1e-4:
        cb = 0.5 - q2 / 24.0 + q2 * q2 / 720.0
        cc = 1.0 / 6.0 - q2 / 120.0 + q2 * q2 / 5040.0
    else:
        cb = (1.0 - np.cos(th)) / q2
        cc = (th - np.sin(th)) / (q2 * th)
    _cross_into(x, mu, t1)
    _cross_into(x, t1, t2)
    out[0] = mu[0] - cb * t1[0] + cc * t2[0]
    out[1] = mu[1] - cb * t1[1] + cc * t2[1]
    out[2] = mu[2] - cb * t1[2] + cc * t2[2]


@njit(cache=True, inline="always")
def _dexpinv_trunc_into(r, x, y, out, term, tmp):
    for d in range(3):
        out[d] = y[d]
        term[d] = y[d]
    for k in range(1, r + 1):
        _cross_into(x, term, tmp)
        for d in range(3):
            term[d] = tmp[d]
        cf = _BOF[k]
        if cf != 0.0:
            for d in range(3):
                out[d] += cf * term[d]


@njit(cache=True, inline="always")
def _dexpinv_trunc_star_into(r, x, mu, out, term, tmp):
    for d in range(3):
        out[d] = mu[d]
        term[d] = mu[d]
    for k in range(1, r + 1):
        _cross_into(term, x, tmp)   # ad_star(x, v) = v cross x
        for d in range(3):
            term[d] = tmp[d]
        cf = _BOF[k]
        if cf != 0.0:
            for d in range(3):
                out[d] += cf * term[d]


@njit(cache=True)
def _p_star_into(r, x, xi, mu, out, adp, mus, tmp):
    if r == 0:
        out[0] = 0.0
        out[1] = 0.0
        out[2] = 0.0
        return
    _cross_into(mu, xi, tmp)        # ad_star(xi, mu)
    out[0] = 0.5 * tmp[0]
    out[1] = 0.5 * tmp[1]
    out[2] = 0.5 * tmp[2]
    if r >= 2:
        for d in range(3):
            adp[0, d] = xi[d]
            mus[0, d] = mu[d]
        for i in range(1, r):
            _cross_into(x, adp[i - 1], adp[i])
            _cross_into(mus[i - 1], x, mus[i])
        for k in range(2, r + 1):
            cf = _BOF[k]
            if cf == 0.0:
                continue
            for i in range(k):
                _cross_into(mus[k - 1 - i], adp[i], tmp)
                for d in range(3):
                    out[d] -= cf * tmp[d]


@njit(cache=True, inline="always")
def _dipole_f(g, mu, iinv, mass, qbeta, yp, ym, zp, xi, n, w, t1, t2):
    """Evaluate f = (xi, n) for the dipole; returns False on charge collision."""
    _matvec_t_into(g, mu, w)
    w[0] *= iinv[0]
    w[1] *= iinv[1]
    w[2] *= iinv[2]
    _matvec_into(g, w, xi)
    # charge positions and distances
    _matvec_into(g, yp, t1)
    dpx = t1[0] - zp[0]
    dpy = t1[1] - zp[1]
    dpz = t1[2] - zp[2]
    rp = np.sqrt(dpx * dpx + dpy * dpy + dpz * dpz)
    _matvec_into(g, ym, t2)
    dmx = t2[0] - zp[0]
    dmy = t2[1] - zp[1]
    dmz = t2[2] - zp[2]
    rm = np.sqrt(dmx * dmx + dmy * dmy + dmz * dmz)
    if rp < 1e-9 or rm < 1e-9:
        return False
    # n = -(xi x mu + mass * (g e3) x e3 + qbeta * (gy+ x z / rp^3 - gy- x z / rm^3))
    cxp = t1[1] * zp[2] - t1[2] * zp[1]
    cyp = t1[2] * zp[0] - t1[0] * zp[2]
    czp = t1[0] * zp[1] - t1[1] * zp[0]
    cxm = t2[1] * zp[2] - t2[2] * zp[1]
    cym = t2[2] * zp[0] - t2[0] * zp[2]
    czm = t2[0] * zp[1] - t2[1] * zp[0]
    rp3 = rp * rp * rp
    rm3 = rm * rm * rm
    n[0] = -(xi[1] * mu[2] - xi[2] * mu[1] + mass * g[1, 2] + qbeta * (cxp / rp3 - cxm / rm3))
    n[1] = -(xi[2] * mu[0] - xi[0] * mu[2] - mass * g[0, 2] + qbeta * (cyp / rp3 - cym / rm3))
    n[2] = -(xi[0] * mu[1] - xi[1] * mu[0] + qbeta * (czp / rp3 - czm / rm3))
    return True


@njit(cache=True, inline="always")
def _dipole_energy(g, mu, iinv, mass, qbeta, yp, ym, zp, w, t1):
    _matvec_t_into(g, mu, w)
    kin = 0.5 * (iinv[0] * w[0] * w[0] + iinv[1] * w[1] * w[1] + iinv[2] * w[2] * w[2])
    _matvec_into(g, yp, t1)
    dpx = t1[0] - zp[0]
    dpy = t1[1] - zp[1]
    dpz = t1[2] - zp[2]
    rp = np.sqrt(dpx * dpx + dpy * dpy + dpz * dpz)
    _matvec_into(g, ym, t1)
    dmx = t1[0] - zp[0]
    dmy = t1[1] - zp[1]
    dmz = t1[2] - zp[2]
    rm = np.sqrt(dmx * dmx + dmy * dmy + dmz * dmz)
    return kin + mass * g[2, 2] + qbeta * (1.0 / rp - 1.0 / rm)


@njit(cache=True)
def _vrkmk_dipole_run(g0, mu0, a, b, c, r, h, fp_tol, fp_max_iter, n_steps,
                      iinv, mass, qbeta, yp, ym, zp):
    s = b.shape[0]
    g = g0.copy()
    mu = mu0.copy()
    energies = np.empty(n_steps + 1)
    iters = np.zeros(n_steps, dtype=np.int64)

    x = np.empty((s, 3))
    m = np.empty((s, 3))
    lam = np.empty((s, 3))
    xn = np.empty((s, 3))
    mn = np.empty((s, 3))
    lamn = np.empty((s, 3))
    xi = np.empty((s, 3))
    n = np.empty((s, 3))
    d = np.empty((s, 3))
    rot = np.empty((3, 3))
    qi = np.empty((3, 3))
    w = np.empty(3)
    y = np.empty(3)
    big_lam = np.empty(3)
    rhs = np.empty(3)
    v3 = np.empty(3)
    t1 = np.empty(3)
    t2 = np.empty(3)
    t3 = np.empty(3)
    t4 = np.empty(3)
    adp = np.empty((7, 3))
    mus = np.empty((7, 3))

    # cold start
    ok = _dipole_f(g, mu, iinv, mass, qbeta, yp, ym, zp, t1, t2, v3, t3, t4)
    if not ok:
        return _SINGULARITY, 0, g, mu, energies, iters
    for i in range(s):
        for dd in range(3):
            x[i, dd] = h * c[i] * t1[dd]
            m[i, dd] = mu[dd]
            lam[i, dd] = -h * b[i] * t2[dd]

    energies[0] = _dipole_energy(g, mu, iinv, mass, qbeta, yp, ym, zp, v3, t1)

    for step in range(n_steps):
        converged = False
        for it in range(1, fp_max_iter + 1):
            # stage fields at current (x, m)
            for i in range(s):
                _exp_into(x[i], rot)
                _matmul_into(rot, g, qi)
                ok = _dipole_f(qi, m[i], iinv, mass, qbeta, yp, ym, zp,
                               xi[i], n[i], v3, t1, t2)
                if not ok:
                    return _SINGULARITY, step, g, mu, energies, iters
            # new X
            for i in range(s):
                _dexpinv_trunc_into(r, x[i], xi[i], d[i], t1, t2)
            for i in range(s):
                for dd in range(3):
                    acc = 0.0
                    for j in range(s):
                        acc += a[i, j] * d[j, dd]
                    xn[i, dd] = h * acc
            # w = mu + h sum b_i Ad*_{exp(xn_i)} n_i
            for dd in range(3):
                w[dd] = mu[dd]
            for i in range(s):
                _exp_into(xn[i], rot)
                _matvec_t_into(rot, n[i], v3)
                for dd in range(3):
                    w[dd] += h * b[i] * v3[dd]
            # y = h sum b_i dexpinv_trunc(r, xn_i, xi_i)
            for dd in range(3):
                y[dd] = 0.0
            for i in range(s):
                _dexpinv_trunc_into(r, xn[i], xi[i], v3, t1, t2)
                for dd in range(3):
                    y[dd] += h * b[i] * v3[dd]
            for dd in range(3):
                v3[dd] = -y[dd]
            _dexp_star_into(v3, w, big_lam, t1, t2)
            # lambda update (old lambda on the rhs)
            for i in range(s):
                for dd in range(3):
                    acc = b[i] * big_lam[dd]
                    for j in range(s):
                        acc += a[j, i] * lam[j, dd]
                    rhs[dd] = acc
                _dexp_star_into(xn[i], n[i], t3, t1, t2)
                _p_star_into(r, xn[i], xi[i], rhs, t4, adp, mus, t1)
                for dd in range(3):
                    lamn[i, dd] = -h * b[i] * t3[dd] + h * t4[dd]
            # M update (fresh lambda)
            for i in range(s):
                for dd in range(3):
                    acc = b[i] * big_lam[dd]
                    for j in range(s):
                        acc += a[j, i] * lamn[j, dd]
                    rhs[dd] = acc
                _dexpinv_trunc_star_into(r, xn[i], rhs, t3, t1, t2)
                for dd in range(3):
                    mn[i, dd] = t3[dd] / b[i]
            # convergence bookkeeping
            delta = 0.0
            norm = 0.0
            for i in range(s):
                for dd in range(3):
                    delta = max(delta, abs(xn[i, dd] - x[i, dd]),
                                abs(mn[i, dd] - m[i, dd]),
                                abs(lamn[i, dd] - lam[i, dd]))
                    norm = max(norm, abs(xn[i, dd]), abs(mn[i, dd]),
                               abs(lamn[i, dd]))
                    x[i, dd] = xn[i, dd]
                    m[i, dd] = mn[i, dd]
                    lam[i, dd] = lamn[i, dd]
            if norm > 1e6:
                return _DIVERGENCE, step, g, mu, energies, iters
            if delta <= fp_tol * (1.0 + norm):
                iters[step] = it
                converged = True
                break
        if not converged:
            return _NO_CONVERGENCE, step, g, mu, energies, iters

        # finalize: recompute stage fields, then q1, mu1
        for i in range(s):
            _exp_into(x[i], rot)
            _matmul_into(rot, g, qi)
            ok = _dipole_f(qi, m[i], iinv, mass, qbeta, yp, ym, zp,
                           xi[i], n[i], v3, t1, t2)
            if not ok:
                return _SINGULARITY, step, g, mu, energies, iters
        for dd in range(3):
            w[dd] = mu[dd]
        for i in range(s):
            _exp_into(x[i], rot)
            _matvec_t_into(rot, n[i], v3)
            for dd in range(3):
                w[dd] += h * b[i] * v3[dd]
        for dd in range(3):
            y[dd] = 0.0
        for i in range(s):
            _dexpinv_trunc_into(r, x[i], xi[i], v3, t1, t2)
            for dd in range(3):
                y[dd] += h * b[i] * v3[dd]
        _exp_into(y, rot)
        _matmul_into(rot, g, qi)
        for i3 in range(3):
            for j3 in range(3):
                g[i3, j3] = qi[i3, j3]
        # mu1 = Ad*_{exp(-y)} w = exp(y) w
        _matvec_into(rot, w, v3)
        for dd in range(3):
            mu[dd] = v3[dd]
        energies[step + 1] = _dipole_energy(g, mu, iinv, mass, qbeta, yp, ym, zp, w, t1)
    return _OK, n_steps, g, mu, energies, iters


@njit(cache=True)
def _vcg_dipole_run(g0, mu0, a, b, h, fp_tol, fp_max_iter, n_steps,
                    iinv, mass, qbeta, yp, ym, zp):
    s = b.shape[0]
    g = g0.copy()
    mu = mu0.copy()
    energies = np.empty(n_steps + 1)
    iters = np.zeros(n_steps, dtype=np.int64)

    xi = np.empty((s, 3))
    m = np.empty((s, 3))
    xin = np.empty((s, 3))
    mn = np.empty((s, 3))
    n = np.empty((s, 3))
    nbar = np.empty((s, 3))
    qch = np.empty((s + 1, 3, 3))
    rows = np.empty((s, s + 1, 3, 3))
    rot = np.empty((3, 3))
    mubar0 = np.empty(3)
    mubar1 = np.empty(3)
    acc = np.empty(3)
    v3 = np.empty(3)
    arg = np.empty(3)
    t1 = np.empty(3)
    t2 = np.empty(3)
    dump = np.empty(3)

    ok = _dipole_f(g, mu, iinv, mass, qbeta, yp, ym, zp, v3, t1, t2, arg, acc)
    if not ok:
        return _SINGULARITY, 0, g, mu, energies, iters
    for i in range(s):
        for dd in range(3):
            xi[i, dd] = v3[dd]
            m[i, dd] = mu[dd]

    energies[0] = _dipole_energy(g, mu, iinv, mass, qbeta, yp, ym, zp, v3, t1)

    for step in range(n_steps):
        _matvec_t_into(g, mu, mubar0)
        converged = False
        for it in range(1, fp_max_iter + 1):
            # chain products from current xi
            for i3 in range(3):
                for j3 in range(3):
                    qch[0, i3, j3] = g[i3, j3]
            for j in range(s):
                if b[j] != 0.0:
                    for dd in range(3):
                        arg[dd] = h * b[j] * xi[j, dd]
                    _exp_into(arg, rot)
                    _matmul_into(rot, qch[j], qch[j + 1])
                else:
                    for i3 in range(3):
                        for j3 in range(3):
                            qch[j + 1, i3, j3] = qch[j, i3, j3]
            for i in range(s):
                for i3 in range(3):
                    for j3 in range(3):
                        rows[i, 0, i3, j3] = g[i3, j3]
                for j in range(s):
                    if a[i, j] != 0.0:
                        for dd in range(3):
                            arg[dd] = h * a[i, j] * xi[j, dd]
                        _exp_into(arg, rot)
                        _matmul_into(rot, rows[i, j], rows[i, j + 1])
                    else:
                        for i3 in range(3):
                            for j3 in range(3):
                                rows[i, j + 1, i3, j3] = rows[i, j, i3, j3]
            # stage forces and spatial momenta
            for i in range(s):
                ok = _dipole_f(rows[i, s], m[i], iinv, mass, qbeta, yp, ym, zp,
                               dump, n[i], v3, t1, t2)
                if not ok:
                    return _SINGULARITY, step, g, mu, energies, iters
                _matvec_t_into(rows[i, s], n[i], nbar[i])
            for dd in range(3):
                val = mubar0[dd]
                for j in range(s):
                    val += h * b[j] * nbar[j, dd]
                mubar1[dd] = val
            # momentum update
            for i in range(s):
                _matvec_into(qch[i + 1], mubar1, v3)   # Ad*_{(q^i)^-1} mubar1
                for dd in range(3):
                    arg[dd] = h * b[i] * xi[i, dd]
                _dexp_star_into(arg, v3, acc, t1, t2)
                for j in range(s):
                    if a[j, i] != 0.0:
                        _matvec_into(rows[j, i + 1], nbar[j], v3)
                        for dd in range(3):
                            arg[dd] = h * a[j, i] * xi[i, dd]
                        _dexp_star_into(arg, v3, t1, t2, dump)
                        cf = h * b[j] * a[j, i] / b[i]
                        for dd in range(3):
                            acc[dd] -= cf * t1[dd]
                for dd in range(3):
                    mn[i, dd] = acc[dd]
            # velocity refresh at the new momenta
            for i in range(s):
                ok = _dipole_f(rows[i, s], mn[i], iinv, mass, qbeta, yp, ym, zp,
                               xin[i], dump, v3, t1, t2)
                if not ok:
                    return _SINGULARITY, step, g, mu, energies, iters
            delta = 0.0
            norm = 0.0
            for i in range(s):
                for dd in range(3):
                    delta = max(delta, abs(xin[i, dd] - xi[i, dd]),
                                abs(mn[i, dd] - m[i, dd]))
                    norm = max(norm, abs(xin[i, dd]), abs(mn[i, dd]))
                    xi[i, dd] = xin[i, dd]
                    m[i, dd] = mn[i, dd]
            if norm > 1e6:
                return _DIVERGENCE, step, g, mu, energies, iters
            if delta <= fp_tol * (1.0 + norm):
                iters[step] = it
                converged = True
                break
        if not converged:
            return _NO_CONVERGENCE, step, g, mu, energies, iters

        # finalize with converged stages
        for i3 in range(3):
            for j3 in range(3):
                qch[0, i3, j3] = g[i3, j3]
        for j in range(s):
            if b[j] != 0.0:
                for dd in range(3):
                    arg[dd] = h * b[j] * xi[j, dd]
                _exp_into(arg, rot)
                _matmul_into(rot, qch[j], qch[j + 1])
            else:
                for i3 in range(3):
                    for j3 in range(3):
                        qch[j + 1, i3, j3] = qch[j, i3, j3]
        for i in range(s):
            for i3 in range(3):
                for j3 in range(3):
                    rows[i, 0, i3, j3] = g[i3, j3]
            for j in range(s):
                if a[i, j] != 0.0:
                    for dd in range(3):
                        arg[dd] = h * a[i, j] * xi[j, dd]
                    _exp_into(arg, rot)
                    _matmul_into(rot, rows[i, j], rows[i, j + 1])
                else:
                    for i3 in range(3):
                        for j3 in range(3):
                            rows[i, j + 1, i3, j3] = rows[i, j, i3, j3]
        for i in range(s):
            ok = _dipole_f(rows[i, s], m[i], iinv, mass, qbeta, yp, ym, zp,
                           dump, n[i], v3, t1, t2)
            if not ok:
                return _SINGULARITY, step, g, mu, energies, iters
            _matvec_t_into(rows[i, s], n[i], nbar[i])
        for dd in range(3):
            val = mubar0[dd]
            for j in range(s):
                val += h * b[j] * nbar[j, dd]
            mubar1[dd] = val
        for i3 in range(3):
            for j3 in range(3):
                g[i3, j3] = qch[s, i3, j3]
        _matvec_into(g, mubar1, v3)   # Ad*_{q1^-1} mubar1
        for dd in range(3):
            mu[dd] = v3[dd]
        energies[step + 1] = _dipole_energy(g, mu, iinv, mass, qbeta, yp, ym, zp, v3, t1)
    return _OK, n_steps, g, mu, energies, iters


_STATUS_ERRORS = {
    _NO_CONVERGENCE: NoConvergence,
    _DIVERGENCE: Divergence,
    _SINGULARITY: Singularity,
}


def supports(sys, method):
    """True when the compiled runner can replace the generic driver."""
    from .systems import DipoleSystem
    return HAVE_NUMBA and isinstance(sys, DipoleSystem) and method in ("vrkmk", "vcg")


def fast_integrate(sys, z0, cfg, t, method, n_steps):
    """Compiled equivalent of ``integrate(..., store_states=False)``."""
    p = sys.params
    iinv = 1.0 / p.inertia_diag
    g0 = np.ascontiguousarray(z0[0], dtype=float)
    mu0 = np.ascontiguousarray(z0[1], dtype=float)
    a = np.ascontiguousarray(t.a)
    b = np.ascontiguousarray(t.b)
    yp = np.array([0.0, p.alpha, -1.0])
    ym = np.array([0.0, -p.alpha, -1.0])
    zp = np.asarray(p.z_charge_pos, dtype=float)
    if method == "vrkmk":
        status, where, g, mu, energies, iters = _vrkmk_dipole_run(
            g0, mu0, a, b, np.ascontiguousarray(t.c), _cutoff(cfg, t), cfg.h,
            cfg.fp_tol, cfg.fp_max_iter, n_steps,
            iinv, p.m, p.charge * p.beta, yp, ym, zp)
    elif method == "vcg":
        status, where, g, mu, energies, iters = _vcg_dipole_run(
            g0, mu0, a, b, cfg.h, cfg.fp_tol, cfg.fp_max_iter, n_steps,
            iinv, p.m, p.charge * p.beta, yp, ym, zp)
    else:
        raise ValueError(f"no compiled runner for method {method!r}")
    if status != _OK:
        raise _STATUS_ERRORS[status](
            f"step {where + 1}/{n_steps}: compiled {method} run failed")
    final = CotangentPoint(g, mu)
    times = np.arange(n_steps + 1) * cfg.h
    return Trajectory(times, None, energies, iters, final)
