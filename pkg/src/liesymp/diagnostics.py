"""Numerical symplecticity checks for one-step maps on G x g*.

A step map z -> Phi(z) is probed by pushing a frame of 2*dim trivialized
basis tangent vectors through Phi with central differences, giving a
Jacobian J in the trivialized frames at z0 and z1.  Phi is symplectic when

    J^T Omega(z1) J = Omega(z0)

with Omega the matrix of the canonical two-form.  The same machinery fixes
the sign convention of the two-form's <mu, [eta1, eta2]> term empirically:
only one sign is preserved by a map that is known to be symplectic.
"""

import numpy as np

from .cotangent import CotangentPoint, two_form
from .errors import CalibrationMissing


def tangent_frame(dim):
    """The 2*dim trivialized basis tangents (e_k, 0), (0, e_k)."""
    frame = []
    for k in range(dim):
        eta = np.zeros(dim)
        eta[k] = 1.0
        frame.append((eta, np.zeros(dim)))
    for k in range(dim):
        rho = np.zeros(dim)
        rho[k] = 1.0
        frame.append((np.zeros(dim), rho))
    return frame


def perturb(struct, z, tangent, eps):
    """Move z along a trivialized tangent: (exp(eps eta) q, mu + eps rho)."""
    eta, rho = tangent
    return CotangentPoint(struct.product(struct.exp(eps * eta), z.q),
                          z.mu + eps * rho)


def fd_step_jacobian(struct, step, z0, eps=1e-6):
    """Central-difference Jacobian of a step map in trivialized frames.

    Returns (J, z1) where column k of J is the push-forward of the k-th
    frame vector, expressed as (eta, rho) coordinates at z1 = step(z0).
    """
    dim = struct.dim
    z1 = step(z0)
    jac = np.empty((2 * dim, 2 * dim))
    for k, tan in enumerate(tangent_frame(dim)):
        zp = step(perturb(struct, z0, tan, eps))
        zm = step(perturb(struct, z0, tan, -eps))
        dq = (np.asarray(zp.q, dtype=float) - np.asarray(zm.q, dtype=float)) / (2.0 * eps)
        eta1 = struct.trivialize_tangent(np.asarray(z1.q, dtype=float), dq)
        rho1 = (zp.mu - zm.mu) / (2.0 * eps)
        jac[:dim, k] = eta1
        jac[dim:, k] = rho1
    return jac, z1


def form_matrix(struct, z, sign=None):
    """Matrix of the trivialized two-form at z over the standard frame."""
    frame = tangent_frame(struct.dim)
    m = len(frame)
    omega = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            val = two_form(struct, z, frame[i], frame[j], sign=sign)
            omega[i, j] = val
            omega[j, i] = -val
    return omega


def symplecticity_defect(struct, step, z0, eps=1e-6, sign=None):
    """max |J^T Omega(z1) J - Omega(z0)| for the finite-difference Jacobian."""
    jac, z1 = fd_step_jacobian(struct, step, z0, eps)
    omega0 = form_matrix(struct, z0, sign=sign)
    omega1 = form_matrix(struct, z1, sign=sign)
    return float(np.max(np.abs(jac.T @ omega1 @ jac - omega0))), z1


def calibrate_two_form_sign(h=1e-3, eps=1e-6, tol=1e-8):
    """Fix the sign of the <mu, [.,.]> term against a known-symplectic step.

    One VRKMK step (two-stage Gauss tableau) on the dipole problem is
    variational, hence symplectic; exactly one sign choice of the two-form
    survives the frame test.  Returns that sign; raises CalibrationMissing
    if neither sign passes (which would indicate a defect elsewhere).
    """
    from .integrators import StepConfig, vrkmk_step
    from .systems import DipoleSystem
    from .tableaux import gauss_tableau

    sys_ = DipoleSystem()
    z0 = sys_.initial_state()
    cfg = StepConfig(h=h)
    t = gauss_tableau(2)

    def step(z):
        return vrkmk_step(sys_, z, cfg, t).state

    defects = {}
    for sign in (1, -1):
        defects[sign], _ = symplecticity_defect(sys_.struct, step, z0,
                                                eps=eps, sign=sign)
    good = [s for s, d in defects.items() if d <= tol]
    if len(good) != 1:
        raise CalibrationMissing(
            f"two-form sign calibration inconclusive: defects {defects}")
    return good[0]
