"""Closed-form kernels for the rotation group SO(3) and its algebra so(3).

Vectors in so(3) are identified with R^3 through the hat map, and so(3)*
with R^3 through the standard inner product, so all pairings below are plain
dot products.  All differentials of the exponential map use the
right-trivialized convention

    d/dt exp(x(t)) = dexp_x(xdot) * exp(x(t)),

for which dexp_x = sum_k ad_x^k / (k+1)!.

Every map here is evaluated in closed form (Rodrigues-type formulas), with
truncated Taylor expansions of the scalar coefficient functions below
``_SMALL_ANGLE`` to avoid cancellation in terms like sin(t)/t.  The starred
variants are exact matrix transposes of their primal maps, so the pairing
identities hold to machine precision.
"""

import numpy as np

from .errors import BranchCut, InvalidInput

_SMALL_ANGLE = 1e-4
_LOG_BRANCH_MARGIN = 1e-6
_DEXP_BRANCH_MARGIN = 1e-6


def hat(v):
    """Map a 3-vector to the skew matrix with hat(v) @ w == cross(v, w)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise InvalidInput(f"hat expects a 3-vector, got shape {v.shape}")
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def vee(m, tol=1e-12):
    """Inverse of hat.  Rejects matrices whose symmetric part exceeds tol."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise InvalidInput(f"vee expects a 3x3 matrix, got shape {m.shape}")
    if np.max(np.abs(m + m.T)) > tol:
        raise InvalidInput("vee: input is not skew-symmetric")
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def cross(a, b):
    # np.cross has large call overhead for single vectors; this is hot-path code
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def _sinc(theta):
    # sin(t)/t
    if theta < _SMALL_ANGLE:
        t2 = theta * theta
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0
    return np.sin(theta) / theta


def _cos_coeff(theta):
    # (1 - cos(t))/t^2
    if theta < _SMALL_ANGLE:
        t2 = theta * theta
        return 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    return (1.0 - np.cos(theta)) / (theta * theta)


def _dexp_coeff(theta):
    # (t - sin(t))/t^3
    if theta < _SMALL_ANGLE:
        t2 = theta * theta
        return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0
    return (theta - np.sin(theta)) / (theta * theta * theta)


def _dexpinv_coeff(theta):
    # (1 - (t/2) cot(t/2)) / t^2, poles at t = 2 pi k
    if theta < _SMALL_ANGLE:
        t2 = theta * theta
        return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0
    half = 0.5 * theta
    return (1.0 - half * np.cos(half) / np.sin(half)) / (theta * theta)


def exp(x):
    """Rodrigues formula for the matrix exponential of hat(x)."""
    x = np.asarray(x, dtype=float)
    theta = np.sqrt(x @ x)
    k = hat(x)
    return np.eye(3) + _sinc(theta) * k + _cos_coeff(theta) * (k @ k)


def log(g, branch_margin=_LOG_BRANCH_MARGIN):
    """Principal logarithm of a rotation matrix, returned as a 3-vector.

    Raises BranchCut when the rotation angle is within ``branch_margin``
    of pi, where the principal branch becomes ill-conditioned.
    """
    g = np.asarray(g, dtype=float)
    w = 0.5 * np.array([g[2, 1] - g[1, 2], g[0, 2] - g[2, 0], g[1, 0] - g[0, 1]])
    s = np.sqrt(w @ w)                      # |sin(theta)|
    c = 0.5 * (np.trace(g) - 1.0)           # cos(theta)
    theta = np.arctan2(s, c)
    if theta >= np.pi - branch_margin:
        raise BranchCut(f"rotation angle {theta} too close to pi")
    if theta < _SMALL_ANGLE:
        t2 = theta * theta
        scale = 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0   # t/sin(t)
    else:
        scale = theta / s
    return scale * w


def _check_dexp_branch(theta):
    if theta >= 2.0 * np.pi - _DEXP_BRANCH_MARGIN:
        raise BranchCut(f"|x| = {theta} outside the dexp branch (< 2 pi)")


def dexp_matrix(x):
    """Matrix of the right-trivialized differential of exp at x."""
    x = np.asarray(x, dtype=float)
    theta = np.sqrt(x @ x)
    _check_dexp_branch(theta)
    k = hat(x)
    return np.eye(3) + _cos_coeff(theta) * k + _dexp_coeff(theta) * (k @ k)


def dexpinv_matrix(x):
    """Matrix of the inverse of the right-trivialized differential of exp."""
    x = np.asarray(x, dtype=float)
    theta = np.sqrt(x @ x)
    _check_dexp_branch(theta)
    k = hat(x)
    return np.eye(3) - 0.5 * k + _dexpinv_coeff(theta) * (k @ k)


def dexp(x, y):
    return dexp_matrix(x) @ np.asarray(y, dtype=float)


def dexpinv(x, y):
    return dexpinv_matrix(x) @ np.asarray(y, dtype=float)


def dexp_star(x, mu):
    """Adjoint of dexp_x: <dexp_star(x, mu), y> == <mu, dexp(x, y)>."""
    return dexp_matrix(x).T @ np.asarray(mu, dtype=float)


def dexpinv_star(x, mu):
    """Adjoint of dexpinv_x, used for momentum-side updates."""
    return dexpinv_matrix(x).T @ np.asarray(mu, dtype=float)
