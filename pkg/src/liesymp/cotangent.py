"""Group structure on the right-trivialized cotangent bundle G x g*.

Phase points are pairs (q, mu) with q in G and mu in g*; tangent vectors at
(q, mu) are always stored trivialized as (eta, rho) = (dq * q^-1, dmu).
The product below makes G x g* a Lie group whose algebra is g x g* with the
bracket ``big_bracket``; the trivialized canonical two-form completes the
toolkit needed to check symplecticity of one-step maps numerically.
"""

from typing import NamedTuple

import numpy as np

from .errors import CalibrationMissing, InvalidInput


class CotangentPoint(NamedTuple):
    """Right-trivialized phase point (q, mu) in G x g*."""

    q: np.ndarray
    mu: np.ndarray


class BigAlgebraElement(NamedTuple):
    """Element (xi, nu) of the algebra g x g* of the cotangent group."""

    xi: np.ndarray
    nu: np.ndarray


# Sign of the <mu, [eta1, eta2]> term of the trivialized canonical two-form.
# Conventions differ across references; this value was fixed empirically by
# diagnostics.calibrate_two_form_sign (push a tangent frame through one step
# of a provably symplectic map and keep the sign that is preserved).
TWO_FORM_MU_SIGN = -1


def ct_identity(struct):
    return CotangentPoint(struct.identity(), struct.zero_vector())


def ct_product(struct, a, b):
    """(g, mu)(h, nu) = (gh, mu + Ad_star(g^-1, nu))."""
    g, mu = a
    h, nu = b
    if np.shape(mu) != np.shape(nu):
        raise InvalidInput("cotangent points from different instances")
    return CotangentPoint(
        struct.product(g, h),
        mu + struct.Ad_star(struct.inverse(g), nu),
    )


def ct_inverse(struct, a):
    """(g, mu)^-1 = (g^-1, -Ad_star(g, mu))."""
    g, mu = a
    return CotangentPoint(struct.inverse(g), -struct.Ad_star(g, mu))


def big_bracket(struct, a, b):
    """[(xi, mu), (eta, nu)] = ([xi, eta], ad_star(eta, mu) - ad_star(xi, nu))."""
    xi, mu = a
    eta, nu = b
    if np.shape(mu) != np.shape(nu):
        raise InvalidInput("algebra elements from different instances")
    return BigAlgebraElement(
        struct.bracket(xi, eta),
        struct.ad_star(eta, mu) - struct.ad_star(xi, nu),
    )


def right_translate(struct, z, zeta):
    """Tangent of right translation by z: returns (eta, nu - ad_star(eta, mu)).

    The first component is the trivialization of the velocity eta * q at q.
    """
    _, mu = z
    eta, nu = zeta
    return (np.asarray(eta, dtype=float), nu - struct.ad_star(eta, mu))


def two_form(struct, z, t1, t2, sign=None):
    """Canonical two-form at z on trivialized tangents t_i = (eta_i, rho_i).

    omega(t1, t2) = <rho2, eta1> - <rho1, eta2> + s <mu, [eta1, eta2]>
    with the calibrated sign s (see TWO_FORM_MU_SIGN).
    """
    if sign is None:
        sign = TWO_FORM_MU_SIGN
    if sign not in (-1, 1):
        raise CalibrationMissing("two-form sign constant not calibrated")
    _, mu = z
    eta1, rho1 = t1
    eta2, rho2 = t2
    return (
        float(rho2 @ eta1)
        - float(rho1 @ eta2)
        + sign * float(mu @ struct.bracket(eta1, eta2))
    )
