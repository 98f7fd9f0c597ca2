"""Trivialized Hamiltonian systems: the map f with z' = f(z) . z, plus energies.

A system supplies ``f(z) -> (xi, n)`` so that the equations of motion on
G x g* read, in right-trivialized form,

    dq/dt  = xi . q,
    dmu/dt = n - ad_star(xi, mu).

For a regular Hamiltonian H this is f(q, mu) = (D2 H, -(D1 H) . q^-1), with
the q-derivative taken along directions eta . q and right-translated back to
the algebra.  Production f-maps are analytic; ``fd_f_from_energy`` provides
the central-difference version used as a test oracle.
"""

from dataclasses import dataclass

import numpy as np

from . import so3
from .algebra import Abelian, SO3
from .cotangent import BigAlgebraElement, CotangentPoint
from .errors import Singularity

_E3 = np.array([0.0, 0.0, 1.0])


class TrivializedSystem:
    """Pair of evaluators on G x g*: the vector-field map f and the energy."""

    struct = None

    def f(self, z):
        raise NotImplementedError

    def energy(self, z):
        """Conserved energy, or None when the system does not provide one."""
        return None


@dataclass(frozen=True)
class DipoleParams:
    """Parameters of the charged-pendulum test problem on SO(3).

    A massless unit rod is pinned at the origin; a transverse rod of
    half-length ``alpha`` at its free end carries point charges +-``charge``
    of mass ``m``/2 each.  Uniform gravity acts along -e3 and a fixed
    external charge ``beta`` sits at ``z_charge_pos``.
    """

    m: float = 1.0
    charge: float = 1.0
    beta: float = 1.0
    alpha: float = 0.1
    z_charge_pos: tuple = (0.0, 0.0, -1.5)

    def __post_init__(self):
        if self.m <= 0 or self.alpha <= 0:
            raise ValueError("m and alpha must be positive")

    @property
    def inertia_diag(self):
        a2 = self.alpha * self.alpha
        return self.m * np.array([1.0 + a2, 1.0, a2])


class DipoleSystem(TrivializedSystem):
    """Right-trivialized Hamiltonian system for the charged pendulum.

    H(g, mu) = mu' g I^-1 g' mu / 2 + m e3' g e3
               + q beta (1/|g y+ - z| - 1/|g y- - z|),

    with body-frame charge positions y+- = (0, +-alpha, -1) and inertia
    I = m diag(1 + alpha^2, 1, alpha^2).
    """

    collision_tol = 1e-9

    def __init__(self, params=None):
        self.params = params if params is not None else DipoleParams()
        self.struct = SO3
        p = self.params
        self._inertia_inv = 1.0 / p.inertia_diag
        self._y_plus = np.array([0.0, p.alpha, -1.0])
        self._y_minus = np.array([0.0, -p.alpha, -1.0])
        self._z = np.asarray(p.z_charge_pos, dtype=float)
        self._qbeta = p.charge * p.beta

    def initial_state(self):
        """Reference initial data: g0 below, mu0 = g0 I g0' e2."""
        g0 = np.array([
            [1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0],
            [0.0, 1.0, 0.0],
        ])
        mu0 = g0 @ (self.params.inertia_diag * (g0.T @ np.array([0.0, 1.0, 0.0])))
        return CotangentPoint(g0, mu0)

    def _distances(self, g):
        dp = g @ self._y_plus - self._z
        dm = g @ self._y_minus - self._z
        rp = np.sqrt(dp @ dp)
        rm = np.sqrt(dm @ dm)
        if rp < self.collision_tol or rm < self.collision_tol:
            raise Singularity("pendulum charge collided with the field charge")
        return dp, dm, rp, rm

    def energy(self, z):
        g, mu = z
        w = g.T @ mu
        kinetic = 0.5 * float(w @ (self._inertia_inv * w))
        gravity = self.params.m * g[2, 2]
        _, _, rp, rm = self._distances(g)
        return kinetic + gravity + self._qbeta * (1.0 / rp - 1.0 / rm)

    def f(self, z):
        g, mu = z
        xi = g @ (self._inertia_inv * (g.T @ mu))
        dp, dm, rp, rm = self._distances(g)
        # energy gradient along eta . g, right-translated; n is its negative
        grad = so3.cross(xi, mu)
        grad += self.params.m * so3.cross(g[:, 2], _E3)
        gp = g @ self._y_plus
        gm = g @ self._y_minus
        grad += self._qbeta * (so3.cross(gp, self._z) / rp**3
                               - so3.cross(gm, self._z) / rm**3)
        return BigAlgebraElement(xi, -grad)


class NonregularSystem(TrivializedSystem):
    """Momentum-linear Hamiltonian H(q, mu) = <mu, v(q)> on SO(3) x so(3)*.

    The velocity field is v(g) = vee(skew(A g)) for a fixed matrix A, so the
    q-dynamics q' = v(q) . q is independent of mu.  The fiber derivative is
    not invertible, hence no Lagrangian counterpart exists; the f-map is
    f = (v(q), -((dv/dq)* mu) . q^-1) and is exact because v is linear in g.
    """

    # Default generator.  Deliberately a generic, strongly non-normal matrix:
    # structured seeds (e.g. row-major 1..9) give flows that stay nearly
    # commutative over short horizons, which hides the one-exponential order
    # barrier this system exists to exhibit.
    DEFAULT_A = np.array([[1.0, 7.0, -3.0],
                          [-6.0, 2.0, 8.0],
                          [4.0, -9.0, 5.0]]) / 4.0

    def __init__(self, a_matrix=None):
        if a_matrix is None:
            a_matrix = self.DEFAULT_A
        self.a_matrix = np.asarray(a_matrix, dtype=float)
        self.struct = SO3

    def v(self, g):
        m = self.a_matrix @ g
        return so3.vee(0.5 * (m - m.T), tol=np.inf)

    def f(self, z):
        g, mu = z
        n = np.empty(3)
        for k in range(3):
            dg = so3.hat(np.eye(3)[k]) @ g
            m = self.a_matrix @ dg
            n[k] = -float(mu @ so3.vee(0.5 * (m - m.T), tol=np.inf))
        return BigAlgebraElement(self.v(g), n)

    def energy(self, z):
        g, mu = z
        return float(mu @ self.v(g))


class AbelianOscillator(TrivializedSystem):
    """Harmonic oscillator H = (|p|^2 + |q|^2)/2 on the abelian group R^n."""

    def __init__(self, dim=1):
        self.struct = Abelian(dim)

    def initial_state(self):
        q0 = np.zeros(self.struct.dim)
        q0[0] = 1.0
        return CotangentPoint(q0, np.zeros(self.struct.dim))

    def energy(self, z):
        q, p = z
        return 0.5 * float(p @ p + q @ q)

    def f(self, z):
        q, p = z
        return BigAlgebraElement(p.copy(), -q)


def fd_f_from_energy(struct, energy_fn, z, eps=1e-6):
    """Central-difference approximation of f = (D2 H, -(D1 H) . q^-1).

    Test oracle only: second-order differences with perturbation ``eps``,
    with the q-derivative taken along exp(+-eps e_k) . q.
    """
    q, mu = z
    dim = struct.dim
    xi = np.empty(dim)
    n = np.empty(dim)
    for k in range(dim):
        e = np.zeros(dim)
        e[k] = eps
        xi[k] = (energy_fn(CotangentPoint(q, mu + e))
                 - energy_fn(CotangentPoint(q, mu - e))) / (2.0 * eps)
        q_plus = struct.product(struct.exp(e), q)
        q_minus = struct.product(struct.exp(-e), q)
        n[k] = -(energy_fn(CotangentPoint(q_plus, mu))
                 - energy_fn(CotangentPoint(q_minus, mu))) / (2.0 * eps)
    return BigAlgebraElement(xi, n)
