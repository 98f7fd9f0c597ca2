"""Lie algebra/group kernel behind the integrators.

A :class:`LieStructure` bundles the operations the steppers need: bracket,
exponential, logarithm, adjoint actions, the right-trivialized dexp family,
and their adjoints with respect to the dual pairing.  Coordinates are plain
numpy arrays: algebra elements and covectors are ``(dim,)`` vectors, group
elements are whatever the concrete structure uses (3x3 matrices for SO(3),
``(dim,)`` coordinate vectors for the abelian group).

Two instances are provided:

* :data:`SO3` -- rotations, with all kernels in closed form (see ``so3``).
* :class:`Abelian` -- the vector group R^n, where the bracket vanishes and
  every dexp-type map is the identity.  It exists mainly as a cross-check:
  on it the variational Lie group steps must collapse to classical
  symplectic partitioned Runge-Kutta steps.

All operations are pure functions of their arguments; nothing here holds
mutable state, so structures can be shared freely between threads.
"""

import numpy as np

from . import so3
from .errors import InvalidInput

# Bernoulli numbers B_0..B_6 (B_1 = -1/2 convention), exact rationals once:
# 1, -1/2, 1/6, 0, -1/30, 0, 1/42.
BERNOULLI = (1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0)
MAX_CUTOFF = len(BERNOULLI) - 1
_FACTORIAL = (1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0)


def _check_cutoff(r):
    if not isinstance(r, (int, np.integer)) or not 0 <= r <= MAX_CUTOFF:
        raise InvalidInput(f"cut-off r must be an integer in [0, {MAX_CUTOFF}], got {r!r}")


class LieStructure:
    """Abstract capability record for a Lie group/algebra pair."""

    dim = None

    # -- algebra ----------------------------------------------------------

    def bracket(self, x, y):
        raise NotImplementedError

    def ad_star(self, x, mu):
        """Coadjoint operator: <ad_star(x, mu), y> == <mu, bracket(x, y)>."""
        raise NotImplementedError

    # -- group ------------------------------------------------------------

    def identity(self):
        raise NotImplementedError

    def product(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def exp(self, x):
        raise NotImplementedError

    def log(self, g):
        raise NotImplementedError

    def Ad(self, g, x):
        raise NotImplementedError

    def Ad_star(self, g, mu):
        """<Ad_star(g, mu), x> == <mu, Ad(g, x)>."""
        raise NotImplementedError

    # -- dexp family (right-trivialized), closed form ----------------------

    def dexp(self, x, y):
        raise NotImplementedError

    def dexpinv(self, x, y):
        raise NotImplementedError

    def dexp_star(self, x, mu):
        raise NotImplementedError

    def dexpinv_star(self, x, mu):
        raise NotImplementedError

    def trivialize_tangent(self, q, dq):
        """Coordinates of dq . q^-1 for a tangent dq at q (finite differences)."""
        raise NotImplementedError

    # -- truncations shared by all instances -------------------------------

    def dexpinv_trunc(self, r, x, y):
        """Degree-r truncation of dexpinv: id - ad_x/2 + sum B_k/k! ad_x^k."""
        _check_cutoff(r)
        term = np.asarray(y, dtype=float)
        acc = term.copy()
        for k in range(1, r + 1):
            term = self.bracket(x, term)
            c = BERNOULLI[k] / _FACTORIAL[k]
            if c != 0.0:
                acc += c * term
        return acc

    def dexpinv_trunc_star(self, r, x, mu):
        """Adjoint of dexpinv_trunc: same polynomial in ad_star."""
        _check_cutoff(r)
        term = np.asarray(mu, dtype=float)
        acc = term.copy()
        for k in range(1, r + 1):
            term = self.ad_star(x, term)
            c = BERNOULLI[k] / _FACTORIAL[k]
            if c != 0.0:
                acc += c * term
        return acc

    def p_star_poly(self, r, x, xi, mu):
        """Adjoint of the x-derivative of dexpinv_trunc(r, x, xi), applied to mu.

        P(0) = 0, P(1) = ad_star(xi, .)/2, and in general

            P(r) = ad_star(xi)/2
                   - sum_{k=2..r} B_k/k! sum_{i=0..k-1}
                         ad_star(ad_x^i xi) o (ad_star x)^(k-i-1).
        """
        _check_cutoff(r)
        if r == 0:
            return np.zeros(self.dim)
        out = 0.5 * self.ad_star(xi, mu)
        if r >= 2:
            ad_pow_xi = [np.asarray(xi, dtype=float)]
            for _ in range(r - 1):
                ad_pow_xi.append(self.bracket(x, ad_pow_xi[-1]))
            adstar_pow_mu = [np.asarray(mu, dtype=float)]
            for _ in range(r - 1):
                adstar_pow_mu.append(self.ad_star(x, adstar_pow_mu[-1]))
            for k in range(2, r + 1):
                c = BERNOULLI[k] / _FACTORIAL[k]
                if c == 0.0:
                    continue
                s = np.zeros(self.dim)
                for i in range(k):
                    s += self.ad_star(ad_pow_xi[i], adstar_pow_mu[k - i - 1])
                out -= c * s
        return out

    def zero_vector(self):
        return np.zeros(self.dim)


class SO3Structure(LieStructure):
    """Rotation group: algebra coordinates via hat, dual via the dot product."""

    dim = 3

    def _check3(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (3,):
            raise InvalidInput(f"expected a 3-vector, got shape {v.shape}")
        return v

    def bracket(self, x, y):
        return so3.cross(self._check3(x), self._check3(y))

    def ad_star(self, x, mu):
        # <mu, x cross y> = <mu cross x, y>
        return so3.cross(self._check3(mu), self._check3(x))

    def identity(self):
        return np.eye(3)

    def product(self, g, h):
        return g @ h

    def inverse(self, g):
        return np.asarray(g).T.copy()

    def exp(self, x):
        return so3.exp(x)

    def log(self, g):
        return so3.log(g)

    def Ad(self, g, x):
        return g @ self._check3(x)

    def Ad_star(self, g, mu):
        return g.T @ self._check3(mu)

    def dexp(self, x, y):
        return so3.dexp(x, y)

    def dexpinv(self, x, y):
        return so3.dexpinv(x, y)

    def dexp_star(self, x, mu):
        return so3.dexp_star(x, mu)

    def dexpinv_star(self, x, mu):
        return so3.dexpinv_star(x, mu)

    def trivialize_tangent(self, q, dq):
        m = dq @ q.T
        return so3.vee(0.5 * (m - m.T), tol=np.inf)


class Abelian(LieStructure):
    """The vector group R^n: zero bracket, exp = identity on coordinates."""

    def __init__(self, dim):
        if dim < 1:
            raise InvalidInput("abelian dimension must be >= 1")
        self.dim = int(dim)

    def _check(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise InvalidInput(f"expected a {self.dim}-vector, got shape {v.shape}")
        return v

    def bracket(self, x, y):
        self._check(x)
        self._check(y)
        return np.zeros(self.dim)

    def ad_star(self, x, mu):
        self._check(x)
        self._check(mu)
        return np.zeros(self.dim)

    def identity(self):
        return np.zeros(self.dim)

    def product(self, g, h):
        return self._check(g) + self._check(h)

    def inverse(self, g):
        return -self._check(g)

    def exp(self, x):
        return self._check(x).copy()

    def log(self, g):
        return self._check(g).copy()

    def Ad(self, g, x):
        return self._check(x).copy()

    def Ad_star(self, g, mu):
        return self._check(mu).copy()

    def dexp(self, x, y):
        return self._check(y).copy()

    def dexpinv(self, x, y):
        return self._check(y).copy()

    def dexp_star(self, x, mu):
        return self._check(mu).copy()

    def dexpinv_star(self, x, mu):
        return self._check(mu).copy()

    def trivialize_tangent(self, q, dq):
        return self._check(dq).copy()

    def dexpinv_trunc(self, r, x, y):
        _check_cutoff(r)
        return self._check(y).copy()

    def dexpinv_trunc_star(self, r, x, mu):
        _check_cutoff(r)
        return self._check(mu).copy()

    def p_star_poly(self, r, x, xi, mu):
        _check_cutoff(r)
        return np.zeros(self.dim)


SO3 = SO3Structure()
