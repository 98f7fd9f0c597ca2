import numpy as np
import pytest

from liesymp import SO3, Abelian, DipoleSystem
from liesymp.cotangent import CotangentPoint
from liesymp.systems import TrivializedSystem
from liesymp.cotangent import BigAlgebraElement


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)


@pytest.fixture
def so3():
    return SO3


@pytest.fixture
def ab2():
    return Abelian(2)


@pytest.fixture
def dipole():
    return DipoleSystem()


@pytest.fixture
def dipole_z0(dipole):
    return dipole.initial_state()


class ZeroSystem(TrivializedSystem):
    """f identically zero: every step must be the identity map."""

    def __init__(self, struct):
        self.struct = struct

    def f(self, z):
        return BigAlgebraElement(np.zeros(self.struct.dim),
                                 np.zeros(self.struct.dim))


class CoupledAbelianSystem(TrivializedSystem):
    """Nonlinear Hamiltonian on R^2: H = |p|^2/2 + |q|^2/2 + 0.3 q1^2 q2."""

    def __init__(self):
        self.struct = Abelian(2)

    def energy(self, z):
        q, p = z
        return 0.5 * float(p @ p + q @ q) + 0.3 * q[0] ** 2 * q[1]

    def f(self, z):
        q, p = z
        n = -(q + 0.3 * np.array([2.0 * q[0] * q[1], q[0] ** 2]))
        return BigAlgebraElement(p.copy(), n)


@pytest.fixture
def zero_so3_system(so3):
    return ZeroSystem(so3)


@pytest.fixture
def coupled_abelian():
    return CoupledAbelianSystem()


def random_rotation(rng, scale=1.0):
    from liesymp import so3 as so3k
    return so3k.exp(rng.uniform(-scale, scale, 3))


def random_cotangent(rng, scale=1.0):
    return CotangentPoint(random_rotation(rng, scale),
                          rng.uniform(-scale, scale, 3))
