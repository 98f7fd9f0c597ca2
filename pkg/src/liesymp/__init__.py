"""Symplectic Lie group integrators on right-trivialized cotangent bundles.

Variational Runge-Kutta-Munthe-Kaas (VRKMK) and variational Crouch-Grossman
(VCG) one-step maps on G x g*, their classical group-only counterparts, the
SO(3)/so(3) and abelian kernels they run on, Butcher tableau utilities, and
an experiment harness (order studies, long-run energy drift, symplecticity
checks) with a CLI front end.
"""

from .algebra import SO3, Abelian, LieStructure, SO3Structure
from .cotangent import BigAlgebraElement, CotangentPoint
from .integrators import (
    StepConfig,
    StepResult,
    Trajectory,
    cg_group_step,
    compose_steps,
    fixed_point_solve,
    integrate,
    integrate_group,
    rkmk_group_step,
    sprk_step,
    vcg_step,
    vrkmk_step,
)
from .systems import (
    AbelianOscillator,
    DipoleParams,
    DipoleSystem,
    NonregularSystem,
    TrivializedSystem,
    fd_f_from_energy,
)
from .tableaux import (
    ButcherTableau,
    check_order_conditions,
    compose_tableaux,
    gauss_tableau,
    hat_coefficients,
    kutta3_tableau,
    midpoint_tableau,
    yoshida_dirk,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
