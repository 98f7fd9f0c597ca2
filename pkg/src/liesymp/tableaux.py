"""Butcher tableaux: construction, validation, composition, hat coefficients.

The node vector c is always derived from the row sums of a, so the
consistency c_i = sum_j a_ij holds exactly by construction.  Irrational
entries (sqrt(3)/6, sqrt(15) terms, 2^(1/3)) come from library roots rather
than decimal literals.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput


@dataclass(frozen=True)
class ButcherTableau:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    cutoff_r: int | None = None
    name: str = ""

    @property
    def s(self):
        return len(self.b)


def make_tableau(a, b, cutoff_r=None, name=""):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != b.shape[0]:
        raise InvalidInput(f"inconsistent tableau shapes a{a.shape}, b{b.shape}")
    c = a.sum(axis=1)
    for arr in (a, b, c):
        arr.flags.writeable = False
    return ButcherTableau(a, b, c, cutoff_r, name)


def gauss_tableau(s):
    """Gauss collocation tableau with s stages (order 2s) and its usual cut-off."""
    if s == 1:
        return make_tableau([[0.5]], [1.0], cutoff_r=0, name="gauss1")
    if s == 2:
        r3 = np.sqrt(3.0)
        a = [[0.25, 0.25 - r3 / 6.0],
             [0.25 + r3 / 6.0, 0.25]]
        return make_tableau(a, [0.5, 0.5], cutoff_r=2, name="gauss2")
    if s == 3:
        r15 = np.sqrt(15.0)
        a = [[5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0],
             [5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0],
             [5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0]]
        return make_tableau(a, [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0],
                            cutoff_r=4, name="gauss3")
    raise InvalidInput(f"gauss tableau defined for s in 1..3, got {s}")


def kutta3_tableau():
    """Kutta's classical third-order method, cut-off 1."""
    a = [[0.0, 0.0, 0.0],
         [0.5, 0.0, 0.0],
         [-1.0, 2.0, 0.0]]
    return make_tableau(a, [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
                        cutoff_r=1, name="kutta3")


def midpoint_tableau():
    """Implicit midpoint rule (single-stage, symmetric, second order)."""
    return make_tableau([[0.5]], [1.0], cutoff_r=0, name="midpoint")


def _dirk_from_weights(weights, name):
    # DIRK equivalent of composing midpoint substeps with the given weights:
    # a_ij = w_j below the diagonal, w_i / 2 on it.
    w = np.asarray(weights, dtype=float)
    s = len(w)
    a = np.zeros((s, s))
    for i in range(s):
        a[i, :i] = w[:i]
        a[i, i] = 0.5 * w[i]
    return make_tableau(a, w, name=name)


# Triple-jump / symmetric-composition weights (Yoshida).
YOSHIDA6_GAMMA = (
    0.78451361047755726381949763,
    0.23557321335935813368479318,
    -1.17767998417887100694641568,
    1.31518632068391121888424973,
)


def yoshida_dirk(order):
    """DIRK tableau of the symmetric midpoint composition of the given order."""
    if order == 2:
        return midpoint_tableau()
    if order == 4:
        cbrt2 = 2.0 ** (1.0 / 3.0)
        g1 = 1.0 / (2.0 - cbrt2)
        g2 = -cbrt2 / (2.0 - cbrt2)
        return _dirk_from_weights([g1, g2, g1], name="yoshida4")
    if order == 6:
        g1, g2, g3, g4 = YOSHIDA6_GAMMA
        return _dirk_from_weights([g1, g2, g3, g4, g3, g2, g1], name="yoshida6")
    raise InvalidInput(f"yoshida composition defined for order in (2, 4, 6), got {order}")


def compose_tableaux(t1, t2, gamma):
    """Tableau of 'step with t1 over gamma*h, then t2 over (1-gamma)*h'.

    Block layout: upper-left gamma*A1, lower-left rows all gamma*b1,
    lower-right (1-gamma)*A2, weights (gamma*b1, (1-gamma)*b2).
    """
    s1, s2 = t1.s, t2.s
    a = np.zeros((s1 + s2, s1 + s2))
    a[:s1, :s1] = gamma * t1.a
    a[s1:, :s1] = gamma * t1.b
    a[s1:, s1:] = (1.0 - gamma) * t2.a
    b = np.concatenate([gamma * t1.b, (1.0 - gamma) * t2.b])
    return make_tableau(a, b, name=f"compose({t1.name},{t2.name};{gamma:g})")


def compose_chain(base, weights):
    """Fold ``compose_tableaux`` over midpoint-style substeps of sizes w_k * h.

    Returns the tableau of the method 'base over w_1 h, base over w_2 h, ...';
    the partial sums of the weights must be nonzero and sum to 1.
    """
    w = np.asarray(weights, dtype=float)
    if abs(w.sum() - 1.0) > 1e-12:
        raise InvalidInput("composition weights must sum to 1")
    out = base
    total = w[0]
    for wk in w[1:]:
        new_total = total + wk
        if new_total == 0.0:
            raise InvalidInput("zero partial sum in composition weights")
        out = compose_tableaux(out, base, total / new_total)
        # rescale: 'out' is a method over new_total * h
        total = new_total
    return out


def hat_coefficients(t):
    """Momentum-side coefficients a_hat_ij = b_j - b_j a_ji / b_i, b_hat = b.

    For symplectic base methods (Gauss) this returns the original tableau;
    applying it twice always returns the original tableau.
    """
    if np.any(t.b == 0.0):
        raise InvalidInput("hat coefficients require b_i != 0 for all stages")
    a_hat = t.b[None, :] - (t.b[None, :] * t.a.T) / t.b[:, None]
    return make_tableau(a_hat, t.b, cutoff_r=t.cutoff_r,
                        name=f"hat({t.name})" if t.name else "")


@dataclass(frozen=True)
class OrderReport:
    """Classical RK order-condition check up to order 3."""

    order: int
    conditions: tuple = field(default=())
    passed: bool = True

    def __bool__(self):
        return self.passed


_ORDER_CONDITIONS = (
    (1, "sum(b) = 1", lambda t: float(np.sum(t.b)) - 1.0),
    (2, "sum(b c) = 1/2", lambda t: float(t.b @ t.c) - 0.5),
    (3, "sum(b c^2) = 1/3", lambda t: float(t.b @ (t.c * t.c)) - 1.0 / 3.0),
    (3, "sum(b a c) = 1/6", lambda t: float(t.b @ (t.a @ t.c)) - 1.0 / 6.0),
)


def check_order_conditions(t, p, tol=1e-12):
    """Report the classical conditions up to order p (p in 1..3)."""
    if p not in (1, 2, 3):
        raise InvalidInput(f"order conditions implemented for p in 1..3, got {p}")
    rows = []
    ok = True
    for order, label, residual_fn in _ORDER_CONDITIONS:
        if order > p:
            continue
        res = residual_fn(t)
        good = abs(res) <= tol
        ok = ok and good
        rows.append((label, res, good))
    return OrderReport(order=p, conditions=tuple(rows), passed=ok)


def format_tableau(t):
    """Plain-text dump: stage count, c | a rows, b row, cut-off."""
    lines = [f"stages: {t.s}" + (f"  ({t.name})" if t.name else "")]
    for i in range(t.s):
        row = "  ".join(f"{v: .17g}" for v in t.a[i])
        lines.append(f"{t.c[i]: .17g} | {row}")
    lines.append("b: " + "  ".join(f"{v: .17g}" for v in t.b))
    lines.append(f"cutoff_r: {t.cutoff_r if t.cutoff_r is not None else '-'}")
    return "\n".join(lines)


# Registry used by the CLI.
TABLEAUX = {
    "gauss1": lambda: gauss_tableau(1),
    "gauss2": lambda: gauss_tableau(2),
    "gauss3": lambda: gauss_tableau(3),
    "kutta3": kutta3_tableau,
    "midpoint": midpoint_tableau,
    "yoshida4": lambda: yoshida_dirk(4),
    "yoshida6": lambda: yoshida_dirk(6),
}
