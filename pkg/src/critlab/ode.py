"""Mean-field ODE system of the singleton-preference process and its constants.

The simulated process has a deterministic large-n limit described by three
coupled scalar ODEs for the singleton fraction x(t), the inverse susceptibility
y(t) = 1/s2(t), and the shape ratio z(t) = s3(t)/s2(t)**3:

    x' = -x**2 - (1 - x**2) x            x(0) = 1
    y' = -x**2 y**2 - (1 - x**2)         y(0) = 1
    z' = 3 x**2 y**3 - 3 x**2 y z        z(0) = 1

y and z stay bounded through the blow-up time of s2, which is why they are the
integrated variables; s2 = 1/y and s3 = z/y**3 are reconstructed afterwards.
The critical time t_c is the root of y, alpha = 1/(1 - x(t_c)**2) is the slope
constant in y(t) ~ (t_c - t)/alpha, and beta = lim z(t) as t -> t_c.

The ER variant freezes x at 0 (no singleton preference), which collapses the
system to y' = -1, z' = 0, so t_c = 1, alpha = 1 and beta = 1 exactly.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

_INTEGRATION_SPAN = 1.5  # y crosses zero well before this for both models


@dataclass
class StepControl:
    """Integrator tolerances (embedded RK 4/5 pair)."""

    atol: float = 1e-10
    rtol: float = 1e-10
    max_step: float = 0.02

    def __post_init__(self):
        if self.atol <= 0 or self.rtol <= 0 or self.max_step <= 0:
            raise ValueError("tolerances and max_step must be positive")


@dataclass
class OdeSolution:
    """Solution grids on [0, t_c) plus the derived critical constants."""

    t: np.ndarray
    x: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    y: np.ndarray
    z: np.ndarray
    t_c: float
    alpha: float
    beta: float
    horizon: float
    model: str = "bf"
    _flow: object = field(default=None, repr=False)    # dense (x, y, z)
    _x_ext: object = field(default=None, repr=False)   # dense x on [0, horizon]

    def x_at(self, t):
        """Singleton fraction x(t), valid on the whole horizon [0, 2 t_c]."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.horizon + 1e-12):
            raise ValueError(f"t outside [0, {self.horizon}]")
        if self.model == "er":
            return np.zeros_like(t)
        return self._x_ext(np.clip(t, 0.0, self.horizon))


def _rhs(t, u):
    x, y, z = u
    x2 = x * x
    w = 1.0 - x2
    return (-x2 - w * x, -x2 * y * y - w, 3.0 * x2 * y * y * y - 3.0 * x2 * y * z)


def _rhs_er(t, u):
    return (0.0, -1.0, 0.0)


def solve_system(step_control=None, model="bf"):
    """Integrate (x, y, z) through the critical time and package the solution.

    Returns an :class:`OdeSolution` whose grid covers [0, t_c) and whose
    constants t_c, alpha, beta are filled in via :func:`find_tc` and
    :func:`compute_alpha_beta`. ``model`` is "bf" (default) or "er".
    """
    ctl = step_control or StepControl()
    if model not in ("bf", "er"):
        raise ValueError(f"unknown model {model!r}")
    rhs = _rhs_er if model == "er" else _rhs
    u0 = (0.0, 1.0, 1.0) if model == "er" else (1.0, 1.0, 1.0)
    res = solve_ivp(rhs, (0.0, _INTEGRATION_SPAN), u0, method="RK45",
                    dense_output=True, atol=ctl.atol, rtol=ctl.rtol,
                    max_step=ctl.max_step)
    if not res.success:
        raise RuntimeError(f"integration failed: {res.message}")
    if res.y[1, -1] >= 0.0:
        raise RuntimeError("y did not reach a sign change; no root bracket")

    flow = res.sol
    t_c = _bisect_root(flow, res.t)
    alpha, beta = _alpha_beta(flow, t_c, model)
    horizon = 2.0 * t_c

    grid = np.linspace(0.0, t_c, 1024, endpoint=False)
    xg, yg, zg = flow(grid)
    s2 = 1.0 / yg
    s3 = zg / yg ** 3

    if model == "er":
        x_ext = None
    else:
        ext = solve_ivp(lambda t, u: _rhs(t, (u[0], 1.0, 1.0))[:1],
                        (0.0, horizon), (1.0,), method="RK45",
                        dense_output=True, atol=ctl.atol, rtol=ctl.rtol,
                        max_step=ctl.max_step)
        if not ext.success:
            raise RuntimeError(f"x extension failed: {ext.message}")
        x_ext = lambda t: ext.sol(t)[0]

    return OdeSolution(t=grid, x=xg, s2=s2, s3=s3, y=yg, z=zg, t_c=t_c,
                       alpha=alpha, beta=beta, horizon=horizon, model=model,
                       _flow=flow, _x_ext=x_ext)


def _bisect_root(flow, t_nodes):
    """Bisection for the zero of y on the integrated flow, to machine width."""
    yvals = flow(t_nodes)[1]
    below = np.flatnonzero(yvals <= 0.0)
    if len(below) == 0:
        raise RuntimeError("no sign bracket for y on the integration nodes")
    k = below[0]
    lo, hi = t_nodes[k - 1], t_nodes[k]
    while hi - lo > 4.0 * np.finfo(float).eps * hi:
        mid = 0.5 * (lo + hi)
        if flow(mid)[1] > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _alpha_beta(flow, t_c, model):
    if model == "er":
        return 1.0, 1.0
    xc = float(flow(t_c)[0])
    alpha = 1.0 / (1.0 - xc * xc)
    # Richardson-style polynomial extrapolation of z(t_c - d) to d -> 0.
    # z is smooth through t_c (z'(t_c) = 0) so a few geometric nodes suffice.
    d = 0.02 * 0.5 ** np.arange(6)
    zs = flow(t_c - d)[2]
    beta = _extrapolate_to_zero(d, zs)
    return alpha, float(beta)


def _extrapolate_to_zero(xs, ys):
    """Neville polynomial extrapolation of (xs, ys) to x = 0."""
    p = list(ys)
    n = len(p)
    for level in range(1, n):
        for i in range(n - level):
            x0, x1 = xs[i], xs[i + level]
            p[i] = (x1 * p[i] - x0 * p[i + 1]) / (x1 - x0)
    return p[0]


def find_tc(sol):
    """Root of y(t) = 0 recomputed from the stored flow (lies in (1, 2))."""
    if sol._flow is None:
        raise ValueError("solution carries no dense flow")
    span = np.linspace(0.0, _INTEGRATION_SPAN, 2048)
    return _bisect_root(sol._flow, span)


def compute_alpha_beta(sol):
    """(alpha, beta) recomputed from the stored flow around t_c."""
    if sol._flow is None:
        raise ValueError("solution carries no dense flow")
    return _alpha_beta(sol._flow, find_tc(sol), sol.model)


def rate_functions_at(sol, t):
    """Mean-field event rates (a0, b0, c0) at time t (scalar or array).

    a0 = (x**2 + (1 - x**2) x**2) / 2 is the doubleton creation rate per
    vertex, b0 = 1 - x**2 the pair-edge rate, c0 = (1 - x**2) x the attachment
    rate, all evaluated on the singleton fraction x(t). x is defined on the
    whole horizon, so these are valid past t_c.
    """
    x = sol.x_at(t)
    x2 = x * x
    w = 1.0 - x2
    return 0.5 * (x2 + w * x2), w, w * x


def critical_constants(sol):
    """The triple (t_c, alpha, beta) of a solved system."""
    return sol.t_c, sol.alpha, sol.beta
