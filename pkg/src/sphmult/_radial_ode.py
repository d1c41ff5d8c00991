"""Radial eigenfunction solver shared by the spherical-function evaluators.

The spherical function phi_lambda(t) solves

    u'' + (m_alpha coth t + 2 m_2alpha coth 2t) u' + (lambda^2 + rho^2) u = 0,
    u(0) = 1, u'(0) = 0,

with a regular singular point at t = 0.  Two numerical facts drive the
implementation here:

* the solution is launched at t0 = 1e-3 from a Frobenius-type even power
  series (the analytic solution at the singular point), and
* the integration is carried out for v(t) := e^(rho t) u(t), which stays
  of magnitude ~|c(lambda)| for real lambda all the way to t ~ 30, so the
  solver's relative error control keeps working where u itself has decayed
  to e^(-rho t).

The right-hand side is vectorized over a whole grid of lambda values, which
is what makes quadrature over spectral grids affordable.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from .space import RankOneSpace

__all__ = ["phi_grid", "phi_series_coeffs", "SERIES_T0"]

SERIES_T0 = 1e-3
_SERIES_ORDER = 10

# x^(2j-1) coefficients of coth x - 1/x  (|x| < pi), via 4^j B_2j / (2j)!.
_COTH_COEFFS = (
    1 / 3,
    -1 / 45,
    2 / 945,
    -1 / 4725,
    2 / 93555,
    -1382 / 638512875,
    4 / 18243225,
    -3617 / 325641566250,
    87734 / 38979295480125,
    -174611 / 1531329465290625,
)


def phi_series_coeffs(space: RankOneSpace, lam, order: int = _SERIES_ORDER):
    """Coefficients c_k of the even series phi = sum_k c_k t^(2k) near t = 0.

    Valid for |t| < pi/2 (limited by the coth expansion of the drift term).
    lam may be a complex scalar or array; coefficients broadcast over it.
    """
    lam = np.asarray(lam, dtype=complex)
    rho, n = space.rho, space.n
    mu2 = lam**2 + rho**2
    coeffs = [np.ones_like(mu2)]
    for k in range(1, order + 1):
        s = mu2 * coeffs[k - 1]
        for j in range(1, k):
            aj = _COTH_COEFFS[j - 1] * (space.m_alpha + 4**j * space.m_2alpha)
            s = s + 2 * (k - j) * aj * coeffs[k - j]
        coeffs.append(-s / (2 * k * (2 * k + n - 2)))
    return coeffs


def _series_eval(coeffs, t):
    t = np.asarray(t, dtype=float)
    val = sum(c * t ** (2 * k) for k, c in enumerate(coeffs))
    dval = sum(2 * k * c * t ** (2 * k - 1) for k, c in enumerate(coeffs) if k > 0)
    return val, dval


def phi_grid(
    space: RankOneSpace,
    lams,
    ts,
    rtol: float = 1e-11,
    atol: float = 1e-13,
    t_max: float | None = None,
):
    """Evaluate phi_lambda(t) on a lambda-grid x t-grid via one vectorized solve.

    Parameters
    ----------
    lams : array of complex spectral parameters (|Im lam| <= rho sensible).
    ts : array of evaluation times, each in [0, 30].

    Returns
    -------
    (n_lam, n_t) complex array of phi values.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if np.any(ts < 0.0) or np.any(ts > 30.0 + 1e-12):
        raise ValueError("t must lie in [0, 30]")
    rho = space.rho
    ma, m2a = space.m_alpha, space.m_2alpha
    out = np.empty((lams.size, ts.size), dtype=complex)

    coeffs = phi_series_coeffs(space, lams)
    small = ts <= SERIES_T0
    if np.any(small):
        for j in np.nonzero(small)[0]:
            out[:, j], _ = _series_eval(coeffs, ts[j])
    big = ~small
    if not np.any(big):
        return out

    t_end = float(ts[big].max()) if t_max is None else float(t_max)
    u0, du0 = _series_eval(coeffs, SERIES_T0)
    scale = np.exp(rho * SERIES_T0)
    v0 = u0 * scale
    dv0 = (du0 + rho * u0) * scale
    m = lams.size
    lam2 = lams**2
    two_rho2 = 2.0 * rho * rho

    def rhs(t, y):
        drift = ma / np.tanh(t) + 2.0 * m2a / np.tanh(2.0 * t)
        v, dv = y[:m], y[m:]
        return np.concatenate(
            [dv, -(drift - 2.0 * rho) * dv - (lam2 + two_rho2 - drift * rho) * v]
        )

    # t_eval rather than dense output: dense interpolants for large vectorized
    # states hold every step's stages in memory.
    t_eval = np.unique(ts[big])
    sol = solve_ivp(
        rhs,
        (SERIES_T0, max(t_end, 2 * SERIES_T0)),
        np.concatenate([v0, dv0]),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=t_eval,
    )
    if not sol.success:  # pragma: no cover - diagnostic path
        raise RuntimeError(f"radial eigenfunction integration failed: {sol.message}")
    col = {float(tv): i for i, tv in enumerate(t_eval)}
    for j in np.nonzero(big)[0]:
        i = col[float(ts[j])]
        out[:, j] = sol.y[:m, i] * np.exp(-rho * ts[j])
    return out
