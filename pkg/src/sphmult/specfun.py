"""Special functions: normalized Bessel kernels, the Harish-Chandra
c-function with its Plancherel density, and the coefficients of the
Harish-Chandra series.

Conventions
-----------
* cJ_mu(z) = C_mu z^(-mu) J_mu(z) with C_mu = 2^mu Gamma(mu+1), so that
  cJ_mu(0) = 1 and cJ_{-1/2}(z) = cos z.  Entire and even in z.
* c(lambda) is the rank-one Gamma-quotient (Gindikin-Karpelevich form for
  the Jacobi parameters a = n/2 - 1, b = (m_2alpha - 1)/2), normalized so
  that c(-i rho) = 1, i.e. phi_{+-i rho} == 1.  The closed form is never
  trusted bare: `hc_asymptotic_fit` extracts c(lambda) from the large-t
  behaviour of the radial eigenfunction and the two are cross-validated in
  the acceptance suite.
* The coefficients Gamma_ell of the series expansion at infinity satisfy
  the recursion obtained by substituting
  e^((i lam - rho) t) sum_ell Gamma_ell e^(-2 ell t) into the radial
  equation:

      4 ell (ell - i lam) Gamma_ell
          = - sum_{j=1..ell} d_j (i lam - rho - 2(ell - j)) Gamma_{ell-j},

  with d_j = 2 m_alpha + 4 m_2alpha [j even] coming from the expansion of
  the coth drift.  Unit tests validate the recursion against the ODE.
* omega(lam, t) denotes the tail sum normalized so that

      phi_lam(t) = c(lam) e^((i lam - rho)t) [1 + e^(-2t) omega(lam, t)]
                   + (lam -> -lam),

  i.e. omega_L(lam, t) = sum_{ell=1..L} Gamma_ell(lam) e^(-2(ell-1) t).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, loggamma

from . import _radial_ode
from .space import RankOneSpace

__all__ = [
    "bessel_cJ",
    "CFunctionValue",
    "CFunctionPole",
    "ResonanceError",
    "c_value",
    "c_function",
    "cinv_check",
    "plancherel_density",
    "hc_asymptotic_fit",
    "GammaCoefficients",
    "gamma_ell",
    "gamma_table",
    "omega_partial",
    "omega_table",
]


class CFunctionPole(Exception):
    """c(lambda) evaluated at a pole of the Gamma quotient."""


class ResonanceError(Exception):
    """Gamma_ell recursion hit a resonance point lambda = -i ell."""


# ---------------------------------------------------------------------------
# normalized Bessel kernel
# ---------------------------------------------------------------------------

_BESSEL_SWITCH = 12.0


def _cJ_series(mu: float, z: np.ndarray) -> np.ndarray:
    # cJ_mu(z) = sum_k (-1)^k Gamma(mu+1)/(k! Gamma(mu+k+1)) (z/2)^(2k)
    q = -((z / 2.0) ** 2)
    term = np.ones_like(q)
    total = np.ones_like(q)
    for k in range(1, 2000):
        term = term * q / (k * (mu + k))
        total = total + term
        if np.max(np.abs(term)) < 1e-17 * max(np.max(np.abs(total)), 1.0):
            break
    return total


def _cJ_asymptotic(mu: float, z: np.ndarray) -> np.ndarray:
    # Hankel expansion: J_mu(z) ~ sqrt(2/(pi z)) [P cos w - Q sin w],
    # w = z - mu pi/2 - pi/4.  Even in z, so fold onto Re z >= 0 first.
    z = np.where(np.real(z) < 0, -z, z)
    w = z - (0.5 * mu + 0.25) * np.pi
    fourmu2 = 4.0 * mu * mu
    P = np.ones_like(z)
    Q = np.zeros_like(z)
    term = np.ones_like(z)
    k = 0
    best = np.inf
    while k < 30:
        term_next = term * (fourmu2 - (2 * k + 1) ** 2) / (8.0 * (k + 1) * z)
        size = np.max(np.abs(term_next))
        if size > best:
            break
        best = size
        if k % 2 == 0:
            Q = Q + ((-1) ** (k // 2)) * term_next
        else:
            P = P + ((-1) ** ((k + 1) // 2)) * term_next
        term = term_next
        k += 1
    J = np.sqrt(2.0 / (np.pi * z)) * (P * np.cos(w) - Q * np.sin(w))
    logC = mu * np.log(2.0) + gammaln(mu + 1.0)
    return np.exp(logC - mu * np.log(z)) * J


def bessel_cJ(mu: float, z):
    """Normalized Bessel kernel cJ_mu(z) = 2^mu Gamma(mu+1) z^(-mu) J_mu(z).

    Entire and even in z with cJ_mu(0) = 1.  Power series for |z| <= 12,
    Hankel asymptotics beyond; the switchover is validated to < 1e-10 in
    the tests.
    """
    if mu < -0.5:
        raise ValueError("order mu must be >= -1/2")
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    small = np.abs(z) <= _BESSEL_SWITCH
    if np.any(small):
        out[small] = _cJ_series(mu, z[small])
    if np.any(~small):
        out[~small] = _cJ_asymptotic(mu, z[~small])
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# c-function and Plancherel density
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CFunctionValue:
    lam: complex
    value: complex
    source: str  # "closed_form" | "asymptotic_fit"
    fit_residual: float = 0.0


def _log_c(space: RankOneSpace, lam: np.ndarray) -> np.ndarray:
    rho = space.rho
    aJ = 0.5 * space.n - 1.0
    il = 1j * lam
    return (
        (rho - il) * np.log(2.0)
        + loggamma(aJ + 1.0)
        + loggamma(il)
        - loggamma(0.5 * (il + rho))
        - loggamma(0.5 * (il + 0.5 * space.m_alpha + 1.0))
    )


def _gamma_pole_distance(space: RankOneSpace, lam: np.ndarray) -> np.ndarray:
    # Distance of i*lam to the nearest pole of Gamma(i lam), the only pole
    # source of c in the closed strip 0 <= Im lam <= rho.
    il = 1j * np.asarray(lam, dtype=complex)
    k = np.maximum(np.round(-il.real), 0.0)
    return np.abs(il + k)


def c_value(space: RankOneSpace, lam):
    """Closed-form c(lambda); vectorized, poles return inf without raising."""
    lam = np.asarray(lam, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        val = np.exp(_log_c(space, lam))
    return val


def c_function(space: RankOneSpace, lam: complex, pole_tol: float = 1e-9) -> CFunctionValue:
    """c(lambda) as a reported value; raises CFunctionPole at Gamma poles."""
    lam_arr = np.asarray([lam], dtype=complex)
    if float(_gamma_pole_distance(space, lam_arr)[0]) < pole_tol:
        raise CFunctionPole(f"lambda={lam} is within {pole_tol} of a pole of c")
    return CFunctionValue(lam=complex(lam), value=complex(c_value(space, lam_arr)[0]),
                          source="closed_form")


def cinv_check(space: RankOneSpace, lam):
    """1/c(-lambda), the weight of the spectral-side kernel integrals.

    Holomorphic in the closed upper strip 0 <= Im lambda <= rho (it has a
    zero, not a pole, at lambda = 0).  Vectorized over lam.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    with np.errstate(all="ignore"):
        out = np.exp(-_log_c(space, -lam))
    # the Gamma pole of c becomes a zero of 1/c; patch the 0/0 spots
    out = np.where(np.isfinite(out), out, 0.0)
    return out


def plancherel_density(space: RankOneSpace, lam):
    """|c(lambda)|^(-2) for real lambda; even, ~ lambda^2 at 0, ~ lambda^(n-1) at infinity."""
    lam = np.asarray(lam, dtype=float)
    out = np.exp(-2.0 * np.real(_log_c(space, lam + 0j)))
    return np.where(lam == 0.0, 0.0, out)


def hc_asymptotic_fit(
    space: RankOneSpace,
    lam: float,
    t_window: tuple[float, float] = (26.0, 29.5),
    n_points: int = 8,
) -> CFunctionValue:
    """Extract c(lambda) from the large-t behaviour of the radial eigenfunction.

    Least-squares fit of e^(rho t) phi_lambda(t) against the oscillatory pair
    {e^(i lam t), e^(-i lam t)} on a window where the series tail e^(-2t) is
    below machine precision.  Independent of the closed form.
    """
    if lam == 0.0:
        raise CFunctionPole("asymptotic fit undefined at lambda = 0")
    ts = np.linspace(t_window[0], t_window[1], n_points)
    rho = space.rho
    vals = _radial_ode.phi_grid(space, [complex(lam)], ts, rtol=1e-12, atol=3e-14)[0]
    vals = vals * np.exp(rho * ts)
    design = np.stack([np.exp(1j * lam * ts), np.exp(-1j * lam * ts)], axis=1)
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    resid = float(np.max(np.abs(design @ coef - vals)))
    return CFunctionValue(lam=complex(lam), value=complex(coef[0]),
                          source="asymptotic_fit", fit_residual=resid)


# ---------------------------------------------------------------------------
# Harish-Chandra series coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaCoefficients:
    lam: complex
    space: RankOneSpace
    values: np.ndarray = field(repr=False)  # Gamma_0 .. Gamma_L

    @property
    def order(self) -> int:
        return len(self.values) - 1


def gamma_table(space: RankOneSpace, lams, L: int, resonance_tol: float = 1e-12):
    """Gamma_0..Gamma_L for an array of lambdas; shape (L+1, n_lam).

    Raises ResonanceError if any lambda sits on a resonance point -i ell
    with 1 <= ell <= L.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    rho = space.rho
    ells = np.arange(1, L + 1)
    if L >= 1:
        gaps = np.abs(lams[None, :] + 1j * ells[:, None])
        if np.any(gaps < resonance_tol):
            bad = lams[np.any(gaps < resonance_tol, axis=0)]
            raise ResonanceError(f"resonance at lambda={bad[0]} (lambda = -i*ell)")
    G = np.zeros((L + 1, lams.size), dtype=complex)
    G[0] = 1.0
    il = 1j * lams
    for ell in range(1, L + 1):
        acc = np.zeros(lams.size, dtype=complex)
        for j in range(1, ell + 1):
            dj = 2 * space.m_alpha + 4 * space.m_2alpha * (j % 2 == 0)
            acc += dj * (il - rho - 2.0 * (ell - j)) * G[ell - j]
        G[ell] = -acc / (4.0 * ell * (ell - il))
    return G


def gamma_ell(space: RankOneSpace, lam: complex, L: int) -> GammaCoefficients:
    """Coefficients Gamma_0..Gamma_L of the series at infinity for one lambda."""
    values = gamma_table(space, [lam], L)[:, 0]
    return GammaCoefficients(lam=complex(lam), space=space, values=values)


def omega_table(space: RankOneSpace, lams, t: float, L: int):
    """omega_L(lam, t) = sum_{ell=1..L} Gamma_ell(lam) e^(-2(ell-1) t), vectorized."""
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    if L < 1:
        return np.zeros(lams.size, dtype=complex)
    G = gamma_table(space, lams, L)
    ells = np.arange(1, L + 1)
    return np.einsum("l,ln->n", np.exp(-2.0 * (ells - 1) * t), G[1:])


def omega_partial(space: RankOneSpace, lam: complex, t: float, L: int) -> complex:
    """Partial sum of the series tail; converges geometrically for t >= 1/2."""
    if L >= 1 and t < 0.5:
        raise ValueError("omega partial sums are only used in the regime t >= 1/2")
    return complex(omega_table(space, [lam], t, L)[0])
