"""Panel quadrature rules for the oscillatory spectral integrals.

All spectral-side integrands here look like (smooth decaying) x e^(i lam t):
composite Gauss-Legendre panels whose width keeps the phase advance per
panel below ~pi resolve them to near machine precision with 12-16 nodes
per panel.  The spectral cutoff is chosen from the Gaussian regularizer so
the discarded tail is below 1e-12 of the integrand scale.
"""

from __future__ import annotations

import numpy as np

__all__ = ["gauss_panels", "spectral_grid", "spectral_cutoff", "chebyshev_half_nodes"]

_GAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss(n: int):
    if n not in _GAUSS_CACHE:
        _GAUSS_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GAUSS_CACHE[n]


def gauss_panels(a: float, b: float, n_panels: int, nodes_per_panel: int = 12):
    """Composite Gauss-Legendre nodes/weights on [a, b]."""
    gx, gw = _gauss(nodes_per_panel)
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()
    return x, w


def spectral_cutoff(epsilon: float, tail: float = 1e-12, floor: float = 8.0) -> float:
    """Lambda cutoff making the e^(-eps lam^2) tail factor below `tail`."""
    if epsilon <= 0.0:
        raise ValueError("a positive Gaussian regularizer is required for automatic cutoff")
    return max(float(np.sqrt(np.log(1.0 / tail) / epsilon)), floor)


def spectral_grid(
    lam_max: float,
    t_scale: float,
    nodes_per_panel: int = 12,
    phase_per_panel: float = 1.5,
    min_panels: int = 8,
):
    """Full-line grid on [-lam_max, lam_max] resolving phases e^(i lam t).

    Panel width <= phase_per_panel / max(t_scale, 1); symmetric about 0 and
    0 is a panel edge, so grids never contain lambda = 0 exactly.
    """
    width = phase_per_panel / max(abs(t_scale), 1.0)
    n_half = max(int(np.ceil(lam_max / width)), min_panels)
    x, w = gauss_panels(0.0, lam_max, n_half, nodes_per_panel)
    return np.concatenate([-x[::-1], x]), np.concatenate([w[::-1], w])


def chebyshev_half_nodes(n: int):
    """Nodes/weight for int_0^1 f(x) (1-x^2)^(-1/2) dx with f even.

    Gauss-Chebyshev on (-1,1) folded onto (0,1): sum_k (pi/2n) f(x_k) with
    x_k = cos((2k-1)pi/(2n)), k = 1..n (positive nodes only).
    """
    k = np.arange(1, n + 1)
    x = np.cos((2 * k - 1) * np.pi / (4 * n))  # nodes of the 2n-rule in (0,1)
    w = np.full(n, np.pi / (2 * n))
    return x, w
