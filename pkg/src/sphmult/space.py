"""Geometric parameters of rank-one symmetric spaces and their products.

The coordinate convention throughout the package: the simple positive root
alpha is normalized by alpha(H0) = 1, |H0| = 1, and every group element
a = exp(t*H0) is represented by the real number t = alpha(log a).  The
half-sum of positive roots (with multiplicity) is then the scalar

    rho = (m_alpha + 2*m_2alpha) / 2,

and a^lambda means exp(lambda*t) for scalar lambda.  The group constant in
the Cartan integration formula is fixed to 1; every quantity asserted by
the test-suite is either normalization independent or derived consistently
from this choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RankOneSpace",
    "ProductSpace",
    "Exponent",
    "PRESETS",
    "parse_space",
    "parse_product",
    "density_delta",
    "weight_w",
    "cartan_measure_weight",
]


@dataclass(frozen=True)
class RankOneSpace:
    """Root multiplicities (m_alpha, m_2alpha) of a rank-one space.

    Everything downstream (dimension n, half-sum rho, density, c-function,
    spherical functions) is a function of these two integers.
    """

    m_alpha: int
    m_2alpha: int = 0

    def __post_init__(self):
        if int(self.m_alpha) != self.m_alpha or int(self.m_2alpha) != self.m_2alpha:
            raise ValueError("multiplicities must be integers")
        if self.m_alpha < 1:
            raise ValueError("m_alpha must be >= 1")
        if self.m_2alpha < 0:
            raise ValueError("m_2alpha must be >= 0")

    @property
    def n(self) -> int:
        """Dimension of the space: m_alpha + m_2alpha + 1."""
        return self.m_alpha + self.m_2alpha + 1

    @property
    def rho(self) -> float:
        """Half-sum of positive roots in the alpha(H0)=1 normalization."""
        return 0.5 * (self.m_alpha + 2 * self.m_2alpha)

    def __repr__(self):
        return f"RankOneSpace(m_alpha={self.m_alpha}, m_2alpha={self.m_2alpha})"


@dataclass(frozen=True)
class ProductSpace:
    """Product of two independent rank-one factors."""

    x1: RankOneSpace
    x2: RankOneSpace

    @property
    def n(self) -> tuple[int, int]:
        return (self.x1.n, self.x2.n)

    @property
    def rho(self) -> tuple[float, float]:
        return (self.x1.rho, self.x2.rho)

    @property
    def factors(self) -> tuple[RankOneSpace, RankOneSpace]:
        return (self.x1, self.x2)

    def swapped(self) -> "ProductSpace":
        return ProductSpace(self.x2, self.x1)


@dataclass(frozen=True)
class Exponent:
    """Lebesgue exponent p in (1, infinity) with delta(p) = |2/p - 1|."""

    p: float

    def __post_init__(self):
        if not (1.0 < self.p < np.inf):
            raise ValueError(f"p must lie in (1, inf), got {self.p}")

    @property
    def delta_p(self) -> float:
        # |2/p - 1| computed as |2-p|/p: one rounding, so delta_p(p) and
        # delta_p(p') agree bitwise for cleanly representable conjugate pairs
        return abs(2.0 - self.p) / self.p

    def conjugate(self) -> "Exponent":
        return Exponent(self.p / (self.p - 1.0))


PRESETS: dict[str, tuple[int, int]] = {
    "H2": (1, 0),
    "H3": (2, 0),
    "CH2": (2, 1),
}


def parse_space(text: str) -> RankOneSpace:
    """Parse a rank-one space spec: a preset name or 'm_alpha,m_2alpha'."""
    key = text.strip()
    if key in PRESETS:
        return RankOneSpace(*PRESETS[key])
    parts = key.split(",")
    if len(parts) != 2:
        raise ValueError(
            f"space {text!r} is neither a preset ({sorted(PRESETS)}) nor 'm_alpha,m_2alpha'"
        )
    return RankOneSpace(int(parts[0]), int(parts[1]))


def parse_product(text: str) -> ProductSpace:
    """Parse a product spec like 'H2xH2' or 'H3xCH2' or '1,0x2,1'."""
    if "x" not in text:
        raise ValueError(f"product space spec {text!r} needs the form '<space>x<space>'")
    left, right = text.split("x", 1)
    return ProductSpace(parse_space(left), parse_space(right))


def _check_positive_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise ValueError("t must be > 0")
    return t


def density_delta(space: RankOneSpace, t):
    """Radial density delta(t) of the Cartan integration formula.

    delta(t) = 2^(-2 rho) (e^t - e^-t)^m_alpha (e^2t - e^-2t)^m_2alpha,
    of order t^(n-1) near 0 and e^(2 rho t) at infinity.
    """
    t = _check_positive_t(t)
    out = (
        2.0 ** (-2.0 * space.rho)
        * (np.exp(t) - np.exp(-t)) ** space.m_alpha
        * (np.exp(2 * t) - np.exp(-2 * t)) ** space.m_2alpha
    )
    return out


def weight_w(space: RankOneSpace, t):
    """Local normalizing weight w(t) = (t^(n-1) / delta(t))^(1/2); w(0+) = 1."""
    t = _check_positive_t(t)
    return np.sqrt(t ** (space.n - 1) / density_delta(space, t))


def cartan_measure_weight(space: RankOneSpace, t):
    """Quadrature weight of radial integrals: alias for density_delta (c_G = 1)."""
    return density_delta(space, t)
