"""Multiplier-condition machinery on the tube: the singular weight Theta_p,
tubes over the Weyl polygon, the Marcinkiewicz / Hormander / single-weight
norms as sampled suprema, built-in multiplier families, and the witness for
the independence of the split-weight and joint-weight conditions.

Norm semantics: every norm here is a supremum sampled on a structured grid
(log-spaced in |Re lambda|, geometric refinement toward the tube boundary)
and is therefore a *lower bound* of the true supremum.  A refinement sweep
flags the value +inf when it keeps growing (factor > 10 across two
successive refinements).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .reports import EstimateReport, loglog_fit
from .space import Exponent, ProductSpace, RankOneSpace

__all__ = [
    "Tube",
    "theta_p",
    "dp_ionescu",
    "MultiplierSpec",
    "builtin_multiplier",
    "NormReport",
    "marc_norm",
    "marc_infty_norm",
    "marc_frastar_norm",
    "ionescu_norm",
    "single_theta_norm",
    "horm_norm",
    "horm_infty_norm",
    "independence_witness",
    "derivative",
    "derivative_fd",
    "derivative_table_batch",
]


# ---------------------------------------------------------------------------
# tube geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tube:
    """The strip/rectangle of forced analyticity for L^p multipliers."""

    space: RankOneSpace | ProductSpace
    p: Exponent

    @property
    def half_widths(self) -> tuple[float, ...]:
        d = self.p.delta_p
        if isinstance(self.space, ProductSpace):
            return (d * self.space.x1.rho, d * self.space.x2.rho)
        return (d * self.space.rho,)

    def contains(self, *lams, closed: bool = False) -> bool:
        hw = self.half_widths
        if len(lams) != len(hw):
            raise ValueError(f"expected {len(hw)} spectral coordinates")
        for lam, w in zip(lams, hw):
            y = abs(np.imag(lam))
            if closed:
                if y > w + 1e-15:
                    return False
            elif y >= w:
                return False
        return True


def theta_p(space: RankOneSpace, p: Exponent | float, zeta) -> np.ndarray:
    """Singular weight Theta_p(zeta) = min(|zeta - i d(p) rho|, |zeta + i d(p) rho|)."""
    if not isinstance(p, Exponent):
        p = Exponent(p)
    zeta = np.asarray(zeta, dtype=complex)
    s = p.delta_p * space.rho
    return np.minimum(np.abs(zeta - 1j * s), np.abs(zeta + 1j * s))


def dp_ionescu(product: ProductSpace, p: Exponent | float, zetas) -> float:
    """Joint weight d_p: sqrt((Re z1)^2 + (Re z2)^2 + dist(Im, W_p^c)^2).

    dist is the Euclidean distance of (Im z1, Im z2) to the complement of
    the open rectangle W_p; points outside the closed tube are rejected.
    """
    if not isinstance(p, Exponent):
        p = Exponent(p)
    z1, z2 = complex(zetas[0]), complex(zetas[1])
    w1 = p.delta_p * product.x1.rho
    w2 = p.delta_p * product.x2.rho
    y1, y2 = z1.imag, z2.imag
    if abs(y1) > w1 + 1e-12 or abs(y2) > w2 + 1e-12:
        raise ValueError("point outside the closed tube")
    dist = max(min(w1 - abs(y1), w2 - abs(y2)), 0.0)
    return float(np.sqrt(z1.real**2 + z2.real**2 + dist**2))


# ---------------------------------------------------------------------------
# multipliers and their derivatives
# ---------------------------------------------------------------------------


@dataclass
class MultiplierSpec:
    """A Weyl-symmetric multiplier with declared analyticity and derivative access.

    evaluator acts on broadcastable complex arrays: one argument for
    rank-one spaces, two for products.  analytic_strip is the per-factor
    margin (in Im lambda) of declared holomorphy; 0 means values are only
    trusted on the real line.  When `analytic_derivs` is absent, derivative
    access is through Cauchy circles (holomorphic case) or Richardson
    central differences.
    """

    evaluator: Callable
    nvars: int = 2
    weyl_symmetric: bool = True
    analytic_strip: tuple[float, ...] | float = 0.0
    label: str = ""
    params: dict = field(default_factory=dict)
    analytic_derivs: Callable | None = None
    separable: tuple[Callable, Callable] | None = None

    def __call__(self, *lams):
        arrs = [np.asarray(l, dtype=complex) for l in lams]
        if len(arrs) != self.nvars:
            raise ValueError(f"multiplier takes {self.nvars} spectral arguments")
        return self.evaluator(*arrs)

    def strip(self, j: int) -> float:
        if np.isscalar(self.analytic_strip):
            return float(self.analytic_strip)
        return float(self.analytic_strip[j])

    def check_weyl(self, tol: float = 1e-10) -> bool:
        probe = np.array([0.41, 1.3, 3.7])
        if self.nvars == 1:
            a = self(probe)
            b = self(-probe)
            return bool(np.max(np.abs(a - b)) <= tol * max(1.0, float(np.max(np.abs(a)))))
        a = self(probe, probe[::-1])
        for s1, s2 in [(-1, 1), (1, -1), (-1, -1)]:
            b = self(s1 * probe, s2 * probe[::-1])
            if np.max(np.abs(a - b)) > tol * max(1.0, float(np.max(np.abs(a)))):
                return False
        return True


_RADIUS_CAP = 2.0


def _cauchy_radii(m: MultiplierSpec, point, tube_margin) -> list[float]:
    """Safe polydisc radii around `point`: stay inside declared analyticity."""
    radii = []
    for j, z in enumerate(point):
        margin = m.strip(j) - abs(np.imag(z))
        if tube_margin is not None:
            margin = min(margin, tube_margin[j])
        radii.append(float(np.clip(0.5 * margin, 1e-8, _RADIUS_CAP)))
    return radii


def derivative(m: MultiplierSpec, point, order, radii=None, n_circle: int = 32):
    """partial^order m at `point` by nested Cauchy circles (holomorphic access).

    order is an int (rank one) or a pair.  radii default to half the
    declared analyticity margin (capped).  Exact up to aliasing (geometric
    in n_circle) for holomorphic evaluators.
    """
    if m.nvars == 1:
        point = (point,)
        order = (order,)
    if radii is None:
        radii = _cauchy_radii(m, point, None)
    ang = np.exp(2j * np.pi * np.arange(n_circle) / n_circle)
    if m.nvars == 1:
        z = point[0] + radii[0] * ang
        vals = m(z)
        fc = vals @ ang ** (-order[0]) / n_circle
        return _fc_scale(fc, order[0], radii[0])
    z1 = point[0] + radii[0] * ang
    z2 = point[1] + radii[1] * ang
    vals = m(z1[:, None], z2[None, :])
    fc = np.einsum("ab,a,b->", vals, ang ** (-order[0]), ang ** (-order[1])) / n_circle**2
    return _fc_scale(_fc_scale(fc, order[0], radii[0]), order[1], radii[1])


def derivative_table_batch(m: MultiplierSpec, pts, radii, N, n_circle: int = 32,
                           chunk: int = 2048):
    """All derivatives d^J m, J <= N, at many points from one polydisc FFT each.

    pts: (npts, nvars) complex; radii: (npts, nvars) positive.
    Returns (npts, N1+1[, N2+1]) complex array of derivative values.
    """
    import math

    pts = np.asarray(pts, dtype=complex)
    radii = np.asarray(radii, dtype=float)
    npts = pts.shape[0]
    ang = np.exp(2j * np.pi * np.arange(n_circle) / n_circle)
    if m.nvars == 1:
        N1 = int(np.atleast_1d(N)[0])
        out = np.empty((npts, N1 + 1), dtype=complex)
        fact = np.array([math.factorial(k) for k in range(N1 + 1)])
        for s in range(0, npts, chunk):
            sl = slice(s, min(s + chunk, npts))
            z = pts[sl, 0:1] + radii[sl, 0:1] * ang[None, :]
            vals = m(z)
            fc = np.fft.fft(vals, axis=1) / n_circle  # coefficient of ang^{-k}
            ks = np.arange(N1 + 1)
            out[sl] = fc[:, : N1 + 1] * fact[None, :] / radii[sl, 0:1] ** ks[None, :]
        return out
    N1, N2 = int(N[0]), int(N[1])
    out = np.empty((npts, N1 + 1, N2 + 1), dtype=complex)
    f1 = np.array([math.factorial(k) for k in range(N1 + 1)])
    f2 = np.array([math.factorial(k) for k in range(N2 + 1)])
    for s in range(0, npts, chunk):
        sl = slice(s, min(s + chunk, npts))
        nblk = sl.stop - sl.start
        z1 = pts[sl, 0, None, None] + radii[sl, 0, None, None] * ang[None, :, None]
        z2 = pts[sl, 1, None, None] + radii[sl, 1, None, None] * ang[None, None, :]
        vals = m(z1, z2)
        fc = np.fft.fft2(vals, axes=(1, 2)) / n_circle**2
        blk = fc[:, : N1 + 1, : N2 + 1].copy()
        blk *= f1[None, :, None] * f2[None, None, :]
        blk /= radii[sl, 0, None, None] ** np.arange(N1 + 1)[None, :, None]
        blk /= radii[sl, 1, None, None] ** np.arange(N2 + 1)[None, None, :]
        out[sl] = blk
    return out


def _fc_scale(fc, k, r):
    import math

    return fc * math.factorial(k) / r**k


def derivative_fd(m: MultiplierSpec, point, order, scale=None):
    """Richardson-extrapolated central differences (real directions).

    Fallback derivative access for non-holomorphic evaluators; also the
    cross-check for the Cauchy route.  Steps grow with the order so the
    1/h^k roundoff amplification stays below the truncation error.
    """
    if m.nvars == 1:
        point = (point,)
        order = (order,)
    if scale is None:
        scale = [max(1.0, abs(z)) * (0.02 + 0.04 * k)
                 for z, k in zip(point, np.atleast_1d(order))]

    def d1(fun, z0, k, h):
        if k == 0:
            return fun(z0)
        # central difference of order k with 2nd-order accuracy
        from math import comb

        total = 0.0j
        for i in range(k + 1):
            total += (-1) ** i * comb(k, i) * fun(z0 + (k / 2 - i) * h)
        return total / h**k

    def nested(idx, pt):
        if idx == len(point):
            return m(*pt)
        k = order[idx]
        h = scale[idx]

        def fun(z):
            return nested(idx + 1, pt[:idx] + (z,) + pt[idx + 1:])

        if k == 0:
            return fun(pt[idx])
        coarse = d1(fun, pt[idx], k, h)
        fine = d1(fun, pt[idx], k, h / 2)
        return (4.0 * fine - coarse) / 3.0

    return nested(0, tuple(point))


# ---------------------------------------------------------------------------
# built-in multiplier families
# ---------------------------------------------------------------------------


def builtin_multiplier(space, kind: str, params=()) -> MultiplierSpec:
    """Built-in Weyl-symmetric families.

    Product-space kinds (space: ProductSpace):
      - imaginary_powers(t, u, v):
            (lam1^2+rho1^2)^{it} (lam1^2+lam2^2+rho1^2+rho2^2)^{iu} (lam2^2+rho2^2)^{iv}
      - gaussian(eps):  e^{-eps (lam1^2+lam2^2)}
      - constant(c)
      - euclid_marc(u, v):  (lam1^2)^{iu} (lam2^2)^{iv}  (real-line family)
    Rank-one kinds (space: RankOneSpace): imaginary_power(u), gaussian(eps),
    constant(c), boundary_power(u, s): ((s rho)^2+lam^2)^{iu} singular at
    +-i s rho.
    """
    params = tuple(float(x) for x in np.atleast_1d(params)) if params != () else ()
    if isinstance(space, ProductSpace):
        return _builtin_product(space, kind, params)
    return _builtin_rankone(space, kind, params)


def _principal_power(base, expo):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.exp(expo * np.log(base))


def _builtin_product(space: ProductSpace, kind, params) -> MultiplierSpec:
    r1, r2 = space.rho

    if kind == "constant":
        cval = params[0] if params else 1.0
        return MultiplierSpec(lambda l1, l2: cval * np.ones(np.broadcast(l1, l2).shape,
                                                            dtype=complex),
                              nvars=2, analytic_strip=(np.inf, np.inf),
                              label="constant", params={"c": cval},
                              separable=(lambda l: cval * np.ones_like(l, dtype=complex),
                                         lambda l: np.ones_like(l, dtype=complex)))
    if kind == "gaussian":
        eps = params[0]

        def ev(l1, l2):
            return np.exp(-eps * (l1**2 + l2**2))

        return MultiplierSpec(ev, nvars=2, analytic_strip=(np.inf, np.inf),
                              label="gaussian", params={"eps": eps},
                              separable=(lambda l: np.exp(-eps * l**2),
                                         lambda l: np.exp(-eps * l**2)))
    if kind == "imaginary_powers":
        t, u, v = params

        def ev(l1, l2):
            f1 = _principal_power(l1**2 + r1**2, 1j * t)
            f12 = _principal_power(l1**2 + l2**2 + r1**2 + r2**2, 1j * u)
            f2 = _principal_power(l2**2 + r2**2, 1j * v)
            return f1 * f12 * f2

        sep = None
        if u == 0.0:
            sep = (lambda l: _principal_power(l**2 + r1**2, 1j * t),
                   lambda l: _principal_power(l**2 + r2**2, 1j * v))
        spec = MultiplierSpec(ev, nvars=2, analytic_strip=(min(r1, r2) * 0.999,) * 2,
                              label="imaginary_powers", params={"t": t, "u": u, "v": v},
                              separable=sep)
        _branch_cut_sweep(spec)
        return spec
    if kind == "euclid_marc":
        u, v = params

        def ev(l1, l2):
            return _principal_power(l1**2, 1j * u) * _principal_power(l2**2, 1j * v)

        return MultiplierSpec(ev, nvars=2, analytic_strip=0.0,
                              label="euclid_marc", params={"u": u, "v": v},
                              separable=(lambda l: _principal_power(l**2, 1j * u),
                                         lambda l: _principal_power(l**2, 1j * v)))
    raise ValueError(f"unknown product multiplier kind {kind!r}")


def _builtin_rankone(space: RankOneSpace, kind, params) -> MultiplierSpec:
    rho = space.rho
    if kind == "constant":
        cval = params[0] if params else 1.0
        return MultiplierSpec(lambda l: cval * np.ones_like(l, dtype=complex), nvars=1,
                              analytic_strip=np.inf, label="constant", params={"c": cval})
    if kind == "gaussian":
        eps = params[0]
        return MultiplierSpec(lambda l: np.exp(-eps * l**2), nvars=1,
                              analytic_strip=np.inf, label="gaussian", params={"eps": eps})
    if kind == "imaginary_power":
        u = params[0]
        spec = MultiplierSpec(lambda l: _principal_power(l**2 + rho**2, 1j * u), nvars=1,
                              analytic_strip=rho * 0.999, label="imaginary_power",
                              params={"u": u})
        _branch_cut_sweep(spec)
        return spec
    if kind == "boundary_power":
        u, s = params if len(params) == 2 else (params[0], 0.5)
        w = s * rho
        return MultiplierSpec(lambda l: _principal_power(l**2 + w**2, 1j * u), nvars=1,
                              analytic_strip=w * 0.999, label="boundary_power",
                              params={"u": u, "s": s})
    raise ValueError(f"unknown rank-one multiplier kind {kind!r}")


def _branch_cut_sweep(m: MultiplierSpec, n: int = 160):
    """Reject evaluators with branch-cut jumps inside the declared strips."""
    for j in range(m.nvars):
        s = m.strip(j)
        if not np.isfinite(s) or s <= 0:
            continue
        ys = np.linspace(-0.98 * s, 0.98 * s, n)
        for x in (0.0, 0.31, 2.7):
            line = x + 1j * ys
            args = [np.full(n, 0.57, dtype=complex)] * m.nvars
            args[j] = line
            vals = m(*args)
            jumps = np.abs(np.diff(vals))
            med = np.median(jumps) + 1e-300
            if np.max(jumps) > 50 * med + 1e-8:
                raise ValueError(
                    f"branch-cut crossing detected inside declared strip (factor {j})"
                )


# ---------------------------------------------------------------------------
# sampled norms
# ---------------------------------------------------------------------------


@dataclass
class NormReport:
    condition: str
    order: tuple
    value: float  # +inf flagged as np.inf
    argmax_point: tuple
    argmax_order: tuple
    refinements: list = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return np.isfinite(self.value)

    def to_dict(self):
        def c(z):
            return {"re": float(np.real(z)), "im": float(np.imag(z))}

        return {
            "condition": self.condition,
            "order": list(self.order),
            "value": self.value if np.isfinite(self.value) else "inf",
            "argmax_point": [c(z) for z in self.argmax_point],
            "argmax_order": list(self.argmax_order),
            "refinements": self.refinements,
        }


def _re_axis(lam_max: float, n: int) -> np.ndarray:
    pos = np.geomspace(1e-3, lam_max, n)
    return np.concatenate([[0.0], pos])


def _im_axis(half_width: float, n: int, closest: float) -> np.ndarray:
    if half_width == 0.0 or not np.isfinite(half_width):
        return np.array([0.0])
    # linear band plus geometric refinement toward both boundary points
    lin = np.linspace(-0.85 * half_width, 0.85 * half_width, n)
    approach = half_width - np.geomspace(closest, 0.15 * half_width, n // 2)
    return np.unique(np.concatenate([lin, approach, -approach]))


def _orders_upto(N) -> list[tuple]:
    if np.isscalar(N):
        return [(j,) for j in range(int(N) + 1)]
    return list(itertools.product(range(int(N[0]) + 1), range(int(N[1]) + 1)))


def _sampled_sup(m: MultiplierSpec, pts: np.ndarray, weight_fn, N,
                 deriv_radii_fn) -> tuple[float, tuple, tuple]:
    """Sup over pts of max_{J<=N} weight(pt, J) |d^J m(pt)|, vectorized."""
    pts = np.asarray(pts, dtype=complex)
    radii = deriv_radii_fn(pts)
    if radii is not None:
        table = derivative_table_batch(m, pts, radii, N)
    else:
        orders = _orders_upto(N)
        shape = (pts.shape[0],) + tuple(int(np.atleast_1d(N)[k]) + 1
                                        for k in range(m.nvars))
        table = np.empty(shape, dtype=complex)
        for i in range(pts.shape[0]):
            pt = tuple(pts[i])
            for J in orders:
                arg = pt if m.nvars > 1 else pt[0]
                o = J if m.nvars > 1 else J[0]
                idx = (i,) + tuple(J)
                table[idx] = (m(*pt) if all(j == 0 for j in J)
                              else derivative_fd(m, arg, o))
    best, best_pt, best_J = -np.inf, None, None
    for J in _orders_upto(N):
        idx = (slice(None),) + tuple(J)
        vals = weight_fn(pts, J) * np.abs(table[idx])
        vals = np.where(np.isfinite(vals), vals, -np.inf)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_pt, best_J = float(vals[i]), tuple(pts[i]), J
    return best, best_pt, best_J


def _polish(m, weight_fn, J, pt, deriv_radii_fn, im_bounds, iters: int = 3):
    """Local coordinate search around a sampled argmax (smooth sups only)."""
    pt = np.array(pt, dtype=complex)
    best = -np.inf
    for it in range(iters):
        for j in range(pt.size):
            for part in (0, 1):
                if part == 1 and im_bounds is not None and im_bounds[j] == 0.0:
                    continue
                base = pt[j].real if part == 0 else pt[j].imag
                span = 0.3 * (1.0 + abs(base)) * 4.0 ** (-it)
                cands = base + np.linspace(-span, span, 9)
                if part == 1 and im_bounds is not None:
                    cands = np.clip(cands, -0.999 * im_bounds[j], 0.999 * im_bounds[j])
                trial = np.repeat(pt[None, :], cands.size, axis=0)
                trial[:, j] = (cands + 1j * pt[j].imag if part == 0
                               else pt[j].real + 1j * cands)
                radii = deriv_radii_fn(trial)
                if radii is None:
                    vals = np.array([
                        abs(derivative_fd(m, tuple(t) if m.nvars > 1 else t[0],
                                          J if m.nvars > 1 else J[0]))
                        if any(J) else abs(complex(m(*tuple(t))))
                        for t in trial])
                else:
                    tab = derivative_table_batch(m, trial, radii, J)
                    idx = (slice(None),) + tuple(J)
                    vals = np.abs(tab[idx])
                vals = weight_fn(trial, J) * vals
                vals = np.where(np.isfinite(vals), vals, -np.inf)
                i = int(np.argmax(vals))
                if vals[i] > best:
                    best = float(vals[i])
                    pt = trial[i]
    return best, tuple(pt)


def _norm_with_refinement(m, weight_fn, N, grid_fn, deriv_radii_fn,
                          condition, order, levels: int = 3,
                          im_bounds=None) -> NormReport:
    history = []
    results = []
    for lvl in range(levels):
        pts = grid_fn(lvl)
        sup, pt, J = _sampled_sup(m, pts, weight_fn, N, deriv_radii_fn)
        if pt is not None:
            polished, ppt = _polish(m, weight_fn, J, pt, deriv_radii_fn, im_bounds)
            if polished > sup:
                sup, pt = polished, ppt
        history.append(sup)
        results.append((sup, pt, J))
    value, pt, J = results[-1]
    if len(history) >= 3 and history[-1] > 10.0 * history[-3] and history[-1] > 10.0 * history[0]:
        value = np.inf
    pt = tuple(complex(z) for z in (pt if pt is not None else ()))
    return NormReport(condition=condition, order=tuple(np.atleast_1d(order).tolist()),
                      value=value, argmax_point=pt,
                      argmax_order=tuple(J) if J else (), refinements=history)


def _tube_grid_product(space: ProductSpace, p: Exponent, lvl: int):
    hw1 = p.delta_p * space.x1.rho
    hw2 = p.delta_p * space.x2.rho
    n = 6 + 3 * lvl
    lam_max = 30.0 * 2.0**lvl
    closest = 1e-3 * 8.0 ** (-lvl)
    xs = _re_axis(lam_max, n)
    y1 = _im_axis(hw1, n, closest * hw1)
    y2 = _im_axis(hw2, n, closest * hw2)
    z1 = (xs[:, None] + 1j * y1[None, :]).ravel()
    z2 = (xs[:, None] + 1j * y2[None, :]).ravel()
    pts = np.stack(
        [np.repeat(z1, z2.size), np.tile(z2, z1.size)], axis=1
    )
    return pts


def _tube_grid_rankone(space: RankOneSpace, p: Exponent, lvl: int):
    hw = p.delta_p * space.rho
    n = 14 + 8 * lvl
    lam_max = 30.0 * 2.0**lvl
    closest = 1e-3 * 8.0 ** (-lvl)
    xs = _re_axis(lam_max, n)
    ys = _im_axis(hw, n, closest * hw)
    return (xs[:, None] + 1j * ys[None, :]).reshape(-1, 1)


def _line_grid(nvars: int, lvl: int):
    n = 24 * 2**lvl
    lam_max = 60.0
    xs = _re_axis(lam_max, n).astype(complex)
    if nvars == 1:
        return xs.reshape(-1, 1)
    return np.stack([np.repeat(xs, xs.size), np.tile(xs, xs.size)], axis=1)


def _radii_fn_tube(m, half_widths, on_line=False):
    """Per-point polydisc radii (array), or None to force the FD fallback.

    Radii are set by the multiplier's declared analyticity margin only; the
    tube boundary is where the *weights* degenerate, not where m stops
    being differentiable, so circles may extend past it.
    """

    def fn(pts):
        strips = [m.strip(j) for j in range(m.nvars)]
        if any(s <= 0 for s in strips):
            return None
        radii = np.empty((pts.shape[0], m.nvars))
        for j in range(m.nvars):
            margin = strips[j] - np.abs(np.imag(pts[:, j]))
            if np.any(margin <= 0):
                return None
            radii[:, j] = np.clip(0.45 * margin, 1e-8, _RADIUS_CAP)
        return radii

    return fn


def _dp_vec(space: ProductSpace, p: Exponent, pts: np.ndarray) -> np.ndarray:
    w1 = p.delta_p * space.x1.rho
    w2 = p.delta_p * space.x2.rho
    y1 = np.abs(np.imag(pts[:, 0]))
    y2 = np.abs(np.imag(pts[:, 1]))
    dist = np.maximum(np.minimum(w1 - y1, w2 - y2), 0.0)
    return np.sqrt(np.real(pts[:, 0]) ** 2 + np.real(pts[:, 1]) ** 2 + dist**2)


def _require_tube(space, p, m) -> tuple:
    if not m.check_weyl():
        raise ValueError("multiplier violates Weyl symmetry")
    if isinstance(space, ProductSpace):
        hw = (p.delta_p * space.x1.rho, p.delta_p * space.x2.rho)
    else:
        hw = (p.delta_p * space.rho,)
    for j, w in enumerate(hw):
        if m.strip(j) < w:
            raise ValueError("multiplier not declared holomorphic on the tube")
    return hw


def marc_norm(space: ProductSpace, p: Exponent | float, m: MultiplierSpec, N) -> NormReport:
    """Split-weight condition on the tube: sup Theta1^J1 Theta2^J2 |d^J m|, J <= N."""
    if not isinstance(p, Exponent):
        p = Exponent(p)
    hw = _require_tube(space, p, m)

    def weight(pts, J):
        return (theta_p(space.x1, p, pts[:, 0]) ** J[0]
                * theta_p(space.x2, p, pts[:, 1]) ** J[1])

    return _norm_with_refinement(
        m, weight, N, lambda lvl: _tube_grid_product(space, p, lvl),
        _radii_fn_tube(m, hw), "marc", N, im_bounds=hw)


def ionescu_norm(space: ProductSpace, p: Exponent | float, m: MultiplierSpec, N) -> NormReport:
    """Joint-weight condition on the tube: sup d_p^(J1+J2) |d^J m|, J <= N."""
    if not isinstance(p, Exponent):
        p = Exponent(p)
    hw = _require_tube(space, p, m)

    def weight(pts, J):
        return _dp_vec(space, p, pts) ** (J[0] + J[1])

    return _norm_with_refinement(
        m, weight, N, lambda lvl: _tube_grid_product(space, p, lvl),
        _radii_fn_tube(m, hw), "ionescu", N, im_bounds=hw)


def single_theta_norm(space: ProductSpace, p: Exponent | float, m: MultiplierSpec,
                      N) -> NormReport:
    """Single-parameter weight Theta1^(J1+J2) |d^J m| on the tube.

    A product version of the rank-one tube condition; it fails (+inf flag)
    for genuinely two-parameter multipliers and exists here to witness that
    failure.
    """
    if not isinstance(p, Exponent):
        p = Exponent(p)
    hw = _require_tube(space, p, m)

    def weight(pts, J):
        return theta_p(space.x1, p, pts[:, 0]) ** (J[0] + J[1])

    return _norm_with_refinement(
        m, weight, N, lambda lvl: _tube_grid_product(space, p, lvl),
        _radii_fn_tube(m, hw), "single_theta", N, im_bounds=hw)


def marc_infty_norm(space: ProductSpace, p: Exponent | float, m: MultiplierSpec, N) -> NormReport:
    """At-infinity condition on the real plane: sup (1+|l1|)^J1 (1+|l2|)^J2 |d^J m|."""

    def weight(pts, J):
        return (1.0 + np.abs(pts[:, 0])) ** J[0] * (1.0 + np.abs(pts[:, 1])) ** J[1]

    return _norm_with_refinement(
        m, weight, N, lambda lvl: _line_grid(2, lvl),
        _radii_fn_tube(m, None, on_line=True), "marc_infty", N, im_bounds=(0.0, 0.0))


def marc_frastar_norm(space: ProductSpace, p: Exponent | float, m: MultiplierSpec,
                      N) -> NormReport:
    """Homogeneous condition on the real plane: sup |l1|^J1 |l2|^J2 |d^J m|."""

    def weight(pts, J):
        return np.abs(pts[:, 0]) ** J[0] * np.abs(pts[:, 1]) ** J[1]

    return _norm_with_refinement(
        m, weight, N, lambda lvl: _line_grid(2, lvl),
        _radii_fn_tube(m, None, on_line=True), "marc_frastar", N, im_bounds=(0.0, 0.0))


def horm_norm(space: RankOneSpace, p: Exponent | float, m: MultiplierSpec, N: int) -> NormReport:
    """Rank-one tube condition: sup Theta_p^j |d^j m|, j <= N."""
    if not isinstance(p, Exponent):
        p = Exponent(p)
    hw = _require_tube(space, p, m)

    def weight(pts, J):
        return theta_p(space, p, pts[:, 0]) ** J[0]

    return _norm_with_refinement(
        m, weight, N, lambda lvl: _tube_grid_rankone(space, p, lvl),
        _radii_fn_tube(m, hw), "horm", N, im_bounds=hw)


def horm_infty_norm(space: RankOneSpace, p: Exponent | float, m: MultiplierSpec,
                    N: int) -> NormReport:
    """Rank-one at-infinity condition on the line: sup (1+|l|)^j |d^j m|."""

    def weight(pts, J):
        return (1.0 + np.abs(pts[:, 0])) ** J[0]

    return _norm_with_refinement(
        m, weight, N, lambda lvl: _line_grid(1, lvl),
        _radii_fn_tube(m, None, on_line=True), "horm_infty", N, im_bounds=(0.0,))


# ---------------------------------------------------------------------------
# independence of the split-weight and joint-weight conditions
# ---------------------------------------------------------------------------


def independence_witness(space: ProductSpace, p: Exponent | float, J=(1, 1),
                         gaps=None) -> dict:
    """Two regimes near the imaginary rectangle showing neither condition
    dominates the other.

    Regime A (points on 0 + iW_p, the gap at factor 1 smallest): the ratio
    split-weight / joint-weight grows like gap^(-J2).
    Regime B (Re l2 = gap^(1/4), |Im l2 - w2| = gap^(1/2)): the split weight
    scales like gap^(J1 + J2/4) while the joint weight scales like
    gap^((J1+J2)/4).
    """
    if not isinstance(p, Exponent):
        p = Exponent(p)
    if not (1.0 < p.p < 2.0):
        raise ValueError("independence regimes are set up for p in (1, 2)")
    if gaps is None:
        gaps = np.geomspace(1e-1, 1e-4, 13)
    gaps = np.asarray(gaps, dtype=float)
    w1 = p.delta_p * space.x1.rho
    w2 = p.delta_p * space.x2.rho
    J1, J2 = J

    # regime A
    ratio = np.empty_like(gaps)
    for i, g in enumerate(gaps):
        z1 = 1j * (w1 - g)
        z2 = 1j * (w2 / 2.0)
        split = (theta_p(space.x1, p, z1) ** J1) * (theta_p(space.x2, p, z2) ** J2)
        joint = dp_ionescu(space, p, (z1, z2)) ** (J1 + J2)
        ratio[i] = split / joint
    slope_A, _, scatter_A = loglog_fit(gaps, ratio)

    # regime B
    split_B = np.empty_like(gaps)
    joint_B = np.empty_like(gaps)
    for i, g in enumerate(gaps):
        z1 = 1j * (w1 - g)
        z2 = g**0.25 + 1j * (w2 - g**0.5)
        split_B[i] = (theta_p(space.x1, p, z1) ** J1) * (theta_p(space.x2, p, z2) ** J2)
        joint_B[i] = dp_ionescu(space, p, (z1, z2)) ** (J1 + J2)
    slope_split, _, sc_split = loglog_fit(gaps, split_B)
    slope_joint, _, sc_joint = loglog_fit(gaps, joint_B)

    reports = [
        EstimateReport(
            name="independence_regime_A",
            claimed={"ratio_slope": -float(J2)},
            fitted={"ratio_slope": slope_A, "scatter": scatter_A},
            passed=bool(abs(slope_A + J2) <= 0.05),
            details={"J": list(J), "p": p.p},
        ),
        EstimateReport(
            name="independence_regime_B",
            claimed={"split_exponent": J1 + J2 / 4.0, "joint_exponent": (J1 + J2) / 4.0},
            fitted={"split_exponent": slope_split, "joint_exponent": slope_joint,
                    "scatter_split": sc_split, "scatter_joint": sc_joint},
            passed=bool(abs(slope_split - (J1 + J2 / 4.0)) <= 0.05
                        and abs(slope_joint - (J1 + J2) / 4.0) <= 0.05),
            details={"J": list(J), "p": p.p},
        ),
    ]
    return {"gaps": gaps, "ratio_A": ratio, "split_B": split_B, "joint_B": joint_B,
            "reports": reports}
