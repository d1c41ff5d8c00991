import numpy as np
import pytest

from sphmult import transform
from sphmult.space import RankOneSpace


def make_gaussian_pair(space, eps, t_max=10.0, n=520):
    """f with known transform e^{-eps lam^2} (f built by the inverse)."""
    ts = np.concatenate([np.geomspace(3e-3, 0.1, 25),
                         np.linspace(0.105, t_max, n)])
    m = transform.SpectralFunction(lambda lam: np.exp(-0.0 * lam**2))
    f_vals = transform.inverse_spherical_transform_grid(space, m, ts, epsilon=eps)
    return transform.RadialFunction(ts, f_vals.real, decay_hint="gaussian")


def test_point_mass_transform(H2):
    sigma = 0.01
    ts = np.geomspace(1e-4, 6 * sigma, 300)
    vals = np.exp(-(ts / sigma) ** 2 / 2.0)
    from sphmult.space import density_delta
    from scipy.integrate import simpson

    mass = simpson(vals * density_delta(H2, ts), x=ts)
    f = transform.RadialFunction(ts, vals / mass, decay_hint="compact")
    for lam in (0.5, 2.0):
        got = transform.spherical_transform(H2, f, lam)
        assert got == pytest.approx(1.0, abs=5e-3)


def test_transform_weyl_evenness(H2):
    f = make_gaussian_pair(H2, 0.25)
    for lam in (0.7, 2.3):
        a = transform.spherical_transform(H2, f, lam)
        b = transform.spherical_transform(H2, f, -lam)
        assert a == pytest.approx(b, rel=1e-10)


def test_round_trip(H2):
    eps = 0.25
    f = make_gaussian_pair(H2, eps)
    for lam in (0.3, 1.0, 2.0, 4.0):
        got = transform.spherical_transform(H2, f, lam)
        want = np.exp(-eps * lam**2)
        assert abs(got - want) / want < 1e-4, lam


def test_inverse_trivial_and_gate(H2):
    z = transform.SpectralFunction(lambda lam: np.zeros_like(lam))
    assert transform.inverse_spherical_transform(H2, z, 1.0, epsilon=0.1) == 0.0
    odd = transform.SpectralFunction(lambda lam: lam, weyl_symmetric=False)
    with pytest.raises(ValueError):
        transform.inverse_spherical_transform(H2, odd, 1.0, epsilon=0.1)
    even = transform.SpectralFunction(lambda lam: lam**2)
    assert np.isfinite(transform.inverse_spherical_transform(H2, even, 1.0,
                                                             epsilon=0.1))


def test_inverse_refinement_oracle(H2):
    """Dense re-quadrature at ~4x resolution reproduces the profile."""
    m = transform.SpectralFunction(lambda lam: np.ones_like(lam))
    ts = np.linspace(0.05, 6.0, 40)
    a = transform.inverse_spherical_transform_grid(H2, m, ts, epsilon=0.25,
                                                   nodes_per_panel=8)
    b = transform.inverse_spherical_transform_grid(H2, m, ts, epsilon=0.25,
                                                   nodes_per_panel=20)
    assert np.max(np.abs(a - b)) < 1e-8


def test_abel_gaussian_pair(H2):
    eps = 0.25
    f = make_gaussian_pair(H2, eps)
    ab = transform.abel_transform(H2, f)
    want = (4 * np.pi * eps) ** -0.5 * np.exp(-ab.t_grid**2 / (4 * eps))
    assert np.max(np.abs(ab.values - want)) / want.max() < 1e-4


def test_abel_evenness_flag(H2):
    # evenness is enforced internally; a clean input passes
    f = make_gaussian_pair(H2, 0.4)
    ab = transform.abel_transform(H2, f)
    assert np.all(np.isfinite(ab.values))


def test_convolution_identities(H2):
    f = make_gaussian_pair(H2, 0.25)
    k = make_gaussian_pair(H2, 0.5)
    fg = transform.convolve_radial(H2, f, k)
    gf = transform.convolve_radial(H2, k, f, out_grid=f.t_grid)
    assert np.max(np.abs(fg.values - gf.values)) < 1e-8
    # associativity through a third factor
    h = make_gaussian_pair(H2, 0.35)
    lhs = transform.convolve_radial(H2, transform.convolve_radial(H2, f, k), h)
    rhs = transform.convolve_radial(H2, f, transform.convolve_radial(H2, k, h))
    assert np.max(np.abs(lhs.values - rhs.values)) < 1e-6


def test_convolution_approximate_identity(H2):
    f = make_gaussian_pair(H2, 0.5)
    delta_like = make_gaussian_pair(H2, 0.002, t_max=4.0, n=900)
    conv = transform.convolve_radial(H2, f, delta_like)
    i = np.searchsorted(f.t_grid, 1.0)
    assert conv.values[i] == pytest.approx(f.values[i], rel=5e-3)


def test_plancherel_constant_stability(H2):
    pairs = [make_gaussian_pair(H2, e) for e in (0.2, 0.3, 0.45, 0.6, 0.8, 1.0)]
    consts = [transform.plancherel_constant(H2, f) for f in pairs]
    ref = consts[0]
    for c in consts[1:]:
        assert abs(c - ref) / ref < 5e-3
    # the fitted constant matches the baked-in inversion normalization
    assert ref == pytest.approx(transform.inversion_constant(H2), rel=1e-3)


def test_forward_divergence_gate(H2):
    ts = np.linspace(0.1, 8.0, 100)
    f = transform.RadialFunction(ts, np.exp(-0.4 * ts),
                                 decay_hint="exponential:0.4")
    with pytest.raises(ValueError):
        transform.spherical_transform(H2, f, 1.0)


def test_radial_function_validation():
    with pytest.raises(ValueError):
        transform.RadialFunction(np.array([1.0, 0.5]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        transform.RadialFunction(np.array([0.5, 1.0]), np.array([1.0, np.inf]))
