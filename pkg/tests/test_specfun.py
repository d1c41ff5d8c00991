import numpy as np
import pytest

from sphmult import specfun
from sphmult.reports import loglog_fit


# ---------------------------------------------------------------------------
# normalized Bessel kernel
# ---------------------------------------------------------------------------


def test_bessel_normalization():
    for mu in (-0.5, 0.0, 0.7, 1.0, 2.5):
        assert specfun.bessel_cJ(mu, 0.0) == pytest.approx(1.0, abs=1e-14)


def test_bessel_cosine_case():
    assert specfun.bessel_cJ(-0.5, 2.0) == pytest.approx(np.cos(2.0), abs=1e-13)


def test_bessel_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    for mu in (0.0, 0.5, 1.0, 2.0):
        for z in (0.3, 3.0, 9.0, 20.0, 2.0 + 0.4j):
            want = complex(2**mu * mpmath.gamma(mu + 1)
                           * mpmath.besselj(mu, z) / mpmath.mpf(1) / complex(z) ** mu)
            got = specfun.bessel_cJ(mu, z)
            assert got == pytest.approx(want, rel=1e-10), (mu, z)


def test_bessel_switchover_overlap():
    for mu in (0.0, 0.5, 1.0, 1.7):
        for z in (11.2, 11.9, 12.1, 13.0):
            s = specfun._cJ_series(mu, np.array([z + 0j]))[0]
            a = specfun._cJ_asymptotic(mu, np.array([z + 0j]))[0]
            assert abs(s - a) < 1e-10


def test_bessel_even():
    z = 3.7 + 0.2j
    assert specfun.bessel_cJ(1.2, z) == pytest.approx(specfun.bessel_cJ(1.2, -z),
                                                      rel=1e-12)


def test_bessel_derivative_reduction(H2):
    """(1/lam) d_lam cJ_mu(lam t) = -t^2 cJ_{mu+1}(lam t) / (2(mu+1))."""
    mu, t, lam = 0.0, 0.8, 2.3
    h = 1e-5
    lhs = (specfun.bessel_cJ(mu, (lam + h) * t)
           - specfun.bessel_cJ(mu, (lam - h) * t)) / (2 * h) / lam
    rhs = -(t**2) * specfun.bessel_cJ(mu + 1.0, lam * t) / (2 * (mu + 1.0))
    assert lhs == pytest.approx(rhs, rel=1e-7)


def test_bessel_rejects_small_order():
    with pytest.raises(ValueError):
        specfun.bessel_cJ(-0.75, 1.0)


# ---------------------------------------------------------------------------
# c-function and Plancherel density
# ---------------------------------------------------------------------------


def test_c_fit_vs_closed_form(H2, H3, CH2):
    for sp in (H2, H3, CH2):
        for lam in (0.7, 1.0, 5.0):
            fit = specfun.hc_asymptotic_fit(sp, lam)
            closed = specfun.c_function(sp, lam)
            rel = abs(fit.value - closed.value) / abs(closed.value)
            assert rel < 1e-9, (sp, lam, rel)


def test_c_normalization_at_minus_irho(H2, H3, CH2):
    # c(-i rho) = 1 is the phi_{+-i rho} == 1 normalization
    for sp in (H2, H3, CH2):
        v = specfun.c_value(sp, np.array([-1j * sp.rho]))[0]
        assert v == pytest.approx(1.0, rel=1e-12)


def test_c_pole_reported(H2):
    with pytest.raises(specfun.CFunctionPole):
        specfun.c_function(H2, 0.0)


def test_plancherel_examples(H2, H3):
    assert specfun.plancherel_density(H2, 0.0) == 0.0
    # exponent-2 scaling for the 3-dimensional space
    d5 = specfun.plancherel_density(H3, 5.0)
    d10 = specfun.plancherel_density(H3, 10.0)
    assert d10 / d5 == pytest.approx(4.0, rel=0.05)
    # evenness
    lam = np.array([0.3, 1.7, 9.0])
    assert np.allclose(specfun.plancherel_density(H2, lam),
                       specfun.plancherel_density(H2, -lam))


@pytest.mark.parametrize("m,expo", [((1, 0), 1.0), ((2, 0), 2.0), ((2, 1), 3.0)])
def test_plancherel_growth_exponent(m, expo):
    from sphmult.space import RankOneSpace

    sp = RankOneSpace(*m)
    lams = np.geomspace(30.0, 300.0, 12)
    slope, _, _ = loglog_fit(lams, specfun.plancherel_density(sp, lams))
    assert slope == pytest.approx(expo, abs=0.1)


def test_c_modulus_even(H2, CH2):
    for sp in (H2, CH2):
        for lam in (0.4, 2.2, 11.0):
            a = abs(specfun.c_value(sp, np.array([lam]))[0])
            b = abs(specfun.c_value(sp, np.array([-lam]))[0])
            assert a == pytest.approx(b, rel=1e-12)


def test_cinv_zero_at_origin(H2):
    assert abs(specfun.cinv_check(H2, np.array([0.0 + 0j]))[0]) < 1e-12


# ---------------------------------------------------------------------------
# series coefficients
# ---------------------------------------------------------------------------


def test_gamma_normalization(H2, H3):
    for sp in (H2, H3):
        g = specfun.gamma_ell(sp, 1.3 + 0.1j, 5)
        assert g.values[0] == 1.0


def test_gamma1_closed_form_H2(H2):
    # coefficient matching in the radial equation gives
    # Gamma_1 = (1/2 - i lam) / (2 (1 - i lam)) for the (1,0) space
    for lam in (0.9, 2.0, 0.5 + 0.2j):
        got = specfun.gamma_ell(H2, lam, 1).values[1]
        want = (0.5 - 1j * lam) / (2.0 * (1.0 - 1j * lam))
        assert got == pytest.approx(want, rel=1e-13)


def test_gamma_resonance_reported(H2):
    with pytest.raises(specfun.ResonanceError):
        specfun.gamma_ell(H2, -2j, 3)


def test_gamma_growth_fit(H2):
    g = specfun.gamma_ell(H2, 2.0, 6)
    mags = np.abs(g.values[1:])
    ells = np.arange(1, 7, dtype=float)
    slope, C, scatter = loglog_fit(ells, mags)
    assert np.isfinite(slope) and np.isfinite(C)  # reported, not asserted sharp


def test_omega_geometric_tail(H2):
    lam, t = 1.0, 2.0
    diffs = [abs(specfun.omega_partial(H2, lam, t, L + 1)
                 - specfun.omega_partial(H2, lam, t, L)) for L in range(2, 7)]
    ratios = np.array(diffs[1:]) / np.array(diffs[:-1])
    assert np.all(np.abs(ratios - np.exp(-2.0 * t)) < 0.3 * np.exp(-2.0 * t))


def test_omega_bounded_and_empty(H2):
    assert specfun.omega_partial(H2, 0.7, 1.0, 0) == 0.0
    v = specfun.omega_partial(H2, 1.0, 2.0, 12)
    assert np.isfinite(v) and abs(v) < 10.0


def test_omega_regime_guard(H2):
    with pytest.raises(ValueError):
        specfun.omega_partial(H2, 1.0, 0.2, 4)


# ---------------------------------------------------------------------------
# joint certification: series + c-function against the eigen-solver
# ---------------------------------------------------------------------------


def test_series_reconstruction(H2, H3):
    from sphmult.sphfn import phi_hc, phi_oracle

    for sp in (H2, H3):
        for lam in (0.5, 3.0, 10.0):
            for t in (1.0, 2.5):
                err = phi_hc(sp, lam, t, 12).est_error
                assert err < 1e-6, (sp, lam, t, err)


def test_phi_mpmath_hypergeometric_oracle(H2, CH2):
    """Independent special-function route: Gauss hypergeometric values."""
    mpmath = pytest.importorskip("mpmath")
    from sphmult.sphfn import phi_oracle

    mpmath.mp.dps = 30
    for sp in (H2, CH2):
        aJ = sp.n / 2.0 - 1.0
        for lam, t in [(1.1, 0.7), (2.0, 1.8)]:
            a = 0.5 * (sp.rho + 1j * lam)
            b = 0.5 * (sp.rho - 1j * lam)
            want = complex(mpmath.hyp2f1(a, b, aJ + 1.0, -mpmath.sinh(t) ** 2))
            got = phi_oracle(sp, lam, t)
            assert got == pytest.approx(want, rel=1e-9), (sp, lam, t)
