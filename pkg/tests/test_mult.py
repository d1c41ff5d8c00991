import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphmult import mult
from sphmult.space import Exponent, ProductSpace, RankOneSpace


def test_theta_examples(H2, p43):
    assert mult.theta_p(H2, p43, 0.0) == pytest.approx(0.25)
    assert mult.theta_p(H2, p43, 0.25j) == pytest.approx(0.0, abs=1e-12)
    assert mult.theta_p(H2, p43, 10.0) == pytest.approx(10.0031, abs=1e-3)
    # Theta ~ |zeta| for large |zeta|
    z = 500.0 + 0.1j
    assert mult.theta_p(H2, p43, z) / abs(z) == pytest.approx(1.0, abs=1e-4)


def test_theta_comparability(H2, p43):
    """Theta^2 / [(Re)^2 + dist(Im, complement)^2] in [1/C, C], C <= 4."""
    hw = p43.delta_p * H2.rho
    xs = np.concatenate([[0.0], np.geomspace(1e-3, 30, 12)])
    ys = np.linspace(-0.95 * hw, 0.95 * hw, 11)
    for x in xs:
        for y in ys:
            z = complex(x, y)
            th2 = float(mult.theta_p(H2, p43, z)) ** 2
            cmp2 = x**2 + (hw - abs(y)) ** 2
            assert 0.25 <= th2 / cmp2 <= 4.0


def test_dp_examples(H2, H3, p43):
    prod = ProductSpace(H2, H3)  # half-widths (0.25, 0.5) at p = 4/3
    assert mult.dp_ionescu(prod, p43, (0.0, 0.0)) == pytest.approx(0.25)
    assert mult.dp_ionescu(prod, p43, (0.25j, 0.0)) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        mult.dp_ionescu(prod, p43, (0.3j, 0.0))


def test_dp_dense_boundary_oracle(H2, H3, p43, rng):
    prod = ProductSpace(H2, H3)
    w1, w2 = p43.delta_p * H2.rho, p43.delta_p * H3.rho
    # dense sampling of the rectangle boundary
    ts = np.linspace(0, 1, 20001)
    bnd = np.concatenate([
        np.stack([-w1 + 2 * w1 * ts, np.full_like(ts, w2)], axis=1),
        np.stack([-w1 + 2 * w1 * ts, np.full_like(ts, -w2)], axis=1),
        np.stack([np.full_like(ts, w1), -w2 + 2 * w2 * ts], axis=1),
        np.stack([np.full_like(ts, -w1), -w2 + 2 * w2 * ts], axis=1),
    ])
    for _ in range(25):
        x1, x2 = rng.normal(size=2)
        y1 = rng.uniform(-w1, w1)
        y2 = rng.uniform(-w2, w2)
        d = mult.dp_ionescu(prod, p43, (complex(x1, y1), complex(x2, y2)))
        brute_dist = np.sqrt(((bnd - [y1, y2]) ** 2).sum(axis=1)).min()
        want = np.sqrt(x1**2 + x2**2 + brute_dist**2)
        assert d == pytest.approx(want, abs=1e-6)


def test_tube_membership(H2xH2, p43):
    tube = mult.Tube(H2xH2, p43)
    hw = tube.half_widths[0]
    assert tube.contains(0.1 + 1j * (hw - 1e-6), 5.0 - 0.1j)
    assert not tube.contains(0.1 + 1j * (hw + 1e-6), 0.0)
    assert tube.contains(0.1 + 1j * hw, 0.0, closed=True)


# ---------------------------------------------------------------------------
# built-in multipliers and derivative access
# ---------------------------------------------------------------------------


def test_builtin_trivial_cases(H2xH2):
    m0 = mult.builtin_multiplier(H2xH2, "imaginary_powers", [0, 0, 0])
    z = np.array([0.5 + 0.1j])
    assert m0(z, z)[0] == pytest.approx(1.0)
    m1 = mult.builtin_multiplier(H2xH2, "imaginary_powers", [1, 0, 0])
    lam = np.linspace(0.1, 20, 50)
    assert np.allclose(np.abs(m1(lam, lam)), 1.0)


def test_builtin_weyl(H2xH2):
    for kind, params in [("imaginary_powers", [1, 1, 1]), ("gaussian", [0.1]),
                         ("euclid_marc", [1, 1]), ("constant", [2.0])]:
        m = mult.builtin_multiplier(H2xH2, kind, params)
        assert m.check_weyl(), kind


def test_branch_cut_detection(H2xH2):
    # a multiplier with a genuine branch cut inside the strip it declares
    bad = mult.MultiplierSpec(
        evaluator=lambda l1, l2: mult._principal_power(l1**2, 1j)
        * np.ones_like(l2),
        nvars=2, analytic_strip=(0.2, 0.2), label="bad")
    with pytest.raises(ValueError, match="branch-cut"):
        mult._branch_cut_sweep(bad)


def test_derivative_fd_vs_cauchy(H2xH2):
    """Finite differences agree with the analytic access to 1e-5."""
    g = mult.builtin_multiplier(H2xH2, "gaussian", [0.1])
    ip = mult.builtin_multiplier(H2xH2, "imaginary_powers", [1.0, 0.5, 0.25])
    for m in (g, ip):
        for order in [(1, 0), (1, 1), (2, 1), (3, 3)]:
            pt = (0.9 + 0.05j, 1.7 - 0.1j)
            a = mult.derivative(m, pt, order)
            b = mult.derivative_fd(m, pt, order)
            assert abs(a - b) <= 1e-5 * max(1.0, abs(a)), (m.label, order)


def test_gaussian_closed_form_derivatives(H2xH2):
    """Cauchy-circle derivatives against Hermite-polynomial closed forms."""
    eps = 0.1
    g = mult.builtin_multiplier(H2xH2, "gaussian", [eps])
    z1, z2 = 0.8, 1.9

    def d1g(z, k):
        # d^k/dz^k e^{-eps z^2} via physicists' Hermite polynomials
        from numpy.polynomial.hermite import hermval

        c = np.zeros(k + 1)
        c[k] = 1.0
        u = np.sqrt(eps) * z
        return (-np.sqrt(eps)) ** k * hermval(u, c) * np.exp(-eps * z**2)

    for k1, k2 in [(0, 1), (2, 0), (2, 2), (3, 3)]:
        want = d1g(z1, k1) * d1g(z2, k2)
        got = mult.derivative(g, (z1 + 0j, z2 + 0j), (k1, k2))
        assert got == pytest.approx(want, rel=1e-8)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def test_norm_of_constant(H2xH2, p43):
    one = mult.builtin_multiplier(H2xH2, "constant", [1.0])
    rep = mult.marc_norm(H2xH2, p43, one, (2, 2))
    assert rep.value == pytest.approx(1.0, abs=1e-9)


def test_marc_infty_gaussian_stable(H2xH2, p43):
    g = mult.builtin_multiplier(H2xH2, "gaussian", [0.1])
    rep = mult.marc_infty_norm(H2xH2, p43, g, (3, 3))
    assert rep.finite
    h = rep.refinements
    assert abs(h[-1] - h[-2]) / h[-1] < 0.01


def test_marc_finite_single_theta_divergent(H2xH2, p43):
    ip = mult.builtin_multiplier(H2xH2, "imaginary_powers", [1, 1, 1])
    rep = mult.marc_norm(H2xH2, p43, ip, (3, 3))
    assert rep.finite
    rep2 = mult.single_theta_norm(H2xH2, p43, ip, (3, 3))
    assert not rep2.finite


def test_norm_monotone_in_order(H2xH2, p43):
    g = mult.builtin_multiplier(H2xH2, "gaussian", [0.2])
    v1 = mult.marc_infty_norm(H2xH2, p43, g, (1, 1)).value
    v2 = mult.marc_infty_norm(H2xH2, p43, g, (3, 3)).value
    assert v2 >= v1 - 1e-12


def test_conjugate_exponent_symmetry(H2xH2):
    g = mult.builtin_multiplier(H2xH2, "gaussian", [0.15])
    a = mult.marc_norm(H2xH2, Exponent(1.5), g, (1, 1)).value
    b = mult.marc_norm(H2xH2, Exponent(3.0), g, (1, 1)).value
    assert a == b  # identical delta_p -> identical tube -> identical sup


def test_horm_rankone(H2, p43):
    m = mult.builtin_multiplier(H2, "imaginary_power", [1.0])
    rep = mult.horm_norm(H2, p43, m, 2)
    assert rep.finite
    rep_inf = mult.horm_infty_norm(H2, p43, m, 2)
    assert rep_inf.finite


def test_norm_weyl_gate(H2xH2, p43):
    odd = mult.MultiplierSpec(lambda l1, l2: l1 + l2, nvars=2,
                              analytic_strip=(1.0, 1.0), label="odd")
    with pytest.raises(ValueError, match="Weyl"):
        mult.marc_norm(H2xH2, p43, odd, (1, 1))


def test_norm_strip_gate(H2xH2, p43):
    em = mult.builtin_multiplier(H2xH2, "euclid_marc", [1, 1])
    with pytest.raises(ValueError, match="holomorphic"):
        mult.marc_norm(H2xH2, p43, em, (1, 1))
    # but the real-line norms accept it
    rep = mult.marc_frastar_norm(H2xH2, p43, em, (1, 1))
    assert rep.finite


# ---------------------------------------------------------------------------
# independence of the two conditions
# ---------------------------------------------------------------------------


def test_independence_witness(H2xH2, p43):
    res = mult.independence_witness(H2xH2, p43)
    regA, regB = res["reports"]
    assert regA.passed, regA.to_dict()
    assert regA.fitted["ratio_slope"] == pytest.approx(-1.0, abs=0.05)
    assert regB.passed, regB.to_dict()
    assert regB.fitted["split_exponent"] == pytest.approx(1.25, abs=0.05)
    assert regB.fitted["joint_exponent"] == pytest.approx(0.5, abs=0.05)


def test_independence_trivial_orders(H2xH2, p43):
    res = mult.independence_witness(H2xH2, p43, J=(0, 0))
    assert np.allclose(res["ratio_A"], 1.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=-20, max_value=20),
       st.floats(min_value=-0.24, max_value=0.24))
def test_theta_even_property(x, y):
    H2 = RankOneSpace(1, 0)
    p = Exponent(4.0 / 3.0)
    z = complex(x, y)
    assert mult.theta_p(H2, p, z) == mult.theta_p(H2, p, -z)
    assert mult.theta_p(H2, p, np.conj(z)) == mult.theta_p(H2, p, z)
