import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphmult.reports import loglog_fit
from sphmult.space import (
    Exponent,
    RankOneSpace,
    density_delta,
    cartan_measure_weight,
    parse_product,
    parse_space,
    weight_w,
)


def test_density_examples(H2, H3):
    assert density_delta(H2, 1.0) == pytest.approx(np.sinh(1.0), abs=1e-12)
    assert density_delta(H3, 1.0) == pytest.approx(np.sinh(1.0) ** 2, abs=1e-12)
    # delta(t)/t^(n-1) -> 1 as t -> 0
    t = 1e-6
    assert density_delta(H2, t) / t == pytest.approx(1.0, rel=1e-9)


def test_density_rejects_nonpositive(H2):
    with pytest.raises(ValueError):
        density_delta(H2, 0.0)
    with pytest.raises(ValueError):
        density_delta(H2, -1.0)


def test_weight_examples(H2, CH2):
    assert weight_w(H2, 1e-7) == pytest.approx(1.0, rel=1e-10)
    assert weight_w(H2, 1.0) == pytest.approx((1.0 / np.sinh(1.0)) ** 0.5, rel=1e-12)
    # arbitrary-precision re-evaluation oracle for the CH2 value
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    t = mpmath.mpf(2)
    rho = mpmath.mpf(4) / 2
    delta = 2 ** (-2 * rho) * (mpmath.e**t - mpmath.e**-t) ** 2 \
        * (mpmath.e ** (2 * t) - mpmath.e ** (-2 * t))
    want = float(mpmath.sqrt(t**3 / delta))
    assert weight_w(CH2, 2.0) == pytest.approx(want, rel=1e-13)


def test_cartan_weight_alias(H2):
    ts = np.linspace(0.1, 5.0, 7)
    assert np.allclose(cartan_measure_weight(H2, ts), density_delta(H2, ts))


def test_construction_validation():
    with pytest.raises(ValueError):
        RankOneSpace(0, 1)
    with pytest.raises(ValueError):
        RankOneSpace(1, -1)
    sp = RankOneSpace(2, 1)
    assert sp.n == 4 and sp.rho == 2.0


def test_presets_and_parsing():
    assert parse_space("H2") == RankOneSpace(1, 0)
    assert parse_space("CH2") == RankOneSpace(2, 1)
    assert parse_space("3,2") == RankOneSpace(3, 2)
    prod = parse_product("H2xH3")
    assert prod.n == (2, 3)
    with pytest.raises(ValueError):
        parse_space("nope")


def test_exponent():
    p = Exponent(4.0 / 3.0)
    assert p.delta_p == pytest.approx(0.5)
    assert Exponent(2.0).delta_p == 0.0
    assert Exponent(1.5).delta_p == Exponent(3.0).delta_p  # conjugate pair
    with pytest.raises(ValueError):
        Exponent(1.0)


@pytest.mark.parametrize("m", [(1, 0), (2, 0), (2, 1), (4, 3)])
def test_density_large_t_slope(m):
    """Fitted large-t slope of log delta equals 2 rho within 1%."""
    sp = RankOneSpace(*m)
    ts = np.linspace(8.0, 28.0, 30)
    slope = np.polyfit(ts, np.log(density_delta(sp, ts)), 1)[0]
    assert slope == pytest.approx(2.0 * sp.rho, rel=0.01)


@pytest.mark.parametrize("m", [(1, 0), (2, 0), (2, 1), (3, 1)])
def test_weight_monotone_decreasing(m):
    sp = RankOneSpace(*m)
    ts = np.geomspace(1e-3, 25.0, 400)
    w = weight_w(sp, ts)
    assert np.all(np.diff(w) < 0)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=1e-3, max_value=30.0),
       st.integers(min_value=1, max_value=5),
       st.integers(min_value=0, max_value=4))
def test_density_positive_property(t, ma, m2a):
    sp = RankOneSpace(ma, m2a)
    assert density_delta(sp, t) > 0.0
    assert weight_w(sp, t) > 0.0
