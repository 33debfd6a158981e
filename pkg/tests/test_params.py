import math

import pytest
from hypothesis import given, strategies as st

from secrelay.exceptions import DegenerateCSIError, ParameterError
from secrelay.params import SystemParams, derive, from_db, to_db


def test_from_db_values():
    assert from_db(10) == 10.0
    assert from_db(0) == 1.0
    # 10**1.5 from mpmath at 30 digits
    assert from_db(15) == pytest.approx(31.6227766016837933, rel=1e-15)


def test_from_db_rejects_non_finite():
    with pytest.raises(ParameterError):
        from_db(float("inf"))
    with pytest.raises(ParameterError):
        from_db(float("nan"))


@given(st.floats(-100, 100))
def test_db_round_trip(x):
    assert to_db(from_db(x)) == pytest.approx(x, abs=1e-12)


def test_defaults_match_reference_setting(defaults):
    assert defaults.n_r == 100
    assert defaults.w_hz == 1e4
    assert defaults.rho == 0.9
    assert defaults.epsilon == 0.01
    assert defaults.p_max == pytest.approx(from_db(15))


def test_derive_reference_values():
    p = SystemParams(rho=0.9, alpha_rd=1, n_r=100, epsilon=0.01, alpha_re=5, p_s=10, alpha_sr=1)
    d = derive(p)
    assert d.a == pytest.approx(90.0, rel=1e-15)
    assert d.b == 1000.0
    # -5 ln(0.01) / 90 evaluated with mpmath
    assert d.r_l == pytest.approx(0.255842788110449520, rel=1e-14)


def test_derive_unit_boundary():
    # -alpha_re ln(eps) = 100 = rho alpha_rd N_R
    p = SystemParams(rho=1.0, alpha_rd=1.0, n_r=100, epsilon=math.exp(-100), alpha_re=1.0)
    assert derive(p).r_l == pytest.approx(1.0, rel=1e-15)


def test_derive_rejects_zero_rho():
    with pytest.raises(DegenerateCSIError, match="degenerate CSI"):
        derive(SystemParams(rho=0.0))


@pytest.mark.parametrize("changes", [
    {"rho": -0.1}, {"rho": 1.5}, {"epsilon": 0.0}, {"epsilon": 1.0}, {"epsilon": 1.2},
    {"alpha_re": 0.0}, {"alpha_rd": -1.0}, {"alpha_sr": 0.0}, {"n_r": 0}, {"n_r": 2.5},
    {"n_r": True}, {"p_max": 0.0}, {"p_s": -1.0}, {"w_hz": 0.0}, {"alpha_re": float("nan")},
])
def test_construction_fails_loudly(changes):
    with pytest.raises(ParameterError):
        SystemParams(**changes)


def test_replace_validates(defaults):
    with pytest.raises(ParameterError):
        defaults.replace(rho=2.0)
    assert defaults.replace(n_r=50).n_r == 50


def test_derive_is_pure(defaults):
    assert derive(defaults) == derive(defaults)


positive = st.floats(0.01, 100, allow_nan=False)


@given(n=st.integers(1, 10_000), k=st.integers(1, 1000), rho=st.floats(0.01, 0.99),
       ard=positive, are=positive, eps=st.floats(1e-6, 0.9))
def test_r_l_monotonicity(n, k, rho, ard, are, eps):
    base = SystemParams(n_r=n, rho=rho, alpha_rd=ard, alpha_re=are, epsilon=eps)
    r = derive(base).r_l
    assert derive(base.replace(n_r=n + k)).r_l < r
    assert derive(base.replace(rho=min(1.0, rho * 1.01))).r_l < r
    assert derive(base.replace(alpha_rd=ard * 1.5)).r_l < r
    assert derive(base.replace(alpha_re=are * 1.5)).r_l > r
    assert derive(base.replace(epsilon=eps + (1 - eps) / 2)).r_l < r
