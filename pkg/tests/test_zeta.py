import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetaindep.zerolab.zeta import hardy_z, hardy_z_fast, theta, theta_fast, zeta_em


@pytest.mark.parametrize("s", [mp.mpc(0.5, 14.1), mp.mpc(0.25, 3.0), mp.mpc(1.5, 40.0), mp.mpc(0.5, 777.77)])
def test_zeta_em_against_mpmath(s):
    with mp.workdps(40):
        v, r, dv, dr = zeta_em(s, 30, derivative=True)
        assert abs(v - mp.zeta(s)) <= r
        assert abs(dv - mp.zeta(s, derivative=1)) <= dr
        assert r < mp.mpf(10) ** -29


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=1.0, max_value=2000.0), st.floats(min_value=0.05, max_value=1.95))
def test_zeta_em_radius_is_sound(t, sigma):
    s = mp.mpc(sigma, t)
    with mp.workdps(35):
        v, r = zeta_em(s, 20)
        assert abs(v - mp.zeta(s)) <= r


@pytest.mark.parametrize("t", ["1.5", "14.134725", "100", "2500.25"])
def test_theta_and_z_against_mpmath(t):
    with mp.workdps(40):
        th, thr = theta(mp.mpf(t), 30)
        assert abs(th - mp.siegeltheta(mp.mpf(t))) <= thr
        z, zr = hardy_z(mp.mpf(t), 30)
        assert abs(z - mp.siegelz(mp.mpf(t))) <= zr


def test_fast_path_against_mpmath():
    ts = np.array([10.0, 14.0, 55.5, 300.1, 1234.5, 2600.0])
    vals, radii = hardy_z_fast(ts)
    for t, v, r in zip(ts, vals, radii):
        exact = float(mp.siegelz(t))
        assert abs(v - exact) <= r
        assert r < 1e-8 * max(1.0, abs(exact))
    th = theta_fast(ts)
    assert np.allclose(th, [float(mp.siegeltheta(t)) for t in ts], rtol=0, atol=1e-9)
