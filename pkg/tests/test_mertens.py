from decimal import Decimal

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from zetaindep.mertens import (
    CurveConfig,
    Kernel,
    curve_csv,
    emit_bound_curve,
    heaviness_sort,
    height_at,
    kernel_value,
    mertens_bound,
)
from zetaindep.zerolab import ZeroRecord, ZeroTable


def close(a, b, digits=20):
    return abs(mp.mpf(a) - mp.mpf(b)) < mp.mpf(10) ** -digits


def test_kernel_points():
    f = Kernel("fejer", 10)
    f0 = Kernel("odlyzko_te_riele", 10)
    assert close(kernel_value(f, 5), 0.5)
    assert close(kernel_value(f0, 5), 1 / mp.pi)
    assert kernel_value(f0, 10) == 0 and kernel_value(f, 10) == 0
    assert kernel_value(f0, 0) == 1 and kernel_value(f, 0) == 1
    assert kernel_value(f, -12) == 0
    assert Kernel("f0", 1).kind == "odlyzko_te_riele"
    with pytest.raises(ValueError):
        Kernel("gauss", 1)
    with pytest.raises(ValueError):
        Kernel("f0", 0)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["fejer", "f0"]), st.floats(0.1, 1e4), st.floats(-2.0, 2.0))
def test_kernel_even_and_bounded(kind, T, x):
    k = Kernel(kind, str(T))
    with mp.workdps(40):
        t = x * k.T
        neg = -t
    v = kernel_value(k, t)
    assert v == kernel_value(k, neg)
    assert 0 <= v <= 1
    if abs(x) >= 1:
        assert v == 0


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["fejer", "f0"]), st.floats(1, 100), st.floats(0, 100), st.floats(0, 0.999))
def test_kernel_grows_with_T(kind, T, dT, x):
    t = x * T
    with mp.workdps(40):
        assert kernel_value(Kernel(kind, str(T + dT)), t) >= kernel_value(Kernel(kind, str(T)), t) - mp.mpf(10) ** -25


def synthetic(gammas, zps):
    return ZeroTable(tuple(ZeroRecord(i + 1, Decimal(g), 3, (Decimal(z), Decimal("0.000")))
                           for i, (g, z) in enumerate(zip(gammas, zps))))


def test_heaviness_tie_keeps_cardinal_order(monkeypatch):
    from zetaindep import mertens

    t = synthetic(["3.000", "4.000", "5.000"], ["4.000", "3.000", "0.500"])
    kern = Kernel("fejer", 100)
    assert heaviness_sort(t, kern) == [3, 1, 2]
    assert heaviness_sort(t.head(1), kern) == [1]
    monkeypatch.setattr(mertens, "weight", lambda rec, kernel: mp.mpf(1))
    assert heaviness_sort(t, kern) == [1, 2, 3]


def test_heaviness_invariant_under_scaling(zeros31, monkeypatch):
    from zetaindep import mertens

    kern = Kernel("f0", height_at(zeros31, 31))
    base = heaviness_sort(zeros31.head(30), kern)
    original = mertens.weight
    monkeypatch.setattr(mertens, "weight", lambda rec, kernel: 7 * original(rec, kernel))
    assert heaviness_sort(zeros31.head(30), kern) == base


def test_heaviness_order_against_oracle(zeros2001):
    T = height_at(zeros2001, 2001)
    kern = Kernel("f0", T)
    head = zeros2001.head(12)
    with mp.workdps(30):
        weights = {}
        for n in range(1, 13):
            rho = mp.zetazero(n)
            weights[n] = kernel_value(kern, rho.imag) / abs(rho * mp.zeta(rho, derivative=1))
    expected = sorted(weights, key=lambda n: (-weights[n], n))
    assert heaviness_sort(head, kern) == expected
    assert expected[0] == 1


def test_heaviness_rejects_zero_above_T(zeros31):
    with pytest.raises(ValueError):
        heaviness_sort(zeros31, Kernel("f0", 50))


def test_single_zero_bound(zeros31):
    rec = zeros31.record(1)
    kern = Kernel("fejer", 2 * rec.gamma_mpf())
    report = mertens_bound(zeros31, [1], 1, 1, kern)
    with mp.workdps(30):
        rho = mp.mpc(0.5, mp.zetazero(1).imag)
        expect = 0.5 / abs(rho * mp.zeta(rho, derivative=1))
    assert close(report.bound, expect, 25)
    assert close(report.bound, "0.0445707", 6)
    assert report.liminf_upper == -report.limsup_lower


def test_bound_monotone_in_N_and_T(zeros2001):
    T = height_at(zeros2001, 200)
    order = heaviness_sort(zeros2001.head(199), Kernel("f0", T))
    values = [mertens_bound(zeros2001, order, 50, N, Kernel("f0", T)).bound for N in (1, 2, 10, 1000)]
    assert values == sorted(values) and len(set(values)) == 4
    assert mertens_bound(zeros2001, order, 50, None, Kernel("f0", T)).bound > values[-1]
    wider = mertens_bound(zeros2001, order, 50, 10, Kernel("f0", height_at(zeros2001, 300))).bound
    assert wider > values[2]


def test_bound_rejects_bad_input(zeros31):
    kern = Kernel("f0", 30)
    with pytest.raises(ValueError):
        mertens_bound(zeros31, [1, 2, 3, 4], 4, 10, kern)
    with pytest.raises(ValueError):
        mertens_bound(zeros31, [1], 2, 10, kern)
    with pytest.raises(ValueError):
        mertens_bound(zeros31, [1], 1, 0, kern)


def test_bound_report_terms(zeros31):
    kern = Kernel("f0", height_at(zeros31, 31))
    rep = mertens_bound(zeros31, list(range(1, 31)), 30, 7, kern)
    with mp.workdps(30):
        assert close(sum(c.term for c in rep.contributions), rep.bound, 25)
    assert all(c.term > 0 for c in rep.contributions)
    assert rep.format().startswith("bound=")


def test_fig2_asymptote_and_shape(zeros2001):
    config = CurveConfig(n_selected=300, sort_T_index=2001, T_indices=[500, 1000, 2001])
    header, rows = emit_bound_curve(zeros2001, "fig2", ["fejer", "f0"], config)
    assert header == ["T_index", "T", "bound_fejer", "bound_f0", "asymptote"]
    for row in rows:
        assert row[2] < row[4] and row[3] < row[4]
    # both series increase with T
    assert [r[2] for r in rows] == sorted(r[2] for r in rows)
    assert [r[3] for r in rows] == sorted(r[3] for r in rows)
    csv_text = curve_csv(header, rows)
    assert csv_text.count("\n") == 4


def test_fig1_resorts_per_point(zeros2001):
    config = CurveConfig(schedule=[(10, 100), (10, 500), (50, 500)])
    header, rows = emit_bound_curve(zeros2001, "fig1", ["f0"], config)
    assert header == ["n", "T_index", "bound_f0"]
    assert rows[0][2] < rows[1][2] < rows[2][2]
    T = height_at(zeros2001, 500)
    below = zeros2001.head(499)
    order = heaviness_sort(below, Kernel("f0", T))
    assert rows[2][2] == mertens_bound(below, order, 50, None, Kernel("f0", T)).bound
    with pytest.raises(ValueError):
        emit_bound_curve(zeros2001, "fig3", ["f0"], config)
