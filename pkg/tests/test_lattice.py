import itertools
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zetaindep.errors import DegenerateBasisError, MalformedInputError, PrecisionError
from zetaindep.lattice import (
    IntegerLattice,
    ReductionParams,
    build_lattice,
    dump_lattice,
    gram_schmidt,
    hermite_normal_form,
    is_size_reduced,
    lll_reduce,
    load_lattice,
    reduce_with_profile,
    satisfies_lovasz,
)


def product(xs):
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def lattice_of(rows):
    return IntegerLattice(tuple(tuple(r) for r in rows), 0)


def test_gram_schmidt_examples():
    assert gram_schmidt(lattice_of([(2, 0), (0, 3)])).norms_sq == (4, 9)
    prof = gram_schmidt(lattice_of([(1, 1), (0, 1)]))
    assert prof.norms_sq == (2, Fraction(1, 2))
    assert prof.min_norm_sq == Fraction(1, 2)


def test_gram_schmidt_rejects_dependent_basis():
    with pytest.raises(DegenerateBasisError):
        gram_schmidt(lattice_of([(1, 2, 3), (2, 4, 6)]))


def test_build_lattice_from_exact_values():
    lat = build_lattice([Decimal("14.134725141734")], 2)
    assert lat.basis == ((1, 1413),)
    assert lat.K == 100
    lat = build_lattice(["14.134725", "21.022039"], 6)
    assert lat.basis == ((1, 0, 14134725), (0, 1, 21022039))


def test_build_lattice_from_records(zeros31):
    lat = build_lattice(list(zeros31.head(2)), 6)
    assert lat.truncated_gammas == (14134725, 21022039)


def test_build_lattice_precision_checks(zeros31):
    with pytest.raises(PrecisionError):
        build_lattice(list(zeros31.head(3)), 55, guard=10)
    with pytest.raises(TypeError):
        build_lattice([0.5], 3)


def test_build_lattice_ambiguous_floor():
    from zetaindep.zerolab import ZeroRecord

    # 1.000 +- 0.0006 straddles the integer 1000 at k=3
    rec = ZeroRecord(1, Decimal("1.000"), 3, (Decimal("0.000"), Decimal("0.000")))
    with pytest.raises(PrecisionError):
        build_lattice([rec], 3)


def test_reduction_params_validation():
    with pytest.raises(ValueError):
        ReductionParams(Fraction(1, 4))
    with pytest.raises(ValueError):
        ReductionParams(Fraction(11, 10))
    assert ReductionParams(1).delta == 1


def test_relation_lattice_finds_short_vector():
    lat = build_lattice([Fraction(3, 10), Fraction(1, 2)], 1)
    red = lll_reduce(lat)
    assert min(sum(x * x for x in v) for v in red.basis) <= 34
    best = min(
        sum(x * x for x in (a, b, a * 3 + b * 5))
        for a, b in itertools.product(range(-8, 9), repeat=2) if (a, b) != (0, 0)
    )
    assert best <= min(sum(x * x for x in v) for v in red.basis)


def test_orthogonal_basis_is_fixed_point():
    rows = [(3, 0, 0), (0, 5, 0), (0, 0, 7)]
    red = lll_reduce(lattice_of(rows))
    assert sorted(tuple(abs(x) for x in v) for v in red.basis) == sorted(rows)


def test_gram_schmidt_lower_bound_three_zeros(zeros31):
    lat = build_lattice(list(zeros31.head(3)), 6)
    red, prof = reduce_with_profile(lat)
    b = lat.basis
    for coeffs in itertools.product(range(-10, 11), repeat=3):
        if any(coeffs):
            v = [sum(c * row[j] for c, row in zip(coeffs, b)) for j in range(4)]
            assert sum(x * x for x in v) >= prof.min_norm_sq


bases = st.integers(min_value=2, max_value=5).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=60, deadline=None)
@given(bases, st.sampled_from([Fraction(3, 4), Fraction(3, 10), Fraction(99, 100), Fraction(1)]))
def test_lll_properties(rows, delta):
    lat = lattice_of(rows)
    try:
        before = gram_schmidt(lat)
    except DegenerateBasisError:
        return
    red, prof = reduce_with_profile(lat, ReductionParams(delta))
    assert is_size_reduced(red.basis)
    assert satisfies_lovasz(red.basis, delta)
    assert hermite_normal_form(red.basis) == hermite_normal_form(lat.basis)
    assert product(prof.norms_sq) == product(before.norms_sq)
    assert prof.norms_sq == gram_schmidt(red).norms_sq
    for p in range(1, len(prof.norms_sq)):
        assert prof.norms_sq[p] >= prof.norms_sq[p - 1] * (delta - Fraction(1, 4))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(-1000, 1000), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_min_norm_is_a_lower_bound(rows):
    lat = lattice_of(rows)
    try:
        red, prof = reduce_with_profile(lat)
    except DegenerateBasisError:
        return
    n = len(rows)
    for coeffs in itertools.product(range(-6, 7), repeat=n):
        if any(coeffs):
            v = [sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(n)]
            assert sum(x * x for x in v) >= prof.min_norm_sq


def test_hnf_is_canonical():
    a = [(2, 4, 4), (-6, 6, 12), (10, -4, -16)]
    u = [(a[0][j] + a[1][j]) for j in range(3)]
    b = [u, a[1], a[2]]
    assert hermite_normal_form(a) == hermite_normal_form(b)


def test_dump_round_trip(tmp_path, zeros31):
    lat = lll_reduce(build_lattice(list(zeros31.head(4)), 12))
    path = tmp_path / "l.lat"
    dump_lattice(lat, Fraction(3, 4), path)
    back, delta = load_lattice(path)
    assert back.basis == lat.basis and back.k == 12 and delta == Fraction(3, 4)
    assert path.read_text().startswith("# dim=4 k=12 delta=3/4\n")


def test_load_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.lat"
    path.write_text("1 2\n3 4\n")
    with pytest.raises(MalformedInputError):
        load_lattice(path)
    path.write_text("# dim=3 k=1 delta=3/4\n1 2\n3 4\n")
    with pytest.raises(MalformedInputError):
        load_lattice(path)
