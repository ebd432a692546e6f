from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zetaindep.relations import (
    CombinationEncoding,
    combination_value,
    decode,
    encode,
    m_independence_scan,
    smallest_combination,
    smallest_combination_bruteforce,
    table1_tsv,
)
from zetaindep.zerolab import ZeroRecord, ZeroTable


def test_encoding_example():
    assert encode([1, 0, 1, -1, -1]) == CombinationEncoding(5, 24)
    assert decode((5, 24), 5) == [1, 0, 1, -1, -1]
    assert encode(decode((5, 24), 5)) == CombinationEncoding(5, 24)
    assert str(CombinationEncoding(5, 24)) == "(5,24)"


def test_encoding_errors():
    with pytest.raises(ValueError):
        CombinationEncoding(3, 1)
    with pytest.raises(ValueError):
        encode([0, 0, 0])
    with pytest.raises(ValueError):
        encode([2, 0])
    with pytest.raises(ValueError):
        decode((5, 24), 4)
    with pytest.raises(ValueError):
        decode((6, 6), 3)


@given(st.lists(st.sampled_from([-1, 0, 1]), min_size=1, max_size=60).filter(any))
def test_encode_decode_round_trip(coeffs):
    enc = encode(coeffs)
    assert decode(enc, len(coeffs)) == coeffs
    assert decode(enc.negated(), len(coeffs)) == [-c for c in coeffs]


def test_row_20_decodes_to_table_value(zeros31):
    gammas = [r.gamma for r in zeros31.head(20)]
    coeffs = decode((533185, 147768), 20)
    value = sum(c * g for c, g in zip(coeffs, gammas))
    assert abs(value - Decimal("2.9799e-8")) < Decimal("1e-12")


def test_three_zeros(zeros31):
    r = smallest_combination(zeros31, 3)
    assert r.encoding == CombinationEncoding(4, 2)
    assert r.min_abs == combination_value(CombinationEncoding(4, 2), [x.gamma for x in zeros31.head(3)])
    assert abs(r.min_abs - Decimal("3.988818")) < Decimal("1e-6")


@pytest.mark.parametrize("n", range(1, 13))
def test_mitm_matches_exhaustive(zeros31, n):
    r = smallest_combination(zeros31, n)
    value, enc = smallest_combination_bruteforce([x.gamma for x in zeros31.head(n)])
    assert (r.min_abs, r.encoding) == (value, enc)
    assert combination_value(r.encoding, [x.gamma for x in zeros31.head(n)]) == r.min_abs


def test_minimum_nonincreasing(zeros31):
    values = [smallest_combination(zeros31, n).min_abs for n in range(1, 24)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_stable_under_more_digits(zeros31, zeros2001):
    for n in (20, 23, 24):
        lo = smallest_combination(zeros2001, n)
        hi = smallest_combination(zeros31, n)
        assert lo.encoding == hi.encoding
        assert abs(lo.min_abs - hi.min_abs) <= n * Decimal("6e-21")


def test_indistinguishable_minimum_raises():
    from zetaindep.errors import PrecisionError

    # gamma_3 - gamma_2 and gamma_2 - gamma_1 tie to within the stored precision
    recs = [ZeroRecord(i + 1, Decimal(g), 3, (Decimal("1.000"), Decimal("0.000")))
            for i, g in enumerate(["10.000", "13.000", "16.001"])]
    with pytest.raises(PrecisionError):
        smallest_combination(ZeroTable(tuple(recs)), 3)


def gauss_reduced_min(a, b):
    """min |b_i*|^2 of the Lagrange-Gauss reduced basis of <(1, 0, a), (0, 1, b)>."""
    def dot(x, y):
        return sum(i * j for i, j in zip(x, y))

    u, v = [1, 0, a], [0, 1, b]
    while True:
        if dot(u, u) > dot(v, v):
            u, v = v, u
        q = round(Fraction(dot(u, v), dot(u, u)))
        if q == 0:
            break
        v = [x - q * y for x, y in zip(v, u)]
    det2 = dot(u, u) * dot(v, v) - dot(u, v) ** 2
    return min(Fraction(dot(u, u)), Fraction(det2, dot(u, u)))


def test_m_independence_scan(zeros31):
    from zetaindep.indep import candidate_N
    from zetaindep.lattice import build_lattice

    rows = m_independence_scan(zeros31, [2, 3, 4], 24)
    assert [r[0] for r in rows] == [2, 3, 4]
    ms = [r[1] for r in rows]
    assert ms == sorted(ms, reverse=True)
    a, b = build_lattice(list(zeros31.head(2)), 24).truncated_gammas
    assert ms[0] == candidate_N(gauss_reduced_min(a, b), 2)
    assert 10 ** 11 <= ms[0] < 10 ** 13
    assert m_independence_scan([Fraction(1), Fraction(2), Fraction(3)], [3], 6)[0][1] == 0


def test_table1_tsv(zeros31):
    text = table1_tsv([smallest_combination(zeros31, 20)])
    assert text == "n\tvalue\tencoding\n20\t2.979906E-8\t(533185,147768)\n"
