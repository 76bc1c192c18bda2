from fractions import Fraction

import pytest

from app.services.exactmath import (
    Cyclotomic, EchelonBasis, FiniteField, GaussianRational, Quaternion, cyclotomic_reduce, lie_span,
    nullspace, quaternion_mul, rank, signature, span_dimension, sum_of_two_squares, to_fraction,
)


def sqrt5() -> Cyclotomic:
    z = Cyclotomic.root(5)
    return z + z ** 4 - z ** 2 - z ** 3


def test_quaternion_units():
    """i j = k, j i = -k and every unit squares to -1"""
    i, j, k = (Quaternion.unit(u) for u in "ijk")
    assert i * j == k
    assert j * i == -k
    assert quaternion_mul(k, i) == j
    for u in (i, j, k):
        assert u * u == Quaternion(-1)


def test_cyclotomic_reduce_uses_the_canonical_basis():
    # 1 + zeta_5 + ... + zeta_5^4 = 0 removes the constant term
    assert Cyclotomic.rational(1, 5).coeffs == {1: -1, 2: -1, 3: -1, 4: -1}
    x = Cyclotomic(4, {2: 1, 3: 2})
    assert x.coeffs == {0: -1, 1: -2}
    assert cyclotomic_reduce(x) == x
    assert cyclotomic_reduce(x).coeffs == x.coeffs
    assert Cyclotomic(3, {0: 1, 1: 1, 2: 1}).is_zero()


def test_quaternion_inverse_and_norm():
    q = Quaternion(Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    assert q.norm() == 1
    assert q * q.inverse() == Quaternion(1)
    assert str(Quaternion(0, 1, 0, -2)) == "i-2k"


def test_right_matrix_trace_is_four_times_real_part():
    q = Quaternion(Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    m = q.right_matrix()
    assert sum(m[r][r] for r in range(4)) == -2


def test_gaussian_rational_arithmetic():
    z = GaussianRational(1, 2)
    assert z * z.conjugate() == GaussianRational(5)
    assert z.norm() == 5
    assert (z / z) == GaussianRational(1)


def test_cyclotomic_root_relations():
    w = Cyclotomic.root(3)
    assert w + w ** 2 == -1
    assert w ** 3 == 1
    assert Cyclotomic.root(4) ** 2 == -1
    z = Cyclotomic.root(5)
    assert 1 + z + z ** 2 + z ** 3 + z ** 4 == 0


def test_cyclotomic_equality_across_orders():
    assert Cyclotomic.root(3) == Cyclotomic.root(6, 2)
    assert Cyclotomic.rational(Fraction(1, 2), 12) == Fraction(1, 2)


def test_square_root_of_five_and_its_galois_conjugate():
    s = sqrt5()
    assert s * s == 5
    assert s.galois(2) == -s
    assert s.is_real()
    assert not s.is_rational()


def test_galois_rejects_non_unit():
    with pytest.raises(ValueError):
        Cyclotomic.root(6).galois(3)


def test_average_trace_and_norm():
    w = Cyclotomic.root(3)
    assert w.average_trace() == Fraction(-1, 2)
    assert w.norm() == 1
    assert sqrt5().norm() == 25


def test_cyclotomic_inverse():
    x = Cyclotomic.root(5) + 2
    assert x * x.inverse() == 1


def test_cyclotomic_json_round_trip_keeps_value():
    x = sqrt5() * Fraction(3, 7)
    assert Cyclotomic.from_json(x.to_json()) == x


def test_to_fraction_rejects_irrational():
    with pytest.raises(ValueError):
        sqrt5().to_fraction()
    assert to_fraction("0.25") == Fraction(1, 4)


def test_gf4_and_gf9_tables():
    gf4 = FiniteField(4)
    assert gf4.mul(2, 2) == 3
    assert gf4.mul(2, 3) == 1
    assert gf4.add(2, 3) == 1
    assert gf4.frobenius(2) == 3
    gf9 = FiniteField(9)
    assert gf9.mul(3, 3) == gf9.neg(1)
    assert all(gf9.mul(x, gf9.inv(x)) == 1 for x in range(1, 9))


def test_unsupported_field_orders():
    with pytest.raises(ValueError):
        FiniteField(6)
    with pytest.raises(ValueError):
        FiniteField(8)


def test_rank_and_nullspace():
    assert rank([[1, 2], [2, 4]]) == 1
    basis = nullspace([[1, 2, 3]], 3)
    assert len(basis) == 2
    for v in basis:
        assert v[0] + 2 * v[1] + 3 * v[2] == 0


def test_signature_of_split_forms():
    assert signature([[1, 0], [0, -1]]) == (1, 1, 0)
    assert signature([[0, 1], [1, 0]]) == (1, 1, 0)
    assert signature([[1, 0, 0], [0, 0, 0], [0, 0, 2]]) == (2, 0, 1)
    with pytest.raises(ValueError):
        signature([[1, 2], [0, 1]])


def test_echelon_basis_coordinates():
    basis = EchelonBasis(3)
    assert basis.add([1, 1, 0])
    assert basis.add([0, 1, 1])
    assert not basis.add([1, 2, 1])
    assert basis.coordinates([2, 3, 1]) == [2, 3]
    with pytest.raises(ValueError):
        basis.coordinates([0, 0, 1])


def test_span_closure_under_product():
    # multiplication of 2x2 matrices written as coordinate 4-tuples
    def mul(a, b):
        return (a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])
    result = span_dimension([(0, 1, 0, 0), (0, 0, 1, 0)], product=mul)
    assert result.dimension == 4


def test_lie_span_of_sl2():
    def bracket(a, b):
        ab = (a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
              a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])
        ba = (b[0] * a[0] + b[1] * a[2], b[0] * a[1] + b[1] * a[3],
              b[2] * a[0] + b[3] * a[2], b[2] * a[1] + b[3] * a[3])
        return tuple(x - y for x, y in zip(ab, ba))
    result = lie_span([(0, 1, 0, 0), (0, 0, 1, 0)], to_coords=lambda v: v, bracket=bracket)
    assert result.dimension == 3


def test_sum_of_two_squares():
    x, y = sum_of_two_squares(Fraction(5, 4))
    assert x * x + y * y == Fraction(5, 4)
    assert sum_of_two_squares(Fraction(3)) is None
    assert sum_of_two_squares(Fraction(-1)) is None
