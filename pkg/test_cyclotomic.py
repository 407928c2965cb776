"""
Cyclotomic Arithmetic Tests
Field operations, Galois embeddings, integrality and exact square roots
"""

from fractions import Fraction

import mpmath
import numpy as np
import pytest
from sympy import factorint

from cyclotomic import (ArithmeticSettings, ConductorOverflowError, CycNum, CyclotomicError,
                        CyclotomicZeroDivisionError, ONE, Positivity, conj, configure, cyclotomic_sqrt,
                        field_ops, galois_embed, integrality_and_positivity,
                        is_algebraic_integer, lies_in, normalize_conductor, rational_sqrt,
                        real_sqrt, root_of_unity_exponent, zeta)
from exact_linalg import nullspace, rank, to_matrix

SQRT2 = zeta(8) + zeta(8, 7)


def test_primitive_cube_roots_sum_to_minus_one():
    assert zeta(3) + zeta(3, 2) == -1


def test_sqrt2_squares_to_two():
    assert field_ops(SQRT2, SQRT2, 'mul') == 2
    assert (SQRT2 * SQRT2).rational_value() == 2


def test_unknown_field_operation():
    with pytest.raises(CyclotomicError):
        field_ops(ONE, ONE, 'pow')


def test_complex_conjugation():
    assert conj(zeta(4)) == -zeta(4)
    assert conj(SQRT2) == SQRT2
    assert zeta(5).conj() == zeta(5, 4)


def test_equality_and_hash_across_conductors():
    assert zeta(6, 2) == zeta(3)
    assert hash(zeta(6, 2)) == hash(zeta(3))
    assert zeta(12, 3) == zeta(4)
    assert CycNum.from_rational(Fraction(1, 2), 8) == Fraction(1, 2)
    assert len({zeta(6, 2), zeta(3), zeta(12, 4)}) == 1


def test_inverse_and_division():
    x = 1 + zeta(5)
    assert x * x.inverse() == 1
    assert (SQRT2 / 2) * SQRT2 == 1
    assert 1 / SQRT2 == SQRT2 / 2


def test_division_by_zero():
    with pytest.raises(CyclotomicZeroDivisionError):
        ONE / (zeta(3) + zeta(3, 2) + 1)
    with pytest.raises(ZeroDivisionError):
        CycNum.from_rational(0).inverse()


def test_power_and_negative_power():
    assert zeta(7) ** 7 == 1
    assert SQRT2 ** -2 == Fraction(1, 2)


def test_galois_embedding_of_sqrt2():
    principal = galois_embed(SQRT2, 1)
    assert abs(complex(principal) - 1.4142135623730951) < 1e-12
    assert principal.error_bound < 1e-25
    conjugate = galois_embed(SQRT2, 3)
    assert abs(complex(conjugate) + 1.4142135623730951) < 1e-12


def test_galois_embedding_of_rational_is_exact():
    minus_one = CycNum.from_rational(-1).lift(8)
    e = galois_embed(minus_one, 5)
    assert e.value.real == -1
    assert e.error_bound == 0


def test_galois_embedding_rejects_non_unit_index():
    with pytest.raises(CyclotomicError):
        galois_embed(SQRT2, 2)


def test_galois_embedding_keeps_its_working_precision():
    with mpmath.workdps(60):
        exact = mpmath.sqrt(2)
        e = galois_embed(SQRT2, 1, 50)
        assert abs(e.value - exact) <= e.error_bound
        assert e.error_bound < mpmath.mpf(10) ** -45


@pytest.mark.parametrize("seed", range(4))
def test_galois_embedding_respects_conjugation_and_inverses(seed):
    rng = np.random.default_rng(seed)
    n = [5, 8, 12, 15][seed]
    a = _random_element(rng, n)
    if a.is_zero():
        a = a + 1
    for j in (1, n - 1):
        direct = galois_embed(a, j, 40)
        conjugated = galois_embed(a.conj(), j, 40)
        with mpmath.workdps(50):
            gap = abs(conjugated.value - mpmath.conj(direct.value))
            assert gap <= direct.error_bound + conjugated.error_bound
    unit = galois_embed(a * a.inverse(), 1, 40)
    assert unit.value == 1
    assert unit.error_bound == 0


@pytest.mark.parametrize("seed", range(4))
def test_products_of_integral_elements_stay_integral(seed):
    rng = np.random.default_rng(seed)
    n = [5, 7, 8, 12][seed]
    a, b = (CycNum.from_poly(n, [int(k) for k in rng.integers(-5, 6, size=n)]) for _ in range(2))
    assert is_algebraic_integer(a) and is_algebraic_integer(b)
    assert is_algebraic_integer(a * b)
    assert integrality_and_positivity(a * b).is_algebraic_integer


def test_integrality_and_positivity():
    profile = integrality_and_positivity(2 + SQRT2)
    assert profile.is_algebraic_integer
    assert profile.is_totally_real
    assert profile.is_totally_positive is Positivity.POSITIVE

    profile = integrality_and_positivity(SQRT2 - 2)
    assert profile.is_algebraic_integer
    assert profile.is_totally_positive is Positivity.NOT_POSITIVE

    assert not integrality_and_positivity(zeta(4)).is_totally_real
    assert not is_algebraic_integer(SQRT2 / 2)


def test_global_dimension_of_fibonacci_is_totally_positive():
    golden = (1 + real_sqrt(5)) / 2
    assert integrality_and_positivity(2 + golden).is_totally_positive is Positivity.POSITIVE
    assert integrality_and_positivity(golden).is_totally_positive is Positivity.NOT_POSITIVE


def test_real_square_roots():
    assert real_sqrt(2) == SQRT2
    for m in (3, 5, 6, 7, 10, 15):
        root = real_sqrt(m)
        assert root * root == m
        assert root.to_complex().real > 0
        assert root.conj() == root
    assert real_sqrt(5) == CycNum.from_dict({"conductor": 5, "coords": {"1": "1", "2": "-1",
                                                                       "3": "-1", "4": "1"}})


def test_real_sqrt_needs_square_free_input():
    with pytest.raises(CyclotomicError):
        real_sqrt(12)


def test_rational_sqrt():
    assert rational_sqrt(4) == 2
    root = rational_sqrt(Fraction(9, 2))
    assert root * root == Fraction(9, 2)
    with pytest.raises(CyclotomicError):
        rational_sqrt(-3)


def test_real_sqrt_of_every_small_square_free_integer():
    for m in range(1, 31):
        if any(e > 1 for e in factorint(m).values()):
            continue
        root = real_sqrt(m)
        assert root * root == m
        assert root.to_complex().real > 0


def test_cyclotomic_sqrt_of_irrational_weights():
    golden = (1 + real_sqrt(5)) / 2
    assert cyclotomic_sqrt(2 + golden) == zeta(20) + zeta(20, 19)
    assert cyclotomic_sqrt(3 - golden) == zeta(20, 3) + zeta(20, 17)
    assert cyclotomic_sqrt(2 + SQRT2) == zeta(16) + zeta(16, 15)
    assert cyclotomic_sqrt(CycNum.from_rational(Fraction(9, 4))) == Fraction(3, 2)


def test_cyclotomic_sqrt_reports_missing_roots():
    assert cyclotomic_sqrt(1 + SQRT2) is None
    assert cyclotomic_sqrt(CycNum.from_rational(-2)) is None
    assert cyclotomic_sqrt(zeta(3)) is None


def test_normalize_conductor():
    lifted = normalize_conductor([zeta(3), zeta(4)])
    assert [x.conductor for x in lifted] == [12, 12]
    assert lifted[0] == zeta(3)
    assert [x.conductor for x in normalize_conductor([ONE, ONE])] == [1, 1]


def test_root_of_unity_exponent():
    assert root_of_unity_exponent(zeta(8, 3)) == Fraction(3, 8)
    assert root_of_unity_exponent(CycNum.from_rational(-1)) == Fraction(1, 2)
    assert root_of_unity_exponent(ONE) == 0
    assert root_of_unity_exponent((1 + zeta(4)) / SQRT2) == Fraction(1, 8)
    assert root_of_unity_exponent(CycNum.from_rational(2)) is None
    assert root_of_unity_exponent((3 + 4 * zeta(4)) / 5) is None


def test_lies_in():
    assert lies_in(SQRT2, 8)
    assert not lies_in(SQRT2, 4)
    assert lies_in(zeta(3), 6)
    assert lies_in(CycNum.from_rational(Fraction(7, 12), 12), 2)
    assert not lies_in(real_sqrt(3), 3)


def _random_element(rng, n):
    coeffs = [Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))) for _ in range(n)]
    return CycNum.from_poly(n, coeffs)


@pytest.mark.parametrize("seed", range(6))
def test_field_laws_on_random_elements(seed):
    rng = np.random.default_rng(seed)
    n = [3, 4, 5, 8, 12, 15][seed]
    a, b, c = (_random_element(rng, n) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert (a * b).conj() == a.conj() * b.conj()
    assert a - a == 0
    if not b.is_zero():
        assert (a / b) * b == a


def test_textual_encoding():
    value = CycNum.from_dict({"conductor": 3, "coords": {"1": "2/3"}})
    assert value == Fraction(2, 3) * zeta(3)
    assert CycNum.from_dict(value.to_dict()) == value
    assert str(zeta(5, 2)) == "ζ5^2"
    assert CycNum.from_dict("-1/2") == Fraction(-1, 2)


@pytest.mark.parametrize("entry", [
    {"conductor": 4, "coords": {"1": "0.5"}},
    {"conductor": 4, "coords": {"1": 0.5}},
    {"conductor": 0, "coords": {}},
    {"coords": {"0": "1"}},
    True,
])
def test_malformed_entries(entry):
    with pytest.raises(CyclotomicError):
        CycNum.from_dict(entry)


def test_conductor_ceiling():
    configure(ArithmeticSettings(conductor_ceiling=20))
    assert (zeta(4) * zeta(5)).conductor == 20
    with pytest.raises(ConductorOverflowError):
        zeta(3) * zeta(7)


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("VERLINDE_PRECISION", "50")
    monkeypatch.setenv("VERLINDE_CONDUCTOR_CEILING", "64")
    settings = ArithmeticSettings.from_env()
    assert settings.precision_digits == 50
    assert settings.conductor_ceiling == 64


def test_exact_rank_and_nullspace():
    # rows (1, √2) and (√2, 2) are dependent over Q(√2)
    matrix = to_matrix([[1, SQRT2], [SQRT2, 2]])
    assert rank(matrix) == 1
    (kernel,) = nullspace(matrix)
    assert kernel[0] + SQRT2 * kernel[1] == 0
    assert rank(to_matrix([[1, zeta(3)], [zeta(3), 1]])) == 2
