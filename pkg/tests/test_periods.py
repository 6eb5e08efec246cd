"""Gamma-series coefficients, single-log periods, and operator annihilation."""

import random
from fractions import Fraction as F
from math import factorial

import pytest

import toricmirror as tm
from conftest import random_single_negative_column_charge
from toricmirror.errors import NegativeIndex, OperatorParseError, VarCountMismatch
from toricmirror.periods import (
    DiffOperator,
    euler_derivative,
    gamma_log_coefficient,
    log_solution,
    single_log_periods,
)
from toricmirror.pseries import LogSeries, MultiSeries, indices_up_to
from toricmirror.toric import ChargeMatrix


# ---------------------------------------------------------------------------
# Coefficient rule
# ---------------------------------------------------------------------------

def test_gamma_coefficient_degree_three_geometry():
    charge = ChargeMatrix(l=1, entries=((-3, 1, 1, 1),))
    assert gamma_log_coefficient(charge, (1,), 1) == -6


def test_gamma_coefficient_two_row_geometry():
    charge = ChargeMatrix(l=2, entries=((-2, 1, 0, 1, 0), (-2, 0, 1, 0, 1)))
    assert gamma_log_coefficient(charge, (1, 1), 1) == 12
    assert gamma_log_coefficient(charge, (1, 1), 2) == 12


def test_gamma_coefficient_two_negative_columns_vanishes():
    charge = ChargeMatrix(l=1, entries=((-1, -1, 1, 1),))
    for k in range(1, 8):
        assert gamma_log_coefficient(charge, (k,), 1) == 0


def test_gamma_coefficient_zero_index_vanishes(examples):
    # The degree-zero digamma contributions cancel because rows sum to zero.
    for _, _, charge in examples.values():
        for a in range(1, charge.l + 1):
            assert gamma_log_coefficient(charge, (0,) * charge.l, a) == 0


def test_gamma_coefficient_negative_index_raises():
    charge = ChargeMatrix(l=1, entries=((-2, 1, 1),))
    with pytest.raises(NegativeIndex):
        gamma_log_coefficient(charge, (-1,), 1)
    with pytest.raises(VarCountMismatch):
        gamma_log_coefficient(charge, (1, 1), 1)


def test_degree_two_closed_form():
    # Single negative column of weight two: f_d = 2 (2d-1)! / (d!)^2.
    charge = ChargeMatrix(l=1, entries=((-2, 1, 1),))
    for d in range(1, 11):
        expected = F(2 * factorial(2 * d - 1), factorial(d) ** 2)
        assert gamma_log_coefficient(charge, (d,), 1) == expected


# ---------------------------------------------------------------------------
# Period series
# ---------------------------------------------------------------------------

def test_single_log_kp2():
    charge = ChargeMatrix(l=1, entries=((-3, 1, 1, 1),))
    (period,) = single_log_periods(charge, 3)
    assert period.f == MultiSeries(1, 3, {(1,): -6, (2,): 45, (3,): -560})


def test_single_log_kp1xp1():
    charge = ChargeMatrix(l=2, entries=((-2, 1, 0, 1, 0), (-2, 0, 1, 0, 1)))
    periods = single_log_periods(charge, 2)
    expected = MultiSeries(2, 2, {(1, 0): 2, (0, 1): 2, (2, 0): 3,
                                  (1, 1): 12, (0, 2): 3})
    assert periods[0].f == expected
    assert periods[1].f == expected


def test_single_log_conifold_vanishes():
    charge = ChargeMatrix(l=1, entries=((-1, -1, 1, 1),))
    (period,) = single_log_periods(charge, 9)
    assert period.f.is_zero()


def test_mirror_map_series():
    charge = ChargeMatrix(l=1, entries=((-1, -1, 1, 1),))
    factors = tm.mirror_map_series(single_log_periods(charge, 6))
    assert factors == [MultiSeries.one(1, 6)]

    kp2 = ChargeMatrix(l=1, entries=((-3, 1, 1, 1),))
    (factor,) = tm.mirror_map_series(single_log_periods(kp2, 3))
    assert factor == MultiSeries(1, 3, {(0,): 1, (1,): -6, (2,): 63, (3,): -866})


def test_row_order_independence():
    charge = ChargeMatrix(l=2, entries=((-2, 1, 0, 1, 0), (-2, 0, 1, 0, 1)))
    swapped = ChargeMatrix(l=2, entries=(
        (-2, 0, 1, 0, 1), (-2, 1, 0, 1, 0)))
    original = single_log_periods(charge, 4)
    permuted = single_log_periods(swapped, 4)
    # Swapping rows relabels the variables: f'_1(x, y) = f_2(y, x).
    for a, b in ((0, 1), (1, 0)):
        relabeled = {(j, i): c for (i, j), c in permuted[a].f.terms.items()}
        assert original[b].f == MultiSeries(2, 4, relabeled)


# ---------------------------------------------------------------------------
# Differential operators
# ---------------------------------------------------------------------------

def test_euler_on_pure_logarithm():
    # theta applied to -log(q) is the constant -1.
    minus_log = LogSeries(MultiSeries.zero(1, 5),
                          [MultiSeries.constant(-1, 1, 5)])
    theta = DiffOperator.parse("T1", 1)
    result = theta.apply(minus_log)
    assert result.plain == MultiSeries.constant(-1, 1, 5)
    assert result.log_parts[0].is_zero()


def test_operator_parser_rejects_garbage():
    with pytest.raises(OperatorParseError):
        DiffOperator.parse("T1 +", 1)
    with pytest.raises(OperatorParseError):
        DiffOperator.parse("(1 - q1", 1)
    with pytest.raises(OperatorParseError):
        DiffOperator.parse("x1^2", 1)
    with pytest.raises(OperatorParseError):
        DiffOperator.parse("q", 2)       # ambiguous bare name
    with pytest.raises(OperatorParseError):
        DiffOperator.parse("T3", 2)      # out of range


def test_operator_parser_expansion():
    op = DiffOperator.parse("3*q1*T1*(3*T1 + 1)*(3*T1 + 2)", 1)
    # 3 q (9 T^3 + 9 T^2 + 2 T) expanded
    assert set(op.terms) == {
        (F(27), (1,), (3,)), (F(27), (1,), (2,)), (F(6), (1,), (1,))}


def test_operator_division_by_constant():
    op = DiffOperator.parse("T1^2/2 - q1/2", 1)
    assert set(op.terms) == {(F(1, 2), (0,), (2,)), (F(-1, 2), (1,), (0,))}


def test_conifold_operator_annihilates_pure_log():
    charge = ChargeMatrix(l=1, entries=((-1, -1, 1, 1),))
    (period,) = single_log_periods(charge, 8)
    phi = log_solution(period, 1, 8)
    op = DiffOperator.parse("(1 - q1)*T1^2", 1)
    assert op.apply(phi).is_zero()


def test_degree_three_operator_annihilates_period():
    charge = ChargeMatrix(l=1, entries=((-3, 1, 1, 1),))
    (period,) = single_log_periods(charge, 8)
    phi = log_solution(period, 1, 8)
    op = DiffOperator.parse("T1^3 + 3*q1*T1*(3*T1 + 1)*(3*T1 + 2)", 1)
    assert op.apply(phi).is_zero()


def test_two_variable_operators_annihilate_periods():
    charge = ChargeMatrix(l=2, entries=((-2, 1, 0, 1, 0), (-2, 0, 1, 0, 1)))
    periods = single_log_periods(charge, 6)
    ops = [
        DiffOperator.parse("T1^2 - 2*q1*(T1 + T2)*(1 + 2*T1 + 2*T2)", 2),
        DiffOperator.parse("T2^2 - 2*q2*(T1 + T2)*(1 + 2*T1 + 2*T2)", 2),
    ]
    for period in periods:
        phi = log_solution(period, 2, 6)
        for op in ops:
            assert op.apply(phi).is_zero()


def test_operator_application_shifts_and_truncates():
    series = MultiSeries(1, 2, {(2,): 7})
    phi = LogSeries(series, [MultiSeries.zero(1, 2)])
    op = DiffOperator.parse("q1", 1)
    assert op.apply(phi).is_zero()        # q * q^2 falls beyond cutoff 2


def test_euler_derivative_weights_by_exponent():
    series = MultiSeries(2, 4, {(2, 1): F(1, 3), (0, 2): 5})
    assert euler_derivative(series, 0) == MultiSeries(2, 4, {(2, 1): F(2, 3)})
    assert euler_derivative(series, 1) == MultiSeries(
        2, 4, {(2, 1): F(1, 3), (0, 2): 10})


def test_random_single_negative_column_periods_have_integer_leading_terms():
    rng = random.Random(99)
    for _ in range(10):
        charge = random_single_negative_column_charge(rng)
        periods = single_log_periods(charge, 4)
        for period in periods:
            assert period.f.constant_term == 0
            for d in indices_up_to(charge.l, 4):
                coeff = gamma_log_coefficient(charge, d, period.index)
                assert period.f.coefficient(d) == (coeff if sum(d) else 0)
