"""Embedded reference tables: lookup, internal consistency, and the comparator."""

import dataclasses
from fractions import Fraction as F

import pytest

import toricmirror as tm
from toricmirror.errors import CutoffTooSmall, OrderBeyondReference, UnknownExample
from toricmirror.pseries import MultiSeries
from toricmirror.refdata import (
    check_internal_consistency,
    lookup_reference,
    reference_ids,
    verify_against_reference,
)


def computed(example_id, cutoff, examples):
    fan, cy, charge = examples[example_id]
    periods = tm.single_log_periods(charge, cutoff)
    inverse = tm.inverse_mirror_map(periods, cutoff)
    if tm.compact_divisors(fan):
        delta = tm.extract_delta(fan, cy, charge, inverse).delta
    else:
        delta = MultiSeries.zero(charge.l, cutoff)
    return delta, inverse


# ---------------------------------------------------------------------------
# Lookup
# ---------------------------------------------------------------------------

def test_lookup_known_values():
    kp2 = lookup_reference("kp2")
    assert [kp2.delta_table[(k,)] for k in range(1, 7)] == \
        [-2, 5, -32, 286, -3038, 35870]
    kp1xp1 = lookup_reference("kp1xp1")
    assert kp1xp1.delta_table[(3, 2)] == 135
    assert kp1xp1.delta_table[(2, 3)] == 135
    assert kp1xp1.f_table[(5, 0)] == F(252, 5)


def test_lookup_unknown_example():
    with pytest.raises(UnknownExample):
        lookup_reference("kp9")


def test_reference_ids():
    assert reference_ids() == ["conifold", "kp1", "kp1xp1", "kp2"]


def test_reference_fans_validate_and_match_charge_rows():
    for example_id in reference_ids():
        ref = lookup_reference(example_id)
        fan, cy = tm.validate_fan(ref.fan())
        assert tm.charge_matrix(fan, cy).entries == ref.charge_rows


def test_internal_consistency_of_records():
    for example_id in reference_ids():
        assert check_internal_consistency(lookup_reference(example_id)) == []


def test_structured_export():
    import json
    for example_id in reference_ids():
        doc = lookup_reference(example_id).to_document()
        json.dumps(doc)       # must be serializable as-is
        assert doc["id"] == example_id
    kp2 = lookup_reference("kp2").to_document()
    assert {"index": [3], "value": "-32"} in kp2["delta_table"]
    assert kp2["charge_rows"] == [[-3, 1, 1, 1]]


# ---------------------------------------------------------------------------
# Comparator
# ---------------------------------------------------------------------------

def test_verify_kp2_order_six(examples):
    delta, inverse = computed("kp2", 6, examples)
    report = verify_against_reference("kp2", delta, inverse, 6)
    assert report.passed
    assert len(report.entries) == 12      # six delta + six inverse coefficients


def test_verify_kp1_order_twenty(examples):
    delta, inverse = computed("kp1", 20, examples)
    report = verify_against_reference("kp1", delta, inverse, 20)
    assert report.passed
    # independent binomial check of the derived closed form q(1+q)^-2
    component = inverse.component(1)
    for k in range(1, 21):
        assert component.coefficient((k,)) == F((-1) ** (k + 1) * k)


def test_verify_kp1xp1_order_five(examples):
    delta, inverse = computed("kp1xp1", 5, examples)
    report = verify_against_reference("kp1xp1", delta, inverse, 5)
    assert report.passed


def test_verify_conifold(examples):
    delta, inverse = computed("conifold", 6, examples)
    report = verify_against_reference("conifold", delta, inverse, 6)
    assert report.passed


def test_verify_cutoff_too_small(examples):
    delta, inverse = computed("kp2", 3, examples)
    with pytest.raises(CutoffTooSmall):
        verify_against_reference("kp2", delta, inverse, 6)


def test_verify_order_beyond_reference(examples):
    delta, inverse = computed("kp2", 8, examples)
    with pytest.raises(OrderBeyondReference):
        verify_against_reference("kp2", delta, inverse, 7)


def test_mutated_reference_is_detected(examples):
    delta, inverse = computed("kp2", 6, examples)
    ref = lookup_reference("kp2")
    for index in ref.delta_table:
        table = dict(ref.delta_table)
        table[index] = table[index] + 1
        mutated = dataclasses.replace(ref, delta_table=table)
        report = verify_against_reference(mutated, delta, inverse, 6)
        assert not report.passed
        assert any(entry.kind == "delta" and entry.index == index
                   for entry in report.mismatches)


def test_mutated_inverse_table_is_detected(examples):
    delta, inverse = computed("kp1xp1", 5, examples)
    ref = lookup_reference("kp1xp1")
    tables = [dict(t) for t in ref.inverse_tables]
    tables[1][(2, 3)] = tables[1][(2, 3)] - 7
    mutated = dataclasses.replace(ref, inverse_tables=tuple(tables))
    report = verify_against_reference(mutated, delta, inverse, 5)
    assert not report.passed
    (entry,) = [e for e in report.mismatches]
    assert entry.kind == "inverse" and entry.row == 2 and entry.index == (2, 3)
