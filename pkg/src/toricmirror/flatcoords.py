"""Inverse mirror maps, correction series, and open Gromov-Witten invariants.

Inverting the mirror map q_a = qc_a * exp(f_a(qc)) gives qc_a = q_a * E_a(q)
with unit series E_a.  When exactly one toric prime divisor (ray 0) is
compact, every correction series except delta_0 vanishes and the flat
coordinate relation collapses to

    qc_a = q_a * (1 + delta_0)^{Q^a_0},

so the generating function 1 + delta_0 = sum_alpha n_{beta_0+alpha} q^alpha of
one-pointed genus-zero open disk invariants is the Q^a_0-th root of the
computed exponential factor E_a.  The relation is overdetermined (one unknown
series, l equations); extraction uses the first usable row and
:func:`verify_conjecture_relations` replays every row, including the rows with
Q^a_0 = 0 which must return E_a = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    NonUnitConstantTerm,
    NonzeroConstantTerm,
    NoUsableRow,
    UnderdeterminedExtraction,
)
from .periods import LogPeriod
from .pseries import MultiSeries, grlex_key, invert_map
from .toric import ChargeMatrix, CYStructure, Fan, compact_divisors


@dataclass(frozen=True)
class CorrectionSeries:
    """delta_i = sum_{alpha != 0} n_{beta_i + alpha} q^alpha for divisor i."""

    divisor_index: int
    delta: MultiSeries

    def __post_init__(self):
        if self.delta.constant_term != 0:
            raise NonzeroConstantTerm("a correction series has no constant term")

    @property
    def one_plus(self) -> MultiSeries:
        return self.delta + 1


@dataclass(frozen=True)
class InverseMirrorMap:
    """Components qc_a = q_a * exp_factors[a-1], each factor a unit series."""

    exp_factors: tuple[MultiSeries, ...]

    def __post_init__(self):
        if any(factor.constant_term != 1 for factor in self.exp_factors):
            raise NonUnitConstantTerm("inverse map factors must start at 1")

    @property
    def num_classes(self) -> int:
        return len(self.exp_factors)

    def component(self, a: int) -> MultiSeries:
        """The full series qc_a(q) = q_a * E_a(q), 1-based row label."""
        factor = self.exp_factors[a - 1]
        return MultiSeries.variable(a - 1, factor.num_vars, factor.cutoff) * factor


def inverse_mirror_map(periods: list[LogPeriod], cutoff: int) -> InverseMirrorMap:
    """Invert the mirror map defined by the given single-log periods.

    The round trip (forward exp factors composed with the inverse) is the
    identity to the cutoff; this is exercised by the test suite rather than
    rechecked on every call.
    """
    components = [period.f.truncate(cutoff) for period in periods]
    g = invert_map(components)
    return InverseMirrorMap(exp_factors=tuple(series.exp() for series in g))


def extract_delta(fan: Fan, cy: CYStructure, charge: ChargeMatrix,
                  inv: InverseMirrorMap) -> CorrectionSeries:
    """Isolate 1 + delta_0 = E_a^{1/Q^a_0} from the first row with Q^a_0 != 0.

    Requires the fan to have exactly one compact toric prime divisor, ray 0
    (the canonical-bundle-over-surface situation); with several compact
    divisors the stated relations do not determine the individual series and
    extraction refuses rather than guessing.
    """
    compact = compact_divisors(fan)
    if compact != {0}:
        raise UnderdeterminedExtraction(
            f"need exactly ray 0 compact, got compact divisors {sorted(compact)}")
    for a in range(1, charge.l + 1):
        exponent = charge.row(a)[0]
        if exponent != 0:
            one_plus = inv.exp_factors[a - 1].pow_rational(Fraction(1, exponent))
            return CorrectionSeries(divisor_index=0, delta=one_plus - 1)
    raise NoUsableRow("every charge row has zero entry at the compact divisor")


def open_gw_coefficients(correction: CorrectionSeries) -> dict:
    """The coefficient map alpha -> n_{beta_i + alpha} (constant term excluded)."""
    return dict(correction.delta.terms)


@dataclass(frozen=True)
class RowCheck:
    """Result of replaying the flat-coordinate relation for one charge row."""

    row: int
    ok: bool
    first_mismatch: tuple | None   # (index, computed, expected) or None

    def describe(self) -> str:
        if self.ok:
            return f"row {self.row}: consistent"
        index, computed, expected = self.first_mismatch
        return (f"row {self.row}: first mismatch at q^{list(index)}: "
                f"computed {computed}, relation gives {expected}")


@dataclass(frozen=True)
class ConjectureReport:
    rows: tuple[RowCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.ok for check in self.rows)


def verify_conjecture_relations(fan: Fan, cy: CYStructure, charge: ChargeMatrix,
                                inv: InverseMirrorMap,
                                correction: CorrectionSeries) -> ConjectureReport:
    """Recompute qc_a = q_a (1+delta_0)^{Q^a_0} for *every* row and compare.

    Rows with Q^a_0 = 0 must reproduce the identity factor exactly.  Failures
    are reported per row with the first differing coefficient in
    graded-lexicographic order; nothing raises.
    """
    checks = []
    one_plus = correction.one_plus
    for a in range(1, charge.l + 1):
        exponent = charge.row(a)[0]
        expected = one_plus.pow_rational(exponent)
        computed = inv.exp_factors[a - 1]
        if computed == expected:
            checks.append(RowCheck(row=a, ok=True, first_mismatch=None))
            continue
        indices = sorted(set(computed.terms) | set(expected.terms), key=grlex_key)
        first = next(i for i in indices
                     if computed.coefficient(i) != expected.coefficient(i))
        checks.append(RowCheck(
            row=a, ok=False,
            first_mismatch=(first, computed.coefficient(first), expected.coefficient(first))))
    return ConjectureReport(rows=tuple(checks))
