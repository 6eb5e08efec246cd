"""Exception hierarchy.

Every failure mode of the library raises a subclass of :class:`ToricMirrorError`,
so callers (in particular the command line front end) can map error classes to
exit codes without string matching.
"""


class ToricMirrorError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------------------
# Fan / polytope combinatorics
# ---------------------------------------------------------------------------

class FanError(ToricMirrorError):
    """Base class for fan validation and combinatorics errors."""


class EmptyFan(FanError):
    """The fan has no rays or no maximal cones."""


class DuplicateRay(FanError):
    """Two listed rays coincide."""


class NonPrimitiveRay(FanError):
    """A ray generator is not primitive (gcd of its entries is not 1)."""


class NonUnimodularCone(FanError):
    """A maximal cone's ray matrix has determinant different from +-1."""


class NoCYCovector(FanError):
    """No integral covector pairs to 1 with every ray generator."""


class NonConvexSupport(FanError):
    """The union of the maximal cones is not the convex hull of the rays."""


class UnsupportedFan(FanError):
    """The fan is outside the class this library handles (e.g. support not
    full-dimensional, or a toric modification produced a non-simple vertex)."""


class NotACone(FanError):
    """An index set passed as a maximal cone is not one."""


class RayCollision(FanError):
    """A ray created by the toric modification collides with an existing ray."""


class InconsistentPolytope(FanError):
    """The inequality system of a moment polytope has no solution."""


# ---------------------------------------------------------------------------
# Power series
# ---------------------------------------------------------------------------

class SeriesError(ToricMirrorError):
    """Base class for formal power series errors."""


class CutoffMismatch(SeriesError):
    """Two series with different truncation orders were combined."""


class VarCountMismatch(SeriesError):
    """Two series (or a series and an operator) disagree on variable count."""


class NonzeroConstantTerm(SeriesError):
    """An operation requiring vanishing constant term got a unit."""


class NonUnitConstantTerm(SeriesError):
    """An operation requiring constant term 1 got something else."""


# ---------------------------------------------------------------------------
# Periods / differential operators
# ---------------------------------------------------------------------------

class NegativeIndex(ToricMirrorError):
    """A multi-index with a negative entry was passed where an exponent of a
    power series was expected."""


class OperatorParseError(ToricMirrorError):
    """A differential operator literal could not be parsed."""


# ---------------------------------------------------------------------------
# Flat coordinates / open invariants
# ---------------------------------------------------------------------------

class UnderdeterminedExtraction(ToricMirrorError):
    """The correction series cannot be isolated: the fan has zero or several
    compact toric prime divisors."""


class NoUsableRow(ToricMirrorError):
    """Every charge row has vanishing entry at the compact divisor, so no
    relation constrains the correction series."""


# ---------------------------------------------------------------------------
# Disk topology
# ---------------------------------------------------------------------------

class UnknownDivisor(ToricMirrorError):
    """A divisor identifier does not exist for the given (modified) fan."""


class MissingInvariantData(ToricMirrorError):
    """The supplied invariant table does not contain a requested coefficient."""


# ---------------------------------------------------------------------------
# Reference data
# ---------------------------------------------------------------------------

class UnknownExample(ToricMirrorError):
    """No embedded reference record with the requested id."""


class CutoffTooSmall(ToricMirrorError):
    """Computed data is truncated below the requested comparison order."""


class OrderBeyondReference(ToricMirrorError):
    """The requested comparison order exceeds the embedded reference table."""


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

class FanFileError(ToricMirrorError):
    """A fan input file is malformed."""
