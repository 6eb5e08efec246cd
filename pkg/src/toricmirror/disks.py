"""Disk-class algebra over the torus fibration and the corrected mirror equation.

For a rank-n fan with rays v_0..v_{m-1}, the relative homotopy group of a
regular fiber is generated by basic disk classes beta_i (one per ray), the
extra classes beta'_j (j = 1..n-1) present after the toric modification that
adds the rays v_j - v_0, and sphere classes, written here in the curve basis
S_1..S_l of the charge matrix.  The operations in this module are the linear
extensions of the generating data:

    boundary:      d(beta_j) = lambda_0 + sum_i <nu_i, v_j> lambda_i,
                   d(beta'_k) = lambda_k,     d(sphere) = 0;
    Maslov index:  mu = 2 * (number of beta and beta' factors), spheres
                   contribute zero (toric Calabi-Yau spheres have Chern
                   number zero);
    intersections: beta_i . D_0 = 1 and beta_i . D_k = 0 with the boundary
                   divisors, beta'_l . D_k = delta_{lk}, beta_i . Dt_j =
                   delta_{ij} and beta'_l . Dt'_k = delta_{lk} with the toric
                   divisors (Dt), spheres pair with toric divisors through the
                   charge matrix and with boundary divisors trivially.

Fiberwise Fourier transforms of the disk-counting generating functions give
the corrected coordinates z~_i; multiplying out the two chamber charts glues
them into the mirror equation uv = g(z).  Area constants C_i stay symbolic:
the flat form of the equation eliminates them through the charge-matrix
identity, leaving Kaehler monomials q^alpha and the correction series
1 + delta_i as the only coefficients.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    MissingInvariantData,
    NotACone,
    UnknownDivisor,
    VarCountMismatch,
)
from .pseries import MultiSeries, default_variable_names, format_rational
from .toric import (
    ChargeMatrix,
    CYStructure,
    Fan,
    compact_divisors,
    cone_change_matrix,
    dual_basis_of_cone,
    pairing,
)

IntVector = tuple[int, ...]


class Chamber(enum.Enum):
    """The two components of the wall complement in the fibration base."""

    B_PLUS = "plus"
    B_MINUS = "minus"


# ---------------------------------------------------------------------------
# Disk classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskClass:
    """Integer combination sum k_i beta_i + sum k'_j beta'_j + sphere part.

    The sphere part `alpha` is written in the curve-class basis S_1..S_l.
    Classes on the unmodified manifold simply have kprime = 0.
    """

    k: IntVector
    kprime: IntVector
    alpha: IntVector

    @classmethod
    def zero(cls, fan: Fan) -> "DiskClass":
        m, n = fan.num_rays, fan.rank
        return cls((0,) * m, (0,) * (n - 1), (0,) * (m - n))

    @classmethod
    def basic(cls, fan: Fan, i: int) -> "DiskClass":
        base = cls.zero(fan)
        return cls(tuple(1 if j == i else 0 for j in range(len(base.k))),
                   base.kprime, base.alpha)

    @classmethod
    def prime(cls, fan: Fan, j: int) -> "DiskClass":
        if not 1 <= j <= fan.rank - 1:
            raise UnknownDivisor(f"no modified ray with label {j}")
        base = cls.zero(fan)
        return cls(base.k,
                   tuple(1 if idx == j - 1 else 0 for idx in range(len(base.kprime))),
                   base.alpha)

    @classmethod
    def sphere(cls, fan: Fan, alpha) -> "DiskClass":
        base = cls.zero(fan)
        alpha = tuple(int(x) for x in alpha)
        if len(alpha) != len(base.alpha):
            raise VarCountMismatch(f"sphere class {alpha} has wrong arity")
        return cls(base.k, base.kprime, alpha)

    def __add__(self, other: "DiskClass") -> "DiskClass":
        return DiskClass(
            tuple(a + b for a, b in zip(self.k, other.k)),
            tuple(a + b for a, b in zip(self.kprime, other.kprime)),
            tuple(a + b for a, b in zip(self.alpha, other.alpha)))

    def __sub__(self, other: "DiskClass") -> "DiskClass":
        return DiskClass(
            tuple(a - b for a, b in zip(self.k, other.k)),
            tuple(a - b for a, b in zip(self.kprime, other.kprime)),
            tuple(a - b for a, b in zip(self.alpha, other.alpha)))

    def scale(self, c: int) -> "DiskClass":
        return DiskClass(tuple(c * a for a in self.k),
                         tuple(c * a for a in self.kprime),
                         tuple(c * a for a in self.alpha))


@dataclass(frozen=True)
class LoopClass:
    """A fiber loop in the basis lambda_0..lambda_{n-1}."""

    coords: IntVector


def boundary_class(c: DiskClass, fan: Fan, cy: CYStructure) -> LoopClass:
    """Boundary of a disk class in the loop basis (spheres bound nothing)."""
    n = fan.rank
    coords = [0] * n
    coords[0] = sum(c.k)
    for j, mult in enumerate(c.k):
        if mult:
            for i in range(1, n):
                coords[i] += mult * pairing(cy.dual_basis[i], fan.rays[j])
    for idx, mult in enumerate(c.kprime):
        coords[idx + 1] += mult
    return LoopClass(tuple(coords))


def maslov_index(c: DiskClass) -> int:
    """Twice the intersection with the fibration's anticanonical-type divisor."""
    return 2 * (sum(c.k) + sum(c.kprime))


# ---------------------------------------------------------------------------
# Divisors and intersection numbers
# ---------------------------------------------------------------------------

class DivisorKind(enum.Enum):
    BOUNDARY = "boundary"      # D_j: preimages of the base boundary strata
    TORIC = "toric"            # Dt_i: toric prime divisors of the original fan
    TORIC_PRIME = "toric_prime"  # Dt'_j: toric divisors of the added rays


@dataclass(frozen=True)
class Divisor:
    kind: DivisorKind
    index: int

    @classmethod
    def boundary(cls, j: int) -> "Divisor":
        return cls(DivisorKind.BOUNDARY, j)

    @classmethod
    def toric(cls, i: int) -> "Divisor":
        return cls(DivisorKind.TORIC, i)

    @classmethod
    def toric_prime(cls, j: int) -> "Divisor":
        return cls(DivisorKind.TORIC_PRIME, j)


def intersection_number(c: DiskClass, divisor: Divisor, fan: Fan,
                        charge: ChargeMatrix) -> int:
    """Intersection of a disk class with a boundary, toric, or added divisor.

    Linear extension of the basic-class table in the module docstring; the
    sphere part pairs with the toric divisor of ray i by sum_a alpha_a Q^a_i
    (the divisor-curve pairing encoded in the charge matrix) and with the
    boundary divisors by zero.
    """
    n, m = fan.rank, fan.num_rays
    kind, index = divisor.kind, divisor.index
    if kind is DivisorKind.BOUNDARY:
        if not 0 <= index <= n - 1:
            raise UnknownDivisor(f"no boundary divisor D_{index}")
        if index == 0:
            return sum(c.k)
        return c.kprime[index - 1]
    if kind is DivisorKind.TORIC:
        if not 0 <= index <= m - 1:
            raise UnknownDivisor(f"no toric divisor for ray {index}")
        sphere = sum(c.alpha[a] * charge.entries[a][index] for a in range(charge.l))
        return c.k[index] + sphere
    if kind is DivisorKind.TORIC_PRIME:
        if not 1 <= index <= n - 1:
            raise UnknownDivisor(f"no added toric divisor with label {index}")
        return c.kprime[index - 1]
    raise UnknownDivisor(f"unknown divisor kind {kind}")


# ---------------------------------------------------------------------------
# Chamber-dependent open invariants
# ---------------------------------------------------------------------------

class CorrectionData:
    """Open-invariant lookup n_{beta_i + alpha} backed by correction series.

    Stores the unit series 1 + delta_i for the compact divisors; every basic
    class counts 1, non-compact divisors contribute nothing beyond that, and
    coefficients beyond a stored cutoff are reported as missing rather than
    silently zero.
    """

    def __init__(self, fan: Fan, one_plus: dict[int, MultiSeries],
                 num_classes: int, cutoff: int):
        self.fan = fan
        self.one_plus_map = dict(one_plus)
        self.num_classes = num_classes
        self.cutoff = cutoff
        self.compact = compact_divisors(fan)

    @classmethod
    def trivial(cls, fan: Fan, num_classes: int, cutoff: int) -> "CorrectionData":
        """No compact divisors: every correction series is zero."""
        return cls(fan, {}, num_classes, cutoff)

    @classmethod
    def from_delta(cls, fan: Fan, correction, num_classes: int) -> "CorrectionData":
        """Wrap an extracted CorrectionSeries (duck-typed: divisor_index, delta)."""
        series = correction.delta + 1
        return cls(fan, {correction.divisor_index: series},
                   num_classes, series.cutoff)

    def one_plus(self, i: int) -> MultiSeries:
        if i in self.one_plus_map:
            return self.one_plus_map[i]
        if i in self.compact:
            raise MissingInvariantData(
                f"ray {i} is compact but no correction series was supplied")
        return MultiSeries.one(self.num_classes, self.cutoff)

    def invariant(self, i: int, alpha) -> Fraction:
        """n_{beta_i + alpha} for a sphere class alpha in the curve basis."""
        alpha = tuple(int(x) for x in alpha)
        if any(x < 0 for x in alpha):
            return Fraction(0)
        if all(x == 0 for x in alpha):
            return Fraction(1)
        if i not in self.compact:
            return Fraction(0)
        if i not in self.one_plus_map:
            raise MissingInvariantData(
                f"no invariant table for compact divisor {i}")
        series = self.one_plus_map[i]
        if sum(alpha) > series.cutoff:
            raise MissingInvariantData(
                f"coefficient at {alpha} is beyond the stored cutoff {series.cutoff}")
        return series.coefficient(alpha)


def chamber_invariant(chamber: Chamber, c: DiskClass, fan: Fan,
                      data: CorrectionData | None = None) -> Fraction:
    """The open Gromov-Witten count n_c of a fiber over the given chamber.

    Classes of Maslov index other than two count zero for dimension reasons.
    Below the wall only the fiber-like classes beta_0 and beta'_k support a
    disk (each counting one); above the wall every basic class counts one and
    beta_j + alpha draws its count from the correction data of divisor j,
    which vanishes unless that divisor is compact.
    """
    if maslov_index(c) != 2:
        return Fraction(0)
    basics = [i for i, mult in enumerate(c.k) if mult]
    primes = [j for j, mult in enumerate(c.kprime) if mult]
    is_basic = (len(basics) == 1 and not primes and c.k[basics[0]] == 1)
    is_prime = (len(primes) == 1 and not basics and c.kprime[primes[0]] == 1)
    if not (is_basic or is_prime):
        return Fraction(0)
    alpha_zero = all(x == 0 for x in c.alpha)
    if chamber is Chamber.B_MINUS:
        if is_prime and alpha_zero:
            return Fraction(1)
        if is_basic and basics[0] == 0 and alpha_zero:
            return Fraction(1)
        return Fraction(0)
    if is_prime:
        return Fraction(1) if alpha_zero else Fraction(0)
    if alpha_zero:
        return Fraction(1)
    if data is None:
        raise MissingInvariantData("no invariant data supplied for a corrected class")
    return data.invariant(basics[0], c.alpha)


# ---------------------------------------------------------------------------
# Symbolic Laurent expressions (Fourier-transformed coordinates, gluing)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymKey:
    """Monomial in the symbolic atoms of the corrected coordinate ring.

    Exponents of: the area constants C_i (one per ray) and C'_j (added rays),
    the symbolic correction factors (1 + delta_i), the fiber coordinate z_0,
    the base coordinates z_1..z_{n-1}, and the Kaehler monomials q_a.  All
    exponents may be negative except the delta factors'.
    """

    c: IntVector
    cprime: IntVector
    delta: IntVector
    z0: int
    z: IntVector
    q: IntVector

    def __mul__(self, other: "SymKey") -> "SymKey":
        return SymKey(
            tuple(a + b for a, b in zip(self.c, other.c)),
            tuple(a + b for a, b in zip(self.cprime, other.cprime)),
            tuple(a + b for a, b in zip(self.delta, other.delta)),
            self.z0 + other.z0,
            tuple(a + b for a, b in zip(self.z, other.z)),
            tuple(a + b for a, b in zip(self.q, other.q)))

    def inverse(self) -> "SymKey":
        if any(self.delta):
            raise ValueError("correction factors are not invertible atoms")
        return SymKey(
            tuple(-a for a in self.c), tuple(-a for a in self.cprime),
            self.delta, -self.z0, tuple(-a for a in self.z),
            tuple(-a for a in self.q))


class SymExpr:
    """A finite sum of SymKey monomials with exact rational coefficients."""

    def __init__(self, sizes: tuple[int, int, int], terms=None):
        self.sizes = sizes  # (m, n, l)
        clean: dict[SymKey, Fraction] = {}
        for key, coeff in (terms or {}).items():
            value = Fraction(coeff)
            if value != 0:
                clean[key] = value
        self.terms = clean

    # atom constructors ------------------------------------------------------

    @classmethod
    def _unit_key(cls, sizes) -> SymKey:
        m, n, l = sizes
        return SymKey((0,) * m, (0,) * (n - 1), (0,) * m, 0, (0,) * (n - 1), (0,) * l)

    @classmethod
    def one(cls, sizes) -> "SymExpr":
        return cls(sizes, {cls._unit_key(sizes): Fraction(1)})

    @staticmethod
    def _bump(vector: IntVector, index: int, exponent: int) -> IntVector:
        out = list(vector)
        out[index] += exponent
        return tuple(out)

    @classmethod
    def area_constant(cls, sizes, i: int, exponent: int = 1) -> "SymExpr":
        key = cls._unit_key(sizes)
        key = SymKey(cls._bump(key.c, i, exponent), key.cprime, key.delta,
                     key.z0, key.z, key.q)
        return cls(sizes, {key: Fraction(1)})

    @classmethod
    def area_constant_prime(cls, sizes, j: int, exponent: int = 1) -> "SymExpr":
        key = cls._unit_key(sizes)
        key = SymKey(key.c, cls._bump(key.cprime, j - 1, exponent), key.delta,
                     key.z0, key.z, key.q)
        return cls(sizes, {key: Fraction(1)})

    @classmethod
    def one_plus_delta(cls, sizes, i: int) -> "SymExpr":
        key = cls._unit_key(sizes)
        key = SymKey(key.c, key.cprime, cls._bump(key.delta, i, 1),
                     key.z0, key.z, key.q)
        return cls(sizes, {key: Fraction(1)})

    @classmethod
    def fiber_coordinate(cls, sizes, exponent: int = 1) -> "SymExpr":
        key = cls._unit_key(sizes)
        key = SymKey(key.c, key.cprime, key.delta, exponent, key.z, key.q)
        return cls(sizes, {key: Fraction(1)})

    @classmethod
    def base_monomial(cls, sizes, exponents) -> "SymExpr":
        m, n, l = sizes
        key = cls._unit_key(sizes)
        key = SymKey(key.c, key.cprime, key.delta, 0, tuple(exponents), key.q)
        return cls(sizes, {key: Fraction(1)})

    @classmethod
    def kaehler_monomial(cls, sizes, exponents) -> "SymExpr":
        key = cls._unit_key(sizes)
        key = SymKey(key.c, key.cprime, key.delta, 0, key.z, tuple(exponents))
        return cls(sizes, {key: Fraction(1)})

    # arithmetic --------------------------------------------------------------

    def _check(self, other: "SymExpr") -> None:
        if self.sizes != other.sizes:
            raise VarCountMismatch("expressions belong to different fans")

    def __add__(self, other: "SymExpr") -> "SymExpr":
        self._check(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            value = terms.get(key, Fraction(0)) + coeff
            if value == 0:
                terms.pop(key, None)
            else:
                terms[key] = value
        return SymExpr(self.sizes, terms)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymExpr(self.sizes,
                           {k: c * other for k, c in self.terms.items()})
        self._check(other)
        terms: dict[SymKey, Fraction] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                key = ka * kb
                value = terms.get(key, Fraction(0)) + ca * cb
                if value == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = value
        return SymExpr(self.sizes, terms)

    __rmul__ = __mul__

    def inverse_monomial(self) -> "SymExpr":
        """Inverse of a single invertible monomial (used for u/v gluing data)."""
        if len(self.terms) != 1:
            raise ValueError("only monomials can be inverted")
        (key, coeff), = self.terms.items()
        return SymExpr(self.sizes, {key.inverse(): 1 / coeff})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymExpr):
            return NotImplemented
        return self.sizes == other.sizes and self.terms == other.terms

    __hash__ = None

    def _key_str(self, key: SymKey) -> str:
        m, n, l = self.sizes
        z_names = default_variable_names(n - 1, "z") if n > 1 else []
        q_names = default_variable_names(l, "q") if l > 0 else []
        factors = []
        for i, e in enumerate(key.c):
            if e:
                factors.append(f"C{i}" + (f"^{e}" if e != 1 else ""))
        for j, e in enumerate(key.cprime):
            if e:
                factors.append(f"C'{j + 1}" + (f"^{e}" if e != 1 else ""))
        for i, e in enumerate(key.delta):
            if e:
                factors.append(f"(1+delta{i})" + (f"^{e}" if e != 1 else ""))
        for a, e in enumerate(key.q):
            if e:
                factors.append(q_names[a] + (f"^{e}" if e != 1 else ""))
        if key.z0:
            factors.append("z0" + (f"^{key.z0}" if key.z0 != 1 else ""))
        for j, e in enumerate(key.z):
            if e:
                factors.append(z_names[j] + (f"^{e}" if e != 1 else ""))
        return "*".join(factors) if factors else "1"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        rendered = sorted(
            (self._key_str(key), coeff) for key, coeff in self.terms.items())
        chunks = []
        for body, coeff in rendered:
            magnitude = abs(coeff)
            text = body if magnitude == 1 and body != "1" else (
                format_rational(magnitude) if body == "1"
                else f"{format_rational(magnitude)}*{body}")
            if not chunks:
                chunks.append(text if coeff > 0 else f"-{text}")
            else:
                chunks.append(("+ " if coeff > 0 else "- ") + text)
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"SymExpr({self.to_str()})"


def _sizes(fan: Fan) -> tuple[int, int, int]:
    return (fan.num_rays, fan.rank, fan.num_curve_classes)


def symbolic_coefficient_sum(fan: Fan, cy: CYStructure) -> SymExpr:
    """g(z) = sum_i C_i (1 + delta_i) z^{<nu, v_i>} with everything symbolic."""
    sizes = _sizes(fan)
    n = fan.rank
    total = SymExpr(sizes)
    for i, ray in enumerate(fan.rays):
        exponents = tuple(pairing(cy.dual_basis[j], ray) for j in range(1, n))
        term = (SymExpr.area_constant(sizes, i)
                * SymExpr.one_plus_delta(sizes, i)
                * SymExpr.base_monomial(sizes, exponents))
        total = total + term
    return total


def fourier_coordinates(fan: Fan, cy: CYStructure, chamber: Chamber) -> list[SymExpr]:
    """The corrected coordinates z~_0, ..., z~_{n-1} on the given chamber.

    z~_i = C'_i z_i for i >= 1 in both chambers (only the added basic class
    meets the divisor D_i, with count one).  Across the wall z~_0 jumps from
    C_0 z_0 to z_0 * g(z): below the wall only beta_0 contributes, above it
    every basic class beta_i with its corrections does.
    """
    sizes = _sizes(fan)
    n = fan.rank
    coords = []
    if chamber is Chamber.B_MINUS:
        z0 = SymExpr.area_constant(sizes, 0) * SymExpr.fiber_coordinate(sizes)
    else:
        z0 = SymExpr.fiber_coordinate(sizes) * symbolic_coefficient_sum(fan, cy)
    coords.append(z0)
    for i in range(1, n):
        coords.append(
            SymExpr.area_constant_prime(sizes, i)
            * SymExpr.base_monomial(sizes, tuple(1 if j == i - 1 else 0
                                                 for j in range(n - 1))))
    return coords


def superpotential(fan: Fan, cy: CYStructure, chamber: Chamber,
                   modified: bool = False) -> SymExpr:
    """W = z~_0 (the disk-counting generating function after Fourier transform).

    With `modified=True` returns the superpotential of the modified manifold,
    W' = z~_0 + ... + z~_{n-1}, whose extra terms come from the added boundary
    divisors.
    """
    coords = fourier_coordinates(fan, cy, chamber)
    if not modified:
        return coords[0]
    total = coords[0]
    for expr in coords[1:]:
        total = total + expr
    return total


def gluing_expressions(fan: Fan, cy: CYStructure, g: SymExpr):
    """The chamber charts (u, v) with u v = g: per chamber a pair of monomial
    multiples of z_0^{+-1}, glued through g across the wall."""
    sizes = _sizes(fan)
    z0 = SymExpr.fiber_coordinate(sizes)
    z0_inv = z0.inverse_monomial()
    c0 = SymExpr.area_constant(sizes, 0)
    return {
        Chamber.B_MINUS: (c0 * z0, c0.inverse_monomial() * z0_inv * g),
        Chamber.B_PLUS: (z0 * g, z0_inv),
    }


# ---------------------------------------------------------------------------
# Mirror polynomials (the equation uv = G in C-form and flat form)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MirrorTerm:
    """One summand of the mirror equation: coefficient times z^{z_exponent}.

    The coefficient is (1 + delta_ray) times either the symbolic constant
    C_{c_index} (C-form) or the Kaehler monomial q^{q_exponent} (flat form).
    """

    ray: int
    z_exponent: IntVector
    c_index: int | None
    q_exponent: IntVector | None
    correction: MultiSeries


@dataclass(frozen=True)
class MirrorPolynomial:
    """G(z) = sum over rays of coefficient * z^{exponent}; term count = m."""

    form: str                       # "c" or "flat"
    base_cone: tuple[int, ...]
    terms: tuple[MirrorTerm, ...]

    @property
    def num_z_vars(self) -> int:
        return len(self.terms[0].z_exponent)

    @property
    def num_classes(self) -> int:
        return self.terms[0].correction.num_vars


@dataclass(frozen=True)
class MirrorEquation:
    polynomial: MirrorPolynomial
    gluing: dict      # Chamber -> (u, v) SymExpr pair, with u*v = g symbolically


def sphere_class_in_curve_basis(vector, charge: ChargeMatrix) -> IntVector:
    """Coordinates of a kernel vector (a curve class in the ray basis of the
    disk lattice) in the S-basis; raises if the vector is not in the span."""
    n = len(vector) - charge.l
    coords = tuple(int(vector[n + a]) for a in range(charge.l))
    reconstructed = [0] * len(vector)
    for a, s in enumerate(coords):
        for i, entry in enumerate(charge.entries[a]):
            reconstructed[i] += s * entry
    if tuple(reconstructed) != tuple(int(x) for x in vector):
        raise ValueError(f"{vector} is not an integral combination of the curve classes")
    return coords


def mirror_polynomial(fan: Fan, cy: CYStructure, charge: ChargeMatrix,
                      data: CorrectionData, form: str = "flat",
                      cone=None) -> MirrorPolynomial:
    """Build the mirror polynomial from the chart of the given maximal cone.

    C-form: uv = sum_i C_i (1 + delta_i) z^{<mu, v_i>} with mu the dual basis
    of the cone.  Flat form: rescaling z by ratios of C's and dividing by the
    leading C turns the coefficient of ray i into q^{s_i} (1 + delta_i), where
    s_i expresses beta_i - sum_j <mu_j, v_i> beta_{cone_j} in the curve basis;
    for the distinguished base cone this is exactly q_{i-n+1} for i >= n and 1
    for the base rays.
    """
    n, m = fan.rank, fan.num_rays
    if form not in ("c", "flat"):
        raise ValueError(f"unknown mirror equation form {form!r}")
    cone = tuple(cone) if cone is not None else tuple(range(n))
    duals = (cy.dual_basis if cone == tuple(range(n))
             else dual_basis_of_cone(fan, cone))
    terms = []
    for i, ray in enumerate(fan.rays):
        z_exponent = tuple(pairing(duals[j], ray) for j in range(1, n))
        correction = data.one_plus(i)
        if form == "c":
            terms.append(MirrorTerm(ray=i, z_exponent=z_exponent,
                                    c_index=i, q_exponent=None,
                                    correction=correction))
            continue
        relation = [0] * m
        relation[i] += 1
        for j in range(n):
            relation[cone[j]] -= pairing(duals[j], ray)
        q_exponent = sphere_class_in_curve_basis(relation, charge)
        terms.append(MirrorTerm(ray=i, z_exponent=z_exponent,
                                c_index=None, q_exponent=q_exponent,
                                correction=correction))
    return MirrorPolynomial(form=form, base_cone=cone, terms=tuple(terms))


def _symbolic_polynomial(fan: Fan, cy: CYStructure, poly: MirrorPolynomial) -> SymExpr:
    """The polynomial with symbolic (1+delta) atoms, for gluing identities."""
    sizes = _sizes(fan)
    total = SymExpr(sizes)
    for term in poly.terms:
        expr = (SymExpr.one_plus_delta(sizes, term.ray)
                * SymExpr.base_monomial(sizes, term.z_exponent))
        if term.c_index is not None:
            expr = expr * SymExpr.area_constant(sizes, term.c_index)
        if term.q_exponent is not None:
            expr = expr * SymExpr.kaehler_monomial(sizes, term.q_exponent)
        total = total + expr
    return total


def mirror_equation(fan: Fan, cy: CYStructure, charge: ChargeMatrix,
                    data: CorrectionData, form: str = "flat") -> MirrorEquation:
    """The corrected mirror equation uv = G(z) with gluing metadata.

    The gluing charts (u, v) multiply to the symbolic form of G in both
    chambers; their z_0-degree records which side of the wall each chart
    parameterizes.
    """
    poly = mirror_polynomial(fan, cy, charge, data, form=form)
    symbolic = _symbolic_polynomial(fan, cy, poly)
    sizes = _sizes(fan)
    z0 = SymExpr.fiber_coordinate(sizes)
    z0_inv = z0.inverse_monomial()
    if form == "c":
        gluing = gluing_expressions(fan, cy, symbolic)
    else:
        gluing = {
            Chamber.B_MINUS: (z0, z0_inv * symbolic),
            Chamber.B_PLUS: (z0 * symbolic, z0_inv),
        }
    return MirrorEquation(polynomial=poly, gluing=gluing)


# ---------------------------------------------------------------------------
# Cone changes of the mirror polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeChangeTransform:
    """Monomial coordinate change between two maximal-cone mirror charts.

    z_k = q^{q_twists[k]} * prod_j zeta_j^{matrix[j][k]} for k = 1..n-1, and
    the whole equation is multiplied by q^{q_twists[0]} * prod_j
    zeta_j^{matrix[j][0]} (the unit rescaling of u).  For the C-form the
    twists are all zero and the area constants absorb the rescaling instead.
    """

    matrix: tuple[IntVector, ...]
    q_twists: tuple[IntVector, ...] | None

    def apply_to_exponent(self, exponent: IntVector) -> IntVector:
        n = len(self.matrix)
        return tuple(
            self.matrix[j][0] + sum(self.matrix[j][k] * exponent[k - 1]
                                    for k in range(1, n))
            for j in range(1, n))

    def apply_to_q_exponent(self, q_exponent: IntVector,
                            exponent: IntVector) -> IntVector:
        twists = self.q_twists
        n = len(self.matrix)
        return tuple(
            q_exponent[a] + twists[0][a]
            + sum(exponent[k - 1] * twists[k][a] for k in range(1, n))
            for a in range(len(q_exponent)))


def cone_change_mirror(fan: Fan, charge: ChargeMatrix,
                       cone_a, cone_b, poly: MirrorPolynomial):
    """Rewrite a mirror polynomial built on cone_a in the chart of cone_b.

    Applies z_k = prod_j zeta_j^{a_jk} together with the unit rescaling
    u -> u * prod_j zeta_j^{-a_j0}; in the flat form each variable in addition
    carries a Kaehler monomial q^{t} expressing the change of disk-class
    reference frame (the classes beta_{a_k} - beta_{a_0} - sum_j a_jk
    (beta_{b_j} - beta_{b_0}) are curve classes, and t is their coordinate
    vector).  Returns (transformed polynomial, transform); the result equals
    the polynomial built directly on cone_b.
    """
    n, m = fan.rank, fan.num_rays
    cone_a = tuple(cone_a)
    cone_b = tuple(cone_b)
    if tuple(poly.base_cone) != cone_a:
        raise NotACone(f"polynomial was built on cone {poly.base_cone}, not {cone_a}")
    matrix = cone_change_matrix(fan, cone_a, cone_b)

    twists = None
    if poly.form == "flat":
        twist_list = []
        for k in range(n):
            relation = [0] * m
            if k == 0:
                relation[cone_a[0]] += 1
                relation[cone_b[0]] -= 1
            else:
                relation[cone_a[k]] += 1
                relation[cone_a[0]] -= 1
            for j in range(1, n):
                relation[cone_b[j]] -= matrix[j][k]
                relation[cone_b[0]] += matrix[j][k]
            twist_list.append(sphere_class_in_curve_basis(relation, charge))
        twists = tuple(twist_list)

    transform = ConeChangeTransform(matrix=matrix, q_twists=twists)
    new_terms = []
    for term in poly.terms:
        z_exponent = transform.apply_to_exponent(term.z_exponent)
        q_exponent = term.q_exponent
        if poly.form == "flat":
            q_exponent = transform.apply_to_q_exponent(term.q_exponent,
                                                       term.z_exponent)
        new_terms.append(MirrorTerm(
            ray=term.ray, z_exponent=z_exponent, c_index=term.c_index,
            q_exponent=q_exponent, correction=term.correction))
    return (MirrorPolynomial(form=poly.form, base_cone=cone_b,
                             terms=tuple(new_terms)),
            transform)


# ---------------------------------------------------------------------------
# Serialization of mirror polynomials
# ---------------------------------------------------------------------------

def _monomial_strings(names, exponents, latex=False):
    numerator, denominator = [], []
    for name, e in zip(names, exponents):
        if e == 0:
            continue
        target = numerator if e > 0 else denominator
        power = abs(e)
        if power == 1:
            target.append(name)
        elif latex:
            target.append(f"{name}^{{{power}}}")
        else:
            target.append(f"{name}^{power}")
    return numerator, denominator


def _term_to_str(term: MirrorTerm, z_names, q_names) -> str:
    numerator, denominator = _monomial_strings(z_names, term.z_exponent)
    coeff_parts = []
    if term.c_index is not None:
        coeff_parts.append(f"C{term.c_index}")
    if term.q_exponent is not None:
        q_num, q_den = _monomial_strings(q_names, term.q_exponent)
        coeff_parts.extend(q_num)
        denominator = q_den + denominator
    series = term.correction
    if series != MultiSeries.one(series.num_vars, series.cutoff):
        # A non-trivial correction has at least two terms (constant 1 plus the
        # invariants); parenthesize unless it stands alone as the whole term.
        if not coeff_parts and not numerator and not denominator:
            return series.to_str(q_names)
        coeff_parts.append(f"({series.to_str(q_names)})")
    pieces = coeff_parts + numerator
    if not pieces:
        pieces = ["1"]
    text = "*".join(pieces)
    if denominator:
        den = denominator[0] if len(denominator) == 1 else "(" + "*".join(denominator) + ")"
        text = f"{text}/{den}"
    return text


def mirror_polynomial_to_str(poly: MirrorPolynomial) -> str:
    """Canonical text form `uv = term + term + ...`, terms in ray order
    (constant, then the base coordinates, then the remaining rays)."""
    nz = poly.num_z_vars
    l = poly.num_classes
    z_names = default_variable_names(nz, "z") if nz else []
    q_names = default_variable_names(l, "q") if l else []
    chunks = []
    for term in poly.terms:
        rendered = _term_to_str(term, z_names, q_names)
        if not chunks:
            chunks.append(rendered)
        else:
            chunks.append(f"+ {rendered}")
    return "uv = " + " ".join(chunks)


def _term_to_latex(term: MirrorTerm, z_names, q_names) -> str:
    numerator, denominator = _monomial_strings(z_names, term.z_exponent, latex=True)
    coeff_parts = []
    if term.c_index is not None:
        coeff_parts.append(f"C_{{{term.c_index}}}")
    if term.q_exponent is not None:
        q_num, q_den = _monomial_strings(q_names, term.q_exponent, latex=True)
        coeff_parts.extend(q_num)
        if q_den:
            denominator = q_den + denominator
    series = term.correction
    if series != MultiSeries.one(series.num_vars, series.cutoff):
        body = series.to_latex(q_names)
        if not coeff_parts and not numerator and not denominator:
            return body
        coeff_parts.append(f"\\left({body}\\right)")
    pieces = coeff_parts + numerator
    text = " ".join(pieces) if pieces else "1"
    if denominator:
        text = f"\\frac{{{text}}}{{{' '.join(denominator)}}}"
    return text


def mirror_polynomial_to_latex(poly: MirrorPolynomial) -> str:
    nz, l = poly.num_z_vars, poly.num_classes
    z_names = default_variable_names(nz, "z", latex=True) if nz else []
    q_names = default_variable_names(l, "q", latex=True) if l else []
    body = " + ".join(_term_to_latex(term, z_names, q_names) for term in poly.terms)
    return f"uv = {body}"


def mirror_polynomial_to_document(poly: MirrorPolynomial) -> dict:
    return {
        "form": poly.form,
        "base_cone": list(poly.base_cone),
        "terms": [
            {
                "ray": term.ray,
                "z_exponent": list(term.z_exponent),
                **({"c_index": term.c_index} if term.c_index is not None else {}),
                **({"q_exponent": list(term.q_exponent)}
                   if term.q_exponent is not None else {}),
                "correction": term.correction.to_document(),
            }
            for term in poly.terms
        ],
    }
