"""Fan and moment-polytope combinatorics for toric Calabi-Yau manifolds.

A toric manifold is described here by a smooth simplicial fan: primitive
integer ray generators v_0, ..., v_{m-1} in Z^n and a list of maximal cones,
each an n-element index set whose ray matrix is unimodular.  The manifold is
Calabi-Yau exactly when some covector nu pairs to 1 with every ray; all rays
then sit at height one, so the fan is the cone over a lattice polytope
triangulation and the whole combinatorics stays exact over the integers.

Conventions baked into this module (and relied on downstream):

* the distinguished base cone is the ray index tuple (0, 1, ..., n-1); input
  with a different preferred cone is relabeled via :func:`with_base_cone`;
* nu_0, ..., nu_{n-1} is the dual basis of the base cone's rays, and
  nu = nu_0 + ... + nu_{n-1} is the Calabi-Yau covector;
* curve classes S_a (a = 1..l, l = m-n) are encoded by charge vectors
  Q^a_i with Q^a_j = -<nu_j, v_{a+n-1}> for j < n and Q^a_i = delta_{i,a+n-1}
  for i >= n; each row sums to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from . import linalg
from .errors import (
    DuplicateRay,
    EmptyFan,
    InconsistentPolytope,
    NoCYCovector,
    NonConvexSupport,
    NonPrimitiveRay,
    NonUnimodularCone,
    NotACone,
    RayCollision,
    UnsupportedFan,
)

IntVector = tuple[int, ...]


@dataclass(frozen=True)
class Fan:
    """Ray generators and maximal cones of a simplicial fan in Z^rank."""

    rank: int
    rays: tuple[IntVector, ...]
    max_cones: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, rank, rays, max_cones) -> "Fan":
        return cls(
            int(rank),
            tuple(tuple(int(x) for x in ray) for ray in rays),
            tuple(tuple(int(i) for i in cone) for cone in max_cones),
        )

    @property
    def num_rays(self) -> int:
        return len(self.rays)

    @property
    def num_curve_classes(self) -> int:
        return len(self.rays) - self.rank


@dataclass(frozen=True)
class CYStructure:
    """Calabi-Yau covector and dual basis attached to a base cone.

    dual_basis rows nu_0..nu_{n-1} satisfy <nu_j, v_k> = delta_{jk} on the base
    cone's rays, and covector = sum of the rows pairs to 1 with every ray.
    """

    covector: IntVector
    base_cone: int
    dual_basis: tuple[IntVector, ...]


@dataclass(frozen=True)
class ChargeMatrix:
    """Integer relations among the rays, one row per curve class S_a."""

    l: int
    entries: tuple[IntVector, ...]

    @property
    def num_rays(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, a: int) -> IntVector:
        """Row for S_a, 1-based as in the S_a = beta_{a+n-1} - ... convention."""
        return self.entries[a - 1]


@dataclass(frozen=True)
class MomentPolytope:
    """Constants c_i of the half-space description {xi : <v_i, xi> >= c_i}."""

    constants: tuple[Fraction, ...]

    @classmethod
    def make(cls, constants) -> "MomentPolytope":
        return cls(tuple(Fraction(c) for c in constants))


def default_polytope(fan: Fan) -> MomentPolytope:
    """c_i = 0 on the base cone's rays, -1 on the rest (a generic small choice)."""
    n = fan.rank
    return MomentPolytope.make(
        [0 if i < n else -1 for i in range(fan.num_rays)])


def pairing(covector, ray) -> int:
    return sum(int(a) * int(b) for a, b in zip(covector, ray))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _check_rays(fan: Fan) -> None:
    n = fan.rank
    if n < 1:
        raise EmptyFan("rank must be at least 1")
    if not fan.rays or not fan.max_cones:
        raise EmptyFan("a fan needs at least one ray and one maximal cone")
    if fan.num_rays < n:
        raise EmptyFan(f"need at least {n} rays, got {fan.num_rays}")
    seen = {}
    for i, ray in enumerate(fan.rays):
        if len(ray) != n:
            raise NonPrimitiveRay(f"ray {i} has length {len(ray)}, expected {n}")
        if all(x == 0 for x in ray):
            raise NonPrimitiveRay(f"ray {i} is zero")
        g = 0
        for x in ray:
            g = gcd(g, abs(x))
        if g != 1:
            raise NonPrimitiveRay(f"ray {i} = {ray} is not primitive (gcd {g})")
        if ray in seen:
            raise DuplicateRay(f"rays {seen[ray]} and {i} coincide: {ray}")
        seen[ray] = i


def _check_cones(fan: Fan) -> None:
    n = fan.rank
    for cone in fan.max_cones:
        if len(set(cone)) != n:
            raise NonUnimodularCone(
                f"maximal cone {cone} must consist of {n} distinct ray indices")
        if any(not 0 <= i < fan.num_rays for i in cone):
            raise NonUnimodularCone(f"maximal cone {cone} has an invalid ray index")
        d = linalg.det([fan.rays[i] for i in cone])
        if abs(d) != 1:
            raise NonUnimodularCone(
                f"maximal cone {cone} has determinant {d}, fan is not smooth")


def _boundary_facet_normals(fan: Fan) -> list[IntVector]:
    """Outward-oriented (pairing >= 0 on all rays) normals of boundary facets.

    A facet (an (n-1)-subset of a maximal cone) interior to the support is
    shared by exactly two maximal cones lying on opposite sides; a boundary
    facet belongs to one cone and must support the whole ray set on one side,
    otherwise the union of cones is not convex.  Raises NonConvexSupport when
    the criterion fails.  The support is then exactly the cone hull of the
    rays, cut out by the returned normals.
    """
    n = fan.rank
    if n == 1:
        return []
    facets: dict[frozenset, list[tuple[int, ...]]] = {}
    for cone in fan.max_cones:
        for facet in combinations(sorted(cone), n - 1):
            facets.setdefault(frozenset(facet), []).append(cone)
    normals: dict[IntVector, None] = {}
    for facet, cones in facets.items():
        if len(cones) > 2:
            raise NonConvexSupport(
                f"facet {sorted(facet)} is shared by {len(cones)} maximal cones")
        normal = linalg.kernel_vector([fan.rays[i] for i in sorted(facet)], n)
        if normal is None:
            raise NonConvexSupport(f"facet {sorted(facet)} is degenerate")
        opposite = [next(i for i in cone if i not in facet) for cone in cones]
        signs = [pairing(normal, fan.rays[i]) for i in opposite]
        if any(s == 0 for s in signs):
            raise NonConvexSupport(f"facet {sorted(facet)} has a flat adjacent cone")
        if len(cones) == 2:
            if signs[0] * signs[1] > 0:
                raise NonConvexSupport(
                    f"maximal cones {cones} lie on the same side of facet {sorted(facet)}")
            continue
        if signs[0] < 0:
            normal = tuple(-x for x in normal)
        if any(pairing(normal, ray) < 0 for ray in fan.rays):
            raise NonConvexSupport(
                f"boundary facet {sorted(facet)} does not support the ray hull")
        normals[normal] = None
    return list(normals)


def _check_pointed(fan: Fan) -> None:
    """The support must not contain a line: some covector is positive on all rays."""
    n = fan.rank
    ineqs = [(ray, Fraction(1)) for ray in fan.rays]
    if not linalg.feasible([], ineqs, n):
        raise NonConvexSupport("the support of the fan contains a line")


def validate_fan(fan: Fan, base_cone: int = 0, check_cy: bool = True):
    """Validate a fan and compute its Calabi-Yau structure.

    Checks: primitivity and distinctness of rays, smoothness (unimodular
    maximal cones), convexity of the support (union of cones = cone hull of
    rays), pointedness, and -- unless check_cy is False -- existence of the
    integral covector pairing to 1 with every ray.

    Returns (fan, CYStructure) (the structure is None when check_cy=False).
    The base cone must be the ray tuple (0, ..., n-1); use
    :func:`with_base_cone` to relabel arbitrary input first.
    """
    _check_rays(fan)
    _check_cones(fan)
    if not 0 <= base_cone < len(fan.max_cones):
        raise NotACone(f"base cone index {base_cone} out of range")
    _boundary_facet_normals(fan)

    if not check_cy:
        _check_pointed(fan)
        return fan, None

    n = fan.rank
    cone = fan.max_cones[base_cone]
    if tuple(cone) != tuple(range(n)):
        raise NotACone(
            f"base cone must be (0..{n - 1}); relabel the fan with with_base_cone first"
        )
    ray_matrix = [fan.rays[i] for i in cone]
    inv = linalg.inverse(ray_matrix)
    dual_rows = linalg.integer_matrix(
        [[inv[i][j] for i in range(n)] for j in range(n)])
    covector = tuple(sum(col) for col in zip(*dual_rows))
    for i, ray in enumerate(fan.rays):
        if pairing(covector, ray) != 1:
            raise NoCYCovector(
                f"<nu, v_{i}> = {pairing(covector, ray)} != 1: the canonical "
                "class is not torically trivial")
    cy = CYStructure(covector=covector, base_cone=base_cone, dual_basis=tuple(dual_rows))
    return fan, cy


def with_base_cone(fan: Fan, cone_index: int):
    """Relabel rays so the chosen maximal cone becomes (0..n-1) and comes first.

    Returns (fan, permutation) where permutation[new_index] = old_index.  The
    cone's rays keep their listed order; the remaining rays keep their
    original relative order.
    """
    if not 0 <= cone_index < len(fan.max_cones):
        raise NotACone(f"cone index {cone_index} out of range")
    chosen = fan.max_cones[cone_index]
    order = list(chosen) + [i for i in range(fan.num_rays) if i not in chosen]
    new_index = {old: new for new, old in enumerate(order)}
    cones = [tuple(sorted(new_index[i] for i in cone)) for cone in fan.max_cones]
    cones.insert(0, cones.pop(cone_index))
    deduped = []
    for cone in cones:
        if cone not in deduped:
            deduped.append(cone)
    return (
        Fan(fan.rank, tuple(fan.rays[i] for i in order), tuple(deduped)),
        tuple(order),
    )


# ---------------------------------------------------------------------------
# Charge matrix
# ---------------------------------------------------------------------------

def charge_matrix(fan: Fan, cy: CYStructure) -> ChargeMatrix:
    """Charge vectors encoding S_a = beta_{a+n-1} - sum_j <nu_j, v_{a+n-1}> beta_j."""
    n = fan.rank
    m = fan.num_rays
    rows = []
    for a in range(1, m - n + 1):
        ray = fan.rays[a + n - 1]
        row = [-pairing(nu, ray) for nu in cy.dual_basis]
        row += [1 if i == a + n - 1 else 0 for i in range(n, m)]
        assert sum(row) == 0, "charge row must sum to zero on a Calabi-Yau fan"
        rows.append(tuple(row))
    return ChargeMatrix(l=m - n, entries=tuple(rows))


# ---------------------------------------------------------------------------
# Compact divisors
# ---------------------------------------------------------------------------

def compact_divisors(fan: Fan) -> frozenset[int]:
    """Indices of rays interior to the support (= compact toric prime divisors).

    For a convex-support fan, the toric divisor of a ray is compact exactly
    when the ray's star is complete, i.e. the ray lies in the topological
    interior of the support.
    """
    n = fan.rank
    if linalg.rank(list(fan.rays)) < n:
        raise UnsupportedFan("support is not full-dimensional")
    if n == 1:
        # Support is a half line; its interior contains every (primitive) ray.
        return frozenset(range(fan.num_rays))
    normals = _boundary_facet_normals(fan)
    return frozenset(
        i for i, ray in enumerate(fan.rays)
        if all(pairing(normal, ray) > 0 for normal in normals))


# ---------------------------------------------------------------------------
# Toric modification
# ---------------------------------------------------------------------------

def _polytope_constraints(fan: Fan, polytope: MomentPolytope):
    return [(tuple(Fraction(x) for x in ray), Fraction(c))
            for ray, c in zip(fan.rays, polytope.constants)]


def check_polytope(fan: Fan, polytope: MomentPolytope) -> None:
    if len(polytope.constants) != fan.num_rays:
        raise InconsistentPolytope(
            f"{len(polytope.constants)} constants for {fan.num_rays} rays")
    if not linalg.feasible([], _polytope_constraints(fan, polytope), fan.rank):
        raise InconsistentPolytope("the moment polytope inequality system has no solution")


def modify_fan(fan: Fan, cy: CYStructure, polytope: MomentPolytope | None = None) -> Fan:
    """Add the rays v'_j = v_j - v_0 (j = 1..n-1) and recompute maximal cones.

    The new fan is the inward normal fan of the moment polytope truncated by
    <v'_j, xi> >= -K_j.  The truncation constants K_j are chosen large enough
    that every original facet survives, with a small per-direction
    perturbation so all vertices of the truncated polytope are simple; the
    resulting fan does not depend on K beyond that choice of resolution at
    non-generic corners.  New ray indices follow the original m.
    """
    n = fan.rank
    m = fan.num_rays
    if n == 1:
        return fan
    polytope = polytope or default_polytope(fan)
    check_polytope(fan, polytope)

    v0 = fan.rays[0]
    primed = []
    for j in range(1, n):
        vp = tuple(a - b for a, b in zip(fan.rays[j], v0))
        if vp in fan.rays or vp in primed:
            raise RayCollision(f"modified ray v_{j} - v_0 = {vp} already present")
        primed.append(vp)

    base_constraints = _polytope_constraints(fan, polytope)
    vertices = linalg.enumerate_vertices(base_constraints, n)
    if not vertices:
        raise UnsupportedFan("moment polytope has no vertex; cannot truncate")
    k_base = Fraction(1) + max(
        max((-sum(Fraction(a) * x for a, x in zip(vp, point)) for point, _ in vertices),
            default=Fraction(0))
        for vp in primed)

    for attempt, step in enumerate((Fraction(1, 7), Fraction(1, 11), Fraction(3, 13),
                                    Fraction(5, 17), Fraction(7, 19))):
        scale = k_base * (1 + attempt)
        constraints = list(base_constraints)
        for j, vp in enumerate(primed, start=1):
            constraints.append(
                (tuple(Fraction(x) for x in vp), -(scale + j * step)))
        vertices = linalg.enumerate_vertices(constraints, n)
        if any(len(active) != n for _, active in vertices):
            continue
        used = set()
        for _, active in vertices:
            used |= active
        if used != set(range(len(constraints))):
            continue  # some facet became redundant; enlarge the truncation
        cones = sorted({tuple(sorted(active)) for _, active in vertices})
        modified = Fan(n, fan.rays + tuple(primed), tuple(cones))
        validate_fan(modified, check_cy=False)
        return modified
    raise UnsupportedFan(
        "could not find a simple truncation of the moment polytope")


# ---------------------------------------------------------------------------
# Discriminant locus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscriminantStratum:
    """One stratum of the discriminant locus of the torus fibration.

    Wall strata live in the quotient of the moment hyperplane coordinates by
    the Calabi-Yau covector direction; the quotient is coordinatized by
    y_k = <v_k - v_0, xi> for k = 1..n-1.  `equalities` and `inequalities` are
    (coeffs, rhs) pairs meaning <coeffs, y> == rhs resp. >= rhs.  The boundary
    stratum is the whole quotient at the base height -K2^2 (K2 = 1 here).
    """

    kind: str                      # "wall" or "boundary"
    pair: tuple[int, int] | None   # the two-ray index set, for wall strata
    height: Fraction
    equalities: tuple
    inequalities: tuple
    span_dim: int


def discriminant_locus(fan: Fan,
                       polytope: MomentPolytope | None = None):
    """Strata of the discriminant locus: the base boundary plus, for every
    2-element subset I of a maximal cone, the image of the polytope face
    {<v_i, xi> = c_i, i in I} in the covector quotient.  Empty faces are
    omitted."""
    n = fan.rank
    polytope = polytope or default_polytope(fan)
    check_polytope(fan, polytope)
    c = polytope.constants

    strata = [DiscriminantStratum(
        kind="boundary", pair=None, height=Fraction(-1),
        equalities=(), inequalities=(), span_dim=n - 1)]
    if n < 2:
        return strata

    primed = [tuple(a - b for a, b in zip(fan.rays[j], fan.rays[0]))
              for j in range(1, n)]

    pairs = sorted({pair for cone in fan.max_cones
                    for pair in combinations(sorted(cone), 2)})
    for i, j in pairs:
        # Lift the quotient coordinates y back to the slice <v_i, xi> = c_i:
        # xi(y) solves rows (v_i, v'_1 .. v'_{n-1}) * xi = (c_i, y).
        rows = [fan.rays[i]] + primed
        lift = linalg.inverse(rows)
        assert lift is not None, "v_i and the primed rays always form a basis"

        def affine_form(ray, base=c[i], lift=lift):
            # <ray, xi(y)> as (coefficients in y, constant): xi(y) = lift @ (base, y).
            const = sum(Fraction(ray[r]) * lift[r][0] * base for r in range(n))
            coeffs = tuple(
                sum(Fraction(ray[r]) * lift[r][k + 1] for r in range(n))
                for k in range(n - 1))
            return coeffs, const

        coeffs_j, const_j = affine_form(fan.rays[j])
        equalities = [(coeffs_j, c[j] - const_j)]
        inequalities = []
        for k, ray in enumerate(fan.rays):
            if k in (i, j):
                continue
            coeffs_k, const_k = affine_form(ray)
            inequalities.append((coeffs_k, c[k] - const_k))
        if not linalg.feasible(equalities, inequalities, n - 1):
            continue
        eq_rank = linalg.rank([list(cf) for cf, _ in equalities])
        strata.append(DiscriminantStratum(
            kind="wall", pair=(i, j), height=Fraction(0),
            equalities=tuple(equalities), inequalities=tuple(inequalities),
            span_dim=(n - 1) - eq_rank))
    return strata


# ---------------------------------------------------------------------------
# Cone changes
# ---------------------------------------------------------------------------

def _find_cone(fan: Fan, cone) -> tuple[int, ...]:
    cone = tuple(int(i) for i in cone)
    for listed in fan.max_cones:
        if set(listed) == set(cone):
            return cone
    raise NotACone(f"{cone} is not a maximal cone of the fan")


def dual_basis_of_cone(fan: Fan, cone) -> tuple[IntVector, ...]:
    """Rows mu_0..mu_{n-1} with <mu_j, v_{cone[k]}> = delta_{jk} (order as given)."""
    cone = _find_cone(fan, cone)
    inv = linalg.inverse([fan.rays[i] for i in cone])
    if inv is None:
        raise NotACone(f"{cone} does not span")
    n = fan.rank
    return tuple(
        tuple(int(Fraction(inv[i][j])) for i in range(n)) for j in range(n))


def cone_change_matrix(fan: Fan, cone_a, cone_b):
    """The unimodular matrix a relating the dual bases of two maximal cones.

    With nu_j the dual basis of cone_a and mu_j that of cone_b, both bases
    share nu = sum_j nu_j = sum_j mu_j, and the matrix is defined by row 0
    fixing nu and mu_j = a_{j,0} nu + sum_{k>=1} a_{j,k} nu_k for j >= 1.
    Its determinant is +-1.
    """
    n = fan.rank
    nus = dual_basis_of_cone(fan, cone_a)
    mus = dual_basis_of_cone(fan, cone_b)
    covector = tuple(sum(col) for col in zip(*nus))
    assert covector == tuple(sum(col) for col in zip(*mus)), \
        "both cones must induce the same Calabi-Yau covector"
    basis_rows = [covector] + [nus[k] for k in range(1, n)]
    matrix = [tuple([1] + [0] * (n - 1))]
    for j in range(1, n):
        # Solve mu_j = x_0 * nu + sum_k x_k * nu_k for integers x.
        sol = linalg.solve([[basis_rows[r][c] for r in range(n)] for c in range(n)],
                           list(mus[j]))
        assert sol is not None
        matrix.append(tuple(int(Fraction(x)) for x in sol))
    d = linalg.det(matrix)
    assert abs(d) == 1, f"cone change must be unimodular, got det {d}"
    return tuple(matrix)
