"""Fan validation, charge matrices, compact divisors, modification, strata."""

import random
from fractions import Fraction as F

import pytest

import toricmirror as tm
from conftest import random_cy_fan
from toricmirror.errors import (
    DuplicateRay,
    EmptyFan,
    InconsistentPolytope,
    NoCYCovector,
    NonConvexSupport,
    NonPrimitiveRay,
    NonUnimodularCone,
    NotACone,
    RayCollision,
)
from toricmirror.toric import (
    CYStructure,
    MomentPolytope,
    check_polytope,
    default_polytope,
    pairing,
)


def kp1_fan():
    return tm.Fan.make(2, [(0, 1), (1, 1), (-1, 1)], [(0, 1), (0, 2)])


def kp2_fan():
    return tm.Fan.make(3, [(0, 0, 1), (1, 0, 1), (0, 1, 1), (-1, -1, 1)],
                       [(0, 1, 2), (0, 1, 3), (0, 2, 3)])


def conifold_fan():
    return tm.Fan.make(3, [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, -1, 1)],
                       [(0, 1, 2), (0, 1, 3)])


def c3_fan():
    return tm.Fan.make(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)])


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def test_validate_kp2_covector():
    fan, cy = tm.validate_fan(kp2_fan())
    assert cy.covector == (0, 0, 1)
    n = fan.rank
    for j in range(n):
        for k in range(n):
            assert pairing(cy.dual_basis[j], fan.rays[k]) == (1 if j == k else 0)
    for ray in fan.rays:
        assert pairing(cy.covector, ray) == 1
    assert cy.covector == tuple(sum(col) for col in zip(*cy.dual_basis))


def test_projective_plane_is_not_calabi_yau():
    fan = tm.Fan.make(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(NoCYCovector):
        tm.validate_fan(fan)


def test_non_primitive_ray_rejected():
    fan = tm.Fan.make(2, [(0, 2), (1, 1), (-1, 1)], [(0, 1), (0, 2)])
    with pytest.raises(NonPrimitiveRay):
        tm.validate_fan(fan)


def test_empty_and_duplicate_and_singular():
    with pytest.raises(EmptyFan):
        tm.validate_fan(tm.Fan.make(2, [], []))
    with pytest.raises(DuplicateRay):
        tm.validate_fan(tm.Fan.make(2, [(0, 1), (0, 1)], [(0, 1)]))
    with pytest.raises(NonUnimodularCone):
        tm.validate_fan(tm.Fan.make(2, [(1, 0), (1, 2)], [(0, 1)]))


def test_nonconvex_support_rejected():
    # Drop a maximal cone: union of cones no longer equals the ray hull.
    fan = tm.Fan.make(2, [(0, 1), (1, 1), (-1, 1)], [(0, 1)])
    with pytest.raises(NonConvexSupport):
        tm.validate_fan(fan)


def test_validate_with_cy_check_disabled():
    # The modified kp1 fan has rays at height zero, so the covector test
    # must be skipped but the combinatorial checks still run.
    fan = tm.Fan.make(2, [(0, 1), (1, 1), (-1, 1), (1, 0)],
                      [(0, 1), (0, 2), (1, 3)])
    validated, cy = tm.validate_fan(fan, check_cy=False)
    assert cy is None
    assert validated is fan


# ---------------------------------------------------------------------------
# Charge matrices
# ---------------------------------------------------------------------------

def test_charge_matrix_kp1():
    fan, cy = tm.validate_fan(kp1_fan())
    assert tm.charge_matrix(fan, cy).entries == ((-2, 1, 1),)


def test_charge_matrix_kp1xp1():
    ref = tm.lookup_reference("kp1xp1")
    fan, cy = tm.validate_fan(ref.fan())
    assert tm.charge_matrix(fan, cy).entries == ((-2, 1, 0, 1, 0), (-2, 0, 1, 0, 1))


def test_charge_matrix_kp2_solves_ray_relation():
    fan, cy = tm.validate_fan(kp2_fan())
    charge = tm.charge_matrix(fan, cy)
    assert charge.entries == ((-3, 1, 1, 1),)
    # independent check: the row really is the integer relation among rays
    row = charge.row(1)
    combo = [sum(row[i] * fan.rays[i][c] for i in range(4)) for c in range(3)]
    assert combo == [0, 0, 0]


def test_charge_rows_sum_to_zero_bundled(examples):
    for fan, cy, charge in examples.values():
        for row in charge.entries:
            assert sum(row) == 0


def test_charge_rows_sum_to_zero_random():
    rng = random.Random(20240811)
    for _ in range(50):
        fan = random_cy_fan(rng)
        fan, cy = tm.validate_fan(fan)
        charge = tm.charge_matrix(fan, cy)
        for row in charge.entries:
            assert sum(row) == 0


def test_charge_matrix_empty_when_m_equals_n():
    fan, cy = tm.validate_fan(c3_fan())
    assert tm.charge_matrix(fan, cy).entries == ()


# ---------------------------------------------------------------------------
# Compact divisors
# ---------------------------------------------------------------------------

def test_compact_divisors_examples():
    for build, expected in [(kp2_fan, {0}), (conifold_fan, set()), (kp1_fan, {0})]:
        fan, _ = tm.validate_fan(build())
        assert tm.compact_divisors(fan) == frozenset(expected)


def test_compact_divisors_kp1xp1():
    fan, _ = tm.validate_fan(tm.lookup_reference("kp1xp1").fan())
    assert tm.compact_divisors(fan) == frozenset({0})


# ---------------------------------------------------------------------------
# Toric modification
# ---------------------------------------------------------------------------

def test_modify_kp1():
    fan, cy = tm.validate_fan(kp1_fan())
    modified = tm.modify_fan(fan, cy)
    assert modified.rays == fan.rays + ((1, 0),)
    assert set(modified.max_cones) == {(0, 1), (0, 2), (1, 3)}


def test_modify_kp2():
    fan, cy = tm.validate_fan(kp2_fan())
    modified = tm.modify_fan(fan, cy)
    assert modified.rays == fan.rays + ((1, 0, 0), (0, 1, 0))
    tm.validate_fan(modified, check_cy=False)
    # original compact divisors stay compact after the modification
    assert tm.compact_divisors(modified) >= tm.compact_divisors(fan)


def test_modify_conifold():
    fan, cy = tm.validate_fan(conifold_fan())
    modified = tm.modify_fan(fan, cy)
    assert modified.rays == fan.rays + ((1, 0, 0), (0, 1, 0))
    tm.validate_fan(modified, check_cy=False)


def test_modify_all_bundled_validate(examples):
    for fan, cy, _ in examples.values():
        modified = tm.modify_fan(fan, cy)
        validated, _ = tm.validate_fan(modified, check_cy=False)
        assert validated.num_rays == fan.num_rays + fan.rank - 1
        assert tm.compact_divisors(modified) >= tm.compact_divisors(fan)


def test_modify_ray_collision():
    # Hand-built fan that already contains v_1 - v_0 as a ray.
    fan = tm.Fan.make(2, [(0, 1), (1, 1), (-1, 1), (1, 0)],
                      [(0, 1), (0, 2), (1, 3)])
    cy = CYStructure(covector=(0, 1), base_cone=0,
                     dual_basis=((-1, 1), (1, 0)))
    with pytest.raises(RayCollision):
        tm.modify_fan(fan, cy)


# ---------------------------------------------------------------------------
# Moment polytope / discriminant locus
# ---------------------------------------------------------------------------

def test_inconsistent_polytope():
    fan = tm.Fan.make(1, [(1,), (-1,)], [(0,), (1,)])
    with pytest.raises(InconsistentPolytope):
        check_polytope(fan, MomentPolytope.make([1, 1]))
    with pytest.raises(InconsistentPolytope):
        check_polytope(kp1_fan(), MomentPolytope.make([0, 0]))


def test_discriminant_kp1_two_points_plus_boundary():
    fan, cy = tm.validate_fan(kp1_fan())
    strata = tm.discriminant_locus(fan)
    kinds = [s.kind for s in strata]
    assert kinds.count("boundary") == 1
    walls = [s for s in strata if s.kind == "wall"]
    assert sorted(s.pair for s in walls) == [(0, 1), (0, 2)]
    assert all(s.span_dim == 0 for s in walls)
    assert all(s.height == 0 for s in walls)
    boundary = next(s for s in strata if s.kind == "boundary")
    assert boundary.height == F(-1)


def test_discriminant_c3_three_half_lines():
    fan, cy = tm.validate_fan(c3_fan())
    strata = tm.discriminant_locus(fan)
    walls = [s for s in strata if s.kind == "wall"]
    assert sorted(s.pair for s in walls) == [(0, 1), (0, 2), (1, 2)]
    # each is a half-line in the two-dimensional quotient
    assert all(s.span_dim == 1 for s in walls)


def test_discriminant_kp2_six_strata():
    fan, cy = tm.validate_fan(kp2_fan())
    strata = tm.discriminant_locus(fan)
    walls = [s for s in strata if s.kind == "wall"]
    assert sorted(s.pair for s in walls) == [
        (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert all(s.span_dim == 1 for s in walls)


def test_discriminant_empty_faces_omitted():
    # Tight polytope for the conifold: with c = (0,0,0,0) the face where
    # rays 2 and 3 both vanish is the whole quotient axis; perturbing the
    # constant of ray 3 far negative keeps all faces, but a face of two
    # non-adjacent rays never appears since {2,3} spans no cone.
    fan, cy = tm.validate_fan(conifold_fan())
    strata = tm.discriminant_locus(fan)
    pairs = [s.pair for s in strata if s.kind == "wall"]
    assert (2, 3) not in pairs
    assert sorted(pairs) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]


# ---------------------------------------------------------------------------
# Cone changes and relabeling
# ---------------------------------------------------------------------------

def test_cone_change_identity():
    fan, cy = tm.validate_fan(kp1_fan())
    matrix = tm.cone_change_matrix(fan, (0, 1), (0, 1))
    assert matrix == ((1, 0), (0, 1))


def test_cone_change_kp1():
    fan, cy = tm.validate_fan(kp1_fan())
    matrix = tm.cone_change_matrix(fan, (0, 1), (0, 2))
    det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    assert abs(det) == 1
    assert matrix == ((1, 0), (0, -1))


def test_cone_change_not_a_cone():
    fan, cy = tm.validate_fan(kp1_fan())
    with pytest.raises(NotACone):
        tm.cone_change_matrix(fan, (0, 1), (1, 2))


def test_cone_change_unimodular_all_pairs(examples):
    from toricmirror.linalg import det
    for fan, cy, _ in examples.values():
        for cone_a in fan.max_cones:
            for cone_b in fan.max_cones:
                matrix = tm.cone_change_matrix(fan, cone_a, cone_b)
                assert abs(det([list(r) for r in matrix])) == 1


def test_with_base_cone_relabeling():
    fan = kp2_fan()
    relabeled, order = tm.with_base_cone(fan, 2)   # cone (0, 2, 3)
    assert order == (0, 2, 3, 1)
    validated, cy = tm.validate_fan(relabeled)
    assert cy.covector == (0, 0, 1)
    assert validated.max_cones[0] == (0, 1, 2)
    charge = tm.charge_matrix(validated, cy)
    assert charge.entries == ((-3, 1, 1, 1),)


def test_default_polytope_matches_example_normalization():
    fan, _ = tm.validate_fan(kp2_fan())
    assert default_polytope(fan).constants == (F(0), F(0), F(0), F(-1))


def test_random_fans_validate_and_have_unit_pairings():
    rng = random.Random(7)
    for _ in range(25):
        fan = random_cy_fan(rng)
        fan, cy = tm.validate_fan(fan)
        assert all(pairing(cy.covector, ray) == 1 for ray in fan.rays)
