"""Shared fixtures: bundled example geometries and randomized generators."""

import random

import pytest

import toricmirror as tm
from toricmirror.refdata import lookup_reference
from toricmirror.toric import ChargeMatrix


@pytest.fixture(scope="session")
def examples():
    """id -> (fan, cy, charge) for every embedded reference example."""
    out = {}
    for example_id in ("kp1", "conifold", "kp2", "kp1xp1"):
        ref = lookup_reference(example_id)
        fan, cy = tm.validate_fan(ref.fan())
        out[example_id] = (fan, cy, tm.charge_matrix(fan, cy))
    return out


def random_unimodular(rng: random.Random, n: int, steps: int = 6):
    """A random GL(n, Z) matrix as a product of elementary operations."""
    mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            mat[j][k] += c * mat[i][k]
    if rng.random() < 0.5 and n > 1:
        mat[0], mat[1] = mat[1], mat[0]
    return mat


def _apply_matrix(mat, vec):
    return tuple(sum(mat[i][j] * vec[j] for j in range(len(vec)))
                 for i in range(len(mat)))


def random_cy_fan(rng: random.Random) -> tm.Fan:
    """A random smooth Calabi-Yau fan with base cone (0..n-1) listed first.

    Rank 2: rays over consecutive integers at height one (any unimodular
    triangulated segment), conjugated by a random GL(2, Z) matrix.  Rank 3:
    one of the bundled fans, conjugated by GL(3, Z), with non-base rays
    shuffled.
    """
    if rng.random() < 0.5:
        m = rng.randint(3, 7)
        x0 = rng.randint(-3, 3)
        points = [(x0 + i, 1) for i in range(m)]
        base = rng.randrange(m - 1)
        order = [base, base + 1] + [i for i in range(m) if i not in (base, base + 1)]
        tail = order[2:]
        rng.shuffle(tail)
        order = order[:2] + tail
        relabel = {old: new for new, old in enumerate(order)}
        cones = [tuple(sorted((relabel[i], relabel[i + 1]))) for i in range(m - 1)]
        cones.sort(key=lambda c: c != (0, 1))
        mat = random_unimodular(rng, 2)
        rays = [_apply_matrix(mat, points[i]) for i in order]
        return tm.Fan.make(2, rays, cones)
    ref = lookup_reference(rng.choice(["kp2", "kp1xp1", "conifold"]))
    fan = ref.fan()
    n, m = fan.rank, len(fan.rays)
    tail = list(range(n, m))
    rng.shuffle(tail)
    order = list(range(n)) + tail
    relabel = {old: new for new, old in enumerate(order)}
    mat = random_unimodular(rng, n)
    rays = [_apply_matrix(mat, fan.rays[i]) for i in order]
    cones = [tuple(sorted(relabel[i] for i in cone)) for cone in fan.max_cones]
    cones.sort(key=lambda c: c != tuple(range(n)))
    return tm.Fan.make(n, rays, cones)


def random_single_negative_column_charge(rng: random.Random) -> ChargeMatrix:
    """A charge matrix whose only negative column is column 0.

    Rows follow the standard layout: identity block on the right, row sums
    zero, and all non-leading entries non-negative, so the hypergeometric
    coefficient rule stays in its single-negative-column case.
    """
    n = rng.choice([2, 3])
    l = rng.choice([1, 2])
    m = n + l
    rows = []
    for a in range(l):
        s = rng.randint(1, 4)
        spread = [0] * (n - 1)
        for _ in range(s - 1):
            spread[rng.randrange(n - 1)] += 1
        row = [-s] + spread + [1 if i == a else 0 for i in range(l)]
        rows.append(tuple(row))
    return ChargeMatrix(l=l, entries=tuple(rows))
