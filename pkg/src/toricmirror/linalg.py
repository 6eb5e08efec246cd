"""Small exact linear algebra over the rationals.

Everything here works on lists of lists of :class:`fractions.Fraction` (or
ints) and stays exact; no floating point enters the package through this
module.  Sizes are tiny (matrices are n x n for the fan rank n), so plain
Gaussian elimination with exact pivoting is entirely adequate.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

Vector = tuple[Fraction, ...]
Matrix = list[list[Fraction]]


def _to_matrix(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def det(rows) -> Fraction:
    """Determinant of a square matrix."""
    mat = _to_matrix(rows)
    n = len(mat)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            sign = -sign
        result *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            if mat[r][col] != 0:
                factor = mat[r][col] * inv
                for c in range(col, n):
                    mat[r][c] -= factor * mat[col][c]
    return sign * result


def rank(rows) -> int:
    mat = _to_matrix(rows)
    if not mat:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, nrows) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][col]
        for i in range(nrows):
            if i != r and mat[i][col] != 0:
                factor = mat[i][col] * inv
                for c in range(col, ncols):
                    mat[i][c] -= factor * mat[r][c]
        r += 1
        if r == nrows:
            break
    return r


def solve(rows, rhs) -> Vector | None:
    """Solve a square system; return None if the matrix is singular."""
    mat = _to_matrix(rows)
    n = len(mat)
    b = [Fraction(x) for x in rhs]
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            return None
        mat[col], mat[pivot] = mat[pivot], mat[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / mat[col][col]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                factor = mat[r][col] * inv
                for c in range(col, n):
                    mat[r][c] -= factor * mat[col][c]
                b[r] -= factor * b[col]
    return tuple(b[i] / mat[i][i] for i in range(n))


def inverse(rows) -> list[Vector] | None:
    """Inverse of a square matrix, or None if singular."""
    n = len(rows)
    cols = []
    for j in range(n):
        rhs = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        col = solve(rows, rhs)
        if col is None:
            return None
        cols.append(col)
    return [tuple(cols[j][i] for j in range(n)) for i in range(n)]


def integer_matrix(rows) -> list[tuple[int, ...]]:
    """Cast a rational matrix with integral entries to int, asserting integrality."""
    out = []
    for row in rows:
        entries = []
        for x in row:
            f = Fraction(x)
            if f.denominator != 1:
                raise ValueError(f"expected integral entry, got {f}")
            entries.append(int(f))
        out.append(tuple(entries))
    return out


def primitive(vec) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (gcd(0-vector) -> error)."""
    ints = [int(x) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def kernel_vector(rows, ncols: int) -> tuple[int, ...] | None:
    """A primitive integer spanning vector of the kernel of a rank ncols-1 map.

    `rows` is a list of integer row vectors of length ncols.  Returns None if
    the kernel is not one-dimensional.
    """
    mat = _to_matrix(rows)
    nrows = len(mat)
    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, nrows) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][col]
        for i in range(nrows):
            if i != r and mat[i][col] != 0:
                factor = mat[i][col] * inv
                for c in range(ncols):
                    mat[i][c] -= factor * mat[r][c]
        pivots.append((r, col))
        r += 1
    if r != ncols - 1:
        return None
    free_col = next(c for c in range(ncols) if c not in {col for _, col in pivots})
    vec = [Fraction(0)] * ncols
    vec[free_col] = Fraction(1)
    for prow, pcol in pivots:
        vec[pcol] = -mat[prow][free_col] / mat[prow][pcol]
    denom = 1
    for x in vec:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    return primitive([x * denom for x in vec])


# ---------------------------------------------------------------------------
# Exact polyhedral computations (Fourier-Motzkin, vertex enumeration)
# ---------------------------------------------------------------------------

Constraint = tuple[tuple[Fraction, ...], Fraction]     # (c, r) meaning <c, y> >= r
Equality = tuple[tuple[Fraction, ...], Fraction]       # (c, r) meaning <c, y> == r


def _normalize_ineq(coeffs, rhs) -> Constraint:
    denom = 1
    for x in list(coeffs) + [rhs]:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in coeffs] + [int(rhs * denom)]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints[:-1]), Fraction(ints[-1])


def feasible(equalities, inequalities, nvars: int) -> bool:
    """Exact feasibility of {y : A y = a, B y >= b} by substitution plus
    Fourier-Motzkin elimination."""
    eqs = [([Fraction(x) for x in c], Fraction(r)) for c, r in equalities]
    ineqs = [([Fraction(x) for x in c], Fraction(r)) for c, r in inequalities]

    # Substitute the equalities away, one pivot variable at a time.
    while eqs:
        coeffs, rhs = eqs.pop()
        var = next((j for j in range(nvars) if coeffs[j] != 0), None)
        if var is None:
            if rhs != 0:
                return False
            continue
        pivot = coeffs[var]
        for system in (eqs, ineqs):
            for k, (c, r) in enumerate(system):
                if c[var] == 0:
                    continue
                scale = c[var] / pivot
                newc = [cj - scale * coeffs[j] for j, cj in enumerate(c)]
                newc[var] = Fraction(0)
                system[k] = (newc, r - scale * rhs)

    # Fourier-Motzkin on the remaining inequalities.
    work = {_normalize_ineq(tuple(c), r) for c, r in ineqs}
    for var in range(nvars):
        pos = [c for c in work if c[0][var] > 0]
        neg = [c for c in work if c[0][var] < 0]
        rest = {c for c in work if c[0][var] == 0}
        for cp, rp in pos:
            for cn, rn in neg:
                mp, mn = -cn[var], cp[var]
                coeffs = tuple(mp * a + mn * b for a, b in zip(cp, cn))
                rhs = mp * rp + mn * rn
                rest.add(_normalize_ineq(coeffs, rhs))
        work = rest
    return all(rhs <= 0 for _, rhs in work)


def enumerate_vertices(inequalities, nvars: int):
    """All vertices of {y : B y >= b} with their active constraint sets.

    Returns a sorted list of (point, active) pairs where `point` is a tuple of
    Fractions and `active` is the frozenset of indices of constraints that hold
    with equality at the point.
    """
    cons = [(tuple(Fraction(x) for x in c), Fraction(r)) for c, r in inequalities]
    seen: dict[Vector, frozenset[int]] = {}
    for subset in combinations(range(len(cons)), nvars):
        mat = [cons[i][0] for i in subset]
        rhs = [cons[i][1] for i in subset]
        point = solve(mat, rhs)
        if point is None:
            continue
        values = [sum(c * y for c, y in zip(coeffs, point)) for coeffs, _ in cons]
        if any(values[i] < cons[i][1] for i in range(len(cons))):
            continue
        if point not in seen:
            seen[point] = frozenset(i for i in range(len(cons)) if values[i] == cons[i][1])
    return sorted(seen.items())
