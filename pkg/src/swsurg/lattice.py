"""Exact integer lattice algebra.

Everything in this module is arbitrary-precision integer arithmetic,
with exact rationals where diagonalization demands them. No floating
point is used anywhere.

The central object is a free finitely generated lattice with a symmetric
bilinear form, given by its Gram matrix in a fixed basis. On top of the
pairing live the classical tools: characteristic vectors (integral lifts
of the mod-2 square map), Smith normal form with its unimodular
transforms, divisibility and primitivity of vectors, saturated
orthogonal complements, and exact signatures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InternalConsistencyError, LatticeError

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# vectors and plain integer matrices


def as_vector(coords: Sequence[int]) -> Vector:
    """Freeze a coordinate sequence into a tuple of Python ints."""
    out = []
    for c in coords:
        if isinstance(c, bool) or not isinstance(c, int):
            raise LatticeError(f"vector coordinate {c!r} is not an integer")
        out.append(int(c))
    return tuple(out)


def zero_vector(n: int) -> Vector:
    return (0,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(n))


def vadd(x: Sequence[int], y: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(x, y, strict=True))


def vsub(x: Sequence[int], y: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(x, y, strict=True))


def vneg(x: Sequence[int]) -> Vector:
    return tuple(-a for a in x)


def vscale(c: int, x: Sequence[int]) -> Vector:
    return tuple(c * a for a in x)


def freeze_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(as_vector(r) for r in rows)


def mat_identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    if a and b and len(a[0]) != len(b):
        raise LatticeError(f"matrix product shape mismatch: {len(a[0])} vs {len(b)}")
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)]
            for i in range(len(a))]


def mat_vec(a: Sequence[Sequence[int]], x: Sequence[int]) -> Vector:
    return tuple(sum(row[k] * x[k] for k in range(len(x))) for row in a)


def transpose(m: Sequence[Sequence[int]]) -> list[list[int]]:
    if not m:
        return []
    return [[m[i][j] for i in range(len(m))] for j in range(len(m[0]))]


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class IntegerLattice:
    """A symmetric bilinear form on Z^rank, given by its Gram matrix."""

    gram: Matrix

    def __post_init__(self):
        gram = freeze_matrix(self.gram)
        n = len(gram)
        for row in gram:
            if len(row) != n:
                raise LatticeError(f"Gram matrix is not square: {len(row)} vs {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(
                        f"Gram matrix is not symmetric at ({i},{j}): "
                        f"{gram[i][j]} vs {gram[j][i]}")
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def basis(self) -> list[Vector]:
        return [unit_vector(self.rank, i) for i in range(self.rank)]


def diagonal_lattice(entries: Sequence[int]) -> IntegerLattice:
    n = len(entries)
    return IntegerLattice(tuple(
        tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))


def hyperbolic(copies: int = 1) -> IntegerLattice:
    """Orthogonal sum of `copies` hyperbolic planes [[0,1],[1,0]]."""
    lats = [IntegerLattice(((0, 1), (1, 0)))] * copies
    return direct_sum(*lats) if copies != 1 else lats[0]


# Even unimodular positive definite rank-8 form: the Dynkin-graph Gram
# matrix with a chain 0..6 and node 7 attached to node 4.
_E8_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7))


def e8(negative: bool = False) -> IntegerLattice:
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 2
    for i, j in _E8_EDGES:
        g[i][j] = g[j][i] = -1
    if negative:
        g = [[-x for x in row] for row in g]
    return IntegerLattice(freeze_matrix(g))


def direct_sum(*lattices: IntegerLattice) -> IntegerLattice:
    total = sum(lat.rank for lat in lattices)
    g = [[0] * total for _ in range(total)]
    offset = 0
    for lat in lattices:
        for i in range(lat.rank):
            for j in range(lat.rank):
                g[offset + i][offset + j] = lat.gram[i][j]
        offset += lat.rank
    return IntegerLattice(freeze_matrix(g))


def _check_vector(lattice: IntegerLattice, x: Sequence[int]) -> Vector:
    v = as_vector(x)
    if len(v) != lattice.rank:
        raise LatticeError(
            f"vector length {len(v)} does not match lattice rank {lattice.rank}")
    return v


def gram_times(lattice: IntegerLattice, x: Sequence[int]) -> Vector:
    """The column G.x, i.e. the linear functional pair(., x) in the dual basis."""
    v = _check_vector(lattice, x)
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in lattice.gram)


def pair(lattice: IntegerLattice, x: Sequence[int], y: Sequence[int]) -> int:
    """Evaluate the bilinear form: x^T . G . y, exactly."""
    xv = _check_vector(lattice, x)
    gy = gram_times(lattice, y)
    return sum(a * b for a, b in zip(xv, gy))


def is_characteristic(lattice: IntegerLattice, k: Sequence[int]) -> bool:
    """Wu criterion: pair(k, x) = pair(x, x) mod 2 for every x.

    Checking basis vectors suffices: both sides are additive mod 2, the
    square map because (x+y).(x+y) = x.x + y.y + 2 x.y.
    """
    gk = gram_times(lattice, k)
    return all((gk[i] - lattice.gram[i][i]) % 2 == 0 for i in range(lattice.rank))


def divisibility(lattice: IntegerLattice, s: Sequence[int]) -> int:
    """Minimal positive pairing of s against the lattice; 0 if s pairs to zero.

    Equals the gcd of the pairings with the basis vectors.
    """
    gs = gram_times(lattice, s)
    return math.gcd(*gs) if gs else 0


def is_primitive(lattice: IntegerLattice, s: Sequence[int]) -> bool:
    """True iff the coordinate gcd of s is 1 (s is indivisible)."""
    v = _check_vector(lattice, s)
    if not any(v):
        raise LatticeError("zero vector has no primitivity")
    return math.gcd(*v) == 1


def characteristic_vector(lattice: IntegerLattice) -> Vector:
    """Produce one characteristic vector, by solving G.k = diag(G) over GF(2).

    The full characteristic coset is then k + 2 Z^rank. Raises if the
    mod-2 system is inconsistent (possible only for degenerate forms).
    """
    n = lattice.rank
    rows = [[lattice.gram[i][j] & 1 for j in range(n)] + [lattice.gram[i][i] & 1]
            for i in range(n)]
    pivot_col: list[int] = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, n) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        for i in range(n):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        pivot_col.append(c)
        r += 1
    for i in range(r, n):
        if rows[i][n]:
            raise LatticeError("no characteristic vector: mod-2 system inconsistent")
    x = [0] * n
    for i, c in enumerate(pivot_col):
        x[c] = rows[i][n]
    return tuple(x)


# ---------------------------------------------------------------------------
# sublattices


@dataclass(frozen=True)
class SublatticeBasis:
    """A list of rationally independent vectors, with free-form provenance."""

    generators: tuple[Vector, ...]
    label: str = ""

    def __post_init__(self):
        gens = tuple(as_vector(g) for g in self.generators)
        if gens:
            n = len(gens[0])
            for g in gens:
                if len(g) != n:
                    raise LatticeError("sublattice generators have mixed lengths")
            if matrix_rank(gens) != len(gens):
                raise LatticeError("sublattice generators are linearly dependent")
        object.__setattr__(self, "generators", gens)

    @property
    def rank(self) -> int:
        return len(self.generators)


def restrict_gram(lattice: IntegerLattice, basis: SublatticeBasis) -> IntegerLattice:
    """Gram matrix of the form restricted to the given generators."""
    gens = basis.generators
    rows = tuple(tuple(pair(lattice, a, b) for b in gens) for a in gens)
    return IntegerLattice(rows)


def orthogonal_complement(lattice: IntegerLattice,
                          sub: SublatticeBasis) -> SublatticeBasis:
    """Saturated sublattice of everything pairing to zero with `sub`.

    Computed as the integer kernel of the pairing functionals via Smith
    normal form, so the result is automatically primitive.
    """
    n = lattice.rank
    label = f"perp({sub.label})" if sub.label else "perp"
    if not sub.generators:
        return SublatticeBasis(tuple(unit_vector(n, i) for i in range(n)), label)
    rows = tuple(gram_times(lattice, g) for g in sub.generators)
    snf = smith_normal_form(rows)
    r = sum(1 for d in snf.diagonal if d != 0)
    kernel = tuple(tuple(snf.v[i][j] for i in range(n)) for j in range(r, n))
    return SublatticeBasis(kernel, label)


def solve_integer_combination(vectors: Sequence[Sequence[int]],
                              target: Sequence[int]) -> Vector | None:
    """Integer coefficients c with sum(c_j vectors_j) = target, or None.

    Solved through the Smith normal form of the column matrix, so the
    answer is exact and existence is decided over the integers, not the
    rationals.
    """
    t = as_vector(target)
    n = len(t)
    s = len(vectors)
    if s == 0:
        return () if not any(t) else None
    cols = [as_vector(v) for v in vectors]
    for v in cols:
        if len(v) != n:
            raise LatticeError("combination vectors have wrong length")
    m = tuple(tuple(cols[j][i] for j in range(s)) for i in range(n))
    snf = smith_normal_form(m)
    y = mat_vec(snf.u, t)
    z = [0] * s
    for j in range(min(n, s)):
        d = snf.d[j][j]
        if d:
            if y[j] % d:
                return None
            z[j] = y[j] // d
        elif y[j]:
            return None
    for i in range(min(n, s), n):
        if y[i]:
            return None
    c = mat_vec(snf.v, z)
    check = tuple(sum(cols[j][i] * c[j] for j in range(s)) for i in range(n))
    if check != t:
        raise InternalConsistencyError("integer combination solve failed recheck")
    return c


# ---------------------------------------------------------------------------
# Smith normal form and exact determinants


@dataclass(frozen=True)
class SmithDecomposition:
    """U . M . V = D with U, V unimodular and D diagonal, d_i | d_{i+1} >= 0."""

    d: Matrix
    u: Matrix
    v: Matrix

    @property
    def diagonal(self) -> Vector:
        k = min(len(self.d), len(self.d[0]) if self.d else 0)
        return tuple(self.d[i][i] for i in range(k))


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transforms, over arbitrary-precision integers.

    Pivot selection is deterministic: the smallest nonzero absolute
    value in the remaining block, ties broken by lowest row index and
    then lowest column index. Diagonal entries come out nonnegative
    with each dividing the next.
    """
    a = [list(as_vector(row)) for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    for row in a:
        if len(row) != ncols:
            raise LatticeError("ragged matrix")
    u = mat_identity(nrows)
    v = mat_identity(ncols)

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in range(nrows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(ncols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def row_add(dst, src, q):
        arow, srow = a[dst], a[src]
        for c in range(ncols):
            arow[c] += q * srow[c]
        urow, usrc = u[dst], u[src]
        for c in range(nrows):
            urow[c] += q * usrc[c]

    def col_add(dst, src, q):
        for r in range(nrows):
            a[r][dst] += q * a[r][src]
        for r in range(ncols):
            v[r][dst] += q * v[r][src]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                mag = abs(a[i][j])
                if mag and (best is None or mag < best[0]):
                    best = (mag, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_swap(pi, t)
        if pj != t:
            col_swap(pj, t)
        if a[t][t] < 0:
            row_negate(t)
        p = a[t][t]
        dirty = False
        for i in range(t + 1, nrows):
            if a[i][t]:
                row_add(i, t, -(a[i][t] // p))
                if a[i][t]:
                    dirty = True
        if dirty:
            continue
        for j in range(t + 1, ncols):
            if a[t][j]:
                col_add(j, t, -(a[t][j] // p))
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # Row and column t are clear; force p to divide the rest of the
        # block so the divisor chain holds, then advance.
        offender = None
        for i in range(t + 1, nrows):
            if any(a[i][j] % p for j in range(t + 1, ncols)):
                offender = i
                break
        if offender is not None:
            row_add(t, offender, 1)
            continue
        t += 1

    return SmithDecomposition(freeze_matrix(a), freeze_matrix(u), freeze_matrix(v))


def matrix_rank(m: Sequence[Sequence[int]]) -> int:
    if not m or not m[0]:
        return 0
    return sum(1 for d in smith_normal_form(m).diagonal if d != 0)


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(as_vector(row)) for row in m]
    n = len(a)
    for row in a:
        if len(row) != n:
            raise LatticeError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def signature(lattice: IntegerLattice) -> tuple[int, int]:
    """(b_plus, b_minus) by exact rational congruence diagonalization.

    Symmetric Gaussian elimination over Fraction: at each step the pivot
    is the first nonzero diagonal entry, after a congruence move that
    manufactures one from a nonzero off-diagonal entry when the whole
    remaining diagonal vanishes. Degenerate directions are skipped, so
    b_plus + b_minus can fall short of the rank for singular forms;
    callers that need nondegeneracy check the determinant separately.
    """
    n = lattice.rank
    a = [[Fraction(x) for x in row] for row in lattice.gram]

    def congruence_swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]

    def congruence_fold(p, q):
        # row p += row q, then column p += column q
        for j in range(n):
            a[p][j] += a[q][j]
        for i in range(n):
            a[i][p] += a[i][q]

    pos = neg = 0
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                congruence_swap(k, j)
            else:
                found = next(((p, q) for p in range(k, n) for q in range(p + 1, n)
                              if a[p][q] != 0), None)
                if found is None:
                    break  # remaining block is identically zero
                congruence_fold(*found)
                if found[0] != k:
                    congruence_swap(k, found[0])
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        col = [a[i][k] for i in range(k + 1, n)]
        for i in range(k + 1, n):
            fi = col[i - k - 1]
            if fi:
                for j in range(k + 1, n):
                    a[i][j] -= fi * a[k][j] / d
        for i in range(k + 1, n):
            a[i][k] = Fraction(0)
            a[k][i] = Fraction(0)
    return pos, neg
