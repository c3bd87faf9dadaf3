"""Exact integer matrix normal forms and lattice quotients.

Everything here runs on plain Python ints, so there is no overflow story;
matrices are tuples of row tuples and every function is pure.  The matrices
that show up downstream (generator matrices of monoids and their groupifications)
are desk scale, at most a few dozen rows, so the classical elementary-operation
algorithms with smallest-pivot selection are entirely adequate.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod


class SubLatticeNotContained(ValueError):
    """The alleged sublattice has a generator outside the ambient lattice."""


@dataclass(frozen=True)
class FinAbelianGroup:
    """A finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/dk.

    The invariant factors satisfy d1 | d2 | ... | dk with every di >= 2, so the
    representation is unique.
    """

    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        facs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", facs)
        for d in facs:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(facs, facs[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def torsion_order(self) -> int:
        return prod(self.invariant_factors)

    def order(self):
        """Total order, or None for infinite groups."""
        return None if self.free_rank else self.torsion_order()

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


def intmatrix(rows) -> tuple[tuple[int, ...], ...]:
    """Normalize an iterable of rows into the canonical immutable form."""
    out = tuple(tuple(int(x) for x in row) for row in rows)
    widths = {len(row) for row in out}
    if len(widths) > 1:
        raise ValueError("ragged matrix")
    return out


def dims(M) -> tuple[int, int]:
    r = len(M)
    return r, (len(M[0]) if r else 0)


def identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(A, B):
    ra, ca = dims(A)
    rb, cb = dims(B)
    if ca != rb:
        raise ValueError("shape mismatch")
    Bc = [tuple(row[j] for row in B) for j in range(cb)]
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in Bc) for row in A)


def mat_vec(A, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in A)


def transpose(M):
    r, c = dims(M)
    return tuple(tuple(M[i][j] for i in range(r)) for j in range(c))


def det(M) -> int:
    """Determinant via fraction-free Gaussian elimination (Bareiss)."""
    n, c = dims(M)
    if n != c:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _smallest_pivot(a, s, rows, cols):
    """Position of the nonzero entry of least absolute value in the s-block."""
    best = None
    val = None
    for i in range(s, rows):
        for j in range(s, cols):
            if a[i][j] != 0 and (val is None or abs(a[i][j]) < val):
                best, val = (i, j), abs(a[i][j])
    return best


def snf(M):
    """Smith normal form: returns (U, D, V) with U*M*V = D.

    U and V are unimodular; D is diagonal, nonnegative, and its diagonal
    entries form a divisibility chain d1 | d2 | ...  Smallest-pivot selection
    keeps the intermediate entries tame at the sizes we care about.
    """
    M = intmatrix(M)
    rows, cols = dims(M)
    a = [list(row) for row in M]
    u = [list(row) for row in identity(rows)]
    v = [list(row) for row in identity(cols)]

    def row_op(i, q, s):
        # row_i -= q * row_s, tracked in u
        a[i] = [x - q * y for x, y in zip(a[i], a[s])]
        u[i] = [x - q * y for x, y in zip(u[i], u[s])]

    def col_op(j, q, s):
        for r in range(rows):
            a[r][j] -= q * a[r][s]
        for r in range(cols):
            v[r][j] -= q * v[r][s]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    for s in range(min(rows, cols)):
        while True:
            pos = _smallest_pivot(a, s, rows, cols)
            if pos is None:
                break
            if pos != (s, s):
                if pos[0] != s:
                    swap_rows(s, pos[0])
                if pos[1] != s:
                    swap_cols(s, pos[1])
            dirty = False
            for i in range(s + 1, rows):
                if a[i][s] != 0:
                    q = a[i][s] // a[s][s]
                    row_op(i, q, s)
                    dirty = dirty or a[i][s] != 0
            for j in range(s + 1, cols):
                if a[s][j] != 0:
                    q = a[s][j] // a[s][s]
                    col_op(j, q, s)
                    dirty = dirty or a[s][j] != 0
            if dirty:
                continue
            # pivot must divide the whole remaining block for the chain
            stray = None
            for i in range(s + 1, rows):
                for j in range(s + 1, cols):
                    if a[i][j] % a[s][s] != 0:
                        stray = i
                        break
                if stray is not None:
                    break
            if stray is None:
                break
            row_op(s, -1, stray)
        if a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            u[s] = [-x for x in u[s]]

    U, D, V = intmatrix(u), intmatrix(a), intmatrix(v)
    assert mat_mul(mat_mul(U, M), V) == D
    return U, D, V


def snf_diagonal(M) -> tuple[int, ...]:
    """The nonzero diagonal of the Smith form, in chain order."""
    _, D, _ = snf(M)
    rows, cols = dims(D)
    return tuple(D[i][i] for i in range(min(rows, cols)) if D[i][i] != 0)


def hnf(M):
    """Column-style Hermite normal form: returns (H, V) with M*V = H.

    H is in column echelon form with positive pivots; entries to the left of a
    pivot are reduced into [0, pivot).  V is unimodular.
    """
    M = intmatrix(M)
    rows, cols = dims(M)
    a = [list(row) for row in M]
    v = [list(row) for row in identity(cols)]

    def combine_cols(j, k, x, y, z, w):
        # (col_j, col_k) <- (x*col_j + y*col_k, z*col_j + w*col_k)
        for arr in (a, v):
            for r in range(len(arr)):
                cj, ck = arr[r][j], arr[r][k]
                arr[r][j], arr[r][k] = x * cj + y * ck, z * cj + w * ck

    c = 0
    for r in range(rows):
        piv = next((j for j in range(c, cols) if a[r][j] != 0), None)
        if piv is None:
            continue
        if piv != c:
            combine_cols(c, piv, 0, 1, 1, 0)
        for j in range(c + 1, cols):
            if a[r][j] == 0:
                continue
            p, q = a[r][c], a[r][j]
            g = gcd(p, q)
            # Bezout: x*p + y*q = g; the 2x2 block has determinant +-1
            x, y = _bezout(p, q)
            combine_cols(c, j, x, y, -(q // g), p // g)
        if a[r][c] < 0:
            for arr in (a, v):
                for row in arr:
                    row[c] = -row[c]
        for j in range(c):
            q = a[r][j] // a[r][c]
            if q:
                for arr in (a, v):
                    for row in arr:
                        row[j] -= q * row[c]
        c += 1
        if c == cols:
            break

    H, V = intmatrix(a), intmatrix(v)
    assert mat_mul(M, V) == H
    return H, V


def _bezout(p: int, q: int) -> tuple[int, int]:
    """x, y with x*p + y*q = gcd(p, q)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while q:
        k, p, q = p // q, q, p % q
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return x0, y0


def in_lattice(gens, v):
    """Integer coefficients expressing v in the columns of gens, or None.

    The vector is reduced against the Hermite form of the generator matrix;
    it lies in the lattice exactly when the reduction reaches zero.
    """
    gens = intmatrix(gens)
    rows, cols = dims(gens)
    v = tuple(int(x) for x in v)
    if len(v) != rows:
        raise ValueError("vector length does not match matrix rows")
    if cols == 0:
        return () if all(x == 0 for x in v) else None
    H, V = hnf(gens)
    resid = list(v)
    y = [0] * cols
    col = 0
    for r in range(rows):
        if col < cols and H[r][col] != 0:
            if resid[r] % H[r][col] != 0:
                return None
            t = resid[r] // H[r][col]
            y[col] = t
            for i in range(rows):
                resid[i] -= t * H[i][col]
            col += 1
        elif resid[r] != 0:
            return None
    if any(resid):
        return None
    return mat_vec(V, y)


def lattice_basis(gens):
    """The pivot columns of the Hermite form: a basis of the column lattice."""
    gens = intmatrix(gens)
    rows, cols = dims(gens)
    H, _ = hnf(gens)
    keep = [j for j in range(cols) if any(H[i][j] for i in range(rows))]
    return tuple(tuple(H[i][j] for j in keep) for i in range(rows))


def lattice_rank(gens) -> int:
    _, c = dims(lattice_basis(gens))
    return c


def kernel(M):
    """Columns spanning the integer null space of M."""
    M = intmatrix(M)
    rows, cols = dims(M)
    _, D, V = snf(M)
    rank = sum(1 for i in range(min(rows, cols)) if D[i][i] != 0)
    return tuple(tuple(V[i][j] for j in range(rank, cols)) for i in range(cols))


def abelian_quotient(gens, sub_gens) -> FinAbelianGroup:
    """Structure of (column lattice of gens) / (column lattice of sub_gens).

    Raises SubLatticeNotContained when some column of sub_gens falls outside
    the ambient lattice.  The quotient is presented by rewriting the sublattice
    generators in a basis of the ambient lattice and reading off the Smith form.
    """
    gens = intmatrix(gens)
    sub = intmatrix(sub_gens)
    rows, _ = dims(gens)
    srows, scols = dims(sub)
    if srows != rows:
        raise ValueError("ambient dimensions differ")
    basis = lattice_basis(gens)
    _, rank = dims(basis)
    coords = []
    for j in range(scols):
        col = tuple(sub[i][j] for i in range(rows))
        c = in_lattice(basis, col)
        if c is None:
            raise SubLatticeNotContained(f"column {j} of sub_gens is outside the lattice")
        coords.append(c)
    if not coords:
        return FinAbelianGroup(free_rank=rank)
    X = transpose(intmatrix(coords))
    d = snf_diagonal(X)
    return FinAbelianGroup(
        free_rank=rank - len(d),
        invariant_factors=tuple(x for x in d if x > 1),
    )
