"""Exact linear algebra over the integers.

Everything in this module works with arbitrary-precision Python integers and
is fully deterministic: no floats, no randomized pivoting, no modular
shortcuts.  The three workhorses are

* :func:`smith_normal_form` -- ``U * M * V = D`` with ``U``, ``V`` unimodular
  and the diagonal of ``D`` a nonnegative divisibility chain ``d1 | d2 | ...``,
* :func:`solve_linear_diophantine` -- a particular integer solution of
  ``M x = b`` together with a basis of the integer kernel,
* :func:`subquotient_structure` -- the abelian group (kernel lattice)/(image
  lattice), with generators and a membership test.  Cohomology of finite
  groups reduces to exactly this computation.

The pivot rule (smallest nonzero absolute value, ties broken by lowest
(row, col)) makes every output reproducible across runs and platforms.
Matrices here are desk scale; nothing is tuned for sparsity beyond the
row-streaming kernel helper used by the cohomology code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Optional, Sequence

Vector = tuple[int, ...]


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g.

    >>> ext_gcd(12, 18)
    (6, -1, 1)
    >>> ext_gcd(0, -5)
    (5, 0, -1)
    """
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major storage."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        """Build a matrix from an iterable of equal-length rows.

        >>> IntMatrix.from_rows([[1, 2], [3, 4]]).entries
        (1, 2, 3, 4)
        """
        rows = [tuple(int(x) for x in r) for r in rows]
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        else:
            ncols = 0 if cols is None else cols
        flat = tuple(x for r in rows for x in r)
        return cls(len(rows), ncols, flat)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = []
        orows = other.to_rows()
        for i in range(self.rows):
            srow = self.row(i)
            acc = [0] * other.cols
            for k, a in enumerate(srow):
                if a:
                    orow = orows[k]
                    for j in range(other.cols):
                        acc[j] += a * orow[j]
            out.append(acc)
        return IntMatrix.from_rows(out, cols=other.cols)

    def apply(self, v: Sequence[int]) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(self.at(i, k) * v[k] for k in range(self.cols)) for i in range(self.rows))

    def determinant(self) -> int:
        """Fraction-free Bareiss determinant.

        >>> IntMatrix.from_rows([[2, 4], [6, 8]]).determinant()
        -8
        """
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.determinant()) == 1


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Finitely generated abelian group: Z^free_rank + sum of Z/d for d in torsion.

    Invariant factors are >= 2 and form an ascending divisibility chain, so
    two structures are equal iff the groups are isomorphic.

    >>> str(AbelianGroupStructure(0, (3,)))
    'Z/3'
    >>> str(AbelianGroupStructure(2, (2, 6)))
    'Z^2 + Z/2 + Z/6'
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError("torsion invariants must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("torsion invariants must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> Optional[int]:
        """Group order, or None if infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = D with U, V unimodular, D diagonal with a divisor chain."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def invariants(self) -> tuple[int, ...]:
        """Nonzero diagonal entries d1 | d2 | ... of D."""
        out = []
        for k in range(min(self.d.rows, self.d.cols)):
            e = self.d.at(k, k)
            if e:
                out.append(e)
        return tuple(out)

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def quotient_structure(self) -> AbelianGroupStructure:
        """Structure of Z^rows / (column lattice of M)."""
        free = self.d.rows - self.rank
        torsion = tuple(d for d in self.invariants if d > 1)
        return AbelianGroupStructure(free, torsion)


def _min_abs_pivot(a: list[list[int]], k: int, nr: int, nc: int) -> Optional[tuple[int, int]]:
    # smallest |entry| in the active submatrix, ties by lowest (row, col)
    best = None
    best_abs = None
    for i in range(k, nr):
        ai = a[i]
        for j in range(k, nc):
            e = ai[j]
            if e:
                ae = abs(e)
                if best_abs is None or ae < best_abs:
                    best, best_abs = (i, j), ae
                    if ae == 1:
                        return best
    return best


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with deterministic smallest-pivot selection.

    >>> s = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> [s.d.at(i, i) for i in range(2)]
    [2, 4]
    >>> (s.u @ IntMatrix.from_rows([[2, 4], [6, 8]]) @ s.v) == s.d
    True
    """
    nr, nc = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(nr).to_rows()
    v = IntMatrix.identity(nc).to_rows()

    def row_op(i: int, j: int, q: int) -> None:
        # row_i -= q * row_j
        ai, aj = a[i], a[j]
        for t in range(nc):
            ai[t] -= q * aj[t]
        ui, uj = u[i], u[j]
        for t in range(nr):
            ui[t] -= q * uj[t]

    def col_op(i: int, j: int, q: int) -> None:
        # col_i -= q * col_j
        for r in a:
            r[i] -= q * r[j]
        for r in v:
            r[i] -= q * r[j]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    for k in range(min(nr, nc)):
        while True:
            loc = _min_abs_pivot(a, k, nr, nc)
            if loc is None:
                break
            pi, pj = loc
            if pi != k:
                swap_rows(k, pi)
            if pj != k:
                swap_cols(k, pj)
            p = a[k][k]
            dirty = False
            for i in range(k + 1, nr):
                if a[i][k]:
                    q = a[i][k] // p
                    row_op(i, k, q)
                    if a[i][k]:
                        dirty = True
            for j in range(k + 1, nc):
                if a[k][j]:
                    q = a[k][j] // p
                    col_op(j, k, q)
                    if a[k][j]:
                        dirty = True
            if dirty:
                continue
            # enforce d_k | (remaining block) before moving on
            culprit = None
            for i in range(k + 1, nr):
                ai = a[i]
                for j in range(k + 1, nc):
                    if ai[j] % p:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            row_op(k, culprit, -1)  # row_k += row_culprit, creates a non-multiple in row k
        if a[k][k] < 0:
            negate_row(k)
    return SmithDecomposition(IntMatrix.from_rows(u, cols=nr),
                              IntMatrix.from_rows(a, cols=nc),
                              IntMatrix.from_rows(v, cols=nc))


class ColumnReduction:
    """Incremental integer column elimination against a stream of rows.

    Rows of a matrix are fed one at a time as sparse ``{col: coeff}`` maps.
    The object maintains integer column combinations forming a unimodular
    transform of the identity; a combination survives only if it pairs to
    zero with every row fed so far.  Once all rows are in, the survivors are
    a basis of the integer kernel.  This streaming form is what makes the
    bar-resolution cochain complexes tractable: differentials there have at
    most a dozen nonzero entries per row.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.columns: list[list[int]] = [[1 if i == j else 0 for i in range(ncols)]
                                         for j in range(ncols)]

    def feed(self, row: dict[int, int]) -> None:
        if not row:
            return
        cols = self.columns
        items = list(row.items())
        dots = []
        for col in cols:
            s = 0
            for c, a in items:
                v = col[c]
                if v:
                    s += a * v
            dots.append(s)
        nz = [j for j, d in enumerate(dots) if d]
        if not nz:
            return
        j0 = nz[0]
        for j in nz[1:]:
            aa, bb = dots[j0], dots[j]
            g, s, t = ext_gcd(aa, bb)
            x, y = aa // g, bb // g
            cj0, cj = cols[j0], cols[j]
            for i in range(self.ncols):
                p, q = cj0[i], cj[i]
                cj0[i] = s * p + t * q
                cj[i] = -y * p + x * q
            dots[j0] = g
        cols.pop(j0)

    def kernel(self) -> list[Vector]:
        out = []
        for c in self.columns:
            lead = next((x for x in c if x), 0)
            out.append(tuple(-x for x in c) if lead < 0 else tuple(c))
        return out


def integer_kernel(rows: Iterable[dict[int, int]], ncols: int) -> list[Vector]:
    """Basis of the integer kernel of the matrix whose rows are streamed in.

    >>> integer_kernel([{0: 1, 1: 1}], 2)
    [(1, -1)]
    """
    red = ColumnReduction(ncols)
    for r in rows:
        red.feed(r)
    return red.kernel()


def _dense_rows_to_sparse(m: IntMatrix) -> Iterable[dict[int, int]]:
    for i in range(m.rows):
        r = m.row(i)
        yield {j: x for j, x in enumerate(r) if x}


def solve_linear_diophantine(m: IntMatrix, b: Sequence[int]
                             ) -> Optional[tuple[Vector, list[Vector]]]:
    """Solve M x = b over the integers.

    Returns ``(particular, kernel_basis)`` or None when no integer solution
    exists.  The full solution set is particular + integer combinations of
    the kernel basis.

    >>> m = IntMatrix.from_rows([[1, 1]])
    >>> sol, ker = solve_linear_diophantine(m, (3,))
    >>> m.apply(sol)
    (3,)
    >>> ker
    [(1, -1)]
    """
    if len(b) != m.rows:
        raise ValueError("right-hand side length does not match row count")
    n = m.cols
    if all(x == 0 for x in b):
        return (0,) * n, integer_kernel(_dense_rows_to_sparse(m), n)
    # kernel of [M | -b]; a kernel vector (x, t) satisfies M x = t b
    red = ColumnReduction(n + 1)
    for i, row in enumerate(_dense_rows_to_sparse(m)):
        if b[i]:
            row = dict(row)
            row[n] = -b[i]
        red.feed(row)
    aug = red.kernel()
    kernel = [v[:n] for v in aug if v[n] == 0]
    carriers = [v for v in aug if v[n] != 0]
    if not carriers:
        return None
    # combine carriers down to a single one whose last coordinate is the gcd
    acc = list(carriers[0])
    for v in carriers[1:]:
        g, s, t = ext_gcd(acc[n], v[n])
        x, y = acc[n] // g, v[n] // g
        new_acc = [s * p + t * q for p, q in zip(acc, v)]
        extra = tuple(-y * p + x * q for p, q in zip(acc, v))
        kernel.append(extra[:n])
        acc = new_acc
    if abs(acc[n]) != 1:
        return None
    sign = acc[n]
    particular = tuple(sign * x for x in acc[:n])
    return particular, kernel


class LatticeEchelon:
    """Column echelon form of an integer lattice, for membership tests.

    >>> lat = LatticeEchelon([(2, 0), (0, 2)], 2)
    >>> lat.contains((4, -2))
    True
    >>> lat.contains((1, 0))
    False
    """

    def __init__(self, vectors: Iterable[Sequence[int]], dim: int):
        self.dim = dim
        self.pivot_cols: dict[int, list[int]] = {}
        for v in vectors:
            self._insert([int(x) for x in v])

    def _leading(self, v: list[int]) -> Optional[int]:
        for i, x in enumerate(v):
            if x:
                return i
        return None

    def _insert(self, v: list[int]) -> None:
        while True:
            r = self._leading(v)
            if r is None:
                return
            if r not in self.pivot_cols:
                if v[r] < 0:
                    v = [-x for x in v]
                self.pivot_cols[r] = v
                return
            w = self.pivot_cols[r]
            g, s, t = ext_gcd(w[r], v[r])
            x, y = w[r] // g, v[r] // g
            neww = [s * p + t * q for p, q in zip(w, v)]
            v = [-y * p + x * q for p, q in zip(w, v)]
            self.pivot_cols[r] = neww

    def reduce(self, v: Sequence[int]) -> Vector:
        """Reduce v modulo the lattice by exact pivot division steps."""
        v = [int(x) for x in v]
        for r in sorted(self.pivot_cols):
            if v[r]:
                w = self.pivot_cols[r]
                q, rem = divmod(v[r], w[r])
                if rem == 0:
                    for i in range(r, self.dim):
                        v[i] -= q * w[i]
        return tuple(v)

    def contains(self, v: Sequence[int]) -> bool:
        return all(x == 0 for x in self.reduce(v))


def _inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix (Gauss over Q, result integral)."""
    n = m.rows
    a = [[Fraction(x) for x in m.row(i)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k]:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    out = []
    for i in range(n):
        row = []
        for j in range(n, 2 * n):
            x = a[i][j]
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(x))
        out.append(row)
    return IntMatrix.from_rows(out, cols=n)


def subquotient_structure(kernel_vectors: Sequence[Sequence[int]],
                          image_vectors: Sequence[Sequence[int]],
                          ) -> tuple[AbelianGroupStructure, list[Vector],
                                     Callable[[Sequence[int]], Optional[Vector]]]:
    """Structure of (lattice spanned by kernel_vectors)/(lattice of image_vectors).

    The kernel vectors must be Z-linearly independent and the image vectors
    must lie in the lattice they span (both are checked).  Returns the group
    structure, ambient representatives for its generators (torsion generators
    first, in invariant-factor order, then free generators), and a membership
    procedure: given an ambient vector in the kernel lattice it returns
    coefficients expressing it in terms of image_vectors, or None when the
    vector is not in the image lattice.

    >>> s, reps, member = subquotient_structure([(2, 0), (0, 2)], [(2, 0), (0, 4)])
    >>> str(s)
    'Z/2'
    >>> reps
    [(0, 2)]
    >>> member((2, 0))
    (1, 0)
    >>> member((0, 2)) is None
    True
    """
    kernel_vectors = [tuple(int(x) for x in v) for v in kernel_vectors]
    image_vectors = [tuple(int(x) for x in v) for v in image_vectors]
    if not kernel_vectors:
        if any(any(x for x in v) for v in image_vectors):
            raise ValueError("image vectors outside the zero lattice")
        return AbelianGroupStructure(0, ()), [], lambda v: (0,) * len(image_vectors)
    dim = len(kernel_vectors[0])
    s = len(kernel_vectors)
    kmat = IntMatrix.from_rows([[v[i] for v in kernel_vectors] for i in range(dim)], cols=s)
    # independence: kernel of kmat must be trivial
    if integer_kernel(_dense_rows_to_sparse(kmat), s):
        raise ValueError("kernel vectors are not Z-linearly independent")

    def in_kernel_coords(v: Sequence[int]) -> Vector:
        sol = solve_linear_diophantine(kmat, tuple(v))
        if sol is None:
            raise ValueError("vector is not in the kernel lattice")
        return sol[0]

    coords = [in_kernel_coords(v) for v in image_vectors]
    t = len(image_vectors)
    amat = IntMatrix.from_rows([[c[i] for c in coords] for i in range(s)], cols=t)
    snf = smith_normal_form(amat)
    r = snf.rank
    invariants = snf.invariants
    uinv = _inverse_unimodular(snf.u)
    new_basis = [uinv.column(i) for i in range(s)]  # columns of U^-1, basis adapted to the image

    def ambient(col: Vector) -> Vector:
        return tuple(sum(kernel_vectors[j][i] * col[j] for j in range(s)) for i in range(dim))

    torsion = []
    reps: list[Vector] = []
    for i in range(r):
        if invariants[i] > 1:
            torsion.append(invariants[i])
            reps.append(ambient(new_basis[i]))
    for i in range(r, s):
        reps.append(ambient(new_basis[i]))
    structure = AbelianGroupStructure(s - r, tuple(torsion))

    u = snf.u
    v = snf.v

    def membership(vec: Sequence[int]) -> Optional[Vector]:
        x = in_kernel_coords(vec)
        y = u.apply(x)
        w = [0] * t
        for i in range(s):
            if i < r:
                if y[i] % invariants[i]:
                    return None
                w[i] = y[i] // invariants[i]
            elif y[i]:
                return None
        return v.apply(w[:t]) if t else ()

    return structure, reps, membership


if __name__ == "__main__":
    import doctest

    doctest.testmod()
