"""Dense exact matrices, matrices of polynomials in N, and skew block structure.

Matrices store raw field payloads (see :mod:`siegeldual.exact.fields`) and are
immutable.  Zero-sized matrices are legal everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Sequence

from .errors import (
    BadBlockIndex,
    DimensionMismatch,
    Inconsistent,
    MixedFields,
    NotInSpan,
    NotUnitriangular,
    Singular,
    SizeMismatch,
)
from .exact.fields import Field, FieldValue
from .exact.poly import Poly


class Mat:
    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data: Sequence[Sequence]):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = tuple(tuple(r) for r in data)
        if len(self.data) != rows or any(len(r) != cols for r in self.data):
            raise DimensionMismatch(f"data does not fit a {rows}x{cols} matrix")

    # construction ---------------------------------------------------------
    @classmethod
    def _raw(cls, field: Field, rows: int, cols: int, data) -> Mat:
        m = object.__new__(cls)
        m.field, m.rows, m.cols, m.data = field, rows, cols, data
        return m

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Iterable], cols: int | None = None) -> Mat:
        """Build from rows of ints, strings or FieldValues."""
        data = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        ncols = len(data[0]) if data else (cols or 0)
        return cls(field, len(data), ncols, data)

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int) -> Mat:
        z = field.zero
        return cls._raw(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> Mat:
        z, o = field.zero, field.one
        return cls._raw(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> Mat:
        return cls._raw(field, rows, len(columns),
                        tuple(tuple(col[i] for col in columns) for i in range(rows)))

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> FieldValue:
        i, j = ij
        return FieldValue(self.field, self.data[i][j])

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> Mat:
        return Mat._raw(self.field, r1 - r0, c1 - c0, tuple(row[c0:c1] for row in self.data[r0:r1]))

    def is_zero(self) -> bool:
        iz = self.field.is_zero
        return all(iz(a) for row in self.data for a in row)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Mat.identity(self.field, self.rows)

    def tolist(self) -> list[list[str]]:
        fmt = self.field.format
        return [[fmt(a) for a in row] for row in self.data]

    # arithmetic -----------------------------------------------------------
    def _check(self, other: Mat):
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.field != self.field:
            raise MixedFields(f"{self.field} vs {other.field}")

    def __add__(self, other: Mat) -> Mat:
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        add = self.field.add
        return Mat._raw(self.field, self.rows, self.cols,
                        tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> Mat:
        neg = self.field.neg
        return Mat._raw(self.field, self.rows, self.cols, tuple(tuple(neg(a) for a in r) for r in self.data))

    def __sub__(self, other: Mat) -> Mat:
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        sub = self.field.sub
        return Mat._raw(self.field, self.rows, self.cols,
                        tuple(tuple(sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __matmul__(self, other: Mat) -> Mat:
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        f = self.field
        add, mul, is_zero, z = f.add, f.mul, f.is_zero, f.zero
        ncols = other.cols
        odata = other.data
        out = []
        for row in self.data:
            acc = [z] * ncols
            for k, a in enumerate(row):
                if is_zero(a):
                    continue
                for j, b in enumerate(odata[k]):
                    if not is_zero(b):
                        acc[j] = add(acc[j], mul(a, b))
            out.append(tuple(acc))
        return Mat._raw(f, self.rows, ncols, tuple(out))

    def scale(self, c) -> Mat:
        c = self.field.coerce(c)
        mul = self.field.mul
        return Mat._raw(self.field, self.rows, self.cols, tuple(tuple(mul(a, c) for a in r) for r in self.data))

    @property
    def T(self) -> Mat:
        return Mat._raw(self.field, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else
                        tuple(() for _ in range(self.cols)))

    def transpose(self) -> Mat:
        return self.T

    def __pow__(self, e: int) -> Mat:
        out = Mat.identity(self.field, self.rows)
        for _ in range(e):
            out = out @ self
        return out

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.field, self.shape, self.data))

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {self.tolist()})"

    # elimination ----------------------------------------------------------
    def rref(self) -> tuple[Mat, list[int]]:
        """Reduced row echelon form and the pivot columns (first nonzero pivot)."""
        f = self.field
        rows = [list(r) for r in self.data]
        pivots = _rref_inplace(f, rows, self.cols)
        return Mat._raw(f, self.rows, self.cols, tuple(tuple(r) for r in rows)), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> Mat:
        """Columns form a basis of ``{x : self @ x = 0}``."""
        f = self.field
        R, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in set(pivots)]
        cols = []
        for fj in free:
            v = [f.zero] * self.cols
            v[fj] = f.one
            for i, pj in enumerate(pivots):
                v[pj] = f.neg(R.data[i][fj])
            cols.append(v)
        return Mat.from_columns(f, cols, self.cols)


def _rref_inplace(f: Field, rows: list[list], ncols: int) -> list[int]:
    is_zero, mul, sub, inv = f.is_zero, f.mul, f.sub, f.inv
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if not is_zero(rows[i][c])), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        piv_inv = inv(pr[c])
        if not f.is_one(pr[c]):
            pr[:] = [mul(a, piv_inv) for a in pr]
        for i in range(nrows):
            if i != r:
                fac = rows[i][c]
                if not is_zero(fac):
                    ri = rows[i]
                    rows[i] = [a if is_zero(b) else sub(a, mul(fac, b)) for a, b in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return pivots


def hstack(*mats: Mat) -> Mat:
    f = mats[0].field
    rows = mats[0].rows
    for m in mats:
        if m.rows != rows:
            raise DimensionMismatch("hstack of matrices with different row counts")
    data = tuple(sum((m.data[i] for m in mats), ()) for i in range(rows))
    return Mat._raw(f, rows, sum(m.cols for m in mats), data)


def vstack(*mats: Mat) -> Mat:
    f = mats[0].field
    cols = mats[0].cols
    for m in mats:
        if m.cols != cols:
            raise DimensionMismatch("vstack of matrices with different column counts")
    return Mat._raw(f, sum(m.rows for m in mats), cols, sum((m.data for m in mats), ()))


def solve_exact(A: Mat, B: Mat, unique: bool = True) -> Mat:
    """X with ``A @ X = B`` by Gaussian elimination.

    With ``unique=False`` an underdetermined but consistent system returns
    the particular solution with free variables set to zero.
    """
    if A.rows != B.rows:
        raise DimensionMismatch(f"A is {A.shape}, B is {B.shape}")
    A._check(B)
    f = A.field
    rows = [list(a) + list(b) for a, b in zip(A.data, B.data)]
    pivots = _rref_inplace(f, rows, A.cols)
    for i in range(len(pivots), A.rows):
        if any(not f.is_zero(x) for x in rows[i][A.cols:]):
            raise Inconsistent("A @ X = B has no solution")
    if unique and len(pivots) < A.cols:
        raise Singular(f"rank {len(pivots)} < {A.cols} unknowns")
    X = [[f.zero] * B.cols for _ in range(A.cols)]
    for i, pj in enumerate(pivots):
        X[pj] = rows[i][A.cols:]
    return Mat._raw(f, A.cols, B.cols, tuple(tuple(r) for r in X))


def express_in_span(vectors: Sequence[Sequence], target: Sequence, field: Field) -> tuple:
    """Unique coefficients ``c`` with ``sum c_i vectors[i] = target`` (raw payloads)."""
    n = len(target)
    A = Mat.from_columns(field, list(vectors), n) if vectors else Mat.zero(field, n, 0)
    b = Mat._raw(field, n, 1, tuple((t,) for t in target))
    try:
        X = solve_exact(A, b)
    except Inconsistent:
        raise NotInSpan("target is not in the span of the given vectors") from None
    except Singular:
        raise Singular("spanning vectors are linearly dependent") from None
    return X.column(0)


# ---------------------------------------------------------------------------
# skew block structure


@dataclass(frozen=True)
class BlockShape:
    row_sizes: tuple[int, ...]
    col_sizes: tuple[int, ...]

    @classmethod
    def skew(cls, k: Sequence[int]) -> BlockShape:
        """Rows grouped by ``k_1..k_{m+1}``, columns by ``k_{m+1}..k_1``."""
        k = tuple(k)
        return cls(k, k[::-1])

    @classmethod
    def square(cls, sizes: Sequence[int]) -> BlockShape:
        return cls(tuple(sizes), tuple(sizes))

    @property
    def row_offsets(self) -> tuple[int, ...]:
        return (0,) + tuple(accumulate(self.row_sizes))

    @property
    def col_offsets(self) -> tuple[int, ...]:
        return (0,) + tuple(accumulate(self.col_sizes))

    @property
    def dims(self) -> tuple[int, int]:
        return (sum(self.row_sizes), sum(self.col_sizes))

    def block_dims(self, a: int, b: int) -> tuple[int, int]:
        self._check(a, b)
        return (self.row_sizes[a - 1], self.col_sizes[b - 1])

    def _check(self, a: int, b: int):
        if not (1 <= a <= len(self.row_sizes) and 1 <= b <= len(self.col_sizes)):
            raise BadBlockIndex(f"block ({a}, {b}) outside a {len(self.row_sizes)}x{len(self.col_sizes)} grid")


def block_get(M: Mat, shape: BlockShape, a: int, b: int) -> Mat:
    """Block ``(a, b)``, 1-indexed."""
    shape._check(a, b)
    if M.shape != shape.dims:
        raise SizeMismatch(f"matrix {M.shape} does not have block shape {shape.dims}")
    ro, co = shape.row_offsets, shape.col_offsets
    return M.submatrix(ro[a - 1], ro[a], co[b - 1], co[b])


def block_set(M: Mat, shape: BlockShape, a: int, b: int, X: Mat) -> Mat:
    """Copy of ``M`` with block ``(a, b)`` replaced by ``X``."""
    shape._check(a, b)
    if X.shape != shape.block_dims(a, b):
        raise SizeMismatch(f"block ({a}, {b}) is {shape.block_dims(a, b)}, got {X.shape}")
    if not X.rows or not X.cols:
        return M
    ro, co = shape.row_offsets, shape.col_offsets
    rows = [list(r) for r in M.data]
    for i in range(X.rows):
        rows[ro[a - 1] + i][co[b - 1]:co[b]] = X.data[i]
    return Mat._raw(M.field, M.rows, M.cols, tuple(tuple(r) for r in rows))


def assemble(field: Field, shape: BlockShape, blocks: dict[tuple[int, int], Mat]) -> Mat:
    """Matrix with the given blocks and zeroes elsewhere."""
    R, C = shape.dims
    rows = [[field.zero] * C for _ in range(R)]
    ro, co = shape.row_offsets, shape.col_offsets
    for (a, b), X in blocks.items():
        if X.shape != shape.block_dims(a, b):
            raise SizeMismatch(f"block ({a}, {b}) is {shape.block_dims(a, b)}, got {X.shape}")
        for i in range(X.rows):
            rows[ro[a - 1] + i][co[b - 1]:co[b]] = X.data[i]
    return Mat._raw(field, R, C, tuple(tuple(r) for r in rows))


def block_unitriangular_inverse(M: Mat, block_sizes: Sequence[int]) -> Mat:
    """Inverse of a block upper unitriangular matrix by back-substitution."""
    shape = BlockShape.square(block_sizes)
    if M.shape != shape.dims:
        raise SizeMismatch(f"matrix {M.shape} does not match block sizes {tuple(block_sizes)}")
    nb = len(block_sizes)
    f = M.field
    blk = {(i, j): block_get(M, shape, i, j) for i in range(1, nb + 1) for j in range(1, nb + 1)}
    for i in range(1, nb + 1):
        if not blk[i, i].is_identity():
            raise NotUnitriangular(f"diagonal block {i} is not the identity")
        for j in range(1, i):
            if not blk[i, j].is_zero():
                raise NotUnitriangular(f"block ({i}, {j}) below the diagonal is nonzero")
    inv: dict[tuple[int, int], Mat] = {}
    for j in range(1, nb + 1):
        inv[j, j] = blk[j, j]
        for i in range(j - 1, 0, -1):
            acc = Mat.zero(f, block_sizes[i - 1], block_sizes[j - 1])
            for k in range(i + 1, j + 1):
                acc = acc + blk[i, k] @ inv[k, j]
            inv[i, j] = -acc
    return assemble(f, shape, inv)


# ---------------------------------------------------------------------------
# polynomial matrices


class NPolyMatrix:
    """``sum_i coeffs[i] * N^i`` with equally sized coefficient matrices.

    Trailing zero coefficient matrices are dropped, so equality is structural.
    """

    __slots__ = ("field", "rows", "cols", "coeffs")

    def __init__(self, field: Field, rows: int, cols: int, coeffs: Iterable[Mat] = ()):
        cs = list(coeffs)
        for c in cs:
            if c.shape != (rows, cols):
                raise DimensionMismatch(f"coefficient {c.shape} in a {rows}x{cols} polynomial matrix")
            if c.field != field:
                raise MixedFields(f"{c.field} vs {field}")
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field, self.rows, self.cols = field, rows, cols
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> Mat:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Mat.zero(self.field, self.rows, self.cols)

    def entry(self, i: int, j: int) -> Poly:
        return Poly(self.field, (c.data[i][j] for c in self.coeffs), "N", raw=True)

    @classmethod
    def from_entries(cls, field: Field, entries: Sequence[Sequence[Poly]]) -> NPolyMatrix:
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        deg = max((len(p.coeffs) for row in entries for p in row), default=0)
        z = field.zero
        coeffs = []
        for d in range(deg):
            coeffs.append(Mat._raw(field, rows, cols, tuple(
                tuple(p.coeffs[d] if d < len(p.coeffs) else z for p in row) for row in entries)))
        return cls(field, rows, cols, coeffs)

    def __add__(self, other: NPolyMatrix) -> NPolyMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("NPolyMatrix sum of different sizes")
        n = max(len(self.coeffs), len(other.coeffs))
        return NPolyMatrix(self.field, self.rows, self.cols,
                           [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self):
        return NPolyMatrix(self.field, self.rows, self.cols, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: NPolyMatrix) -> NPolyMatrix:
        return npoly_matmul(self, other)

    @property
    def T(self) -> NPolyMatrix:
        return NPolyMatrix(self.field, self.cols, self.rows, [c.T for c in self.coeffs])

    def truncate(self, n: int) -> NPolyMatrix:
        """Reduction modulo ``N^n``."""
        return NPolyMatrix(self.field, self.rows, self.cols, self.coeffs[:n])

    def __eq__(self, other):
        if not isinstance(other, NPolyMatrix):
            return NotImplemented
        return (self.field == other.field and (self.rows, self.cols) == (other.rows, other.cols)
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.coeffs))

    def __repr__(self):
        return f"NPolyMatrix({self.rows}x{self.cols}, degree {self.degree})"


def npoly_matmul(A: NPolyMatrix, B: NPolyMatrix) -> NPolyMatrix:
    """Coefficients ``C_mu = sum_{g + d = mu} A_g @ B_d``."""
    if A.cols != B.rows:
        raise DimensionMismatch(f"{A.rows}x{A.cols} @ {B.rows}x{B.cols}")
    if A.field != B.field:
        raise MixedFields(f"{A.field} vs {B.field}")
    f = A.field
    if not A.coeffs or not B.coeffs:
        return NPolyMatrix(f, A.rows, B.cols)
    out = [Mat.zero(f, A.rows, B.cols) for _ in range(len(A.coeffs) + len(B.coeffs) - 1)]
    for g, Ag in enumerate(A.coeffs):
        if Ag.is_zero():
            continue
        for d, Bd in enumerate(B.coeffs):
            if not Bd.is_zero():
                out[g + d] = out[g + d] + Ag @ Bd
    return NPolyMatrix(f, A.rows, B.cols, out)
