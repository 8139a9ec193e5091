"""Concrete lattices ``(V, N, l_1..l_r)``: segment arrangement, Siegel extraction,
the kernel bases omega/chi, their pairing, and the dual-lattice round trip.

The lattice vectors are the columns of ``basis`` (an ``n x r`` matrix).  Segment
labels and permutations use 1-based lattice indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

from .errors import DimensionMismatch, InternalRankMismatch, NotInSpan, SpanFailure
from .exact.fields import Field
from .exact.poly import Poly
from .linalg import Mat, solve_exact
from .partitions import JordanData, dual_jordan_data, jordan_data
from .siegel import SiegelObject, dual_siegel, tetra_indices


def make_jordan_matrix(jordan: JordanData, field: Field) -> Mat:
    """Block diagonal nilpotent Jordan matrix with blocks of sizes ``d_1 >= d_2 >= ...``.

    Inside a block of size ``d`` the ones sit on the superdiagonal, so the
    first basis vector of the block is killed by N.
    """
    n = jordan.n
    rows = [[field.zero] * n for _ in range(n)]
    pos = 0
    for d in jordan.d:
        for i in range(d - 1):
            rows[pos + i][pos + i + 1] = field.one
        pos += d
    return Mat._raw(field, n, n, tuple(tuple(r) for r in rows))


def jordan_data_of_operator(N: Mat, m: int, r: int) -> JordanData:
    """Jordan invariants of a nilpotent ``N`` read off from the ranks of its powers."""
    n = N.rows
    ranks = [n]
    power = Mat.identity(N.field, n)
    for _ in range(m):
        power = power @ N
        ranks.append(power.rank())
    if ranks[m] != 0:
        raise ValueError(f"operator is not killed by N^{m}")
    c = [ranks[i - 1] - ranks[i] for i in range(1, m + 1)]
    d = [sum(1 for ci in c if ci >= j) for j in range(1, r + 1)]
    if sum(d) != n:
        raise ValueError("operator has more Jordan blocks than lattice vectors")
    return jordan_data(d, m, r)


@dataclass(frozen=True)
class LatticeInstance:
    """A field, Jordan data, ``r`` lattice vectors in ``F^n`` and the nilpotent operator.

    ``operator`` defaults to the Jordan matrix of ``jordan``; an explicit
    operator must have that Jordan type.
    """

    field: Field
    jordan: JordanData
    basis: Mat
    operator: Mat | None = None

    def __post_init__(self):
        n, r = self.jordan.n, self.jordan.r
        if self.basis.shape != (n, r):
            raise DimensionMismatch(f"basis is {self.basis.shape}, expected {n}x{r} (columns are the l_j)")
        if self.operator is None:
            object.__setattr__(self, "operator", make_jordan_matrix(self.jordan, self.field))
        elif self.operator.shape != (n, n):
            raise DimensionMismatch(f"operator is {self.operator.shape}, expected {n}x{n}")

    @classmethod
    def from_vectors(cls, field: Field, jordan: JordanData, vectors: Sequence[Sequence],
                     operator: Mat | None = None) -> LatticeInstance:
        cols = [tuple(field.coerce(x) for x in v) for v in vectors]
        return cls(field, jordan, Mat.from_columns(field, cols, jordan.n), operator)

    @property
    def m(self) -> int:
        return self.jordan.m

    @property
    def n(self) -> int:
        return self.jordan.n

    @property
    def r(self) -> int:
        return self.jordan.r

    def vector(self, j: int) -> tuple:
        """Raw coordinates of ``l_j`` (1-based)."""
        return self.basis.column(j - 1)

    @cached_property
    def _images(self) -> list[list[tuple]]:
        N = self.operator
        cur = [self.basis.column(j) for j in range(self.r)]
        out = [cur]
        for _ in range(self.m):
            cur = [_apply(N, v) for v in cur]
            out.append(cur)
        return out

    def images(self) -> list[list[tuple]]:
        """``images()[a][j - 1]`` = ``N^a l_j`` for ``a = 0..m``."""
        return self._images


def _apply(N: Mat, v: tuple) -> tuple:
    f = N.field
    add, mul, is_zero = f.add, f.mul, f.is_zero
    out = []
    for row in N.data:
        acc = f.zero
        for a, b in zip(row, v):
            if not is_zero(a) and not is_zero(b):
                acc = add(acc, mul(a, b))
        out.append(acc)
    return tuple(out)


class _Echelon:
    """Incrementally maintained echelon basis for independence tests."""

    def __init__(self, field: Field):
        self.f = field
        self.rows: list[tuple[int, list]] = []  # (pivot column, row with pivot 1)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v) -> list:
        f = self.f
        w = list(v)
        for p, row in self.rows:
            c = w[p]
            if not f.is_zero(c):
                w = [a if f.is_zero(b) else f.sub(a, f.mul(c, b)) for a, b in zip(w, row)]
        return w

    def add(self, v) -> bool:
        f = self.f
        w = self.reduce(v)
        p = next((i for i, a in enumerate(w) if not f.is_zero(a)), None)
        if p is None:
            return False
        inv = f.inv(w[p])
        self.rows.append((p, [f.mul(a, inv) for a in w]))
        return True


def check_condition_31(L: LatticeInstance) -> bool:
    """True iff ``N^i l_j`` (``0 <= i < m``) span the whole space."""
    ech = _Echelon(L.field)
    for level in L.images()[: L.m]:
        for v in level:
            if ech.rank == L.n:
                return True
            ech.add(v)
    return ech.rank == L.n


@dataclass(frozen=True)
class ArrangedBasis:
    """Lattice indices grouped into segments ``1..m+1``.

    ``permutation`` lists the indices in the order they were chosen: segment
    ``m+1`` first, segment 1 (the leftovers) last.
    """

    permutation: tuple[int, ...]
    segments: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.segments)

    @property
    def m(self) -> int:
        return len(self.segments) - 1

    def label(self, u: int, i: int) -> int:
        """Lattice index of ``l_{u,i}``."""
        return self.segments[u - 1][i - 1]

    def order(self) -> list[int]:
        """Indices in segment order ``l_{1,*}, l_{2,*}, ..., l_{m+1,*}``."""
        return [j for seg in self.segments for j in seg]


def _segment_basis(A: ArrangedBasis, u: int) -> list[tuple[int, int, int]]:
    """``(alpha, beta, gamma)`` of the basis of ``N^u V`` built from the segments."""
    m = A.m
    return [(a, b, g)
            for a in range(u, m)
            for b in range(a + 2, m + 2)
            for g in range(1, len(A.segments[b - 1]) + 1)]


def arrange_segments(L: LatticeInstance) -> ArrangedBasis:
    """Greedy top-down split of the lattice vectors into segments.

    At level ``u = m-1, ..., 0`` the already chosen segments contribute
    ``N^a l`` for ``a >= u``; remaining vectors are scanned in increasing index
    and accepted when ``N^u l`` is independent of what is there, until the
    rank equals ``dim N^u V``.
    """
    m, r, jd = L.m, L.r, L.jordan
    imgs = L.images()
    chosen: dict[int, list[int]] = {}
    remaining = list(range(1, r + 1))
    perm: list[int] = []
    for u in range(m - 1, -1, -1):
        seg = u + 2
        ech = _Echelon(L.field)
        for beta in range(u + 3, m + 2):
            for j in chosen[beta]:
                for a in range(u, beta - 1):
                    if not ech.add(imgs[a][j - 1]):
                        raise InternalRankMismatch(f"N^{a} l_{j} dependent at level {u}")
        target = jd.image_dim(u)
        picked = []
        for j in remaining:
            if ech.rank >= target:
                break
            if ech.add(imgs[u][j - 1]):
                picked.append(j)
        if ech.rank < target:
            raise SpanFailure(f"N^{u} V has dimension {target} but the lattice only reaches rank {ech.rank}")
        if ech.rank != target or len(picked) != jd.k[seg - 1]:
            raise InternalRankMismatch(
                f"segment {seg} got {len(picked)} vectors, Jordan data says k_{seg} = {jd.k[seg - 1]}")
        chosen[seg] = picked
        perm += picked
        remaining = [j for j in remaining if j not in picked]
    if len(remaining) != jd.k[0]:
        raise InternalRankMismatch(f"segment 1 got {len(remaining)} vectors, k_1 = {jd.k[0]}")
    chosen[1] = remaining
    perm += remaining
    return ArrangedBasis(tuple(perm), tuple(tuple(chosen[u]) for u in range(1, m + 2)))


def check_arrangement(L: LatticeInstance, A: ArrangedBasis) -> bool:
    """Rank check that the segment vectors give a basis of every ``N^u V``."""
    imgs = L.images()
    for u in range(L.m):
        elems = _segment_basis(A, u)
        if len(elems) != L.jordan.image_dim(u):
            return False
        ech = _Echelon(L.field)
        for a, b, g in elems:
            if not ech.add(imgs[a][A.label(b, g) - 1]):
                return False
    return True


def extract_siegel(L: LatticeInstance, A: ArrangedBasis) -> SiegelObject:
    """Solve ``N^{u-1} l_{u,i} = -sum S[u,u-1,y,z]_{ij} N^z l_{y,j}`` for all segments."""
    m, f = L.m, L.field
    k = A.k
    imgs = L.images()
    entries = {}
    for u in range(1, m + 1):
        elems = _segment_basis(A, u - 1)
        cols = [imgs[a][A.label(b, g) - 1] for a, b, g in elems]
        M = Mat.from_columns(f, cols, L.n)
        rhs = Mat.from_columns(f, [imgs[u - 1][A.label(u, i) - 1] for i in range(1, k[u - 1] + 1)], L.n)
        try:
            X = solve_exact(M, rhs)
        except ArithmeticError as exc:
            raise NotInSpan(f"segment {u}: {exc}") from None
        pos = {(a, b, g): t for t, (a, b, g) in enumerate(elems)}
        for uu, y, z in tetra_indices(m):
            if uu != u:
                continue
            entries[u, y, z] = Mat._raw(f, k[u - 1], k[y - 1], tuple(
                tuple(f.neg(X.data[pos[z, y, j]][i]) for j in range(1, k[y - 1] + 1))
                for i in range(k[u - 1])))
    return SiegelObject(f, k, entries)


# ---------------------------------------------------------------------------
# kernel bases and pairing


@dataclass(frozen=True)
class QBasisElement:
    """``sum_p coords[p] * e_p`` with polynomial coefficients in N.

    For omega the ``e_p`` are ``l_{1,*}, ..., l_{m+1,*}``; for chi they are the
    dual vectors in the order ``lambda_{m+1,*}, ..., lambda_{1,*}``, so
    position ``p`` of both lists refers to a dual pair.
    """

    owner: tuple[int, int]
    position: int
    coords: tuple[Poly, ...] = dc_field(repr=False)
    dual: bool = False

    def leading(self) -> Poly:
        """Coefficient at the owner's own vector, ``N^{u-1}``."""
        return self.coords[self.position]


def _element(f: Field, owner, pos, r, terms, dual) -> QBasisElement:
    raw = [[] for _ in range(r)]
    for p, deg, c in terms:
        cur = raw[p]
        if len(cur) <= deg:
            cur.extend([f.zero] * (deg + 1 - len(cur)))
        cur[deg] = f.add(cur[deg], c)
    return QBasisElement(owner, pos, tuple(Poly(f, c, "N", raw=True) for c in raw), dual)


def _kernel_basis(S: SiegelObject, offsets: dict[int, int], dual: bool, order: list[int]) -> list[QBasisElement]:
    m, k, f, r = S.m, S.k, S.field, S.r
    out = []
    for u in order:
        for i in range(k[u - 1]):
            pos = offsets[u] + i
            terms = [(pos, u - 1, f.one)]
            if u <= m:
                for (uu, y, z), M in S.items():
                    if uu != u:
                        continue
                    for j in range(k[y - 1]):
                        c = M.data[i][j]
                        if not f.is_zero(c):
                            terms.append((offsets[y] + j, z, c))
            out.append(_element(f, (u, i + 1), pos, r, terms, dual))
    return out


def omega_basis(S: SiegelObject) -> list[QBasisElement]:
    """``omega_{u,i} = N^{u-1} l_{u,i} + sum S[u,u-1,y,z]_{ij} N^z l_{y,j}``, in segment order."""
    offsets, acc = {}, 0
    for u in range(1, S.m + 2):
        offsets[u] = acc
        acc += S.k[u - 1]
    return _kernel_basis(S, offsets, False, list(range(1, S.m + 2)))


def chi_basis(S: SiegelObject, Sbar: SiegelObject | None = None) -> list[QBasisElement]:
    """The same construction for the dual Siegel object over the dual vectors.

    Elements come in the order ``chi_{m+1,*}, ..., chi_{1,*}``, matching the
    order of the dual vectors.
    """
    if Sbar is None:
        Sbar = dual_siegel(S)
    m, kd = Sbar.m, Sbar.k
    offsets, acc = {}, 0
    for u in range(m + 1, 0, -1):
        offsets[u] = acc
        acc += kd[u - 1]
    return _kernel_basis(Sbar, offsets, True, list(range(m + 1, 0, -1)))


def pair(x: QBasisElement, y: QBasisElement) -> Poly:
    """``<sum a_p l_p, sum b_p lambda_p> = sum a_p b_p``."""
    f = x.coords[0].field if x.coords else None
    acc = Poly(f, (), "N", raw=True)
    for a, b in zip(x.coords, y.coords):
        if a.coeffs and b.coeffs:
            acc = acc + a * b
    return acc


def pairing_matrix(S: SiegelObject, Sbar: SiegelObject | None = None) -> list[list[Poly]]:
    omegas = omega_basis(S)
    chis = chi_basis(S, Sbar)
    return [[pair(w, c) for c in chis] for w in omegas]


def verify_pairing(S: SiegelObject, Sbar: SiegelObject | None = None) -> dict:
    """Pairing matrix of omega against chi must be ``I_r N^m``."""
    m, f = S.m, S.field
    M = pairing_matrix(S, Sbar)
    target = Poly.monomial(f, m)
    zero = Poly(f, (), "N", raw=True)
    bad = []
    divisible = True
    for a, row in enumerate(M):
        for b, p in enumerate(row):
            if p != (target if a == b else zero):
                bad.append((a, b, str(p)))
            if p.coeffs and p.valuation() < m:
                divisible = False
    return {"check": "pairing = I N^m", "passed": not bad, "divisible_by_N^m": divisible,
            "failures": bad}


def _truncated_rank(elems: list[QBasisElement], order: int) -> int:
    """F-rank of ``{N^a x : a < order}`` inside ``(F[N]/N^order)^r``."""
    if not elems:
        return 0
    f = elems[0].coords[0].field
    r = len(elems[0].coords)
    ech = _Echelon(f)
    for x in elems:
        for a in range(order):
            vec = [f.zero] * (r * order)
            for p, c in enumerate(x.coords):
                for d, val in enumerate(c.coeffs):
                    if d + a < order:
                        vec[p * order + d + a] = val
            ech.add(vec)
    return ech.rank


def verify_kernel_span(S: SiegelObject) -> dict:
    """Colength checks: omega spans a submodule of colength n and chi one of colength m*r - n.

    Together with membership in the respective kernels this shows, by Nakayama,
    that omega and chi generate them.
    """
    m, r = S.m, S.r
    n = sum(i * S.k[i] for i in range(1, m + 1))
    rw = _truncated_rank(omega_basis(S), m + 1)
    rc = _truncated_rank(chi_basis(S), m + 1)
    want_w, want_c = (m + 1) * r - n, r + n
    return {"check": "kernel span", "passed": rw == want_w and rc == want_c,
            "omega_rank": rw, "omega_expected": want_w, "chi_rank": rc, "chi_expected": want_c}


def evaluate_element(L: LatticeInstance, A: ArrangedBasis, x: QBasisElement) -> tuple:
    """Image of ``sum a_p(N) l_p`` in V, with N acting through the operator."""
    f = L.field
    imgs = L.images()
    order = A.order()
    out = [f.zero] * L.n
    for p, c in enumerate(x.coords):
        for d, val in enumerate(c.coeffs):
            if f.is_zero(val) or d > L.m:
                continue
            v = imgs[d][order[p] - 1]
            out = [f.add(o, f.mul(val, b)) for o, b in zip(out, v)]
    return tuple(out)


def verify_kernel_membership(L: LatticeInstance, A: ArrangedBasis, S: SiegelObject) -> dict:
    f = L.field
    bad = [w.owner for w in omega_basis(S)
           if not all(f.is_zero(c) for c in evaluate_element(L, A, w))]
    return {"check": "omega in kernel", "passed": not bad, "failures": bad}


# ---------------------------------------------------------------------------
# dual lattice


def _evaluation_matrix(L: LatticeInstance, A: ArrangedBasis) -> Mat:
    """Columns ``N^a l_p`` (``a < m``, p in segment order), index ``a * r + p``."""
    f, m, r, n = L.field, L.m, L.r, L.n
    order = A.order()
    imgs = L.images()
    cols = [imgs[a][order[p] - 1] for a in range(m) for p in range(r)]
    return Mat.from_columns(f, cols, n) if cols else Mat.zero(f, n, 0)


def _kernel_nullspace(L: LatticeInstance, A: ArrangedBasis) -> tuple[Mat, Mat]:
    f, m, r = L.field, L.m, L.r
    K = _evaluation_matrix(L, A).nullspace()
    z = f.zero
    shifted = tuple(K.data[i - r] if i >= r else (z,) * K.cols for i in range(m * r))
    Aop = solve_exact(K, Mat._raw(f, m * r, K.cols, shifted))
    return K, Aop


def _kernel_chains(L: LatticeInstance, A: ArrangedBasis, S: SiegelObject) -> tuple[Mat, Mat]:
    f, m, r = L.field, L.m, L.r
    cols, links = [], []
    for w in omega_basis(S):
        u = w.owner[0]
        for a in range(m - u + 1):
            vec = [f.zero] * (m * r)
            for p, c in enumerate(w.coords):
                for d, val in enumerate(c.coeffs):
                    if d + a < m:
                        vec[(d + a) * r + p] = val
            if a:
                links.append((len(cols), len(cols) - 1))
            cols.append(vec)
    K = Mat.from_columns(f, cols, m * r) if cols else Mat.zero(f, m * r, 0)
    if not (_evaluation_matrix(L, A) @ K).is_zero():
        raise SpanFailure("omega does not lie in the evaluation kernel")
    rows = [[f.zero] * len(cols) for _ in cols]
    for i, j in links:
        rows[i][j] = f.one
    return K, Mat._raw(f, len(cols), len(cols), tuple(tuple(x) for x in rows))


def dual_lattice(L: LatticeInstance, A: ArrangedBasis, S: SiegelObject | None = None,
                 method: str = "chains") -> LatticeInstance:
    """The dual lattice realized inside the dual of the evaluation kernel.

    ``W = L / N^m L`` has coordinates ``N^a l_p``; the kernel ``K`` of the
    evaluation ``W -> V`` is N-stable.  The dual space is ``K^*`` with the
    transposed action, and the dual vector of ``l_p`` is the functional
    reading the ``N^{m-1} l_p`` coordinate.  Dual vectors are listed in the
    order ``lambda_{m+1,*}, ..., lambda_{1,*}``.

    ``method="chains"`` takes the kernel basis ``N^a omega_{u,i}``
    (``a <= m-u``), on which N acts by shifting chains; the basis is checked
    to lie in the kernel.  ``method="nullspace"`` computes the kernel by
    elimination; it is slower and produces larger entries over function fields.
    """
    f, m, r, n = L.field, L.m, L.r, L.n
    if method == "chains":
        K, Aop = _kernel_chains(L, A, S if S is not None else extract_siegel(L, A))
    elif method == "nullspace":
        K, Aop = _kernel_nullspace(L, A)
    else:
        raise ValueError(f"unknown method {method!r}")
    dim = m * r - n
    if K.cols != dim:
        raise SpanFailure(f"evaluation kernel has dimension {K.cols}, expected {dim}")
    op = Aop.T
    vectors = [K.data[(m - 1) * r + p] for p in range(r)]
    jd_dual = jordan_data_of_operator(op, m, r)
    return LatticeInstance(f, jd_dual, Mat.from_columns(f, vectors, dim), op)


def roundtrip_dual(L: LatticeInstance, method: str = "chains") -> dict:
    """Compare the Siegel object of the dual lattice with the dual Siegel object.

    The dual is admissible when the greedy arrangement of the dual vectors,
    listed as ``lambda_{m+1,*}, ..., lambda_{1,*}``, keeps that order.
    """
    A = arrange_segments(L)
    S = extract_siegel(L, A)
    Ld = dual_lattice(L, A, S, method)
    report = {"check": "dual lattice round trip", "k": list(S.k), "dual_k": list(Ld.jordan.k),
              "jordan_dual_ok": Ld.jordan == dual_jordan_data(L.jordan)}
    try:
        Ad = arrange_segments(Ld)
    except SpanFailure as exc:
        report.update(status="inadmissible", passed=None, reason=str(exc))
        return report
    if Ad.permutation != tuple(range(1, L.r + 1)):
        report.update(status="inadmissible", passed=None,
                      reason=f"dual vectors arrange as {list(Ad.permutation)}")
        return report
    Sd = extract_siegel(Ld, Ad)
    expected = dual_siegel(S)
    ok = Sd == expected and report["jordan_dual_ok"]
    report.update(status="pass" if ok else "fail", passed=ok)
    if not ok:
        report["mismatch"] = [list(idx) for idx in expected.entries
                              if expected.entries[idx] != Sd.entries.get(idx)]
    report["siegel"] = S
    report["dual_siegel"] = Sd
    return report


def siegel_of_lattice(L: LatticeInstance) -> tuple[ArrangedBasis, SiegelObject]:
    A = arrange_segments(L)
    return A, extract_siegel(L, A)


__all__ = [
    "ArrangedBasis", "LatticeInstance", "QBasisElement", "arrange_segments",
    "check_arrangement", "check_condition_31", "chi_basis", "dual_lattice",
    "evaluate_element", "extract_siegel", "jordan_data_of_operator", "make_jordan_matrix",
    "omega_basis", "pair", "pairing_matrix", "roundtrip_dual", "siegel_of_lattice",
    "verify_kernel_membership", "verify_kernel_span", "verify_pairing",
]
