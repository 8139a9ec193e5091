"""Siegel objects, their P-polynomials, duals, and the matrices B and B-bar.

Index conventions follow the usual (u, v, y, z) quadruples: a Siegel entry
``S[u, v, y, z]`` (always ``v = u - 1``) is a ``k_u x k_y`` matrix and the
Siegel domain is ``1 <= u <= m``, ``u - 1 <= z <= m - 1``, ``z + 2 <= y <= m + 1``.
All block indices are 1-based; ``k[0]`` is ``k_1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterator, Mapping

from .errors import ShapeMismatch, SystemInconsistent
from .exact.fields import Field
from .linalg import BlockShape, Mat, NPolyMatrix, assemble, block_get

Quad = tuple[int, int, int, int]


def tetra_indices(m: int) -> list[tuple[int, int, int]]:
    """All ``(u, y, z)`` of the Siegel domain, ordered lexicographically in (u, z, y)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return [(u, y, z)
            for u in range(1, m + 1)
            for z in range(u - 1, m)
            for y in range(z + 2, m + 2)]


def tetrahedral_number(m: int) -> int:
    return comb(m + 2, 3)


def in_siegel_domain(u: int, v: int, y: int, z: int, m: int) -> bool:
    return 1 <= u <= m and v == u - 1 and u - 1 <= z <= m - 1 and z + 2 <= y <= m + 1


def in_p_domain(u: int, v: int, y: int, z: int, m: int) -> bool:
    """Non-trivial domain of definition of P."""
    return (1 <= u <= m + 1 and 0 <= v <= m - 1 and v >= u - 1
            and v <= z <= m - 1 and z + 2 <= y <= m + 1)


def p_domain(m: int) -> list[Quad]:
    return [(u, v, y, z)
            for v in range(m - 1, -1, -1)
            for u in range(v + 1, 0, -1)
            for z in range(v, m)
            for y in range(z + 2, m + 2)]


def symmetry_s(idx: Quad, m: int) -> Quad:
    a, b, c, d = idx
    return (m + 2 - c, m - 1 - d, m + 2 - a, m - 1 - b)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SiegelObject:
    """Matrices ``S[u, u-1, y, z]`` of sizes ``k_u x k_y`` for every tetrahedral index."""

    field: Field
    k: tuple[int, ...]
    entries: Mapping[tuple[int, int, int], Mat] = dc_field(repr=False)

    def __post_init__(self):
        k = tuple(int(x) for x in self.k)
        object.__setattr__(self, "k", k)
        if len(k) < 2 or any(x < 0 for x in k):
            raise ShapeMismatch(f"bad shape {k}")
        m = len(k) - 1
        want = set(tetra_indices(m))
        have = set(self.entries)
        if have != want:
            raise ShapeMismatch(f"missing {sorted(want - have)}, unexpected {sorted(have - want)}")
        for (u, y, z), M in self.entries.items():
            if M.shape != (k[u - 1], k[y - 1]):
                raise ShapeMismatch(f"S[{u},{u - 1},{y},{z}] is {M.shape}, expected {(k[u - 1], k[y - 1])}")
            if M.field != self.field:
                raise ShapeMismatch(f"S[{u},{u - 1},{y},{z}] over {M.field}, expected {self.field}")
        object.__setattr__(self, "entries", dict(sorted(self.entries.items(), key=lambda kv: (kv[0][0], kv[0][2], kv[0][1]))))

    @property
    def m(self) -> int:
        return len(self.k) - 1

    @property
    def r(self) -> int:
        return sum(self.k)

    def size(self, i: int) -> int:
        """``k_i`` (1-indexed)."""
        return self.k[i - 1]

    def __getitem__(self, idx) -> Mat:
        """``S[u, v, y, z]`` or ``S[u, y, z]``."""
        if len(idx) == 4:
            u, v, y, z = idx
            if v != u - 1:
                raise KeyError(f"Siegel entries have v = u - 1, got {idx}")
        else:
            u, y, z = idx
        return self.entries[u, y, z]

    def get(self, u: int, v: int, y: int, z: int) -> Mat | None:
        """Entry if the quadruple is in the Siegel domain, else ``None``."""
        if in_siegel_domain(u, v, y, z, self.m):
            return self.entries[u, y, z]
        return None

    def items(self) -> Iterator[tuple[tuple[int, int, int], Mat]]:
        return iter(self.entries.items())

    def __eq__(self, other):
        if not isinstance(other, SiegelObject):
            return NotImplemented
        return self.field == other.field and self.k == other.k and dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash((self.field, self.k, tuple(self.entries.items())))


# the dual has the same layout with the reversed shape
DualSiegelObject = SiegelObject


class PTable:
    """P-polynomials on their non-trivial domain, with the trivial-domain convention
    ``P = -I`` if ``(y, z) = (u, v)`` and ``0`` otherwise answered at lookup."""

    def __init__(self, field: Field, k: tuple[int, ...], entries: dict[Quad, Mat]):
        self.field = field
        self.k = tuple(k)
        self.entries = entries

    @property
    def m(self) -> int:
        return len(self.k) - 1

    def __getitem__(self, idx: Quad) -> Mat:
        u, v, y, z = idx
        m, k = self.m, self.k
        if in_p_domain(u, v, y, z, m):
            return self.entries[idx]
        if 1 <= u <= m + 1 and 0 <= v < u - 1 and v <= z <= m - 1 and z + 2 <= y <= m + 1:
            if (y, z) == (u, v):
                return -Mat.identity(self.field, k[u - 1])
            return Mat.zero(self.field, k[u - 1], k[y - 1])
        raise KeyError(f"P{idx} is undefined for m = {m}")

    def __contains__(self, idx) -> bool:
        return idx in self.entries

    def items(self):
        return self.entries.items()

    def __eq__(self, other):
        if not isinstance(other, PTable):
            return NotImplemented
        return self.field == other.field and self.k == other.k and self.entries == other.entries


def compute_P(S: SiegelObject) -> PTable:
    """All P on the non-trivial domain by the descending recurrence.

    For fixed ``v`` the entries are built for ``u = v+1`` (the Siegel layer)
    down to ``u = 1``; each step only reads P with larger ``v`` or, at the
    same ``v``, larger ``u``.
    """
    m, k, f = S.m, S.k, S.field
    P: dict[Quad, Mat] = {}
    for v in range(m - 1, -1, -1):
        for u in range(v + 1, 0, -1):
            for z in range(v, m):
                for y in range(z + 2, m + 2):
                    if u == v + 1:
                        P[u, v, y, z] = S[u, y, z]
                        continue
                    acc = Mat.zero(f, k[u - 1], k[y - 1])
                    for beta in range(0, z - v + 1):
                        Suz = u - 1 + beta
                        for alpha in range(u + 1 + beta, v + 2 + beta):
                            Sblk = S[u, alpha, Suz]
                            if Sblk.rows and Sblk.cols:
                                acc = acc + Sblk @ P[alpha, v + beta, y, z]
                    tail = S.get(u, u - 1, y, u - 1 + z - v)
                    P[u, v, y, z] = (tail - acc) if tail is not None else -acc
    return PTable(f, k, P)


def recurrence_residuals(S: SiegelObject, P: PTable | None = None) -> dict[Quad, Mat]:
    """Left side of the recurrence for every admissible ``(i, j, psi, xi)``."""
    if P is None:
        P = compute_P(S)
    m, k, f = S.m, S.k, S.field
    out = {}
    for i in range(2, m + 2):
        for j in range(1, m - i + 3):
            for xi in range(m - j, m):
                for psi in range(xi + 2, m + 2):
                    acc = Mat.zero(f, k[i - 2], k[psi - 1])
                    for beta in range(0, j + xi - m + 1):
                        for alpha in range(i + beta, m + 2 - j + beta):
                            acc = acc + S[i - 1, alpha, i - 2 + beta] @ P[alpha, m - j + beta, psi, xi]
                    tail = S.get(i - 1, i - 2, psi, i - 2 + xi + j - m)
                    if tail is not None:
                        acc = acc - tail
                    out[i, j, psi, xi] = acc + P[i - 1, m - j, psi, xi]
    return out


def verify_recurrence(S: SiegelObject, P: PTable | None = None) -> dict:
    res = recurrence_residuals(S, P)
    bad = [idx for idx, M in res.items() if not M.is_zero()]
    return {"check": "recurrence", "passed": not bad, "tuples": len(res), "failures": bad}


def dual_siegel(S: SiegelObject, P: PTable | None = None) -> SiegelObject:
    """``Sbar[u, v, y, z] = -P[s(u, v, y, z)]^T``; shape reversed."""
    if P is None:
        P = compute_P(S)
    m = S.m
    entries = {}
    for u, y, z in tetra_indices(m):
        entries[u, y, z] = -P[symmetry_s((u, u - 1, y, z), m)].T
    return SiegelObject(S.field, S.k[::-1], entries)


# ---------------------------------------------------------------------------
# B and B-bar


def build_C(S: SiegelObject) -> list[Mat]:
    m, k, f = S.m, S.k, S.field
    shape = BlockShape.skew(k)
    out = []
    for i in range(m + 1):
        blocks = {}
        for a in range(1, m + 2):
            for b in range(1, m + 2):
                blk = S.get(m + 2 - b, m + 1 - b, a, i)
                if blk is not None:
                    blocks[a, b] = blk.T
        blocks[i + 1, m + 1 - i] = Mat.identity(f, k[i])
        out.append(assemble(f, shape, blocks))
    return out


def build_B(S: SiegelObject) -> NPolyMatrix:
    return NPolyMatrix(S.field, S.r, S.r, build_C(S))


def cbar_unknown_positions(m: int) -> list[tuple[int, int, int]]:
    """``(i, alpha, beta)`` with ``0 <= i <= m-1``, ``1 <= beta <= i+1``, ``1 <= alpha <= m-i``."""
    return [(i, a, b) for i in range(m) for b in range(1, i + 2) for a in range(1, m - i + 1)]


def build_Cbar(S: SiegelObject, P: PTable | None = None) -> list[Mat]:
    if P is None:
        P = compute_P(S)
    m, k, f = S.m, S.k, S.field
    shape = BlockShape.skew(k)
    blocks: list[dict] = [{} for _ in range(m + 1)]
    for i, a, b in cbar_unknown_positions(m):
        blocks[i][a, b] = -P[a, m - 1 - i, m + 2 - b, m - b]
    for i in range(m + 1):
        blocks[i][m + 1 - i, i + 1] = Mat.identity(f, k[m - i])
    return [assemble(f, shape, bl) for bl in blocks]


def build_Bbar(S: SiegelObject, P: PTable | None = None) -> NPolyMatrix:
    return NPolyMatrix(S.field, S.r, S.r, build_Cbar(S, P))


def verify_BBbar(S: SiegelObject, P: PTable | None = None) -> dict:
    """``B^T B-bar`` must equal ``I_r N^m``."""
    m, r, f = S.m, S.r, S.field
    prod = build_B(S).T @ build_Bbar(S, P)
    expected = NPolyMatrix(f, r, r, [Mat.zero(f, r, r)] * m + [Mat.identity(f, r)])
    bad = [mu for mu in range(max(len(prod.coeffs), m + 1))
           if prod.coeff(mu) != expected.coeff(mu)]
    return {"check": "B^T Bbar = I N^m", "passed": not bad, "product": prod, "failures": bad}


def recover_Bbar(B: NPolyMatrix, k) -> NPolyMatrix:
    """The unique X with the B-bar zero/identity pattern and ``B^T X = 0 mod N^m``.

    Unknown blocks ``(X_i)_{alpha beta}`` are solved in decreasing order of
    ``i + alpha``; block ``(X_i)_{alpha beta}`` is read off equation
    ``(mu, nu, pi) = (i + alpha - 1, m + 2 - alpha, beta)``.
    """
    k = tuple(k)
    m = len(k) - 1
    f = B.field
    shape = BlockShape.skew(k)
    if (B.rows, B.cols) != shape.dims:
        raise ShapeMismatch(f"B is {B.rows}x{B.cols}, shape {k} needs {shape.dims}")
    Cb = [[[block_get(B.coeff(g), shape, d, n) for n in range(1, m + 2)] for d in range(1, m + 2)]
          for g in range(m + 1)]

    X: dict[tuple[int, int, int], Mat] = {}
    for i in range(m + 1):
        X[i, m + 1 - i, i + 1] = Mat.identity(f, k[m - i])
    unknowns = cbar_unknown_positions(m)
    pending = set(unknowns)

    def xblock(i, a, b):
        if (i, a, b) in pending:
            raise SystemInconsistent(f"back-substitution reached unsolved block X_{i}[{a},{b}]")
        blk = X.get((i, a, b))
        return blk if blk is not None else Mat.zero(f, k[a - 1], k[m + 1 - b])

    for i, a, b in sorted(unknowns, key=lambda t: -(t[0] + t[1])):
        mu, nu = i + a - 1, m + 2 - a
        acc = Mat.zero(f, k[m + 1 - nu], k[m + 1 - b])
        for g in range(0, mu + 1):
            for d in range(1, m + 2):
                if (g, d) == (a - 1, a):
                    continue
                Cgdn = Cb[g][d - 1][nu - 1]
                if Cgdn.is_zero():
                    continue
                acc = acc + Cgdn.T @ xblock(mu - g, d, b)
        ident = Cb[a - 1][a - 1][nu - 1]
        if not ident.is_identity():
            raise SystemInconsistent(f"B has no identity block at C_{a - 1}[{a},{nu}]")
        X[i, a, b] = -acc
        pending.discard((i, a, b))

    coeffs = []
    for i in range(m + 1):
        coeffs.append(assemble(f, shape, {(a, b): M for (ii, a, b), M in X.items() if ii == i}))
    Xpoly = NPolyMatrix(f, B.rows, B.cols, coeffs)
    check = (B.T @ Xpoly).truncate(m)
    if check.coeffs:
        raise SystemInconsistent("B^T X is not divisible by N^m; input is not a valid B")
    return Xpoly


def build_gothic_S(S: SiegelObject) -> Mat:
    """Block unitriangular matrix with block ``(i, j) = S[i, i-1, j, i-1]`` above the diagonal."""
    m, k, f = S.m, S.k, S.field
    blocks = {(i, i): Mat.identity(f, k[i - 1]) for i in range(1, m + 2)}
    for i in range(1, m + 2):
        for j in range(i + 1, m + 2):
            blocks[i, j] = S[i, j, i - 1]
    return assemble(f, BlockShape.square(k), blocks)


def build_gothic_P(S: SiegelObject, P: PTable | None = None) -> Mat:
    """Block unitriangular matrix with block ``(i, j) = -P[i, j-2, j, j-2]`` above the diagonal."""
    if P is None:
        P = compute_P(S)
    m, k, f = S.m, S.k, S.field
    blocks = {(i, i): Mat.identity(f, k[i - 1]) for i in range(1, m + 2)}
    for i in range(1, m + 2):
        for j in range(i + 1, m + 2):
            blocks[i, j] = -P[i, j - 2, j, j - 2]
    return assemble(f, BlockShape.square(k), blocks)
