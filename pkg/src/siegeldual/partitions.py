"""Partitions with zeroes, dual partitions and the Jordan invariants k_i."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LengthTooSmall, NilpotencyTooSmall


@dataclass(frozen=True)
class PartitionWithZeroes:
    """Weakly decreasing non-negative integers padded with zeroes to ``length``."""

    parts: tuple[int, ...]

    def __init__(self, parts, length: int | None = None):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        if length is not None:
            nonzero = sum(1 for p in parts if p)
            if length < nonzero:
                raise LengthTooSmall(f"length {length} < {nonzero} nonzero parts")
            parts = tuple(p for p in parts if p) + (0,) * (length - nonzero)
        object.__setattr__(self, "parts", parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    def __getitem__(self, i: int) -> int:
        """1-indexed access, ``p[i] = d_i``."""
        return self.parts[i - 1]

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


def dual_partition(p: PartitionWithZeroes, target_length: int) -> PartitionWithZeroes:
    """``result_i = #{j : p_j >= i}`` for ``i = 1..target_length``."""
    if target_length < p.largest:
        raise LengthTooSmall(f"target length {target_length} < largest part {p.largest}")
    return PartitionWithZeroes([sum(1 for d in p if d >= i) for i in range(1, target_length + 1)])


@dataclass(frozen=True)
class JordanData:
    """Discrete invariants of a nilpotent N with ``N^m = 0`` and a rank-r lattice.

    ``k`` is stored 1-indexed in meaning, ``k[0] = k_1`` ... ``k[m] = k_{m+1}``,
    zero entries kept.
    """

    m: int
    d: PartitionWithZeroes
    c: PartitionWithZeroes
    k: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.d)

    @property
    def n(self) -> int:
        return self.d.total

    def kernel_dims(self) -> list[int]:
        """``dim Ker N^i = c_1 + ... + c_i`` for ``i = 0..m``."""
        out, acc = [0], 0
        for ci in self.c:
            acc += ci
            out.append(acc)
        return out

    def image_dim(self, u: int) -> int:
        """``dim N^u V``."""
        return self.n - self.kernel_dims()[min(u, self.m)]


def jordan_data(d, m: int, r: int | None = None) -> JordanData:
    """Invariants from the Jordan partition ``d`` (padded to length ``r``)."""
    if m < 1:
        raise ValueError("nilpotency degree m must be >= 1")
    if not isinstance(d, PartitionWithZeroes):
        d = PartitionWithZeroes(sorted(d, reverse=True), r)
    elif r is not None and r != d.length:
        d = PartitionWithZeroes(d.parts, r)
    if d.largest > m:
        raise NilpotencyTooSmall(f"Jordan block of size {d.largest} but m = {m}")
    c = dual_partition(d, m)
    cc = (d.length,) + c.parts + (0,)
    k = tuple(cc[i - 1] - cc[i] for i in range(1, m + 2))
    return JordanData(m=m, d=d, c=c, k=k)


def jordan_data_from_k(k, m: int | None = None) -> JordanData:
    """Inverse direction: the k-vector determines c and hence d."""
    k = tuple(int(x) for x in k)
    if any(x < 0 for x in k):
        raise ValueError(f"negative k entry in {k}")
    if m is None:
        m = len(k) - 1
    if len(k) != m + 1:
        raise ValueError(f"k must have m+1 = {m + 1} entries")
    r = sum(k)
    # c_i = c_{i-1} - k_i with c_0 = r
    c, acc = [], r
    for ki in k[:-1]:
        acc -= ki
        c.append(acc)
    d = dual_partition(PartitionWithZeroes(c), r) if r else PartitionWithZeroes(())
    return jordan_data(d, m)


def dual_jordan_data(jd: JordanData) -> JordanData:
    """Jordan data of the m-dual: ``d'_i = m - d_{r+1-i}``."""
    r, m = jd.r, jd.m
    d_dual = PartitionWithZeroes([m - jd.d[r + 1 - i] for i in range(1, r + 1)])
    return jordan_data(d_dual, m)
