"""Seeded random instances: field values, shapes, Siegel objects and lattices."""

from __future__ import annotations

import random

from .exact.fields import Field, RationalFunctionField
from .lattice import LatticeInstance, check_condition_31
from .linalg import Mat
from .partitions import JordanData, jordan_data
from .siegel import SiegelObject, tetra_indices


def random_value(field: Field, rng: random.Random, bound: int = 2, degree: int = 1):
    """Raw random element.

    Rational functions get numerator and denominator degrees up to ``degree``
    with base coefficients from the base field's small box.
    """
    if isinstance(field, RationalFunctionField):
        return field.random(rng, bound, num_degree=degree, den_degree=degree)
    return field.random(rng, bound)


def random_matrix(field: Field, rows: int, cols: int, rng: random.Random,
                  bound: int = 2, degree: int = 1) -> Mat:
    return Mat._raw(field, rows, cols, tuple(
        tuple(random_value(field, rng, bound, degree) for _ in range(cols)) for _ in range(rows)))


def random_shape(m: int, rng: random.Random, max_r: int = 10, min_r: int = 1) -> tuple[int, ...]:
    """Random ``k`` with ``m + 1`` non-negative entries and ``min_r <= sum <= max_r``."""
    r = rng.randint(min_r, max_r)
    cuts = sorted(rng.randint(0, r) for _ in range(m))
    bounds = [0] + cuts + [r]
    return tuple(bounds[i + 1] - bounds[i] for i in range(m + 1))


def random_siegel(field: Field, k, rng: random.Random, bound: int = 2, degree: int = 1) -> SiegelObject:
    k = tuple(k)
    m = len(k) - 1
    entries = {(u, y, z): random_matrix(field, k[u - 1], k[y - 1], rng, bound, degree)
               for u, y, z in tetra_indices(m)}
    return SiegelObject(field, k, entries)


def random_partition(m: int, r: int, rng: random.Random, max_n: int | None = None) -> JordanData:
    """Jordan data with ``r`` parts in ``[0, m]``, largest part ``m`` when possible."""
    while True:
        parts = sorted((rng.randint(0, m) for _ in range(r)), reverse=True)
        if max_n is None or sum(parts) <= max_n:
            return jordan_data(parts, m, r)


def random_lattice(field: Field, jordan: JordanData, rng: random.Random, bound: int = 2,
                   degree: int = 1, retries: int = 20) -> LatticeInstance | None:
    """Random lattice vectors satisfying the spanning condition, or ``None``."""
    for _ in range(retries):
        basis = random_matrix(field, jordan.n, jordan.r, rng, bound, degree)
        L = LatticeInstance(field, jordan, basis)
        if check_condition_31(L):
            return L
    return None
