from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegeldual.errors import LengthTooSmall, NilpotencyTooSmall
from siegeldual.exact import QQ
from siegeldual.lattice import make_jordan_matrix
from siegeldual.partitions import (
    PartitionWithZeroes,
    dual_jordan_data,
    dual_partition,
    jordan_data,
    jordan_data_from_k,
)


def test_dual_partition_example():
    assert dual_partition(PartitionWithZeroes((2, 1, 0)), 2).parts == (2, 1)
    assert dual_partition(PartitionWithZeroes((0, 0, 0)), 4).parts == (0, 0, 0, 0)
    with pytest.raises(LengthTooSmall):
        dual_partition(PartitionWithZeroes((3, 1)), 2)
    with pytest.raises(LengthTooSmall):
        PartitionWithZeroes((2, 2, 1), length=2)


def test_jordan_examples():
    jd = jordan_data((2, 1, 0), 2, 3)
    assert (jd.c.parts, jd.k, jd.n) == ((2, 1), (1, 1, 1), 3)
    jd = jordan_data((3, 3), 3, 2)
    assert (jd.c.parts, jd.k, jd.n) == ((2, 2, 2), (0, 0, 0, 2), 6)
    with pytest.raises(NilpotencyTooSmall):
        jordan_data((3, 1), 2)


@pytest.mark.parametrize("r,n", [(3, 0), (3, 1), (4, 2), (2, 2)])
def test_m1_case(r, n):
    jd = jordan_data([1] * n, 1, r)
    assert jd.k == (r - n, n)


def test_dual_examples():
    jd = dual_jordan_data(jordan_data((2, 1, 0), 2, 3))
    assert jd.d.parts == (2, 1, 0)
    jd = dual_jordan_data(jordan_data((1, 0), 1, 2))
    assert jd.d.parts == (1, 0) and jd.n == 1


partitions = st.integers(1, 8).flatmap(
    lambda m: st.tuples(st.just(m), st.lists(st.integers(0, m), min_size=1, max_size=8)))


@given(partitions)
def test_partition_properties(data):
    m, parts = data
    d = sorted(parts, reverse=True)
    jd = jordan_data(d, m, len(d))
    r = len(d)
    assert sum(jd.k) == r
    assert jd.n == sum(i * jd.k[i] for i in range(m + 1))
    assert all(x >= 0 for x in jd.k)
    dual = dual_jordan_data(jd)
    assert dual.k == tuple(reversed(jd.k))
    assert jd.n + dual.n == m * r
    assert dual_jordan_data(dual) == jd
    assert jordan_data_from_k(jd.k) == jd
    # involution of the plain dual partition
    assert dual_partition(dual_partition(jd.d, m), r) == jd.d


def test_rank_oracle():
    rng = random.Random(2)
    for _ in range(60):
        m = rng.randint(1, 5)
        r = rng.randint(1, 5)
        d = sorted((rng.randint(0, m) for _ in range(r)), reverse=True)
        jd = jordan_data(d, m, r)
        N = make_jordan_matrix(jd, QQ)
        M = N.identity(QQ, jd.n)
        dims = []
        for _ in range(m + 1):
            dims.append(jd.n - M.rank())
            M = M @ N
        assert dims == jd.kernel_dims()
