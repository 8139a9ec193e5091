from __future__ import annotations

import json
import random

import pytest

from siegeldual.errors import ParseError
from siegeldual.exact import QQ, FiniteField
from siegeldual.exact.series import theta_shift
from siegeldual.generate import random_lattice, random_partition, random_shape, random_siegel
from siegeldual.lattice import LatticeInstance
from siegeldual.linalg import Mat
from siegeldual.partitions import jordan_data
from siegeldual.serialize import dumps, from_json, loads, parse_quad, to_json
from siegeldual.siegel import compute_P

from .helpers import FIELDS, T_FIELD


@pytest.mark.parametrize("name", sorted(FIELDS))
def test_siegel_and_ptable_roundtrip(name):
    F = FIELDS[name]
    rng = random.Random(1)
    for m in (1, 2, 3):
        S = random_siegel(F, random_shape(m, rng, 6), rng)
        assert loads(dumps(S)) == S
        P = compute_P(S)
        back = loads(dumps(P))
        assert dict(back.items()) == dict(P.items())


def test_values_are_strings():
    S = random_siegel(QQ, (1, 2), random.Random(2))
    doc = to_json(S)
    for rows in doc["entries"].values():
        assert all(isinstance(x, str) for row in rows for x in row)
    assert "1,0,2,0" in doc["entries"]


def test_finite_field_modulus_recorded():
    F = FiniteField(2, 3)
    S = random_siegel(F, (2, 1), random.Random(3))
    doc = json.loads(dumps(S))
    assert doc["field"]["modulus"]
    back = from_json(doc)
    assert back == S and back.field == F


@pytest.mark.parametrize("field", [QQ, FIELDS["F13t"]])
def test_lattice_roundtrip(field):
    rng = random.Random(4)
    L = random_lattice(field, random_partition(2, 4, rng), rng)
    back = loads(dumps(L))
    assert back.basis == L.basis and back.jordan == L.jordan and back.operator == L.operator


def test_lattice_with_operator():
    jd = jordan_data((1,), 1, 1)
    L = LatticeInstance(QQ, jd, Mat.identity(QQ, 1), Mat.zero(QQ, 1, 1))
    assert "operator" not in to_json(L)
    doc = to_json(L)
    doc["operator"] = [["0"]]
    assert from_json(doc).operator == L.operator


def test_series_roundtrip():
    s = theta_shift(T_FIELD("1/T^2"), 4)
    back = loads(dumps(s))
    assert back.coefficients() == s.coefficients() and back.order == s.order


@pytest.mark.parametrize("text", [
    "not json",
    "[1, 2]",
    '{"type": "unknown"}',
    '{"type": "siegel", "field": "Q", "k": [1, 1], "entries": {}}',
    '{"type": "siegel", "field": "Q", "k": [1, 1], "entries": {"1,0,2,0": [[1]]}}',
    '{"type": "siegel", "field": "Q", "k": [1, 1], "entries": {"1,0,2,0": [["1", "2"]]}}',
    '{"type": "siegel", "field": "Q", "k": [1, 1], "entries": {"1,0,2,0": [["1"]], "9,9,9,9": [["1"]]}}',
    '{"type": "siegel", "field": "Q", "k": [1, 1], "entries": {"1,0,2,0": [["1/0"]]}}',
    '{"type": "ptable", "field": "Q", "k": [1, 1], "entries": {"2,0,2,0": [["1"]]}}',
    '{"type": "siegel", "k": [1, 1], "entries": {}}',
])
def test_malformed(text):
    with pytest.raises(ParseError):
        loads(text)


def test_parse_quad():
    assert parse_quad("1,0,2,0") == (1, 0, 2, 0)
    for bad in ("1,2,3", "a,b,c,d"):
        with pytest.raises(ParseError):
            parse_quad(bad)
