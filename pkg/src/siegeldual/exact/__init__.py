"""Exact arithmetic tower: Q, F_{p^e}, rational function fields, series."""

from .fields import (
    QQ,
    Field,
    FieldValue,
    FiniteField,
    RationalFunctionField,
    Rationals,
    default_modulus,
    field_from_json,
    field_from_name,
    parse_field,
)
from .poly import Poly
from .series import LaurentSeries, theta_shift, theta_shift_fraction

__all__ = [
    "QQ",
    "Field",
    "FieldValue",
    "FiniteField",
    "LaurentSeries",
    "Poly",
    "RationalFunctionField",
    "Rationals",
    "default_modulus",
    "field_from_json",
    "field_from_name",
    "parse_field",
    "theta_shift",
    "theta_shift_fraction",
]
