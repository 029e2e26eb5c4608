"""Exact Briancon-Skoda membership toolkit for thickened smooth germs."""

from .polycore import (
    AmbientRing,
    GroebnerBasis,
    Ideal,
    Polynomial,
    arith,
    derivative,
    groebner,
    ideal_member,
    ideal_power,
    normal_form,
    parse_polynomial,
)

__all__ = [
    "AmbientRing",
    "GroebnerBasis",
    "Ideal",
    "Polynomial",
    "arith",
    "derivative",
    "groebner",
    "ideal_member",
    "ideal_power",
    "normal_form",
    "parse_polynomial",
]
