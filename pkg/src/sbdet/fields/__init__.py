"""Exact arithmetic in Q(omega)(vars) and cyclic cubic towers over it."""

from .cubes import RootResult, is_cube, is_cube_in, is_square, valuation_certificate
from .cyclotomic import Cyclotomic, cyclotomic_root
from .ops import (
    Specializer,
    Hilbert90Result,
    galois_apply,
    hilbert90_solve,
    hilbert90_solve_detailed,
    norm,
    random_base_element,
    random_element,
)
from .parse import parse_expression
from .tower import G, GP, IDENTITY, FieldTower, GaloisElement, TowerElement, tower_make

RationalFunction = TowerElement  # elements of a tower without layers

__all__ = [
    "Cyclotomic",
    "FieldTower",
    "G",
    "GP",
    "GaloisElement",
    "Hilbert90Result",
    "IDENTITY",
    "RationalFunction",
    "RootResult",
    "Specializer",
    "TowerElement",
    "cyclotomic_root",
    "galois_apply",
    "hilbert90_solve",
    "hilbert90_solve_detailed",
    "is_cube",
    "is_cube_in",
    "is_square",
    "norm",
    "parse_expression",
    "random_base_element",
    "random_element",
    "tower_make",
    "valuation_certificate",
]
