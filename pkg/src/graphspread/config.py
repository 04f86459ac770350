"""Numerical tolerances used throughout the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    residual: float = 1e-10
    symmetry: float = 1e-12
    norm: float = 1e-10
    # second eigenvalue closer than this to the first flags a multiplicity
    degeneracy: float = 1e-8
    # structural predicates on exact-weight vs. floating-weight graphs
    structure_exact: float = 1e-12
    structure_float: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()
