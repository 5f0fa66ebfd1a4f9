"""Exact invariants and minimal families of space curves.

Given a graded polynomial matrix over a discrete valuation ring presenting a
sheaf on projective 3-space, this package computes the per-degree invariants
(alpha, beta), the threshold b0, the q-function, the minimal shift h0 and the
degree/genus of the minimal family of space curves in the associated
biliaison class, all with exact arithmetic.
"""

from biliaison.polyring import FieldSpec, MultiPoly
from biliaison.grmatrix import CharFunction, GradedMatrix

__all__ = ["FieldSpec", "MultiPoly", "CharFunction", "GradedMatrix"]

__version__ = "0.1.0"
