"""Exact computations with finite algebras over the rationals.

Inverse systems and Hilbert functions, ideals of finite colength, commuting
matrix tuples and their tangent spaces, ray decompositions, and a catalogue
of recorded instances with a verification runner.
"""

from .apolarity import InverseSystem, apolar_algebra, hilbert_function, socle_type
from .commuting import (CommutingTuple, hilb_tangent_dim, kernel_profile, principal_component_dim,
                        tangent_space_dim)
from .errors import FiniteAlgError
from .ideals import FiniteIdeal, colength, equals, initial_ideal, intersect, local_hilbert_function
from .poly import DualPolynomial, OperatorPolynomial
from .raydeg import StandardForm, ray_decompose, to_standard_form

__version__ = "0.1.0"

__all__ = [
    "CommutingTuple", "DualPolynomial", "FiniteAlgError", "FiniteIdeal", "InverseSystem",
    "OperatorPolynomial", "StandardForm", "apolar_algebra", "colength", "equals", "hilb_tangent_dim",
    "hilbert_function", "initial_ideal", "intersect", "kernel_profile", "local_hilbert_function",
    "principal_component_dim", "ray_decompose", "socle_type", "tangent_space_dim", "to_standard_form",
]
