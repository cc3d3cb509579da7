"""Exact and numerical verification of elliptic-curve group actions, wreath-group
laws, Looijenga theta functions, isogenies and quotient-ring presentations."""

from .intlat import AltForm, contract, is_unimodular, smith_normal_form
from .qform import QuadraticForm, dual_coset_reps, is_positive_definite
from .wreath import ExtElement, Pi2Element, WreathElement, act_pi2, wreath_mul
from .moduli import FramedLattice, CurveTuple, DescendedPoint
from .theta import ConvergenceError, LatticeVector, ThetaContext, theta_eval
from .cohomology import GradedPresentation, RingSubstitution, presentation

__version__ = "0.1.0"

__all__ = [
    "AltForm", "contract", "is_unimodular", "smith_normal_form",
    "QuadraticForm", "dual_coset_reps", "is_positive_definite",
    "ExtElement", "Pi2Element", "WreathElement", "act_pi2", "wreath_mul",
    "FramedLattice", "CurveTuple", "DescendedPoint",
    "ConvergenceError", "LatticeVector", "ThetaContext", "theta_eval",
    "GradedPresentation", "RingSubstitution", "presentation",
]
