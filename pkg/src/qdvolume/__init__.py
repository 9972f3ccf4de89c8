"""Quantum dilogarithm evaluation and saddle-point volumes of braid closures."""
from ._kernels import BACKEND
from .braid import BraidSyntaxError, BraidWord, build_diagram, parse_braid
from .dilog import DomainError, bloch_wigner, clausen2, li2, rogers_l
from .glue import SaddleSystem, assemble
from .qdilog import PhiParams, QuadratureSpec, StripError, h_closed, log_phi, phi
from .solve import SolverConfig, solve_all

__version__ = "0.1.0"
