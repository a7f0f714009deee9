"""Numerical laboratory for Jacob's ladders on the critical line."""
from .errors import (AdmissibilityError, BracketError, BranchLossError, ConfigError, CoverageError,
                     DomainError, IndexConstraintError, IterationDepthError, LadderConsistencyError,
                     LadderLabError, RangeCapError, ResourceError)
from .functionals import FermatTriple, FunctionalEstimate, Functionals, fermat_rational
from .ladder import JacobLadder, LadderChain, LadderConfig, build_chain, phi1, phi1_iter, reverse_step
from .ortho import GenerationSpec, Generator, GramReport, IdentityLadder, gram_matrix
from .phase import PhaseTrack, build_phase_track, s1_of_t, s_of_t
from .quadrature import IntegralResult, get_integrator, hl_integral, integrate
from .reports import TheoremReport
from .zeta import CriticalSample, hardy_z, theta, zeta_mod_sq

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError", "BracketError", "BranchLossError", "ConfigError", "CoverageError",
    "CriticalSample", "DomainError", "FermatTriple", "FunctionalEstimate", "Functionals",
    "GenerationSpec", "Generator", "GramReport", "IdentityLadder", "IndexConstraintError",
    "IntegralResult", "IterationDepthError", "JacobLadder", "LadderChain", "LadderConfig",
    "LadderConsistencyError", "LadderLabError", "PhaseTrack", "RangeCapError", "ResourceError",
    "TheoremReport", "build_chain", "build_phase_track", "fermat_rational", "get_integrator",
    "gram_matrix", "hardy_z", "hl_integral", "integrate", "phi1", "phi1_iter", "reverse_step",
    "s1_of_t", "s_of_t", "theta", "zeta_mod_sq",
]
