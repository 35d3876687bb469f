"""Clenshaw-Curtis-Filon quadrature for

    I[f] = int_0^1 f(x) x^alpha (1-x)^beta e^{2ikx} H1_nu(omega x) dx

with modified moments from a nine-term recurrence.
"""

__version__ = "0.1.0"

from .ccf import MethodConfig, QuadResult, ccf_integrate, convergence_table
from .cheb import ChebSeries, Integrand, cc_nodes, hermite_correct, interp_coeffs
from .errors import CCFError
from .expr import integrand_from_text, parse_expression
from .moments import MomentTable, bvp_solve, forward_recursion, moment_table
from .oracle import OracleConfig, reference_integral, reference_moment
from .params import ProblemParams
from .startmom import starting_integral, starting_moments

__all__ = [
    "CCFError",
    "ChebSeries",
    "Integrand",
    "MethodConfig",
    "MomentTable",
    "OracleConfig",
    "ProblemParams",
    "QuadResult",
    "bvp_solve",
    "cc_nodes",
    "ccf_integrate",
    "convergence_table",
    "forward_recursion",
    "hermite_correct",
    "integrand_from_text",
    "interp_coeffs",
    "moment_table",
    "parse_expression",
    "reference_integral",
    "reference_moment",
    "starting_integral",
    "starting_moments",
]
