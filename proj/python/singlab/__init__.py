"""Python access to the singlab solvers.

Structured results (exponents, constants, solve reports) come back as JSON
text and are decoded here.
"""

import json as _json

from . import _core
from ._core import (
    FitError,
    M_Np,
    NonconvergenceError,
    ParameterDomainError,
    Params,
    PolarGrid,
    SingularInputError,
    classify,
    constant_profile_roots,
    existence_threshold,
    integrate,
    ko_check,
    m_star,
    m_star_star,
    m_star_star_r,
    osserman_check,
    q_star,
    solve_absorption,
    solve_min_profile,
    solve_psi,
    supersolution_radius,
    validate,
)

__version__ = _core.__version__


def exponents(params):
    return _json.loads(_core.exponents(params))


def critical_constants(params):
    return _json.loads(_core.critical_constants(params))


def fundamental_solution(grid, params, k):
    field, report = _core.fundamental_solution(grid, params, k)
    return field, _json.loads(report)
