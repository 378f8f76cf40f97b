"""Ramsey degrees of finite local orders, computed and cross-checked by brute force."""

from .degrees import arrow_check, big_ramsey_degree, small_ramsey_degree
from .pstruct import PnStructure, enumerate_extensions, project
from .tangent import tangent_derivative
from .tournaments import Tournament, enumerate_tournaments, is_local_order

__version__ = "0.1.0"

__all__ = [
    "PnStructure",
    "Tournament",
    "arrow_check",
    "big_ramsey_degree",
    "enumerate_extensions",
    "enumerate_tournaments",
    "is_local_order",
    "project",
    "small_ramsey_degree",
    "tangent_derivative",
]
