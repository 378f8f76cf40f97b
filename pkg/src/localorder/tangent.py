"""Exact Bernoulli numbers and odd derivatives of tan at 0.

Two independent routes to tan^(2m-1)(0):

* the closed form ``B_2m (-4)^m (1 - 4^m) / (2m)`` in exact rationals;
* the boustrophedon (Seidel-Entringer) triangle, integers only, whose
  odd-indexed diagonal entries are the tangent numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

__all__ = [
    "TangentTable",
    "bernoulli",
    "bernoulli_numbers",
    "tangent_derivative",
    "tangent_formula",
    "tangent_table",
    "zigzag_numbers",
]


@lru_cache(maxsize=None)
def _bernoulli_list(n: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1, B_0 = 1 (so B_1 = -1/2).
    b = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, j) * b[j] for j in range(m))
        b.append(-s / (m + 1))
    return tuple(b)


def bernoulli_numbers(n: int) -> list[Fraction]:
    """B_0 .. B_n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return list(_bernoulli_list(n))


def bernoulli(n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be >= 0")
    return _bernoulli_list(n)[n]


def zigzag_numbers(count: int) -> list[int]:
    """Euler zigzag numbers A_0 .. A_{count-1} via the boustrophedon triangle."""
    if count <= 0:
        return []
    out = [1]
    row = [1]
    for k in range(1, count):
        new = [0]
        for j in range(k):
            new.append(new[-1] + row[k - 1 - j])
        row = new
        out.append(row[-1])
    return out


def tangent_formula(m: int) -> int:
    """tan^(2m-1)(0) from the Bernoulli closed form."""
    if m < 1:
        raise ValueError("m must be >= 1")
    val = bernoulli(2 * m) * (-4) ** m * (1 - 4 ** m) / (2 * m)
    if val.denominator != 1:
        raise ArithmeticError(f"closed form for m={m} is not an integer: {val}")
    return val.numerator


def tangent_derivative(odd_order: int, check: bool = True) -> int:
    """tan^(odd_order)(0) for odd ``odd_order >= 1``.

    With ``check`` the zigzag triangle must agree, otherwise ArithmeticError.
    """
    if odd_order < 1 or odd_order % 2 == 0:
        raise ValueError(f"order must be odd and >= 1, got {odd_order}")
    m = (odd_order + 1) // 2
    value = tangent_formula(m)
    if check:
        other = zigzag_numbers(odd_order + 1)[odd_order]
        if other != value:
            raise ArithmeticError(f"tan^({odd_order})(0): closed form {value} != zigzag {other}")
    return value


@dataclass(frozen=True)
class TangentTable:
    max_index: int
    values: tuple[int, ...]  # values[m] = tan^(2m-1)(0); values[0] unused (0)

    def __getitem__(self, m: int) -> int:
        if not 1 <= m <= self.max_index:
            raise IndexError(m)
        return self.values[m]

    def rows(self) -> list[tuple[int, int, int]]:
        return [(m, 2 * m - 1, self.values[m]) for m in range(1, self.max_index + 1)]


def tangent_table(max_m: int, check: bool = True) -> TangentTable:
    zz = zigzag_numbers(2 * max_m) if check else None
    values = [0]
    for m in range(1, max_m + 1):
        v = tangent_formula(m)
        if zz is not None and zz[2 * m - 1] != v:
            raise ArithmeticError(f"m={m}: closed form {v} != zigzag {zz[2 * m - 1]}")
        values.append(v)
    return TangentTable(max_m, tuple(values))
