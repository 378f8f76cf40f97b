"""Ramsey degrees, the extension-class colourings, and a brute-force arrow checker.

Colours are ``0..k-1``.  A copy of X in Z is a sorted tuple of Z-vertices.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .pstruct import PnStructure, enumerate_extensions, extension_count_formula, project
from .tangent import tangent_derivative
from .tournaments import (
    Tournament,
    automorphisms,
    find_isomorphism,
    induced,
    is_isomorphic,
    is_local_order,
)

__all__ = [
    "ArrowQuery",
    "ArrowResult",
    "BudgetExceeded",
    "Coloring",
    "CopySet",
    "DEFAULT_BUDGET",
    "NotLocalOrder",
    "arrow_check",
    "big_ramsey_degree",
    "big_ramsey_degree_pn",
    "copies",
    "default_budget",
    "lower_bound_coloring",
    "small_ramsey_degree",
    "verify_coloring_is_witness",
]

DEFAULT_BUDGET = 2 ** 24

Copy = tuple[int, ...]


class NotLocalOrder(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"search space of {required} colourings exceeds budget {budget}")
        self.required = required
        self.budget = budget


def default_budget() -> int:
    env = os.environ.get("RAMSEY_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class CopySet:
    ambient: Tournament
    pattern: Tournament
    copies: tuple[Copy, ...]

    def __len__(self) -> int:
        return len(self.copies)

    def __iter__(self):
        return iter(self.copies)


def copies(z: Tournament, x: Tournament) -> CopySet:
    """Every vertex subset of ``z`` inducing a copy of ``x``, in lexicographic order."""
    if x.n > z.n:
        return CopySet(z, x, ())
    found = tuple(
        c for c in itertools.combinations(range(z.n), x.n) if is_isomorphic(induced(z, c), x)
    )
    return CopySet(z, x, found)


def _require_local(x: Tournament) -> None:
    if not is_local_order(x):
        raise NotLocalOrder("tournament is not a local order (it has no 2-part extension)")


def small_ramsey_degree(x: Tournament) -> int:
    """``2|x| / |Aut(x)|``, cross-checked against the number of extensions."""
    _require_local(x)
    value = extension_count_formula(x)
    counted = len(enumerate_extensions(x))
    if counted != value:
        raise ArithmeticError(f"formula gives {value} but {counted} extensions were enumerated")
    return value


def big_ramsey_degree(x: Tournament) -> int:
    return small_ramsey_degree(x) * tangent_derivative(2 * x.n - 1)


def big_ramsey_degree_pn(x: PnStructure) -> int:
    """Big degree in the n-partitioned rationals; depends only on the size."""
    if x.size < 1:
        raise ValueError("structure must be nonempty")
    return tangent_derivative(2 * x.size - 1)


@dataclass(frozen=True)
class ArrowQuery:
    Z: Tournament
    Y: Tournament
    X: Tournament
    k: int
    l: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.l < 1:
            raise ValueError("k and l must be positive")


@dataclass(frozen=True)
class Coloring:
    copies: tuple[Copy, ...]
    values: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        if len(self.copies) != len(self.values):
            raise ValueError("colouring is not total: one value per copy required")

    def as_dict(self) -> dict[Copy, int]:
        return dict(zip(self.copies, self.values))

    def __getitem__(self, c: Copy) -> int:
        return self.as_dict()[tuple(sorted(c))]

    def distinct(self) -> int:
        return len(set(self.values))


def lower_bound_coloring(z: Tournament, ext: PnStructure, x: Tournament) -> Coloring:
    """Colour each copy of ``x`` by which extension of ``x`` the chosen extension of ``z`` induces on it.

    ``ext`` is a 2-part structure projecting onto ``z``; the alignment of its
    order positions with ``z``'s vertices is the first isomorphism found, fixed
    once.  Colour ``i`` means the induced word is the ``i``-th extension of
    ``x`` in lexicographic order.
    """
    _require_local(x)
    witness = find_isomorphism(project(ext), z)
    if witness is None:
        raise ValueError(f"extension {ext} does not project onto the given tournament")
    position_of = {v: pos for pos, v in enumerate(witness.image)}
    reps = enumerate_extensions(x)
    cs = copies(z, x)
    values = []
    for c in cs:
        word = ext.restrict(position_of[v] for v in c)
        values.append(reps.index(word))
    return Coloring(cs.copies, tuple(values), len(reps))


@dataclass
class ArrowResult:
    holds: bool
    examined: int
    counterexample: Coloring | None = None
    x_copies: int = 0
    y_copies: int = 0
    notes: list[str] = field(default_factory=list)


def _y_index(q: ArrowQuery) -> tuple[tuple[Copy, ...], tuple[Copy, ...], list[tuple[int, ...]]]:
    xc = copies(q.Z, q.X).copies
    yc = copies(q.Z, q.Y).copies
    pos = {c: i for i, c in enumerate(xc)}
    inside = []
    for y in yc:
        ys = set(y)
        inside.append(tuple(pos[c] for c in xc if ys.issuperset(c)))
    return xc, yc, inside


def _is_bad(values, inside, l: int) -> bool:
    for idx in inside:
        if len({values[i] for i in idx}) <= l:
            return False
    return True


def _symmetry_perms(q: ArrowQuery, xc: tuple[Copy, ...]) -> list[tuple[int, ...]]:
    pos = {c: i for i, c in enumerate(xc)}
    perms = []
    for g in automorphisms(q.Z):
        perm = tuple(pos[tuple(sorted(g.image[v] for v in c))] for c in xc)
        if perm != tuple(range(len(xc))):
            perms.append(perm)
    return perms


def _is_orbit_min(values, perms) -> bool:
    # Automorphisms of Z preserve badness, so only lexicographically least
    # members of each orbit need to be examined.
    for perm in perms:
        img = [0] * len(values)
        for i, j in enumerate(perm):
            img[j] = values[i]
        if tuple(img) < tuple(values):
            return False
    return True


def _scan(args):
    prefix, k, m, inside, l, perms = args
    examined = 0
    for tail in itertools.product(range(k), repeat=m - len(prefix)):
        values = prefix + tail
        if perms and not _is_orbit_min(values, perms):
            continue
        examined += 1
        if _is_bad(values, inside, l):
            return examined, values
    return examined, None


def arrow_check(
    q: ArrowQuery,
    budget: int | None = None,
    symmetry: bool = False,
    workers: int = 1,
) -> ArrowResult:
    """Decide ``Z -> (Y)^X_{k,l}`` by sweeping all k-colourings of the X-copies.

    Colourings are visited in lexicographic order and the first bad one is
    returned, so the counterexample does not depend on ``workers``.  With
    ``symmetry`` only orbit-minimal colourings under Aut(Z) are examined.
    """
    budget = default_budget() if budget is None else budget
    xc, yc, inside = _y_index(q)
    m = len(xc)
    required = q.k ** m
    result = ArrowResult(False, 0, x_copies=m, y_copies=len(yc))
    if yc and q.l >= q.k:
        result.holds = True
        result.notes.append("l >= k: no colouring can exceed l values")
        return result
    if required > budget:
        raise BudgetExceeded(required, budget)
    perms = _symmetry_perms(q, xc) if symmetry else []
    split = 1 if (workers > 1 and m >= 1) else 0
    chunks = [(p, q.k, m, inside, q.l, perms) for p in itertools.product(range(q.k), repeat=split)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_scan, chunks))
        # Chunks are lexicographically ordered prefixes; the first bad chunk
        # holds the least counterexample.  Work after it is not counted.
        for examined, bad in outcomes:
            result.examined += examined
            if bad is not None:
                result.counterexample = Coloring(xc, tuple(bad), q.k)
                return result
    else:
        for chunk in chunks:
            examined, bad = _scan(chunk)
            result.examined += examined
            if bad is not None:
                result.counterexample = Coloring(xc, tuple(bad), q.k)
                return result
    result.holds = True
    return result


def verify_coloring_is_witness(q: ArrowQuery, c: Coloring) -> bool:
    """True iff every copy of Y in Z sees more than ``l`` colours under ``c``."""
    xc, yc, inside = _y_index(q)
    if set(c.copies) != set(xc) or len(c.copies) != len(xc):
        raise ValueError("colouring is not total on the copies of X in Z")
    lookup = c.as_dict()
    values = tuple(lookup[x] for x in xc)
    return _is_bad(values, inside, q.l)
