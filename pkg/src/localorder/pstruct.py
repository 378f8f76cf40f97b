"""Linearly ordered sets with an n-part partition, and the projection to tournaments.

A structure is a word over ``1..n_parts``: position ``k`` is the ``k``-th
element of the linear order and the letter is its part.  An isomorphism of
such structures must preserve the order, so it is forced to be the rank map
and two structures are isomorphic exactly when their words are equal.  This
is why "non-isomorphic extensions" and "distinct words" coincide below.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .tournaments import Tournament, VertexMap, automorphism_count, find_isomorphism, is_isomorphic

__all__ = [
    "ExtensionSet",
    "PnStructure",
    "embedding",
    "embeds",
    "enumerate_extensions",
    "extension_count_formula",
    "pn_isomorphic",
    "project",
    "qn_dense_model",
    "rotate_extension",
    "rotation_orbit",
]


@dataclass(frozen=True)
class PnStructure:
    parts: tuple[int, ...]
    n_parts: int = 2

    def __post_init__(self) -> None:
        if self.n_parts < 1:
            raise ValueError("n_parts must be >= 1")
        for k, p in enumerate(self.parts):
            if not 1 <= p <= self.n_parts:
                raise ValueError(f"position {k}: part {p} outside 1..{self.n_parts}")

    @classmethod
    def from_word(cls, word: str, n_parts: int | None = None) -> "PnStructure":
        """``"121"`` -> parts (1, 2, 1).  ``n_parts`` defaults to the largest digit (at least 1)."""
        if not word.isdigit() and word:
            raise ValueError(f"not a parts word: {word!r}")
        parts = tuple(int(c) for c in word)
        if n_parts is None:
            n_parts = max(parts, default=1)
        return cls(parts, n_parts)

    @property
    def size(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def word(self) -> str:
        return "".join(map(str, self.parts))

    def __str__(self) -> str:
        return self.word

    def restrict(self, positions) -> "PnStructure":
        """Substructure on the given positions (taken in increasing order)."""
        return PnStructure(tuple(self.parts[k] for k in sorted(positions)), self.n_parts)


@dataclass(frozen=True)
class ExtensionSet:
    base: Tournament
    representatives: tuple[PnStructure, ...]

    def __len__(self) -> int:
        return len(self.representatives)

    def index(self, a: PnStructure) -> int:
        return self.representatives.index(a)


def project(a: PnStructure) -> Tournament:
    """Orient i -> j (i before j) when i and j share a part, j -> i otherwise."""
    if a.n_parts != 2:
        raise ValueError(f"projection needs n_parts = 2, got {a.n_parts}")
    p = a.parts
    n = len(p)
    return Tournament(tuple(
        tuple((i < j) == (p[i] == p[j]) if i != j else False for j in range(n))
        for i in range(n)
    ))


def pn_isomorphic(a: PnStructure, b: PnStructure) -> bool:
    if a.n_parts != b.n_parts:
        raise ValueError("structures have different numbers of parts")
    return a.parts == b.parts


def enumerate_extensions(x: Tournament) -> ExtensionSet:
    """All words in ``{1,2}^|x|`` projecting onto a copy of ``x``, in lexicographic order."""
    reps = tuple(
        a for a in (PnStructure(w, 2) for w in itertools.product((1, 2), repeat=x.n))
        if is_isomorphic(project(a), x)
    )
    return ExtensionSet(x, reps)


def extension_count_formula(x: Tournament) -> int:
    """``2|x| / |Aut(x)|``; meaningful for local orders only."""
    aut = automorphism_count(x)
    if (2 * x.n) % aut:
        raise ArithmeticError(f"|Aut| = {aut} does not divide 2|x| = {2 * x.n}")
    return 2 * x.n // aut


def rotate_extension(a: PnStructure) -> PnStructure:
    """Move the least element to the top of the order, switching its part.

    This is the combinatorial shadow of turning the separating line past one
    vertex.  The projection is unchanged up to the cyclic relabelling that
    moves vertex 0 to the end: ``project(rotate_extension(a))`` equals
    ``relabel(project(a), (1, 2, ..., n-1, 0))``.
    """
    if a.n_parts != 2:
        raise ValueError(f"rotation needs n_parts = 2, got {a.n_parts}")
    if not a.parts:
        raise ValueError("cannot rotate an empty structure")
    head, *rest = a.parts
    return PnStructure((*rest, 3 - head), 2)


def rotation_orbit(a: PnStructure) -> list[PnStructure]:
    """Distinct words reached by repeated rotation, in order of first visit."""
    orbit = [a]
    cur = rotate_extension(a)
    while cur != a:
        orbit.append(cur)
        cur = rotate_extension(cur)
    return orbit


def qn_dense_model(n: int, depth: int) -> PnStructure:
    """The word ``(1 2 ... n)`` repeated ``depth`` times."""
    if n < 1 or depth < 1:
        raise ValueError("need n >= 1 and depth >= 1")
    return PnStructure(tuple(range(1, n + 1)) * depth, n)


def embedding(a: PnStructure, b: PnStructure) -> tuple[int, ...] | None:
    """Greedy order- and part-preserving embedding of ``a`` into ``b``.

    Greedy leftmost matching is optimal for subsequence embedding, so a
    None result means no embedding exists.
    """
    out = []
    pos = 0
    for p in a.parts:
        while pos < len(b.parts) and b.parts[pos] != p:
            pos += 1
        if pos == len(b.parts):
            return None
        out.append(pos)
        pos += 1
    return tuple(out)


def embeds(a: PnStructure, b: PnStructure) -> bool:
    return embedding(a, b) is not None


def projection_witness(a: PnStructure, z: Tournament) -> VertexMap | None:
    """Isomorphism from ``project(a)`` (vertices = order positions) onto ``z``."""
    return find_isomorphism(project(a), z)
