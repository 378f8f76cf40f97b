"""Finite tournaments: validation, isomorphism, automorphisms, canonical forms.

A tournament on ``n`` vertices is stored as an ``n x n`` boolean arc matrix
with vertices ``0..n-1``.  ``arcs[i][j]`` is true iff there is an arc i -> j.
Everything here is brute force; the targets are tournaments with at most
about eight vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

__all__ = [
    "MAX_ENUMERATION_SIZE",
    "Tournament",
    "TournamentError",
    "VertexMap",
    "arc_tournament",
    "automorphism_count",
    "automorphisms",
    "canonical_form",
    "circular_tournament",
    "dominated_cycle",
    "enumerate_tournaments",
    "find_isomorphism",
    "format_tournament",
    "has_transitive_neighbourhoods",
    "induced",
    "is_isomorphic",
    "is_local_order",
    "is_transitive",
    "parse_tournament",
    "point",
    "three_cycle",
    "transitive_tournament",
    "validate",
]

MAX_ENUMERATION_SIZE = 7


class TournamentError(ValueError):
    """Raised for malformed tournaments or bad tournament text."""


@dataclass(frozen=True)
class Tournament:
    arcs: tuple[tuple[bool, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[bool | int | str]], check: bool = True) -> "Tournament":
        """Build from any rows of truthy entries (``'0'``/``'1'`` strings allowed)."""
        arcs = tuple(tuple(_truth(v) for v in row) for row in rows)
        t = cls(arcs)
        if check:
            validate(t)
        return t

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Tournament":
        """Build from an explicit arc list ``(i, j)`` meaning i -> j."""
        m = [[False] * n for _ in range(n)]
        for i, j in arcs:
            m[i][j] = True
        return cls.from_rows(m)

    @property
    def n(self) -> int:
        return len(self.arcs)

    def __len__(self) -> int:
        return len(self.arcs)

    def has_arc(self, i: int, j: int) -> bool:
        return self.arcs[i][j]

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << j for j, a in enumerate(row) if a) for row in self.arcs)

    @cached_property
    def scores(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.arcs)

    def rows(self) -> list[str]:
        return ["".join("1" if a else "0" for a in row) for row in self.arcs]

    def __str__(self) -> str:
        return "\n".join(self.rows())


@dataclass(frozen=True)
class VertexMap:
    """A map ``i -> image[i]`` from a ``source_size``-vertex tournament."""

    image: tuple[int, ...]
    target_size: int = field(default=-1)

    @property
    def source_size(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def is_injective(self) -> bool:
        return len(set(self.image)) == len(self.image)


def _truth(v: bool | int | str) -> bool:
    if isinstance(v, str):
        if v not in ("0", "1"):
            raise TournamentError(f"matrix entry must be '0' or '1', got {v!r}")
        return v == "1"
    return bool(v)


def validate(t: Tournament) -> None:
    """Check irreflexivity, squareness and exactly one arc per vertex pair."""
    n = t.n
    for i, row in enumerate(t.arcs):
        if len(row) != n:
            raise TournamentError(f"row {i} has length {len(row)}, expected {n}")
    for i in range(n):
        if t.arcs[i][i]:
            raise TournamentError(f"diagonal entry ({i},{i}) is set (loop at vertex {i})")
    for i in range(n):
        for j in range(i + 1, n):
            a, b = t.arcs[i][j], t.arcs[j][i]
            if a and b:
                raise TournamentError(f"antisymmetry violated at pair ({i},{j}): both arcs present")
            if not a and not b:
                raise TournamentError(f"totality violated at pair ({i},{j}): no arc")


# -- small named tournaments -------------------------------------------------

def point() -> Tournament:
    return Tournament(((False,),))


def arc_tournament() -> Tournament:
    return transitive_tournament(2)


def transitive_tournament(k: int) -> Tournament:
    """The chain ``0 -> 1 -> ... -> k-1`` with i -> j for all i < j."""
    return Tournament(tuple(tuple(i < j for j in range(k)) for i in range(k)))


def circular_tournament(n: int) -> Tournament:
    """C_n: vertices ``0..2n`` with i -> j iff ``(j - i) mod (2n+1)`` lies in ``1..n``."""
    if n < 1:
        raise ValueError("circular_tournament needs n >= 1")
    size = 2 * n + 1
    return Tournament(tuple(
        tuple(1 <= (j - i) % size <= n for j in range(size)) for i in range(size)
    ))


def three_cycle() -> Tournament:
    return circular_tournament(1)


def dominated_cycle() -> Tournament:
    """The 4-vertex tournament D: vertex 3 dominates the 3-cycle 0 -> 1 -> 2 -> 0."""
    return Tournament.from_arcs(4, [(0, 1), (1, 2), (2, 0), (3, 0), (3, 1), (3, 2)])


# -- structure ---------------------------------------------------------------

def induced(t: Tournament, vertices: Sequence[int]) -> Tournament:
    """Subtournament on ``vertices``, relabelled ``0..k-1`` in the given order."""
    return Tournament(tuple(tuple(t.arcs[a][b] for b in vertices) for a in vertices))


def relabel(t: Tournament, perm: Sequence[int]) -> Tournament:
    """The tournament whose vertex ``i`` is ``perm[i]`` of ``t``."""
    return induced(t, perm)


def is_transitive(t: Tournament) -> bool:
    """A tournament is transitive iff its score sequence is 0, 1, ..., n-1."""
    return sorted(t.scores) == list(range(t.n))


def _extend(t: Tournament, u: Tournament, partial: list[int], used: int) -> Iterator[list[int]]:
    k = len(partial)
    if k == t.n:
        yield list(partial)
        return
    row = t.arcs[k]
    for c in range(u.n):
        if used >> c & 1 or t.scores[k] != u.scores[c]:
            continue
        crow = u.arcs[c]
        if all(row[i] == crow[partial[i]] for i in range(k)):
            partial.append(c)
            yield from _extend(t, u, partial, used | 1 << c)
            partial.pop()


def _isomorphisms(a: Tournament, b: Tournament) -> Iterator[list[int]]:
    if a.n != b.n or sorted(a.scores) != sorted(b.scores):
        return
    yield from _extend(a, b, [], 0)


def find_isomorphism(a: Tournament, b: Tournament) -> VertexMap | None:
    """First isomorphism ``a -> b`` in lexicographic order of images, or None."""
    for iso in _isomorphisms(a, b):
        return VertexMap(tuple(iso), b.n)
    return None


def is_isomorphic(a: Tournament, b: Tournament) -> bool:
    return find_isomorphism(a, b) is not None


def automorphisms(t: Tournament) -> Iterator[VertexMap]:
    for iso in _isomorphisms(t, t):
        yield VertexMap(tuple(iso), t.n)


def automorphism_count(t: Tournament) -> int:
    return sum(1 for _ in _isomorphisms(t, t))


def _matrix_key(t: Tournament, perm: Sequence[int]) -> int:
    # Row-major bits of the relabelled matrix, most significant first, so
    # integer order is lexicographic order on matrices.
    key = 0
    arcs = t.arcs
    for a in perm:
        row = arcs[a]
        for b in perm:
            key = key << 1 | row[b]
    return key


def canonical_form(t: Tournament) -> Tournament:
    """Lexicographically least arc matrix over all ``n!`` relabellings."""
    if t.n <= 1:
        return t
    best = min(itertools.permutations(range(t.n)), key=lambda p: _matrix_key(t, p))
    return relabel(t, best)


def enumerate_tournaments(n: int, bound: int = MAX_ENUMERATION_SIZE) -> list[Tournament]:
    """One canonical tournament per isomorphism class on ``n`` vertices.

    Walks all ``2**(n(n-1)/2)`` labelled tournaments; each unseen one has its
    whole relabelling orbit marked in a bitmap, and the orbit's least matrix
    is kept.  Output is sorted by canonical matrix.
    """
    if n > bound:
        raise TournamentError(f"enumeration bound exceeded: n={n} > {bound}")
    if n < 0:
        raise TournamentError("n must be >= 0")
    if n <= 1:
        return [Tournament(tuple(tuple(False for _ in range(n)) for _ in range(n)))]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = len(pairs)
    seen = bytearray(1 << m)
    perms = list(itertools.permutations(range(n)))
    classes: list[tuple[int, Tournament]] = []
    for code in range(1 << m):
        if seen[code]:
            continue
        rows = [[False] * n for _ in range(n)]
        for bit, (i, j) in enumerate(pairs):
            if code >> bit & 1:
                rows[i][j] = True
            else:
                rows[j][i] = True
        t = Tournament(tuple(tuple(r) for r in rows))
        best_key, best_perm = None, None
        for p in perms:
            # Upper-triangle code of the relabelled tournament, to mark the orbit.
            c = 0
            for bit, (i, j) in enumerate(pairs):
                if rows[p[i]][p[j]]:
                    c |= 1 << bit
            seen[c] = 1
            key = _matrix_key(t, p)
            if best_key is None or key < best_key:
                best_key, best_perm = key, p
        classes.append((best_key, relabel(t, best_perm)))
    classes.sort(key=lambda kv: kv[0])
    return [t for _, t in classes]


def is_local_order(t: Tournament) -> bool:
    """Membership in the class of local orders: some 2-part extension projects onto ``t``."""
    from .pstruct import enumerate_extensions

    return len(enumerate_extensions(t).representatives) > 0


def has_transitive_neighbourhoods(t: Tournament) -> bool:
    """Oracle criterion: every vertex's in-set and out-set induce transitive tournaments."""
    for v in range(t.n):
        outs = [u for u in range(t.n) if t.arcs[v][u]]
        ins = [u for u in range(t.n) if t.arcs[u][v]]
        if not is_transitive(induced(t, outs)) or not is_transitive(induced(t, ins)):
            return False
    return True


# -- text format -------------------------------------------------------------

def parse_tournament(text: str) -> Tournament:
    """Parse ``n`` on the first line followed by ``n`` rows of ``0``/``1``.

    Blank lines and ``#`` comments are ignored.  Errors name the 1-based
    line and column of the offending entry.
    """
    lines = [(no, ln.split("#", 1)[0].strip()) for no, ln in enumerate(text.splitlines(), 1)]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise TournamentError("empty tournament text")
    head_no, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise TournamentError(f"line {head_no}: expected vertex count, got {head!r}") from None
    if n < 0:
        raise TournamentError(f"line {head_no}: vertex count must be >= 0")
    body = lines[1:]
    if len(body) != n:
        raise TournamentError(f"expected {n} matrix rows, found {len(body)}")
    rows: list[list[bool]] = []
    for no, ln in body:
        row = ln.replace(" ", "")
        if len(row) != n:
            raise TournamentError(f"line {no}: row has {len(row)} entries, expected {n}")
        for col, ch in enumerate(row, 1):
            if ch not in "01":
                raise TournamentError(f"line {no}, column {col}: invalid character {ch!r}")
        rows.append([ch == "1" for ch in row])
    line_of = [no for no, _ in body]
    for i in range(n):
        if rows[i][i]:
            raise TournamentError(f"line {line_of[i]}, column {i + 1}: diagonal entry must be 0")
        for j in range(i + 1, n):
            if rows[i][j] == rows[j][i]:
                what = "both arcs" if rows[i][j] else "no arc"
                raise TournamentError(
                    f"line {line_of[i]}, column {j + 1}: pair ({i},{j}) has {what} "
                    f"(see line {line_of[j]}, column {i + 1})"
                )
    return Tournament(tuple(tuple(r) for r in rows))


def format_tournament(t: Tournament) -> str:
    return "\n".join([str(t.n), *t.rows()]) + "\n"
