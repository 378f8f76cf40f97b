"""Truncated coloured binary trees, strong subtrees, and the sigma-star lifting.

Nodes are ``'0'``/``'1'`` strings; ``''`` is the root and ``len(node)`` is
its level.  A :class:`ColoredTree` is the binary tree of a given height with
a colour attached to every level.  It may also be a *view* that keeps only
some levels (``levels``); the immediate successors of a node are then all
its extensions at the next kept level.  The q-image of a tree (levels of the
top colour removed) is such a view, and it branches four ways below levels
of colour ``top - 1``.

Two colour conventions are in use:

* ``ColoredTree.cyclic(h, n)``: colours ``1..n``, level ``i`` has colour
  ``(i mod n) + 1``.
* ``ColoredTree.milliken(h, n)``: colours ``0..n``, level ``k`` has colour
  ``k mod (n+1)``; ``top`` is ``n``.  This is the setting of :func:`q_map`,
  :func:`satisfies_star` and :func:`sigma_star`.

Heights are finite.  Searches that stand in for statements about infinite
trees return ``None`` when the truncation is too short rather than guessing.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Sequence

__all__ = [
    "BRANCHING",
    "ColoredTree",
    "SigmaStarCensus",
    "SigmaStarError",
    "StrongSubtree",
    "enumerate_strong_subtrees",
    "extensions",
    "filter_by_sequence",
    "find_monochromatic",
    "induced_sequence",
    "is_prefix",
    "lex_key",
    "meet",
    "q_map",
    "q_sequence",
    "q_tree",
    "satisfies_star",
    "sigma_star",
    "sigma_star_candidates",
    "sigma_star_census",
    "strong_subtree_problems",
    "subtrees_within",
    "subtree_from_json",
    "subtree_to_json",
]

BRANCHING = 2
_DIGITS = "01"


def meet(s: str, t: str) -> str:
    """Longest common prefix."""
    k = 0
    for a, b in zip(s, t):
        if a != b:
            break
        k += 1
    return s[:k]


def is_prefix(s: str, t: str) -> bool:
    return t.startswith(s)


def lex_key(s: str) -> tuple[int, ...]:
    """Sort key for the order in which ``s`` sits between its 0-side and 1-side.

    This is the order that makes the binary tree a dense linear order with
    no endpoints: ``s0... < s < s1...``.  On antichains it is plain
    lexicographic order.
    """
    return (*(2 * int(c) for c in s), 1)


def extensions(s: str, length: int) -> Iterator[str]:
    """All nodes of the given length extending ``s``, in lexicographic order."""
    if length < len(s):
        return
    for tail in itertools.product(_DIGITS, repeat=length - len(s)):
        yield s + "".join(tail)


@dataclass(frozen=True)
class ColoredTree:
    height: int
    sigma: tuple[int, ...]
    n_colors: int
    base: int = 1
    levels: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.sigma) != self.height:
            raise ValueError("sigma must colour every level")
        for c in self.sigma:
            if not self.base <= c < self.base + self.n_colors:
                raise ValueError(f"colour {c} outside {self.base}..{self.base + self.n_colors - 1}")
        if self.levels is not None and any(not 0 <= l < self.height for l in self.levels):
            raise ValueError("view levels out of range")

    @classmethod
    def cyclic(cls, height: int, n: int = 1) -> "ColoredTree":
        return cls(height, tuple(i % n + 1 for i in range(height)), n, 1)

    @classmethod
    def milliken(cls, height: int, n: int) -> "ColoredTree":
        """Colours ``0..n`` cycling with period ``n + 1``."""
        return cls(height, tuple(k % (n + 1) for k in range(height)), n + 1, 0)

    @property
    def top(self) -> int:
        return self.base + self.n_colors - 1

    @cached_property
    def level_list(self) -> tuple[int, ...]:
        return tuple(range(self.height)) if self.levels is None else tuple(sorted(self.levels))

    @cached_property
    def _next(self) -> dict[int, int | None]:
        ls = self.level_list
        return {a: (ls[i + 1] if i + 1 < len(ls) else None) for i, a in enumerate(ls)}

    def full(self) -> "ColoredTree":
        return ColoredTree(self.height, self.sigma, self.n_colors, self.base)

    def color(self, node: str) -> int:
        return self.sigma[len(node)]

    def has_level(self, l: int) -> bool:
        return l in self._next

    def contains(self, node: str) -> bool:
        return self.has_level(len(node))

    def successors(self, node: str) -> list[str]:
        """Immediate successors in this tree (or view)."""
        nxt = self._next.get(len(node))
        return [] if nxt is None else list(extensions(node, nxt))

    def nodes(self) -> list[str]:
        return [s for l in self.level_list for s in extensions("", l)]


def q_tree(t: ColoredTree) -> ColoredTree:
    """The image of ``t`` under :func:`q_map`: the view without top-coloured levels."""
    keep = tuple(l for l in t.full().level_list if t.sigma[l] != t.top)
    return ColoredTree(t.height, t.sigma, t.n_colors, t.base, keep)


def q_sequence(t: ColoredTree, sigma: Sequence[int]) -> tuple[int, ...]:
    """Replace every occurrence of the top colour by ``top - 1``."""
    return tuple(t.top - 1 if c == t.top else c for c in sigma)


def q_map(t: ColoredTree, v: str) -> str:
    """Send a top-coloured node to its parent; fix every other node."""
    if len(v) >= t.height:
        raise ValueError(f"node {v!r} lies outside the tree")
    if t.color(v) != t.top:
        return v
    if not v:
        raise ValueError("the root has the top colour and no predecessor")
    return v[:-1]


@dataclass(frozen=True)
class StrongSubtree:
    host: ColoredTree
    levels: tuple[int, ...]
    nodes: tuple[tuple[str, ...], ...]

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def root(self) -> str:
        return self.nodes[0][0]

    def all_nodes(self) -> list[str]:
        return [s for lvl in self.nodes for s in lvl]

    def node_set(self) -> frozenset[str]:
        return frozenset(self.all_nodes())

    def successors(self, node: str) -> list[str]:
        k = self.levels.index(len(node))
        if k + 1 >= len(self.levels):
            return []
        return [u for u in self.nodes[k + 1] if u.startswith(node)]


def strong_subtree_problems(s: StrongSubtree) -> list[str]:
    """Every violated strong-subtree condition, relative to ``s.host`` (which may be a view)."""
    host = s.host
    out = []
    if not s.levels:
        return ["empty subtree"]
    if len(s.nodes) != len(s.levels):
        return ["levels and node lists differ in length"]
    if any(a >= b for a, b in zip(s.levels, s.levels[1:])):
        out.append("levels not strictly increasing")
    for l in s.levels:
        if not host.has_level(l):
            out.append(f"level {l} is not a level of the host")
    if len(s.nodes[0]) != 1:
        out.append("no single root")
    for k, (l, lvl) in enumerate(zip(s.levels, s.nodes)):
        if len(set(lvl)) != len(lvl):
            out.append(f"repeated node at subtree level {k}")
        for u in lvl:
            if len(u) != l or set(u) - set(_DIGITS):
                out.append(f"node {u!r} does not lie on host level {l}")
    if out:
        return out
    for k in range(len(s.levels) - 1):
        below, above = s.nodes[k], s.nodes[k + 1]
        below_set = set(below)
        for u in above:
            # Nodes of one level are pairwise incomparable, so at most one lies below u.
            if u[: s.levels[k]] not in below_set:
                out.append(f"node {u!r} is not above exactly one node of level {k}")
        nl = host._next[s.levels[k]]
        hits = Counter(u[:nl] for u in above)
        for x in below:
            for t in host.successors(x):
                if hits[t] != 1:
                    out.append(f"successor {t!r} of {x!r} is extended by {hits[t]} nodes, not 1")
    return out


def induced_sequence(s: StrongSubtree) -> tuple[int, ...]:
    return tuple(s.host.sigma[l] for l in s.levels)


def _level_tuples(t: ColoredTree, m: int, sigma: Sequence[int] | None) -> Iterator[tuple[int, ...]]:
    for levels in itertools.combinations(t.level_list, m):
        if sigma is None or all(t.sigma[l] == c for l, c in zip(levels, sigma)):
            yield levels


def _grow(t: ColoredTree, levels: tuple[int, ...], built: list[tuple[str, ...]]) -> Iterator[StrongSubtree]:
    k = len(built)
    if k == len(levels):
        yield StrongSubtree(t, levels, tuple(built))
        return
    slots = [succ for x in built[-1] for succ in t.successors(x)]
    choices = [list(extensions(succ, levels[k])) for succ in slots]
    for pick in itertools.product(*choices):
        built.append(tuple(sorted(pick)))
        yield from _grow(t, levels, built)
        built.pop()


def enumerate_strong_subtrees(
    t: ColoredTree, m: int, sigma: Sequence[int] | None = None
) -> Iterator[StrongSubtree]:
    """All strong subtrees of height ``m``, optionally only those coloured ``sigma``.

    Order: level tuples lexicographically, then roots, then the product of
    extension choices (successor slots in lexicographic order).
    """
    if m > t.height:
        raise ValueError(f"height {m} exceeds tree height {t.height}")
    if m <= 0:
        return
    if sigma is not None and len(sigma) != m:
        raise ValueError("sigma length must equal m")
    for levels in _level_tuples(t, m, sigma):
        for root in extensions("", levels[0]):
            yield from _grow(t, levels, [(root,)])


def filter_by_sequence(t: ColoredTree, sigma: Sequence[int]) -> list[StrongSubtree]:
    """Strong subtrees whose induced colouring sequence is ``sigma``.

    The empty sequence gives no subtrees: a strong subtree needs a root.
    """
    if not sigma or len(sigma) > t.height:
        return []
    return list(enumerate_strong_subtrees(t, len(sigma), tuple(sigma)))


# -- the q map, property (*), and the sigma-star lifting ---------------------

def satisfies_star(u: StrongSubtree, host: ColoredTree | None = None) -> bool:
    """Both clauses of (*) for a strong subtree of the full tree.

    1. A successor ``u'`` of a node ``u`` of colour ``top - 1`` passes
       through ``t + '0'``, where ``t`` is the child of ``u`` below ``u'``.
    2. Every node of colour ``top`` is its parent followed by ``'0'``.
    """
    t = host or u.host
    top = t.top
    for k, lvl in enumerate(u.nodes):
        c = t.sigma[u.levels[k]]
        if c == top and any(not x.endswith("0") for x in lvl):
            return False
        if c == top - 1 and k + 1 < len(u.nodes):
            for x in lvl:
                for y in u.nodes[k + 1]:
                    if y.startswith(x) and (len(y) < len(x) + 2 or y[len(x) + 1] != "0"):
                        return False
    return True


class SigmaStarError(ValueError):
    def __init__(self, message: str, level: int | None = None):
        super().__init__(message if level is None else f"level {level}: {message}")
        self.level = level


def _q_contained(u: StrongSubtree, s: StrongSubtree, host: ColoredTree) -> bool:
    if len(u.levels) != len(s.levels):
        return False
    return all({q_map(host, x) for x in lu} <= set(ls) for lu, ls in zip(u.nodes, s.nodes))


def sigma_star(
    s: StrongSubtree, sigma: Sequence[int], require_gaps: bool = False
) -> StrongSubtree:
    """The strong subtree of the full tree lifted from ``s`` along ``sigma``.

    ``s`` is a strong subtree of the q-view of a Milliken-coloured tree whose
    colouring sequence is ``q_sequence(sigma)``.  Built level by level: the
    root is ``root(s)`` (or ``root(s) + '0'`` if ``sigma[0]`` is the top
    colour); each child ``v`` of a node is sent to the unique node of the
    next level of ``s`` above ``v`` (above ``v + '0'`` when the node has
    colour ``top - 1``), and ``'0'`` is appended when the next colour is the
    top colour.  The result satisfies (*), has sequence ``sigma`` and its
    q-image sits inside ``s`` level by level.
    """
    view = s.host
    full = view.full()
    top = full.top
    sigma = tuple(sigma)
    if view.levels is None or tuple(view.level_list) != q_tree(full).level_list:
        raise SigmaStarError("s must be a strong subtree of the q-view of the tree")
    problems = strong_subtree_problems(s)
    if problems:
        raise SigmaStarError("s is not a strong subtree of the q-view: " + problems[0])
    if len(sigma) != len(s.levels):
        raise SigmaStarError("sigma and s have different heights")
    if induced_sequence(s) != q_sequence(full, sigma):
        raise SigmaStarError("colouring sequence of s is not q(sigma)")
    if require_gaps and any(b == a + 1 for a, b in zip(s.levels, s.levels[1:])):
        raise SigmaStarError("two consecutive levels of s are consecutive in the tree")

    def lift(x: str, level: int) -> str:
        if sigma[level] != top:
            return x
        if len(x) + 1 >= full.height:
            raise SigmaStarError(f"node {x!r} + '0' lies above the truncation", level)
        return x + "0"

    built = [(lift(s.root, 0),)]
    for k in range(len(sigma) - 1):
        nxt = []
        for u in built[k]:
            for b in _DIGITS:
                v = u + b
                anchor = v + "0" if sigma[k] == top - 1 else v
                hits = [y for y in s.nodes[k + 1] if y.startswith(anchor)]
                if len(hits) != 1:
                    raise SigmaStarError(f"{len(hits)} nodes of s dominate {anchor!r}", k + 1)
                nxt.append(lift(hits[0], k + 1))
        lengths = {len(x) for x in nxt}
        if len(lengths) != 1:
            raise SigmaStarError("lifted nodes lie on different levels", k + 1)
        built.append(tuple(sorted(nxt)))
    u = StrongSubtree(full, tuple(len(lvl[0]) for lvl in built), tuple(built))
    # The construction is claimed correct; fail loudly if it is not.
    if strong_subtree_problems(u):
        raise AssertionError(f"sigma_star produced a non-strong subtree: {strong_subtree_problems(u)}")
    if induced_sequence(u) != sigma:
        raise AssertionError("sigma_star produced the wrong colouring sequence")
    if not satisfies_star(u):
        raise AssertionError("sigma_star output violates (*)")
    if not _q_contained(u, s, full):
        raise AssertionError("sigma_star output is not q-contained in s")
    return u


def sigma_star_candidates(
    s: StrongSubtree, sigma: Sequence[int], pool: Sequence[StrongSubtree] | None = None
) -> list[StrongSubtree]:
    """Brute force: every strong subtree with sequence ``sigma``, (*), and q-containment in ``s``."""
    full = s.host.full()
    if pool is None:
        pool = filter_by_sequence(full, sigma)
    return [u for u in pool if satisfies_star(u) and _q_contained(u, s, full)]


@dataclass
class SigmaStarCensus:
    """Result of :func:`sigma_star_census` for one tree and one ``sigma``.

    ``classes`` counts the distinct restrictions of ``s`` to the slots some
    candidate can reach; ``weight`` is the number of ``s`` they stand for,
    which must equal ``total`` for the sweep to be complete.
    """

    sigma: tuple[int, ...]
    total: int = 0
    weight: int = 0
    classes: int = 0
    unique: int = 0
    matched: int = 0
    inadmissible: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.weight == self.total


def sigma_star_census(t: ColoredTree, sigma: Sequence[int], max_failures: int = 5) -> SigmaStarCensus:
    """Exhaustive uniqueness check of :func:`sigma_star` over every admissible ``s``.

    ``t`` is a full Milliken-coloured tree and ``s`` ranges over all strong
    subtrees of ``q_tree(t)`` coloured ``q_sequence(t, sigma)``.  For each
    ``s`` every strong subtree ``U`` of ``t`` coloured ``sigma`` with (*)
    and ``q(U(k))`` inside ``s(k)`` is searched for level by level; there
    must be exactly one, and it must be what :func:`sigma_star` returns.
    When :func:`sigma_star` refuses (the lift leaves the truncation) the
    search must find nothing.

    A candidate only meets the slots of ``s`` above its own nodes, so the
    sweep branches on those slots alone and counts the free ones as a
    multiplicity.  The multiplicities are summed and compared against the
    closed-form number of ``s``.
    """
    full = t.full()
    view = q_tree(full)
    sigma = tuple(sigma)
    top = full.top
    census = SigmaStarCensus(sigma)
    if not sigma:
        return census
    qs = q_sequence(full, sigma)

    def fail(msg: str) -> None:
        if len(census.failures) < max_failures:
            census.failures.append(msg)

    def preimages(x: str, colour: int) -> list[str]:
        out = []
        if full.sigma[len(x)] == colour:
            out.append(x)
        nl = len(x) + 1
        if colour == top and nl < full.height and full.sigma[nl] == top:
            out.extend(x + b for b in _DIGITS)
        return out

    def finish(levels, s_nodes, cands, weight):
        census.classes += 1
        census.weight += weight
        # Least completion: free slots take their lexicographically first node.
        nodes = [set(lvl) for lvl in s_nodes]
        for k in range(len(levels) - 1):
            for x in sorted(nodes[k]):
                for z in view.successors(x):
                    if not any(y.startswith(z) for y in nodes[k + 1]):
                        nodes[k + 1].add(z + "0" * (levels[k + 1] - len(z)))
        s = StrongSubtree(view, levels, tuple(tuple(sorted(n)) for n in nodes))
        try:
            got = sigma_star(s, sigma)
        except SigmaStarError:
            census.inadmissible += weight
            if cands:
                fail(f"sigma_star refused s={s.nodes} but {len(cands)} subtrees qualify")
            return
        if len(cands) != 1:
            fail(f"s={s.nodes}: {len(cands)} qualifying subtrees")
            return
        if strong_subtree_problems(cands[0]) or induced_sequence(cands[0]) != sigma:
            fail(f"s={s.nodes}: search produced an invalid subtree {cands[0].nodes}")
            return
        census.unique += weight
        if cands[0] != got:
            fail(f"s={s.nodes}: search found {cands[0].nodes}, sigma_star gave {got.nodes}")
            return
        census.matched += weight

    def valid(u: StrongSubtree) -> bool:
        return not strong_subtree_problems(u) and satisfies_star(u)

    def step(levels, k, s_nodes, cands, weight):
        if k == len(levels) - 1:
            finish(levels, s_nodes, cands, weight)
            return
        nxt_level = levels[k + 1]
        slots = [z for x in s_nodes[k] for z in view.successors(x)]
        # Under a node of colour top - 1, (*) sends every successor through
        # child + '0'; slots not comparable with such an anchor hold no
        # qualifying node and stay free.
        pad = "0" if sigma[k] == top - 1 else ""
        anchors = {u + b + pad for c in cands for u in c.nodes[k] for b in _DIGITS}
        relevant = [z for z in slots if any(is_prefix(z, a) or is_prefix(a, z) for a in anchors)]
        options = 2 ** (nxt_level - view._next[levels[k]])
        free = len(slots) - len(relevant)
        w = weight * (options * _completions(view, levels, k + 1)) ** free
        for pick in itertools.product(*(list(extensions(z, nxt_level)) for z in relevant)):
            chosen = set(pick)
            new_cands = []
            above = [y for x in chosen for y in preimages(x, sigma[k + 1])]
            for c in cands:
                kids = [u + b for u in c.nodes[k] for b in _DIGITS]
                # One node above each child of each node: strong by construction
                # once all picks share a level, so only (*) is left to test.
                for lvl in sorted({len(y) for y in above}):
                    opts = [[y for y in above if len(y) == lvl and y.startswith(kid)] for kid in kids]
                    for combo in itertools.product(*opts):
                        u = StrongSubtree(full, c.levels + (lvl,), c.nodes + (tuple(sorted(combo)),))
                        if satisfies_star(u):
                            new_cands.append(u)
            step(levels, k + 1, s_nodes + [tuple(sorted(chosen))], new_cands, w)

    for levels in _level_tuples(view, len(sigma), qs):
        census.total += 2 ** levels[0] * _completions(view, levels, 0)
        for root in extensions("", levels[0]):
            cands = [StrongSubtree(full, (len(y),), ((y,),)) for y in preimages(root, sigma[0])]
            cands = [u for u in cands if valid(u)]
            step(levels, 0, [(root,)], cands, 1)
    return census


def _completions(view: ColoredTree, levels: tuple[int, ...], k: int) -> int:
    """Number of ways to continue ``s`` above one node on subtree level ``k``."""
    if k == len(levels) - 1:
        return 1
    a, b = levels[k], levels[k + 1]
    nxt = view._next[a]
    per_slot = 2 ** (b - nxt) * _completions(view, levels, k + 1)
    return per_slot ** (2 ** (nxt - a))


# -- subtrees of subtrees and monochromatic search ---------------------------

def _address_map(s: StrongSubtree) -> dict[str, str]:
    """Binary address inside ``s`` -> node of ``s``."""
    addr = {"": s.root}
    frontier = [""]
    for k in range(len(s.levels) - 1):
        cut = s.levels[k] + 1
        above = {y[:cut]: y for y in s.nodes[k + 1]}
        nxt = []
        for a in frontier:
            x = addr[a]
            for b in _DIGITS:
                addr[a + b] = above[x + b]
                nxt.append(a + b)
        frontier = nxt
    return addr


def subtrees_within(s: StrongSubtree, sigma: Sequence[int]) -> Iterator[StrongSubtree]:
    """Strong subtrees of ``s`` itself (as a binary tree) with colouring sequence ``sigma``."""
    if s.host.levels is not None:
        raise ValueError("subtrees_within expects a subtree of a full tree")
    abstract = ColoredTree(len(s.levels), induced_sequence(s), s.host.n_colors, s.host.base)
    if not sigma or len(sigma) > abstract.height:
        return
    addr = _address_map(s)
    for w in enumerate_strong_subtrees(abstract, len(sigma), tuple(sigma)):
        nodes = tuple(tuple(sorted(addr[a] for a in lvl)) for lvl in w.nodes)
        yield StrongSubtree(s.host, tuple(s.levels[l] for l in w.levels), nodes)


def find_monochromatic(
    t: ColoredTree,
    sigma: Sequence[int],
    chi: Callable[[StrongSubtree], int],
    target: Sequence[int],
) -> StrongSubtree | None:
    """First strong subtree coloured ``target`` on whose ``sigma``-subtrees ``chi`` is constant.

    Candidates are tried in :func:`enumerate_strong_subtrees` order.  None
    means the truncated tree is too short for this colouring; it says nothing
    about the infinite statement.
    """
    if len(target) > t.height:
        raise ValueError("target longer than the tree")
    for cand in filter_by_sequence(t, target):
        seen: set[int] = set()
        ok = True
        for w in subtrees_within(cand, sigma):
            seen.add(chi(w))
            if len(seen) > 1:
                ok = False
                break
        if ok:
            return cand
    return None


# -- JSON --------------------------------------------------------------------

def subtree_to_json(s: StrongSubtree) -> dict:
    return {"levels": list(s.levels), "nodes": [list(lvl) for lvl in s.nodes]}


def subtree_from_json(data: dict, host: ColoredTree) -> StrongSubtree:
    return StrongSubtree(
        host, tuple(data["levels"]), tuple(tuple(sorted(lvl)) for lvl in data["nodes"])
    )
