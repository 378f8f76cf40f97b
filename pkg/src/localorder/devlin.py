"""Embedding types of finite subsets of the coloured binary tree.

Two finite sets ``A, B`` are Em-equivalent when some bijection between their
meet closures preserves the prefix order, the length order, membership, the
passing digits ``t(|s|)`` for ``|s| < |t|``, and level colours.  :func:`em_code`
computes a canonical form for this relation, so equivalence is code
equality; :func:`em_equivalent_bruteforce` searches for the bijection
directly and is kept as an independent check.

Colour handling is explicit through ``color_scope``:

``"all"``
    colours of every node of the meet closure are compared (the relation as
    written, used for envelopes);
``"members"``
    only colours of members of the set are compared;
``"none"``
    colours are ignored.

Devlin types are counted with ``"members"`` by default; see
:func:`count_devlin_types`.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .pstruct import PnStructure
from .trees import (
    ColoredTree,
    StrongSubtree,
    _address_map,
    enumerate_strong_subtrees,
    extensions,
    induced_sequence,
    is_prefix,
    lex_key,
    meet,
)

__all__ = [
    "AntichainModel",
    "DevlinCapError",
    "DevlinCount",
    "EmCode",
    "EnvelopeCensus",
    "EnvelopeError",
    "FiniteSubset",
    "build_antichain",
    "count_devlin_types",
    "devlin_types",
    "em_code",
    "em_equivalent_bruteforce",
    "envelope",
    "envelope_candidates",
    "envelope_census",
    "is_devlin_type",
    "meet_closure",
    "realized_pattern",
    "sigma_of",
]

COLOR_SCOPES = ("all", "members", "none")


@dataclass(frozen=True)
class FiniteSubset:
    nodes: frozenset[str]
    host: ColoredTree

    def __post_init__(self) -> None:
        for s in self.nodes:
            if len(s) >= self.host.height:
                raise ValueError(f"node {s!r} lies above the host's height {self.host.height}")

    @classmethod
    def of(cls, nodes: Iterable[str], host: ColoredTree) -> "FiniteSubset":
        return cls(frozenset(nodes), host)

    def __len__(self) -> int:
        return len(self.nodes)

    def sorted(self) -> list[str]:
        return sorted(self.nodes, key=lex_key)


def _closure(nodes: Iterable[str]) -> frozenset[str]:
    nodes = list(nodes)
    return frozenset(meet(s, t) for s in nodes for t in nodes)


def meet_closure(a: FiniteSubset) -> FiniteSubset:
    if not a.nodes:
        raise ValueError("meet closure of the empty set")
    return FiniteSubset(_closure(a.nodes), a.host)


def sigma_of(a: FiniteSubset) -> tuple[int, ...]:
    """Colours of the distinct levels occupied by the meet closure, bottom up."""
    return tuple(a.host.sigma[l] for l in sorted({len(s) for s in _closure(a.nodes)}))


@dataclass(frozen=True)
class EmCode:
    """Canonical form of an Em-class.

    ``rows[i]`` describes the ``i``-th node of the meet closure as
    ``(length rank, parent position, member, colour, passing digits)``
    where the passing digits are the node's bits at every strictly smaller
    length occurring in the closure.  Nodes are ordered by length, and ties
    are broken by taking the least row tuple over all orders.
    """

    rows: tuple[tuple, ...]
    color_scope: str = "all"

    @property
    def size(self) -> int:
        return len(self.rows)

    def to_json(self) -> str:
        payload = {
            "color_scope": self.color_scope,
            "size": self.size,
            "nodes": [
                {"rank": r, "parent": p, "member": bool(m), "color": c, "digits": "".join(d)}
                for r, p, m, c, d in self.rows
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _rows(order: Sequence[str], members, lengths: list[int], host: ColoredTree, scope: str):
    pos = {s: i for i, s in enumerate(order)}
    rank = {l: i for i, l in enumerate(lengths)}
    rows = []
    for s in order:
        parents = [t for t in order if len(t) < len(s) and s.startswith(t)]
        parent = pos[max(parents, key=len)] if parents else -1
        member = s in members
        if scope == "all" or (scope == "members" and member):
            color = host.sigma[len(s)]
        else:
            color = 0
        digits = tuple(s[l] for l in lengths if l < len(s))
        rows.append((rank[len(s)], parent, int(member), color, digits))
    return tuple(rows)


def _rows_distinct(order: Sequence[str], members, sigma, scope: str):
    # Same rows as _rows when every length occurs once: the order is forced,
    # the parent is the last earlier prefix, and every earlier node's length
    # is a passing level.
    rows = []
    for i, s in enumerate(order):
        parent = -1
        for j in range(i - 1, -1, -1):
            if s.startswith(order[j]):
                parent = j
                break
        member = s in members
        color = sigma[len(s)] if scope == "all" or (scope == "members" and member) else 0
        rows.append((i, parent, int(member), color, tuple(s[len(order[j])] for j in range(i))))
    return tuple(rows)


def em_code(a: FiniteSubset, color_scope: str = "all") -> EmCode:
    if color_scope not in COLOR_SCOPES:
        raise ValueError(f"color_scope must be one of {COLOR_SCOPES}")
    closure = _closure(a.nodes)
    lengths = sorted({len(s) for s in closure})
    if len(lengths) == len(closure):
        return EmCode(_rows_distinct(sorted(closure, key=len), a.nodes, a.host.sigma, color_scope), color_scope)
    groups = [sorted(s for s in closure if len(s) == l) for l in lengths]
    best = None
    for perm in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [s for g in perm for s in g]
        rows = _rows(order, a.nodes, lengths, a.host, color_scope)
        if best is None or rows < best:
            best = rows
    return EmCode(best, color_scope)


def em_equivalent_bruteforce(a: FiniteSubset, b: FiniteSubset, color_scope: str = "all") -> bool:
    """Search all bijections between the meet closures for one satisfying every clause."""
    ca, cb = sorted(_closure(a.nodes)), sorted(_closure(b.nodes))
    if len(ca) != len(cb) or len(a.nodes) != len(b.nodes):
        return False

    def colour_ok(s: str, fs: str) -> bool:
        if color_scope == "none" or (color_scope == "members" and s not in a.nodes):
            return True
        return a.host.sigma[len(s)] == b.host.sigma[len(fs)]

    for image in itertools.permutations(cb):
        f = dict(zip(ca, image))
        if all(
            (s in a.nodes) == (f[s] in b.nodes) and colour_ok(s, f[s]) for s in ca
        ) and all(
            is_prefix(s, t) == is_prefix(f[s], f[t])
            and (len(s) < len(t)) == (len(f[s]) < len(f[t]))
            and (len(s) >= len(t) or t[len(s)] == f[t][len(f[s])])
            for s in ca for t in ca
        ):
            return True
    return False


# -- envelopes ---------------------------------------------------------------

class EnvelopeError(ValueError):
    pass


def envelope_candidates(v: StrongSubtree, a: FiniteSubset, color_scope: str = "all") -> list[FiniteSubset]:
    code = em_code(a, color_scope)
    out = []
    for combo in itertools.combinations(sorted(v.all_nodes()), len(a.nodes)):
        b = FiniteSubset(frozenset(combo), v.host)
        if em_code(b, color_scope) == code:
            out.append(b)
    return out


def envelope(v: StrongSubtree, a: FiniteSubset) -> FiniteSubset:
    """The unique Em-equivalent copy of ``a`` inside ``v``.

    Requires the colours of the levels of ``a``'s meet closure to equal the
    colouring sequence of ``v``.  Candidates are found by exhaustive search
    over subsets of ``v``; anything other than exactly one is an error.
    """
    if v.host.levels is not None:
        raise EnvelopeError("envelopes live in subtrees of the full tree")
    if a.host.sigma[: v.host.height] != v.host.sigma[: a.host.height]:
        raise EnvelopeError("a and v are coloured by different trees")
    if sigma_of(a) != induced_sequence(v):
        raise EnvelopeError(
            f"colour sequence of a's meet closure {sigma_of(a)} != sequence of v {induced_sequence(v)}"
        )
    found = envelope_candidates(v, a)
    if len(found) != 1:
        raise EnvelopeError(f"expected exactly one Em-copy inside v, found {len(found)}")
    return found[0]


@dataclass
class EnvelopeCensus:
    host_height: int
    n_colors: int
    max_size: int
    subtrees: int = 0
    classes: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def envelope_census(host: ColoredTree, max_size: int = 3, max_failures: int = 5) -> EnvelopeCensus:
    """Check envelope uniqueness for every strong subtree ``v`` of ``host`` at once.

    First every subset of ``host`` with at most ``max_size`` members is
    classified by its Em-code, grouped by the colour sequence of its meet
    closure.  Then, for each ``v``, every subset ``b`` of ``v`` whose meet
    closure meets all levels of ``v`` is coded; the resulting multiset must
    hold each class with sequence ``induced_sequence(v)`` exactly once and
    nothing else.  Subsets of ``v`` are listed through its binary address
    map, which is a bijection, and codes are memoised on the node set.
    """
    if host.levels is not None:
        raise ValueError("envelope census needs a full tree")
    out = EnvelopeCensus(host.height, host.n_colors, max_size)
    classes: dict[tuple[int, ...], set[EmCode]] = defaultdict(set)
    memo: dict[frozenset[str], EmCode] = {}

    def code(nodes: frozenset[str]) -> EmCode:
        c = memo.get(nodes)
        if c is None:
            c = memo[nodes] = em_code(FiniteSubset(nodes, host))
        return c

    for k in range(1, max_size + 1):
        for combo in itertools.combinations(host.nodes(), k):
            nodes = frozenset(combo)
            classes[sigma_of(FiniteSubset(nodes, host))].add(code(nodes))
    out.classes = sum(len(v) for v in classes.values())
    # A meet closure of k members has at most 2k - 1 nodes, hence levels.
    for m in range(1, min(host.height, 2 * max_size - 1) + 1):
        abstract = [s for l in range(m) for s in extensions("", l)]
        spanning = [
            combo
            for k in range(1, max_size + 1)
            for combo in itertools.combinations(abstract, k)
            if len({len(x) for x in _closure(combo)}) == m
        ]
        for v in enumerate_strong_subtrees(host, m):
            out.subtrees += 1
            addr = _address_map(v)
            seen = Counter(code(frozenset([addr[x] for x in b])) for b in spanning)
            want = classes.get(induced_sequence(v), set())
            if set(seen) != want or any(c != 1 for c in seen.values()):
                if len(out.failures) < max_failures:
                    extra = sum(c - 1 for c in seen.values())
                    out.failures.append(
                        f"v={v.nodes}: {len(want - set(seen))} classes missing, "
                        f"{len(set(seen) - want)} unexpected, {extra} repeats"
                    )
    return out


# -- Devlin types ------------------------------------------------------------

def _devlin_clauses(nodes: Iterable[str]) -> bool:
    nodes = set(nodes)
    closure = _closure(nodes)
    terminal = {s for s in closure if not any(t != s and t.startswith(s) for t in closure)}
    if terminal != nodes:
        return False
    if len({len(s) for s in closure}) != len(closure):
        return False
    for s in closure:
        for t in closure:
            if len(s) < len(t) and not t.startswith(s) and t[len(s)] != "0":
                return False
    return True


def is_devlin_type(a: FiniteSubset) -> bool:
    """Members are exactly the terminal nodes of the closure, closure lengths are
    distinct, and every passing digit off a node's own path is ``'0'``."""
    if not a.nodes:
        return False
    return _devlin_clauses(a.nodes)


def realized_pattern(a: FiniteSubset) -> PnStructure:
    """Colours of the members read in lexicographic order, as a partitioned linear order."""
    return PnStructure(tuple(a.host.color(s) for s in a.sorted()), a.host.n_colors)


def devlin_types(x: PnStructure, height: int, color_scope: str = "members") -> dict[EmCode, FiniteSubset]:
    """Codes of Devlin-type sets realizing ``x`` in the cyclically coloured tree of this height.

    Depth-first over sets chosen in lexicographic order.  All three Devlin
    clauses are inherited by subsets, so a branch is cut as soon as the
    partial set fails one.  Values are the first witness found per code.
    """
    host = ColoredTree.cyclic(height, x.n_parts)
    pool = sorted(host.nodes(), key=lex_key)
    found: dict[EmCode, FiniteSubset] = {}

    def dfs(start: int, chosen: list[str]) -> None:
        k = len(chosen)
        if k == x.size:
            a = FiniteSubset(frozenset(chosen), host)
            code = em_code(a, color_scope)
            found.setdefault(code, a)
            return
        want = x.parts[k]
        for i in range(start, len(pool)):
            s = pool[i]
            if host.color(s) != want:
                continue
            chosen.append(s)
            if _devlin_clauses(chosen):
                dfs(i + 1, chosen)
            chosen.pop()

    dfs(0, [])
    return found


class DevlinCapError(RuntimeError):
    def __init__(self, partial: dict[int, int], cap: int):
        super().__init__(f"type count did not stabilise below height cap {cap}: {partial}")
        self.partial = partial
        self.cap = cap


@dataclass
class DevlinCount:
    count: int
    height: int
    history: dict[int, int] = field(default_factory=dict)
    codes: list[EmCode] = field(default_factory=list)


def count_devlin_types(
    x: PnStructure,
    height_bound: int | None = None,
    cap: int | None = None,
    color_scope: str = "members",
) -> DevlinCount:
    """Number of Devlin embedding types realizing ``x`` (canonicalised by :func:`em_code`).

    The host height starts at ``height_bound`` (default ``(2m - 1) n``, enough
    room for every length order and colour pattern of ``m`` members) and
    grows until two consecutive heights give the same positive count.

    With ``color_scope="members"`` two types differing only in the colour
    of a meet node are identified; this is the count that matches
    tan^(2m-1)(0) for every ``n``.  ``"all"`` separates them.
    """
    m, n = x.size, x.n_parts
    if m < 1:
        raise ValueError("structure must be nonempty")
    h = height_bound if height_bound is not None else max(1, (2 * m - 1) * n)
    cap = cap if cap is not None else 4 * m * n + 4
    history: dict[int, int] = {}
    prev = None
    while h <= cap:
        types = devlin_types(x, h, color_scope)
        history[h] = len(types)
        if prev is not None and len(types) == prev and prev > 0:
            return DevlinCount(len(types), h, history, sorted(types, key=lambda c: c.rows))
        prev = len(types)
        h += 1
    raise DevlinCapError(history, cap)


# -- the antichain -----------------------------------------------------------

def _address(j: int) -> str:
    """The ``j``-th node of the binary tree in breadth-first, left-to-right order."""
    d = (j + 1).bit_length() - 1
    r = j + 1 - (1 << d)
    return format(r, f"0{d}b") if d else ""


@dataclass(frozen=True)
class AntichainModel:
    n_colors: int
    entries: tuple[tuple[str, str, str], ...]  # (f, w_f, x_f)

    @property
    def xs(self) -> list[str]:
        return [x for _, _, x in self.entries]

    @property
    def ws(self) -> list[str]:
        return [w for _, w, _ in self.entries]

    def host(self) -> ColoredTree:
        h = max(len(x) for x in self.xs) + 1
        return ColoredTree.cyclic(h, self.n_colors)

    def subset(self, xs: Iterable[str]) -> FiniteSubset:
        return FiniteSubset(frozenset(xs), self.host())

    def problems(self) -> list[str]:
        return _antichain_problems(self)


def build_antichain(n: int, count: int) -> AntichainModel:
    """The first ``count`` pairs ``(w_f, x_f)``, addresses ``f`` in breadth-first order.

    ``x_f = w_f + '01' + '0' * i`` with ``i = |f| mod n``.  W-nodes are placed
    greedily: the ``j``-th one sits on the least level that is a multiple of
    ``n`` and lies above ``x`` of the previous address, and it continues its
    W-parent by the last bit of ``f`` followed by zeros.  So lengths run
    ``w_0 < x_0 < w_1 < x_1 < ...`` and every W-node has colour 1.

    Every W clause and the antichain property are checked on the generated
    prefix; a violation raises AssertionError.
    """
    if n < 1 or count < 1:
        raise ValueError("need n >= 1 and count >= 1")
    w: dict[str, str] = {}
    entries = []
    last_x = -1
    for j in range(count):
        f = _address(j)
        if not f:
            wf = ""
        else:
            length = (last_x // n + 1) * n
            parent = w[f[:-1]]
            wf = parent + f[-1] + "0" * (length - len(parent) - 1)
        w[f] = wf
        xf = wf + "01" + "0" * (len(f) % n)
        last_x = len(xf)
        entries.append((f, wf, xf))
    model = AntichainModel(n, tuple(entries))
    problems = model.problems()
    if problems:
        raise AssertionError("antichain construction failed: " + "; ".join(problems))
    return model


def _antichain_problems(model: AntichainModel) -> list[str]:
    n = model.n_colors
    out = []
    by_f = {f: wf for f, wf, _ in model.entries}
    W = set(by_f.values())
    fs = [f for f, _, _ in model.entries]
    if by_f.get("") != "":
        out.append("(1) root of W is not the empty sequence")
    lengths = [len(by_f[f]) for f in fs]
    if len(W) != len(fs) or len(set(lengths)) != len(lengths) or any(l % n for l in lengths):
        out.append("(2) W-nodes are not on distinct levels that are multiples of n")
    for (f, wf, x), nxt in zip(model.entries, model.entries[1:]):
        if not len(wf) < len(x) < len(nxt[1]):
            out.append(f"lengths of w_{f}, x_{f}, next w are not interleaved")
    for f in fs:
        for g in fs:
            if f == g:
                continue
            wf, wg = by_f[f], by_f[g]
            if len(f) == len(g) and lex_key(f) < lex_key(g) and not len(wf) < len(wg):
                out.append(f"(3) {f} <lex {g} on one W-level but |w_f| >= |w_g|")
            if len(f) < len(g) and not len(wf) < len(wg):
                out.append(f"(4) lower W-level {f} is not shorter than {g}")
            if (lex_key(f) < lex_key(g)) != (lex_key(wf) < lex_key(wg)):
                out.append(f"(5) f -> w_f is not order preserving at {f}, {g}")
            if meet(wf, wg) not in W:
                out.append(f"W is not meet-closed at {f}, {g}")
            if is_prefix(f, g) != is_prefix(wf, wg):
                out.append(f"W tree order disagrees with address order at {f}, {g}")
    for wf in W:
        for l in range(len(wf)):
            t = wf[:l]
            if t not in W and wf[l] != "0":
                out.append(f"(6) {t!r} < {wf!r} is not in W but is not followed by 0")
    xs = model.xs
    for f, wf, x in model.entries:
        if x != wf + "01" + "0" * (len(f) % n):
            out.append(f"x_{f} has the wrong form")
    for a, b in itertools.combinations(xs, 2):
        if is_prefix(a, b) or is_prefix(b, a):
            out.append(f"x nodes {a!r} and {b!r} are comparable")
    return out
