"""Acceptance criteria, one test each.

Every test prints a single line ``ACCEPTANCE <n> PASS|FAIL ...`` with the
measured time and the limit it was held to; the lines are repeated in the
terminal summary.  All comparisons are exact.
"""

import itertools
import random
import time

import pytest

from conftest import ACCEPTANCE_LINES
from localorder.cli import cmd_enum
from localorder.degrees import ArrowQuery, arrow_check, lower_bound_coloring, verify_coloring_is_witness
from localorder.devlin import (
    FiniteSubset,
    build_antichain,
    count_devlin_types,
    em_code,
    em_equivalent_bruteforce,
    envelope_census,
    is_devlin_type,
)
from localorder.pstruct import PnStructure, enumerate_extensions, extension_count_formula
from localorder.tangent import tangent_formula, zigzag_numbers
from localorder.tournaments import automorphism_count, enumerate_tournaments, is_local_order, three_cycle, point
from localorder.trees import ColoredTree, enumerate_strong_subtrees, sigma_star_census, strong_subtree_problems

from test_trees import is_strong_by_definition


def report(capsys, number, title, ok, elapsed, limit, detail=""):
    within = elapsed < limit
    verdict = "PASS" if ok and within else "FAIL"
    line = (
        f"ACCEPTANCE {number:>2} {verdict}  {title}: "
        f"{'exact match' if ok else 'MISMATCH'}; {elapsed:.2f}s (limit {limit:g}s)"
        + (f"; {detail}" if detail else "")
    )
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert within, line


def names_to_rows(n):
    return {row["name"]: row for row in cmd_enum(n).results["rows"]}


def test_01_small_degrees_of_elementary_tournaments(capsys):
    t0 = time.perf_counter()
    rows = {**names_to_rows(1), **names_to_rows(2), **names_to_rows(3)}
    got = [rows[k]["t_C"] for k in ("point", "arc", "chain:3", "cycle:1")]
    report(capsys, 1, "t_C of point, arc, 3-chain, 3-cycle", got == [2, 4, 6, 2], time.perf_counter() - t0, 1, f"got {got}")


def test_02_big_degrees_of_elementary_tournaments(capsys):
    t0 = time.perf_counter()
    rows = {**names_to_rows(1), **names_to_rows(2), **names_to_rows(3)}
    got = [rows[k]["T_C"] for k in ("point", "arc", "chain:3", "cycle:1")]
    report(capsys, 2, "T_C of point, arc, 3-chain, 3-cycle", got == [2, 8, 96, 32], time.perf_counter() - t0, 1, f"got {got}")


def test_03_sum_of_small_degrees(capsys):
    sums, times = [], []
    for n in range(1, 7):
        t0 = time.perf_counter()
        r = cmd_enum(n)
        times.append(time.perf_counter() - t0)
        sums.append(r.results["sum_t_C"])
    ok = sums == [2 ** n for n in range(1, 7)]
    report(capsys, 3, "sum of t_C over size n = 2^n, n = 1..6", ok, times[-1], 60, f"sums {sums}; time shown is n = 6")


def test_04_extension_count_formula(capsys):
    t0 = time.perf_counter()
    checked, bad = 0, []
    for n in range(1, 7):
        for t in enumerate_tournaments(n):
            if is_local_order(t):
                checked += 1
                if len(enumerate_extensions(t)) != 2 * n // automorphism_count(t) or 2 * n % automorphism_count(t):
                    bad.append(t.rows())
    report(capsys, 4, "|extensions| = 2|X|/|Aut X| for local orders up to 6 vertices", not bad, time.perf_counter() - t0, 60, f"{checked} local orders")


def test_05_tangent_numbers(capsys):
    t0 = time.perf_counter()
    zz = zigzag_numbers(22)
    closed = [tangent_formula(m) for m in range(1, 12)]
    zig = [zz[2 * m - 1] for m in range(1, 12)]
    ok = closed[:5] == zig[:5] == [1, 2, 16, 272, 7936] and closed == zig
    report(capsys, 5, "tangent numbers by closed form and zigzag, m = 1..11", ok, time.perf_counter() - t0, 1, f"m = 11: {closed[-1]}")


def test_06_devlin_counts(capsys):
    t0 = time.perf_counter()
    got = {
        (n, w): count_devlin_types(PnStructure.from_word(w, n)).count
        for n, w in [(1, "1"), (1, "11"), (1, "111"), (2, "1"), (2, "2"), (2, "11"), (2, "12"), (2, "21"), (2, "22")]
    }
    want = {(1, "1"): 1, (1, "11"): 2, (1, "111"): 16, (2, "1"): 1, (2, "2"): 1, (2, "11"): 2, (2, "12"): 2, (2, "21"): 2, (2, "22"): 2}
    report(capsys, 6, "Devlin type counts = tangent numbers", got == want, time.perf_counter() - t0, 600,
           " ".join(f"n={n}:{w}->{c}" for (n, w), c in got.items()))


def test_07_sigma_star_uniqueness(capsys):
    t0 = time.perf_counter()
    failures, total, cases = [], 0, 0
    for n in (1, 2):
        for h in range(1, 8):
            t = ColoredTree.milliken(h, n)
            for m in (1, 2, 3):
                for sigma in itertools.product(range(n + 1), repeat=m):
                    c = sigma_star_census(t, sigma)
                    cases += 1
                    total += c.total
                    if not c.ok:
                        failures.append((n, h, sigma, c.failures))
    report(capsys, 7, "sigma-star is the unique qualifying subtree (h <= 7, n in {1,2}, |sigma| <= 3)",
           not failures, time.perf_counter() - t0, 300, f"{cases} (host, sigma) cases covering {total} subtrees s")


def test_08_envelope_uniqueness(capsys):
    t0 = time.perf_counter()
    failures, subtrees = [], 0
    for n in (1, 2):
        for h in range(1, 7):
            c = envelope_census(ColoredTree.cyclic(h, n), 3)
            subtrees += c.subtrees
            failures += c.failures
    report(capsys, 8, "envelope uniqueness (h <= 6, |A| <= 3, n in {1,2})", not failures, time.perf_counter() - t0, 300,
           f"{subtrees} strong subtrees checked")


def test_09_arrow_lower_bound(capsys):
    t0 = time.perf_counter()
    c1 = three_cycle()
    q = ArrowQuery(c1, c1, point(), 2, 1)
    r = arrow_check(q)
    witness = lower_bound_coloring(c1, PnStructure.from_word("121"), point())
    ok = (
        not r.holds
        and verify_coloring_is_witness(q, r.counterexample)
        and verify_coloring_is_witness(q, witness)
        and arrow_check(ArrowQuery(c1, c1, point(), 2, 2)).holds
    )
    report(capsys, 9, "C_1 -/-> (C_1)^point_{2,1} with part-index witness; l = 2 holds", ok, time.perf_counter() - t0, 1,
           f"counterexample {r.counterexample.values}, part-index colouring {witness.values}")


def test_10_property_suites(capsys):
    t0 = time.perf_counter()
    problems = []
    # strong subtrees against an independent subset search
    for h in range(1, 5):
        t = ColoredTree.cyclic(h, 1)
        nodes = t.nodes()
        brute = set()
        for r in range(1, len(nodes) + 1):
            for combo in itertools.combinations(nodes, r):
                if is_strong_by_definition(combo, h):
                    brute.add(frozenset(combo))
        listed = [s for m in range(1, h + 1) for s in enumerate_strong_subtrees(t, m)]
        if any(strong_subtree_problems(s) for s in listed) or {s.node_set() for s in listed} != brute or len(listed) != len(brute):
            problems.append(f"strong subtrees at height {h}")
    # em_code congruence with the bijection search
    host = ColoredTree.cyclic(5, 2)
    rng = random.Random(2024)
    sets = [FiniteSubset(frozenset(c), host) for k in (1, 2, 3) for c in itertools.combinations(host.nodes(), k)]
    sample = rng.sample(sets, 300)
    codes = {id(a): em_code(a) for a in sample}
    pairs = [(a, b) for a, b in itertools.combinations(sample, 2) if codes[id(a)] == codes[id(b)]]
    pairs += [tuple(rng.sample(sample, 2)) for _ in range(1500)]
    for a, b in pairs:
        if (codes[id(a)] == codes[id(b)]) != em_equivalent_bruteforce(a, b):
            problems.append(f"em_code vs bijection on {sorted(a.nodes)}, {sorted(b.nodes)}")
            break
    # antichain clauses on 15 generated nodes
    for n in (1, 2, 3):
        model = build_antichain(n, 15)
        if model.problems():
            problems.append(f"antichain n={n}: {model.problems()[:2]}")
        if not all(is_devlin_type(model.subset(c)) for k in (1, 2, 3) for c in itertools.combinations(model.xs, k)):
            problems.append(f"antichain n={n}: a subset is not of Devlin type")
    report(capsys, 10, "property suites (strong subtrees, em_code congruence, antichain)", not problems,
           time.perf_counter() - t0, 300, "; ".join(problems) or f"{len(pairs)} em_code pairs compared")
