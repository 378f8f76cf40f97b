"""Command-line interface.

Every subcommand builds a :class:`RunReport` and prints it as a table, as
JSON (``--json``) or as CSV (``--csv``, the table rows only).

Exit codes: 0 success or the relation holds, 1 a check failed or the
relation fails, 2 a resource bound was hit, 3 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import degrees, devlin, pstruct, tangent, tournaments, trees
from .degrees import ArrowQuery, BudgetExceeded
from .devlin import DevlinCapError
from .tournaments import Tournament, TournamentError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BOUND = 2
EXIT_INVALID = 3

SCHEMA_VERSION = 1


@dataclass
class RunReport:
    command: str
    inputs: dict[str, Any]
    results: dict[str, Any] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    wall_time: float = 0.0
    exit_code: int = EXIT_OK

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        payload = {"schema": SCHEMA_VERSION, **asdict(self)}
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        data.pop("schema", None)
        return cls(**data)


class InvalidInput(ValueError):
    pass


# -- tournament references ---------------------------------------------------

_NAMED: dict[str, Callable[[], Tournament]] = {
    "point": tournaments.point,
    "arc": tournaments.arc_tournament,
    "3-cycle": tournaments.three_cycle,
    "cycle": tournaments.three_cycle,
    "D": tournaments.dominated_cycle,
}


def resolve_tournament(ref: Any) -> Tournament:
    """A tournament from a name, ``chain:k``, ``cycle:n``, ``rows:011,001,000``,
    a list of 0/1 row strings, or a path to a matrix file."""
    if isinstance(ref, list):
        return _from_rows(ref)
    if not isinstance(ref, str) or not ref:
        raise InvalidInput(f"not a tournament reference: {ref!r}")
    if ref in _NAMED:
        return _NAMED[ref]()
    head, _, arg = ref.partition(":")
    if head in ("chain", "cycle", "C") and arg:
        try:
            k = int(arg)
        except ValueError:
            raise InvalidInput(f"bad size in {ref!r}") from None
        if k < 1:
            raise InvalidInput(f"size must be positive in {ref!r}")
        return tournaments.transitive_tournament(k) if head == "chain" else tournaments.circular_tournament(k)
    if head == "rows":
        return _from_rows(arg.split(","))
    path = Path(ref)
    if path.is_file():
        try:
            return tournaments.parse_tournament(path.read_text())
        except TournamentError as e:
            raise InvalidInput(f"{path}: {e}") from None
    raise InvalidInput(f"unknown tournament {ref!r} (not a name and no such file)")


def _from_rows(rows: list[str]) -> Tournament:
    text = "\n".join([str(len(rows)), *rows])
    try:
        return tournaments.parse_tournament(text)
    except TournamentError as e:
        raise InvalidInput(str(e)) from None


def _name(t: Tournament) -> str:
    for label, make in (("point", tournaments.point), ("arc", tournaments.arc_tournament)):
        if tournaments.is_isomorphic(t, make()):
            return label
    if tournaments.is_transitive(t):
        return f"chain:{t.n}"
    if t.n % 2 and tournaments.is_isomorphic(t, tournaments.circular_tournament(t.n // 2)):
        return f"cycle:{t.n // 2}"
    return "rows:" + ",".join(t.rows())


# -- commands ----------------------------------------------------------------

def cmd_enum(n: int, oracle: bool = True) -> RunReport:
    r = RunReport("enum", {"n": n})
    if n < 1:
        raise InvalidInput("n must be >= 1")
    if n > 6:
        raise BoundExceeded(f"enumeration is limited to n <= 6, got {n}")
    big = tangent.tangent_derivative(2 * n - 1, check=oracle)
    rows = []
    total = 0
    for t in tournaments.enumerate_tournaments(n):
        local = tournaments.is_local_order(t)
        if oracle:
            r.checks.setdefault("local order = transitive neighbourhoods", True)
            if local != tournaments.has_transitive_neighbourhoods(t):
                r.checks["local order = transitive neighbourhoods"] = False
        if not local:
            continue
        aut = tournaments.automorphism_count(t)
        t_c = pstruct.extension_count_formula(t)
        if oracle:
            r.checks.setdefault("t_C formula = extension count", True)
            if len(pstruct.enumerate_extensions(t)) != t_c:
                r.checks["t_C formula = extension count"] = False
        total += t_c
        rows.append({"name": _name(t), "canonical": ",".join(t.rows()), "aut": aut, "t_C": t_c, "T_C": t_c * big})
    r.results = {"rows": rows, "sum_t_C": total, "two_to_n": 2 ** n}
    r.checks["sum t_C = 2^n"] = total == 2 ** n
    return r


def cmd_identity(max_n: int, oracle: bool = True) -> RunReport:
    r = RunReport("identity", {"max_n": max_n})
    if not 1 <= max_n <= 6:
        raise BoundExceeded(f"identity check is limited to 1 <= n <= 6, got {max_n}")
    rows = []
    for n in range(1, max_n + 1):
        sub = cmd_enum(n, oracle)
        rows.append({"n": n, "local_orders": len(sub.results["rows"]), "sum_t_C": sub.results["sum_t_C"], "two_to_n": 2 ** n})
        for name, ok in sub.checks.items():
            r.checks[f"n={n}: {name}"] = ok
    r.results = {"rows": rows}
    return r


def cmd_degree(ref: str, oracle: bool = True) -> RunReport:
    t = resolve_tournament(ref)
    r = RunReport("degree", {"tournament": ref})
    if not tournaments.is_local_order(t):
        raise InvalidInput(f"{ref} is not a local order")
    value = pstruct.extension_count_formula(t)
    r.results = {"name": _name(t), "aut": tournaments.automorphism_count(t), "t_C": value}
    if oracle:
        r.checks["formula = extension count"] = value == len(pstruct.enumerate_extensions(t))
    return r


def cmd_big_degree(ref: str | None, pn: str | None = None, oracle: bool = True) -> RunReport:
    if pn is not None:
        try:
            x = pstruct.PnStructure.from_word(pn)
        except ValueError as e:
            raise InvalidInput(str(e)) from None
        if not x.size:
            raise InvalidInput("empty structure")
        r = RunReport("big-degree", {"pn": pn})
        r.results = {"size": x.size, "T": tangent.tangent_derivative(2 * x.size - 1, check=oracle)}
        if oracle:
            r.checks["closed form = zigzag"] = True
        return r
    if ref is None:
        raise InvalidInput("give a tournament or --pn WORD")
    t = resolve_tournament(ref)
    r = RunReport("big-degree", {"tournament": ref})
    if not tournaments.is_local_order(t):
        raise InvalidInput(f"{ref} is not a local order")
    t_c = pstruct.extension_count_formula(t)
    tan = tangent.tangent_derivative(2 * t.n - 1, check=oracle)
    r.results = {"name": _name(t), "t_C": t_c, "tan": tan, "T_C": t_c * tan}
    if oracle:
        r.checks["formula = extension count"] = t_c == len(pstruct.enumerate_extensions(t))
        r.checks["closed form = zigzag"] = True
    return r


def cmd_extensions(ref: str, oracle: bool = True) -> RunReport:
    t = resolve_tournament(ref)
    r = RunReport("extensions", {"tournament": ref})
    ext = pstruct.enumerate_extensions(t)
    rows = [{"index": i, "word": a.word} for i, a in enumerate(ext.representatives)]
    r.results = {"rows": rows, "count": len(rows), "local_order": bool(rows)}
    if oracle:
        r.checks["local order = transitive neighbourhoods"] = bool(rows) == tournaments.has_transitive_neighbourhoods(t)
        if rows:
            r.checks["count = 2|X|/|Aut|"] = len(rows) == pstruct.extension_count_formula(t)
    return r


def load_query(path: str) -> ArrowQuery:
    """Query JSON: ``{"Z": ref, "Y": ref, "X": ref, "k": int, "l": int}``."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise InvalidInput(f"cannot read query: {e}") from None
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path}: invalid JSON: {e}") from None
    missing = [key for key in ("Z", "Y", "X", "k", "l") if key not in data]
    if missing:
        raise InvalidInput(f"query lacks {', '.join(missing)}")
    if not all(isinstance(data[key], int) for key in ("k", "l")):
        raise InvalidInput("k and l must be integers")
    try:
        return ArrowQuery(*(resolve_tournament(data[key]) for key in "ZYX"), data["k"], data["l"])
    except ValueError as e:
        raise InvalidInput(str(e)) from None


def cmd_arrow(path: str, budget: int | None = None, threads: int = 1, symmetry: bool = False, oracle: bool = True) -> RunReport:
    q = load_query(path)
    r = RunReport("arrow", {"query": path, "k": q.k, "l": q.l, "symmetry": symmetry})
    res = degrees.arrow_check(q, budget=budget, symmetry=symmetry, workers=threads)
    r.results = {
        "holds": res.holds,
        "examined": res.examined,
        "x_copies": res.x_copies,
        "y_copies": res.y_copies,
        "notes": res.notes,
    }
    if res.counterexample is not None:
        c = res.counterexample
        r.results["counterexample"] = [{"copy": list(cp), "colour": v} for cp, v in zip(c.copies, c.values)]
        if oracle:
            r.checks["counterexample verified"] = degrees.verify_coloring_is_witness(q, c)
    r.exit_code = EXIT_OK if res.holds else EXIT_FAILED
    return r


def cmd_tangent(max_m: int, oracle: bool = True) -> RunReport:
    if max_m < 1:
        raise InvalidInput("max_m must be >= 1")
    r = RunReport("tangent", {"max_m": max_m})
    table = tangent.tangent_table(max_m, check=False)
    rows = [{"m": m, "order": o, "value": v} for m, o, v in table.rows()]
    r.results = {"rows": rows}
    if oracle:
        zz = tangent.zigzag_numbers(2 * max_m)
        r.checks["closed form = zigzag"] = all(row["value"] == zz[row["order"]] for row in rows)
    return r


def cmd_devlin(size: int, n: int, pattern: str | None = None, color_scope: str = "members", oracle: bool = True) -> RunReport:
    if size < 1 or n < 1:
        raise InvalidInput("size and n must be >= 1")
    if color_scope not in devlin.COLOR_SCOPES:
        raise InvalidInput(f"colour scope must be one of {devlin.COLOR_SCOPES}")
    if pattern is not None:
        if len(pattern) != size or any(not c.isdigit() or not 1 <= int(c) <= n for c in pattern):
            raise InvalidInput(f"pattern must be {size} digits in 1..{n}")
        words = [tuple(int(c) for c in pattern)]
    else:
        words = list(itertools.product(range(1, n + 1), repeat=size))
    r = RunReport("devlin", {"size": size, "n": n, "pattern": pattern, "color_scope": color_scope})
    expected = tangent.tangent_derivative(2 * size - 1)
    rows = []
    for w in words:
        x = pstruct.PnStructure(w, n)
        res = devlin.count_devlin_types(x, color_scope=color_scope)
        rows.append({"pattern": x.word, "count": res.count, "height": res.height})
    r.results = {"rows": rows, "tan": expected}
    if oracle:
        r.checks[f"count = tan^({2 * size - 1})(0)"] = all(row["count"] == expected for row in rows)
    return r


def cmd_tree(height: int, n: int, sigma: list[int], convention: str = "zero", oracle: bool = True, show: bool = False) -> RunReport:
    """Strong subtrees of a coloured tree with a given colouring sequence.

    ``zero``: ``n`` colours ``0..n-1`` with level ``k`` coloured ``k mod n``.
    ``cyclic``: colours ``1..n`` with level ``k`` coloured ``(k mod n) + 1``.
    """
    if height < 1 or n < 1:
        raise InvalidInput("height and n must be >= 1")
    if height > 8:
        raise BoundExceeded(f"trees are limited to height 8, got {height}")
    host = trees.ColoredTree.milliken(height, n - 1) if convention == "zero" else trees.ColoredTree.cyclic(height, n)
    lo, hi = host.base, host.top
    if any(not lo <= c <= hi for c in sigma):
        raise InvalidInput(f"sigma values must lie in {lo}..{hi}")
    r = RunReport("tree", {"height": height, "n": n, "sigma": sigma, "convention": convention})
    found = trees.filter_by_sequence(host, sigma)
    r.results = {"count": len(found), "host_sigma": list(host.sigma)}
    if show:
        r.results["rows"] = [
            {"levels": " ".join(map(str, s.levels)), "nodes": " | ".join(" ".join(x or "()" for x in lvl) for lvl in s.nodes)}
            for s in found
        ]
    if oracle:
        r.checks["every subtree valid"] = all(not trees.strong_subtree_problems(s) for s in found)
        r.checks["every sequence = sigma"] = all(trees.induced_sequence(s) == tuple(sigma) for s in found)
    return r


def cmd_antichain(n: int, count: int, oracle: bool = True) -> RunReport:
    if n < 1 or count < 1:
        raise InvalidInput("n and count must be >= 1")
    r = RunReport("antichain", {"n": n, "count": count})
    try:
        model = devlin.build_antichain(n, count)
    except AssertionError as e:
        r.checks["construction clauses"] = False
        r.results = {"error": str(e)}
        return r
    host = model.host()
    rows = [{"f": f or "()", "w_f": wf or "()", "x_f": x, "colour": host.color(x)} for f, wf, x in model.entries]
    r.results = {"rows": rows}
    r.checks["construction clauses"] = True
    if oracle:
        xs = model.xs
        small = [c for k in (1, 2) for c in itertools.combinations(xs, k)]
        r.checks["subsets of size <= 2 are Devlin"] = all(devlin.is_devlin_type(model.subset(c)) for c in small)
    return r


class BoundExceeded(RuntimeError):
    pass


# -- argument parsing --------------------------------------------------------

def _sigma(text: str) -> list[int]:
    text = text.strip().strip("[]")
    if not text:
        return []
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a colour sequence: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="print the full report as JSON")
    out.add_argument("--csv", action="store_true", help="print the result rows as CSV")
    common.add_argument("--threads", type=int, default=1, help="worker processes for searches")
    common.add_argument("--budget", type=int, default=None, help="colouring budget (default: $RAMSEY_BUDGET or 2^24)")
    common.add_argument("--no-oracle", action="store_true", help="skip the independent cross-checks")

    p = argparse.ArgumentParser(prog="localorder", description="Ramsey degrees of local orders", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enum", parents=[common], help="local orders of size n with t_C and T_C")
    s.add_argument("n", type=int)
    s = sub.add_parser("identity", parents=[common], help="sum of t_C over size n equals 2^n")
    s.add_argument("max_n", type=int)
    s = sub.add_parser("degree", parents=[common], help="small Ramsey degree t_C")
    s.add_argument("tournament")
    s = sub.add_parser("big-degree", parents=[common], help="big Ramsey degree T_C (or in P_n with --pn)")
    s.add_argument("tournament", nargs="?")
    s.add_argument("--pn", metavar="WORD", help="a partitioned linear order such as 121")
    s = sub.add_parser("extensions", parents=[common], help="2-part extensions of a tournament")
    s.add_argument("tournament")
    s = sub.add_parser("arrow", parents=[common], help="decide Z -> (Y)^X_{k,l} by exhaustive search")
    s.add_argument("query", help="JSON file with Z, Y, X, k, l")
    s.add_argument("--symmetry", action="store_true", help="skip colourings that are not orbit-minimal")
    s = sub.add_parser("tangent", parents=[common], help="tan^(2m-1)(0) for m = 1..max_m")
    s.add_argument("max_m", type=int)
    s = sub.add_parser("devlin", parents=[common], help="count Devlin embedding types")
    s.add_argument("size", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--pattern", help="only this colour pattern, e.g. 12")
    s.add_argument("--color-scope", default="members", choices=devlin.COLOR_SCOPES)
    s = sub.add_parser("tree", parents=[common], help="strong subtrees with a colouring sequence")
    s.add_argument("height", type=int)
    s.add_argument("n", type=int)
    s.add_argument("sigma", type=_sigma, help="e.g. '[0,0]' or '0 1'")
    s.add_argument("--convention", choices=("zero", "cyclic"), default="zero")
    s.add_argument("--show", action="store_true", help="list the subtrees")
    s = sub.add_parser("antichain", parents=[common], help="the W tree and antichain X")
    s.add_argument("n", type=int)
    s.add_argument("count", type=int)
    return p


def run(args: argparse.Namespace) -> RunReport:
    oracle = not args.no_oracle
    c = args.command
    if c == "enum":
        return cmd_enum(args.n, oracle)
    if c == "identity":
        return cmd_identity(args.max_n, oracle)
    if c == "degree":
        return cmd_degree(args.tournament, oracle)
    if c == "big-degree":
        return cmd_big_degree(args.tournament, args.pn, oracle)
    if c == "extensions":
        return cmd_extensions(args.tournament, oracle)
    if c == "arrow":
        return cmd_arrow(args.query, args.budget, max(1, args.threads), args.symmetry, oracle)
    if c == "tangent":
        return cmd_tangent(args.max_m, oracle)
    if c == "devlin":
        return cmd_devlin(args.size, args.n, args.pattern, args.color_scope, oracle)
    if c == "tree":
        return cmd_tree(args.height, args.n, args.sigma, args.convention, oracle, args.show)
    if c == "antichain":
        return cmd_antichain(args.n, args.count, oracle)
    raise InvalidInput(f"unknown command {c}")


def _print_table(report: RunReport, stream) -> None:
    print(f"# {report.command} {json.dumps(report.inputs, sort_keys=True)}", file=stream)
    rows = report.results.get("rows")
    if rows:
        cols = list(rows[0])
        widths = [max(len(col), *(len(str(row[col])) for row in rows)) for col in cols]
        print("  ".join(col.ljust(w) for col, w in zip(cols, widths)), file=stream)
        for row in rows:
            print("  ".join(str(row[col]).ljust(w) for col, w in zip(cols, widths)), file=stream)
    for key, value in report.results.items():
        if key != "rows":
            print(f"{key}: {json.dumps(value)}", file=stream)
    for name, ok in report.checks.items():
        print(f"check {name}: {'pass' if ok else 'FAIL'}", file=stream)
    print(f"time: {report.wall_time:.3f}s", file=stream)


def _print_csv(report: RunReport, stream) -> None:
    rows = report.results.get("rows")
    if rows is None:
        rows = [{k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in report.results.items()}]
    if not rows:
        return
    w = csv.DictWriter(stream, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is not None and args.budget < 1:
        parser.error("--budget must be positive")
    if args.budget is None and os.environ.get("RAMSEY_BUDGET"):
        try:
            degrees.default_budget()
        except ValueError:
            print("error: RAMSEY_BUDGET is not an integer", file=sys.stderr)
            return EXIT_INVALID
    start = time.perf_counter()
    try:
        report = run(args)
    except (InvalidInput, TournamentError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as e:
        report = RunReport(args.command, {"budget": e.budget}, {"required": e.required, "error": str(e)}, exit_code=EXIT_BOUND)
    except (DevlinCapError, BoundExceeded) as e:
        report = RunReport(args.command, {}, {"error": str(e)}, exit_code=EXIT_BOUND)
    report.wall_time = time.perf_counter() - start
    if report.exit_code == EXIT_OK and not report.passed:
        report.exit_code = EXIT_FAILED
    if args.json:
        print(report.to_json())
    elif args.csv:
        _print_csv(report, sys.stdout)
    else:
        _print_table(report, sys.stdout)
    return report.exit_code
