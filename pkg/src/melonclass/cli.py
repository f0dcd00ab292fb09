"""Command-line surface: family tables, class computation, necklace
closed forms, the log-concavity search harness, and direct point counting.

Exit codes: 0 success, 1 oracle or cross-check mismatch, 2 usage error,
3 invalid input (construction or graph file), 4 point budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import concavity, families, graphalg, melonic
from .families import FamilyTag
from .poly import Basis, ClassPoly, to_basis

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_BUDGET = 4

FAMILY_ORDER = (FamilyTag.F, FamilyTag.G, FamilyTag.H, FamilyTag.B)


@dataclass(frozen=True)
class TableRow:
    m: int
    coefficients: list[int]
    verdict: bool
    failing_degrees: list[int]


@dataclass(frozen=True)
class SearchResult:
    constructions_checked: int
    edge_bound: int
    counterexamples: list[dict]
    elapsed: float

    def to_json(self) -> str:
        return json.dumps(
            {"constructions_checked": self.constructions_checked,
             "edge_bound": self.edge_bound,
             "counterexamples": self.counterexamples,
             "elapsed": self.elapsed},
            indent=2)


def _coeff_list(c: ClassPoly, basis: Basis) -> list[int]:
    return list(to_basis(c, basis).poly.coeffs)


def _fmt_coeffs(coeffs: list[int]) -> str:
    return "[" + ", ".join(str(a) for a in coeffs) + "]"


def _parse_primes(text: str) -> list[int]:
    primes = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        q = int(part)
        if not graphalg._is_prime(q):
            raise argparse.ArgumentTypeError(f"{q} is not prime")
        primes.append(q)
    if not primes:
        raise argparse.ArgumentTypeError("no primes given")
    return primes


def _parse_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(text)
    if lo > hi or lo < 0:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return lo, hi


def _budget_from(args: argparse.Namespace) -> graphalg.CountBudget:
    if args.budget is not None:
        return graphalg.CountBudget(args.budget)
    env = os.environ.get("MELON_BUDGET")
    if env:
        return graphalg.CountBudget(int(env))
    return graphalg.DEFAULT_BUDGET


def cmd_family(args: argparse.Namespace) -> int:
    tag = FamilyTag(args.family)
    c = families.family_poly(tag, args.m, args.n)
    print(_fmt_coeffs(_coeff_list(c, args.basis)))
    return EXIT_OK


def _table_rows(tag: FamilyTag, lo: int, hi: int,
                which: str) -> list[TableRow]:
    rows = []
    for m in range(lo, hi + 1):
        coeffs = list(families.family_poly(tag, m).poly.coeffs)
        shown = coeffs if coeffs else [0]
        if which == "ulc":
            ok, fails = concavity.check_ulc(tuple(coeffs))
        else:
            ok, fails = concavity.check_ulc_order(tuple(coeffs), max(m, 1))
        rows.append(TableRow(m=m, coefficients=shown, verdict=ok,
                             failing_degrees=list(fails)))
    return rows


def _render_tables_md(tables: dict[str, list[TableRow]], which: str) -> str:
    label = "ULC" if which == "ulc" else "ULC(m)"
    out = []
    for name, rows in tables.items():
        out.append(f"## {name} ({label})")
        out.append("")
        cells = [["m", "coefficients", label, "failing degrees"]]
        for r in rows:
            fail = ("{" + ",".join(str(d) for d in r.failing_degrees) + "}"
                    if r.failing_degrees else "-")
            cells.append([str(r.m), _fmt_coeffs(r.coefficients),
                          "yes" if r.verdict else "no", fail])
        widths = [max(len(row[i]) for row in cells) for i in range(4)]
        for i, row in enumerate(cells):
            out.append("| " + " | ".join(c.ljust(w)
                                         for c, w in zip(row, widths)) + " |")
            if i == 0:
                out.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
        out.append("")
    return "\n".join(out)


def cmd_tables(args: argparse.Namespace) -> int:
    lo, hi = args.m
    tables = {tag.value: _table_rows(tag, lo, hi, args.which)
              for tag in FAMILY_ORDER}
    if args.format == "json":
        payload = {"which": args.which, "m_lo": lo, "m_hi": hi,
                   "families": {
                       name: [{"m": r.m, "coefficients": r.coefficients,
                               "verdict": r.verdict,
                               "failing_degrees": r.failing_degrees}
                              for r in rows]
                       for name, rows in tables.items()}}
        print(json.dumps(payload, indent=2))
    else:
        print(_render_tables_md(tables, args.which))
    return EXIT_OK


def _load_construction(path: str) -> melonic.MelonicConstruction:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return melonic.from_json_dict(data)


def _print_verify(report: graphalg.VerifyReport, as_json: bool) -> dict:
    rows = [{"q": c.q, "counted": c.counted, "expected": c.expected,
             "match": c.match} for c in report.checks]
    if not as_json:
        for row in rows:
            status = "match" if row["match"] else "MISMATCH"
            print(f"q={row['q']}: counted {row['counted']}, "
                  f"expected {row['expected']} -> {status}")
    return {"verify": rows}


def cmd_class(args: argparse.Namespace) -> int:
    try:
        c = _load_construction(args.construction)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    violations = melonic.validate(c)
    if violations:
        for v in violations:
            print(f"invalid construction: {v}", file=sys.stderr)
        return EXIT_INVALID
    cls = melonic.class_of(c)
    coeffs = _coeff_list(cls, args.basis)
    payload: dict = {"coefficients": coeffs, "basis": args.basis.name}
    if args.format != "json":
        print(_fmt_coeffs(coeffs))
    exit_code = EXIT_OK
    if args.verify:
        g = melonic.to_graph(c)
        try:
            report = graphalg.verify_class(g, cls, args.verify,
                                           budget=_budget_from(args))
        except graphalg.BudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        payload.update(_print_verify(report, args.format == "json"))
        if not report.all_match:
            exit_code = EXIT_MISMATCH
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    return exit_code


def _necklace_construction(kind: str, m: int,
                           n: int) -> melonic.MelonicConstruction:
    if kind == "clasped":
        tup = (1,) + (m,) * (n - 2) if n > 2 else (1,)
    else:
        tup = (m,) * (n - 1)
    return melonic.MelonicConstruction(
        (melonic.Stage((m + 1,), 0, 1), melonic.Stage(tup, 1, 1)))


def cmd_necklace(args: argparse.Namespace) -> int:
    if args.m < 1 or args.n < 2:
        print("error: necklace needs --m >= 1 and --n >= 2", file=sys.stderr)
        return EXIT_USAGE
    if args.kind == "clasped":
        cls = families.clasped_necklace_class(args.m, args.n)
    else:
        cls = families.necklace_class(args.m, args.n)
    coeffs = _coeff_list(cls, args.basis)
    payload: dict = {"kind": args.kind, "m": args.m, "n": args.n,
                     "coefficients": coeffs, "basis": args.basis.name}
    if args.format != "json":
        print(_fmt_coeffs(coeffs))
    exit_code = EXIT_OK
    if args.verify is not None:
        construction = _necklace_construction(args.kind, args.m, args.n)
        recursed = melonic.class_of(construction)
        closed_matches = recursed.poly == cls.poly
        payload["construction_match"] = closed_matches
        if args.format != "json":
            print("construction recursion: "
                  + ("match" if closed_matches else "MISMATCH"))
        if not closed_matches:
            exit_code = EXIT_MISMATCH
        if args.verify:
            g = melonic.to_graph(construction)
            try:
                report = graphalg.verify_class(g, cls, args.verify,
                                               budget=_budget_from(args))
            except graphalg.BudgetExceeded as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_BUDGET
            payload.update(_print_verify(report, args.format == "json"))
            if not report.all_match:
                exit_code = EXIT_MISMATCH
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    return exit_code


def _search_chunk(serialized: list[str]) -> list[tuple[str, list[int]]]:
    bad = []
    for text in serialized:
        c = melonic.deserialize(text)
        coeffs = tuple(melonic.class_of(c).poly.coeffs)
        ok, fails = concavity.check_lc(coeffs)
        if not ok:
            bad.append((text, list(fails)))
    return bad


def cmd_search(args: argparse.Namespace) -> int:
    start = time.monotonic()
    constructions = list(melonic.enumerate_constructions(args.max_edges))
    keys = [melonic.serialize(c) for c in constructions]
    workers = args.workers or 1
    if workers <= 1:
        bad = _search_chunk(keys)
    else:
        chunks = [keys[i::workers] for i in range(workers)]
        bad = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_search_chunk, chunks):
                bad.extend(part)
    bad.sort(key=lambda item: item[0])
    counterexamples = [
        {"construction": melonic.to_json_dict(melonic.deserialize(text)),
         "failing_degrees": fails}
        for text, fails in bad]
    result = SearchResult(
        constructions_checked=len(constructions),
        edge_bound=args.max_edges,
        counterexamples=counterexamples,
        elapsed=round(time.monotonic() - start, 3))
    print(result.to_json())
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    try:
        with open(args.graph, "r", encoding="utf-8") as fh:
            g = graphalg.from_edge_list(fh.read())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    primes = args.verify or [2, 3, 5]
    budget = _budget_from(args)
    counts = {}
    try:
        for q in primes:
            counts[q] = graphalg.count_complement_points(g, q, budget=budget)
    except graphalg.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except graphalg.DisconnectedGraph as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.format == "json":
        print(json.dumps({"vertices": g.num_vertices,
                          "edges": len(g.edges),
                          "counts": {str(q): n for q, n in counts.items()}},
                         indent=2))
    else:
        print(f"graph: {g.num_vertices} vertices, {len(g.edges)} edges")
        for q, n in counts.items():
            print(f"q={q}: {n} complement points")
    return EXIT_OK


def _basis_arg(text: str) -> Basis:
    try:
        return Basis[text.upper()]
    except KeyError:
        raise argparse.ArgumentTypeError(
            f"basis must be S or T, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="melon",
        description="Grothendieck classes of banana, melonic, and necklace "
                    "graphs: tables, closed forms, search, and point-count "
                    "verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="print one family polynomial")
    p.add_argument("family", choices=[t.value for t in FAMILY_ORDER])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, default=None,
                   help="second parameter for g and b")
    p.add_argument("--basis", type=_basis_arg, default=Basis.S)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("tables", help="reproduce the concavity tables")
    p.add_argument("--m", type=_parse_range, default=(1, 10),
                   help="range lo..hi (default 1..10)")
    p.add_argument("--which", choices=["ulc", "ulcm"], default="ulc")
    p.add_argument("--format", choices=["json", "md"], default="md")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("class", help="class of a construction JSON file")
    p.add_argument("construction", help="path to construction JSON")
    p.add_argument("--basis", type=_basis_arg, default=Basis.S)
    p.add_argument("--verify", type=_parse_primes, default=None,
                   help="comma-separated primes for point-count check")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=["json", "md"], default="md")
    p.set_defaults(func=cmd_class)

    p = sub.add_parser("necklace", help="necklace closed-form class")
    p.add_argument("kind", choices=["plain", "clasped"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--basis", type=_basis_arg, default=Basis.S)
    p.add_argument("--verify", type=_parse_primes, nargs="?", const=[],
                   default=None,
                   help="cross-check against the construction recursion; "
                        "with primes, also against point counts")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=["json", "md"], default="md")
    p.set_defaults(func=cmd_necklace)

    p = sub.add_parser("search",
                       help="check log-concavity of every class up to an "
                            "edge bound")
    p.add_argument("--max-edges", type=int, required=True)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("oracle",
                       help="count hypersurface complement points of an "
                            "edge-list graph")
    p.add_argument("graph", help="path to edge-list file, one 'u v' per line")
    p.add_argument("--verify", type=_parse_primes, default=None,
                   help="primes to count at (default 2,3,5)")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=["json", "md"], default="md")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "m", None) is not None and args.command == "family":
        if args.m < 0:
            parser.error("--m must be >= 0")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
