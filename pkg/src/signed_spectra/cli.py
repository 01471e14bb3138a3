"""Command-line front end.

Exit codes: 0 verified / success, 1 counterexample or violation found,
2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from . import graph6
from .bounds import bound_report, format_float, gamma1_margin, write_reports
from .constructions import gamma1, random_connected_signed_graph
from .corpus import BUILTIN_MAX_N, connected_graphs
from .cycles import frustration_index, has_negative_cycle_of_length, negative_girth, shortest_negative_cycle
from .errors import BudgetExceeded, InvalidRange, SignedGraphError, TooSmall
from .graph import SignedGraph, from_line, to_line
from .search import (
    DEFAULT_CLASS_BUDGET,
    TIE_TOL,
    audit_winner,
    enumerate_switching_classes,
    exhaustive_extremal,
    local_search,
    underlying_corpus,
    zero_component_survey,
)
from .spectra import index

log = logging.getLogger("signed_spectra")

EXIT_OK, EXIT_FOUND, EXIT_USAGE = 0, 1, 2
C4_MAX_N = 7
THREADS_ENV = "SIGNED_SPECTRA_THREADS"


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``5``, ``5..7`` or ``5,6,9``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out += range(int(lo), int(hi) + 1)
            elif part:
                out.append(int(part))
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


@dataclass
class RunConfig:
    command: str
    ns: list[int] = field(default_factory=list)
    rs: list[int] = field(default_factory=list)
    seed: int = 0
    iterations: int = 50_000
    restarts: int = 32
    corpus: Optional[str] = None
    output: Optional[str] = None
    tol: float = TIE_TOL
    threads: int = 1
    header: bool = True

    def validate(self) -> "RunConfig":
        if self.command in ("verify-c4", "search", "gamma1-table") and not self.ns:
            raise UsageError("--n must name at least one order")
        if self.iterations < 1 or self.restarts < 1:
            raise UsageError("budgets must be positive")
        if not 0 < self.tol < 1e-2:
            raise UsageError("tolerance must lie in (0, 1e-2)")
        if self.threads < 1:
            raise UsageError("--threads must be positive")
        return self


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{THREADS_ENV}={env!r} is not an integer")
    return os.cpu_count() or 1


def _stamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _json_doc(payload: dict, header: bool) -> str:
    doc = {"schema": 1, **payload}
    if header:
        doc["generated"] = _stamp()
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _csv_text(rows: list[list[str]], header: bool) -> str:
    buf = io.StringIO()
    if header:
        buf.write(f"# generated {_stamp()}\n")
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def parse_graph(text: str) -> SignedGraph:
    """Line format ``n m u v s ...`` or ``<graph6> [signs]``."""
    first = text.split()[0]
    if first.isdigit():
        return from_line(text)
    return graph6.parse_signed(text)


def read_graphs(path: str) -> Iterator[SignedGraph]:
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                yield parse_graph(line)


# ---------------------------------------------------------------- commands


def cmd_verify_c4(cfg: RunConfig, records: Optional[str] = None, zero_survey: bool = False) -> int:
    for n in cfg.ns:
        if n < 5:
            raise InvalidRange(f"the C4 statement needs n >= 5, got {n}")
        if n > C4_MAX_N:
            raise BudgetExceeded(f"exhaustive verification is capped at n={C4_MAX_N}")
    corpus = list(read_graphs(cfg.corpus)) if cfg.corpus else None
    rows: list[dict] = []
    sink = rows.append if records else None
    reports = []
    ok, found = True, False
    for n in cfg.ns:
        rep = exhaustive_extremal(n, 4, corpus, DEFAULT_CLASS_BUDGET, cfg.tol, sink)
        audits = [audit_winner(rec).to_json() for rec in rep.argmax]
        doc = rep.to_json()
        doc["audits"] = audits
        if zero_survey:
            doc["zero_component_survey"] = zero_component_survey(underlying_corpus(n, corpus))
        reports.append(doc)
        log.info("n=%d verdict=%s max=%.12g", n, rep.verdict, rep.max_lambda1 or float("nan"))
        ok &= rep.verdict == "unique-gamma1"
        found |= rep.verdict in ("counterexample", "tie")
    _emit(_json_doc({"command": "verify-c4", "reports": reports}, cfg.header), cfg.output)
    if records:
        fields = ["provenance", "n", "e", "lambda1", "unbalanced", "crfree_4"]
        table = [fields] + [
            [str(r["provenance"]), str(r["n"]), str(r["e"]), format_float(r["lambda1"]),
             str(r["unbalanced"]).lower(), str(r["crfree_4"]).lower()]
            for r in rows
        ]
        _emit(_csv_text(table, cfg.header), records)
    if not ok and not found:
        log.warning("no counterexample, but at least one verdict is inconclusive")
    return EXIT_OK if ok else EXIT_FOUND


def cmd_search(cfg: RunConfig) -> int:
    if len(cfg.ns) != 1 or len(cfg.rs) != 1:
        raise UsageError("search takes a single --n and --r")
    n, r = cfg.ns[0], cfg.rs[0]
    rep = local_search(n, r, cfg.seed, cfg.iterations, cfg.restarts, cfg.threads, cfg.tol)
    doc = rep.to_json()
    _emit(_json_doc({"command": "search", "report": doc}, cfg.header), cfg.output)
    if rep.verdict == "counterexample":
        for rec in rep.argmax:
            print(f"COUNTEREXAMPLE n={n} r={r} lambda1={rec.lambda1:.12g}: {to_line(rec.graph)}",
                  file=sys.stderr)
        return EXIT_FOUND
    return EXIT_OK


def _audit_sources(args, cfg: RunConfig) -> Iterator[tuple[str, SignedGraph, Optional[float]]]:
    if cfg.corpus:
        for i, g in enumerate(read_graphs(cfg.corpus)):
            yield f"corpus:{i}", g, None
    if args.classes_up_to:
        if args.classes_up_to > BUILTIN_MAX_N:
            raise BudgetExceeded(f"--classes-up-to is capped at {BUILTIN_MAX_N}")
        for n in range(1, args.classes_up_to + 1):
            recs = []
            enumerate_switching_classes(connected_graphs(n), recs.append)
            for rec in recs:
                yield f"classes:n{n}:{rec.provenance}", rec.graph, rec.lambda1
    if args.random:
        rng = np.random.default_rng(cfg.seed)
        for i in range(args.random):
            n = int(rng.integers(args.min_n, args.max_n + 1))
            p = float(rng.uniform(0.2, 0.9))
            g = random_connected_signed_graph(rng, n, p, float(rng.uniform(0.0, 1.0)))
            yield f"random:{i}", g, None
    if args.gamma1:
        for n in parse_range(args.gamma1):
            yield f"gamma1:{n}", gamma1(n), None


def cmd_bounds_audit(cfg: RunConfig, args) -> int:
    reports = []
    skipped = 0
    for gid, g, lam in _audit_sources(args, cfg):
        if not g.is_connected():
            skipped += 1
            continue
        reports.append(bound_report(g, gid, lam))
    if not reports:
        raise UsageError("bounds audit has no connected graphs to check")
    buf = io.StringIO()
    if cfg.header:
        buf.write(f"# generated {_stamp()}\n")
    bad = write_reports(reports, buf)
    _emit(buf.getvalue(), cfg.output)
    if skipped:
        log.warning("skipped %d disconnected graphs", skipped)
    print(f"bounds audit: {len(reports)} graphs, {bad} violations", file=sys.stderr)
    return EXIT_FOUND if bad else EXIT_OK


def cmd_gamma1_table(cfg: RunConfig) -> int:
    rows = [["n", "lambda1", "margin_over_n_minus_3", "frustration", "negative_girth"]]
    ok = True
    for n in cfg.ns:
        if n < 5:
            raise TooSmall(f"gamma1 needs n >= 5, got {n}")
        g = gamma1(n)
        lam = index(g).lambda1
        margin = lam - (n - 3)
        ok &= margin > 0
        rows.append([str(n), format_float(lam), format_float(margin),
                     str(frustration_index(g).epsilon), str(negative_girth(g))])
    _emit(_csv_text(rows, cfg.header), cfg.output)
    return EXIT_OK if ok else EXIT_FOUND


def _single_graphs(args) -> list[SignedGraph]:
    graphs = []
    if args.graph:
        graphs.append(parse_graph(args.graph))
    if args.file:
        graphs += list(read_graphs(args.file))
    if not graphs:
        raise UsageError("give --graph or --file")
    return graphs


def cmd_frustration(args) -> int:
    for g in _single_graphs(args):
        res = frustration_index(g)
        print(f"{res.epsilon},{' '.join(map(str, res.witness))}")
    return EXIT_OK


def cmd_girth(args) -> int:
    for g in _single_graphs(args):
        w = shortest_negative_cycle(g)
        if args.r:
            hit = has_negative_cycle_of_length(g, args.r)
            print(f"{'none' if w is None else w.length},{str(bool(hit)).lower()}")
        else:
            print("none" if w is None else f"{w.length},{' '.join(map(str, w.vertices))}")
    return EXIT_OK


def cmd_index(args) -> int:
    for g in _single_graphs(args):
        res = index(g)
        print(f"{format_float(res.lambda1)},{res.residual:.3e}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="signed-spectra", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--tol", type=float, default=TIE_TOL)
        if out:
            sp.add_argument("--out", default=None, help="output file (default stdout)")
            sp.add_argument("--no-header", action="store_true", help="omit the timestamp")

    sp = sub.add_parser("verify-c4", help="exhaustive check of the negative-C4 statement")
    sp.add_argument("--n", required=True)
    sp.add_argument("--corpus", help="graph6 or line-format file of underlying graphs")
    sp.add_argument("--records", help="stream per-class CSV records to this file")
    sp.add_argument("--zero-survey", action="store_true",
                    help="log near-zero eigenvector entries for classes with index above n - 3")
    common(sp)

    sp = sub.add_parser("search", help="randomized search for a counterexample")
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--r", required=True, type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--iters", type=int, default=50_000)
    sp.add_argument("--restarts", type=int, default=32)
    common(sp)

    sp = sub.add_parser("bounds-audit", help="check the index bounds on a corpus")
    sp.add_argument("--corpus")
    sp.add_argument("--classes-up-to", type=int, default=0)
    sp.add_argument("--random", type=int, default=0, help="number of random connected graphs")
    sp.add_argument("--min-n", type=int, default=3)
    sp.add_argument("--max-n", type=int, default=15)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--gamma1", help="include gamma1(n) for this range")
    common(sp)

    sp = sub.add_parser("gamma1-table", help="index of gamma1 against n - 3")
    sp.add_argument("--n", required=True)
    common(sp)

    for name, helptext in (("frustration", "frustration index"),
                           ("girth", "shortest negative cycle"),
                           ("index", "largest eigenvalue")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--graph", help="'n m u v s ...' or '<graph6> <+-...>'")
        sp.add_argument("--file")
        if name == "girth":
            sp.add_argument("--r", type=int, default=0, help="also test for a negative r-cycle")
    return p


def _config(args) -> RunConfig:
    ns: list[int] = []
    rs: list[int] = []
    if getattr(args, "n", None) is not None:
        ns = [args.n] if isinstance(args.n, int) else parse_range(args.n)
    if getattr(args, "r", None):
        rs = [args.r]
    threads = args.threads if getattr(args, "threads", None) is not None else _default_threads()
    return RunConfig(
        command=args.command,
        ns=ns,
        rs=rs,
        seed=getattr(args, "seed", 0),
        iterations=getattr(args, "iters", 50_000),
        restarts=getattr(args, "restarts", 32),
        corpus=getattr(args, "corpus", None),
        output=getattr(args, "out", None),
        tol=getattr(args, "tol", TIE_TOL),
        threads=threads,
        header=not getattr(args, "no_header", False),
    ).validate()


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command in ("frustration", "girth", "index"):
            return {"frustration": cmd_frustration, "girth": cmd_girth, "index": cmd_index}[
                args.command](args)
        cfg = _config(args)
        if args.command == "verify-c4":
            return cmd_verify_c4(cfg, args.records, args.zero_survey)
        if args.command == "search":
            return cmd_search(cfg)
        if args.command == "bounds-audit":
            return cmd_bounds_audit(cfg, args)
        if args.command == "gamma1-table":
            return cmd_gamma1_table(cfg)
    except (UsageError, SignedGraphError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
