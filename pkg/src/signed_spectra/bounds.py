"""Closed-form upper bounds on the index and the audit records built from them."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Iterable, Optional

from .constructions import gamma1
from .cycles import frustration_index
from .errors import Disconnected, NegativeRadicand
from .graph import SignedGraph
from .spectra import lambda1

TIGHT = 1e-8
CSV_FIELDS = ("graph_id", "lambda1", "hong", "stanic", "slack_hong", "slack_stanic")


def _sqrt_bound(radicand: int) -> float:
    if radicand < 0:
        raise NegativeRadicand(f"radicand {radicand} is negative")
    return math.sqrt(radicand)


def hong_bound(g: SignedGraph) -> float:
    """sqrt(2e - n + 1), valid for connected graphs."""
    if not g.is_connected():
        raise Disconnected("the bound is stated for connected graphs")
    return _sqrt_bound(2 * g.e - g.n + 1)


def stanic_bound(g: SignedGraph, epsilon: Optional[int] = None) -> float:
    """sqrt(2(e - eps) - n + 1) with eps the frustration index.

    Pass ``epsilon`` to skip recomputing the frustration index.
    """
    if not g.is_connected():
        raise Disconnected("the bound is stated for connected graphs")
    if epsilon is None:
        epsilon = frustration_index(g).epsilon
    return _sqrt_bound(2 * (g.e - epsilon) - g.n + 1)


def gamma1_margin(n: int) -> float:
    return lambda1(gamma1(n)) - (n - 3)


def edge_budget_check(g: SignedGraph) -> tuple[int, bool]:
    """Missing edges h = C(n, 2) - e and whether h <= 2n - 6."""
    h = g.n * (g.n - 1) // 2 - g.e
    return h, h <= 2 * g.n - 6


@dataclass(frozen=True)
class BoundReport:
    graph_id: str
    lambda1: float
    hong: float
    stanic: float

    @property
    def slack_hong(self) -> float:
        return self.hong - self.lambda1

    @property
    def slack_stanic(self) -> float:
        return self.stanic - self.lambda1

    def violated(self, tol: float = TIGHT) -> bool:
        return self.slack_stanic < -tol or self.stanic > self.hong + tol

    def tight(self, tol: float = TIGHT) -> bool:
        return abs(self.slack_stanic) < tol

    def row(self) -> list[str]:
        vals = (self.lambda1, self.hong, self.stanic, self.slack_hong, self.slack_stanic)
        return [self.graph_id] + [format_float(v) for v in vals]


def format_float(x: float) -> str:
    return f"{x:.12g}"


def bound_report(g: SignedGraph, graph_id: str, lam: Optional[float] = None,
                 epsilon: Optional[int] = None) -> BoundReport:
    if lam is None:
        lam = lambda1(g)
    return BoundReport(graph_id, lam, hong_bound(g), stanic_bound(g, epsilon))


def write_reports(reports: Iterable[BoundReport], out: IO[str]) -> int:
    """Write reports as CSV rows; returns the number of violations seen."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    bad = 0
    for rep in reports:
        writer.writerow(rep.row())
        bad += rep.violated()
    return bad
