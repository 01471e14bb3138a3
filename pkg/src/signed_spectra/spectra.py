"""Signed adjacency spectra: a batched cyclic Jacobi eigensolver and the
index-related operations built on it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConvergenceFailure, InvalidMoveEdge, NormalizationFailure, PreconditionNotMet
from .graph import SignedGraph, SwitchSet, make_signed_graph, switch

JACOBI_MAX_N = 64
JACOBI_MAX_SWEEPS = 60
ZERO_THRESHOLD = 1e-7
NONNEG_TOL = 1e-9
RESIDUAL_TOL = 1e-8
POWER_MAX_ITER = 200_000


@dataclass(frozen=True)
class SpectralResult:
    lambda1: float
    eigvec: np.ndarray
    residual: float
    full_spectrum: Optional[tuple[float, ...]] = None

    def residual_ok(self) -> bool:
        return self.residual <= RESIDUAL_TOL * max(1.0, abs(self.lambda1))


def adjacency_matrix(g: SignedGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for (u, v), s in zip(g.edges, g.signs):
        a[u, v] = a[v, u] = s
    return a


def adjacency_stack(n: int, edges: Sequence[tuple[int, int]], signs: np.ndarray) -> np.ndarray:
    """Adjacency matrices for many signatures of one edge list.

    ``signs`` has shape ``(batch, len(edges))`` with entries +-1.
    """
    signs = np.asarray(signs, dtype=float)
    mats = np.zeros((signs.shape[0], n, n))
    if len(edges):
        us = np.array([u for u, _ in edges])
        vs = np.array([v for _, v in edges])
        mats[:, us, vs] = signs
        mats[:, vs, us] = signs
    return mats


def jacobi_eigh(mats: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decompose one or a stack of real symmetric matrices.

    Cyclic Jacobi: sweep over all (p, q) pairs applying the rotation that
    annihilates entry (p, q), for every matrix of the stack at once. Stops
    when each off-diagonal Frobenius norm drops below ``1e-12 * n``.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted
    descending and eigenvectors in the matching columns.
    """
    a = np.array(mats, dtype=float, copy=True)
    single = a.ndim == 2
    if single:
        a = a[None]
    batch, n, _ = a.shape
    v = np.broadcast_to(np.eye(n), (batch, n, n)).copy()
    tol = 1e-12 * max(n, 1)
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps + 1):
        off = np.sqrt(np.sum(a[:, off_mask] ** 2, axis=1)) if n > 1 else np.zeros(batch)
        if np.all(off < tol):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                active = np.abs(apq) > 1e-300
                if not active.any():
                    continue
                safe = np.where(active, apq, 1.0)
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cc, sc = c[:, None], s[:, None]
                col_p = a[:, :, p].copy()
                col_q = a[:, :, q]
                a[:, :, p] = cc * col_p - sc * col_q
                a[:, :, q] = sc * col_p + cc * col_q
                row_p = a[:, p, :].copy()
                row_q = a[:, q, :]
                a[:, p, :] = cc * row_p - sc * row_q
                a[:, q, :] = sc * row_p + cc * row_q
                vp = v[:, :, p].copy()
                vq = v[:, :, q]
                v[:, :, p] = cc * vp - sc * vq
                v[:, :, q] = sc * vp + cc * vq
    else:
        raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
    vals = np.diagonal(a, axis1=1, axis2=2)
    order = np.argsort(-vals, axis=1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=1)
    vecs = np.take_along_axis(v, order[:, None, :], axis=2)
    if single:
        return vals[0], vecs[0]
    return vals, vecs


def largest_eigenvalues(mats: np.ndarray, chunk: int = 1 << 14) -> np.ndarray:
    """lambda_1 of every matrix in a stack, via Jacobi in chunks."""
    mats = np.asarray(mats, dtype=float)
    out = np.empty(mats.shape[0])
    for lo in range(0, mats.shape[0], chunk):
        vals, _ = jacobi_eigh(mats[lo : lo + chunk])
        out[lo : lo + chunk] = vals[:, 0]
    return out


def _orient(x: np.ndarray) -> np.ndarray:
    """Fix the sign of an eigenvector: positive sum, else first big entry positive."""
    total = x.sum()
    if abs(total) > 1e-9:
        return x if total > 0 else -x
    big = np.flatnonzero(np.abs(x) > 1e-9)
    if big.size and x[big[0]] < 0:
        return -x
    return x


def _power_index(a: np.ndarray) -> tuple[float, np.ndarray]:
    n = a.shape[0]
    shift = float(np.max(np.abs(a).sum(axis=1))) if n else 0.0
    m = a + shift * np.eye(n)
    x = np.ones(n) / np.sqrt(n)
    lam = 0.0
    for _ in range(POWER_MAX_ITER):
        y = m @ x
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0, x
        y /= norm
        lam = float(y @ a @ y)
        if np.linalg.norm(a @ y - lam * y) <= 1e-11 * max(1.0, abs(lam)):
            return lam, y
        x = y
    raise ConvergenceFailure("power iteration did not converge")


def spectral_result(a: np.ndarray, lam: float, x: np.ndarray, spectrum=None) -> SpectralResult:
    x = _orient(x / np.linalg.norm(x))
    residual = float(np.linalg.norm(a @ x - lam * x))
    res = SpectralResult(float(lam), x, residual, spectrum)
    if not res.residual_ok():
        raise ConvergenceFailure(f"residual {residual:.3e} exceeds tolerance")
    return res


def index(g: SignedGraph) -> SpectralResult:
    """Largest adjacency eigenvalue of g with a unit eigenvector."""
    a = adjacency_matrix(g)
    if g.n <= JACOBI_MAX_N:
        vals, vecs = jacobi_eigh(a)
        return spectral_result(a, vals[0], vecs[:, 0], tuple(float(t) for t in vals))
    lam, x = _power_index(a)
    return spectral_result(a, lam, x)


def lambda1(g: SignedGraph) -> float:
    return index(g).lambda1


def normalize_nonnegative(g: SignedGraph) -> tuple[SignedGraph, SpectralResult]:
    """Switch g so that its principal eigenvector is entrywise non-negative.

    If x is a lambda_1 eigenvector of g and D = diag(sign x), then D x is a
    lambda_1 eigenvector of the graph switched at the negative entries.
    """
    res = index(g)
    for _ in range(2):
        negative = [v for v in range(g.n) if res.eigvec[v] < -NONNEG_TOL]
        if not negative:
            return g, res
        g = switch(g, SwitchSet.of(negative))
        d = np.ones(g.n)
        d[negative] = -1.0
        a = adjacency_matrix(g)
        res = spectral_result(a, res.lambda1, d * res.eigvec, res.full_spectrum)
    if np.any(res.eigvec < -NONNEG_TOL):
        raise NormalizationFailure("eigenvector keeps negative entries", graph=g)
    return g, res


def zero_components(res: SpectralResult, threshold: float = ZERO_THRESHOLD) -> int:
    return int(np.sum(np.abs(np.asarray(res.eigvec)) < threshold))


MOVES = ("add_positive_edges", "remove_negative_edges", "negate_negative_edges")


@dataclass(frozen=True)
class Perturbation:
    graph: SignedGraph
    delta: float
    strict: bool


def apply_move(g: SignedGraph, move: str, edges: Iterable[Sequence[int]]) -> SignedGraph:
    edges = [tuple(sorted((int(u), int(v)))) for u, v in edges]
    table = dict(g.sign_map)
    for uv in edges:
        if move == "add_positive_edges":
            if uv[0] == uv[1] or not (0 <= uv[0] and uv[1] < g.n) or uv in table:
                raise InvalidMoveEdge(f"{uv} is not a non-edge")
            table[uv] = 1
        elif move in ("remove_negative_edges", "negate_negative_edges"):
            if table.get(uv) != -1:
                raise InvalidMoveEdge(f"{uv} is not a negative edge")
            if move == "remove_negative_edges":
                del table[uv]
            else:
                table[uv] = 1
        else:
            raise ValueError(f"unknown move {move!r}")
    return make_signed_graph(g.n, ((u, v, s) for (u, v), s in table.items()))


def perturb_and_compare(g: SignedGraph, move: str, edges) -> Perturbation:
    """Apply one kind of monotone move and report the change in lambda_1.

    The increase is certified strict when every touched endpoint has an
    eigenvector entry above the zero threshold.
    """
    res = index(g)
    if np.any(res.eigvec < -NONNEG_TOL):
        raise PreconditionNotMet("principal eigenvector is not non-negative; normalize first")
    edges = list(edges)
    h = apply_move(g, move, edges)
    delta = index(h).lambda1 - res.lambda1
    touched = {w for uv in edges for w in uv}
    strict = bool(touched) and all(res.eigvec[w] > ZERO_THRESHOLD for w in touched)
    return Perturbation(h, delta, strict)
