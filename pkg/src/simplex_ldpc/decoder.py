"""Flooding sum-product decoding on the Tanner graph of a parity-check matrix.

LLRs are positive when bit 0 is more likely.  Messages live on edges,
numbered in row-major order of the matrix.  The check update uses
prefix/suffix products over padded check neighbourhoods, so exclusive
products are exact even when some ``tanh`` factor underflows to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from simplex_ldpc.errors import InvalidInputError
from simplex_ldpc.matrix import ParityCheckMatrix

__all__ = ["TannerGraph", "DecodeResult", "build_graph", "sum_product", "sum_product_batch"]

LLR_CLAMP = 25.0
TANH_EPS = 1e-12
DEFAULT_MAX_ITER = 100


@dataclass(frozen=True, eq=False)
class TannerGraph:
    n: int
    r: int
    check_vars: tuple[tuple[int, ...], ...]
    var_checks: tuple[tuple[int, ...], ...]
    edge_var: np.ndarray
    edge_check: np.ndarray
    check_slots: np.ndarray
    var_slots: np.ndarray

    @property
    def num_edges(self) -> int:
        return int(self.edge_var.size)


@dataclass
class DecodeResult:
    hard_bits: np.ndarray
    iterations_used: int
    converged: bool
    final_llrs: np.ndarray


def _slots(groups, pad: int) -> np.ndarray:
    width = max((len(g) for g in groups), default=0)
    out = np.full((len(groups), max(width, 1)), pad, dtype=np.int64)
    for i, g in enumerate(groups):
        out[i, : len(g)] = g
    return out


def build_graph(H: ParityCheckMatrix) -> TannerGraph:
    if H.r == 0 or H.n == 0 or H.num_edges == 0:
        raise InvalidInputError("cannot build a Tanner graph from an empty matrix")
    edge_var, edge_check = [], []
    check_edges: list[list[int]] = []
    var_edges: list[list[int]] = [[] for _ in range(H.n)]
    for i, row in enumerate(H.rows):
        ids = []
        for c in row:
            e = len(edge_var)
            edge_var.append(c)
            edge_check.append(i)
            ids.append(e)
            var_edges[c].append(e)
        check_edges.append(ids)
    E = len(edge_var)
    return TannerGraph(
        n=H.n,
        r=H.r,
        check_vars=H.rows,
        var_checks=H.columns,
        edge_var=np.asarray(edge_var, dtype=np.int64),
        edge_check=np.asarray(edge_check, dtype=np.int64),
        check_slots=_slots(check_edges, E),
        var_slots=_slots(var_edges, E),
    )


def _syndrome_ok(graph: TannerGraph, hard: np.ndarray) -> np.ndarray:
    """Per-frame flag: all checks satisfied."""
    padded = np.concatenate([hard[:, graph.edge_var], np.zeros((hard.shape[0], 1), np.uint8)], axis=1)
    parity = np.bitwise_xor.reduce(padded[:, graph.check_slots], axis=2)
    return ~parity.any(axis=1)


def _check_update(graph: TannerGraph, v2c: np.ndarray) -> np.ndarray:
    B, E = v2c.shape
    t = np.tanh(np.clip(v2c, -LLR_CLAMP, LLR_CLAMP) / 2.0)
    t = np.concatenate([t, np.ones((B, 1))], axis=1)
    g = t[:, graph.check_slots]  # (B, r, d)
    ones = np.ones(g.shape[:2] + (1,))
    prefix = np.cumprod(np.concatenate([ones, g[:, :, :-1]], axis=2), axis=2)
    suffix = np.cumprod(np.concatenate([ones, g[:, :, :0:-1]], axis=2), axis=2)[:, :, ::-1]
    excl = np.clip(prefix * suffix, -1.0 + TANH_EPS, 1.0 - TANH_EPS)
    out = np.empty((B, E + 1))
    out[:, graph.check_slots] = 2.0 * np.arctanh(excl)
    return out[:, :E]


def sum_product_batch(graph: TannerGraph, channel_llrs, max_iter: int = DEFAULT_MAX_ITER):
    """Decode a ``(B, n)`` batch of channel LLRs.

    Returns ``(hard_bits, iterations_used, converged, final_llrs)`` arrays.
    Frames whose hard decision already has zero syndrome stop with
    ``iterations_used == 0``; the rest stop at the first iteration that
    reaches zero syndrome, or after ``max_iter`` iterations.
    """
    llr = np.asarray(channel_llrs, dtype=np.float64)
    if llr.ndim != 2 or llr.shape[1] != graph.n:
        raise InvalidInputError(f"LLR batch must have shape (B, {graph.n})")
    if not np.all(np.isfinite(llr)):
        raise InvalidInputError("channel LLRs must be finite")
    if max_iter < 0:
        raise InvalidInputError("max_iter must be non-negative")
    B, n = llr.shape
    E = graph.num_edges
    hard = (llr < 0).astype(np.uint8)
    posterior = llr.copy()
    iters = np.zeros(B, dtype=np.int64)
    done = _syndrome_ok(graph, hard)
    active = np.flatnonzero(~done)
    ch = llr[active]
    v2c = ch[:, graph.edge_var]
    for it in range(1, max_iter + 1):
        if active.size == 0:
            break
        c2v = _check_update(graph, v2c)
        padded = np.concatenate([c2v, np.zeros((active.size, 1))], axis=1)
        total = ch + padded[:, graph.var_slots].sum(axis=2)
        h = (total < 0).astype(np.uint8)
        ok = _syndrome_ok(graph, h)
        posterior[active] = total
        hard[active] = h
        iters[active] = it
        done[active[ok]] = True
        keep = ~ok
        active, ch = active[keep], ch[keep]
        v2c = total[keep][:, graph.edge_var] - c2v[keep]
    return hard, iters, done, posterior


def sum_product(graph: TannerGraph, channel_llrs, max_iter: int = DEFAULT_MAX_ITER) -> DecodeResult:
    llr = np.asarray(channel_llrs, dtype=np.float64)
    if llr.ndim != 1 or llr.size != graph.n:
        raise InvalidInputError(f"expected {graph.n} LLRs, got shape {llr.shape}")
    hard, iters, done, post = sum_product_batch(graph, llr[None, :], max_iter)
    return DecodeResult(hard[0], int(iters[0]), bool(done[0]), post[0])
