"""Systematic LFSR encoding, weight enumeration and union-bound tools."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from simplex_ldpc import gf2
from simplex_ldpc.errors import InvalidInputError, ResourceLimitError

__all__ = [
    "WeightDistribution",
    "TubCurve",
    "DEFAULT_ENUMERATION_CAP",
    "encode",
    "encode_batch",
    "generator_rows",
    "weight_distribution",
    "min_distance",
    "asymptotic_gain",
    "asymptotic_gain_db",
    "tub",
    "tub_value",
]

DEFAULT_ENUMERATION_CAP = 26
_LOW_BITS = 16


def _seed(h) -> tuple[int, list[int]]:
    bits = h.bits if isinstance(h, gf2.BinaryPolynomial) else int(h)
    k = bits.bit_length() - 1
    if k < 1 or not bits & 1:
        raise InvalidInputError("seed polynomial needs degree >= 1 and h_0 = 1")
    return k, [j for j in range(k) if bits >> j & 1]


def encode(h, n: int, message: Sequence[int]) -> np.ndarray:
    """Extend ``message`` to ``n`` bits with the recurrence of ``h``.

    ``c[i + k] = sum(h_j * c[i + j] for j < k) mod 2``, so the message sits in
    the first ``k`` positions and every parity row of :func:`matrix.build`
    is satisfied.
    """
    k, _ = _seed(h)
    msg = np.asarray(message, dtype=np.uint8)
    if msg.shape != (k,):
        raise InvalidInputError(f"message must have {k} bits, got shape {msg.shape}")
    return encode_batch(h, n, msg[None, :])[0]


def encode_batch(h, n: int, messages) -> np.ndarray:
    """Vectorised :func:`encode` over the rows of a ``(B, k)`` array."""
    k, taps = _seed(h)
    msgs = np.asarray(messages, dtype=np.uint8)
    if msgs.ndim != 2 or msgs.shape[1] != k:
        raise InvalidInputError(f"messages must have shape (B, {k})")
    if n < k:
        raise InvalidInputError(f"n={n} shorter than k={k}")
    out = np.zeros((msgs.shape[0], n), dtype=np.uint8)
    out[:, :k] = msgs & 1
    for i in range(n - k):
        acc = out[:, i + taps[0]].copy()
        for t in taps[1:]:
            acc ^= out[:, i + t]
        out[:, i + k] = acc
    return out


def generator_rows(h, n: int) -> np.ndarray:
    """Systematic generator matrix, row ``i`` = encoding of the unit message ``e_i``."""
    k, _ = _seed(h)
    return encode_batch(h, n, np.eye(k, dtype=np.uint8))


@dataclass(frozen=True)
class WeightDistribution:
    counts: dict[int, int]
    n: int
    k: int
    provenance: dict = field(default_factory=dict, compare=False)

    def __getitem__(self, w: int) -> int:
        return self.counts.get(w, 0)

    @property
    def d_min(self) -> int:
        return min_distance(self)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["w", "A_w"])
        for w in sorted(self.counts):
            writer.writerow([w, self.counts[w]])
        return buf.getvalue()

    def to_json(self) -> str:
        rec = {
            "n": self.n,
            "k": self.k,
            "d_min": self.d_min,
            "counts": {str(w): c for w, c in sorted(self.counts.items())},
            "provenance": self.provenance,
        }
        return json.dumps(rec, indent=2, sort_keys=True)


def _pack(words: np.ndarray) -> np.ndarray:
    """Pack ``(m, n)`` bit rows into ``(m, ceil(n/64))`` uint64 words."""
    m, n = words.shape
    nw = (n + 63) // 64
    padded = np.zeros((m, nw * 64), dtype=np.uint8)
    padded[:, :n] = words
    packed = np.packbits(padded.reshape(m, nw, 64), axis=-1, bitorder="little")
    return packed.view("<u8").reshape(m, nw)


def _span(rows: np.ndarray) -> np.ndarray:
    """All ``2**len(rows)`` XOR combinations, index bit ``i`` selecting ``rows[i]``."""
    table = np.zeros((1, rows.shape[1]), dtype=np.uint64)
    for row in rows:
        table = np.concatenate([table, table ^ row])
    return table


def _count_range(low: np.ndarray, high: np.ndarray, start: int, stop: int, n: int) -> np.ndarray:
    hist = np.zeros(n + 1, dtype=np.int64)
    for hi in range(start, stop):
        words = low ^ high[hi]
        w = np.bitwise_count(words).sum(axis=1, dtype=np.int64)
        hist += np.bincount(w, minlength=n + 1)
    return hist


def weight_distribution(h, n: int, *, cap: int = DEFAULT_ENUMERATION_CAP,
                        partitions: int = 1, workers: int = 1) -> WeightDistribution:
    """Exact weight enumerator of the ``[n, k]`` punctured simplex code of ``h``.

    Every one of the ``2**k`` codewords is produced as an XOR of generator
    rows.  Messages are split by their high-order bits into ``partitions``
    contiguous prefix ranges; the per-range histograms are summed, so the
    result does not depend on how the work is split.

    Raises
    ------
    ResourceLimitError
        If ``k`` exceeds ``cap``.
    """
    k, _ = _seed(h)
    if k > cap:
        raise ResourceLimitError(f"k={k} exceeds the enumeration cap {cap}; raise the cap to proceed")
    if n < k:
        raise InvalidInputError(f"n={n} shorter than k={k}")
    G = _pack(generator_rows(h, n))
    low_bits = min(k, _LOW_BITS)
    low = _span(G[:low_bits])
    high = _span(G[low_bits:])
    n_high = high.shape[0]
    partitions = max(1, min(partitions, n_high))
    edges = [n_high * i // partitions for i in range(partitions + 1)]
    ranges = list(zip(edges, edges[1:]))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda ab: _count_range(low, high, ab[0], ab[1], n), ranges))
    else:
        parts = [_count_range(low, high, a, b, n) for a, b in ranges]
    hist = np.sum(parts, axis=0)
    counts = {w: int(c) for w, c in enumerate(hist) if c}
    bits = h.bits if isinstance(h, gf2.BinaryPolynomial) else int(h)
    prov = {"poly": str(gf2.BinaryPolynomial(bits)), "n": n, "k": k}
    return WeightDistribution(counts, n, k, prov)


def min_distance(dist: WeightDistribution) -> int:
    nonzero = [w for w, c in dist.counts.items() if w > 0 and c > 0]
    if not nonzero:
        raise InvalidInputError("distribution has no nonzero codewords")
    return min(nonzero)


def asymptotic_gain(R, d_min: int) -> Fraction:
    """Linear asymptotic coding gain ``R * d_min``."""
    R = Fraction(R)
    if not 0 < R <= 1:
        raise InvalidInputError("rate must lie in (0, 1]")
    return R * d_min


def asymptotic_gain_db(R, d_min: int) -> float:
    """``10 log10(R * d_min)``; callers round to one decimal for display."""
    return 10.0 * math.log10(asymptotic_gain(R, d_min))


@dataclass(frozen=True)
class TubCurve:
    points: list[tuple[float, float]]
    d_star: int
    provenance: dict = field(default_factory=dict, compare=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["EbN0_dB", "BER_TUB"])
        for snr, ber in self.points:
            writer.writerow([repr(float(snr)), repr(float(ber))])
        return buf.getvalue()

    def to_json(self) -> str:
        rec = {
            "d_star": self.d_star,
            "points": [{"EbN0_dB": s, "BER_TUB": b} for s, b in self.points],
            "provenance": self.provenance,
        }
        return json.dumps(rec, indent=2, sort_keys=True)


def tub_value(dist: WeightDistribution, d_star: int, ebn0_db: float) -> float:
    """Truncated union bound on bit error rate at one Eb/N0 (dB).

    ``sum_{w=d_min}^{d_star} (w / 2n) A(w) erfc(sqrt(w R Eb/N0))``
    """
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    R = dist.k / dist.n
    total = 0.0
    for w in range(1, d_star + 1):
        a = dist[w]
        if a:
            total += 0.5 * (w / dist.n) * a * math.erfc(math.sqrt(w * R * ebn0))
    return total


def tub(dist: WeightDistribution, d_star: int, snr_points: Iterable[float]) -> TubCurve:
    positive = [w for w, c in dist.counts.items() if w > 0 and c > 0]
    if positive:
        d_min = min(positive)
        if d_star < d_min:
            raise InvalidInputError(f"d_star={d_star} below d_min={d_min}")
    if d_star > dist.n:
        raise InvalidInputError(f"d_star={d_star} exceeds n={dist.n}")
    pts = [(float(s), tub_value(dist, d_star, float(s))) for s in snr_points]
    return TubCurve(pts, d_star, dict(dist.provenance))
