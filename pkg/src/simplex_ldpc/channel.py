"""BPSK over AWGN and the Monte Carlo error-rate harness.

Randomness is drawn from counter-based Philox streams.  Batch ``b`` of SNR
point ``j`` always uses the stream keyed by ``(seed, j, b)``, so a report
depends only on the seed and configuration, never on how many workers
processed the batches.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from simplex_ldpc import codec
from simplex_ldpc.decoder import DEFAULT_MAX_ITER, build_graph, sum_product_batch
from simplex_ldpc.errors import InvalidInputError, InvariantViolation
from simplex_ldpc.matrix import ParityCheckMatrix, build

__all__ = [
    "SnrPoint",
    "StopRule",
    "PointResult",
    "SimulationReport",
    "Code",
    "modulate_bpsk",
    "awgn",
    "channel_llr",
    "noise_variance",
    "make_rng",
    "systematic_generator",
    "polynomial_code",
    "matrix_code",
    "uncoded",
    "run_monte_carlo",
    "uncoded_ber",
]


def noise_variance(rate: float, ebn0_db: float) -> float:
    """Per-dimension noise variance for unit-energy BPSK at a given Eb/N0."""
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


@dataclass(frozen=True)
class SnrPoint:
    eb_n0_db: float
    rate: float

    @property
    def sigma2(self) -> float:
        return noise_variance(self.rate, self.eb_n0_db)


def modulate_bpsk(bits) -> np.ndarray:
    """Map bit 0 to +1.0 and bit 1 to -1.0."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def awgn(symbols, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    if sigma2 < 0:
        raise InvalidInputError("noise variance must be non-negative")
    x = np.asarray(symbols, dtype=np.float64)
    return x + math.sqrt(sigma2) * rng.standard_normal(x.shape)


def channel_llr(received, sigma2: float) -> np.ndarray:
    if sigma2 <= 0:
        raise InvalidInputError("noise variance must be positive")
    return 2.0 * np.asarray(received, dtype=np.float64) / sigma2


def make_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *key])))


def uncoded_ber(ebn0_db: float) -> float:
    return 0.5 * math.erfc(math.sqrt(10.0 ** (ebn0_db / 10.0)))


# -- codes under simulation -----------------------------------------------


@dataclass(eq=False)
class Code:
    """Everything the harness needs: an encoder, a decoder graph, info positions.

    ``graph`` is None for the uncoded reference, in which case decisions are
    taken by sign.
    """

    n: int
    k: int
    info_positions: np.ndarray
    encoder: object
    graph: object
    H: ParityCheckMatrix | None
    provenance: dict = field(default_factory=dict)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def encode(self, messages: np.ndarray) -> np.ndarray:
        return self.encoder(messages)


def polynomial_code(h, n: int, *, unchecked: bool = False) -> Code:
    H = build(h, n, unchecked=unchecked)
    k = H.provenance["k"]
    return Code(n, k, np.arange(k), lambda m: codec.encode_batch(h, n, m), build_graph(H), H,
                dict(H.provenance))


def systematic_generator(H: ParityCheckMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Generator matrix ``G`` (k x n) with an identity on ``info_positions``.

    Gaussian elimination over GF(2) puts H in reduced row-echelon form;
    non-pivot columns carry the message.
    """
    A = H.to_dense().copy()
    r, n = A.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == r:
            break
        hits = np.flatnonzero(A[row:, col]) + row
        if hits.size == 0:
            continue
        p = hits[0]
        if p != row:
            A[[row, p]] = A[[p, row]]
        others = np.flatnonzero(A[:, col])
        others = others[others != row]
        A[others] ^= A[row]
        pivots.append(col)
        row += 1
    A = A[:row]
    info = np.array([c for c in range(n) if c not in set(pivots)], dtype=np.int64)
    k = info.size
    G = np.zeros((k, n), dtype=np.uint8)
    G[:, info] = np.eye(k, dtype=np.uint8)
    # pivot bit = sum of its row's entries on info columns
    G[:, pivots] = A[:, info].T
    return G, info


def matrix_code(H: ParityCheckMatrix) -> Code:
    G, info = systematic_generator(H)
    Gf = G.astype(np.float64)

    def enc(messages):
        return (np.asarray(messages, dtype=np.float64) @ Gf % 2).astype(np.uint8)

    return Code(H.n, info.size, info, enc, build_graph(H), H, dict(H.provenance))


def uncoded(n: int = 1000) -> Code:
    return Code(n, n, np.arange(n), lambda m: np.asarray(m, dtype=np.uint8), None, None,
                {"uncoded": True, "n": n})


# -- harness --------------------------------------------------------------


@dataclass(frozen=True)
class StopRule:
    min_frame_errors: int = 100
    max_frames: int = 10_000_000

    def __post_init__(self):
        if self.min_frame_errors < 1:
            raise InvalidInputError("min_frame_errors must be >= 1")
        if self.max_frames < 1:
            raise InvalidInputError("max_frames must be >= 1")


@dataclass
class PointResult:
    eb_n0_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    bits_counted: int
    unconverged: int = 0
    bit_errors_sq: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_counted

    @property
    def cer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def bits_per_frame(self) -> int:
        return self.bits_counted // self.frames

    def ber_stderr(self) -> float:
        """Standard error of the BER treating frames, not bits, as independent."""
        f, m = self.frames, self.bits_per_frame
        mean = self.bit_errors / f
        var = max(self.bit_errors_sq / f - mean * mean, 0.0) * f / max(f - 1, 1)
        return math.sqrt(var / f) / m

    def ber_interval(self, z: float = 1.959963984540054) -> tuple[float, float]:
        """Two-sided normal interval on BER; zero-error points use the rule of three.

        With no errors, BER <= CER and the 95% upper bound on CER is
        ``-ln(0.05) / frames``.
        """
        if self.bit_errors == 0:
            return 0.0, -math.log(0.05) / self.frames
        half = z * self.ber_stderr()
        return max(self.ber - half, 0.0), self.ber + half


@dataclass
class SimulationReport:
    points: list[PointResult]
    seed: int
    provenance: dict
    decoder: dict

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["EbN0_dB", "frames", "bit_errors", "frame_errors", "BER", "CER"])
        for p in self.points:
            writer.writerow([repr(p.eb_n0_db), p.frames, p.bit_errors, p.frame_errors,
                             repr(p.ber), repr(p.cer)])
        return buf.getvalue()

    def to_json(self) -> str:
        rec = {
            "seed": self.seed,
            "provenance": self.provenance,
            "decoder": self.decoder,
            "points": [dict(asdict(p), ber=p.ber, cer=p.cer, ber_ci95=list(p.ber_interval()))
                       for p in self.points],
        }
        return json.dumps(rec, indent=2, sort_keys=True)


def _run_batch(code: Code, sigma2: float, size: int, rng: np.random.Generator, *,
               all_zero: bool, max_iter: int, count_all: bool):
    if all_zero:
        msgs = np.zeros((size, code.k), dtype=np.uint8)
    else:
        msgs = rng.integers(0, 2, size=(size, code.k), dtype=np.uint8)
    cw = code.encode(msgs)
    y = awgn(modulate_bpsk(cw), sigma2, rng)
    if code.graph is None:
        hard = (y < 0).astype(np.uint8)
        unconverged = 0
    else:
        hard, _, conv, _ = sum_product_batch(code.graph, channel_llr(y, sigma2), max_iter)
        good = np.flatnonzero(conv)
        if good.size and code.H is not None and code.H.syndrome(hard[good]).any():
            raise InvariantViolation("decoder reported convergence with nonzero syndrome")
        unconverged = int(size - good.size)
    if count_all:
        err = hard != cw
    else:
        err = hard[:, code.info_positions] != msgs
    per_frame = err.sum(axis=1, dtype=np.int64)
    frame_err = int((hard != cw).any(axis=1).sum())
    return size, int(per_frame.sum()), int((per_frame**2).sum()), frame_err, unconverged


def run_monte_carlo(code: Code, snr_points: Sequence[float], stop: StopRule = StopRule(), seed: int = 0, *,
                    batch_size: int = 1000, max_iter: int = DEFAULT_MAX_ITER, all_zero: bool = False,
                    count_all_positions: bool = False, workers: int = 1) -> SimulationReport:
    """Estimate BER and CER at each Eb/N0 (dB).

    Frames are simulated in fixed-size batches until ``stop.min_frame_errors``
    frame errors or ``stop.max_frames`` frames, whichever comes first.  With
    ``workers > 1`` batches are dispatched in rounds and merged in batch
    order, and the stop rule is applied batch by batch, so counts are
    identical to a single-worker run.

    Bit errors are counted on the information positions unless
    ``count_all_positions`` is set.
    """
    if batch_size < 1:
        raise InvalidInputError("batch_size must be >= 1")
    results = []
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for j, snr in enumerate(snr_points):
            sigma2 = noise_variance(code.rate, float(snr))
            frames = bit_err = bit_sq = frame_err = unconv = 0
            b = 0
            while frame_err < stop.min_frame_errors and frames < stop.max_frames:
                jobs = []
                planned = frames
                for _ in range(workers):
                    size = min(batch_size, stop.max_frames - planned)
                    if size <= 0:
                        break
                    jobs.append((b, size))
                    planned += size
                    b += 1

                def work(job):
                    bi, size = job
                    return _run_batch(code, sigma2, size, make_rng(seed, j, bi), all_zero=all_zero,
                                      max_iter=max_iter, count_all=count_all_positions)

                outs = list(pool.map(work, jobs)) if pool else [work(job) for job in jobs]
                for size, be, bsq, fe, uc in outs:
                    frames += size
                    bit_err += be
                    bit_sq += bsq
                    frame_err += fe
                    unconv += uc
                    if frame_err >= stop.min_frame_errors:
                        break
            bits_per_frame = code.n if count_all_positions else code.k
            results.append(PointResult(float(snr), frames, bit_err, frame_err, frames * bits_per_frame,
                                       unconv, bit_sq))
    finally:
        if pool:
            pool.shutdown()
    decoder_cfg = {"algorithm": "sum-product" if code.graph is not None else "hard-sign",
                   "schedule": "flooding", "max_iter": max_iter, "batch_size": batch_size,
                   "all_zero": all_zero, "count_all_positions": count_all_positions,
                   "min_frame_errors": stop.min_frame_errors, "max_frames": stop.max_frames}
    return SimulationReport(results, seed, dict(code.provenance, n=code.n, k=code.k), decoder_cfg)
