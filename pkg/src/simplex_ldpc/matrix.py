"""Punctured simplex parity-check matrices and their structural analysis."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from simplex_ldpc import gf2
from simplex_ldpc.errors import InvalidInputError

__all__ = [
    "ParityCheckMatrix",
    "CodeSpec",
    "ColumnWeightProfile",
    "FourCycle",
    "build",
    "column_profile",
    "mean_column_weight_formula",
    "has_four_cycle",
    "find_four_cycle",
    "satisfies_rc_constraint",
    "rank_gf2",
    "circulant_expand",
    "OFFSET_RULES",
    "paper_c3_offset",
    "export_alist",
    "parse_alist",
    "summary",
    "length_for",
]


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Sparse binary matrix stored as ascending per-row column supports.

    ``provenance`` records how the matrix was obtained (seed polynomial,
    puncture count, expansion factor); it never affects equality.
    """

    n: int
    rows: tuple[tuple[int, ...], ...]
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        rows = tuple(tuple(sorted(set(int(c) for c in row))) for row in self.rows)
        for row in rows:
            if row and (row[0] < 0 or row[-1] >= self.n):
                raise InvalidInputError(f"column index out of range [0, {self.n})")
        object.__setattr__(self, "rows", rows)

    @property
    def r(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.r, self.n

    @property
    def num_edges(self) -> int:
        return sum(len(row) for row in self.rows)

    @cached_property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        cols: list[list[int]] = [[] for _ in range(self.n)]
        for i, row in enumerate(self.rows):
            for c in row:
                cols[c].append(i)
        return tuple(tuple(c) for c in cols)

    @classmethod
    def from_dense(cls, array, provenance=None) -> "ParityCheckMatrix":
        a = np.asarray(array)
        if a.ndim != 2:
            raise InvalidInputError("dense matrix must be 2-D")
        rows = tuple(tuple(np.flatnonzero(row % 2).tolist()) for row in a)
        return cls(a.shape[1], rows, dict(provenance or {}))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, row in enumerate(self.rows):
            out[i, list(row)] = 1
        return out

    def syndrome(self, bits) -> np.ndarray:
        """Syndrome ``bits @ H.T mod 2`` for one word or a batch of words."""
        b = np.asarray(bits, dtype=np.uint8)
        if b.shape[-1] != self.n:
            raise InvalidInputError("word length does not match matrix")
        out = np.zeros(b.shape[:-1] + (self.r,), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            if row:
                out[..., i] = np.bitwise_xor.reduce(b[..., list(row)], axis=-1)
        return out


@dataclass(frozen=True)
class CodeSpec:
    n: int
    k: int
    d_min: int | None = None

    def __post_init__(self):
        if not 0 < self.k < self.n:
            raise InvalidInputError(f"need 0 < k < n, got k={self.k}, n={self.n}")

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    def __str__(self) -> str:
        d = "?" if self.d_min is None else self.d_min
        return f"[{self.n},{self.k},{d}]"


@dataclass(frozen=True)
class ColumnWeightProfile:
    counts: dict[int, int]

    @property
    def n(self) -> int:
        return sum(self.counts.values())

    @property
    def mean(self) -> Fraction:
        total = sum(w * c for w, c in self.counts.items())
        return Fraction(total, self.n)


@dataclass(frozen=True)
class FourCycle:
    rows: tuple[int, int]
    cols: tuple[int, int]


def length_for(k: int, *, n: int | None = None, rate: Fraction | str | None = None,
               puncture: int | None = None) -> int:
    """Resolve a code length from exactly one of ``n``, ``rate`` or ``puncture``."""
    given = [x is not None for x in (n, rate, puncture)]
    if sum(given) != 1:
        raise InvalidInputError("specify exactly one of n, rate, puncture")
    full = (1 << k) - 1
    if n is not None:
        return n
    if puncture is not None:
        return full - puncture
    r = Fraction(rate)
    length = Fraction(k) / r
    if length.denominator != 1:
        raise InvalidInputError(f"rate {r} does not give an integer length for k={k}")
    return int(length)


def build(h, n: int, *, unchecked: bool = False) -> ParityCheckMatrix:
    """Parity-check matrix of the ``[n, k]`` punctured simplex code of ``h``.

    Row ``i`` carries ``h`` shifted right by ``i`` places; there are
    ``n - k`` rows.  This equals deleting the last ``2**k - 1 - n`` rows and
    columns of the full cyclic-band matrix.

    Parameters
    ----------
    h : BinaryPolynomial or int
        Seed polynomial of degree ``k``.
    n : int
        Code length, ``k + 1 <= n <= 2**k - 1``.
    unchecked : bool
        Skip the primitivity test (the range check still applies).
    """
    bits = h.bits if isinstance(h, gf2.BinaryPolynomial) else int(h)
    k = bits.bit_length() - 1
    if k < 1 or not bits & 1:
        raise InvalidInputError("seed polynomial needs degree >= 1 and h_0 = 1")
    full = (1 << k) - 1
    if not k + 1 <= n <= full:
        raise InvalidInputError(f"n={n} outside [{k + 1}, {full}] for degree {k}")
    if not unchecked and not gf2.is_primitive(bits):
        raise InvalidInputError(f"{gf2.BinaryPolynomial(bits)} is not primitive")
    taps = gf2.support(bits)
    rows = tuple(tuple(i + t for t in taps) for i in range(n - k))
    prov = {"poly": str(gf2.BinaryPolynomial(bits)), "k": k, "n": n, "puncture": full - n}
    return ParityCheckMatrix(n, rows, prov)


def column_profile(H: ParityCheckMatrix) -> ColumnWeightProfile:
    return ColumnWeightProfile(dict(sorted(Counter(len(c) for c in H.columns).items())))


def mean_column_weight_formula(w: int, R) -> Fraction:
    """Closed-form average column weight ``w * (1 - R)``."""
    return w * (1 - Fraction(R))


def find_four_cycle(H: ParityCheckMatrix) -> FourCycle | None:
    """First pair of rows sharing two columns, scanning rows in order."""
    cols = H.columns
    for i, row in enumerate(H.rows):
        first_hit: dict[int, int] = {}
        for c in row:
            for j in cols[c]:
                if j <= i:
                    continue
                if j in first_hit:
                    return FourCycle((i, j), (first_hit[j], c))
                first_hit[j] = c
    return None


def has_four_cycle(H: ParityCheckMatrix) -> bool:
    return find_four_cycle(H) is not None


def satisfies_rc_constraint(h) -> bool:
    """Row-column constraint for every punctured simplex matrix of ``h``.

    Decided on the seed alone: the support of ``h`` must be a Golomb ruler.
    """
    return gf2.is_golomb_ruler(gf2.support(h))


def rank_gf2(H: ParityCheckMatrix) -> int:
    """Rank over GF(2) via an XOR basis keyed on leading bit."""
    basis: dict[int, int] = {}
    for row in H.rows:
        v = 0
        for c in row:
            v |= 1 << c
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)


OffsetRule = Callable[[int, int, int], int]


def paper_c3_offset(row: int, ordinal: int, p: int) -> int:
    """Offset ``i mod p`` for odd 1-based ordinal ``i``, ``2i mod p`` for even."""
    return ordinal % p if ordinal % 2 else (2 * ordinal) % p


def _identity_offset(row: int, ordinal: int, p: int) -> int:
    return 0


OFFSET_RULES: dict[str, OffsetRule] = {
    "paper-c3": paper_c3_offset,
    "identity": _identity_offset,
}


def _resolve_rule(rule) -> OffsetRule:
    if callable(rule):
        return rule
    try:
        return OFFSET_RULES[str(rule).lower()]
    except KeyError:
        raise InvalidInputError(f"unknown offset rule {rule!r}; known: {sorted(OFFSET_RULES)}")


def circulant_expand(H: ParityCheckMatrix, p: int, offset_rule="paper-c3") -> ParityCheckMatrix:
    """Replace each 1 by a ``p x p`` circulant permutation, each 0 by zeros.

    The block for the ``i``-th one of row ``I`` (``i`` counted from 1) has its
    first-column 1 at row ``offset_rule(I, i, p)``.  Block entry ``(a, b)`` is
    set iff ``a == (b + offset) mod p``.
    """
    if p < 1:
        raise InvalidInputError("expansion factor must be >= 1")
    rule = _resolve_rule(offset_rule)
    rows = []
    for I, row in enumerate(H.rows):
        offsets = []
        for ordinal, _ in enumerate(row, start=1):
            o = rule(I, ordinal, p)
            if not 0 <= o < p:
                raise InvalidInputError(f"offset {o} outside [0, {p})")
            offsets.append(o)
        for a in range(p):
            rows.append(tuple(J * p + (a - o) % p for J, o in zip(row, offsets)))
    prov = dict(H.provenance)
    prov["expansion"] = p
    prov["rule"] = offset_rule if isinstance(offset_rule, str) else getattr(offset_rule, "__name__", "custom")
    return ParityCheckMatrix(H.n * p, tuple(rows), prov)


def export_alist(H: ParityCheckMatrix) -> str:
    """Serialize to alist (1-based indices, zero padded)."""
    cols = H.columns
    col_w = [len(c) for c in cols]
    row_w = [len(r) for r in H.rows]
    max_c = max(col_w, default=0)
    max_r = max(row_w, default=0)

    def padded(ids: Sequence[int], width: int) -> str:
        vals = [i + 1 for i in ids] + [0] * (width - len(ids))
        return " ".join(map(str, vals))

    lines = [f"{H.n} {H.r}", f"{max_c} {max_r}", " ".join(map(str, col_w)), " ".join(map(str, row_w))]
    lines += [padded(c, max_c) for c in cols]
    lines += [padded(r, max_r) for r in H.rows]
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> ParityCheckMatrix:
    tokens = iter(text.split())
    try:
        n, r = int(next(tokens)), int(next(tokens))
        max_c, max_r = int(next(tokens)), int(next(tokens))
        col_w = [int(next(tokens)) for _ in range(n)]
        row_w = [int(next(tokens)) for _ in range(r)]
        cols = [[int(next(tokens)) for _ in range(max_c)] for _ in range(n)]
        rows = [[int(next(tokens)) for _ in range(max_r)] for _ in range(r)]
    except (StopIteration, ValueError) as exc:
        raise InvalidInputError("truncated or malformed alist") from exc
    out_rows = tuple(tuple(c - 1 for c in row if c) for row in rows)
    if [len(x) for x in out_rows] != row_w:
        raise InvalidInputError("alist row weights disagree with row lists")
    H = ParityCheckMatrix(n, out_rows)
    from_cols = [tuple(i - 1 for i in col if i) for col in cols]
    if [len(c) for c in from_cols] != col_w or [tuple(c) for c in H.columns] != from_cols:
        raise InvalidInputError("alist column lists disagree with row lists")
    return H


def summary(H: ParityCheckMatrix) -> dict:
    """JSON-ready structural report."""
    cyc = find_four_cycle(H)
    prof = column_profile(H)
    return {
        "n": H.n,
        "r": H.r,
        "rank": rank_gf2(H),
        "profile": {str(w): c for w, c in prof.counts.items()},
        "mean_column_weight": str(prof.mean),
        "four_cycle": cyc is not None,
        "witness": None if cyc is None else {"rows": list(cyc.rows), "cols": list(cyc.cols)},
        "provenance": H.provenance,
    }


def summary_json(H: ParityCheckMatrix) -> str:
    return json.dumps(summary(H), indent=2, sort_keys=True)
