"""Polynomials over GF(2) packed into Python integers.

Bit ``i`` of :attr:`BinaryPolynomial.bits` is the coefficient of ``x**i``.
The textual form writes coefficients lowest power first, so ``"1101"`` is
``1 + x + x**3``.  A ``0x`` prefix selects hex input whose integer value is
the packed word itself (bit 0 = constant term).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from simplex_ldpc.errors import InvalidInputError

__all__ = [
    "BinaryPolynomial",
    "parse_polynomial",
    "weight",
    "is_irreducible",
    "is_primitive",
    "multiplicative_order",
    "reciprocal",
    "support",
    "differences",
    "is_golomb_ruler",
    "cofactor",
    "poly_mul",
    "poly_divmod",
    "poly_mulmod",
    "poly_powmod",
    "poly_gcd",
    "factor_mersenne",
]


@dataclass(frozen=True, order=True)
class BinaryPolynomial:
    bits: int

    def __post_init__(self):
        if self.bits < 0:
            raise InvalidInputError("polynomial bits must be non-negative")

    @classmethod
    def from_string(cls, text: str) -> "BinaryPolynomial":
        text = text.strip()
        if text.lower().startswith("0x"):
            try:
                return cls(int(text[2:], 16))
            except ValueError as exc:
                raise InvalidInputError(f"bad hex polynomial {text!r}") from exc
        if not text or set(text) - {"0", "1"}:
            raise InvalidInputError(f"bad binary polynomial {text!r}")
        return cls(sum(1 << i for i, c in enumerate(text) if c == "1"))

    @classmethod
    def from_support(cls, positions: Iterable[int]) -> "BinaryPolynomial":
        bits = 0
        for p in positions:
            if p < 0:
                raise InvalidInputError("support entries must be non-negative")
            if bits >> p & 1:
                raise InvalidInputError(f"duplicate support entry {p}")
            bits |= 1 << p
        return cls(bits)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "BinaryPolynomial":
        return cls(sum(1 << i for i, c in enumerate(coeffs) if c & 1))

    @property
    def degree(self) -> int:
        """Index of the highest set coefficient (-1 for the zero polynomial)."""
        return self.bits.bit_length() - 1

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.bits >> i & 1 for i in range(self.degree + 1))

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        return "".join(str(c) for c in self.coeffs)

    def to_hex(self) -> str:
        return hex(self.bits)

    def __mul__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(poly_mul(self.bits, other.bits))

    def __add__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(self.bits ^ other.bits)

    __sub__ = __add__

    def __divmod__(self, other: "BinaryPolynomial"):
        q, r = poly_divmod(self.bits, other.bits)
        return BinaryPolynomial(q), BinaryPolynomial(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]


def parse_polynomial(text: str) -> BinaryPolynomial:
    """Parse a binary string, ``0x`` hex word, or ``support:0,3,7`` form."""
    text = text.strip()
    if text.lower().startswith("support:"):
        body = text.split(":", 1)[1].strip().strip("[]")
        try:
            positions = [int(tok) for tok in body.replace(" ", "").split(",") if tok]
        except ValueError as exc:
            raise InvalidInputError(f"bad support list {text!r}") from exc
        if not positions:
            raise InvalidInputError("empty support list")
        return BinaryPolynomial.from_support(positions)
    return BinaryPolynomial.from_string(text)


def _as_bits(poly) -> int:
    return poly.bits if isinstance(poly, BinaryPolynomial) else int(poly)


# -- raw arithmetic on packed words ---------------------------------------


def poly_mul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length() - 1
    q = 0
    while a and a.bit_length() - 1 >= db:
        shift = a.bit_length() - 1 - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def poly_mulmod(a: int, b: int, m: int) -> int:
    return poly_divmod(poly_mul(a, b), m)[1]


def poly_powmod(base: int, exp: int, m: int) -> int:
    """``base**exp mod m`` by square-and-multiply."""
    result = poly_divmod(1, m)[1]
    base = poly_divmod(base, m)[1]
    while exp:
        if exp & 1:
            result = poly_mulmod(result, base, m)
        exp >>= 1
        if exp:
            base = poly_mulmod(base, base, m)
    return result


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return a


def _x_pow_2pow(j: int, m: int) -> int:
    """``x**(2**j) mod m`` by repeated squaring."""
    x = poly_divmod(2, m)[1]
    for _ in range(j):
        x = poly_mulmod(x, x, m)
    return x


# -- integer factorisation of 2**k - 1 ------------------------------------

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73]


def _is_probable_prime(n: int) -> bool:
    # Fixed-base Miller-Rabin; exact below 3.3e24, overwhelming confidence above.
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _factor_int(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m, rng)
        stack.extend((d, m // d))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def factor_mersenne(k: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``2**k - 1`` as sorted ``(prime, exponent)`` pairs.

    The number is first split into cyclotomic values ``Phi_d(2)`` for
    ``d | k``; each piece is much smaller than ``2**k`` and is then handled by
    Pollard-Brent with a fixed seed, so results are reproducible.
    """
    if k < 1:
        raise InvalidInputError("k must be positive")
    rng = random.Random(k)
    cyclo: dict[int, int] = {}
    for d in _divisors(k):
        value = (1 << d) - 1
        for e in _divisors(d)[:-1]:
            value //= cyclo[e]
        cyclo[d] = value
    factors: dict[int, int] = {}
    for value in cyclo.values():
        _factor_int(value, factors, rng)
    return tuple(sorted(factors.items()))


def _prime_factors(n: int) -> list[int]:
    return sorted({p for p, _ in _factor_int_dict(n).items()})


def _factor_int_dict(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    _factor_int(n, out, random.Random(n))
    return out


# -- public predicates ----------------------------------------------------


def weight(poly) -> int:
    """Number of nonzero coefficients."""
    return _as_bits(poly).bit_count()


def _require_degree(poly) -> tuple[int, int]:
    bits = _as_bits(poly)
    k = bits.bit_length() - 1
    if k < 1:
        raise InvalidInputError("polynomial must have degree >= 1")
    return bits, k


def is_irreducible(poly) -> bool:
    """Rabin's irreducibility test."""
    bits, k = _require_degree(poly)
    if k == 1:
        return True
    if not bits & 1:
        return False
    if _x_pow_2pow(k, bits) != 2:
        return False
    for q in _prime_factors(k):
        t = _x_pow_2pow(k // q, bits) ^ 2
        if poly_gcd(bits, t) != 1:
            return False
    return True


def is_primitive(poly) -> bool:
    """True when ``poly`` is irreducible and ``x`` has order ``2**k - 1`` modulo it.

    Raises InvalidInputError for constant polynomials.
    """
    bits, k = _require_degree(poly)
    if not bits & 1:
        return False
    if not is_irreducible(bits):
        return False
    order = (1 << k) - 1
    one = poly_divmod(1, bits)[1]
    if poly_powmod(2, order, bits) != one:
        return False
    return all(poly_powmod(2, order // q, bits) != one for q, _ in factor_mersenne(k))


def multiplicative_order(poly) -> int | None:
    """Order of ``x`` modulo ``poly`` by brute force, or None if x is not a unit.

    Intended as a cross-check for small degrees only.
    """
    bits, k = _require_degree(poly)
    if not bits & 1:
        return None
    x = 1
    for e in range(1, 1 << k):
        x <<= 1
        if x >> k & 1:
            x ^= bits
        if x == 1:
            return e
    return None


def reciprocal(poly) -> BinaryPolynomial:
    """Reverse the coefficient sequence: ``x**k * h(1/x)``."""
    bits = _as_bits(poly)
    if not bits & 1:
        raise InvalidInputError("reciprocal needs h_0 = 1")
    k = bits.bit_length() - 1
    out = 0
    for i in range(k + 1):
        if bits >> i & 1:
            out |= 1 << (k - i)
    return BinaryPolynomial(out)


def support(poly) -> list[int]:
    bits = _as_bits(poly)
    if bits == 0:
        raise InvalidInputError("zero polynomial has empty support")
    return [i for i in range(bits.bit_length()) if bits >> i & 1]


def differences(p: Sequence[int]) -> list[int]:
    if len(p) < 2:
        raise InvalidInputError("need at least two marks")
    return [b - a for a, b in zip(p, p[1:])]


def _check_marks(p: Sequence[int]) -> None:
    if any(b <= a for a, b in zip(p, p[1:])):
        raise InvalidInputError("marks must be strictly ascending")


def is_golomb_ruler(p: Sequence[int]) -> bool:
    """True iff every pairwise difference of the marks is distinct."""
    _check_marks(p)
    seen = set()
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            d = p[j] - p[i]
            if d in seen:
                return False
            seen.add(d)
    return True


def cofactor(poly) -> BinaryPolynomial:
    """Quotient ``(x**N + 1) / h(x)`` with ``N = 2**k - 1``.

    Its coefficient string is one period of the m-sequence generated by
    ``h``.  Non-primitive input is rejected.
    """
    bits, k = _require_degree(poly)
    if not is_primitive(bits):
        raise InvalidInputError("cofactor requires a primitive polynomial")
    n = (1 << k) - 1
    q, r = poly_divmod((1 << n) | 1, bits)
    if r:
        raise InvalidInputError("x^N + 1 is not divisible by the polynomial")
    return BinaryPolynomial(q)
