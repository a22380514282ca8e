"""Reference seed polynomials.

``TABLE_I`` reproduces the published list of primitive polynomials for
degrees 3 to 8 exactly as printed, one representative per reciprocal pair,
including its duplicate degree-8 entry.  It is data, not ground truth: see
``tests/test_gf2.py`` for which entries actually pass the primitivity test.
"""

from simplex_ldpc.gf2 import BinaryPolynomial

TABLE_I: dict[int, tuple[str, ...]] = {
    3: ("1101",),
    4: ("11001",),
    5: ("101001", "110111", "101111"),
    6: ("1100001", "1010111", "1110011", "1101101"),
    7: ("11000001", "10010001", "11110001", "10111001", "11100101",
        "11010101", "10110101", "11111101", "11110111"),
    8: ("100011101", "100101011", "101100011", "101101001",
        "101100011", "111110101", "111001111"),
}

WEIGHT3_K7 = "10010001"
WEIGHT5_K16 = "10001000000001011"

NAMED_SUPPORTS: dict[str, tuple[int, ...]] = {
    "C1": (0, 8, 25, 105, 115, 116, 121),
    "C2": (0, 25, 31, 138, 150, 160, 240),
    "C4": (0, 2, 21, 29, 60, 72, 75),
}


def named_polynomial(name: str) -> BinaryPolynomial:
    return BinaryPolynomial.from_support(NAMED_SUPPORTS[name.upper()])
