import itertools

import pytest
from hypothesis import given, strategies as st

from simplex_ldpc import gf2
from simplex_ldpc.catalog import TABLE_I
from simplex_ldpc.errors import InvalidInputError
from simplex_ldpc.gf2 import BinaryPolynomial as P


def poly(s):
    return P.from_string(s)


def seeds(k):
    """All degree-k polynomials with h_0 = h_k = 1."""
    for mid in range(1 << (k - 1)):
        yield P(1 | (mid << 1) | (1 << k))


def list_divmod(num, den):
    """Schoolbook long division on coefficient lists, lowest power first."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        if num[i + len(den) - 1]:
            q[i] = 1
            for j, d in enumerate(den):
                num[i + j] ^= d
    return q, num


# Entries of the published table that do not survive an independent order
# computation (see test_table_i_anomalies).
ANOMALOUS = {"1010111", "10110101"}


class TestParsing:
    def test_binary_string_lowest_power_first(self):
        h = poly("1101")
        assert h.bits == 0b1011
        assert h.degree == 3
        assert str(h) == "1101"

    def test_hex_is_packed_word(self):
        assert P.from_string("0xb") == poly("1101")
        assert poly("10001000000001011").to_hex() == "0x1a011"
        assert P.from_string(poly("10001000000001011").to_hex()) == poly("10001000000001011")

    def test_support_form(self):
        assert gf2.parse_polynomial("support:0,4,13,15,16") == poly("10001000000001011")
        assert gf2.parse_polynomial("support:[0, 3, 7]") == poly("10010001")

    @pytest.mark.parametrize("bad", ["", "1021", "0xzz", "support:", "support:1,1"])
    def test_rejects_garbage(self, bad):
        with pytest.raises(InvalidInputError):
            gf2.parse_polynomial(bad)

    @given(st.integers(min_value=1, max_value=1 << 80))
    def test_roundtrip(self, bits):
        h = P(bits)
        assert P.from_string(str(h)) == h
        assert P.from_string(h.to_hex()) == h


class TestWeight:
    @pytest.mark.parametrize("s,w", [("1101", 3), ("1", 1), ("10001000000001011", 5)])
    def test_examples(self, s, w):
        assert gf2.weight(poly(s)) == w

    @pytest.mark.parametrize("k", range(2, 11))
    def test_primitive_weight_odd_at_least_3(self, k):
        for h in seeds(k):
            if gf2.is_primitive(h):
                assert gf2.weight(h) % 2 == 1 and gf2.weight(h) >= 3


class TestPrimitivity:
    @pytest.mark.parametrize("s,expected", [("1101", True), ("11", True), ("1111", False)])
    def test_examples(self, s, expected):
        assert gf2.is_primitive(poly(s)) is expected

    def test_1111_has_factor_x_plus_1(self):
        q, r = list_divmod([1, 1, 1, 1], [1, 1])
        assert not any(r)

    def test_degree_zero_rejected(self):
        with pytest.raises(InvalidInputError):
            gf2.is_primitive(P(1))

    @pytest.mark.parametrize("k", range(1, 11))
    def test_agrees_with_brute_force_order(self, k):
        for c in range(1 << k, 1 << (k + 1)):
            order = gf2.multiplicative_order(c)
            assert gf2.is_primitive(c) == (order == (1 << k) - 1), bin(c)

    @pytest.mark.parametrize("k", range(1, 10))
    def test_irreducible_agrees_with_trial_division(self, k):
        for c in range(1 << k, 1 << (k + 1)):

            def reducible():
                for d in range(2, 1 << (k // 2 + 1)):
                    if 0 < d.bit_length() - 1 <= k // 2 and gf2.poly_divmod(c, d)[1] == 0:
                        return True
                return False

            assert gf2.is_irreducible(c) == (not reducible()), bin(c)

    @pytest.mark.parametrize("count,k", [(2, 3), (2, 4), (6, 5), (6, 6), (18, 7), (16, 8), (48, 9), (60, 10)])
    def test_number_of_primitive_polynomials(self, count, k):
        # phi(2^k - 1) / k
        assert sum(gf2.is_primitive(h) for h in seeds(k)) == count

    def test_table_entries_other_than_anomalies_are_primitive(self):
        for k, entries in TABLE_I.items():
            for s in entries:
                if s in ANOMALOUS:
                    continue
                assert gf2.is_primitive(poly(s)), s
                assert gf2.is_primitive(gf2.reciprocal(poly(s))), s

    def test_table_i_anomalies(self):
        # irreducible, but x has order 21 instead of 63
        h6 = poly("1010111")
        assert gf2.is_irreducible(h6)
        assert gf2.multiplicative_order(h6) == 21
        assert not gf2.is_primitive(h6)
        # (1 + x + x^3)(1 + x + x^4)
        h7 = poly("10110101")
        assert poly("1101") * poly("11001") == h7
        assert not gf2.is_irreducible(h7)
        assert gf2.multiplicative_order(h7) == 105
        assert not gf2.is_primitive(h7)

    def test_table_i_exhaustive_for_small_degrees(self):
        for k in (3, 4, 5, 6):
            listed = {poly(s) for s in TABLE_I[k]}
            listed |= {gf2.reciprocal(h) for h in listed}
            found = {h for h in seeds(k) if gf2.is_primitive(h)}
            assert found <= listed

    def test_large_seed_polynomials(self):
        for p in ([0, 4, 13, 15, 16], [0, 8, 25, 105, 115, 116, 121], [0, 2, 21, 29, 60, 72, 75]):
            assert gf2.is_primitive(P.from_support(p))

    def test_factor_mersenne(self):
        assert gf2.factor_mersenne(6) == ((3, 2), (7, 1))
        assert gf2.factor_mersenne(11) == ((23, 1), (89, 1))
        for k in (16, 60, 64, 75, 121):
            prod = 1
            for p, e in gf2.factor_mersenne(k):
                prod *= p**e
            assert prod == (1 << k) - 1


class TestReciprocal:
    @pytest.mark.parametrize(
        "s,r",
        [("1101", "1011"), ("11001", "10011"), ("10001000000001011", "11010000000010001")],
    )
    def test_examples(self, s, r):
        assert str(gf2.reciprocal(poly(s))) == r

    def test_requires_constant_term(self):
        with pytest.raises(InvalidInputError):
            gf2.reciprocal(poly("011"))

    @pytest.mark.parametrize("k", range(3, 11))
    def test_reciprocal_of_primitive_is_primitive_and_distinct(self, k):
        for h in seeds(k):
            if gf2.is_primitive(h):
                r = gf2.reciprocal(h)
                assert gf2.is_primitive(r)
                assert r != h
                assert gf2.reciprocal(r) == h


class TestSupportAndDifferences:
    @pytest.mark.parametrize(
        "s,p",
        [("10001000000001011", [0, 4, 13, 15, 16]), ("1101", [0, 1, 3]), ("10010001", [0, 3, 7])],
    )
    def test_support(self, s, p):
        assert gf2.support(poly(s)) == p

    def test_support_of_zero(self):
        with pytest.raises(InvalidInputError):
            gf2.support(P(0))

    @pytest.mark.parametrize(
        "p,s",
        [([0, 4, 13, 15, 16], [4, 9, 2, 1]), ([0, 3, 7], [3, 4]), ([0, 8, 25, 105, 115, 116, 121], [8, 17, 80, 10, 1, 5])],
    )
    def test_differences(self, p, s):
        assert gf2.differences(p) == s

    def test_differences_needs_two_marks(self):
        with pytest.raises(InvalidInputError):
            gf2.differences([0])

    @given(st.integers(min_value=2, max_value=1 << 40))
    def test_differences_sum_to_span(self, bits):
        h = P(bits | 1)
        p = gf2.support(h)
        if len(p) >= 2:
            assert sum(gf2.differences(p)) == h.degree


class TestGolomb:
    @pytest.mark.parametrize(
        "p,expected",
        [([0, 4, 13, 15, 16], True), ([0, 1], True), ([0, 1, 2], False),
         ([0, 25, 31, 138, 150, 160, 240], True), ([0, 8, 25, 105, 115, 116, 121], True)],
    )
    def test_examples(self, p, expected):
        assert gf2.is_golomb_ruler(p) is expected

    @pytest.mark.parametrize("bad", [[0, 2, 1], [0, 1, 1]])
    def test_rejects_unsorted(self, bad):
        with pytest.raises(InvalidInputError):
            gf2.is_golomb_ruler(bad)

    @given(st.lists(st.integers(0, 60), min_size=2, max_size=8, unique=True))
    def test_matches_multiset_definition(self, marks):
        marks = sorted(marks)
        diffs = [b - a for a, b in itertools.combinations(marks, 2)]
        assert gf2.is_golomb_ruler(marks) == (len(diffs) == len(set(diffs)))

    @pytest.mark.parametrize("k", range(3, 17))
    def test_weight3_primitive_are_rulers(self, k):
        for a in range(1, k):
            h = P(1 | 1 << a | 1 << k)
            if gf2.is_primitive(h):
                assert gf2.is_golomb_ruler(gf2.support(h))


class TestCofactor:
    def test_k3(self):
        g = gf2.cofactor(poly("1101"))
        q, r = list_divmod([1] + [0] * 6 + [1], [1, 1, 0, 1])
        assert not any(r)
        assert str(g) == "".join(map(str, q)) == "11101"
        assert g.degree == 4

    def test_k1(self):
        assert gf2.cofactor(poly("11")) == P(1)

    def test_k4_window_property(self):
        g = gf2.cofactor(poly("11001"))
        assert str(g) == "111101011001"
        assert g.degree == 11
        seq = [g.bits >> i & 1 for i in range(15)]
        windows = {tuple(seq[(i + j) % 15] for j in range(4)) for i in range(15)}
        assert len(windows) == 15 and (0, 0, 0, 0) not in windows

    @pytest.mark.parametrize("k", range(2, 9))
    def test_product_recovers_binomial(self, k):
        n = (1 << k) - 1
        for h in seeds(k):
            if gf2.is_primitive(h):
                assert gf2.cofactor(h) * h == P((1 << n) | 1)

    def test_rejects_non_primitive(self):
        with pytest.raises(InvalidInputError):
            gf2.cofactor(poly("1111"))


@given(st.integers(1, 1 << 30), st.integers(1, 1 << 30), st.integers(2, 1 << 20))
def test_arithmetic_identities(a, b, m):
    q, r = gf2.poly_divmod(a, b)
    assert gf2.poly_mul(q, b) ^ r == a
    assert r.bit_length() < b.bit_length()
    assert gf2.poly_mulmod(a, b, m) == gf2.poly_divmod(gf2.poly_mul(a, b), m)[1]
    assert gf2.poly_mul(a, b) == gf2.poly_mul(b, a)


def test_powmod_matches_repeated_multiplication():
    m = poly("10001000000001011").bits
    acc = 1
    for e in range(200):
        assert gf2.poly_powmod(2, e, m) == acc
        acc = gf2.poly_mulmod(acc, 2, m)
