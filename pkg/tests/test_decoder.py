import math
import time

import numpy as np
import pytest

from simplex_ldpc import codec, matrix
from simplex_ldpc.catalog import WEIGHT3_K7, WEIGHT5_K16, named_polynomial
from simplex_ldpc.channel import channel_llr, make_rng, noise_variance
from simplex_ldpc.decoder import build_graph, sum_product, sum_product_batch
from simplex_ldpc.errors import InvalidInputError
from simplex_ldpc.gf2 import BinaryPolynomial as P
from simplex_ldpc.matrix import ParityCheckMatrix


def naive_spa(H, llr, max_iter):
    """Reference flooding SPA over dicts, written independently of the vectorised one."""
    rows, cols = H.rows, H.columns

    def satisfied(hard):
        return not any(sum(hard[j] for j in r) % 2 for r in rows)

    hard = [1 if x < 0 else 0 for x in llr]
    if satisfied(hard):
        return hard, 0
    v2c = {(i, j): llr[j] for i, r in enumerate(rows) for j in r}
    for it in range(1, max_iter + 1):
        c2v = {}
        for i, r in enumerate(rows):
            for j in r:
                prod = 1.0
                for jj in r:
                    if jj != j:
                        prod *= math.tanh(max(-25.0, min(25.0, v2c[(i, jj)])) / 2)
                prod = max(-1 + 1e-12, min(1 - 1e-12, prod))
                c2v[(i, j)] = 2 * math.atanh(prod)
        total = [llr[j] + sum(c2v[(i, j)] for i in cols[j]) for j in range(H.n)]
        hard = [1 if t < 0 else 0 for t in total]
        if satisfied(hard):
            return hard, it
        for i, j in v2c:
            v2c[(i, j)] = total[j] - c2v[(i, j)]
    return hard, max_iter


def all_codewords(h, n):
    k = h.degree
    msgs = ((np.arange(1 << k)[:, None] >> np.arange(k)) & 1).astype(np.uint8)
    return codec.encode_batch(h, n, msgs)


def ml_decode(codewords, llr):
    """Maximum-likelihood codeword indices for a batch of LLR vectors."""
    signs = 1.0 - 2.0 * codewords
    return np.argmax(signs @ llr.T, axis=0)


class TestGraph:
    def test_band_matrix(self):
        g = build_graph(matrix.build(P.from_string("1101"), 6))
        assert (g.r, g.n, g.num_edges) == (3, 6, 9)
        assert g.check_vars == ((0, 1, 3), (1, 2, 4), (2, 3, 5))
        assert g.var_checks[3] == (0, 2)

    def test_single_check(self):
        g = build_graph(ParityCheckMatrix(2, ((0, 1),)))
        assert g.r == 1 and len(g.check_vars[0]) == 2

    def test_expanded_edges(self):
        H = matrix.build(named_polynomial("C1"), 242)
        E = matrix.circulant_expand(H, 7, "paper-c3")
        assert build_graph(E).num_edges == 7 * build_graph(H).num_edges

    def test_bipartite_consistency(self):
        g = build_graph(matrix.build(P.from_string(WEIGHT5_K16), 40))
        edges_c = {(i, j) for i, r in enumerate(g.check_vars) for j in r}
        edges_v = {(i, j) for j, c in enumerate(g.var_checks) for i in c}
        assert edges_c == edges_v and len(edges_c) == g.num_edges

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            build_graph(ParityCheckMatrix(3, ()))


class TestSumProduct:
    def setup_method(self):
        self.h = P.from_string(WEIGHT3_K7)
        self.H = matrix.build(self.h, 14)
        self.g = build_graph(self.H)

    def test_strong_zeros(self):
        res = sum_product(self.g, np.full(14, 20.0))
        assert res.converged and res.iterations_used == 0
        assert not res.hard_bits.any()

    def test_syndrome_zero_input_exits_immediately(self):
        c = codec.encode(self.h, 14, [1, 0, 1, 1, 0, 0, 1])
        res = sum_product(self.g, 5.0 * (1 - 2.0 * c))
        assert res.converged and res.iterations_used == 0
        assert np.array_equal(res.hard_bits, c)

    def test_single_flip_corrected(self):
        cws = all_codewords(self.h, 14)
        for pos in range(14):
            llr = np.full(14, 8.0)
            llr[pos] = -3.0
            assert cws[ml_decode(cws, llr[None, :])[0]].sum() == 0
            res = sum_product(self.g, llr)
            assert res.converged and not res.hard_bits.any()

    def test_zero_llr_decides_zero(self):
        res = sum_product(self.g, np.zeros(14), max_iter=0)
        assert not res.hard_bits.any() and res.converged

    def test_bad_inputs(self):
        with pytest.raises(InvalidInputError):
            sum_product(self.g, np.zeros(13))
        llr = np.zeros(14)
        llr[3] = np.inf
        with pytest.raises(InvalidInputError):
            sum_product(self.g, llr)

    @pytest.mark.parametrize("s,n,snr", [(WEIGHT3_K7, 14, 1.0), (WEIGHT5_K16, 32, 2.0), ("10111001", 14, 2.0)])
    def test_matches_naive_reference(self, s, n, snr):
        H = matrix.build(P.from_string(s), n)
        g = build_graph(H)
        rng = make_rng(99, n)
        s2 = noise_variance((H.n - H.r) / H.n, snr)
        llr = channel_llr(1 + math.sqrt(s2) * rng.standard_normal((150, n)), s2)
        hard, iters, _, _ = sum_product_batch(g, llr, 30)
        for f in range(150):
            ref_hard, ref_it = naive_spa(H, llr[f].tolist(), 30)
            assert hard[f].tolist() == ref_hard
            assert iters[f] == ref_it

    def test_converged_frames_have_zero_syndrome(self):
        h = P.from_string(WEIGHT5_K16)
        H = matrix.build(h, 32)
        g = build_graph(H)
        rng = make_rng(4)
        s2 = noise_variance(0.5, 1.0)
        llr = channel_llr(1 + math.sqrt(s2) * rng.standard_normal((2000, 32)), s2)
        hard, iters, conv, post = sum_product_batch(g, llr, 100)
        assert conv.any() and not conv.all()
        assert not H.syndrome(hard[conv]).any()
        assert (iters <= 100).all() and (iters[~conv] == 100).all()
        assert np.array_equal(hard, (post < 0).astype(np.uint8))

    def test_batch_equals_single(self):
        rng = make_rng(5)
        s2 = noise_variance(0.5, 2.0)
        llr = channel_llr(1 + math.sqrt(s2) * rng.standard_normal((40, 14)), s2)
        hard, iters, conv, _ = sum_product_batch(self.g, llr)
        for f in range(40):
            r = sum_product(self.g, llr[f])
            assert np.array_equal(r.hard_bits, hard[f]) and r.iterations_used == iters[f]
            assert r.converged == conv[f]


def test_ml_agreement_14_7():
    h = P.from_string(WEIGHT3_K7)
    g = build_graph(matrix.build(h, 14))
    cws = all_codewords(h, 14)
    rng = make_rng(2718)
    s2 = noise_variance(0.5, 5.0)
    msgs = rng.integers(0, 2, size=(10_000, 7), dtype=np.uint8)
    tx = codec.encode_batch(h, 14, msgs)
    llr = channel_llr((1 - 2.0 * tx) + math.sqrt(s2) * rng.standard_normal(tx.shape), s2)
    hard, _, conv, _ = sum_product_batch(g, llr)
    ml = cws[ml_decode(cws, llr)]
    agree = (hard[conv] == ml[conv]).all(axis=1).mean()
    assert agree >= 0.95


@pytest.mark.parametrize("s,n", [(WEIGHT3_K7, 14), (WEIGHT5_K16, 32), ("C1", 242)])
def test_high_snr_convergence(s, n):
    h = named_polynomial(s) if s == "C1" else P.from_string(s)
    H = matrix.build(h, n)
    g = build_graph(H)
    rng = make_rng(6, n)
    s2 = noise_variance(0.5, 6.0)
    llr = channel_llr(1 + math.sqrt(s2) * rng.standard_normal((5000, n)), s2)
    _, _, conv, _ = sum_product_batch(g, llr, 100)
    assert conv.mean() > 0.99


def test_work_linear_in_edges():
    # C1 rate 1/2 versus its 7-fold lift: per-edge cost may not more than double
    H = matrix.build(named_polynomial("C1"), 242)
    small, big = build_graph(H), build_graph(matrix.circulant_expand(H, 7, "paper-c3"))
    rng = make_rng(8)

    def best_time(g, frames):
        # Eb/N0 far below threshold: no frame converges, so every call runs all iterations
        s2 = noise_variance(0.5, -6.0)
        llr = channel_llr(1 + math.sqrt(s2) * rng.standard_normal((frames, g.n)), s2)
        times = []
        for _ in range(5):
            t0 = time.perf_counter()
            _, it, conv, _ = sum_product_batch(g, llr, 10)
            times.append(time.perf_counter() - t0)
        assert not conv.any()
        return min(times)

    ratio = best_time(big, 70) / best_time(small, 70)
    edge_ratio = big.num_edges / small.num_edges
    assert ratio / edge_ratio <= 2.0
