import itertools

import numpy as np
import pytest

from eharqsim.ldpc import (
    derive_generator,
    encode,
    extract_subcode,
    min_sum_decode,
    regular_code,
)


def _llrs(codeword, magnitude):
    # positive LLR favours bit 1
    return magnitude * (2.0 * np.asarray(codeword) - 1.0)


@pytest.fixture(scope="module")
def code():
    h = regular_code()
    return h, derive_generator(h)


class TestMinSumDecode:
    def test_noiseless(self, toy_code):
        g = derive_generator(toy_code)
        codeword = encode(g, [1, 0, 1])
        trace = min_sum_decode(toy_code, _llrs(codeword, 50.0), trace_iters=5)

        assert trace.syndrome_ok
        assert trace.hard_decision.tolist() == codeword.tolist()
        assert trace.app_llrs.shape == (6, 6)
        assert (np.diff(np.abs(trace.app_llrs), axis=0) >= 0).all()

    def test_stop_at_valid_input(self, toy_code):
        trace = min_sum_decode(toy_code, _llrs(np.zeros(6), 5.0))

        assert trace.iterations_used == 0
        assert trace.app_llrs.shape == (1, 6)

    def test_all_zero_input(self, toy_code):
        trace = min_sum_decode(toy_code, np.zeros(6), trace_iters=1)

        assert trace.app_llrs.tolist() == [[0.0] * 6, [0.0] * 6]
        assert trace.syndrome_ok
        assert not trace.hard_decision.any()

    def test_trace_complete(self, toy_code):
        trace = min_sum_decode(
            toy_code, _llrs(np.zeros(6), 5.0), max_iter=50, trace_iters=5
        )

        assert trace.iterations_used == 5
        assert trace.app_llrs.shape == (6, 6)
        assert trace.app_llrs[0].tolist() == [-5.0] * 6

    def test_matches_ml_decoding(self, toy_code):
        g = derive_generator(toy_code)
        codewords = [encode(g, u) for u in itertools.product((0, 1), repeat=3)]

        for sent in codewords:
            for flipped in range(6):
                llrs = _llrs(sent, 4.0)
                llrs[flipped] = -0.25 * llrs[flipped]

                scores = [
                    float(_llrs(c, 1.0) @ llrs) for c in codewords
                ]
                ml = codewords[int(np.argmax(scores))]
                trace = min_sum_decode(toy_code, llrs)

                assert trace.hard_decision.tolist() == ml.tolist()
                assert ml.tolist() == sent.tolist()

    def test_syndrome_soundness(self, code):
        h, g = code
        rng = np.random.default_rng(11)

        for _ in range(200):
            codeword = encode(g, rng.integers(0, 2, size=g.n_info))
            llrs = _llrs(codeword, 1.0) + rng.normal(0, 1.0, size=h.n_vars)
            trace = min_sum_decode(h, llrs, max_iter=20)

            if trace.syndrome_ok:
                assert h.is_codeword(trace.hard_decision)

    def test_round_trip(self, code):
        h, g = code
        rng = np.random.default_rng(12)

        for _ in range(20):
            info = rng.integers(0, 2, size=g.n_info)
            codeword = encode(g, info)
            trace = min_sum_decode(h, _llrs(codeword, 50.0), trace_iters=5)

            assert trace.hard_decision[g.info_positions].tolist() == (
                info.tolist()
            )

    def test_subcode(self, code):
        h, g = code
        subcode = extract_subcode(h, 1 / 2)
        codeword = encode(g, np.ones(g.n_info, dtype=np.uint8))
        llrs = subcode.restrict(_llrs(codeword, 8.0))
        trace = min_sum_decode(subcode, llrs, trace_iters=5)

        assert trace.app_llrs.shape == (6, subcode.n_vars)
        assert trace.syndrome_ok

    def test_wrong_length(self, toy_code):
        with pytest.raises(ValueError, match="expected 6"):
            min_sum_decode(toy_code, np.zeros(5))

    def test_non_finite(self, toy_code):
        llrs = np.zeros(6)
        llrs[2] = np.nan

        with pytest.raises(ValueError, match="non-finite"):
            min_sum_decode(toy_code, llrs)

    def test_trace_beyond_budget(self, toy_code):
        with pytest.raises(ValueError, match="trace_iters <= max_iter"):
            min_sum_decode(toy_code, np.zeros(6), max_iter=3, trace_iters=5)
