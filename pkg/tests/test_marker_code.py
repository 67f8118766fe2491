import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from delcode import marker_code as mc
from delcode.channel import make_rng
from delcode.core import CodeParams, apply_deletions, count_per_block, to_str
from delcode.errors import DesyncError, MalformedInputError, ParameterError
from delcode.verifier import all_codewords, enumerate_patterns, lb_theorem3

WORKED = CodeParams(1, 5, 20)
SMALL_CODES = [CodeParams(1, 3, 6), CodeParams(1, 3, 9), CodeParams(1, 4, 8), CodeParams(2, 5, 10)]


@st.composite
def codewords(draw, params):
    k = mc.info_length(params)
    bits = draw(st.lists(st.integers(0, 1), min_size=k, max_size=k))
    return mc.encode(bits, params)


class TestLayout:
    def test_worked_counts(self):
        lay = mc.layout(WORKED)
        assert len(lay.fixed_positions) == 9
        assert lay.info_length == 11

    def test_small_positions(self):
        lay = mc.layout(CodeParams(1, 3, 6))
        assert dict(lay.fixed_positions) == {3: 1, 4: 0, 5: 0}
        assert lay.free_positions == (1, 2, 6)

    def test_two_deletion_blocks(self):
        lay = mc.layout(CodeParams(2, 5, 10))
        assert len(lay.fixed_positions) == 5
        assert lay.info_length == 5

    def test_relaxed_tail_carries_leading_zeros(self):
        lay = mc.layout(CodeParams(2, 12, 100, strict=False))
        fixed = dict(lay.fixed_positions)
        assert [fixed[i] for i in (97, 98, 99)] == [0, 0, 0]
        assert 100 in lay.free_positions

    def test_markers_need_room(self):
        # delta < ell holds, so the geometry is valid, but 2*delta < ell does not
        with pytest.raises(ParameterError):
            mc.layout(CodeParams(2, 4, 8))


class TestRedundancy:
    @pytest.mark.parametrize("params, expected", [(WORKED, 9), (CodeParams(2, 5, 10), 5),
                                                  (CodeParams(3, 7, 14), 7)])
    def test_values(self, params, expected):
        assert mc.redundancy(params) == expected

    @pytest.mark.parametrize("delta, ell, blocks", [
        (d, ell, b) for d in (1, 2, 3) for ell in range(2 * d + 1, 2 * d + 6) for b in (2, 3, 5)
    ][:50])
    def test_matches_block_by_block_bound(self, delta, ell, blocks):
        params = CodeParams(delta, ell, ell * blocks)
        assert mc.redundancy(params) == lb_theorem3(params)


class TestEncode:
    def test_worked_info(self):
        x = mc.encode("1010 10 01 100", WORKED)
        assert to_str(x) == "10101001010001100100"
        assert mc.is_codeword(x, WORKED)

    def test_zero_info(self):
        assert to_str(mc.encode("000", CodeParams(1, 3, 6))) == "001000"

    def test_wrong_info_length(self):
        with pytest.raises(ParameterError):
            mc.encode("0101", CodeParams(1, 3, 6))

    @given(st.data())
    def test_roundtrip_and_membership(self, data):
        params = data.draw(st.sampled_from(SMALL_CODES + [CodeParams(3, 50, 500)]))
        k = mc.info_length(params)
        info = np.array(data.draw(st.lists(st.integers(0, 1), min_size=k, max_size=k)), dtype=np.uint8)
        x = mc.encode(info, params)
        assert mc.is_codeword(x, params)
        assert np.array_equal(mc.extract(x, params), info)
        assert mc.decode_boundaries(x, params).counts.counts == (0,) * params.num_blocks


class TestIsCodeword:
    @pytest.mark.parametrize("x, expected", [
        ("10101 00111 00011 00100", True),
        ("0" * 20, False),
        ("01011 01001 01111 11101", False),
    ])
    def test_examples(self, x, expected):
        assert mc.is_codeword(x, WORKED) is expected

    def test_length_checked(self):
        with pytest.raises(ParameterError):
            mc.is_codeword("0101", WORKED)

    def test_enumerated_sizes(self):
        for params in SMALL_CODES:
            count = sum(
                mc.is_codeword(np.array(bits, dtype=np.uint8), params)
                for bits in np.ndindex(*([2] * params.n))
            )
            assert count == 2 ** (params.n - mc.redundancy(params))


class TestMirror:
    def test_involution_and_polarity(self):
        params = CodeParams(1, 3, 6)
        x = mc.encode("101", params)
        m = mc.mirror(x, params)
        assert not mc.is_codeword(m, params)
        assert np.array_equal(mc.mirror(m, params), x)
        assert to_str(m)[2:5] == "011"


class TestBlockCount:
    @pytest.mark.parametrize("window, expected", [
        (b"\x01\x00\x01\x00\x01", 0),  # last bit of the block survived
        (b"\x01\x00\x01\x00\x00", 1),
        (b"\x00\x00\x00", 1),           # truncated window reads as missing zeros
    ])
    def test_single_deletion_detector(self, window, expected):
        assert mc.block_count(window, 5, 1) == expected

    @pytest.mark.parametrize("tail, expected", [("111", 0), ("110", 1), ("100", 2), ("000", 3),
                                                ("011", 3)])
    def test_first_zero_rule(self, tail, expected):
        window = bytes([1, 0, 1, 0]) + bytes(int(c) for c in tail)
        assert mc.block_count(window, 7, 3) == expected


class TestDecode:
    def test_worked_example(self):
        res = mc.decode_boundaries("10010011100010100", WORKED)
        assert res.counts.counts == (1, 0, 1, 1)
        assert res.starts == (1, 5, 10, 14)
        assert [to_str(s) for s in res.segments] == ["1001", "00111", "0001", "0100"]
        assert not res.any_suspect

    def test_malformed_length(self):
        with pytest.raises(MalformedInputError):
            mc.decode_boundaries("1001", WORKED)
        with pytest.raises(MalformedInputError):
            mc.decode_boundaries("0" * 21, WORKED)

    def test_over_budget_raises_in_strict_mode(self):
        x = mc.encode("1" * 11, WORKED)
        y = apply_deletions(x, [1, 2, 3])  # three deletions in block 1, budget is 1
        with pytest.raises(DesyncError):
            mc.decode_boundaries(y, WORKED)

    def test_best_effort_flags_instead(self):
        x = mc.encode("1" * 11, WORKED)
        y = apply_deletions(x, [1, 2, 3])
        res = mc.decode_boundaries(y, WORKED, strict=False)
        assert res.any_suspect

    @pytest.mark.parametrize("params", SMALL_CODES)
    def test_exhaustive_correct_detection(self, params):
        patterns = list(enumerate_patterns(params))
        for x in all_codewords(params):
            for kept, counts in patterns:
                assert mc.decode_boundaries(x[kept], params).counts.counts == counts

    def test_random_trials_large_blocks(self):
        params = CodeParams(3, 50, 500)
        rng = make_rng(2024)
        k = mc.info_length(params)
        for _ in range(100_000 // 50):
            x = mc.encode(rng.integers(0, 2, k, dtype=np.uint8), params)
            for _ in range(50):
                per_block = rng.integers(0, 4, params.num_blocks)
                pos = []
                for j, c in enumerate(per_block):
                    pos.extend(j * 50 + 1 + rng.choice(50, size=c, replace=False))
                res = mc.decode_boundaries(apply_deletions(x, pos), params)
                assert res.counts.counts == tuple(int(c) for c in per_block)

    @given(st.data())
    def test_block_by_block_window(self, data):
        """Each count is a function of the ``ell`` symbols from its block start."""
        params = data.draw(st.sampled_from([WORKED, CodeParams(2, 6, 24), CodeParams(3, 10, 40)]))
        x = data.draw(codewords(params))
        pos = []
        for j in range(params.num_blocks):
            s, e = params.block_range(j + 1)
            pos += data.draw(st.sets(st.integers(s, e), max_size=params.delta))
        y = apply_deletions(x, pos)
        res = mc.decode_boundaries(y, params)
        assert res.counts.counts == count_per_block(pos, params).counts
        yb = y.tobytes()
        for j in range(params.num_blocks - 1):
            a = res.starts[j] - 1
            assert mc.block_count(yb[a:a + params.ell], params.ell, params.delta) == res.counts[j]

    @given(st.text(alphabet="01", max_size=30))
    def test_best_effort_never_raises(self, s):
        res = mc.decode_boundaries(s, WORKED, strict=False)
        assert len(res.counts) == WORKED.num_blocks
        assert "".join(to_str(seg) for seg in res.segments) == s
        assert all(0 <= c <= WORKED.ell for c in res.counts)
        assert list(res.starts) == sorted(res.starts)
