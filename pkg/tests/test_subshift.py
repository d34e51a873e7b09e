import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import distance_lower, member_offsets

from hilbert_subshift.errors import MembershipError, WindowError
from hilbert_subshift.subshift import (
    LOWER,
    MIDPOINT,
    SEEDED,
    AlignedPoint,
    WindowWord,
    check_aligned,
    coordinate_index,
    membership,
    metric_d,
    metric_dn,
    read_word,
    sample_periodic,
    sample_random,
    write_word,
)


def constant(value, W):
    return WindowWord(-W, (F(value),) * (2 * W + 1))


def pairs(block):
    return [(iv.lo.to_fraction(), iv.hi.to_fraction()) for iv in block]


class TestWindowWord:
    def test_basics(self):
        w = WindowWord(-2, (F(0), F(1, 2), F(1), F(1, 4), F(3, 4)))
        assert (w.start, w.end, len(w)) == (-2, 2, 5)
        assert w[0] == 1 and w.covers(-2, 2) and not w.covers(-3, 0)
        assert w.restrict(0, 1).values == (F(1), F(1, 4))
        assert w.shifted(1)[-1] == w[0]
        assert w.symmetric_radius() == 2
        assert WindowWord(1, (F(0),)).symmetric_radius() == -1
        with pytest.raises(WindowError):
            w[3]

    def test_rejects_values_outside_unit(self):
        with pytest.raises(ValueError):
            WindowWord(0, (F(3, 2),))


class TestMetric:
    def test_identical(self):
        assert metric_d(constant(F(1, 3), 10), constant(F(1, 3), 10)) == (0, F(1, 2**9))

    def test_single_difference(self):
        x = constant(0, 10)
        y = WindowWord(-10, tuple(F(1) if n == 0 else F(0) for n in range(-10, 11)))
        assert metric_d(x, y, 10) == (1, 1 + F(1, 2**9))

    @pytest.mark.parametrize("W", [0, 1, 5, 20])
    def test_opposite_constants(self, W):
        lo, hi = metric_d(constant(1, W), constant(0, W), W)
        assert lo == 3 - F(2, 2**W) and hi == 3

    def test_explicit_window_and_errors(self):
        x, y = constant(0, 5), constant(1, 3)
        assert metric_d(x, y)[0] == 3 - F(2, 2**3)
        with pytest.raises(WindowError):
            metric_d(x, y, 4)

    @settings(max_examples=50)
    @given(st.integers(0, 12), st.randoms(use_true_random=False))
    def test_matches_direct_sum(self, W, rng):
        xs = [F(rng.randint(0, 64), 64) for _ in range(2 * W + 1)]
        ys = [F(rng.randint(0, 81), 81) for _ in range(2 * W + 1)]
        x, y = WindowWord(-W, tuple(xs)), WindowWord(-W, tuple(ys))
        lo, hi = metric_d(x, y, W)
        assert lo == distance_lower(lambda n: x[n], lambda n: y[n], W)
        assert hi - lo == F(2, 2**W)
        assert hi <= 3

    def test_dn(self):
        x = constant(F(1, 2), 12)
        assert metric_dn(x, x, 3, 4)[0] == 0
        y = WindowWord(-12, tuple(F(1, 2) + (F(1, 4) if n == 2 else 0) for n in range(-12, 13)))
        assert metric_dn(x, y, 1, 4) == metric_d(x, y, 4)
        # the shift by n-1 puts the difference at coordinate 0
        assert metric_dn(x, y, 3, 4)[0] >= F(1, 4)
        with pytest.raises(WindowError):
            metric_dn(x, y, 20, 4)
        with pytest.raises(ValueError):
            metric_dn(x, y, 0)


class TestMembership:
    def test_coordinate_index(self):
        assert [coordinate_index(n, 0, 3) for n in range(1, 7)] == [1, 2, 3, 1, 2, 3]
        assert coordinate_index(0, 0, 3) == 3
        assert coordinate_index(1, 2, 3) == 2

    def test_examples(self, toy):
        w = WindowWord(1, (F(9, 10), F(1, 10), F(7, 10)))
        assert membership(toy, 1, w) == [0]
        assert membership(toy, 1, WindowWord(1, (F(9, 10),) * 3)) == []
        half = WindowWord(-5, (F(1, 2),) * 11)
        assert membership(toy, 1, half) == [0, 1, 2]
        # quarters such as [0, 1/4] exclude 1/2, so only some offsets witness
        found = membership(toy, 2, half)
        assert found and found == member_offsets(pairs(toy.block(2)), -5, half.values)

    @pytest.mark.parametrize("seed", range(5))
    def test_against_oracle(self, toy, seed):
        rng = random.Random(seed)
        block = pairs(toy.block(2))
        for _ in range(20):
            start = rng.randint(-1000, 1000)
            values = [F(rng.randint(0, 8), 8) for _ in range(rng.randint(1, 6))]
            w = WindowWord(start, tuple(values))
            assert membership(toy, 2, w) == member_offsets(block, start, values)

    def test_restricted_offsets(self, toy):
        w = WindowWord(1, (F(9, 10), F(1, 10), F(7, 10)))
        assert membership(toy, 1, w, [1, 2]) == []
        with pytest.raises(ValueError):
            membership(toy, 1, w, [3])


class TestSampling:
    def test_midpoint_period(self, toy):
        x = sample_periodic(toy, 1, MIDPOINT, window=(1, 6))
        assert x.window.values == (F(1, 2), F(1, 4), F(3, 4)) * 2

    def test_lower_level_zero(self, toy):
        x = sample_periodic(toy, 0, LOWER, window=(-4, 4))
        assert set(x.window.values) == {0}

    @pytest.mark.parametrize("selector", [MIDPOINT, LOWER, SEEDED])
    def test_nesting(self, toy, selector):
        x = sample_periodic(toy, 2, selector, window=(-800, 800), seed=3)
        for i in (0, 1, 2):
            assert 0 in membership(toy, i, x.window)

    def test_shift_equivariance(self, toy):
        x = sample_periodic(toy, 2, SEEDED, window=(0, 100), seed=7, offset=0)
        y = sample_periodic(toy, 2, SEEDED, window=(0, 100), seed=7, offset=5)
        assert all(y.value(n + 5) == x.value(n) for n in range(-50, 50))
        assert 5 in membership(toy, 2, y.window)

    @pytest.mark.parametrize("seed", range(4))
    def test_random_point_is_member(self, toy, seed):
        x = sample_random(toy, 2, seed, window=(-900, 900))
        assert x.offset in membership(toy, 2, x.window)
        check_aligned(toy, x)
        assert 0 <= x.offset < 768

    def test_seeds_differ(self, toy):
        a = sample_random(toy, 2, 1, window=(-50, 50))
        b = sample_random(toy, 2, 2, window=(-50, 50))
        assert a.window != b.window
        again = sample_random(toy, 2, 1, window=(-50, 50))
        assert again.window == a.window and again.offset == a.offset

    def test_lazy_values_beyond_window(self, toy3):
        x = sample_random(toy3, 3, 0, window=(-5, 5))
        assert x.value(3) == x.window[3]
        far = 10**700
        v = x.value(far)
        j = coordinate_index(far, x.offset, toy3.b(3))
        assert toy3.interval_at(3, j).contains(v)
        assert x.with_window(far, far + 2).window.start == far

    def test_check_aligned_rejects(self, toy):
        x = sample_random(toy, 2, 0, window=(0, 20))
        bad = AlignedPoint(2, (x.offset + 1) % 768, x.window, x.provenance, x.source)
        with pytest.raises(MembershipError):
            check_aligned(toy, bad)

    def test_unknown_selector(self, toy):
        with pytest.raises(ValueError):
            sample_periodic(toy, 1, "nearest")


def test_word_file_round_trip(tmp_path, toy):
    x = sample_random(toy, 2, 4, window=(-30, 30))
    path = tmp_path / "x.word"
    write_word(path, x.window, {"level": 2, "offset": x.offset})
    word, meta = read_word(path)
    assert word == x.window
    assert meta == {"level": "2", "offset": str(x.offset)}


@pytest.mark.parametrize("text", ["", "# only comments\n", "0 1/2\n2 1/2\n"])
def test_word_file_errors(tmp_path, text):
    path = tmp_path / "bad.word"
    path.write_text(text)
    with pytest.raises(WindowError):
        read_word(path)
