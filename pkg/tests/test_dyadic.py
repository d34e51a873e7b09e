from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hilbert_subshift.dyadic import (
    ONE,
    ZERO,
    DyadicInterval,
    DyadicRational,
    contains,
    piece_containing,
    subdivide,
)

UNIT = DyadicInterval.unit()


def iv(lo, hi):
    return DyadicInterval(DyadicRational.from_fraction(F(lo)), DyadicRational.from_fraction(F(hi)))


class TestDyadicRational:
    def test_canonical_form(self):
        assert DyadicRational(4, 3) == DyadicRational(1, 1)
        assert (DyadicRational(4, 3).numerator, DyadicRational(4, 3).exponent) == (1, 1)
        assert DyadicRational(0, 9).exponent == 0
        assert DyadicRational(3, -2) == 12

    def test_compares_with_fractions(self):
        assert DyadicRational(1, 1) == F(1, 2)
        assert DyadicRational(1, 2) < F(1, 3) < DyadicRational(1, 1)
        assert hash(DyadicRational(3, 2)) == hash(F(3, 4))

    def test_arithmetic(self):
        assert DyadicRational(1, 1) + DyadicRational(1, 2) == F(3, 4)
        assert DyadicRational(1, 1) - DyadicRational(1, 2) == F(1, 4)
        assert -DyadicRational(1, 1) == F(-1, 2)
        assert DyadicRational(3, 2).scale_pow2(-3) == F(3, 32)

    def test_parse_and_str(self):
        assert DyadicRational.parse("3/2^4") == F(3, 16)
        assert DyadicRational.parse("5/8") == F(5, 8)
        assert DyadicRational.parse("7") == 7
        assert str(DyadicRational(3, 4)) == "3/2^4"
        assert str(ONE) == "1"
        with pytest.raises(ValueError):
            DyadicRational.parse("1/3")

    def test_from_fraction_rejects_non_dyadic(self):
        with pytest.raises(ValueError):
            DyadicRational.from_fraction(F(2, 3))

    @given(st.integers(-10**6, 10**6), st.integers(0, 40))
    def test_round_trip(self, p, e):
        d = DyadicRational(p, e)
        assert d.to_fraction() == F(p, 2**e)
        assert DyadicRational.from_fraction(d.to_fraction()) == d
        assert DyadicRational.parse(str(d)) == d


class TestSubdivide:
    def test_halves_of_unit(self):
        assert subdivide(UNIT, 2, 1) == iv(0, F(1, 2))
        assert subdivide(UNIT, 2, 2) == iv(F(1, 2), 1)

    def test_quarter(self):
        assert subdivide(iv(F(1, 2), 1), 4, 1) == iv(F(1, 2), F(5, 8))

    def test_bad_arguments(self):
        with pytest.raises(IndexError):
            subdivide(UNIT, 4, 0)
        with pytest.raises(IndexError):
            subdivide(UNIT, 4, 5)
        with pytest.raises(ValueError):
            subdivide(UNIT, 3, 1)

    def test_interval_validation(self):
        with pytest.raises(ValueError):
            iv(F(1, 2), F(1, 4))
        with pytest.raises(ValueError):
            iv(0, 2)

    @given(st.integers(0, 6), st.data())
    def test_pieces_tile_the_interval(self, depth, data):
        # a random dyadic subinterval obtained by nested subdivision
        interval = UNIT
        for _ in range(data.draw(st.integers(0, 4))):
            interval = subdivide(interval, 2, data.draw(st.integers(1, 2)))
        parts = 2**depth
        pieces = [subdivide(interval, parts, i) for i in range(1, parts + 1)]
        assert pieces[0].lo == interval.lo and pieces[-1].hi == interval.hi
        for a, b in zip(pieces, pieces[1:]):
            assert a.hi == b.lo
        for p in pieces:
            assert p.length == interval.length.scale_pow2(-depth)
            assert interval.lo <= p.lo and p.hi <= interval.hi

    @given(st.integers(1, 5), st.integers(1, 5), st.data())
    def test_nesting(self, a, b, data):
        # pieces of pieces are pieces of the finer subdivision
        i = data.draw(st.integers(1, 2**a))
        j = data.draw(st.integers(1, 2**b))
        nested = subdivide(subdivide(UNIT, 2**a, i), 2**b, j)
        assert nested == subdivide(UNIT, 2 ** (a + b), (i - 1) * 2**b + j)


class TestContains:
    def test_closed_endpoints(self):
        assert contains(iv(0, F(1, 2)), F(1, 2))
        assert contains(iv(F(1, 2), 1), F(1, 2))
        assert not contains(iv(0, F(1, 2)), F(3, 4))
        assert F(1, 3) in iv(0, F(1, 2))

    def test_piece_containing_tie_break(self):
        assert piece_containing(UNIT, 2, F(1, 2)) == 1
        assert piece_containing(UNIT, 4, F(3, 4)) == 3
        assert piece_containing(UNIT, 4, ONE.to_fraction()) == 4
        assert piece_containing(UNIT, 4, ZERO.to_fraction()) == 1
        assert piece_containing(UNIT, 4, F(1, 3)) == 2
        with pytest.raises(ValueError):
            piece_containing(iv(0, F(1, 2)), 2, F(3, 4))

    @given(st.fractions(min_value=0, max_value=1), st.integers(0, 6))
    def test_piece_containing_is_smallest(self, x, depth):
        parts = 2**depth
        k = piece_containing(UNIT, parts, x)
        assert contains(subdivide(UNIT, parts, k), x)
        assert all(not contains(subdivide(UNIT, parts, i), x) for i in range(1, k))
