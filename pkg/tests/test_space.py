from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from csli.errors import StructuralError, UndecidableError
from csli.gallery import doubled_line, dyadic_space
from csli.space import (
    Component,
    CutSpec,
    ExtPoint,
    Interval,
    Ordering,
    OrderedCutSpace,
    Side,
    adjacent,
    compare,
    has_immediate_predecessor,
    has_immediate_successor,
    is_clopen,
    merge_runs,
    normalize,
    union,
)


def pt(v, side=Side.INTERIOR, comp="X"):
    return ExtPoint.finite(comp, v, side)


class TestOrdering:
    def test_doubled_pair_is_adjacent_in_order(self):
        assert compare(pt(0, "-"), pt(0, "+")) is Ordering.LESS
        assert has_immediate_successor(pt(0, "-"))
        assert has_immediate_predecessor(pt(0, "+"))
        assert not has_immediate_successor(pt(Fraction(1, 2)))

    def test_infinities_bound_everything(self):
        assert compare(ExtPoint.neg_inf("X"), pt(-10**6)) is Ordering.LESS
        assert compare(ExtPoint.pos_inf("X"), pt(10**6, "+")) is Ordering.GREATER

    def test_components_do_not_compare(self):
        assert compare(pt(0, comp="A"), pt(0, comp="B")) is Ordering.INCOMPARABLE

    @given(rationals(), rationals())
    def test_order_follows_values(self, a, b):
        expected = Ordering.LESS if a < b else Ordering.GREATER if a > b else Ordering.EQUAL
        assert compare(pt(a), pt(b)) is expected

    def test_str(self):
        assert str(pt(0, "-")) == "X:0-"
        assert str(ExtPoint.pos_inf("X")) == "X:+inf"


class TestCuts:
    def test_integers_at_most(self):
        c = CutSpec.integers_at_most(0)
        assert c.is_cut(0) and c.is_cut(-3)
        assert not c.is_cut(1) and not c.is_cut(Fraction(-1, 2))
        assert c.cuts_between(Fraction(-5, 2), 3) == [-2, -1, 0]

    def test_dyadics_are_dense(self):
        c = CutSpec.all_dyadics()
        assert c.is_cut(Fraction(3, 8)) and not c.is_cut(Fraction(1, 3))
        assert c.has_cut_strictly_between(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10**9))
        with pytest.raises(UndecidableError):
            c.cuts_between(0, 1)

    def test_points_need_correct_sides(self, X):
        assert X.contains(pt(0, "-")) and not X.contains(pt(0))
        assert X.contains(pt(1)) and not X.contains(pt(1, "+"))
        with pytest.raises(StructuralError):
            X.point("X", -1)

    def test_bad_space_rejected(self):
        with pytest.raises(StructuralError):
            OrderedCutSpace((Component("X", pt(1), pt(0), CutSpec.finite()),))


class TestTopology:
    def test_sides(self, X):
        assert not X.approachable_from_left(pt(0, "+"))
        assert X.approachable_from_right(pt(0, "+"))
        assert X.approachable_from_left(pt(0, "-"))
        assert not X.approachable_from_right(pt(0, "-"))
        assert not X.approachable_from_left(X.neg_inf("X"))
        assert X.approachable_from_left(X.pos_inf("X"))

    def test_component_end_at_doubled_point(self):
        D = dyadic_space()
        left = pt(0, "+", "X1")
        assert not D.approachable_from_left(left)
        assert D.approachable_from_right(left)

    def test_cells_partition(self, X):
        cells = X.cells("X", [pt(0, "-"), pt(0, "+"), pt(1)])
        shown = [str(c) for c in cells]
        assert shown == [
            "{X:-inf}", "(X:-inf, 0-)", "{X:0-}", "{X:0+}", "(X:0+, 1)", "{X:1}", "(X:1, +inf)", "{X:+inf}",
        ]
        for c in cells:
            assert c.contains(X.sample(c))


class TestIntervals:
    def test_normalize_open_end_at_doubled_point(self, X):
        iv = normalize(X, Interval("X", pt(0, "-"), pt(1), False, True))
        assert iv == Interval("X", pt(0, "+"), pt(1))

    def test_normalize_empty(self, X):
        assert normalize(X, Interval("X", pt(0, "-"), pt(0, "+"), False, False)) is None

    def test_adjacent_across_doubled_gap(self):
        a = Interval("X", ExtPoint.neg_inf("X"), pt(0, "-"))
        b = Interval("X", pt(0, "+"), ExtPoint.pos_inf("X"))
        assert adjacent(a, b)
        assert not adjacent(b, a)

    def test_merge_runs_rejects_overlap(self, X):
        with pytest.raises(StructuralError):
            merge_runs(X, [Interval("X", pt(1), pt(3)), Interval("X", pt(2), pt(4))])

    def test_union_joins_overlap(self, X):
        out = union(X, [Interval("X", pt(1), pt(3)), Interval("X", pt(2), pt(4)), Interval("X", pt(4), pt(5), False)])
        assert out == [Interval("X", pt(1), pt(5))]


class TestClopen:
    def test_half_line_split_at_doubled_point_is_clopen(self, X):
        assert is_clopen([Interval("X", X.neg_inf("X"), pt(0, "-"))], X)
        assert is_clopen([Interval("X", pt(-3, "+"), pt(0, "-"))], X)

    def test_interval_with_ordinary_end_is_not(self, X):
        assert not is_clopen([Interval("X", pt(0, "+"), pt(1))], X)
        assert not is_clopen([Interval("X", pt(1), X.pos_inf("X"), False)], X)

    def test_whole_space_is_clopen(self, X):
        assert is_clopen([X.whole("X")], X)

    def test_dense_cuts_still_decided(self):
        D = dyadic_space()
        assert is_clopen([Interval("X1", pt(0, "+", "X1"), pt(Fraction(1, 2), "-", "X1"))], D)
        assert not is_clopen([Interval("X1", pt(0, "+", "X1"), pt(Fraction(1, 3), comp="X1"))], D)

    @given(st.integers(-5, 0), st.integers(-5, 0))
    def test_doubled_integer_ends(self, a, b):
        # [a+, b-] is clopen, and empty (so still clopen) when a == b
        X = doubled_line()
        a, b = min(a, b), max(a, b)
        assert is_clopen([Interval("X", pt(a, "+"), pt(b, "-"))], X)
        assert not is_clopen([Interval("X", pt(a, "+"), pt(Fraction(1, 2)))], X)
