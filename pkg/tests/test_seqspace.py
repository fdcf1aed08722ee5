from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import rationals
from csli.errors import StructuralError
from csli.gallery import seq_u_path, seq_w0, seq_w_path, seq_y0, seq_y_path
from csli.seqspace import (
    Affine,
    SeqPath,
    SeqPoint,
    in_Z,
    path_fiber_problem,
    path_problem,
    seq_apply,
    seq_in_X,
    seq_preimage_in_Z,
)

H = Fraction(1, 2)


@st.composite
def z_points(draw):
    """Points of Z: anything in [0, 1) up to index 0, at most 1/2 beyond."""
    any_coord, low_coord = rationals(0, Fraction(7, 8), 8), rationals(0, H, 8)
    lo = draw(st.integers(-3, 0))
    core = [draw(any_coord) for _ in range(lo, 1)] + draw(st.lists(low_coord, max_size=3))
    return SeqPoint(draw(any_coord), tuple(core), lo, draw(low_coord))


def naive_apply(x, lo=-6, hi=6):
    """Coordinates of the image over a window, straight from the formula."""
    return [(2 * x[1]) % 1 if m == 0 else x[m + 1] for m in range(lo, hi + 1)]


class TestPoints:
    def test_normalization(self):
        assert SeqPoint(0, (0, 0, H), -2, H) == SeqPoint(0, (), 0, H)
        assert SeqPoint.constant(H) == SeqPoint(H, (H, H), 5, H)
        assert seq_y0()[0] == 0 and seq_y0()[1] == H

    def test_bad_coordinate(self):
        with pytest.raises(StructuralError):
            SeqPoint(1)

    def test_in_Z(self):
        assert in_Z(seq_y0()) and in_Z(seq_w0())
        assert not in_Z(SeqPoint(0, (Fraction(3, 4),), 1, 0))
        assert in_Z(SeqPoint(0, (Fraction(3, 4),), 0, 0))

    def test_apply_examples(self):
        assert seq_apply(seq_y0()) == seq_y0()
        assert seq_apply(seq_w0()) == seq_y0()
        assert seq_apply(SeqPoint(0, (Fraction(1, 3),), 1, 0)) == SeqPoint(0, (Fraction(2, 3),), 0, 0)

    @given(z_points())
    def test_apply_matches_formula(self, x):
        assert seq_apply(x).window(-6, 6) == naive_apply(x)


class TestFibers:
    def test_fixed_point_fiber(self):
        assert set(seq_preimage_in_Z(seq_y0())) == {seq_y0(), seq_w0()}

    @given(z_points())
    def test_fiber_size(self, y):
        # 2 w_1 = y_0 mod 1 with w_1 in [0, 1/2] has two solutions only for y_0 = 0
        fiber = seq_preimage_in_Z(y)
        assert len(fiber) == (2 if y[0] == 0 else 1)
        for w in fiber:
            assert in_Z(w) and seq_apply(w) == y

    @given(z_points())
    def test_every_point_of_Z_has_deep_preimages(self, x):
        m = seq_in_X(x, 6)
        assert m.member and len(m.chain) == 7
        for a, b in zip(m.chain, m.chain[1:]):
            assert seq_apply(b) == a

    def test_outside_Z_is_not_in_X(self):
        assert not seq_in_X(SeqPoint(0, (Fraction(3, 4),), 1, 0), 3).member


def circle_gap(a, b):
    d = (a - b) % 1
    return min(d, 1 - d)


class TestPaths:
    @pytest.mark.parametrize("build", [seq_y_path, seq_u_path, seq_w_path])
    def test_gallery_paths_stay_in_Z_with_lone_fibers(self, build):
        path = build()
        assert path_problem(path) is None
        assert path_fiber_problem(path) is None

    def test_limits(self):
        assert seq_y_path().limit() == seq_y0()
        assert seq_u_path().limit() == seq_y0()
        assert seq_w_path().limit() == seq_w0()

    @pytest.mark.parametrize("build", [seq_y_path, seq_u_path, seq_w_path])
    def test_points_approach_the_limit(self, build):
        path = build()
        eps = Fraction(1, 1000)
        t = path.t_hi - eps if path.limit_end == "hi" else path.t_lo + eps
        near, lim = path.at(t), path.limit()
        assert all(circle_gap(a, b) <= eps for a, b in zip(near.window(-5, 5), lim.window(-5, 5)))

    def test_image_of_w_path_is_u_path(self):
        for t in (Fraction(1, 7), Fraction(1, 4), Fraction(2, 5)):
            assert seq_apply(seq_w_path().at(t)) == seq_u_path().at(t)

    def test_reparametrized(self):
        path = seq_y_path().reparametrized(2)
        assert (path.t_lo, path.t_hi) == (0, H)
        assert path.at(Fraction(1, 5)) == seq_y_path().at(Fraction(2, 5))
        assert path.limit() == seq_y0()

    def test_path_leaving_Z(self):
        bad = SeqPath(Affine(0, 0), (), 1, Affine(1, 0), 0, 1, "lo")
        assert "1/2" in path_problem(bad)
        wraps = SeqPath(Affine(1, H), (), 1, Affine(0, 0), 0, 1, "lo")
        assert "leaves [0, 1)" in path_problem(wraps)

    def test_constant_zero_coordinate_shares_fibers(self):
        stuck = SeqPath(Affine(1, 0), (), 1, Affine(0, 0), 0, H, "lo")
        assert path_problem(stuck) is None
        assert "integer" in path_fiber_problem(stuck)

    def test_at_outside_interval(self):
        with pytest.raises(StructuralError):
            seq_y_path().at(1)
        with pytest.raises(StructuralError):
            SeqPath(Affine(1, 0), (), 0, Affine(0, 0), 1, 1)
