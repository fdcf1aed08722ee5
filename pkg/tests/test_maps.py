from fractions import Fraction

import pytest

import oracles
from csli.errors import StructuralError
from csli.gallery import (
    admiss_csli_map,
    doubled_line,
    dyadic_space,
    dyadic_translation,
    line_translation,
    notadmiss2_map,
)
from csli.maps import Piece, PiecewiseMonotoneMap, check_continuity, compose, identity_map, same_map
from csli.space import ExtPoint, Interval, Side

H = Fraction(1, 2)


def pt(v, side=Side.INTERIOR, comp="X"):
    return ExtPoint.finite(comp, v, side)


def test_admiss_values(X):
    phi = admiss_csli_map()
    assert phi.apply(pt(0, "-")) == pt(1)
    assert phi.apply(pt(-H)) == pt(H)
    assert phi.apply(pt(-1, "-")) == pt(0, "-")
    assert phi.apply(pt(-1, "+")) == pt(0, "+")
    assert phi.apply(X.pos_inf("X")) == X.pos_inf("X")
    assert phi(pt(3)) == pt(3)


def test_admiss_fibers():
    phi = admiss_csli_map()
    assert phi.preimage(pt(1)) == (pt(0, "-"), pt(1))
    assert phi.preimage(pt(H)) == (pt(-H), pt(H))
    assert phi.preimage(pt(0, "+")) == (pt(-1, "+"), pt(0, "+"))
    assert phi.preimage(pt(0, "-")) == (pt(-1, "-"),)
    assert phi.preimage(pt(5)) == (pt(5),)


@pytest.mark.parametrize("build", [admiss_csli_map, notadmiss2_map, lambda: dyadic_translation(H), lambda: line_translation(3)])
def test_apply_and_preimage_match_brute_force(build):
    phi = build()
    probes = oracles.probe_points(phi.space, [-2, -1, -H, 0, Fraction(1, 4), H, 1, 2])
    for x in probes:
        assert phi.apply(x) == oracles.image(phi, x)
    for y in oracles.probe_points(phi.target, [-2, -1, -H, 0, Fraction(1, 4), H, 1, 2]):
        assert set(phi.preimage(y)) == oracles.preimage(phi, y)


def test_dyadic_translation_spills_into_X1():
    phi = dyadic_translation(H)
    assert phi.apply(pt(-Fraction(1, 3), comp="X2")) == pt(Fraction(1, 6), comp="X1")
    assert phi.apply(pt(-H, "+", "X3")) == pt(0, "+", "X1")
    assert phi.apply(pt(-H, "-", "X3")) == pt(0, "-", "X3")
    assert phi.apply(pt(0, "-", "X2")) == pt(H, "-", "X1")
    assert len(phi.preimage(pt(Fraction(1, 3), comp="X1"))) == 2


def test_non_dyadic_step_rejected():
    with pytest.raises(ValueError):
        dyadic_translation(Fraction(1, 3))


def test_overlapping_pieces_rejected(X):
    whole = X.whole("X")
    with pytest.raises(StructuralError):
        PiecewiseMonotoneMap(X, (Piece(whole, "X", 1, 0), Piece(Interval("X", pt(0, "+"), pt(1)), "X", 1, 0)))


def test_illegal_image_is_an_error(X):
    # sending the doubled point 0- by a shift of 1/2 would need a doubled 1/2
    phi = PiecewiseMonotoneMap(X, (Piece(X.whole("X"), "X", 1, H),))
    with pytest.raises(StructuralError):
        phi.apply(pt(0, "-"))


def test_coverage_gap_detected(X):
    phi = PiecewiseMonotoneMap(X, (Piece(Interval("X", X.neg_inf("X"), pt(0, "-")), "X", 1, 0),))
    assert phi.coverage_gap() is not None


def test_continuity():
    for phi in (admiss_csli_map(), notadmiss2_map(), dyadic_translation(H)):
        assert check_continuity(phi) is None
    X = doubled_line()
    # jump at 1: identity below, shift above
    jumpy = PiecewiseMonotoneMap(
        X,
        (
            Piece(Interval("X", X.neg_inf("X"), pt(1)), "X", 1, 0),
            Piece(Interval("X", pt(2), X.pos_inf("X")), "X", 1, 0),
            Piece(Interval("X", pt(1), pt(2)), "X", 1, 0),
        ),
        ((pt(1), pt(5)),),
    )
    v = check_continuity(jumpy)
    assert v is not None and v.at == pt(1)


def test_compose_translations():
    for d, e in [(H, H), (Fraction(1, 4), H), (Fraction(3, 4), Fraction(1, 4))]:
        assert same_map(compose(dyadic_translation(d), dyadic_translation(e)), dyadic_translation(d + e))
    assert not same_map(dyadic_translation(H), dyadic_translation(Fraction(1, 4)))


def test_compose_agrees_pointwise():
    phi = admiss_csli_map()
    sq = compose(phi, phi)
    for x in oracles.probe_points(phi.space, [-3, -2, -1, -H, 0, H, 1, 2]):
        assert sq.apply(x) == phi.apply(phi.apply(x))
    assert check_continuity(sq) is None


def test_identity_composition_is_neutral():
    phi = dyadic_translation(Fraction(1, 4))
    assert same_map(compose(phi, identity_map(phi.space)), phi)
    assert same_map(compose(identity_map(phi.space), phi), phi)
