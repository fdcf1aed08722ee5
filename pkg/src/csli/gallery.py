"""The example systems: builders for their spaces, maps, cocycles and certificates."""

from __future__ import annotations

from fractions import Fraction

from .certificates import SEQUENCE_SYSTEM, CutPath, NonAdmissibilityCertificate
from .functions import PiecewiseFunction
from .maps import Piece, PiecewiseMonotoneMap
from .poly import Poly
from .seqspace import Affine, SeqPath, SeqPoint
from .space import (
    Component,
    CutSpec,
    ExtPoint,
    Interval,
    OrderedCutSpace,
    Side,
    as_fraction,
)
from .system import FamilySpec, SystemDescription, register_family

LINE = "X"


def doubled_line() -> OrderedCutSpace:
    """The extended line with every integer n <= 0 doubled."""
    return OrderedCutSpace(
        (
            Component(
                LINE,
                ExtPoint.neg_inf(LINE),
                ExtPoint.pos_inf(LINE),
                CutSpec.integers_at_most(0),
            ),
        )
    )


def _pt(value, side=Side.INTERIOR, comp=LINE) -> ExtPoint:
    return ExtPoint.finite(comp, value, side)


def admiss_csli_map() -> PiecewiseMonotoneMap:
    """Shift by one below 0-, identity from 0+ on, and 0- sent to 1."""
    X = doubled_line()
    lo_half = Interval(LINE, X.neg_inf(LINE), _pt(0, "-"))
    hi_half = Interval(LINE, _pt(0, "+"), X.pos_inf(LINE))
    return PiecewiseMonotoneMap(
        X,
        (Piece(lo_half, LINE, 1, 1), Piece(hi_half, LINE, 1, 0)),
        ((_pt(0, "-"), _pt(1)),),
    )


def notadmiss2_map() -> PiecewiseMonotoneMap:
    """Shift by one everywhere, with both 0- and 0+ sent to 1."""
    X = doubled_line()
    lo_half = Interval(LINE, X.neg_inf(LINE), _pt(0, "-"))
    hi_half = Interval(LINE, _pt(0, "+"), X.pos_inf(LINE))
    return PiecewiseMonotoneMap(
        X,
        (Piece(lo_half, LINE, 1, 1), Piece(hi_half, LINE, 1, 1)),
        ((_pt(0, "-"), _pt(1)), (_pt(0, "+"), _pt(1))),
    )


# -- the dyadic three-component space ----------------------------------------

POS = "X1"
HAT = "X2"
TILDE = "X3"


def dyadic_space() -> OrderedCutSpace:
    """``[0+, +inf]`` plus two copies of ``[-inf, 0-]``, all dyadics doubled."""
    dy = CutSpec.all_dyadics()
    return OrderedCutSpace(
        (
            Component(POS, _pt(0, "+", POS), ExtPoint.pos_inf(POS), dy),
            Component(HAT, ExtPoint.neg_inf(HAT), _pt(0, "-", HAT), dy),
            Component(TILDE, ExtPoint.neg_inf(TILDE), _pt(0, "-", TILDE), dy),
        )
    )


def dyadic_translation(d) -> PiecewiseMonotoneMap:
    """Translation by a positive dyadic ``d``; the two negative copies spill into X1."""
    d = as_fraction(d)
    if d <= 0 or d.denominator & (d.denominator - 1):
        raise ValueError(f"{d} is not a positive dyadic rational")
    X = dyadic_space()
    pieces = [Piece(X.whole(POS), POS, 1, d)]
    for comp in (HAT, TILDE):
        below = Interval(comp, ExtPoint.neg_inf(comp), _pt(-d, "-", comp))
        above = Interval(comp, _pt(-d, "+", comp), _pt(0, "-", comp))
        pieces += [Piece(below, comp, 1, d), Piece(above, POS, 1, d)]
    return PiecewiseMonotoneMap(X, tuple(pieces))


def dyadic_line() -> OrderedCutSpace:
    """A single extended line with all dyadics doubled."""
    return OrderedCutSpace(
        (Component(LINE, ExtPoint.neg_inf(LINE), ExtPoint.pos_inf(LINE), CutSpec.all_dyadics()),)
    )


def line_translation(d) -> PiecewiseMonotoneMap:
    """Translation by ``d`` on the dyadic line: a homeomorphism."""
    X = dyadic_line()
    return PiecewiseMonotoneMap(X, (Piece(X.whole(LINE), LINE, 1, as_fraction(d)),))


# -- cocycles, written out by hand -------------------------------------------------


def _iv(lo, hi, comp=LINE, lo_closed=True, hi_closed=True) -> Interval:
    return Interval(comp, lo, hi, lo_closed, hi_closed)


def admiss_csli_cocycle() -> PiecewiseFunction:
    """1 below (-1)-, 0 on [(-1)+, 0-], 1 from 0+ on: continuous but not positive."""
    X = doubled_line()
    return PiecewiseFunction.build(
        X,
        [
            (_iv(X.neg_inf(LINE), _pt(-1, "-")), 1),
            (_iv(_pt(-1, "+"), _pt(0, "-")), 0),
            (_iv(_pt(0, "+"), X.pos_inf(LINE)), 1),
        ],
    )


def admiss_nondeg_cocycle() -> PiecewiseFunction:
    """``x`` on [0+, 1], ``-x`` on [(-1)+, 0-], 1 elsewhere; zero only at 0- and 0+."""
    X = doubled_line()
    return PiecewiseFunction.build(
        X,
        [
            (_iv(X.neg_inf(LINE), _pt(-1, "-")), 1),
            (_iv(_pt(-1, "+"), _pt(0, "-")), Poly.linear(-1, 0)),
            (_iv(_pt(0, "+"), _pt(1)), Poly.linear(1, 0)),
            (_iv(_pt(1), X.pos_inf(LINE), lo_closed=False), 1),
        ],
    )


def dyadic_cocycle(d) -> PiecewiseFunction:
    """1/2 on the two copies of [(-d)+, 0-], whose images overlap in X1; 1 elsewhere."""
    d = as_fraction(d)
    X = dyadic_space()
    spec = [(X.whole(POS), 1)]
    for comp in (HAT, TILDE):
        spec.append((_iv(ExtPoint.neg_inf(comp), _pt(-d, "-", comp), comp), 1))
        spec.append((_iv(_pt(-d, "+", comp), _pt(0, "-", comp), comp), Fraction(1, 2)))
    return PiecewiseFunction.build(X, spec)


def line_cocycle(d) -> PiecewiseFunction:
    return PiecewiseFunction.constant(dyadic_line(), 1)


register_family("dyadic-translation", dyadic_translation, dyadic_cocycle)
register_family("line-translation", line_translation, line_cocycle)


# -- certificates -------------------------------------------------------------------


def notadmiss2_certificate() -> NonAdmissibilityCertificate:
    """0- and 0+ share the fiber over 1; ``-t`` and ``t`` approach them through lone fibers."""
    return NonAdmissibilityCertificate(
        notadmiss2_map(),
        _pt(0, "-"),
        _pt(0, "+"),
        CutPath(LINE, -1, 0, 0, 1, "lo"),
        CutPath(LINE, 1, 0, 0, 1, "lo"),
    )


HALF = Fraction(1, 2)


def seq_y0() -> SeqPoint:
    """0 at every index up to 0, then 1/2: a fixed point of the map."""
    return SeqPoint(0, (), 1, HALF)


def seq_w0() -> SeqPoint:
    """0 up to index 1, then 1/2: the other preimage of ``seq_y0``."""
    return SeqPoint(0, (), 2, HALF)


def seq_y_path() -> SeqPath:
    """``t`` up to index 0, ``t/2`` after; tends to ``seq_y0`` as ``t -> 1`` (mod 1)."""
    return SeqPath(Affine(1, 0), (), 1, Affine(HALF, 0), 0, 1, "hi")


def seq_u_path() -> SeqPath:
    """``t`` up to index 0, ``1/2 - t`` after."""
    return SeqPath(Affine(1, 0), (), 1, Affine(-1, HALF), 0, HALF, "lo")


def seq_w_path() -> SeqPath:
    """The lone preimage of ``seq_u_path``: ``t/2`` inserted at index 1; tends to ``seq_w0``."""
    return SeqPath(Affine(1, 0), (Affine(HALF, 0),), 1, Affine(-1, HALF), 0, HALF, "lo")


def seq_certificate() -> NonAdmissibilityCertificate:
    return NonAdmissibilityCertificate(SEQUENCE_SYSTEM, seq_y0(), seq_w0(), seq_y_path(), seq_w_path())


# -- the gallery ----------------------------------------------------------------------


def _entries() -> dict[str, SystemDescription]:
    X = doubled_line()
    return {
        "admissCSLI": SystemDescription(
            "admissCSLI",
            space=X,
            map=admiss_csli_map(),
            cocycle=admiss_csli_cocycle(),
            construct="branch",
            expected={
                "csli": True,
                "local_homeo": False,
                "necessary_condition": "satisfied",
                "cocycle": "verified",
                "admissible": "yes",
                "degeneracy": "degenerate",
                "strictly_positive_possible": False,
            },
            note="admissible CSLI map that is not a local homeomorphism",
        ),
        "admissnondeg": SystemDescription(
            "admissnondeg",
            space=X,
            map=admiss_csli_map(),
            cocycle=admiss_nondeg_cocycle(),
            construct="branch+repair",
            repair_targets=((_pt(0, "-"), Fraction(0)), (_pt(0, "+"), Fraction(0))),
            expected={
                "csli": True,
                "local_homeo": False,
                "necessary_condition": "satisfied",
                "cocycle": "verified",
                "admissible": "yes",
                "degeneracy": "nondegenerate",
                "strictly_positive_possible": False,
            },
            note="the same map with a cocycle vanishing only at 0- and 0+",
        ),
        "notadmiss2": SystemDescription(
            "notadmiss2",
            space=X,
            map=notadmiss2_map(),
            construct="branch",
            certificate=notadmiss2_certificate(),
            expected={
                "csli": True,
                "local_homeo": False,
                # neither point over 1 is locally open; see the decisions ledger
                "necessary_condition": "violated",
                "certificate": "valid",
                "admissible": "no",
                "strictly_positive_possible": False,
            },
            note="0- and 0+ both sent to 1: no cocycle can exist",
        ),
        "notadmiss-seq": SystemDescription(
            "notadmiss-seq",
            sequence=True,
            certificate=seq_certificate(),
            expected={"certificate": "valid", "admissible": "no"},
            note="shift with doubling on sequences whose positive coordinates stay in [0, 1/2]",
        ),
        "divisadmiss": SystemDescription(
            "divisadmiss",
            space=dyadic_space(),
            family=FamilySpec(
                "dyadic-translation",
                1,
                (2,),
                5,
                check_elements=(Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)),
            ),
            expected={
                "csli": True,
                "local_homeo": True,
                "necessary_condition": "satisfied",
                "cocycle": "verified",
                "identities": True,
                "admissible": "yes",
                "degeneracy": "nondegenerate",
                "strictly_positive_possible": True,
                "dichotomy": "NoneHomeo",
                "collision": ("X2:0-", "X3:0-"),
            },
            note="translations by positive dyadics on three half-lines",
        ),
    }


GALLERY_NAMES = ("admissCSLI", "admissnondeg", "notadmiss2", "notadmiss-seq", "divisadmiss")


def gallery() -> dict[str, SystemDescription]:
    return _entries()


def entry(name: str) -> SystemDescription:
    entries = _entries()
    if name not in entries:
        raise KeyError(f"no gallery entry {name!r}; try one of {', '.join(GALLERY_NAMES)}")
    return entries[name]
