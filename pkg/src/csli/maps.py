"""Piecewise monotone affine maps on ordered cut-line spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import StructuralError
from .space import (
    ExtPoint,
    Interval,
    OrderedCutSpace,
    Side,
    as_fraction,
)

_SWAP = {Side.MINUS: Side.PLUS, Side.PLUS: Side.MINUS, Side.INTERIOR: Side.INTERIOR}


@dataclass(frozen=True)
class Piece:
    domain: Interval
    target: str
    slope: Fraction
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", as_fraction(self.slope))
        object.__setattr__(self, "offset", as_fraction(self.offset))
        if self.slope == 0:
            raise StructuralError("piece slopes must be nonzero")
        if not (self.domain.lo_closed and self.domain.hi_closed):
            raise StructuralError("piece domains are closed intervals")

    @property
    def source(self) -> str:
        return self.domain.component

    @property
    def degenerate(self) -> bool:
        return self.domain.is_point

    def value_at(self, v: Fraction) -> Fraction:
        return self.slope * v + self.offset

    def inverse_value(self, w: Fraction) -> Fraction:
        return (w - self.offset) / self.slope


def _infinite_image(piece: Piece, side: Side) -> ExtPoint:
    up = (side is Side.POS_INF) == (piece.slope > 0)
    return ExtPoint.pos_inf(piece.target) if up else ExtPoint.neg_inf(piece.target)


@dataclass(frozen=True)
class PiecewiseMonotoneMap:
    """A candidate CSLI map.

    ``overrides`` lists ``(point, image)`` pairs that take precedence over the
    pieces; they carry images the side rule cannot produce, such as a doubled
    point sent to a non-doubled value.
    """

    space: OrderedCutSpace
    pieces: tuple[Piece, ...]
    overrides: tuple[tuple[ExtPoint, ExtPoint], ...] = ()
    target_space: OrderedCutSpace | None = None

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        ovr = dict(self.overrides)
        if len(ovr) != len(self.overrides):
            raise StructuralError("duplicate override points")
        object.__setattr__(self, "overrides", tuple(sorted(ovr.items())))
        for p in self.pieces:
            self.space.check_point(p.domain.lo)
            self.space.check_point(p.domain.hi)
            self.target.component(p.target)
        for x, y in self.overrides:
            self.space.check_point(x)
            self.target.check_point(y)
        for i, a in enumerate(self.pieces):
            for b in self.pieces[i + 1 :]:
                if a.source != b.source:
                    continue
                lo = max(a.domain.lo, b.domain.lo)
                hi = min(a.domain.hi, b.domain.hi)
                if lo.key < hi.key:
                    raise StructuralError(f"pieces overlap on [{lo}, {hi}]")

    @property
    def target(self) -> OrderedCutSpace:
        return self.target_space or self.space

    @cached_property
    def override_map(self) -> dict[ExtPoint, ExtPoint]:
        return dict(self.overrides)

    # -- evaluation through one piece --------------------------------------

    def formula(self, piece: Piece, x: ExtPoint) -> ExtPoint | None:
        """The side-rule image of ``x`` under ``piece``; None when not a legal point."""
        if not x.is_finite:
            y = _infinite_image(piece, x.side)
            return y if self.target.contains(y) else None
        w = piece.value_at(x.value)
        cut = self.target.is_cut(piece.target, w)
        if x.side is Side.INTERIOR:
            if cut:
                return None
            side = Side.INTERIOR
        else:
            if not cut:
                return None
            side = x.side if piece.slope > 0 else _SWAP[x.side]
        y = ExtPoint(piece.target, w, side)
        return y if self.target.contains(y) else None

    def limit(self, piece: Piece, x: ExtPoint, from_left: bool) -> ExtPoint | None:
        """Limit of the piece formula as points of the piece approach ``x`` from one side."""
        if not x.is_finite:
            y = _infinite_image(piece, x.side)
            return y if self.target.contains(y) else None
        w = piece.value_at(x.value)
        from_below = from_left == (piece.slope > 0)
        if self.target.is_cut(piece.target, w):
            side = Side.MINUS if from_below else Side.PLUS
        else:
            side = Side.INTERIOR
        y = ExtPoint(piece.target, w, side)
        return y if self.target.contains(y) else None

    def image_points(self, piece: Piece, x: ExtPoint) -> list[ExtPoint]:
        """Every target point the piece attaches to ``x``: formula and one-sided limits."""
        out = [self.formula(piece, x), self.limit(piece, x, True), self.limit(piece, x, False)]
        return [y for y in out if y is not None]

    def pieces_at(self, x: ExtPoint) -> list[int]:
        return [i for i, p in enumerate(self.pieces) if p.domain.contains(x)]

    # -- public evaluation -------------------------------------------------

    def apply(self, x: ExtPoint) -> ExtPoint:
        if x in self.override_map:
            return self.override_map[x]
        if not self.space.contains(x):
            raise StructuralError(f"{x} is not in the source space")
        idx = self.pieces_at(x)
        if not idx:
            raise StructuralError(f"no piece or override governs {x}")
        images = {self.formula(self.pieces[i], x) for i in idx}
        if None in images:
            raise StructuralError(f"the side rule gives no legal image for {x}; override it")
        if len(images) > 1:
            raise StructuralError(f"adjacent pieces disagree at {x}: {sorted(images)}")
        return images.pop()

    __call__ = apply

    def governing(self, x: ExtPoint) -> int | None:
        """Index of the piece governing ``x``; None for override points."""
        if x in self.override_map:
            return None
        idx = self.pieces_at(x)
        return idx[0] if idx else None

    def source_candidates(self, piece: Piece, y: ExtPoint) -> list[ExtPoint]:
        """Points of the piece domain whose value solves the piece equation for ``y``."""
        if y.component != piece.target:
            return []
        if not y.is_finite:
            cands = [
                ExtPoint(piece.source, None, s)
                for s in (Side.NEG_INF, Side.POS_INF)
                if _infinite_image(piece, s) == y
            ]
        else:
            cands = self.space.points_with_value(piece.source, piece.inverse_value(y.value))
        return [c for c in cands if self.space.contains(c) and piece.domain.contains(c)]

    def preimage(self, y: ExtPoint) -> tuple[ExtPoint, ...]:
        found = {x for x, img in self.overrides if img == y}
        for piece in self.pieces:
            for x in self.source_candidates(piece, y):
                if x in self.override_map or x in found:
                    continue
                try:
                    if self.apply(x) == y:
                        found.add(x)
                except StructuralError:
                    continue
        return tuple(sorted(found))

    # -- partitions ---------------------------------------------------------

    def coverage_gap(self) -> ExtPoint | None:
        """A source point no rule governs, or None when the pieces cover the space."""
        for cell in self.space.all_cells(self.source_critical()):
            x = self.space.sample(cell)
            if x not in self.override_map and not self.pieces_at(x):
                return x
        return None

    def source_critical(self) -> set[ExtPoint]:
        pts = set(self.override_map)
        for p in self.pieces:
            pts.add(p.domain.lo)
            pts.add(p.domain.hi)
        return pts

    def target_critical(self) -> set[ExtPoint]:
        pts = set(self.override_map.values())
        for p in self.pieces:
            for end in (p.domain.lo, p.domain.hi):
                pts.update(self.image_points(p, end))
            for x in self.override_map:
                if p.domain.contains(x):
                    pts.update(self.image_points(p, x))
        return pts

    def images_of(self, points) -> set[ExtPoint]:
        """Target points attached to the given source points by any piece."""
        out = set()
        for x in points:
            if x in self.override_map:
                out.add(self.override_map[x])
            for p in self.pieces:
                if x.component == p.source:
                    # also the value-level images, since a source value with
                    # an open side may sit at a piece boundary
                    for z in self.space.points_with_value(p.source, x.value) if x.is_finite else [x]:
                        if p.domain.contains(z):
                            out.update(self.image_points(p, z))
        return out

    def pullbacks_of(self, points) -> set[ExtPoint]:
        """Source points whose piece value matches one of the given target points."""
        out = set()
        for y in points:
            out.update(x for x, img in self.overrides if img == y)
            for p in self.pieces:
                if y.component != p.target:
                    continue
                if y.is_finite:
                    v = p.inverse_value(y.value)
                    out.update(
                        z for z in self.space.points_with_value(p.source, v) if p.domain.contains(z)
                    )
                else:
                    out.update(self.source_candidates(p, y))
        return out

    def flatten(self) -> dict:
        """Debug dump with exact rationals as numerator/denominator pairs."""

        def q(v):
            return [v.numerator, v.denominator]

        return {
            "pieces": [
                {
                    "domain": str(p.domain),
                    "target": p.target,
                    "slope": q(p.slope),
                    "offset": q(p.offset),
                }
                for p in self.pieces
            ],
            "overrides": [[str(x), str(y)] for x, y in self.overrides],
        }


def identity_map(space: OrderedCutSpace) -> PiecewiseMonotoneMap:
    return PiecewiseMonotoneMap(
        space, tuple(Piece(space.whole(c.id), c.id, 1, 0) for c in space.components)
    )


@dataclass(frozen=True)
class ContinuityViolation:
    at: ExtPoint
    expected: ExtPoint | None
    found: ExtPoint | None

    def __str__(self):
        return f"discontinuous at {self.at}: limit {self.expected}, value {self.found}"


def check_continuity(phi: PiecewiseMonotoneMap) -> ContinuityViolation | None:
    """None when continuous, else the first violation found.

    Pieces are affine, so only piece endpoints and override points inside a
    piece need checking: each one-sided limit taken inside a piece must equal
    the point's image. Doubled points bound one side only and impose nothing
    on their twin.
    """
    space = phi.space
    critical = sorted(phi.source_critical())
    for x in critical:
        try:
            value = phi.apply(x)
        except StructuralError:
            return ContinuityViolation(x, None, None)
        for piece in phi.pieces:
            dom = piece.domain
            if piece.degenerate or not dom.contains(x):
                continue
            if x != dom.lo and space.approachable_from_left(x):
                lim = phi.limit(piece, x, from_left=True)
                if lim != value:
                    return ContinuityViolation(x, lim, value)
            if x != dom.hi and space.approachable_from_right(x):
                lim = phi.limit(piece, x, from_left=False)
                if lim != value:
                    return ContinuityViolation(x, lim, value)
    return None


def _pull_back_range(
    g: PiecewiseMonotoneMap, piece: Piece, window: Interval
) -> Interval | None:
    """The sub-interval of ``piece.domain`` whose attached images land in ``window``.

    Image points are compared through ``formula`` where legal and through the
    one-sided limits otherwise, which is monotone in the point order.
    """
    space = g.space
    dom = piece.domain
    up = piece.slope > 0

    def img(x: ExtPoint) -> ExtPoint | None:
        y = g.formula(piece, x)
        if y is None:
            # a point with no legal side-rule image: use the limit from inside the piece
            y = g.limit(piece, x, from_left=(x != dom.lo))
        return y

    def inside(x: ExtPoint) -> bool:
        y = img(x)
        return y is not None and window.contains(y)

    cands = {dom.lo, dom.hi}
    for end in (window.lo, window.hi):
        if end.component != piece.target:
            continue
        if end.is_finite:
            cands.update(space.points_with_value(piece.source, piece.inverse_value(end.value)))
        else:
            cands.update(g.source_candidates(piece, end))
    # a neighbour of each candidate covers open window ends
    extra = set()
    for c in cands:
        if c.side is Side.MINUS:
            extra.add(ExtPoint(c.component, c.value, Side.PLUS))
        elif c.side is Side.PLUS:
            extra.add(ExtPoint(c.component, c.value, Side.MINUS))
    cands |= extra
    cands = sorted(c for c in cands if space.contains(c) and dom.contains(c) and inside(c))
    if not cands:
        return None
    return Interval(piece.source, cands[0], cands[-1])


def compose(f: PiecewiseMonotoneMap, g: PiecewiseMonotoneMap) -> PiecewiseMonotoneMap:
    """The flattened map ``x -> f(g(x))``."""
    if g.target != f.space:
        raise StructuralError("spaces do not match for composition")
    pieces: list[Piece] = []
    point_rules: dict[ExtPoint, ExtPoint] = {}
    for p in g.pieces:
        for q in f.pieces:
            if q.source != p.target:
                continue
            iv = _pull_back_range(g, p, q.domain)
            if iv is None:
                continue
            if iv.is_point:
                continue
            pieces.append(
                Piece(iv, q.target, q.slope * p.slope, q.slope * p.offset + q.offset)
            )
    draft = PiecewiseMonotoneMap(g.space, tuple(pieces), target_space=f.target)

    critical = set(g.source_critical()) | draft.source_critical()
    critical |= g.pullbacks_of(f.source_critical())
    for x in sorted(critical):
        true = f.apply(g.apply(x))
        try:
            if draft.apply(x) == true:
                continue
        except StructuralError:
            pass
        point_rules[x] = true
    return PiecewiseMonotoneMap(
        g.space, tuple(pieces), tuple(point_rules.items()), target_space=f.target_space
    )


def difference_witness(f: PiecewiseMonotoneMap, g: PiecewiseMonotoneMap) -> ExtPoint | None:
    """A source point where ``f`` and ``g`` differ, or None when they are the same map."""
    if f.space != g.space:
        raise StructuralError("maps have different sources")
    for cell in f.space.all_cells(f.source_critical() | g.source_critical()):
        if cell.is_point:
            if f.apply(cell.lo) != g.apply(cell.lo):
                return cell.lo
            continue
        x = f.space.sample(cell)
        p, q = f.pieces[f.governing(x)], g.pieces[g.governing(x)]
        if (p.target, p.slope, p.offset) != (q.target, q.slope, q.offset):
            return x
    return None


def same_map(f: PiecewiseMonotoneMap, g: PiecewiseMonotoneMap) -> bool:
    return difference_witness(f, g) is None
