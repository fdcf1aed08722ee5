"""Compact ordered cut-line spaces.

A space is a finite disjoint union of components. Each component is a
compactified order-interval of the rationals in which every value matched by
the component's cut set is doubled into an immediate-neighbour pair
``c- < c+``. Points carry explicit side tags, so every order and topology
query is an exact comparison of tuples.

The topology is the order topology: a point is approachable from the left
unless it is the left end of its component or a ``c+`` (whose immediate
predecessor is ``c-``), and symmetrically on the right.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable

from .errors import StructuralError, UndecidableError


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(value)


class Side(enum.Enum):
    MINUS = "minus"
    PLUS = "plus"
    INTERIOR = "interior"
    NEG_INF = "neg_inf"
    POS_INF = "pos_inf"


_SIDE_RANK = {Side.MINUS: 0, Side.INTERIOR: 1, Side.PLUS: 2}
_SIDE_ALIASES = {
    "-": Side.MINUS,
    "+": Side.PLUS,
    "minus": Side.MINUS,
    "plus": Side.PLUS,
    "interior": Side.INTERIOR,
    "": Side.INTERIOR,
}


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


@total_ordering
@dataclass(frozen=True)
class ExtPoint:
    component: str
    value: Fraction | None
    side: Side

    def __post_init__(self):
        if self.side in (Side.NEG_INF, Side.POS_INF):
            if self.value is not None:
                raise StructuralError("infinite points carry no value")
        else:
            if self.value is None:
                raise StructuralError("finite points need a value")
            object.__setattr__(self, "value", as_fraction(self.value))
        # order key within the component, cached: comparisons dominate run time
        if self.side is Side.NEG_INF:
            key = (0, Fraction(0), 0)
        elif self.side is Side.POS_INF:
            key = (2, Fraction(0), 0)
        else:
            key = (1, self.value, _SIDE_RANK[self.side])
        object.__setattr__(self, "_key", key)

    @classmethod
    def finite(cls, component, value, side=Side.INTERIOR) -> ExtPoint:
        if isinstance(side, str):
            side = _SIDE_ALIASES[side]
        return cls(component, as_fraction(value), side)

    @classmethod
    def neg_inf(cls, component) -> ExtPoint:
        return cls(component, None, Side.NEG_INF)

    @classmethod
    def pos_inf(cls, component) -> ExtPoint:
        return cls(component, None, Side.POS_INF)

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    @property
    def key(self) -> tuple:
        """Order key within the component."""
        return self._key

    def __lt__(self, other):
        # global order for deterministic sorting; use compare() for the
        # partial order that treats components as incomparable
        if not isinstance(other, ExtPoint):
            return NotImplemented
        return (self.component, self.key) < (other.component, other.key)

    def __str__(self):
        if self.side is Side.NEG_INF:
            body = "-inf"
        elif self.side is Side.POS_INF:
            body = "+inf"
        else:
            body = str(self.value)
            if self.side is Side.MINUS:
                body += "-"
            elif self.side is Side.PLUS:
                body += "+"
        return f"{self.component}:{body}"


def compare(p: ExtPoint, q: ExtPoint) -> Ordering:
    if p.component != q.component:
        return Ordering.INCOMPARABLE
    if p.key < q.key:
        return Ordering.LESS
    if p.key > q.key:
        return Ordering.GREATER
    return Ordering.EQUAL


def has_immediate_successor(p: ExtPoint) -> bool:
    return p.side is Side.MINUS


def has_immediate_predecessor(p: ExtPoint) -> bool:
    return p.side is Side.PLUS


class CutKind(enum.Enum):
    FINITE = "finite"
    INTEGERS_AT_MOST = "integers_at_most"
    ALL_DYADICS = "all_dyadics"
    ALL_INTEGERS = "all_integers"


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class CutSpec:
    kind: CutKind
    values: tuple[Fraction, ...] = ()
    bound: int | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "values", tuple(sorted(set(as_fraction(v) for v in self.values)))
        )
        if self.kind is CutKind.INTEGERS_AT_MOST and self.bound is None:
            raise StructuralError("integers_at_most needs a bound")

    @classmethod
    def finite(cls, values: Iterable = ()) -> CutSpec:
        return cls(CutKind.FINITE, tuple(values))

    @classmethod
    def integers_at_most(cls, bound: int) -> CutSpec:
        return cls(CutKind.INTEGERS_AT_MOST, bound=int(bound))

    @classmethod
    def all_dyadics(cls) -> CutSpec:
        return cls(CutKind.ALL_DYADICS)

    @classmethod
    def all_integers(cls) -> CutSpec:
        return cls(CutKind.ALL_INTEGERS)

    def is_cut(self, q) -> bool:
        q = as_fraction(q)
        if self.kind is CutKind.FINITE:
            return q in self.values
        if self.kind is CutKind.INTEGERS_AT_MOST:
            return q.denominator == 1 and q <= self.bound
        if self.kind is CutKind.ALL_INTEGERS:
            return q.denominator == 1
        return _is_dyadic(q)

    @property
    def enumerable(self) -> bool:
        return self.kind is not CutKind.ALL_DYADICS

    def cuts_between(self, lo, hi) -> list[Fraction]:
        """All cut values in the closed range ``[lo, hi]``."""
        lo, hi = as_fraction(lo), as_fraction(hi)
        if self.kind is CutKind.ALL_DYADICS:
            raise UndecidableError("dyadic cuts are dense and cannot be enumerated")
        if self.kind is CutKind.FINITE:
            return [v for v in self.values if lo <= v <= hi]
        top = hi.__floor__()
        if self.kind is CutKind.INTEGERS_AT_MOST:
            top = min(top, self.bound)
        return [Fraction(n) for n in range(lo.__ceil__(), top + 1)]

    def has_cut_strictly_between(self, lo, hi) -> bool:
        lo, hi = as_fraction(lo), as_fraction(hi)
        if lo >= hi:
            return False
        if self.kind is CutKind.ALL_DYADICS:
            return True
        return any(lo < v < hi for v in self.cuts_between(lo, hi))


@dataclass(frozen=True)
class Component:
    id: str
    left: ExtPoint
    right: ExtPoint
    cuts: CutSpec


@dataclass(frozen=True)
class Interval:
    """An order-interval of one component; closed unless flagged otherwise.

    Open ends are needed for the cells of a refinement, such as the stratum
    ``(1, +inf]``.
    """

    component: str
    lo: ExtPoint
    hi: ExtPoint
    lo_closed: bool = True
    hi_closed: bool = True

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, p: ExtPoint) -> bool:
        if p.component != self.component:
            return False
        k = p.key
        if k < self.lo.key or (k == self.lo.key and not self.lo_closed):
            return False
        if k > self.hi.key or (k == self.hi.key and not self.hi_closed):
            return False
        return True

    def __str__(self):
        if self.is_point:
            return "{" + str(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        hi = str(self.hi).split(":", 1)[1]
        return f"{left}{self.lo}, {hi}{right}"


OrderInterval = Interval


@dataclass(frozen=True)
class OrderedCutSpace:
    components: tuple[Component, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            raise StructuralError(f"duplicate component ids: {ids}")
        for c in self.components:
            if c.left.component != c.id or c.right.component != c.id:
                raise StructuralError(f"endpoint of {c.id} names another component")
            if not c.left.key < c.right.key:
                raise StructuralError(f"component {c.id}: left end must precede right end")
            if c.left.side is Side.POS_INF or c.right.side is Side.NEG_INF:
                raise StructuralError(f"component {c.id}: infinity on the wrong end")
            for end in (c.left, c.right):
                if end.is_finite and not self._side_ok(c, end):
                    raise StructuralError(f"endpoint {end} has an invalid side tag")

    @cached_property
    def _by_id(self) -> dict[str, Component]:
        return {c.id: c for c in self.components}

    def component(self, cid: str) -> Component:
        try:
            return self._by_id[cid]
        except KeyError:
            raise StructuralError(f"unknown component {cid!r}") from None

    @staticmethod
    def _side_ok(comp: Component, p: ExtPoint) -> bool:
        cut = comp.cuts.is_cut(p.value)
        return (p.side is Side.INTERIOR) != cut

    def is_cut(self, cid: str, value) -> bool:
        return self.component(cid).cuts.is_cut(value)

    def contains(self, p: ExtPoint) -> bool:
        comp = self._by_id.get(p.component)
        if comp is None:
            return False
        if not (comp.left.key <= p.key <= comp.right.key):
            return False
        if p.is_finite:
            return self._side_ok(comp, p)
        return True

    def check_point(self, p: ExtPoint) -> ExtPoint:
        if not self.contains(p):
            raise StructuralError(f"{p} is not a point of the space")
        return p

    def point(self, cid: str, value, side=None) -> ExtPoint:
        """Build a finite point; ``side`` may be omitted for non-cut values."""
        value = as_fraction(value)
        if side is None:
            if self.is_cut(cid, value):
                raise StructuralError(f"{value} is a cut of {cid}; give side '-' or '+'")
            side = Side.INTERIOR
        return self.check_point(ExtPoint.finite(cid, value, side))

    def neg_inf(self, cid: str) -> ExtPoint:
        return self.check_point(ExtPoint.neg_inf(cid))

    def pos_inf(self, cid: str) -> ExtPoint:
        return self.check_point(ExtPoint.pos_inf(cid))

    def points_with_value(self, cid: str, value) -> list[ExtPoint]:
        value = as_fraction(value)
        if self.is_cut(cid, value):
            cands = [ExtPoint(cid, value, Side.MINUS), ExtPoint(cid, value, Side.PLUS)]
        else:
            cands = [ExtPoint(cid, value, Side.INTERIOR)]
        return [p for p in cands if self.contains(p)]

    def left_end(self, cid: str) -> ExtPoint:
        return self.component(cid).left

    def right_end(self, cid: str) -> ExtPoint:
        return self.component(cid).right

    def whole(self, cid: str) -> Interval:
        c = self.component(cid)
        return Interval(cid, c.left, c.right)

    def approachable_from_left(self, p: ExtPoint) -> bool:
        return p != self.left_end(p.component) and p.side not in (Side.PLUS, Side.NEG_INF)

    def approachable_from_right(self, p: ExtPoint) -> bool:
        return p != self.right_end(p.component) and p.side not in (Side.MINUS, Side.POS_INF)

    @cached_property
    def _between(self) -> dict:
        return {}

    def sample_between(self, p: ExtPoint, q: ExtPoint) -> ExtPoint | None:
        """A point strictly between ``p < q``, or None when nothing lies between."""
        try:
            return self._between[p, q]
        except KeyError:
            pass
        found = self._sample_between(p, q)
        self._between[p, q] = found
        return found

    def _sample_between(self, p: ExtPoint, q: ExtPoint) -> ExtPoint | None:
        if p.component != q.component or not p.key < q.key:
            return None
        if p.is_finite and q.is_finite:
            if p.value == q.value:
                return None
            mid = (p.value + q.value) / 2
        elif p.is_finite:
            mid = p.value + 1
        elif q.is_finite:
            mid = q.value - 1
        else:
            mid = Fraction(0)
        return self.points_with_value(p.component, mid)[0]

    def cells(self, cid: str, critical: Iterable[ExtPoint]) -> list[Interval]:
        """Partition component ``cid`` into the given points and the open gaps between them."""
        comp = self.component(cid)
        pts = {comp.left, comp.right}
        pts.update(p for p in critical if p.component == cid and self.contains(p))
        pts = sorted(pts)
        out = []
        for i, p in enumerate(pts):
            out.append(Interval(cid, p, p))
            if i + 1 < len(pts) and self.sample_between(p, pts[i + 1]) is not None:
                out.append(Interval(cid, p, pts[i + 1], False, False))
        return out

    def all_cells(self, critical: Iterable[ExtPoint]) -> list[Interval]:
        critical = list(critical)
        return [cell for c in self.components for cell in self.cells(c.id, critical)]

    def sample(self, cell: Interval) -> ExtPoint:
        if cell.lo_closed:
            return cell.lo
        if cell.hi_closed:
            return cell.hi
        s = self.sample_between(cell.lo, cell.hi)
        if s is None:
            raise StructuralError(f"empty cell {cell}")
        return s


def normalize(space: OrderedCutSpace, iv: Interval) -> Interval | None:
    """Canonical form: an open end at a doubled gap becomes a closed end. None if empty."""
    lo, hi, lc, hc = iv.lo, iv.hi, iv.lo_closed, iv.hi_closed
    if not lc and lo.side is Side.MINUS:
        lo, lc = ExtPoint(lo.component, lo.value, Side.PLUS), True
    if not hc and hi.side is Side.PLUS:
        hi, hc = ExtPoint(hi.component, hi.value, Side.MINUS), True
    if lo.key > hi.key:
        return None
    if lo.key == hi.key and not (lc and hc):
        return None
    if not lc or not hc:
        if not lc and not hc and space.sample_between(lo, hi) is None:
            return None
    return Interval(iv.component, lo, hi, lc, hc)


def adjacent(a: Interval, b: Interval) -> bool:
    """True when ``a`` ends exactly where ``b`` begins, with no point missing or shared."""
    if a.component != b.component:
        return False
    if a.hi == b.lo:
        return a.hi_closed != b.lo_closed
    return (
        a.hi_closed
        and b.lo_closed
        and a.hi.side is Side.MINUS
        and b.lo.side is Side.PLUS
        and a.hi.value == b.lo.value
    )


def merge_runs(space: OrderedCutSpace, intervals: Iterable[Interval]) -> list[Interval]:
    """Normalize, sort and merge adjacent intervals. Overlaps are a structural error."""
    ivs = [n for n in (normalize(space, iv) for iv in intervals) if n is not None]
    ivs.sort(key=lambda iv: (iv.component, iv.lo.key, not iv.lo_closed))
    runs: list[Interval] = []
    for iv in ivs:
        if runs and runs[-1].component == iv.component:
            last = runs[-1]
            if adjacent(last, iv):
                runs[-1] = Interval(last.component, last.lo, iv.hi, last.lo_closed, iv.hi_closed)
                continue
            if last.hi.key > iv.lo.key or (
                last.hi == iv.lo and last.hi_closed and iv.lo_closed
            ):
                raise StructuralError(f"intervals {last} and {iv} overlap")
        runs.append(iv)
    return runs


def union(space: OrderedCutSpace, intervals: Iterable[Interval]) -> list[Interval]:
    """Like :func:`merge_runs`, but overlapping intervals are simply joined."""
    ivs = [n for n in (normalize(space, iv) for iv in intervals) if n is not None]
    ivs.sort(key=lambda iv: (iv.component, iv.lo.key, not iv.lo_closed))
    runs: list[Interval] = []
    for iv in ivs:
        if runs and runs[-1].component == iv.component:
            last = runs[-1]
            touching = adjacent(last, iv) or last.hi.key > iv.lo.key or (
                last.hi == iv.lo and (last.hi_closed or iv.lo_closed)
            )
            if touching:
                if (iv.hi.key, iv.hi_closed) > (last.hi.key, last.hi_closed):
                    runs[-1] = Interval(last.component, last.lo, iv.hi, last.lo_closed, iv.hi_closed)
                continue
        runs.append(iv)
    return runs


def is_clopen(intervals: Iterable[Interval], space: OrderedCutSpace) -> bool:
    """Whether the union of pairwise-disjoint intervals is closed and open.

    With explicit side tags every boundary is classified by a pointwise test,
    so the verdict is decidable for every cut kind, dense dyadic cuts included.
    """
    for run in merge_runs(space, intervals):
        if not (run.lo_closed and run.hi_closed):
            return False
        if space.approachable_from_left(run.lo) or space.approachable_from_right(run.hi):
            return False
    return True
