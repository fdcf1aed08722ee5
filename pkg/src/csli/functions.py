"""Piecewise-polynomial functions on ordered cut spaces.

A function is a list of regions, each an interval carrying a polynomial in
the point's value. Regions partition the space. At an infinite point a
region's polynomial must be constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import PreconditionError, StructuralError
from .maps import PiecewiseMonotoneMap
from .poly import Poly
from .space import ExtPoint, Interval, OrderedCutSpace, adjacent, merge_runs, normalize


@dataclass(frozen=True)
class Region:
    interval: Interval
    poly: Poly

    def at(self, x: ExtPoint) -> Fraction:
        if x.is_finite:
            return self.poly(x.value)
        if not self.poly.is_constant:
            raise StructuralError(f"non-constant {self.poly} evaluated at {x}")
        return self.poly.constant_value()


@dataclass(frozen=True)
class PiecewiseFunction:
    space: OrderedCutSpace
    regions: tuple[Region, ...]

    def __post_init__(self):
        regions = []
        for r in self.regions:
            iv = normalize(self.space, r.interval)
            if iv is None:
                raise StructuralError(f"empty region {r.interval}")
            regions.append(Region(iv, r.poly))
        regions.sort(key=lambda r: (r.interval.component, r.interval.lo.key, not r.interval.lo_closed))
        object.__setattr__(self, "regions", tuple(regions))
        runs = merge_runs(self.space, [r.interval for r in regions])
        covered = {iv.component: iv for iv in runs}
        for comp in self.space.components:
            whole = self.space.whole(comp.id)
            got = covered.get(comp.id)
            if len([iv for iv in runs if iv.component == comp.id]) != 1 or got != whole:
                raise StructuralError(f"regions do not cover component {comp.id} exactly")

    @classmethod
    def constant(cls, space: OrderedCutSpace, c) -> PiecewiseFunction:
        return cls(space, tuple(Region(space.whole(comp.id), Poly.const(c)) for comp in space.components))

    @classmethod
    def build(cls, space: OrderedCutSpace, spec: Iterable[tuple[Interval, object]]) -> PiecewiseFunction:
        """Regions from ``(interval, poly-or-number)`` pairs."""
        return cls(
            space,
            tuple(Region(iv, p if isinstance(p, Poly) else Poly.const(p)) for iv, p in spec),
        ).simplify()

    def region_at(self, x: ExtPoint) -> Region:
        for r in self.regions:
            if r.interval.contains(x):
                return r
        raise StructuralError(f"{x} lies in no region")

    def __call__(self, x: ExtPoint) -> Fraction:
        return self.region_at(x).at(x)

    def limit(self, x: ExtPoint, from_left: bool) -> Fraction:
        """One-sided limit at ``x``; the caller ensures that side exists."""
        for r in self.regions:
            iv = r.interval
            if iv.component != x.component:
                continue
            if from_left:
                near = (iv.contains(x) and iv.lo != x) or (iv.hi == x and not iv.hi_closed)
            else:
                near = (iv.contains(x) and iv.hi != x) or (iv.lo == x and not iv.lo_closed)
            if near:
                return r.at(x)
        raise StructuralError(f"no region approaches {x}")

    def breakpoints(self) -> set[ExtPoint]:
        return {e for r in self.regions for e in (r.interval.lo, r.interval.hi)}

    def cells(self, extra: Iterable[ExtPoint] = ()) -> list[Interval]:
        return self.space.all_cells(self.breakpoints() | set(extra))

    def poly_on(self, cell: Interval) -> Poly:
        """Polynomial describing the function on a cell that lies inside one region."""
        if cell.is_point:
            return Poly.const(self(cell.lo))
        return self.region_at(self.space.sample(cell)).poly

    # -- structure --------------------------------------------------------------

    def simplify(self) -> PiecewiseFunction:
        """Merge neighbouring regions that describe the same function.

        A doubled point such as ``c+`` first tries to join the region it is a
        limit of (the one to its right), so ``[(-1)+, 0-]`` stays one piece
        rather than ``(-1)+`` being absorbed across the gap.
        """
        return self._sweep(defer_across_gaps=True)._sweep(defer_across_gaps=False)

    def _sweep(self, defer_across_gaps: bool) -> PiecewiseFunction:
        out: list[Region] = []
        for r in self.regions:
            if out:
                last = out[-1]
                across_gap = last.interval.hi != r.interval.lo
                if defer_across_gaps and across_gap and r.interval.is_point and not last.interval.is_point:
                    out.append(r)
                    continue
                if adjacent(last.interval, r.interval):
                    merged = _merge_poly(last, r)
                    if merged is not None:
                        a, b = last.interval, r.interval
                        iv = Interval(a.component, a.lo, b.hi, a.lo_closed, b.hi_closed)
                        out[-1] = Region(iv, merged)
                        continue
            out.append(r)
        return PiecewiseFunction(self.space, tuple(out))

    def continuity_violation(self) -> ExtPoint | None:
        space = self.space
        for r in self.regions:
            iv = r.interval
            if not iv.is_point and not r.poly.is_constant and not (iv.lo.is_finite and iv.hi.is_finite):
                return iv.lo if not iv.lo.is_finite else iv.hi
            if not iv.lo_closed and space.approachable_from_right(iv.lo):
                if self(iv.lo) != r.at(iv.lo):
                    return iv.lo
            if not iv.hi_closed and space.approachable_from_left(iv.hi):
                if self(iv.hi) != r.at(iv.hi):
                    return iv.hi
        return None

    def is_continuous(self) -> bool:
        return self.continuity_violation() is None

    def negative_witness(self, strict: bool = False) -> ExtPoint | None:
        """A region on which the function is negative (or zero, when ``strict``)."""
        for r in self.regions:
            lo = r.interval.lo.value if r.interval.lo.is_finite else None
            hi = r.interval.hi.value if r.interval.hi.is_finite else None
            ok = r.poly.positive_on(lo, hi) if strict else r.poly.nonnegative_on(lo, hi)
            if not ok:
                return self.space.sample(r.interval) if not r.interval.is_point else r.interval.lo
        return None

    def is_nonnegative(self) -> bool:
        return self.negative_witness() is None

    def is_positive(self) -> bool:
        return self.negative_witness(strict=True) is None

    def vanishes_on_open_set(self) -> Interval | None:
        for r in self.regions:
            if r.poly.is_zero and not r.interval.is_point:
                return r.interval
        return None

    # -- algebra ----------------------------------------------------------------

    def combine(self, other: PiecewiseFunction, op: Callable[[Poly, Poly], Poly]) -> PiecewiseFunction:
        if other.space != self.space:
            raise PreconditionError("functions live on different spaces")
        regions = []
        for cell in self.cells(other.breakpoints()):
            regions.append(Region(cell, op(self.poly_on(cell), other.poly_on(cell))))
        return PiecewiseFunction(self.space, tuple(regions)).simplify()

    def __mul__(self, other: PiecewiseFunction) -> PiecewiseFunction:
        return self.combine(other, lambda p, q: p * q)

    def __add__(self, other: PiecewiseFunction) -> PiecewiseFunction:
        return self.combine(other, lambda p, q: p + q)

    def difference_witness(self, other: PiecewiseFunction) -> ExtPoint | None:
        for cell in self.cells(other.breakpoints()):
            if self.poly_on(cell) != other.poly_on(cell):
                return self.space.sample(cell)
        return None

    def equals(self, other: PiecewiseFunction) -> bool:
        return self.difference_witness(other) is None

    def pullback(self, phi: PiecewiseMonotoneMap) -> PiecewiseFunction:
        """``x -> self(phi(x))``, a function on the source of ``phi``."""
        if phi.target != self.space:
            raise PreconditionError("map target differs from the function's space")
        critical = phi.source_critical() | phi.pullbacks_of(self.breakpoints())
        regions = []
        for cell in phi.space.all_cells(critical):
            if cell.is_point:
                poly = Poly.const(self(phi.apply(cell.lo)))
            else:
                x = phi.space.sample(cell)
                piece = phi.pieces[phi.governing(x)]
                poly = self.region_at(phi.apply(x)).poly.compose_affine(piece.slope, piece.offset)
            regions.append(Region(cell, poly))
        return PiecewiseFunction(phi.space, tuple(regions)).simplify()

    def __str__(self):
        return "; ".join(f"{r.interval}: {r.poly}" for r in self.regions)


def _merge_poly(a: Region, b: Region) -> Poly | None:
    """Common polynomial for two adjacent regions, or None if they differ."""
    if a.poly == b.poly:
        return a.poly
    if a.interval.is_point and _extends(b, a):
        return b.poly
    if b.interval.is_point and _extends(a, b):
        return a.poly
    return None


def _extends(r: Region, point: Region) -> bool:
    """Whether ``r``'s polynomial also gives the value of the singleton region ``point``."""
    x = point.interval.lo
    if not x.is_finite and not r.poly.is_constant:
        return False
    return r.at(x) == point.at(x)
