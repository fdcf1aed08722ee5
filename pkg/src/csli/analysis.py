"""Structural analysis of candidate CSLI maps.

Everything rests on :func:`refine`: the target is cut at every point where a
piece image starts or stops (plus any extra points a caller needs), giving
finitely many *cells*, singletons and open gaps, on each of which the fiber
structure is constant. Each cell lists its *branches*: the source cells the
pieces carry onto it. The branch source cells of all cells partition the
source space.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .errors import PreconditionError
from .maps import Piece, PiecewiseMonotoneMap, check_continuity
from .space import ExtPoint, Interval, Side, adjacent, is_clopen, normalize, union


@dataclass(frozen=True)
class Check:
    """Outcome of a yes/no structural check, with a witness when it fails."""

    ok: bool
    witness: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Branch:
    pieces: frozenset[int]
    source: Interval


@dataclass(frozen=True)
class Cell:
    target: Interval
    sample: ExtPoint
    branches: tuple[Branch, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.branches)

    @property
    def is_point(self) -> bool:
        return self.target.is_point


def _gap_end(phi: PiecewiseMonotoneMap, piece: Piece, y: ExtPoint, low_end: bool) -> ExtPoint:
    """Source endpoint of the open pullback of a gap whose end is ``y``."""
    if not y.is_finite:
        up = (y.side is Side.POS_INF) == (piece.slope > 0)
        return ExtPoint(piece.source, None, Side.POS_INF if up else Side.NEG_INF)
    v = piece.inverse_value(y.value)
    pts = phi.space.points_with_value(piece.source, v)
    if len(pts) == 1:
        return pts[0]
    if not pts:
        return ExtPoint(piece.source, v, Side.INTERIOR)
    if y.side is Side.INTERIOR:
        side = Side.PLUS if low_end else Side.MINUS
    elif piece.slope > 0:
        side = y.side
    else:
        side = Side.PLUS if y.side is Side.MINUS else Side.MINUS
    return ExtPoint(piece.source, v, side)


def _pull_back_gap(phi: PiecewiseMonotoneMap, piece: Piece, gap: Interval) -> Interval:
    if piece.slope > 0:
        lo = _gap_end(phi, piece, gap.lo, low_end=True)
        hi = _gap_end(phi, piece, gap.hi, low_end=False)
    else:
        lo = _gap_end(phi, piece, gap.hi, low_end=True)
        hi = _gap_end(phi, piece, gap.lo, low_end=False)
    return Interval(piece.source, lo, hi, False, False)


def point_branches(phi: PiecewiseMonotoneMap, x: ExtPoint, y: ExtPoint) -> frozenset[int]:
    """Pieces whose closure carries ``x`` onto ``y``.

    An override point belongs to a piece when the override agrees with the
    piece's value, as ``0- -> 1`` does for the shift ``x + 1``.
    """
    out = set()
    for i, p in enumerate(phi.pieces):
        if not p.domain.contains(x) or p.target != y.component:
            continue
        if x.is_finite:
            if y.is_finite and p.value_at(x.value) == y.value:
                out.add(i)
        elif y in phi.image_points(p, x):
            out.add(i)
    return frozenset(out)


def refine(
    phi: PiecewiseMonotoneMap,
    extra_source: Iterable[ExtPoint] = (),
    extra_target: Iterable[ExtPoint] = (),
) -> list[Cell]:
    """Target cells on which the fiber structure of ``phi`` is constant.

    ``extra_source`` points have their images added as cut points, so that
    each branch source cell avoids them; ``extra_target`` points are added
    as they are.
    """
    critical = phi.target_critical() | phi.images_of(extra_source) | set(extra_target)
    out = []
    for tcell in phi.target.all_cells(critical):
        sample = phi.target.sample(tcell)
        fiber = phi.preimage(sample)
        if tcell.is_point:
            branches = tuple(
                Branch(point_branches(phi, x, sample), Interval(x.component, x, x)) for x in fiber
            )
        else:
            branches = []
            for x in fiber:
                i = phi.governing(x)
                branches.append(
                    Branch(frozenset([i]), _pull_back_gap(phi, phi.pieces[i], tcell))
                )
            branches = tuple(branches)
        out.append(Cell(tcell, sample, branches))
    return out


# -- CSLI conditions -----------------------------------------------------------


def check_surjective(phi: PiecewiseMonotoneMap) -> Check:
    for cell in refine(phi):
        if not cell.branches:
            return Check(False, cell.sample, f"nothing maps onto {cell.target}")
    return Check(True)


def _approach_slopes(phi: PiecewiseMonotoneMap, x: ExtPoint) -> dict[str, bool]:
    """For each side from which ``x`` is approachable inside a piece: is that piece increasing?"""
    space = phi.space
    out = {}
    for piece in phi.pieces:
        dom = piece.domain
        if piece.degenerate or not dom.contains(x):
            continue
        if x != dom.lo and space.approachable_from_left(x):
            out["left"] = piece.slope > 0
        if x != dom.hi and space.approachable_from_right(x):
            out["right"] = piece.slope > 0
    return out


def _image_sides(phi: PiecewiseMonotoneMap, x: ExtPoint) -> list[str]:
    sides = []
    for side, increasing in _approach_slopes(phi, x).items():
        same = increasing
        sides.append(side if same else ("right" if side == "left" else "left"))
    return sides


def check_locally_injective(phi: PiecewiseMonotoneMap) -> Check:
    """Pieces are injective, so only a fold at a junction can break local injectivity."""
    for x in sorted(phi.source_critical()):
        sides = _image_sides(phi, x)
        if len(sides) == 2 and sides[0] == sides[1]:
            return Check(False, x, f"fold at {x}")
    return Check(True)


@dataclass(frozen=True)
class CsliVerdict:
    continuous: bool
    surjective: bool
    locally_injective: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def is_csli(self) -> bool:
        return self.continuous and self.surjective and self.locally_injective


def csli_verdict(phi: PiecewiseMonotoneMap) -> CsliVerdict:
    gap = phi.coverage_gap()
    witnesses = {}
    if gap is not None:
        witnesses["coverage"] = gap
        return CsliVerdict(False, False, False, witnesses)
    cont = check_continuity(phi)
    if cont is not None:
        witnesses["continuity"] = cont.at
        return CsliVerdict(False, False, False, witnesses)
    surj = check_surjective(phi)
    inj = check_locally_injective(phi)
    if not surj:
        witnesses["surjectivity"] = surj.witness
    if not inj:
        witnesses["local_injectivity"] = inj.witness
    return CsliVerdict(True, surj.ok, inj.ok, witnesses)


# -- multiplicity profile --------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    interval: Interval
    multiplicity: int
    cells: tuple[Cell, ...] = field(compare=False, repr=False)

    @property
    def branches(self) -> frozenset[int]:
        """Pieces contributing over the whole stratum."""
        out = None
        for c in self.cells:
            here = set()
            for b in c.branches:
                here |= b.pieces
            out = here if out is None else out & here
        return frozenset(out or ())


@dataclass(frozen=True)
class MultiplicityProfile:
    cells: tuple[Cell, ...]
    strata: tuple[Stratum, ...]
    level_sets: dict[int, tuple[Interval, ...]]
    level_images: dict[int, tuple[Interval, ...]]

    @property
    def max_multiplicity(self) -> int:
        return max(s.multiplicity for s in self.strata)

    def multiplicity_at(self, y: ExtPoint) -> int:
        for s in self.strata:
            if s.interval.contains(y):
                return s.multiplicity
        raise KeyError(y)


def _merge_cells(space, cells: list[Cell], key) -> list[tuple[Interval, list[Cell]]]:
    """Merge consecutive cells with equal ``key`` into intervals."""
    runs: list[tuple[Interval, list[Cell]]] = []
    for c in cells:
        iv = c.target
        if runs:
            last_iv, members = runs[-1]
            if key(members[-1]) == key(c) and adjacent(last_iv, iv):
                runs[-1] = (
                    Interval(iv.component, last_iv.lo, iv.hi, last_iv.lo_closed, iv.hi_closed),
                    members + [c],
                )
                continue
        runs.append((iv, [c]))
    return [(normalize(space, iv), members) for iv, members in runs]


def merge_intervals(space, intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    return tuple(union(space, intervals))


def stratify(phi: PiecewiseMonotoneMap, extra_source=()) -> MultiplicityProfile:
    if check_continuity(phi) is not None:
        raise PreconditionError("stratify needs a continuous map", check_continuity(phi).at)
    cells = refine(phi, extra_source)
    strata = tuple(
        Stratum(iv, members[0].multiplicity, tuple(members))
        for iv, members in _merge_cells(phi.target, cells, lambda c: c.multiplicity)
    )
    levels = defaultdict(list)
    for s in strata:
        levels[s.multiplicity].append(s.interval)
    level_sets = {j: merge_intervals(phi.target, ivs) for j, ivs in sorted(levels.items())}

    # images of the level sets: refine again so no branch straddles a stratum edge
    edges = {e for s in strata for e in (s.interval.lo, s.interval.hi)}
    images = defaultdict(list)
    for c in refine(phi, extra_source=edges):
        for b in c.branches:
            x = phi.space.sample(b.source)
            j = next(s.multiplicity for s in strata if s.interval.contains(x))
            images[j].append(c.target)
    level_images = {j: merge_intervals(phi.target, images[j]) for j in level_sets}
    return MultiplicityProfile(tuple(cells), strata, level_sets, level_images)


def upper_semicontinuity_violations(profile: MultiplicityProfile) -> list[ExtPoint]:
    """Singleton cells whose multiplicity is below that of an adjacent open cell."""
    bad = []
    cells = profile.cells
    for i, c in enumerate(cells):
        if not c.is_point:
            continue
        for j in (i - 1, i + 1):
            if 0 <= j < len(cells) and not cells[j].is_point and adjacent_cells(cells, i, j):
                if c.multiplicity < cells[j].multiplicity:
                    bad.append(c.sample)
    return bad


def adjacent_cells(cells, i, j) -> bool:
    a, b = (cells[i], cells[j]) if i < j else (cells[j], cells[i])
    return adjacent(a.target, b.target)


# -- openness ----------------------------------------------------------------------


def locally_open_at(phi: PiecewiseMonotoneMap, x: ExtPoint) -> bool:
    """Whether small neighbourhoods of ``x`` map onto neighbourhoods of ``phi(x)``.

    Decided by sides: the image of each one-sided neighbourhood lies on a
    known side of ``y``, and the map is open at ``x`` iff those sides cover
    every side from which ``y`` can be approached.
    """
    y = phi.apply(x)
    target = phi.target
    needed = set()
    if target.approachable_from_left(y):
        needed.add("left")
    if target.approachable_from_right(y):
        needed.add("right")
    return needed <= set(_image_sides(phi, x))


def is_local_homeomorphism(phi: PiecewiseMonotoneMap, profile: MultiplicityProfile | None = None) -> bool:
    profile = profile or stratify(phi)
    return all(is_clopen(ivs, phi.target) for ivs in profile.level_sets.values())


def clopen_violation(phi: PiecewiseMonotoneMap, profile: MultiplicityProfile | None = None):
    """A level set that is not clopen, as ``(j, intervals)``, or None."""
    profile = profile or stratify(phi)
    for j, ivs in profile.level_sets.items():
        if not is_clopen(ivs, phi.target):
            return j, ivs
    return None


def necessary_condition(phi: PiecewiseMonotoneMap) -> Check:
    """Every fiber must contain a point at which ``phi`` is locally open.

    Checking one sample per refinement cell is exact: inside an open gap all
    fiber points are interior to affine pieces, or doubled points sent to
    doubled points of matching side, and those are always locally open.
    """
    for cell in refine(phi):
        fiber = phi.preimage(cell.sample)
        if not any(locally_open_at(phi, x) for x in fiber):
            return Check(False, cell.sample, f"no point of the fiber over {cell.sample} is locally open")
    return Check(True)


def is_injective(phi: PiecewiseMonotoneMap) -> bool:
    return all(c.multiplicity <= 1 for c in refine(phi))
