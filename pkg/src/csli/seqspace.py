"""Bi-infinite, eventually constant sequences with the shift-and-double map.

Coordinates live in ``[0, 1)``, read as the circle: limits are taken mod 1.
The space ``Z`` asks coordinates ``n >= 1`` to lie in ``[0, 1/2]``. The map
shifts left and doubles the coordinate that lands on index 0::

    y_m = x_{m+1}  (m != 0),    y_0 = 2 x_1 mod 1
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import StructuralError
from .space import as_fraction

HALF = Fraction(1, 2)


def _frac(q) -> Fraction:
    """Reduce mod 1 into ``[0, 1)``."""
    q = as_fraction(q)
    return q - (q.numerator // q.denominator)


@dataclass(frozen=True)
class SeqPoint:
    """Coordinate ``n`` is ``left_tail`` below ``offset``, ``core[n - offset]``
    inside the core, and ``right_tail`` above it."""

    left_tail: Fraction
    core: tuple[Fraction, ...] = ()
    offset: int = 0
    right_tail: Fraction = Fraction(0)

    def __post_init__(self):
        left, right = as_fraction(self.left_tail), as_fraction(self.right_tail)
        core = [as_fraction(c) for c in self.core]
        for v in [left, right, *core]:
            if not 0 <= v < 1:
                raise StructuralError(f"coordinate {v} is outside [0, 1)")
        offset = int(self.offset)
        while core and core[0] == left:
            core.pop(0)
            offset += 1
        while core and core[-1] == right:
            core.pop()
        if not core and left == right:
            offset = 0
        object.__setattr__(self, "left_tail", left)
        object.__setattr__(self, "right_tail", right)
        object.__setattr__(self, "core", tuple(core))
        object.__setattr__(self, "offset", offset)

    @classmethod
    def constant(cls, c) -> SeqPoint:
        return cls(c, (), 0, c)

    def __getitem__(self, n: int) -> Fraction:
        if n < self.offset:
            return self.left_tail
        if n < self.offset + len(self.core):
            return self.core[n - self.offset]
        return self.right_tail

    def window(self, lo: int, hi: int) -> list[Fraction]:
        return [self[n] for n in range(lo, hi + 1)]

    def span(self) -> tuple[int, int]:
        """Indices ``lo <= hi`` such that every coordinate outside is a tail value."""
        return self.offset - 1, self.offset + len(self.core)

    def with_coord(self, n: int, v) -> SeqPoint:
        lo, hi = self.span()
        lo, hi = min(lo, n), max(hi, n)
        core = [self[i] for i in range(lo, hi + 1)]
        core[n - lo] = as_fraction(v)
        return SeqPoint(self.left_tail, tuple(core), lo, self.right_tail)

    def shifted(self, k: int) -> SeqPoint:
        """The sequence ``n -> self[n - k]``."""
        return SeqPoint(self.left_tail, self.core, self.offset + k, self.right_tail)

    def __str__(self):
        lo, hi = self.span()
        body = ", ".join(f"{self[n]}" + ("_0" if n == 0 else "") for n in range(min(lo, 0), max(hi, 1) + 1))
        return f"(..., {body}, ...)"


def in_Z(x: SeqPoint) -> bool:
    lo, hi = x.span()
    return all(x[n] <= HALF for n in range(1, max(hi, 1) + 1)) and x.right_tail <= HALF


def seq_apply(x: SeqPoint) -> SeqPoint:
    y = x.shifted(-1)
    return y.with_coord(0, _frac(2 * x[1]))


def seq_preimage_in_Z(y: SeqPoint) -> tuple[SeqPoint, ...]:
    """Points of ``Z`` mapped onto ``y``: one or two of them."""
    base = y.shifted(1)
    out = []
    for w1 in (y[0] / 2, y[0] / 2 + HALF):
        if w1 > HALF:
            continue
        w = base.with_coord(1, w1)
        if in_Z(w):
            out.append(w)
    return tuple(out)


@dataclass(frozen=True)
class Membership:
    member: bool
    depth: int
    chain: tuple[SeqPoint, ...] = ()


def seq_in_X(x: SeqPoint, depth: int) -> Membership:
    """Whether ``x`` has a chain of ``depth`` successive preimages inside ``Z``.

    This is membership in ``phi^depth(Z)`` only; membership in the full
    intersection cannot be settled from finitely many steps.
    """
    if not in_Z(x):
        return Membership(False, 0)
    # depth-first, first branch first; each level has at most two choices
    stack = [(x, (x,))]
    while stack:
        p, chain = stack.pop()
        if len(chain) - 1 == depth:
            return Membership(True, depth, chain)
        for w in reversed(seq_preimage_in_Z(p)):
            stack.append((w, chain + (w,)))
    return Membership(False, depth)


# -- affine paths ----------------------------------------------------------------


@dataclass(frozen=True)
class Affine:
    slope: Fraction
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", as_fraction(self.slope))
        object.__setattr__(self, "offset", as_fraction(self.offset))

    def __call__(self, t) -> Fraction:
        return self.slope * t + self.offset

    def open_range(self, t_lo, t_hi) -> tuple[Fraction, Fraction]:
        a, b = self(t_lo), self(t_hi)
        return (a, b) if a <= b else (b, a)

    def scaled(self, c) -> Affine:
        """``t -> self(c t)``."""
        return Affine(self.slope * c, self.offset)


@dataclass(frozen=True)
class SeqPath:
    """A sequence whose coordinates are affine in ``t`` on the open interval ``(t_lo, t_hi)``."""

    left: Affine
    core: tuple[Affine, ...]
    offset: int
    right: Affine
    t_lo: Fraction
    t_hi: Fraction
    limit_end: str = "lo"

    def __post_init__(self):
        object.__setattr__(self, "t_lo", as_fraction(self.t_lo))
        object.__setattr__(self, "t_hi", as_fraction(self.t_hi))
        if self.t_lo >= self.t_hi:
            raise StructuralError("empty parameter interval")
        if self.limit_end not in ("lo", "hi"):
            raise StructuralError("limit_end must be 'lo' or 'hi'")

    def coord(self, n: int) -> Affine:
        if n < self.offset:
            return self.left
        if n < self.offset + len(self.core):
            return self.core[n - self.offset]
        return self.right

    def expressions(self) -> dict[int | str, Affine]:
        """Every distinct coordinate expression, keyed by index or tail name."""
        out = {"left": self.left, "right": self.right}
        for i, c in enumerate(self.core):
            out[self.offset + i] = c
        return out

    def at(self, t) -> SeqPoint:
        t = as_fraction(t)
        if not self.t_lo < t < self.t_hi:
            raise StructuralError(f"t = {t} is outside ({self.t_lo}, {self.t_hi})")
        return SeqPoint(self.left(t), tuple(c(t) for c in self.core), self.offset, self.right(t))

    def limit(self) -> SeqPoint:
        t = self.t_lo if self.limit_end == "lo" else self.t_hi
        return SeqPoint(
            _frac(self.left(t)), tuple(_frac(c(t)) for c in self.core), self.offset, _frac(self.right(t))
        )

    def reparametrized(self, c) -> SeqPath:
        """``t -> path(c t)`` on the correspondingly rescaled interval."""
        c = as_fraction(c)
        if c <= 0:
            raise ValueError("scale must be positive")
        return SeqPath(
            self.left.scaled(c),
            tuple(a.scaled(c) for a in self.core),
            self.offset,
            self.right.scaled(c),
            self.t_lo / c,
            self.t_hi / c,
            self.limit_end,
        )


def path_problem(path: SeqPath) -> str | None:
    """Why some point of the path is not a valid point of ``Z``, or None."""
    lo, hi = path.t_lo, path.t_hi
    for key, expr in path.expressions().items():
        a, b = expr.open_range(lo, hi)
        if expr.slope == 0:
            bad = not 0 <= a < 1
        else:
            bad = a < 0 or b > 1
        if bad:
            return f"coordinate {key} leaves [0, 1)"
    span_hi = path.offset + len(path.core)
    needs_z = [path.right] + [path.coord(n) for n in range(1, max(span_hi, 1) + 1)]
    for expr in needs_z:
        a, b = expr.open_range(lo, hi)
        if a < 0 or b > HALF:
            return "a coordinate with index >= 1 leaves [0, 1/2]"
    return None


def path_fiber_problem(path: SeqPath) -> str | None:
    """Why some path point shares its fiber, or None.

    The image of ``x`` has coordinate 0 equal to ``2 x_1 mod 1``, and its
    fiber has two points exactly when that is 0, so uniqueness along the
    path means ``2 x_1(t)`` avoids the integers on the open interval.
    """
    two_x1 = path.coord(1)
    a, b = Affine(2 * two_x1.slope, 2 * two_x1.offset).open_range(path.t_lo, path.t_hi)
    if a == b:
        return None if a.denominator != 1 else f"2 x_1 is the integer {a} throughout"
    k = a.numerator // a.denominator + 1
    if k < b:
        return f"2 x_1(t) passes through the integer {k}"
    return None
