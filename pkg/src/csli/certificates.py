"""Non-admissibility certificates.

A certificate names two distinct points ``a`` and ``b`` in one fiber, each
the limit of a path of points that are alone in their own fibers. Any
cocycle gives weight 1 to a lone fiber point, so by continuity it would give
weight 1 to both ``a`` and ``b``, and their fiber could not sum to 1. A
valid certificate therefore rules out every cocycle; an invalid one proves
nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .analysis import refine
from .errors import CsliError
from .maps import PiecewiseMonotoneMap
from .seqspace import SeqPath, SeqPoint, in_Z, path_fiber_problem, path_problem, seq_apply
from .space import ExtPoint, Interval, Side, as_fraction


@dataclass(frozen=True)
class CutPath:
    """``t -> slope * t + offset`` in one component, for ``t`` in the open ``(t_lo, t_hi)``.

    Path points whose value is a cut take the side ``cut_side``. The limit is
    taken at ``limit_end``; at a cut its side is the one the path approaches
    from.
    """

    component: str
    slope: Fraction
    offset: Fraction
    t_lo: Fraction
    t_hi: Fraction
    limit_end: str = "lo"
    cut_side: Side = Side.MINUS

    def __post_init__(self):
        for name in ("slope", "offset", "t_lo", "t_hi"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        object.__setattr__(self, "cut_side", Side(self.cut_side))
        if self.t_lo >= self.t_hi:
            raise CsliError("empty parameter interval")
        if self.limit_end not in ("lo", "hi"):
            raise CsliError("limit_end must be 'lo' or 'hi'")
        if self.cut_side not in (Side.MINUS, Side.PLUS):
            raise CsliError("cut_side must be minus or plus")

    def value(self, t) -> Fraction:
        return self.slope * as_fraction(t) + self.offset

    def at(self, space, t) -> ExtPoint:
        v = self.value(t)
        side = self.cut_side if space.is_cut(self.component, v) else Side.INTERIOR
        return ExtPoint(self.component, v, side)

    def limit(self, space) -> ExtPoint:
        end = self.t_lo if self.limit_end == "lo" else self.t_hi
        v = self.value(end)
        if not space.is_cut(self.component, v) or self.slope == 0:
            side = Side.INTERIOR if not space.is_cut(self.component, v) else self.cut_side
            return ExtPoint(self.component, v, side)
        # moving towards the end, is the value increasing?
        from_below = (self.slope > 0) == (self.limit_end == "hi")
        return ExtPoint(self.component, v, Side.MINUS if from_below else Side.PLUS)

    def value_range(self) -> tuple[Fraction, Fraction]:
        a, b = self.value(self.t_lo), self.value(self.t_hi)
        return (a, b) if a <= b else (b, a)

    def reparametrized(self, c) -> CutPath:
        """``t -> path(c t)`` on the correspondingly rescaled interval."""
        c = as_fraction(c)
        if c <= 0:
            raise ValueError("scale must be positive")
        return CutPath(
            self.component, self.slope * c, self.offset, self.t_lo / c, self.t_hi / c, self.limit_end, self.cut_side
        )


SEQUENCE_SYSTEM = "shift-doubling"

Path = Union[CutPath, SeqPath]
System = Union[PiecewiseMonotoneMap, str]


@dataclass(frozen=True)
class NonAdmissibilityCertificate:
    system: System
    a: ExtPoint | SeqPoint
    b: ExtPoint | SeqPoint
    path_a: Path
    path_b: Path

    def reparametrized(self, c) -> NonAdmissibilityCertificate:
        return NonAdmissibilityCertificate(
            self.system, self.a, self.b, self.path_a.reparametrized(c), self.path_b.reparametrized(c)
        )


@dataclass(frozen=True)
class CertificateVerdict:
    valid: bool
    reason: str = ""

    def __bool__(self):
        return self.valid

    def __str__(self):
        return "Valid" if self.valid else f"Invalid({self.reason})"


def _invalid(reason: str) -> CertificateVerdict:
    return CertificateVerdict(False, reason)


def check_certificate(cert: NonAdmissibilityCertificate) -> CertificateVerdict:
    if cert.a == cert.b:
        return _invalid("the two fiber points coincide")
    if isinstance(cert.system, PiecewiseMonotoneMap):
        return _check_cut(cert.system, cert)
    if cert.system == SEQUENCE_SYSTEM:
        return _check_seq(cert)
    return _invalid(f"unknown system {cert.system!r}")


# -- cut-line spaces -------------------------------------------------------------


def _path_interval(space, path: CutPath) -> Interval | str:
    """The open order interval spanned by the path's values, or a reason it leaves the space."""
    comp = space.component(path.component)
    a, b = path.value_range()
    if comp.left.is_finite and a < comp.left.value:
        return f"path leaves {comp.id} below {comp.left}"
    if comp.right.is_finite and b > comp.right.value:
        return f"path leaves {comp.id} above {comp.right}"

    def end(v, low):
        if space.is_cut(comp.id, v):
            return ExtPoint(comp.id, v, Side.PLUS if low else Side.MINUS)
        return ExtPoint(comp.id, v, Side.INTERIOR)

    if a == b:
        p = path.at(space, path.t_lo + (path.t_hi - path.t_lo) / 2)
        return Interval(comp.id, p, p)
    return Interval(comp.id, end(a, True), end(b, False), False, False)


def _lone_fibers(phi: PiecewiseMonotoneMap, region: Interval) -> ExtPoint | None:
    """A point of ``region`` sharing its fiber with another point, or None."""
    for cell in refine(phi, extra_source=[region.lo, region.hi]):
        for branch in cell.branches:
            src = branch.source
            x = src.lo if src.is_point else phi.space.sample(src)
            if region.contains(x) and cell.multiplicity != 1:
                return x
    return None


def _check_cut(phi: PiecewiseMonotoneMap, cert: NonAdmissibilityCertificate) -> CertificateVerdict:
    space = phi.space
    for p in (cert.a, cert.b):
        if not isinstance(p, ExtPoint) or not space.contains(p):
            return _invalid(f"{p} is not a point of the space")
    try:
        if phi.apply(cert.a) != phi.apply(cert.b):
            return _invalid(f"{cert.a} and {cert.b} lie in different fibers")
    except CsliError as err:
        return _invalid(str(err))
    for label, path, target in (("a", cert.path_a, cert.a), ("b", cert.path_b, cert.b)):
        if not isinstance(path, CutPath):
            return _invalid(f"path {label} is not a path in a cut-line space")
        if path.component not in {c.id for c in space.components}:
            return _invalid(f"path {label} runs in an unknown component")
        region = _path_interval(space, path)
        if isinstance(region, str):
            return _invalid(f"path {label}: {region}")
        if path.limit(space) != target:
            return _invalid(f"path {label} tends to {path.limit(space)}, not {target}")
        shared = _lone_fibers(phi, region)
        if shared is not None:
            return _invalid(f"path {label} meets {shared}, which shares its fiber")
    return CertificateVerdict(True)


# -- the sequence space ------------------------------------------------------------


def _check_seq(cert: NonAdmissibilityCertificate) -> CertificateVerdict:
    for p in (cert.a, cert.b):
        if not isinstance(p, SeqPoint) or not in_Z(p):
            return _invalid(f"{p} is not a point of Z")
    if seq_apply(cert.a) != seq_apply(cert.b):
        return _invalid("the two points lie in different fibers")
    for label, path, target in (("a", cert.path_a, cert.a), ("b", cert.path_b, cert.b)):
        if not isinstance(path, SeqPath):
            return _invalid(f"path {label} is not a sequence path")
        problem = path_problem(path)
        if problem:
            return _invalid(f"path {label}: {problem}")
        if path.limit() != target:
            return _invalid(f"path {label} tends to {path.limit()}, not {target}")
        problem = path_fiber_problem(path)
        if problem:
            return _invalid(f"path {label}: {problem}")
    return CertificateVerdict(True)
