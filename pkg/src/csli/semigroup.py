"""Actions of semigroups by CSLI maps.

Two kinds are supported. A free abelian action on ``k`` generators extends
generator cocycles to every multi-index once the generators' cocycles
commute in the required sense. A divisible semigroup of positive rationals
is sampled through a fundamental sequence ``d_1 = n_1 d_2 = n_1 n_2 d_3 ...``
and a resolver producing the map for any element; its conclusions are
bounded-depth certificates, never statements about every element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations
from typing import Callable, Sequence

from .analysis import Check, csli_verdict, is_injective, stratify
from .cocycle import check_ddag as _ddag_pair
from .cocycle import cocycle_product
from .errors import PreconditionError
from .functions import PiecewiseFunction
from .maps import PiecewiseMonotoneMap, compose, difference_witness, identity_map
from .space import ExtPoint, as_fraction

# -- free abelian actions ---------------------------------------------------------


@dataclass(frozen=True)
class FreeSemigroupAction:
    generators: tuple[PiecewiseMonotoneMap, ...]
    cocycles: tuple[PiecewiseFunction, ...]

    def __post_init__(self):
        if len(self.generators) != len(self.cocycles):
            raise PreconditionError("one cocycle per generator is needed")
        if not self.generators:
            raise PreconditionError("an action needs at least one generator")
        space = self.generators[0].space
        for g in self.generators:
            if g.space != space:
                raise PreconditionError("generators act on different spaces")
            verdict = csli_verdict(g)
            if not verdict.is_csli:
                raise PreconditionError("every generator must be CSLI", verdict.witnesses)
        for i, j in combinations(range(self.k), 2):
            a, b = self.generators[i], self.generators[j]
            w = difference_witness(compose(a, b), compose(b, a))
            if w is not None:
                raise PreconditionError(f"generators {i} and {j} do not commute", w)

    @property
    def k(self) -> int:
        return len(self.generators)

    @property
    def space(self):
        return self.generators[0].space


def check_ddag(action: FreeSemigroupAction) -> Check:
    """Pairwise compatibility of generator cocycles; the witness is ``(i, j, x)``."""
    for i, j in combinations(range(action.k), 2):
        res = _ddag_pair(action.generators[i], action.cocycles[i], action.generators[j], action.cocycles[j])
        if not res:
            return Check(False, (i, j, res.witness), res.detail)
    return Check(True)


def canonical_path(m: Sequence[int]) -> list[int]:
    """Generator steps for ``m``: all ``e_1`` steps first, then ``e_2``, and so on."""
    if any(c < 0 for c in m):
        raise ValueError(f"negative multi-index {tuple(m)}")
    return [j for j, c in enumerate(m) for _ in range(c)]


def factorization_paths(m: Sequence[int]) -> set[tuple[int, ...]]:
    """Every ordering of the generator steps making up ``m``."""
    return set(permutations(canonical_path(m)))


def path_product(action: FreeSemigroupAction, path: Sequence[int], x: ExtPoint) -> Fraction:
    """Product of generator cocycles along ``path``, starting at ``x``."""
    value, y = Fraction(1), x
    for j in path:
        value *= action.cocycles[j](y)
        y = action.generators[j].apply(y)
    return value


def _require_ddag(action: FreeSemigroupAction):
    res = check_ddag(action)
    if not res:
        raise PreconditionError("generator cocycles are not compatible", res.witness)


def extend_cocycle(action: FreeSemigroupAction, m: Sequence[int], x: ExtPoint, checked: bool = False) -> Fraction:
    if len(m) != action.k:
        raise ValueError(f"multi-index {tuple(m)} does not have {action.k} entries")
    if not checked:
        _require_ddag(action)
    return path_product(action, canonical_path(m), x)


def extend_cocycle_fn(
    action: FreeSemigroupAction, m: Sequence[int], checked: bool = False
) -> tuple[PiecewiseMonotoneMap, PiecewiseFunction]:
    """The map ``phi_m`` and its cocycle, both as explicit piecewise objects."""
    if len(m) != action.k:
        raise ValueError(f"multi-index {tuple(m)} does not have {action.k} entries")
    if not checked:
        _require_ddag(action)
    phi = identity_map(action.space)
    omega = PiecewiseFunction.constant(action.space, 1)
    for j in canonical_path(m):
        omega = cocycle_product(omega, phi, action.cocycles[j])
        phi = compose(action.generators[j], phi)
    return phi, omega


# -- divisible semigroups ---------------------------------------------------------------


@dataclass(frozen=True)
class FundamentalSequence:
    """``d_1 = head`` and ``d_{k+1} = d_k / n_k``; the last multiplier repeats forever."""

    head: Fraction
    multipliers: tuple[int, ...]
    resolver: Callable[[Fraction], PiecewiseMonotoneMap] = field(compare=False)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "head", as_fraction(self.head))
        if self.head <= 0:
            raise ValueError("the sequence must start at a positive element")
        if not self.multipliers or any(int(n) != n or n <= 1 for n in self.multipliers):
            raise ValueError("multipliers must be integers greater than 1")

    def multiplier(self, k: int) -> int:
        return self.multipliers[min(k, len(self.multipliers)) - 1]

    def element(self, k: int) -> Fraction:
        if k < 1:
            raise ValueError("elements are numbered from 1")
        d = self.head
        for i in range(1, k):
            d /= self.multiplier(i)
        return d

    def elements(self, depth: int) -> list[Fraction]:
        return [self.element(k) for k in range(1, depth + 1)]

    def map_for(self, d) -> PiecewiseMonotoneMap:
        try:
            return self.resolver(as_fraction(d))
        except (KeyError, ValueError) as err:
            raise PreconditionError(f"no map for element {d}: {err}") from err


class Dichotomy(str, Enum):
    ALL_HOMEO = "AllHomeo"
    NONE_HOMEO = "NoneHomeo"
    INCONSISTENT = "Inconsistent"


@dataclass(frozen=True)
class DichotomyResult:
    verdict: Dichotomy
    injective: dict[Fraction, bool]


def check_dichotomy(seq: FundamentalSequence, depth: int) -> DichotomyResult:
    found = {d: is_injective(seq.map_for(d)) for d in seq.elements(depth)}
    if all(found.values()):
        verdict = Dichotomy.ALL_HOMEO
    elif not any(found.values()):
        verdict = Dichotomy.NONE_HOMEO
    else:
        verdict = Dichotomy.INCONSISTENT
    return DichotomyResult(verdict, found)


@dataclass(frozen=True)
class CollisionCertificate:
    u0: ExtPoint
    v0: ExtPoint
    tested: tuple[Fraction, ...]


def default_composites(seq: FundamentalSequence, depth: int) -> list[Fraction]:
    """Sums of two listed elements, for a little coverage beyond the sequence itself."""
    elems = seq.elements(depth)
    return sorted({a + b for a, b in combinations_with_replacement(elems, 2)} - set(elems))


def _identifies(phi: PiecewiseMonotoneMap, u: ExtPoint, v: ExtPoint) -> bool:
    return phi.apply(u) == phi.apply(v)


def find_collision(
    seq: FundamentalSequence, depth: int, composites: Sequence[Fraction] | None = None
) -> CollisionCertificate | None:
    """A pair of distinct points no tested element separates, or None.

    Candidate pairs come from fibers of the finest tested map over the ends
    and interiors of its multi-point strata. Among valid pairs the one that
    keeps colliding longest along the continuation of the sequence wins.
    """
    if composites is None:
        composites = default_composites(seq, depth)
    tested = tuple(seq.elements(depth)) + tuple(as_fraction(c) for c in composites)
    maps = {d: seq.map_for(d) for d in tested}
    finest = maps[seq.element(depth)]
    pairs = set()
    for stratum in stratify(finest).strata:
        if stratum.multiplicity < 2:
            continue
        for cell in stratum.cells:
            fiber = finest.preimage(cell.sample)
            pairs.update(combinations(sorted(fiber), 2))
    valid = [(u, v) for u, v in sorted(pairs) if all(_identifies(maps[d], u, v) for d in tested)]
    if not valid:
        return None
    probes = [seq.map_for(seq.element(k)) for k in range(depth + 1, 2 * depth + 1)]

    def persistence(pair) -> int:
        n = 0
        for phi in probes:
            if not _identifies(phi, *pair):
                break
            n += 1
        return n

    u, v = max(valid, key=lambda p: (persistence(p), [q.key for q in p]))
    return CollisionCertificate(u, v, tested)


def validate_collision(seq: FundamentalSequence, cert: CollisionCertificate) -> Check:
    if cert.u0 == cert.v0:
        return Check(False, cert.u0, "the two points of a collision must differ")
    for d in cert.tested:
        phi = seq.map_for(d)
        if not _identifies(phi, cert.u0, cert.v0):
            return Check(False, d, f"element {d} separates {cert.u0} and {cert.v0}")
    return Check(True)


SEPARATION_VIOLATED = "SeparationViolated"


def check_separation(seq: FundamentalSequence, cert: CollisionCertificate) -> str:
    """For a valid collision: the tested elements do not separate points."""
    res = validate_collision(seq, cert)
    if not res:
        raise PreconditionError(f"invalid collision certificate: {res.detail}", res.witness)
    return SEPARATION_VIOLATED
