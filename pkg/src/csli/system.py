"""Descriptions of whole systems, as read from files or built by the gallery."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import ResolverError, StructuralError
from .functions import PiecewiseFunction
from .maps import PiecewiseMonotoneMap
from .certificates import NonAdmissibilityCertificate
from .space import ExtPoint, OrderedCutSpace, as_fraction

# Families are infinite, so files name them through these registries. The
# gallery fills them in; callers may register more.
MAP_RESOLVERS: dict[str, Callable[[Fraction], PiecewiseMonotoneMap]] = {}
COCYCLE_RESOLVERS: dict[str, Callable[[Fraction], PiecewiseFunction]] = {}


def register_family(name: str, maps, cocycles=None) -> None:
    MAP_RESOLVERS[name] = maps
    if cocycles is not None:
        COCYCLE_RESOLVERS[name] = cocycles


def resolve_map(name: str) -> Callable[[Fraction], PiecewiseMonotoneMap]:
    try:
        return MAP_RESOLVERS[name]
    except KeyError:
        raise ResolverError(f"no map family named {name!r}") from None


def resolve_cocycles(name: str) -> Callable[[Fraction], PiecewiseFunction]:
    try:
        return COCYCLE_RESOLVERS[name]
    except KeyError:
        raise ResolverError(f"no cocycle family named {name!r}") from None


@dataclass(frozen=True)
class FamilySpec:
    """A divisible semigroup of maps, sampled through a fundamental sequence."""

    resolver: str
    head: Fraction
    multipliers: tuple[int, ...]
    depth: int
    check_elements: tuple[Fraction, ...] = ()
    split_grid: Fraction = Fraction(1, 8)

    def __post_init__(self):
        object.__setattr__(self, "head", as_fraction(self.head))
        object.__setattr__(self, "multipliers", tuple(int(n) for n in self.multipliers))
        object.__setattr__(self, "check_elements", tuple(as_fraction(d) for d in self.check_elements))
        object.__setattr__(self, "split_grid", as_fraction(self.split_grid))
        if self.depth < 1:
            raise StructuralError("family depth must be at least 1")


VERDICT_VALUES = {
    "csli": (True, False),
    "local_homeo": (True, False),
    "necessary_condition": ("satisfied", "violated"),
    "admissible": ("yes", "no", "unknown"),
    "degeneracy": ("degenerate", "nondegenerate"),
    "strictly_positive_possible": (True, False),
    "cocycle": ("verified", "failed"),
    "certificate": ("valid", "invalid"),
    "dichotomy": ("AllHomeo", "NoneHomeo", "Inconsistent"),
    "identities": (True, False),
    "collision": None,  # a pair of point labels
}


@dataclass(frozen=True)
class SystemDescription:
    name: str
    space: OrderedCutSpace | None = None
    map: PiecewiseMonotoneMap | None = None
    cocycle: PiecewiseFunction | None = None
    construct: str | None = None
    repair_targets: tuple[tuple[ExtPoint, Fraction], ...] = ()
    certificate: NonAdmissibilityCertificate | None = None
    family: FamilySpec | None = None
    sequence: bool = False
    expected: dict = field(default_factory=dict, hash=False)
    note: str = ""

    def __post_init__(self):
        for key, value in self.expected.items():
            if key not in VERDICT_VALUES:
                raise StructuralError(f"unknown verdict {key!r}")
            allowed = VERDICT_VALUES[key]
            if allowed is not None and value not in allowed:
                raise StructuralError(f"verdict {key} cannot be {value!r}")
        if self.map is not None and self.space is not None and self.map.space != self.space:
            raise StructuralError("the map does not act on the declared space")
        if self.construct not in (None, "inverse-count", "branch", "branch+repair"):
            raise StructuralError(f"unknown construction strategy {self.construct!r}")
