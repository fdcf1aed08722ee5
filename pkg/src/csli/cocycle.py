"""Cocycles of CSLI maps: verification, construction, and the transfer operator.

A cocycle for ``phi`` is a continuous function ``omega >= 0`` on the source
whose sum over every fiber ``phi^-1(y)`` is exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import Cell, Check, clopen_violation, locally_open_at, refine, stratify
from .errors import PreconditionError
from .functions import PiecewiseFunction, Region
from .maps import Piece, PiecewiseMonotoneMap
from .poly import Poly
from .space import ExtPoint

# -- fiber sums ------------------------------------------------------------------


def _inverse_poly(omega: PiecewiseFunction, phi: PiecewiseMonotoneMap, cell: Cell, branch) -> Poly:
    """The branch's contribution to a fiber sum, as a polynomial in ``y``."""
    if cell.is_point:
        return Poly.const(omega(branch.source.lo))
    piece = phi.pieces[next(iter(branch.pieces))]
    p = omega.poly_on(branch.source)
    return p.compose_affine(1 / piece.slope, -piece.offset / piece.slope)


def fiber_sum(omega: PiecewiseFunction, phi: PiecewiseMonotoneMap, y: ExtPoint) -> Fraction:
    return sum((omega(x) for x in phi.preimage(y)), Fraction(0))


def fiber_sum_violation(omega: PiecewiseFunction, phi: PiecewiseMonotoneMap) -> ExtPoint | None:
    """A target point whose fiber does not sum to 1, or None."""
    for cell in refine(phi, extra_source=omega.breakpoints()):
        total = Poly()
        for b in cell.branches:
            total = total + _inverse_poly(omega, phi, cell, b)
        if total != Poly.const(1):
            return cell.sample
    return None


@dataclass(frozen=True)
class CocycleReport:
    continuous: bool
    nonnegative: bool
    fiber_sums: bool
    strictly_positive: bool = False
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return self.continuous and self.nonnegative and self.fiber_sums

    def __bool__(self):
        return self.ok


def verify_cocycle(phi: PiecewiseMonotoneMap, omega: PiecewiseFunction) -> CocycleReport:
    if omega.space != phi.space:
        raise PreconditionError("the function must live on the source of the map")
    witnesses = {}
    jump = omega.continuity_violation()
    if jump is not None:
        witnesses["continuity"] = jump
    neg = omega.negative_witness()
    if neg is not None:
        witnesses["nonnegativity"] = neg
    bad = fiber_sum_violation(omega, phi)
    if bad is not None:
        witnesses["fiber_sum"] = bad
    ok = jump is None and neg is None and bad is None
    # only a genuine cocycle is called strictly positive
    positive = ok and omega.is_positive()
    return CocycleReport(jump is None, neg is None, bad is None, positive, witnesses)


def is_degenerate(omega: PiecewiseFunction) -> bool:
    """A cocycle is degenerate when it vanishes on an interval with nonempty interior."""
    return omega.vanishes_on_open_set() is not None


def degeneracy(omega: PiecewiseFunction) -> str:
    return "degenerate" if is_degenerate(omega) else "nondegenerate"


@dataclass(frozen=True)
class CocycleFn:
    """A weight function together with the map it is meant to be a cocycle for."""

    phi: PiecewiseMonotoneMap
    fn: PiecewiseFunction

    def __call__(self, x: ExtPoint) -> Fraction:
        return self.fn(x)

    def verify(self) -> CocycleReport:
        return verify_cocycle(self.phi, self.fn)

    def transfer(self, f: PiecewiseFunction) -> PiecewiseFunction:
        return transfer_apply(self.phi, self.fn, f)

    def expectation(self, f: PiecewiseFunction) -> PiecewiseFunction:
        return expectation(self.phi, self.fn, f)

    @property
    def degeneracy(self) -> str:
        return degeneracy(self.fn)


# -- constructions -----------------------------------------------------------------


@dataclass(frozen=True)
class Construction:
    strategy: str
    cocycle: PiecewiseFunction | None
    report: CocycleReport | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.cocycle is not None and self.report is not None and self.report.ok


def _from_branch_values(phi: PiecewiseMonotoneMap, cells, value) -> PiecewiseFunction:
    """Assemble a function on the source from per-branch polynomials in ``y``.

    ``value(cell, branch)`` gives the weight of that branch as a polynomial
    in the target coordinate; it is pulled back along the branch's piece.
    """
    regions = []
    for cell in cells:
        for b in cell.branches:
            w = value(cell, b)
            if cell.is_point:
                c = w.constant_value() if not cell.sample.is_finite else w(cell.sample.value)
                regions.append(Region(b.source, Poly.const(c)))
            else:
                piece = phi.pieces[next(iter(b.pieces))]
                regions.append(Region(b.source, w.compose_affine(piece.slope, piece.offset)))
    return PiecewiseFunction(phi.space, tuple(regions)).simplify()


def construct_inverse_count(phi: PiecewiseMonotoneMap) -> Construction:
    """``omega(x) = 1 / |phi^-1(phi(x))|``: equal weight on every fiber point.

    Only local homeomorphisms qualify; otherwise the result carries no
    cocycle and names a level set that fails to be clopen.
    """
    profile = stratify(phi)
    bad = clopen_violation(phi, profile)
    if bad is not None:
        j, ivs = bad
        where = ", ".join(str(iv) for iv in ivs)
        return Construction("inverse-count", None, None, f"multiplicity-{j} set {where} is not clopen")
    cells = refine(phi)
    omega = _from_branch_values(phi, cells, lambda c, b: Poly.const(Fraction(1, c.multiplicity)))
    report = verify_cocycle(phi, omega)
    reason = "" if report.ok else _describe(report)
    return Construction("inverse-count", omega, report, reason)


def _describe(report: CocycleReport) -> str:
    return ", ".join(f"{k} fails at {v}" for k, v in report.witnesses.items())


def _branch_open(phi: PiecewiseMonotoneMap, stratum, i: int) -> bool:
    for cell in stratum.cells:
        for b in cell.branches:
            if i in b.pieces:
                x = b.source.lo if cell.is_point else phi.space.sample(b.source)
                if not locally_open_at(phi, x):
                    return False
    return True


def select_branches(phi: PiecewiseMonotoneMap, force: bool = False) -> list[tuple[object, int]]:
    """One chosen piece per stratum: the lowest-numbered branch along which ``phi`` is open."""
    chosen = []
    for s in stratify(phi).strata:
        complete = sorted(s.branches)
        if len(complete) < s.multiplicity:
            raise PreconditionError(f"branches over {s.interval} change pieces", s.interval)
        good = [i for i in complete if _branch_open(phi, s, i)]
        if not good:
            if not force:
                raise PreconditionError(f"no open branch over {s.interval}", s.interval)
            good = complete
        chosen.append((s, good[0]))
    return chosen


def construct_branch_selection(phi: PiecewiseMonotoneMap, force: bool = False) -> Construction:
    """Weight 1 on one open branch per stratum, 0 elsewhere."""
    try:
        chosen = select_branches(phi, force)
    except PreconditionError as err:
        return Construction("branch-selection", None, None, str(err))
    weights = {}
    for s, i in chosen:
        for c in s.cells:
            weights[c.target] = i
    cells = [c for s, _ in chosen for c in s.cells]
    omega = _from_branch_values(
        phi, cells, lambda c, b: Poly.const(1 if weights[c.target] in b.pieces else 0)
    )
    report = verify_cocycle(phi, omega)
    return Construction("branch-selection", omega, report, "" if report.ok else _describe(report))


# -- continuity repair ----------------------------------------------------------


def _affine_through(y0: Fraction, v0: Fraction, y1: Fraction, v1: Fraction) -> Poly:
    if y0 == y1:
        return Poly.const(v0)
    slope = (v1 - v0) / (y1 - y0)
    return Poly.linear(slope, v0 - slope * y0)


def repair_continuity(
    phi: PiecewiseMonotoneMap,
    candidate: PiecewiseFunction,
    targets: dict[ExtPoint, Fraction] | None = None,
    max_rounds: int = 16,
) -> Construction:
    """Re-weight the branches over each multi-branch stratum affinely in ``y``.

    At both ends of a stratum every branch point gets a prescribed value:
    one from ``targets``, or the limit of the current function from outside
    the branch when the point can be approached from there. Unconstrained
    branches share whatever is left of the total 1, the largest remainder
    going to the branch the candidate weights most. The function is rebuilt
    and the process repeated until nothing changes.
    """
    targets = {k: Fraction(v) for k, v in (targets or {}).items()}
    profile = stratify(phi)
    omega = candidate
    for _ in range(max_rounds):
        weights: dict[tuple[int, int], Poly] = {}
        for si, s in enumerate(profile.strata):
            complete = sorted(s.branches)
            if s.multiplicity == 1:
                weights[(si, complete[0])] = Poly.const(1)
                continue
            if len(complete) < s.multiplicity:
                return Construction("repair", None, None, f"branches over {s.interval} change pieces")
            lo_end = (s.interval.lo, s.interval.lo_closed, True)
            hi_end = (s.interval.hi, s.interval.hi_closed, False)
            found = [_end_constraints(phi, omega, targets, complete, *e) for e in (lo_end, hi_end)]
            if s.interval.is_point:
                # a single point: both sides of every branch point border other strata
                merged = dict(found[0])
                for i, v in found[1].items():
                    if merged.get(i, v) != v:
                        return Construction(
                            "repair", None, None, f"continuity asks two values at {s.interval.lo}"
                        )
                    merged[i] = v
                found = [merged, dict(merged)]
            ends = []
            for (y, closed, lower), values in zip((lo_end, hi_end), found):
                free = [i for i in complete if i not in values]
                rest = 1 - sum(values.values(), Fraction(0))
                if not free:
                    if rest != 0:
                        return Construction(
                            "repair", None, None,
                            f"branch values over {y} are forced to sum to {1 - rest}",
                        )
                else:
                    guess = {i: _candidate_value(candidate, phi, phi.pieces[i], y, lower, closed) for i in free}
                    top = max(free, key=lambda i: (guess[i], -i))
                    for i in free:
                        if i != top:
                            values[i] = max(Fraction(0), min(guess[i], rest))
                    values[top] = 1 - sum(values.values(), Fraction(0))
                if any(v < 0 for v in values.values()):
                    return Construction("repair", None, None, f"fiber over {y} already exceeds 1")
                ends.append((y, values))
            (y0, v0), (y1, v1) = ends
            for i in complete:
                if not (y0.is_finite and y1.is_finite):
                    if v0[i] != v1[i]:
                        return Construction("repair", None, None, f"unbounded stratum {s.interval} needs constant weights")
                    weights[(si, i)] = Poly.const(v0[i])
                else:
                    weights[(si, i)] = _affine_through(y0.value, v0[i], y1.value, v1[i])

        cell_stratum = {c.target: si for si, s in enumerate(profile.strata) for c in s.cells}

        def value(cell, branch):
            si = cell_stratum[cell.target]
            for i in sorted(branch.pieces):
                if (si, i) in weights:
                    return weights[(si, i)]
            raise PreconditionError(f"unweighted branch over {cell.target}")

        new = _from_branch_values(phi, profile.cells, value)
        if new == omega:
            break
        omega = new
    report = verify_cocycle(phi, omega)
    return Construction("repair", omega, report, "" if report.ok else _describe(report))


def _end_constraints(phi, omega, targets, complete, y, closed, lower) -> dict[int, Fraction]:
    """Values forced on the branch points over one end of a stratum."""
    values = {}
    for i in complete:
        piece = phi.pieces[i]
        x = _branch_point(phi, piece, y, lower, closed)
        if x in targets:
            values[i] = targets[x]
            continue
        # the branch source lies right of x exactly when this end maps to its lower end
        outside_left = lower == (piece.slope > 0)
        if closed:
            side_exists = (
                phi.space.approachable_from_left(x) if outside_left else phi.space.approachable_from_right(x)
            )
            if side_exists:
                values[i] = omega.limit(x, from_left=outside_left)
        else:
            values[i] = omega(x)
    return values


def _branch_point(phi, piece: Piece, y: ExtPoint, lower: bool, closed: bool) -> ExtPoint:
    """The branch's fiber point over a stratum end (its limit point when the end is open)."""
    cands = phi.source_candidates(piece, y)
    if closed:
        for x in cands:
            if phi.apply(x) == y:
                return x
    # open end, or an override point whose value matches the piece
    pts = phi.pullbacks_of([y])
    pts = [x for x in pts if piece.domain.contains(x)]
    if not pts:
        raise PreconditionError(f"no branch point over {y}")
    # the limit point is the one nearest the branch source
    inside_right = lower == (piece.slope > 0)
    return min(pts) if inside_right else max(pts)


def _candidate_value(candidate, phi, piece, y, lower, closed) -> Fraction:
    x = _branch_point(phi, piece, y, lower, closed)
    return candidate(x)


# -- transfer operator --------------------------------------------------------------


def transfer_apply(phi: PiecewiseMonotoneMap, omega: PiecewiseFunction, f: PiecewiseFunction) -> PiecewiseFunction:
    """``(L f)(y) = sum over x in phi^-1(y) of omega(x) f(x)``."""
    if f.space != phi.space or omega.space != phi.space:
        raise PreconditionError("functions must live on the source of the map")
    weighted = omega * f
    regions = []
    for cell in refine(phi, extra_source=weighted.breakpoints()):
        total = Poly()
        for b in cell.branches:
            total = total + _inverse_poly(weighted, phi, cell, b)
        regions.append(Region(cell.target, total))
    return PiecewiseFunction(phi.target, tuple(regions)).simplify()


def expectation(phi: PiecewiseMonotoneMap, omega: PiecewiseFunction, f: PiecewiseFunction) -> PiecewiseFunction:
    """``E f = (L f) o phi``, the conditional expectation onto functions of ``phi``."""
    return transfer_apply(phi, omega, f).pullback(phi)


# -- identities between cocycles of a semigroup -------------------------------------


def cocycle_product(omega_e: PiecewiseFunction, phi_e: PiecewiseMonotoneMap, omega_f: PiecewiseFunction) -> PiecewiseFunction:
    """``omega_e * (omega_f o phi_e)``: the cocycle of ``phi_f o phi_e``."""
    return omega_e * omega_f.pullback(phi_e)


def verify_identity(
    omega_d: PiecewiseFunction,
    omega_e: PiecewiseFunction,
    omega_f: PiecewiseFunction,
    phi_e: PiecewiseMonotoneMap,
) -> Check:
    """``omega_d = omega_e * (omega_f o phi_e)`` where ``d = e + f``."""
    prod = cocycle_product(omega_e, phi_e, omega_f)
    w = omega_d.difference_witness(prod)
    return Check(w is None, w, "" if w is None else f"cocycle identity fails at {w}")


def check_ddag(
    phi_i: PiecewiseMonotoneMap,
    omega_i: PiecewiseFunction,
    phi_j: PiecewiseMonotoneMap,
    omega_j: PiecewiseFunction,
) -> Check:
    """Both orders of composing two generators give the same cocycle."""
    a = cocycle_product(omega_i, phi_i, omega_j)
    b = cocycle_product(omega_j, phi_j, omega_i)
    w = a.difference_witness(b)
    return Check(w is None, w, "" if w is None else f"generator cocycles disagree at {w}")
