"""The seven acceptance criteria, one test each.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line (visible with
``pytest -s`` or in the captured output of a failure).
"""

import random
from fractions import Fraction
from itertools import product

import pytest

import oracles
from csli.analysis import is_local_homeomorphism, necessary_condition, stratify, upper_semicontinuity_violations
from csli.certificates import CutPath, NonAdmissibilityCertificate, check_certificate
from csli.cocycle import construct_inverse_count, transfer_apply, verify_cocycle, verify_identity
from csli.functions import PiecewiseFunction, Region
from csli.gallery import (
    GALLERY_NAMES,
    admiss_csli_cocycle,
    admiss_csli_map,
    admiss_nondeg_cocycle,
    dyadic_cocycle,
    dyadic_translation,
    entry,
    line_cocycle,
    line_translation,
    notadmiss2_certificate,
    notadmiss2_map,
    seq_certificate,
)
from csli.cocycle import construct_branch_selection, repair_continuity
from csli.pipeline import run_pipeline
from csli.poly import Poly
from csli.semigroup import (
    FreeSemigroupAction,
    FundamentalSequence,
    check_ddag,
    check_dichotomy,
    extend_cocycle,
    factorization_paths,
    find_collision,
    path_product,
)
from csli.space import ExtPoint, Interval, Side

H = Fraction(1, 2)
DIVIS_ELEMENTS = [Fraction(1), H, Fraction(1, 4), Fraction(3, 4)]


def report(n, ok, detail=""):
    print(f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}" + (f": {detail}" if detail else ""))
    assert ok, detail


def pt(v, side=Side.INTERIOR, comp="X"):
    return ExtPoint.finite(comp, v, side)


def local_homeo_maps():
    seq = FundamentalSequence(1, (2,), dyadic_translation)
    ds = sorted(set(seq.elements(5)) | set(DIVIS_ELEMENTS))
    return [(dyadic_translation(d), dyadic_cocycle(d)) for d in ds] + [
        (line_translation(d), line_cocycle(d)) for d in (H, 1, 3)
    ]


def verified_systems():
    return [
        (admiss_csli_map(), admiss_csli_cocycle()),
        (admiss_csli_map(), admiss_nondeg_cocycle()),
        (dyadic_translation(H), dyadic_cocycle(H)),
        (dyadic_translation(1), dyadic_cocycle(1)),
    ]


# 1 ------------------------------------------------------------------------------


def test_1_gallery_fidelity():
    problems = []
    reports = {name: run_pipeline(entry(name)) for name in GALLERY_NAMES}
    for name, rep in reports.items():
        if not rep["ok"]:
            problems.append(f"{name}: {rep['mismatches']}")
    v = reports["admissCSLI"]["verdicts"]
    if not (v["csli"] and not v["local_homeo"] and v["cocycle"] == "verified" and v["degeneracy"] == "degenerate"):
        problems.append(f"admissCSLI verdicts {v}")
    if reports["admissCSLI"]["details"]["cocycle"]["strictly_positive"]:
        problems.append("admissCSLI cocycle reported strictly positive")
    v = reports["admissnondeg"]["verdicts"]
    if not (v["cocycle"] == "verified" and v["degeneracy"] == "nondegenerate"):
        problems.append(f"admissnondeg verdicts {v}")
    for name in ("notadmiss2", "notadmiss-seq"):
        if reports[name]["details"]["certificate"] != "Valid":
            problems.append(f"{name} certificate {reports[name]['details']['certificate']}")
    d = reports["divisadmiss"]
    per = d["details"]["elements"]
    for e in DIVIS_ELEMENTS:
        if per[str(e)].get("cocycle") != "verified":
            problems.append(f"divisadmiss omega({e}) not verified")
    if not d["verdicts"]["identities"] or d["details"]["identities"]["checked"] == 0:
        problems.append(f"identities {d['details']['identities']}")
    if d["verdicts"]["dichotomy"] != "NoneHomeo" or len(d["details"]["dichotomy"]) != 5:
        problems.append(f"dichotomy {d['details']['dichotomy']}")
    if d["verdicts"].get("collision") != ["X2:0-", "X3:0-"]:
        problems.append(f"collision {d['verdicts'].get('collision')}")
    report(1, not problems, "; ".join(problems))


# 2 ------------------------------------------------------------------------------


def test_2_strictly_positive_iff_local_homeomorphism():
    problems = []
    for phi, _ in local_homeo_maps():
        c = construct_inverse_count(phi)
        if not (is_local_homeomorphism(phi) and c.ok and c.report.strictly_positive):
            problems.append(f"inverse count failed on a local homeomorphism: {c.reason}")
    for phi in (admiss_csli_map(), notadmiss2_map()):
        if construct_inverse_count(phi).ok:
            problems.append("inverse count accepted a non local homeomorphism")
    # every weight we can lay hands on for the non-open maps
    rng = random.Random(2)
    for phi in (admiss_csli_map(), notadmiss2_map()):
        assert not is_local_homeomorphism(phi)
        X = phi.space
        candidates = [admiss_csli_cocycle(), admiss_nondeg_cocycle(), PiecewiseFunction.constant(X, 1),
                      PiecewiseFunction.constant(X, H)]
        for force in (False, True):
            c = construct_branch_selection(phi, force=force).cocycle
            if c is not None:
                candidates += [c, repair_continuity(phi, c).cocycle or c]
        for _ in range(20):
            a, b = Fraction(rng.randint(1, 9), 10), Fraction(rng.randint(1, 9), 10)
            candidates.append(PiecewiseFunction.build(
                X, [(Interval("X", X.neg_inf("X"), pt(-1, "-")), 1), (Interval("X", pt(-1, "+"), pt(0, "-")), a),
                    (Interval("X", pt(0, "+"), pt(1)), b), (Interval("X", pt(1), X.pos_inf("X"), False), 1)]))
        for omega in candidates:
            if verify_cocycle(phi, omega).strictly_positive:
                problems.append(f"strictly positive cocycle on a non-open map: {omega}")
    report(2, not problems, "; ".join(problems[:3]))


# 3 ------------------------------------------------------------------------------


def random_function(rng, space, nonnegative):
    """Degree <= 2 on bounded regions, constant on the unbounded ends."""
    regions = []
    for comp in space.components:
        lo = comp.left.value if comp.left.is_finite else Fraction(-3)
        hi = comp.right.value if comp.right.is_finite else Fraction(3)
        cuts = sorted({lo + (hi - lo) * Fraction(rng.randint(1, 20), 21) for _ in range(rng.randint(0, 3))})
        cuts = [c for c in cuts if not space.is_cut(comp.id, c)]
        ends = [comp.left] + [ExtPoint.finite(comp.id, c) for c in cuts] + [comp.right]
        for i, (a, b) in enumerate(zip(ends, ends[1:])):
            q = lambda: Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            if a.is_finite and b.is_finite:
                lin = Poly([q(), q()])
                p = lin * lin + Poly.const(abs(q())) if nonnegative else Poly([q(), q(), q()])
            else:
                p = Poly.const(abs(q()) if nonnegative else q())
            regions.append(Region(Interval(comp.id, a, b, i == 0, True), p))
    return PiecewiseFunction(space, tuple(regions))


def test_3_left_inverse_and_positivity():
    rng = random.Random(3)
    problems = []
    for phi, omega in verified_systems():
        assert verify_cocycle(phi, omega)
        for _ in range(25):
            f = random_function(rng, phi.target, nonnegative=False)
            if not transfer_apply(phi, omega, f.pullback(phi)).equals(f):
                problems.append(f"left inverse fails for {f}")
            g = random_function(rng, phi.space, nonnegative=True)
            assert g.is_nonnegative()
            if not transfer_apply(phi, omega, g).is_nonnegative():
                problems.append(f"positivity fails for {g}")
    report(3, not problems, "; ".join(problems[:3]))


# 4 ------------------------------------------------------------------------------


def test_4_path_independence():
    action = FreeSemigroupAction(
        (dyadic_translation(H), dyadic_translation(Fraction(1, 4))), (dyadic_cocycle(H), dyadic_cocycle(Fraction(1, 4)))
    )
    problems = []
    if not check_ddag(action):
        problems.append("generator cocycles incompatible")
    rng = random.Random(4)
    space = action.space
    points = []
    while len(points) < 20:
        comp = rng.choice(space.components)
        v = Fraction(rng.randint(-40, 40), rng.choice([3, 5, 7, 9]))
        if comp.left.is_finite and v < comp.left.value or comp.right.is_finite and v > comp.right.value:
            continue
        points.extend(p for p in space.points_with_value(comp.id, v) if p not in points)
    points = points[:20]
    for m in product(range(5), repeat=2):
        if sum(m) > 4:
            continue
        for x in points:
            value = extend_cocycle(action, m, x, checked=True)
            for path in factorization_paths(m):
                if path_product(action, path, x) != value:
                    problems.append(f"m={m}, x={x}, path {path}")
            d = m[0] * H + m[1] * Fraction(1, 4)
            if d and value != dyadic_cocycle(d)(x):
                problems.append(f"m={m}, x={x}: {value} differs from omega({d})")
    report(4, not problems, "; ".join(problems[:3]))


# 5 ------------------------------------------------------------------------------


def test_5_stratification_oracle():
    problems = []
    maps = [admiss_csli_map(), notadmiss2_map()] + [phi for phi, _ in local_homeo_maps()]
    for phi in maps:
        profile = stratify(phi)
        for s in profile.strata:
            iv = s.interval
            probes = [p for p in (iv.lo, iv.hi) if iv.contains(p)]
            if not iv.is_point:
                probes.append(phi.target.sample(iv))
            for y in probes:
                n = len(oracles.preimage(phi, y))
                if n != s.multiplicity:
                    problems.append(f"{y}: oracle {n}, stratum {s.multiplicity}")
        bad = upper_semicontinuity_violations(profile)
        if bad:
            problems.append(f"semicontinuity fails at {bad}")
    report(5, not problems, "; ".join(problems[:3]))


# 6 ------------------------------------------------------------------------------


def adversarial_attempts():
    A = admiss_csli_map()
    D = dyadic_translation(H)
    below0, above0 = CutPath("X", -1, 0, 0, 1), CutPath("X", 1, 0, 0, 1)
    x2 = lambda v, side=Side.INTERIOR: ExtPoint.finite("X2", v, side)
    x3 = lambda v, side=Side.INTERIOR: ExtPoint.finite("X3", v, side)
    third = Fraction(-1, 3)
    return [
        # 0- and 1 share a fiber; approach 1 from above
        NonAdmissibilityCertificate(A, pt(0, "-"), pt(1), below0, CutPath("X", 1, 1, 0, 1)),
        # approach 1 from below instead
        NonAdmissibilityCertificate(A, pt(0, "-"), pt(1), below0, CutPath("X", -1, 1, 0, 1)),
        # an ordinary doubled fiber
        NonAdmissibilityCertificate(A, pt(-H), pt(H), CutPath("X", 1, -H, 0, Fraction(1, 4)), CutPath("X", 1, H, 0, Fraction(1, 4))),
        # the fiber of 0+
        NonAdmissibilityCertificate(A, pt(-1, "+"), pt(0, "+"), CutPath("X", 1, -1, 0, H), above0),
        # a lone fiber has no second point to offer
        NonAdmissibilityCertificate(A, pt(-1, "-"), pt(0, "-"), CutPath("X", -1, -1, 0, 1), below0),
        # right points, paths swapped
        NonAdmissibilityCertificate(A, pt(0, "-"), pt(1), CutPath("X", 1, 1, 0, 1), below0),
        # a path with the wrong limit
        NonAdmissibilityCertificate(A, pt(0, "-"), pt(1), below0, CutPath("X", 1, 2, 0, 1)),
        # both copies of 0- under the half step
        NonAdmissibilityCertificate(D, x2(0, Side.MINUS), x3(0, Side.MINUS), CutPath("X2", -1, 0, 0, Fraction(1, 4)),
                                    CutPath("X3", -1, 0, 0, Fraction(1, 4))),
        # two copies of -1/3
        NonAdmissibilityCertificate(D, x2(third), x3(third), CutPath("X2", 1, third, 0, Fraction(1, 12)),
                                    CutPath("X3", 1, third, 0, Fraction(1, 12))),
        # a path running off the top of X2
        NonAdmissibilityCertificate(D, x2(0, Side.MINUS), x3(0, Side.MINUS), CutPath("X2", 1, -1, H, 2, "hi"),
                                    CutPath("X3", -1, 0, 0, Fraction(1, 4))),
    ]


def test_6_certificate_soundness():
    problems = []
    attempts = adversarial_attempts()
    assert len(attempts) == 10
    for i, cert in enumerate(attempts):
        assert verify_cocycle(admiss_csli_map(), admiss_csli_cocycle())
        if check_certificate(cert):
            problems.append(f"attempt {i} accepted")
    for cert in (notadmiss2_certificate(), seq_certificate()):
        for c in (cert, cert.reparametrized(H)):
            v = check_certificate(c)
            if not v:
                problems.append(f"gallery certificate rejected: {v}")
    report(6, not problems, "; ".join(problems))


# 7 ------------------------------------------------------------------------------


def test_7_necessary_but_not_sufficient():
    # The criterion asks for the condition to hold on notadmiss2 while its
    # certificate is valid. Over y = 1 the fiber is {0-, 0+} and neither point
    # is locally open, so the condition is violated; this test is expected to
    # fail and the reason is recorded in the decisions ledger.
    nc = necessary_condition(notadmiss2_map())
    cert = check_certificate(notadmiss2_certificate())
    detail = f"necessary_condition={'Satisfied' if nc else 'Violated'} (witness {nc.witness}), certificate={cert}"
    report(7, bool(nc) and bool(cert), detail)
