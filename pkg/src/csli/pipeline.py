"""Run every applicable check on a system description and collect verdicts."""

from __future__ import annotations

from fractions import Fraction

from . import analysis
from .certificates import check_certificate
from .cocycle import (
    construct_branch_selection,
    construct_inverse_count,
    degeneracy,
    repair_continuity,
    verify_cocycle,
    verify_identity,
)
from .maps import compose, same_map
from .semigroup import FundamentalSequence, check_dichotomy, check_separation, find_collision
from .system import SystemDescription, resolve_cocycles, resolve_map


def _q(x: Fraction) -> str:
    return str(x)


def _cocycle_details(report) -> dict:
    return {
        "continuous": report.continuous,
        "nonnegative": report.nonnegative,
        "fiber_sums": report.fiber_sums,
        "strictly_positive": report.strictly_positive,
        "witnesses": {k: str(v) for k, v in sorted(report.witnesses.items())},
    }


def _map_checks(phi, verdicts: dict, details: dict) -> bool:
    v = analysis.csli_verdict(phi)
    verdicts["csli"] = v.is_csli
    details["csli"] = {
        "continuous": v.continuous,
        "surjective": v.surjective,
        "locally_injective": v.locally_injective,
        "witnesses": {k: str(w) for k, w in sorted(v.witnesses.items())},
    }
    if not v.is_csli:
        return False
    profile = analysis.stratify(phi)
    details["strata"] = [
        {"interval": str(s.interval), "multiplicity": s.multiplicity, "branches": sorted(s.branches)}
        for s in profile.strata
    ]
    details["level_sets"] = {str(j): [str(iv) for iv in ivs] for j, ivs in profile.level_sets.items()}
    details["level_images"] = {str(j): [str(iv) for iv in ivs] for j, ivs in profile.level_images.items()}
    verdicts["local_homeo"] = analysis.is_local_homeomorphism(phi, profile)
    nc = analysis.necessary_condition(phi)
    verdicts["necessary_condition"] = "satisfied" if nc else "violated"
    if not nc:
        details["necessary_condition_witness"] = str(nc.witness)
    inv = construct_inverse_count(phi)
    verdicts["strictly_positive_possible"] = bool(inv.ok and inv.report.strictly_positive)
    details["inverse_count"] = {"ok": inv.ok, "reason": inv.reason}
    return True


def _construct(desc: SystemDescription, phi):
    if desc.construct == "inverse-count":
        return construct_inverse_count(phi)
    if desc.construct == "branch":
        return construct_branch_selection(phi)
    candidate = construct_branch_selection(phi, force=True)
    if candidate.cocycle is None:
        return candidate
    return repair_continuity(phi, candidate.cocycle, dict(desc.repair_targets))


def _admissibility(verdicts: dict, details: dict) -> None:
    has_cocycle = verdicts.get("cocycle") == "verified"
    has_cert = verdicts.get("certificate") == "valid"
    if has_cocycle and has_cert:
        # impossible for a sound checker; surface it rather than pick a side
        verdicts["admissible"] = "unknown"
        details["conflict"] = "a verified cocycle and a valid certificate for the same system"
    elif has_cocycle:
        verdicts["admissible"] = "yes"
    elif has_cert:
        verdicts["admissible"] = "no"
    else:
        verdicts["admissible"] = "unknown"


def _run_map(desc: SystemDescription, verdicts: dict, details: dict) -> None:
    phi = desc.map
    if not _map_checks(phi, verdicts, details):
        return
    omega = desc.cocycle
    if desc.construct:
        built = _construct(desc, phi)
        details["construction"] = {
            "strategy": desc.construct,
            "ok": built.ok,
            "reason": built.reason,
            "cocycle": None if built.cocycle is None else str(built.cocycle),
        }
        if built.ok:
            if omega is not None:
                details["construction"]["matches_declared"] = built.cocycle.equals(omega)
            else:
                omega = built.cocycle
    if omega is not None:
        report = verify_cocycle(phi, omega)
        details["cocycle"] = _cocycle_details(report)
        verdicts["cocycle"] = "verified" if report.ok else "failed"
        if report.ok:
            verdicts["degeneracy"] = degeneracy(omega)


def _run_family(desc: SystemDescription, verdicts: dict, details: dict) -> None:
    fam = desc.family
    maps = resolve_map(fam.resolver)
    cocycles = resolve_cocycles(fam.resolver)
    seq = FundamentalSequence(fam.head, fam.multipliers, maps, fam.resolver)
    elements = sorted(set(fam.check_elements) | set(seq.elements(fam.depth)), reverse=True)

    per = {}
    for d in elements:
        phi, omega = maps(d), cocycles(d)
        v, dd = {}, {}
        if _map_checks(phi, v, dd):
            report = verify_cocycle(phi, omega)
            v["cocycle"] = "verified" if report.ok else "failed"
            v["degeneracy"] = degeneracy(omega) if report.ok else None
        per[_q(d)] = v
    details["elements"] = per
    for key in ("csli", "local_homeo", "strictly_positive_possible"):
        verdicts[key] = all(v.get(key) is True for v in per.values())
    verdicts["necessary_condition"] = (
        "satisfied" if all(v.get("necessary_condition") == "satisfied" for v in per.values()) else "violated"
    )
    verdicts["cocycle"] = "verified" if all(v.get("cocycle") == "verified" for v in per.values()) else "failed"
    if verdicts["cocycle"] == "verified":
        degenerate = any(v["degeneracy"] == "degenerate" for v in per.values())
        verdicts["degeneracy"] = "degenerate" if degenerate else "nondegenerate"

    failures = []
    checked = 0
    for d in fam.check_elements:
        e = fam.split_grid
        while e < d:
            f = d - e
            if not same_map(compose(maps(f), maps(e)), maps(d)):
                failures.append(f"{e} + {f}: maps do not compose to {d}")
            else:
                res = verify_identity(cocycles(d), cocycles(e), cocycles(f), maps(e))
                if not res:
                    failures.append(f"{e} + {f}: {res.detail}")
            checked += 1
            e += fam.split_grid
    verdicts["identities"] = not failures
    details["identities"] = {"checked": checked, "failures": failures}

    dich = check_dichotomy(seq, fam.depth)
    verdicts["dichotomy"] = dich.verdict.value
    details["dichotomy"] = {_q(d): inj for d, inj in dich.injective.items()}
    if dich.verdict.value == "NoneHomeo":
        cert = find_collision(seq, fam.depth)
        if cert is not None:
            verdicts["collision"] = (str(cert.u0), str(cert.v0))
            details["collision"] = {
                "u0": str(cert.u0),
                "v0": str(cert.v0),
                "tested": [_q(d) for d in cert.tested],
                "separation": check_separation(seq, cert),
            }


def run_pipeline(desc: SystemDescription) -> dict:
    verdicts: dict = {}
    details: dict = {}
    if desc.family is not None:
        _run_family(desc, verdicts, details)
    elif desc.map is not None:
        _run_map(desc, verdicts, details)
    if desc.certificate is not None:
        res = check_certificate(desc.certificate)
        verdicts["certificate"] = "valid" if res else "invalid"
        details["certificate"] = str(res)
        rep = check_certificate(desc.certificate.reparametrized(Fraction(1, 2)))
        details["certificate_reparametrized"] = str(rep)
    _admissibility(verdicts, details)

    mismatches = {
        k: {"expected": _plain(v), "got": _plain(verdicts.get(k))}
        for k, v in desc.expected.items()
        if _plain(verdicts.get(k)) != _plain(v)
    }
    return {
        "name": desc.name,
        "verdicts": {k: _plain(v) for k, v in verdicts.items()},
        "details": details,
        "expected": {k: _plain(v) for k, v in desc.expected.items()},
        "mismatches": mismatches,
        "ok": not mismatches,
    }


def _plain(v):
    return list(v) if isinstance(v, tuple) else v
