"""Command-line interface: ``csli <verb> ...``.

Exit status is 0 when every expected verdict recorded in the input matched,
1 on a mismatch and 2 on unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis
from .certificates import check_certificate
from .cocycle import (
    construct_branch_selection,
    construct_inverse_count,
    degeneracy,
    expectation,
    repair_continuity,
    transfer_apply,
    verify_cocycle,
)
from .errors import CsliError
from .gallery import GALLERY_NAMES, entry
from .pipeline import run_pipeline
from .semigroup import (
    FreeSemigroupAction,
    FundamentalSequence,
    canonical_path,
    check_dichotomy,
    check_ddag,
    check_separation,
    extend_cocycle,
    extend_cocycle_fn,
    find_collision,
)
from .serialize import (
    SchemaError,
    dec_certificate,
    dec_function,
    dec_point,
    dec_system,
    dumps,
    enc_function,
    enc_system,
)
from .system import SystemDescription, resolve_cocycles, resolve_map


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: line {err.lineno}", err.msg) from None


def _system(path: str) -> SystemDescription:
    return dec_system(_load(path))


def _need_map(s: SystemDescription):
    if s.map is None:
        raise SchemaError("map", f"system {s.name!r} has no map")
    return s.map


def _emit(args, result: dict, lines: list[str]) -> None:
    if args.json:
        print(dumps(result))
    else:
        print("\n".join(lines))


def _compare(s: SystemDescription, verdicts: dict) -> int:
    for k, v in s.expected.items():
        if k in verdicts:
            got = verdicts[k]
            if (list(v) if isinstance(v, tuple) else v) != (list(got) if isinstance(got, tuple) else got):
                return 1
    return 0


# -- verbs -----------------------------------------------------------------------


def cmd_analyze(args) -> int:
    s = _system(args.system)
    phi = _need_map(s)
    v = analysis.csli_verdict(phi)
    verdicts = {"csli": v.is_csli}
    result = {"name": s.name, "continuous": v.continuous, "surjective": v.surjective,
              "locally_injective": v.locally_injective, "witnesses": {k: str(w) for k, w in v.witnesses.items()}}
    lines = [f"{s.name}: CSLI {'yes' if v.is_csli else 'no'}"]
    if v.is_csli:
        profile = analysis.stratify(phi)
        verdicts["local_homeo"] = analysis.is_local_homeomorphism(phi, profile)
        nc = analysis.necessary_condition(phi)
        verdicts["necessary_condition"] = "satisfied" if nc else "violated"
        result["strata"] = [{"interval": str(st.interval), "multiplicity": st.multiplicity} for st in profile.strata]
        lines += [f"  {st.interval}  multiplicity {st.multiplicity}" for st in profile.strata]
        lines.append(f"  local homeomorphism: {'yes' if verdicts['local_homeo'] else 'no'}")
        lines.append(f"  necessary condition: {verdicts['necessary_condition']}"
                     + ("" if nc else f" (witness {nc.witness})"))
    else:
        lines += [f"  {k} fails at {w}" for k, w in v.witnesses.items()]
    result["verdicts"] = verdicts
    _emit(args, result, lines)
    return _compare(s, verdicts)


def _report_dict(rep) -> dict:
    return {"continuous": rep.continuous, "nonnegative": rep.nonnegative, "fiber_sums": rep.fiber_sums,
            "strictly_positive": rep.strictly_positive, "witnesses": {k: str(w) for k, w in rep.witnesses.items()}}


def cmd_cocycle_verify(args) -> int:
    s = _system(args.system)
    phi = _need_map(s)
    if s.cocycle is None:
        raise SchemaError("cocycle", "the system declares no cocycle")
    rep = verify_cocycle(phi, s.cocycle)
    verdicts = {"cocycle": "verified" if rep.ok else "failed"}
    if rep.ok:
        verdicts["degeneracy"] = degeneracy(s.cocycle)
    result = {"name": s.name, "report": _report_dict(rep), "verdicts": verdicts}
    lines = [f"{s.name}: cocycle {verdicts['cocycle']}"]
    lines += [f"  {k}: {getattr(rep, k)}" for k in ("continuous", "nonnegative", "fiber_sums", "strictly_positive")]
    lines += [f"  {k} fails at {w}" for k, w in rep.witnesses.items()]
    if rep.ok:
        lines.append(f"  expectation: {verdicts['degeneracy']}")
    _emit(args, result, lines)
    return _compare(s, verdicts)


def cmd_cocycle_construct(args) -> int:
    s = _system(args.system)
    phi = _need_map(s)
    if args.strategy == "inverse-count":
        built = construct_inverse_count(phi)
    elif args.strategy == "branch":
        built = construct_branch_selection(phi, force=args.force)
    else:
        cand = construct_branch_selection(phi, force=True)
        built = cand if cand.cocycle is None else repair_continuity(phi, cand.cocycle, dict(s.repair_targets))
    result = {"name": s.name, "strategy": args.strategy, "ok": built.ok, "reason": built.reason,
              "cocycle": None if built.cocycle is None else enc_function(built.cocycle)}
    lines = [f"{s.name}: {args.strategy} {'succeeded' if built.ok else 'rejected'}"]
    if built.reason:
        lines.append(f"  reason: {built.reason}")
    if built.cocycle is not None:
        lines.append(f"  omega = {built.cocycle}")
    _emit(args, result, lines)
    return 0 if built.ok else 1


def _function_arg(args, space):
    return dec_function(_load(args.function), space, "function")


def cmd_transfer(args) -> int:
    s = _system(args.system)
    phi = _need_map(s)
    f = _function_arg(args, phi.space)
    out = transfer_apply(phi, s.cocycle, f)
    _emit(args, {"name": s.name, "result": enc_function(out)}, [f"L f = {out}"])
    return 0


def cmd_expectation(args) -> int:
    s = _system(args.system)
    phi = _need_map(s)
    f = _function_arg(args, phi.space)
    out = expectation(phi, s.cocycle, f)
    deg = degeneracy(s.cocycle)
    _emit(args, {"name": s.name, "result": enc_function(out), "degeneracy": deg},
          [f"E f = {out}", f"expectation is {deg}"])
    return 0


def _family(s: SystemDescription):
    if s.family is None:
        raise SchemaError("family", f"system {s.name!r} has no family")
    return s.family


def _action(s: SystemDescription, generators: str | None) -> FreeSemigroupAction:
    fam = _family(s)
    maps, cocycles = resolve_map(fam.resolver), resolve_cocycles(fam.resolver)
    if generators:
        elems = [Fraction(g) for g in generators.split(",")]
    else:
        seq = FundamentalSequence(fam.head, fam.multipliers, maps)
        elems = [seq.element(2), seq.element(3)]
    return FreeSemigroupAction(tuple(maps(d) for d in elems), tuple(cocycles(d) for d in elems))


def cmd_ddag(args) -> int:
    s = _system(args.system)
    res = check_ddag(_action(s, args.generators))
    _emit(args, {"name": s.name, "ddag": res.ok, "witness": str(res.witness) if res.witness else None},
          [f"{s.name}: generator cocycles {'compatible' if res else 'incompatible'}"]
          + ([] if res else [f"  {res.detail}"]))
    return 0 if res else 1


def cmd_extend(args) -> int:
    s = _system(args.system)
    action = _action(s, args.generators)
    m = tuple(int(c) for c in args.index.split(","))
    if args.at:
        x = dec_point(json.loads(args.at), "at")
        value = extend_cocycle(action, m, x)
        _emit(args, {"index": list(m), "at": args.at, "value": str(value)}, [f"omega({m}, {x}) = {value}"])
        return 0
    phi, omega = extend_cocycle_fn(action, m)
    rep = verify_cocycle(phi, omega)
    _emit(args, {"index": list(m), "path": canonical_path(m), "cocycle": enc_function(omega), "verified": rep.ok},
          [f"omega({m}) = {omega}", f"  verified against phi_m: {rep.ok}"])
    return 0 if rep.ok else 1


def _sequence(s: SystemDescription) -> FundamentalSequence:
    fam = _family(s)
    return FundamentalSequence(fam.head, fam.multipliers, resolve_map(fam.resolver), fam.resolver)


def cmd_dichotomy(args) -> int:
    s = _system(args.system)
    res = check_dichotomy(_sequence(s), args.depth or _family(s).depth)
    verdicts = {"dichotomy": res.verdict.value}
    _emit(args, {"name": s.name, "verdicts": verdicts, "injective": {str(d): v for d, v in res.injective.items()}},
          [f"{s.name}: {res.verdict.value}"] + [f"  d = {d}: injective {v}" for d, v in res.injective.items()])
    return _compare(s, verdicts)


def cmd_collision(args) -> int:
    s = _system(args.system)
    seq = _sequence(s)
    cert = find_collision(seq, args.depth or _family(s).depth)
    if cert is None:
        _emit(args, {"name": s.name, "collision": None}, [f"{s.name}: NotFound"])
        return _compare(s, {"collision": None})
    verdicts = {"collision": (str(cert.u0), str(cert.v0))}
    sep = check_separation(seq, cert)
    _emit(args, {"name": s.name, "verdicts": {"collision": list(verdicts["collision"])}, "separation": sep,
                 "tested": [str(d) for d in cert.tested]},
          [f"{s.name}: collision {cert.u0}, {cert.v0}", f"  tested {len(cert.tested)} elements; {sep}"])
    return _compare(s, verdicts)


def cmd_certify(args) -> int:
    obj = _load(args.certificate)
    if "name" in obj:
        s = dec_system(obj)
        if s.certificate is None:
            raise SchemaError("certificate", "the system declares no certificate")
        cert = s.certificate
    else:
        s = None
        phi = _need_map(_system(args.system)) if args.system else None
        cert = dec_certificate(obj, phi, "")
    res = check_certificate(cert)
    _emit(args, {"valid": res.valid, "reason": res.reason}, [str(res)])
    if s is not None and "certificate" in s.expected:
        return _compare(s, {"certificate": "valid" if res else "invalid"})
    return 0 if res else 1


def cmd_gallery_list(args) -> int:
    rows = [(name, entry(name).note) for name in GALLERY_NAMES]
    _emit(args, {"gallery": [{"name": n, "note": t} for n, t in rows]}, [f"{n:15s} {t}" for n, t in rows])
    return 0


def _run_lines(report: dict) -> list[str]:
    lines = [f"{report['name']}: {'ok' if report['ok'] else 'MISMATCH'}"]
    for k, v in report["verdicts"].items():
        mark = ""
        if k in report["mismatches"]:
            mark = f"   (expected {report['mismatches'][k]['expected']})"
        lines.append(f"  {k}: {v}{mark}")
    return lines


def cmd_gallery_run(args) -> int:
    report = run_pipeline(entry(args.name))
    _emit(args, report, _run_lines(report))
    return 0 if report["ok"] else 1


def cmd_gallery_run_all(args) -> int:
    reports = [run_pipeline(entry(n)) for n in GALLERY_NAMES]
    lines = []
    for r in reports:
        lines += _run_lines(r)
    ok = all(r["ok"] for r in reports)
    lines.append("all verdicts matched" if ok else "some verdicts did not match")
    _emit(args, {"reports": reports, "ok": ok}, lines)
    return 0 if ok else 1


def cmd_gallery_export(args) -> int:
    print(dumps(enc_system(entry(args.name))))
    return 0


def cmd_run(args) -> int:
    report = run_pipeline(_system(args.system))
    _emit(args, report, _run_lines(report))
    return 0 if report["ok"] else 1


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="csli", description="Exact analysis of CSLI maps, cocycles and transfer operators.")
    sub = p.add_subparsers(dest="verb", required=True)

    a = sub.add_parser("analyze", parents=[common], help="CSLI checks, strata, openness")
    a.add_argument("system")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("run", parents=[common], help="full pipeline on a system file")
    r.add_argument("system")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("cocycle", help="verify or construct cocycles")
    csub = c.add_subparsers(dest="action", required=True)
    cv = csub.add_parser("verify", parents=[common])
    cv.add_argument("system")
    cv.set_defaults(func=cmd_cocycle_verify)
    cc = csub.add_parser("construct", parents=[common])
    cc.add_argument("system")
    cc.add_argument("--strategy", choices=["inverse-count", "branch", "branch+repair"], default="inverse-count")
    cc.add_argument("--force", action="store_true", help="pick a branch even when none is open")
    cc.set_defaults(func=cmd_cocycle_construct)

    t = sub.add_parser("transfer", help="apply the transfer operator")
    tsub = t.add_subparsers(dest="action", required=True)
    ta = tsub.add_parser("apply", parents=[common])
    ta.add_argument("system")
    ta.add_argument("--function", required=True, help="JSON file with the function's regions")
    ta.set_defaults(func=cmd_transfer)

    e = sub.add_parser("expectation", parents=[common], help="conditional expectation and degeneracy")
    e.add_argument("system")
    e.add_argument("--function", required=True)
    e.set_defaults(func=cmd_expectation)

    s = sub.add_parser("semigroup", help="free and divisible semigroup actions")
    ssub = s.add_subparsers(dest="action", required=True)
    for name, func in (("ddag", cmd_ddag), ("extend", cmd_extend)):
        q = ssub.add_parser(name, parents=[common])
        q.add_argument("system")
        q.add_argument("--generators", help="comma-separated family elements, e.g. 1/2,1/4")
        if name == "extend":
            q.add_argument("--index", required=True, help="multi-index, e.g. 2,1")
            q.add_argument("--at", help="JSON point at which to evaluate")
        q.set_defaults(func=func)
    for name, func in (("dichotomy", cmd_dichotomy), ("collision", cmd_collision)):
        q = ssub.add_parser(name, parents=[common])
        q.add_argument("system")
        q.add_argument("--depth", type=int)
        q.set_defaults(func=func)

    ce = sub.add_parser("certify", parents=[common], help="check a non-admissibility certificate")
    ce.add_argument("--certificate", required=True)
    ce.add_argument("--system", help="system file providing the map, for bare certificates")
    ce.set_defaults(func=cmd_certify)

    g = sub.add_parser("gallery", help="the built-in example systems")
    gsub = g.add_subparsers(dest="action", required=True)
    gl = gsub.add_parser("list", parents=[common])
    gl.set_defaults(func=cmd_gallery_list)
    gr = gsub.add_parser("run", parents=[common])
    gr.add_argument("name", choices=GALLERY_NAMES)
    gr.set_defaults(func=cmd_gallery_run)
    ga = gsub.add_parser("run-all", parents=[common])
    ga.set_defaults(func=cmd_gallery_run_all)
    gx = gsub.add_parser("export", help="print a gallery entry as a system file")
    gx.add_argument("name", choices=GALLERY_NAMES)
    gx.set_defaults(func=cmd_gallery_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CsliError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
