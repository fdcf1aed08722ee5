"""JSON encoding of systems, functions and certificates.

Rationals are always ``{"num": int, "den": int}`` with ``den > 0``; points
are ``{"component", "value", "side"}``. Decoding errors name the JSON path
of the offending field.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .certificates import SEQUENCE_SYSTEM, CutPath, NonAdmissibilityCertificate
from .errors import CsliError, StructuralError
from .functions import PiecewiseFunction, Region
from .maps import Piece, PiecewiseMonotoneMap
from .poly import Poly
from .seqspace import Affine, SeqPath, SeqPoint
from .space import Component, CutKind, CutSpec, ExtPoint, Interval, OrderedCutSpace, Side
from .system import FamilySpec, SystemDescription


class SchemaError(CsliError, ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path


def _need(obj, key, path):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing field")
    return obj[key]


# -- atoms ------------------------------------------------------------------------


def enc_q(q) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def dec_q(obj, path="") -> Fraction:
    num, den = _need(obj, "num", path), _need(obj, "den", path)
    if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool) or den <= 0:
        raise SchemaError(path, "a rational needs integer num and positive integer den")
    return Fraction(num, den)


def enc_point(p: ExtPoint) -> dict:
    return {"component": p.component, "value": None if p.value is None else enc_q(p.value), "side": p.side.value}


def dec_point(obj, path="") -> ExtPoint:
    side = _need(obj, "side", path)
    try:
        side = Side(side)
    except ValueError:
        raise SchemaError(f"{path}.side", f"unknown side {side!r}") from None
    value = _need(obj, "value", path)
    value = None if value is None else dec_q(value, f"{path}.value")
    try:
        return ExtPoint(_need(obj, "component", path), value, side)
    except CsliError as err:
        raise SchemaError(path, str(err)) from None


def enc_interval(iv: Interval) -> dict:
    return {
        "component": iv.component,
        "lo": enc_point(iv.lo),
        "hi": enc_point(iv.hi),
        "lo_closed": iv.lo_closed,
        "hi_closed": iv.hi_closed,
    }


def dec_interval(obj, path="") -> Interval:
    return Interval(
        _need(obj, "component", path),
        dec_point(_need(obj, "lo", path), f"{path}.lo"),
        dec_point(_need(obj, "hi", path), f"{path}.hi"),
        bool(obj.get("lo_closed", True)),
        bool(obj.get("hi_closed", True)),
    )


def enc_space(space: OrderedCutSpace) -> dict:
    comps = []
    for c in space.components:
        cuts = {"kind": c.cuts.kind.value}
        if c.cuts.kind is CutKind.FINITE:
            cuts["values"] = [enc_q(v) for v in c.cuts.values]
        if c.cuts.bound is not None:
            cuts["bound"] = c.cuts.bound
        comps.append({"id": c.id, "left": enc_point(c.left), "right": enc_point(c.right), "cuts": cuts})
    return {"components": comps}


def dec_space(obj, path="") -> OrderedCutSpace:
    comps = []
    for i, c in enumerate(_need(obj, "components", path)):
        p = f"{path}.components[{i}]"
        cuts = _need(c, "cuts", p)
        try:
            kind = CutKind(_need(cuts, "kind", f"{p}.cuts"))
        except ValueError:
            raise SchemaError(f"{p}.cuts.kind", "unknown cut kind") from None
        values = tuple(dec_q(v, f"{p}.cuts.values[{j}]") for j, v in enumerate(cuts.get("values", [])))
        spec = CutSpec(kind, values, cuts.get("bound"))
        comps.append(
            Component(_need(c, "id", p), dec_point(_need(c, "left", p), f"{p}.left"),
                      dec_point(_need(c, "right", p), f"{p}.right"), spec)
        )
    try:
        return OrderedCutSpace(tuple(comps))
    except CsliError as err:
        raise SchemaError(path, str(err)) from None


def enc_map(phi: PiecewiseMonotoneMap) -> dict:
    out = {
        "pieces": [
            {"domain": enc_interval(p.domain), "target": p.target, "slope": enc_q(p.slope), "offset": enc_q(p.offset)}
            for p in phi.pieces
        ],
        "overrides": [{"point": enc_point(x), "image": enc_point(y)} for x, y in phi.overrides],
    }
    if phi.target_space is not None:
        out["target_space"] = enc_space(phi.target_space)
    return out


def dec_map(obj, space: OrderedCutSpace, path="") -> PiecewiseMonotoneMap:
    pieces = []
    for i, p in enumerate(_need(obj, "pieces", path)):
        q = f"{path}.pieces[{i}]"
        pieces.append(
            Piece(
                dec_interval(_need(p, "domain", q), f"{q}.domain"),
                _need(p, "target", q),
                dec_q(_need(p, "slope", q), f"{q}.slope"),
                dec_q(_need(p, "offset", q), f"{q}.offset"),
            )
        )
    overrides = tuple(
        (dec_point(_need(o, "point", f"{path}.overrides[{i}]")), dec_point(_need(o, "image", f"{path}.overrides[{i}]")))
        for i, o in enumerate(obj.get("overrides", []))
    )
    target = dec_space(obj["target_space"], f"{path}.target_space") if "target_space" in obj else None
    try:
        return PiecewiseMonotoneMap(space, tuple(pieces), overrides, target)
    except CsliError as err:
        raise SchemaError(path, str(err)) from None


def enc_function(f: PiecewiseFunction) -> dict:
    return {
        "regions": [
            {"interval": enc_interval(r.interval), "poly": [enc_q(c) for c in r.poly.coeffs]} for r in f.regions
        ]
    }


def dec_function(obj, space: OrderedCutSpace, path="") -> PiecewiseFunction:
    regions = []
    for i, r in enumerate(_need(obj, "regions", path)):
        q = f"{path}.regions[{i}]"
        coeffs = [dec_q(c, f"{q}.poly[{j}]") for j, c in enumerate(_need(r, "poly", q))]
        regions.append(Region(dec_interval(_need(r, "interval", q), f"{q}.interval"), Poly(coeffs)))
    try:
        return PiecewiseFunction(space, tuple(regions))
    except CsliError as err:
        raise SchemaError(path, str(err)) from None


# -- sequences and certificates ---------------------------------------------------------


def enc_seqpoint(x: SeqPoint) -> dict:
    return {
        "left_tail": enc_q(x.left_tail),
        "core": [enc_q(c) for c in x.core],
        "offset": x.offset,
        "right_tail": enc_q(x.right_tail),
    }


def dec_seqpoint(obj, path="") -> SeqPoint:
    return SeqPoint(
        dec_q(_need(obj, "left_tail", path), f"{path}.left_tail"),
        tuple(dec_q(c, f"{path}.core[{i}]") for i, c in enumerate(_need(obj, "core", path))),
        int(_need(obj, "offset", path)),
        dec_q(_need(obj, "right_tail", path), f"{path}.right_tail"),
    )


def _enc_affine(a: Affine) -> dict:
    return {"slope": enc_q(a.slope), "offset": enc_q(a.offset)}


def _dec_affine(obj, path) -> Affine:
    return Affine(dec_q(_need(obj, "slope", path), f"{path}.slope"), dec_q(_need(obj, "offset", path), f"{path}.offset"))


def enc_path(p) -> dict:
    common = {"t_lo": enc_q(p.t_lo), "t_hi": enc_q(p.t_hi), "limit_end": p.limit_end}
    if isinstance(p, CutPath):
        return {
            "kind": "cut",
            "component": p.component,
            "slope": enc_q(p.slope),
            "offset": enc_q(p.offset),
            "cut_side": p.cut_side.value,
            **common,
        }
    return {
        "kind": "sequence",
        "left": _enc_affine(p.left),
        "core": [_enc_affine(a) for a in p.core],
        "offset": p.offset,
        "right": _enc_affine(p.right),
        **common,
    }


def dec_path(obj, path=""):
    kind = _need(obj, "kind", path)
    t_lo = dec_q(_need(obj, "t_lo", path), f"{path}.t_lo")
    t_hi = dec_q(_need(obj, "t_hi", path), f"{path}.t_hi")
    end = obj.get("limit_end", "lo")
    try:
        if kind == "cut":
            return CutPath(
                _need(obj, "component", path),
                dec_q(_need(obj, "slope", path), f"{path}.slope"),
                dec_q(_need(obj, "offset", path), f"{path}.offset"),
                t_lo, t_hi, end, Side(obj.get("cut_side", "minus")),
            )
        if kind == "sequence":
            return SeqPath(
                _dec_affine(_need(obj, "left", path), f"{path}.left"),
                tuple(_dec_affine(a, f"{path}.core[{i}]") for i, a in enumerate(_need(obj, "core", path))),
                int(_need(obj, "offset", path)),
                _dec_affine(_need(obj, "right", path), f"{path}.right"),
                t_lo, t_hi, end,
            )
    except (CsliError, ValueError) as err:
        raise SchemaError(path, str(err)) from None
    raise SchemaError(f"{path}.kind", f"unknown path kind {kind!r}")


def enc_certificate(c: NonAdmissibilityCertificate) -> dict:
    seq = c.system == SEQUENCE_SYSTEM
    enc_pt = enc_seqpoint if seq else enc_point
    return {
        "system": SEQUENCE_SYSTEM if seq else "map",
        "a": enc_pt(c.a),
        "b": enc_pt(c.b),
        "path_a": enc_path(c.path_a),
        "path_b": enc_path(c.path_b),
    }


def dec_certificate(obj, phi: PiecewiseMonotoneMap | None, path="") -> NonAdmissibilityCertificate:
    system = _need(obj, "system", path)
    if system == SEQUENCE_SYSTEM:
        dec_pt, target = dec_seqpoint, SEQUENCE_SYSTEM
    elif system == "map":
        if phi is None:
            raise SchemaError(f"{path}.system", "certificate refers to a map but the system has none")
        dec_pt, target = dec_point, phi
    else:
        raise SchemaError(f"{path}.system", f"unknown system {system!r}")
    return NonAdmissibilityCertificate(
        target,
        dec_pt(_need(obj, "a", path), f"{path}.a"),
        dec_pt(_need(obj, "b", path), f"{path}.b"),
        dec_path(_need(obj, "path_a", path), f"{path}.path_a"),
        dec_path(_need(obj, "path_b", path), f"{path}.path_b"),
    )


# -- whole systems ----------------------------------------------------------------------


def _enc_verdict(v):
    return list(v) if isinstance(v, tuple) else v


def _dec_verdict(v):
    return tuple(v) if isinstance(v, list) else v


def enc_system(s: SystemDescription) -> dict:
    out: dict[str, Any] = {"name": s.name}
    if s.space is not None:
        out["space"] = enc_space(s.space)
    if s.sequence:
        out["space"] = {"sequence": SEQUENCE_SYSTEM}
    if s.map is not None:
        out["map"] = enc_map(s.map)
    if s.cocycle is not None:
        out["cocycle"] = enc_function(s.cocycle)
    if s.construct is not None:
        out["construct"] = s.construct
    if s.repair_targets:
        out["repair_targets"] = [{"point": enc_point(x), "value": enc_q(v)} for x, v in s.repair_targets]
    if s.certificate is not None:
        out["certificate"] = enc_certificate(s.certificate)
    if s.family is not None:
        f = s.family
        out["family"] = {
            "resolver": f.resolver,
            "head": enc_q(f.head),
            "multipliers": list(f.multipliers),
            "depth": f.depth,
            "check_elements": [enc_q(d) for d in f.check_elements],
            "split_grid": enc_q(f.split_grid),
        }
    out["expected"] = {k: _enc_verdict(v) for k, v in s.expected.items()}
    if s.note:
        out["note"] = s.note
    return out


def dec_system(obj) -> SystemDescription:
    name = _need(obj, "name", "")
    space = None
    sequence = False
    if "space" in obj:
        if isinstance(obj["space"], dict) and obj["space"].get("sequence") == SEQUENCE_SYSTEM:
            sequence = True
        else:
            space = dec_space(obj["space"], "space")
    needs_space = [k for k in ("map", "cocycle") if k in obj]
    if needs_space and space is None:
        raise SchemaError(needs_space[0], "needs a cut-line space")
    phi = dec_map(obj["map"], space, "map") if "map" in obj else None
    cocycle = dec_function(obj["cocycle"], space, "cocycle") if "cocycle" in obj else None
    targets = tuple(
        (dec_point(_need(t, "point", f"repair_targets[{i}]")), dec_q(_need(t, "value", f"repair_targets[{i}]")))
        for i, t in enumerate(obj.get("repair_targets", []))
    )
    cert = dec_certificate(obj["certificate"], phi, "certificate") if "certificate" in obj else None
    family = None
    if "family" in obj:
        f = obj["family"]
        family = FamilySpec(
            _need(f, "resolver", "family"),
            dec_q(_need(f, "head", "family"), "family.head"),
            tuple(_need(f, "multipliers", "family")),
            int(_need(f, "depth", "family")),
            tuple(dec_q(d, f"family.check_elements[{i}]") for i, d in enumerate(f.get("check_elements", []))),
            dec_q(f["split_grid"], "family.split_grid") if "split_grid" in f else Fraction(1, 8),
        )
    try:
        return SystemDescription(
            name,
            space=space,
            map=phi,
            cocycle=cocycle,
            construct=obj.get("construct"),
            repair_targets=targets,
            certificate=cert,
            family=family,
            sequence=sequence,
            expected={k: _dec_verdict(v) for k, v in obj.get("expected", {}).items()},
            note=obj.get("note", ""),
        )
    except StructuralError as err:
        raise SchemaError("", str(err)) from None


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def to_json(s: SystemDescription) -> str:
    return dumps(enc_system(s))


def from_json(text: str) -> SystemDescription:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(f"line {err.lineno}", err.msg) from None
    return dec_system(obj)
