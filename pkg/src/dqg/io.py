"""JSON instance files: loading with validation and emitting from built instances.

Scalars are written as "p/q" strings (or {"re": "p/q", "im": "p/q"} when not
real).  Basis elements are referenced by index, points and group elements by name.
"""

from __future__ import annotations

import json
from pathlib import Path

from dqg.algebroid import Algebroid
from dqg.base import Base, Group, InvalidInstance
from dqg.exactlin import gq, rational_str
from dqg.hopf import HopfData
from dqg.instance import Instance
from dqg.integrals import IntegralData


class InstanceParseError(InvalidInstance):
    """The file is not well-formed JSON; carries the offending line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"parse error: {where}{message}")


# loading ---------------------------------------------------------------

def _scalar(value, where: str):
    try:
        return gq(value)
    except (TypeError, ValueError) as exc:
        raise InvalidInstance(f"{where}: {exc}") from None


def _index(names: dict, key, where: str) -> int:
    if isinstance(key, int) and not isinstance(key, bool) and key in names.values():
        return key
    try:
        return names[str(key)]
    except KeyError:
        raise InvalidInstance(f"{where}: unknown name {key!r}") from None


def _basis_index(dim: int, k, where: str) -> int:
    if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k < dim:
        raise InvalidInstance(f"{where}: basis index {k!r} out of range")
    return k


def _sparse(entries, dim: int, where: str) -> dict:
    out: dict = {}
    for entry in entries:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise InvalidInstance(f"{where}: expected [index, coefficient], got {entry!r}")
        k = _basis_index(dim, entry[0], where)
        c = _scalar(entry[1], where)
        if c:
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def _b_element(section, points: dict, where: str) -> dict:
    if not isinstance(section, dict):
        raise InvalidInstance(f"{where}: expected {{point: coefficient}}, got {section!r}")
    out = {}
    for p, v in section.items():
        c = _scalar(v, where)
        if c:
            out[_index(points, p, where)] = c
    return out


def _base(section: dict) -> Base:
    try:
        points = tuple(str(p) for p in section["points"])
        grp = section["group"]
        elements = tuple(str(g) for g in grp["elements"])
        table = tuple(tuple(int(x) for x in row) for row in grp["table"])
        action = tuple(tuple(int(x) for x in row) for row in section["action"])
        wtab = section["weight"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInstance(f"base: malformed section ({exc!r})") from None
    if isinstance(wtab, dict):
        missing = [p for p in points if p not in wtab]
        if missing:
            raise InvalidInstance(f"base.weight: no value for points {missing}")
        wvals = [wtab[p] for p in points]
    else:
        wvals = list(wtab)
    weight = []
    for p, v in zip(points, wvals):
        c = _scalar(v, f"base.weight[{p}]")
        if c.im:
            raise InvalidInstance(f"base.weight[{p}]: weight must be real")
        weight.append(c.re)
    override = None
    if section.get("sqrt_cocycle") is not None:
        sq = section["sqrt_cocycle"]
        try:
            override = tuple(tuple(_scalar(sq[g][p], "base.sqrt_cocycle").re for p in points)
                             for g in elements)
        except (KeyError, TypeError) as exc:
            raise InvalidInstance(f"base.sqrt_cocycle: missing entry {exc}") from None
    return Base(points, Group(elements, table), action, tuple(weight), override).validate()


def _algebra(section: dict, base: Base) -> Algebroid:
    try:
        labels = tuple(str(x) for x in section["basis"])
        dim = len(labels)
        groups = {g: i for i, g in enumerate(base.group.elements)}
        points = {p: i for i, p in enumerate(base.points)}
        grading = tuple((_index(groups, d, "algebra.grading"), _index(groups, e, "algebra.grading"))
                        for d, e in section["grading"])
        mult: dict = {}
        for entry in section["mult"]:
            i, j, k, c = entry
            i, j, k = (_basis_index(dim, t, "algebra.mult") for t in (i, j, k))
            c = _scalar(c, "algebra.mult")
            if c:
                row = mult.setdefault((i, j), {})
                row[k] = row.get(k, 0) + c
        star: list = [{} for _ in range(dim)]
        for i, k, c in section["star"]:
            c = _scalar(c, "algebra.star")
            if c:
                star[_basis_index(dim, i, "algebra.star")][_basis_index(dim, k, "algebra.star")] = c
        r_img = [None] * base.n
        s_img = [None] * base.n
        for key, target in (("r", r_img), ("s", s_img)):
            for p, entries in section[key].items():
                target[_index(points, p, f"algebra.{key}")] = _sparse(entries, dim, f"algebra.{key}")
            if any(t is None for t in target):
                raise InvalidInstance(f"algebra.{key}: an image is missing for some point")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInstance):
            raise
        raise InvalidInstance(f"algebra: malformed section ({exc!r})") from None
    if len(grading) != dim:
        raise InvalidInstance("algebra.grading: one pair per basis element is required")
    mult = {key: {k: c for k, c in row.items() if c} for key, row in mult.items()}
    return Algebroid(base, labels, grading, {k: v for k, v in mult.items() if v}, tuple(star),
                     tuple(r_img), tuple(s_img), name=str(section.get("name", "A"))).validate()


def _hopf(section: dict, A: Algebroid) -> HopfData:
    base, dim = A.base, A.dim
    groups = {g: i for i, g in enumerate(base.group.elements)}
    points = {p: i for i, p in enumerate(base.points)}
    try:
        if len(section["delta"]) != dim or len(section["counit"]) != dim:
            raise InvalidInstance("hopf: delta and counit need one entry per basis element")
        delta = []
        for terms in section["delta"]:
            lift: dict = {}
            for k, l, c in terms:
                key = (_basis_index(dim, k, "hopf.delta"), _basis_index(dim, l, "hopf.delta"))
                c = _scalar(c, "hopf.delta")
                if c:
                    lift[key] = lift.get(key, 0) + c
            delta.append({k: c for k, c in lift.items() if c})
        counit = []
        for terms in section["counit"]:
            elt: dict = {}
            for g, p, c in terms:
                idx = _index(groups, g, "hopf.counit") * base.n + _index(points, p, "hopf.counit")
                c = _scalar(c, "hopf.counit")
                if c:
                    elt[idx] = elt.get(idx, 0) + c
            counit.append({k: c for k, c in elt.items() if c})
        antipode: list = [{} for _ in range(dim)]
        for i, k, c in section["antipode"]:
            c = _scalar(c, "hopf.antipode")
            if c:
                antipode[_basis_index(dim, i, "hopf.antipode")][_basis_index(dim, k, "hopf.antipode")] = c
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInstance):
            raise
        raise InvalidInstance(f"hopf: malformed section ({exc!r})") from None
    return HopfData(A, tuple(delta), tuple(counit), tuple(antipode))


def _integrals(section: dict, H: HopfData) -> IntegralData:
    base, dim = H.algebra.base, H.algebra.dim
    points = {p: i for i, p in enumerate(base.points)}
    try:
        phi = tuple(_b_element(e, points, "integrals.phi") for e in section["phi"])
        psi = tuple(_b_element(e, points, "integrals.psi") for e in section["psi"])
        h = None
        if section.get("h") is not None:
            rows = []
            for terms in section["h"]:
                elt = {}
                for x, y, c in terms:
                    c = _scalar(c, "integrals.h")
                    if c:
                        elt[(_index(points, x, "integrals.h"), _index(points, y, "integrals.h"))] = c
                rows.append(elt)
            h = tuple(rows)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInstance):
            raise
        raise InvalidInstance(f"integrals: malformed section ({exc!r})") from None
    if len(phi) != dim or len(psi) != dim or (h is not None and len(h) != dim):
        raise InvalidInstance("integrals: phi, psi and h need one entry per basis element")
    return IntegralData(H, phi, psi, h)


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise InvalidInstance("top level must be an object")
    missing = [k for k in ("base", "algebra", "hopf", "integrals") if k not in data]
    if missing:
        raise InvalidInstance([f"missing section {k!r}" for k in missing])
    base = _base(data["base"])
    A = _algebra(data["algebra"], base)
    H = _hopf(data["hopf"], A)
    I = _integrals(data["integrals"], H)
    return Instance(base, A, H, I, name=str(data.get("name", "instance")),
                    description=str(data.get("description", "")))


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(exc.msg, exc.lineno, exc.colno) from None
    return instance_from_dict(data)


def load_instance(path) -> Instance:
    """Read, parse and validate an instance file.  Raises InvalidInstance."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInstance(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


# emitting --------------------------------------------------------------

def _s(c) -> object:
    return gq(c).to_json()


def instance_to_dict(inst: Instance) -> dict:
    base, A, H, I = inst.base, inst.algebra, inst.hopf, inst.integrals
    pts, els = base.points, base.group.elements
    base_d = {
        "points": list(pts),
        "group": {"elements": list(els), "table": [list(r) for r in base.group.table]},
        "action": [list(r) for r in base.action],
        "weight": {p: rational_str(w) for p, w in zip(pts, base.weight)},
    }
    if base.sqrt_override is not None:
        base_d["sqrt_cocycle"] = {g: {p: rational_str(v) for p, v in zip(pts, row)}
                                  for g, row in zip(els, base.sqrt_override)}
    algebra = {
        "name": A.name,
        "basis": list(A.labels),
        "grading": [[els[d], els[e]] for d, e in A.grading],
        "mult": [[i, j, k, _s(c)] for (i, j), row in sorted(A.mult.items())
                 for k, c in sorted(row.items())],
        "star": [[i, k, _s(c)] for i, row in enumerate(A.star_img) for k, c in sorted(row.items())],
        "r": {p: [[k, _s(c)] for k, c in sorted(A.r_img[x].items())] for x, p in enumerate(pts)},
        "s": {p: [[k, _s(c)] for k, c in sorted(A.s_img[x].items())] for x, p in enumerate(pts)},
    }
    n = base.n
    hopf = {
        "delta": [[[k, l, _s(c)] for (k, l), c in sorted(row.items())] for row in H.delta],
        "counit": [[[els[idx // n], pts[idx % n], _s(c)] for idx, c in sorted(row.items())]
                   for row in H.counit],
        "antipode": [[i, k, _s(c)] for i, row in enumerate(H.antipode) for k, c in sorted(row.items())],
    }
    integrals = {
        "phi": [{pts[x]: _s(c) for x, c in sorted(row.items())} for row in I.phi],
        "psi": [{pts[x]: _s(c) for x, c in sorted(row.items())} for row in I.psi],
        "h": None if I.h is None else [[[pts[x], pts[y], _s(c)] for (x, y), c in sorted(row.items())]
                                       for row in I.h],
    }
    return {"name": inst.name, "description": inst.description, "base": base_d,
            "algebra": algebra, "hopf": hopf, "integrals": integrals}


def dumps(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=1)


def emit_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps(inst) + "\n")
