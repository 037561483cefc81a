"""JSON instance files.

Layout::

    {
      "kind": "c-kp",                      # "1-kp" | "c-kp" | "gc-kp"
      "capacity": {"c": 10},               # or {"c_sq": "40"}; gc-kp adds "c_re", "c_im"
      "im_scale_sq": "5/3",                # optional, symbolic-imaginary instances only
      "items": [{"id": 0, "re": 7, "im": "7/2", "value": 10}, ...]
    }

Numbers are JSON integers or ``"p/q"`` strings; JSON floats are rejected.
"""
from __future__ import annotations

import json
from pathlib import Path

from .core import (
    CapacitySpec,
    ComplexDemand,
    Instance,
    Item,
    Kind,
    format_rational,
    parse_rational,
)
from .errors import ContractError, ParseError

_TOP = {"kind", "capacity", "items", "im_scale_sq"}
_CAPACITY = {"c", "c_sq", "c_re", "c_im"}
_ITEM = {"id", "re", "im", "value"}


def _num(raw, where):
    if isinstance(raw, float):
        raise ParseError(f"{where}: floating-point literal {raw!r} not allowed; use 'p/q'")
    try:
        return parse_rational(raw)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def _keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ParseError(f"{where}: unknown field(s) {unknown}")
    missing = sorted(required - set(obj))
    if missing:
        raise ParseError(f"{where}: missing field(s) {missing}")


def instance_from_dict(doc) -> Instance:
    _keys(doc, _TOP, {"kind", "capacity", "items"}, "document")
    try:
        kind = Kind(doc["kind"])
    except ValueError:
        raise ParseError(f"kind: unknown problem kind {doc['kind']!r}") from None

    cap = doc["capacity"]
    _keys(cap, _CAPACITY, set(), "capacity")
    if ("c" in cap) == ("c_sq" in cap):
        raise ParseError("capacity: give exactly one of 'c' and 'c_sq'")
    extra = {k: _num(cap[k], f"capacity.{k}") for k in ("c_re", "c_im") if k in cap}
    try:
        if "c" in cap:
            c = _num(cap["c"], "capacity.c")
            if c <= 0:
                raise ParseError("capacity.c: must be positive")
            capacity = CapacitySpec(c * c, c, extra.get("c_re"), extra.get("c_im"))
        else:
            c_sq = _num(cap["c_sq"], "capacity.c_sq")
            capacity = CapacitySpec(c_sq, None, extra.get("c_re"), extra.get("c_im"))
    except ContractError as exc:
        raise ParseError(f"capacity: {exc}") from None

    rows = doc["items"]
    if not isinstance(rows, list):
        raise ParseError("items: expected an array")
    by_id = {}
    for pos, row in enumerate(rows):
        where = f"items[{pos}]"
        _keys(row, _ITEM, _ITEM, where)
        ident = row["id"]
        if isinstance(ident, bool) or not isinstance(ident, int) or ident < 0:
            raise ParseError(f"{where}.id: expected a nonnegative integer")
        if ident in by_id:
            raise ParseError(f"{where}.id: duplicate id {ident}")
        re_, im_ = _num(row["re"], f"{where}.re"), _num(row["im"], f"{where}.im")
        value = _num(row["value"], f"{where}.value")
        if re_ < 0 or im_ < 0:
            raise ParseError(f"{where}: negative demand component")
        if value <= 0:
            raise ParseError(f"{where}.value: must be positive")
        by_id[ident] = Item(ident, ComplexDemand(re_, im_), value)
    if sorted(by_id) != list(range(len(by_id))):
        raise ParseError("items: ids must be exactly 0..n-1")
    scale = _num(doc["im_scale_sq"], "im_scale_sq") if "im_scale_sq" in doc else 1
    try:
        return Instance(tuple(by_id[i] for i in range(len(by_id))), capacity, kind, scale)
    except ContractError as exc:
        raise ParseError(str(exc)) from None


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text, parse_float=lambda s: float(s))
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return instance_from_dict(doc)


def _out(q):
    return q.numerator if q.denominator == 1 else format_rational(q)


def instance_to_dict(instance: Instance) -> dict:
    cap = instance.capacity
    cap_doc = {"c": _out(cap.magnitude_exact)} if cap.magnitude_exact is not None \
        else {"c_sq": _out(cap.magnitude_sq)}
    if cap.cap_re is not None:
        cap_doc["c_re"] = _out(cap.cap_re)
        cap_doc["c_im"] = _out(cap.cap_im)
    doc = {"kind": instance.kind.value, "capacity": cap_doc}
    if instance.symbolic_imaginary:
        doc["im_scale_sq"] = _out(instance.im_scale_sq)
    doc["items"] = [{"id": it.id, "re": _out(it.demand.re), "im": _out(it.demand.im),
                     "value": _out(it.value)} for it in instance.items]
    return doc


def serialize_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2) + "\n"


def load_instance(path) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return parse_instance(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def save_instance(instance: Instance, path) -> None:
    Path(path).write_text(serialize_instance(instance), encoding="utf-8")
