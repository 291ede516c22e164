"""Version ``v1`` JSON descriptions of quantales, categories, maps and controls.

A description file looks like::

    {
      "version": "v1",
      "quantale": "lawvere",
      "category": {"objects": ["a", "b"], "hom": [[0, 1], [1, 0]]},
      "map": {"a": "b", "b": "b"},
      "control": {"kind": "banach", "k": 0.5},
      "start": "a"
    }

or ``{"version": "v1", "fixture": "banach"}`` to refer to a named fixture.
Distances may be ``"inf"``; distributions are
``{"breakpoints": [..., "inf"], "values": [...]}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

from .cauchy import ObjectSequence
from .contraction import ControlFunction
from .instances import (
    banach_control,
    boyd_wong_control,
    delta_affine_control,
    delta_banach_control,
    get_fixture,
    identity_control,
    power_control,
)
from .qcat import QCategory
from .quantale import (
    TAU_EQ,
    BooleanQuantale,
    DeltaQuantale,
    FiniteQuantale,
    LawvereQuantale,
    Quantale,
    TNormQuantale,
    tnorm,
)
from .report import Report
from .stepdist import StepDistribution

__all__ = ["SchemaError", "Description", "parse_description", "parse_quantale", "to_jsonable", "SCHEMA_VERSION"]

SCHEMA_VERSION = "v1"


class SchemaError(ValueError):
    """A description does not follow the schema; ``path`` locates the problem."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _hashable(x):
    if isinstance(x, list):
        return tuple(_hashable(v) for v in x)
    return x


def parse_quantale(obj, tol: float = TAU_EQ, path: str = "quantale") -> Quantale:
    if obj == "boolean":
        return BooleanQuantale(tol)
    if obj == "lawvere":
        return LawvereQuantale(tol)
    if isinstance(obj, dict) and len(obj) == 1:
        (key, val), = obj.items()
        try:
            if key == "tnorm":
                return TNormQuantale(tnorm(val), tol)
            if key == "delta":
                if not isinstance(val, dict) or "tnorm" not in val:
                    raise SchemaError(f"{path}.delta", 'expected {"tnorm": ...}')
                return DeltaQuantale(tnorm(val["tnorm"]), tol)
        except KeyError as exc:
            raise SchemaError(f"{path}.{key}", str(exc)) from None
        if key == "finite":
            try:
                elements = [_hashable(e) for e in val["elements"]]
                tensor = None
                if "tensor" in val:
                    t = val["tensor"]
                    tensor = {
                        (a, b): _hashable(t[i][j]) for i, a in enumerate(elements) for j, b in enumerate(elements)
                    }
                unit = _hashable(val["unit"]) if "unit" in val else None
                return FiniteQuantale(elements, val["order"], tensor, unit, name=val.get("name", "finite"), tol=tol)
            except (KeyError, IndexError, TypeError, ValueError) as exc:
                raise SchemaError(f"{path}.finite", str(exc)) from None
    raise SchemaError(path, f"unknown quantale descriptor {obj!r}")


def parse_value(q: Quantale, obj, path: str):
    try:
        if isinstance(q, DeltaQuantale):
            if not isinstance(obj, dict):
                raise SchemaError(path, "expected a distribution object")
            return StepDistribution.from_json(obj)
        if isinstance(q, FiniteQuantale):
            return q.validate(_hashable(obj))
        if isinstance(q, BooleanQuantale) and isinstance(obj, bool):
            return int(obj)
        return q.validate(obj)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from None


def parse_control(q: Quantale, obj, path: str = "control") -> ControlFunction:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError(path, 'expected {"kind": ...}')
    kind = obj["kind"]
    try:
        if kind == "banach":
            _require(q, LawvereQuantale, path)
            return banach_control(float(obj.get("k", 0.5)))
        if kind == "boyd-wong-table":
            _require(q, LawvereQuantale, path)
            return boyd_wong_control(points=[tuple(p) for p in obj["points"]])
        if kind == "delta-affine":
            _require(q, DeltaQuantale, path)
            return delta_affine_control(q)
        if kind == "delta-banach":
            _require(q, DeltaQuantale, path)
            return delta_banach_control(float(obj.get("K", 2.0)), q)
        if kind == "power":
            _require(q, TNormQuantale, path)
            return power_control(q, float(obj.get("p", 0.5)))
        if kind == "identity":
            return identity_control(q)
        if kind == "table":
            _require(q, BooleanQuantale, path)
            table = {0: int(obj["values"][0]), 1: int(obj["values"][1])}
            return ControlFunction(q, table.__getitem__, f"table{obj['values']}")
    except SchemaError:
        raise
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from None
    raise SchemaError(f"{path}.kind", f"unknown control kind {kind!r}")


def _require(q, cls, path):
    if not isinstance(q, cls):
        raise SchemaError(path, f"control does not apply to quantale {q.name}")


@dataclass
class Description:
    quantale: Quantale
    category: QCategory
    endomap: Any = None
    control: Optional[ControlFunction] = None
    start: Any = None
    sequence: Optional[ObjectSequence] = None
    sample: Optional[list] = None
    fixture: Optional[str] = None
    horizon: Optional[int] = None

    def object(self, raw, path: str = "start"):
        """Resolve an object given in JSON form to a carrier object."""
        x = _hashable(raw)
        if self.category.is_finite:
            if x not in self.category:
                raise SchemaError(path, f"unknown object {raw!r}")
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            x = float(x)
        elif isinstance(x, tuple):
            x = tuple(float(v) if isinstance(v, int) and not isinstance(v, bool) else v for v in x)
        return x


def parse_description(doc: Any, tol: float = TAU_EQ) -> Description:
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    if doc.get("version") != SCHEMA_VERSION:
        raise SchemaError("version", f'required and must be "{SCHEMA_VERSION}"')
    if "fixture" in doc:
        try:
            fx = get_fixture(doc["fixture"])
        except KeyError as exc:
            raise SchemaError("fixture", exc.args[0]) from None
        if fx.category is None:
            raise SchemaError("fixture", f"{fx.name} is not a solvable fixture")
        d = Description(fx.category.quantale, fx.category, fx.endomap, fx.control, fx.start, fixture=fx.name, horizon=fx.horizon)
        if "start" in doc:
            d.start = d.object(doc["start"])
        return d

    if "quantale" not in doc:
        raise SchemaError("quantale", "missing")
    q = parse_quantale(doc["quantale"], tol)
    cat = doc.get("category")
    if not isinstance(cat, dict) or "objects" not in cat or "hom" not in cat:
        raise SchemaError("category", 'expected {"objects": [...], "hom": [[...]]}')
    objects = [_hashable(o) for o in cat["objects"]]
    hom = cat["hom"]
    if not isinstance(hom, list) or len(hom) != len(objects):
        raise SchemaError("category.hom", "must be a square matrix matching objects")
    matrix = []
    for i, row in enumerate(hom):
        if not isinstance(row, list) or len(row) != len(objects):
            raise SchemaError(f"category.hom[{i}]", "row length does not match objects")
        matrix.append([parse_value(q, v, f"category.hom[{i}][{j}]") for j, v in enumerate(row)])
    try:
        c = QCategory.finite(q, objects, matrix, name=cat.get("name", ""))
    except ValueError as exc:
        raise SchemaError("category", str(exc)) from None
    d = Description(q, c)

    if "map" in doc:
        m = doc["map"]
        if isinstance(m, list):
            if len(m) != len(objects):
                raise SchemaError("map", "list map must give one image per object")
            table = {x: d.object(y, f"map[{i}]") for i, (x, y) in enumerate(zip(objects, m))}
        elif isinstance(m, dict):
            table = {d.object(k if k in c else _key(k), f"map.{k}"): d.object(v, f"map.{k}") for k, v in m.items()}
            missing = [x for x in objects if x not in table]
            if missing:
                raise SchemaError("map", f"no image for {missing!r}")
        else:
            raise SchemaError("map", "expected a list or an object")
        d.endomap = table
    if "control" in doc:
        d.control = parse_control(q, doc["control"])
    if "start" in doc:
        d.start = d.object(doc["start"])
    if "sequence" in doc:
        s = doc["sequence"]
        try:
            prefix = [d.object(x, "sequence.prefix") for x in s.get("prefix", [])]
            cycle = [d.object(x, "sequence.cycle") for x in s["cycle"]]
            d.sequence = ObjectSequence.eventually_periodic(c, prefix, cycle, name="sequence")
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise SchemaError("sequence", str(exc)) from None
    if "sample" in doc:
        d.sample = [parse_value(q, v, f"sample[{i}]") for i, v in enumerate(doc["sample"])]
    return d


def _key(k: str):
    # JSON object keys are strings; numeric object labels are written as "0"
    try:
        v = float(k)
    except ValueError:
        return k
    return int(v) if v.is_integer() else v


def to_jsonable(v):
    """Plain JSON data for reports: ``inf`` as a string, distributions as objects."""
    if isinstance(v, StepDistribution):
        return v.to_json()
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, Report):
        return report_json(v)
    return repr(v)


def report_json(rep: Report) -> dict:
    return {
        "name": rep.name,
        "passed": rep.passed,
        "violations": [
            {"law": v.law, "witness": to_jsonable(list(v.witness)), "detail": v.detail} for v in rep.violations
        ],
        "notes": list(rep.notes),
    }
