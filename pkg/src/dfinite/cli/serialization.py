"""JSON forms of the core objects.

Scalars are decimal strings ``"n"`` or ``"n/d"`` (Gaussian values as
``{"re", "im"}``, parameter expressions as strings); polynomials are dense arrays
indexed by degree.  Every ``to_json`` has a matching ``from_json`` returning an
equal object.
"""

from __future__ import annotations

import json

from gmpy2 import mpq

from ..exact import QQ, QQI, GaussRat, Poly, RatFunc, field_for
from ..ore import OrePoly, OreRing


def field_json(F) -> dict:
    return {"params": list(F.params), "complex": bool(F.is_complex)}


def field_from_json(d) -> object:
    return field_for(tuple(d.get("params", ())), bool(d.get("complex", False)))


def scalar_json(a, F):
    return F.to_json(a)


def poly_json(p: Poly) -> list:
    return [p.field.to_json(c) for c in p.c]


def poly_from_json(arr, F) -> Poly:
    return Poly([F.from_json(v) for v in arr], F)


def ratfunc_json(r: RatFunc):
    if r.den.deg == 0 and r.den.c[0] == r.den.field.one:
        return poly_json(r.num)
    return {"num": poly_json(r.num), "den": poly_json(r.den)}


def ratfunc_from_json(v, F) -> RatFunc:
    if isinstance(v, dict):
        return RatFunc(poly_from_json(v["num"], F), poly_from_json(v["den"], F))
    return RatFunc.from_poly(poly_from_json(v, F))


def ring_json(R: OreRing) -> dict:
    return {"kind": R.kind, "var": R.var, "gen": R.gen, **field_json(R.base)}


def ring_from_json(d) -> OreRing:
    return OreRing(d["kind"], d["var"], d.get("gen"), field_from_json(d))


def operator_json(P: OrePoly) -> dict:
    out = {"ring": ring_json(P.ring), "coeffs": [ratfunc_json(c) for c in P.coeffs]}
    if P.low:
        out["low"] = P.low
    return out


def operator_from_json(d) -> OrePoly:
    R = ring_from_json(d["ring"])
    F = R.base
    return OrePoly(R, [ratfunc_from_json(c, F) for c in d["coeffs"]], d.get("low", 0))


def point_json(a):
    if isinstance(a, GaussRat):
        return QQI.to_json(a)
    return str(mpq(a))


def point_from_json(v):
    if isinstance(v, dict):
        z = GaussRat(v["re"], v.get("im", "0"))
        return z if z.im != 0 else z.re
    return mpq(str(v))


def function_json(f) -> dict:
    R = f.ann.ring
    F = f.field
    out = {
        "variable": R.var,
        "parameters": list(R.params),
        "generator": R.gen,
        "annihilator": [poly_json(p) for p in f.ann.poly_coeffs()],
        "point": point_json(f.point),
        "initial": [F.to_json(v) for v in f.initial],
    }
    if f.radius is not None:
        out["radius"] = str(mpq(f.radius))
    return out


def _complex_entries(values) -> bool:
    return any(isinstance(v, dict) for v in values)


def function_from_json(d):
    from ..holonomic import DFiniteFunction

    params = tuple(d.get("parameters", ()))
    cplx = _complex_entries([c for row in d["annihilator"] for c in row])
    R = OreRing.diff(d["variable"], field_for(params, cplx), d.get("generator"))
    F = R.base
    ann = OrePoly(R, [RatFunc.from_poly(poly_from_json(row, F)) for row in d["annihilator"]])
    point = point_from_json(d.get("point", "0"))
    radius = mpq(d["radius"]) if "radius" in d else None
    init_field = QQI if (radius is not None or _complex_entries(d["initial"])
                         or isinstance(point, GaussRat)) and not params else F
    initial = tuple(init_field.from_json(v) for v in d["initial"])
    return DFiniteFunction(ann, initial, point, radius)


def sequence_json(s) -> dict:
    R = s.ann.ring
    F = s.field
    out = {
        "offsetVariable": R.var,
        "parameters": list(R.params),
        "generator": R.gen,
        "annihilator": [poly_json(p) for p in s.ann.poly_coeffs()],
        "initial": [F.to_json(v) for v in s.initial],
    }
    if s.ann.low:
        out["low"] = s.ann.low
    return out


def sequence_from_json(d):
    from ..holonomic import PRecSequence

    params = tuple(d.get("parameters", ()))
    cplx = _complex_entries([c for row in d["annihilator"] for c in row] + list(d["initial"]))
    R = OreRing.shift(d.get("offsetVariable", "n"), field_for(params, cplx), d.get("generator"))
    F = R.base
    ann = OrePoly(R, [RatFunc.from_poly(poly_from_json(row, F)) for row in d["annihilator"]],
                  d.get("low", 0))
    return PRecSequence(ann, tuple(F.from_json(v) for v in d["initial"]))


# ---------------------------------------------------------------- tagged values


def to_json(obj) -> dict:
    """Tagged JSON for any core object."""
    from ..algcert import AlgSeries
    from ..holonomic import DFiniteFunction, PRecSequence

    if isinstance(obj, OrePoly):
        return {"type": "operator", "value": operator_json(obj)}
    if isinstance(obj, DFiniteFunction):
        return {"type": "function", "value": function_json(obj)}
    if isinstance(obj, PRecSequence):
        return {"type": "sequence", "value": sequence_json(obj)}
    if isinstance(obj, AlgSeries):
        return {"type": "algebraic", "value": obj.to_json(),
                "field": field_json(obj.field)}
    if isinstance(obj, Poly):
        return {"type": "poly", "value": poly_json(obj), "field": field_json(obj.field)}
    if isinstance(obj, RatFunc):
        return {"type": "ratfunc", "value": ratfunc_json(obj), "field": field_json(obj.field)}
    if isinstance(obj, GaussRat):
        return {"type": "scalar", "value": QQI.to_json(obj)}
    if isinstance(obj, (int, type(mpq(0)))):
        return {"type": "scalar", "value": str(mpq(obj))}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json(d):
    from ..algcert import AlgSeries

    t, v = d["type"], d["value"]
    if t == "operator":
        return operator_from_json(v)
    if t == "function":
        return function_from_json(v)
    if t == "sequence":
        return sequence_from_json(v)
    if t == "algebraic":
        return AlgSeries.from_json(v, field_from_json(d.get("field", {})))
    if t == "poly":
        return poly_from_json(v, field_from_json(d.get("field", {})))
    if t == "ratfunc":
        return ratfunc_from_json(v, field_from_json(d.get("field", {})))
    if t == "scalar":
        return point_from_json(v)
    raise ValueError(f"unknown object type {t!r}")


def dumps(obj) -> str:
    return json.dumps(to_json(obj), sort_keys=True)


def loads(text: str):
    return from_json(json.loads(text))


# ---------------------------------------------------------------- sessions


class Session:
    """Named objects plus parameter declarations, stored as one JSON file."""

    def __init__(self, params=(), mode: str = "text"):
        self.params = tuple(params)
        self.mode = mode
        self._bindings: dict[str, dict] = {}

    def bind(self, name: str, obj):
        if not name.isidentifier():
            raise ValueError(f"invalid binding name {name!r}")
        self._bindings[name] = to_json(obj)

    def get(self, name: str):
        if name not in self._bindings:
            raise KeyError(f"no binding named {name!r}")
        return from_json(self._bindings[name])

    def names(self):
        return sorted(self._bindings)

    def __contains__(self, name):
        return name in self._bindings

    def to_json(self) -> dict:
        return {"params": list(self.params), "mode": self.mode,
                "bindings": {k: self._bindings[k] for k in sorted(self._bindings)}}

    @classmethod
    def from_json(cls, d) -> "Session":
        s = cls(d.get("params", ()), d.get("mode", "text"))
        for k, v in d.get("bindings", {}).items():
            s._bindings[k] = v
        return s

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, sort_keys=True, indent=1)

    @classmethod
    def load(cls, path) -> "Session":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


__all__ = [
    "Session", "dumps", "loads", "to_json", "from_json", "operator_json", "operator_from_json",
    "function_json", "function_from_json", "sequence_json", "sequence_from_json", "poly_json",
    "poly_from_json", "QQ",
]
