"""JSON (de)serialization of VRep / HRep with rationals written as "num/den"."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from ..exact import fmt_rat, rat
from .reps import HRep, VRep


def _vec(v):
    return [fmt_rat(x) for x in v]


def vrep_to_json(P: VRep) -> dict:
    out = {"kind": "vrep", "dim": P.dim,
           "vertices": [_vec(v) for v in P.vertices],
           "lineality": [_vec(v) for v in P.lineality]}
    if P.rays:
        out["rays"] = [_vec(v) for v in P.rays]
    if P.meta:
        out["meta"] = P.meta
    return out


def vrep_from_json(obj: dict) -> VRep:
    def vecs(key):
        return tuple(tuple(rat(x) for x in v) for v in obj.get(key, []))
    return VRep(obj["dim"], vecs("vertices"), vecs("lineality"), vecs("rays"),
                meta=dict(obj.get("meta", {})))


def hrep_to_json(H: HRep) -> dict:
    return {"kind": "hrep", "dim": H.dim,
            "inequalities": [{"a": _vec(a), "b": fmt_rat(b)} for a, b in H.inequalities],
            "equations": [{"a": _vec(a), "b": fmt_rat(b)} for a, b in H.equations],
            "infeasible": H.infeasible}


def hrep_from_json(obj: dict) -> HRep:
    def rows(key):
        return tuple((tuple(rat(x) for x in r["a"]), rat(r["b"])) for r in obj.get(key, []))
    return HRep(obj["dim"], rows("inequalities"), rows("equations"),
                bool(obj.get("infeasible", False)))


def save(rep: Union[VRep, HRep], path) -> None:
    obj = vrep_to_json(rep) if isinstance(rep, VRep) else hrep_to_json(rep)
    Path(path).write_text(json.dumps(obj, indent=1) + "\n")


def load(path) -> Union[VRep, HRep]:
    obj = json.loads(Path(path).read_text())
    kind = obj.get("kind")
    if kind is None:
        kind = "hrep" if "inequalities" in obj else "vrep"
    return vrep_from_json(obj) if kind == "vrep" else hrep_from_json(obj)


def save_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
