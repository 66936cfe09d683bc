"""JSON reading and writing of fans, fixed-point scenarios and cohomology.

Fan document::

    {"rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
     "max_cones": [[1, 2], [2, 0], [0, 1]],
     "pl": [0, 0, -2], "labels": ["v1", "v2", "v0"], "cone_labels": ["p1", "p2", "p3"]}

``pl``, ``labels`` and ``cone_labels`` are optional; cone indices are 0-based.

Scenario document (non-toric data)::

    {"rank": 2, "dim": 3, "name": "tolman",
     "fixed_points": [{"label": "p1", "weights": [[-1, 0], [0, -1], [-1, -1]],
                       "fiber": [[[0, 0], 1]]}, ...]}

``fiber`` is a list of ``[weight, multiplicity]`` pairs.

Cohomology document: ``{"triples": [[degree, weight, multiplicity], ...]}`` or
the bare list of triples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .charring import FormalCharacter, MorsePolynomial
from .errors import InputError
from .fan import Fan, FixedPointDatum, PLFunction, Scenario, fixed_point_data


@dataclass
class Loaded:
    scenario: Scenario
    fan: Optional[Fan] = None
    pl: Optional[PLFunction] = None


def _int_list(v, what):
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise InputError(f"{what} must be a list of integers, got {v!r}")
    return tuple(v)


def _require(doc, key):
    if key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


def fan_from_dict(doc: dict) -> tuple:
    rank = _require(doc, "rank")
    if not isinstance(rank, int) or rank < 1:
        raise InputError("rank must be a positive integer")
    rays = tuple(_int_list(r, "ray") for r in _require(doc, "rays"))
    cones = tuple(_int_list(c, "cone") for c in _require(doc, "max_cones"))
    kw = {}
    if "labels" in doc:
        kw["labels"] = tuple(str(x) for x in doc["labels"])
    if "cone_labels" in doc:
        kw["cone_labels"] = tuple(str(x) for x in doc["cone_labels"])
    fan = Fan(rank, rays, cones, **kw)
    pl = PLFunction(_int_list(doc["pl"], "pl")) if "pl" in doc else None
    return fan, pl


def fan_to_dict(fan: Fan, pl: Optional[PLFunction] = None) -> dict:
    doc = {
        "rank": fan.rank,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
    }
    if pl is not None:
        doc["pl"] = list(pl.values)
    if fan.labels:
        doc["labels"] = list(fan.labels)
    if fan.cone_labels:
        doc["cone_labels"] = list(fan.cone_labels)
    return doc


def scenario_from_dict(doc: dict) -> Scenario:
    rank = _require(doc, "rank")
    pts = []
    for entry in _require(doc, "fixed_points"):
        weights = tuple(_int_list(w, "isotropy weight") for w in _require(entry, "weights"))
        fiber = {}
        for pair in _require(entry, "fiber"):
            if not isinstance(pair, list) or len(pair) != 2:
                raise InputError(f"fiber entries are [weight, multiplicity] pairs, got {pair!r}")
            w, m = _int_list(pair[0], "fiber weight"), pair[1]
            if not isinstance(m, int):
                raise InputError("fiber multiplicities must be integers")
            fiber[w] = fiber.get(w, 0) + m
        pts.append(FixedPointDatum(str(_require(entry, "label")), weights, FormalCharacter(fiber, rank=rank)))
    dim = doc.get("dim", len(pts[0].isotropy_weights) if pts else 0)
    return Scenario(rank, dim, tuple(pts), name=str(doc.get("name", "")))


def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "rank": sc.rank,
        "dim": sc.dim,
        "name": sc.name,
        "fixed_points": [
            {
                "label": p.label,
                "weights": [list(w) for w in p.isotropy_weights],
                "fiber": [[list(w), c] for w, c in p.fiber_character.items()],
            }
            for p in sc.points
        ],
    }


def loaded_from_dict(doc: dict, name: str = "") -> Loaded:
    if not isinstance(doc, dict):
        raise InputError("input document must be an object")
    if "fixed_points" in doc:
        return Loaded(scenario_from_dict(doc))
    fan, pl = fan_from_dict(doc)
    if pl is None:
        pl = PLFunction.zero(fan)
    return Loaded(fixed_point_data(fan, pl, name=name or str(doc.get("name", ""))), fan, pl)


def loaded_to_dict(item: Loaded) -> dict:
    if item.fan is not None:
        return fan_to_dict(item.fan, item.pl)
    return scenario_to_dict(item.scenario)


def _read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load(path) -> Loaded:
    return loaded_from_dict(_read_json(path), name=Path(path).stem)


def save(item: Loaded, path) -> None:
    Path(path).write_text(json.dumps(loaded_to_dict(item), indent=1) + "\n")


def cohomology_from_data(doc, rank: int, n: int) -> MorsePolynomial:
    triples = doc["triples"] if isinstance(doc, dict) else doc
    if not isinstance(triples, list):
        raise InputError("cohomology must be a list of [degree, weight, multiplicity] triples")
    out = []
    for t in triples:
        if not isinstance(t, list) or len(t) != 3:
            raise InputError(f"bad cohomology triple {t!r}")
        k, w, m = t
        if not isinstance(k, int) or not isinstance(m, int):
            raise InputError(f"degree and multiplicity must be integers in {t!r}")
        out.append((k, _int_list(w, "weight"), m))
    return MorsePolynomial.from_triples(rank, n, out)


def load_cohomology(path, rank: int, n: int) -> MorsePolynomial:
    return cohomology_from_data(_read_json(path), rank, n)


def cohomology_to_data(p: MorsePolynomial) -> dict:
    return {"triples": [[k, list(w), c] for k, ch in enumerate(p.coeffs) for w, c in ch.items()]}
