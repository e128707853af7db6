"""JSON documents for families, states and criterion results.

Matrices are stored as row-major lists of ``[re, im]`` pairs. Python's float
repr is shortest-round-trip, so load(dump(x)) reproduces every double.

Family document::

    {"type": "mum", "d": 3, "kappa": 0.5, "tag": "gell-mann",
     "elements": [[[re, im], ...], ...]}

MUM elements are listed b-major (``P_1^(1), ..., P_d^(1), P_1^(2), ...``).
For MUBs each entry of ``elements`` is one basis, its rows being the vectors.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .measurements import GsicSet, MubSet, MumSet
from .states import BipartiteState, make_state


def matrix_to_json(a) -> list:
    a = np.asarray(a, dtype=np.complex128)
    return [[float(z.real), float(z.imag)] for z in a.ravel()]


def matrix_from_json(entries, n: int) -> np.ndarray:
    arr = np.array(entries, dtype=float)
    if arr.shape != (n * n, 2):
        raise ValueError(f"expected {n * n} [re, im] pairs, got shape {arr.shape}")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(n, n)


def family_to_dict(family) -> dict:
    if isinstance(family, MubSet):
        return {"type": "mub", "d": family.d, "m": family.m,
                "elements": [matrix_to_json(b) for b in family.bases]}
    if isinstance(family, MumSet):
        return {"type": "mum", "d": family.d, "kappa": family.kappa, "tag": family.tag,
                "elements": [matrix_to_json(p) for p in family.flat]}
    if isinstance(family, GsicSet):
        return {"type": "gsic", "d": family.d, "alpha": family.alpha, "tag": family.tag,
                "elements": [matrix_to_json(q) for q in family.elements]}
    raise TypeError(f"cannot serialize {type(family).__name__}")


def family_from_dict(doc: dict):
    d = int(doc["d"])
    mats = np.array([matrix_from_json(e, d) for e in doc["elements"]])
    kind = doc["type"]
    if kind == "mub":
        return MubSet(d, mats)
    if kind == "mum":
        return MumSet(d, float(doc["kappa"]), mats.reshape(d + 1, d, d, d), doc.get("tag", "gell-mann"))
    if kind == "gsic":
        return GsicSet(d, float(doc["alpha"]), mats, doc.get("tag", "gell-mann"))
    raise ValueError(f"unknown family type {kind!r}")


def state_to_dict(state: BipartiteState) -> dict:
    return {"type": "state", "d": state.d, "provenance": state.provenance,
            "rho": matrix_to_json(state.rho)}


def state_from_dict(doc: dict, validate: bool = True) -> BipartiteState:
    d = int(doc["d"])
    return make_state(matrix_from_json(doc["rho"], d * d), d, doc.get("provenance"), validate)


def dump(obj, path) -> None:
    if isinstance(obj, BipartiteState):
        doc = state_to_dict(obj)
    elif hasattr(obj, "to_dict"):
        doc = obj.to_dict()
    else:
        doc = family_to_dict(obj)
    Path(path).write_text(json.dumps(doc, indent=1))


def load(path):
    doc = json.loads(Path(path).read_text())
    if doc.get("type") == "state":
        return state_from_dict(doc)
    return family_from_dict(doc)
