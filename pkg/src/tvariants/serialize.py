"""JSON forms of semigroups, witnesses, egg-boxes and scaffolds."""

from __future__ import annotations

import numpy as np

from .constructions import Scaffold
from .green import EggBox
from .semigroup import FiniteSemigroup, ProductRule
from .transformation import Transformation
from .witness import IsoWitness, Verdict

SCHEMA_VERSION = 1


def _schema(kind: str) -> str:
    return f"tvariants.{kind}/{SCHEMA_VERSION}"


def _check_schema(d: dict, kind: str) -> None:
    if d.get("schema") != _schema(kind):
        raise ValueError(f"expected schema {_schema(kind)!r}, got {d.get('schema')!r}")


def rule_to_json(rule: ProductRule) -> dict:
    if rule.sandwich is None:
        return {"type": "plain"}
    return {"type": "sandwich", "sandwich": list(rule.sandwich.images)}


def rule_from_json(d: dict) -> ProductRule:
    if d["type"] == "plain":
        return ProductRule.plain()
    if d["type"] == "sandwich":
        return ProductRule.with_sandwich(Transformation(d["sandwich"]))
    raise ValueError(f"unknown rule type {d['type']!r}")


def semigroup_to_json(S: FiniteSemigroup) -> dict:
    return {
        "schema": _schema("semigroup"),
        "degree": S.degree,
        "rule": rule_to_json(S.rule),
        "elements": (S.rows + 1).tolist(),
    }


def semigroup_from_json(d: dict, check_closed: bool = True) -> FiniteSemigroup:
    _check_schema(d, "semigroup")
    rows = np.array(d["elements"], dtype=np.int64) - 1
    return FiniteSemigroup(rows, rule_from_json(d["rule"]), degree=d["degree"], check_closed=check_closed)


def witness_to_json(w: IsoWitness, verdict: Verdict | None = None) -> dict:
    out = {
        "schema": _schema("witness"),
        "label": w.label,
        "source": semigroup_to_json(w.source),
        "target": semigroup_to_json(w.target),
        "forward": [[i, int(j)] for i, j in enumerate(w.forward)],
    }
    if verdict is not None:
        out["verdict"] = verdict.to_json()
    return out


def witness_from_json(d: dict) -> IsoWitness:
    _check_schema(d, "witness")
    src = semigroup_from_json(d["source"])
    tgt = semigroup_from_json(d["target"])
    fwd = np.full(len(src), -1, dtype=np.int64)
    for i, j in d["forward"]:
        fwd[i] = j
    return IsoWitness(src, tgt, fwd, d.get("label", ""))


def scaffold_to_json(s: Scaffold) -> dict:
    return {"schema": _schema("scaffold"), **s.to_json()}


def eggbox_to_json(box: EggBox) -> dict:
    return {
        "schema": _schema("eggbox"),
        "size": box.size,
        "dclasses": [
            {
                "rank": d.rank,
                "rows": len(d.rows),
                "cols": len(d.cols),
                "h_size": d.h_size,
                "cells": [[None if c is None else {"size": len(c.elements), "group": c.group} for c in row]
                          for row in d.grid],
            }
            for d in box.dclasses
        ],
    }
