"""Declarative job files (TOML): groups, categories, quivers, group posets,
families, graphs of groups, and job defaults."""

from __future__ import annotations

import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .bass_serre import GraphOfGroups, validate_gog
from .category import EICategory, validate_ei
from .constructions import GPoset
from .groups import (FiniteGroup, GroupMap, Subgroup, cyclic_group,
                     family_closure, make_group, preset_group,
                     subgroup_closure)
from .quiver import Biset, EIQuiver


class InputError(ValueError):
    """Schema violation, dangling reference, or malformed table."""


@dataclass
class GogQuery:
    vertex: int
    subgroup: Subgroup


@dataclass
class JobSpec:
    groups: dict
    categories: dict
    quivers: dict
    gposets: dict
    families: dict          # name -> (group name, list of Subgroup)
    gogs: dict              # name -> (GraphOfGroups, base, [GogQuery])
    chars: list
    side: str
    oracle: bool
    seed: int
    limit_dim: int

    def all_target_names(self):
        return (sorted(self.categories) + sorted(self.quivers)
                + sorted(self.gposets) + sorted(self.gogs))


_TOP_KEYS = {"group", "category", "quiver", "gposet", "family", "gog", "job"}
_JOB_KEYS = {"chars", "side", "oracle", "seed", "limit_dim"}


def parse_input(text: str) -> JobSpec:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"TOML parse error: {exc}") from exc
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise InputError(f"unknown top-level sections: {sorted(unknown)}")

    groups = {}
    for name, body in sorted(doc.get("group", {}).items()):
        groups[name] = _parse_group(name, body)

    categories = {}
    for name, body in sorted(doc.get("category", {}).items()):
        categories[name] = _parse_category(name, body)

    quivers = {}
    for name, body in sorted(doc.get("quiver", {}).items()):
        quivers[name] = _parse_quiver(name, body, groups)

    gposets = {}
    for name, body in sorted(doc.get("gposet", {}).items()):
        gposets[name] = _parse_gposet(name, body, groups)

    families = {}
    for name, body in sorted(doc.get("family", {}).items()):
        families[name] = _parse_family(name, body, groups)

    gogs = {}
    for name, body in sorted(doc.get("gog", {}).items()):
        gogs[name] = _parse_gog(name, body, groups)

    job = doc.get("job", {})
    unknown = set(job) - _JOB_KEYS
    if unknown:
        raise InputError(f"unknown [job] keys: {sorted(unknown)}")
    chars = job.get("chars", [0])
    if not isinstance(chars, list) or not all(isinstance(c, int) for c in chars):
        raise InputError("[job] chars must be a list of integers")
    side = job.get("side", "both")
    if side not in ("left", "right", "both"):
        raise InputError("[job] side must be left, right, or both")
    limit_dim = job.get("limit_dim", 300)
    if limit_dim <= 0:
        raise InputError("[job] limit_dim must be positive")
    return JobSpec(groups, categories, quivers, gposets, families, gogs,
                   chars, side, bool(job.get("oracle", True)),
                   int(job.get("seed", 0)), limit_dim)


def parse_file(path) -> JobSpec:
    with open(path, "rb") as fh:
        text = fh.read().decode("utf-8")
    return parse_input(text)


def _require_keys(name, body, allowed, required=()):
    unknown = set(body) - set(allowed)
    if unknown:
        raise InputError(f"{name}: unknown keys {sorted(unknown)}")
    for key in required:
        if key not in body:
            raise InputError(f"{name}: missing required key {key!r}")


def _parse_group(name, body) -> FiniteGroup:
    _require_keys(f"group.{name}", body, {"preset", "table"})
    if "preset" in body:
        try:
            g = preset_group(body["preset"])
        except ValueError as exc:
            raise InputError(f"group.{name}: {exc}") from exc
        return g
    if "table" in body:
        try:
            return make_group(body["table"], name=name)
        except ValueError as exc:
            raise InputError(f"group.{name}: {exc}") from exc
    raise InputError(f"group.{name}: provide preset or table")


def _parse_category(name, body) -> EICategory:
    _require_keys(f"category.{name}", body,
                  {"objects", "morphisms", "identities", "compose"},
                  ("objects", "morphisms", "identities", "compose"))
    morphs = body["morphisms"]
    arrows = [None] * len(morphs)
    for rec in morphs:
        if set(rec) != {"id", "src", "dst"}:
            raise InputError(f"category.{name}: morphism records need id/src/dst")
        if not 0 <= rec["id"] < len(morphs) or arrows[rec["id"]] is not None:
            raise InputError(f"category.{name}: bad morphism id {rec['id']}")
        arrows[rec["id"]] = (rec["src"], rec["dst"])
    table = {}
    for triple in body["compose"]:
        if len(triple) != 3:
            raise InputError(f"category.{name}: compose entries are [g, f, gf]")
        table[(triple[0], triple[1])] = triple[2]
    try:
        return validate_ei(body["objects"], arrows, body["identities"], table)
    except ValueError as exc:
        raise InputError(f"category.{name}: {exc}") from exc


def _resolve_group(section, gname, groups) -> FiniteGroup:
    if gname not in groups:
        raise InputError(f"{section}: unknown group {gname!r}")
    return groups[gname]


def _parse_quiver(name, body, groups) -> EIQuiver:
    _require_keys(f"quiver.{name}", body, {"vertices", "arrows"}, ("vertices",))
    vgroups = tuple(_resolve_group(f"quiver.{name}", g, groups)
                    for g in body["vertices"])
    arrows = []
    for i, rec in enumerate(body.get("arrows", [])):
        _require_keys(f"quiver.{name}.arrows[{i}]", rec,
                      {"src", "dst", "size", "left", "right"},
                      ("src", "dst", "size", "left", "right"))
        arrows.append((rec["src"], rec["dst"],
                       Biset(rec["size"], rec["left"], rec["right"])))
    try:
        return EIQuiver(vgroups, tuple(arrows))
    except ValueError as exc:
        raise InputError(f"quiver.{name}: {exc}") from exc


def _parse_gposet(name, body, groups) -> GPoset:
    _require_keys(f"gposet.{name}", body,
                  {"points", "relations", "group", "action"}, ("points", "relations"))
    n = body["points"]
    leq = [[i == j for j in range(n)] for i in range(n)]
    for pair in body["relations"]:
        if len(pair) != 2:
            raise InputError(f"gposet.{name}: relations are [x, y] pairs")
        leq[pair[0]][pair[1]] = True
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if leq[x][y] and leq[y][z]:
                    leq[x][z] = True
    if "group" in body:
        grp = _resolve_group(f"gposet.{name}", body["group"], groups)
        action = tuple(tuple(p) for p in body.get("action", ()))
        if len(action) != grp.order:
            raise InputError(f"gposet.{name}: need one permutation per group element")
    else:
        grp = cyclic_group(1)
        action = (tuple(range(n)),)
    try:
        return GPoset(tuple(tuple(r) for r in leq), grp, action)
    except ValueError as exc:
        raise InputError(f"gposet.{name}: {exc}") from exc


def _parse_family(name, body, groups):
    _require_keys(f"family.{name}", body, {"group", "generators"},
                  ("group", "generators"))
    grp = _resolve_group(f"family.{name}", body["group"], groups)
    seeds = []
    for gens in body["generators"]:
        try:
            seeds.append(subgroup_closure(grp, gens))
        except ValueError as exc:
            raise InputError(f"family.{name}: {exc}") from exc
    return body["group"], family_closure(grp, seeds)


def _parse_gog(name, body, groups):
    _require_keys(f"gog.{name}", body, {"vertices", "edges", "base", "queries"},
                  ("vertices",))
    vgroups = tuple(_resolve_group(f"gog.{name}", g, groups)
                    for g in body["vertices"])
    records = []
    for i, rec in enumerate(body.get("edges", [])):
        _require_keys(f"gog.{name}.edges[{i}]", rec,
                      {"ends", "group", "embed_left", "embed_right"},
                      ("ends", "group", "embed_left", "embed_right"))
        egrp = _resolve_group(f"gog.{name}", rec["group"], groups)
        u, v = rec["ends"]
        try:
            emb_u = GroupMap(egrp, vgroups[u], tuple(rec["embed_left"]))
            emb_v = GroupMap(egrp, vgroups[v], tuple(rec["embed_right"]))
        except ValueError as exc:
            raise InputError(f"gog.{name}.edges[{i}]: {exc}") from exc
        records.append((u, v, egrp, emb_u, emb_v))
    try:
        gog = validate_gog(vgroups, records)
    except ValueError as exc:
        raise InputError(f"gog.{name}: {exc}") from exc
    base = body.get("base", 0)
    queries = []
    for i, rec in enumerate(body.get("queries", [])):
        _require_keys(f"gog.{name}.queries[{i}]", rec, {"vertex", "generators"},
                      ("vertex", "generators"))
        v = rec["vertex"]
        if not 0 <= v < len(vgroups):
            raise InputError(f"gog.{name}.queries[{i}]: vertex out of range")
        try:
            sub = subgroup_closure(vgroups[v], rec["generators"])
        except ValueError as exc:
            raise InputError(f"gog.{name}.queries[{i}]: {exc}") from exc
        queries.append(GogQuery(v, sub))
    return gog, base, queries
