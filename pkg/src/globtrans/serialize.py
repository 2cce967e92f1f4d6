"""JSON encodings of base categories, presheaves, morphisms and rule systems."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .presheaf import BaseCategory, Generator, Presheaf, PresheafMorphism, StructureError
from .rules import Rule, RuleInclusion, RuleSystem


class FormatError(ValueError):
    """The payload does not have the expected shape."""


def base_to_json(b: BaseCategory) -> dict:
    return {
        "objects": list(b.objects),
        "morphisms": [{"name": g.name, "src": g.src, "dst": g.dst} for g in b.generators],
        "relations": [[list(l), list(r)] for l, r in b.relations],
    }


def base_from_json(data: Any) -> BaseCategory:
    try:
        return BaseCategory(
            tuple(data["objects"]),
            tuple(Generator(m["name"], m["src"], m["dst"]) for m in data.get("morphisms", [])),
            tuple((tuple(l), tuple(r)) for l, r in data.get("relations", [])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StructureError):
            raise
        raise FormatError(f"bad base category: {exc}") from exc


def presheaf_to_json(p: Presheaf) -> dict:
    return {
        "elements": {o: list(xs) for o, xs in p.elements.items()},
        "maps": {g: dict(sorted(m.items())) for g, m in p.maps.items()},
    }


def presheaf_from_json(data: Any, base: BaseCategory) -> Presheaf:
    try:
        elements = {str(o): [str(x) for x in xs] for o, xs in data["elements"].items()}
        maps = {str(g): {str(y): str(x) for y, x in m.items()}
                for g, m in data.get("maps", {}).items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"bad presheaf: {exc}") from exc
    for o in elements:
        if o not in base.objects:
            raise StructureError(f"unknown object {o!r}")
    names = {g.name for g in base.generators}
    for g in maps:
        if g not in names:
            raise StructureError(f"unknown generator {g!r}")
    return Presheaf(base, elements, maps)


def components_to_json(f: PresheafMorphism) -> dict:
    return {o: dict(sorted(c.items())) for o, c in f.components.items()}


def morphism_to_json(f: PresheafMorphism) -> dict:
    return {"components": components_to_json(f)}


def morphism_from_json(data: Any, source: Presheaf, target: Presheaf) -> PresheafMorphism:
    """Accepts ``{"components": {...}}`` or the bare components object."""
    try:
        comps = data["components"] if "components" in data else data
        comps = {str(o): {str(x): str(y) for x, y in c.items()} for o, c in comps.items()}
    except (TypeError, AttributeError) as exc:
        raise FormatError(f"bad morphism: {exc}") from exc
    for o in comps:
        if o not in source.base.objects:
            raise StructureError(f"unknown object {o!r}")
    return PresheafMorphism(source, target, comps)


def rule_system_to_json(rs: RuleSystem) -> dict:
    return {
        "base": base_to_json(rs.base),
        "rules": [{"id": r.id, "lhs": presheaf_to_json(r.lhs), "rhs": presheaf_to_json(r.rhs)}
                  for r in rs.rules],
        "inclusions": [{"id": i.id, "src": i.src, "dst": i.dst,
                        "lhs_map": components_to_json(i.lhs_map),
                        "rhs_map": components_to_json(i.rhs_map)}
                       for i in rs.inclusions],
    }


def rule_system_from_json(data: Any) -> RuleSystem:
    try:
        base = base_from_json(data["base"])
        rules = [Rule(str(r["id"]), presheaf_from_json(r["lhs"], base),
                      presheaf_from_json(r["rhs"], base)) for r in data["rules"]]
        by_id = {r.id: r for r in rules}
        incs = []
        for i in data.get("inclusions", []):
            src, dst = by_id.get(i["src"]), by_id.get(i["dst"])
            if src is None or dst is None:
                raise StructureError(f"inclusion {i['id']!r} names an unknown rule")
            incs.append(RuleInclusion(
                str(i["id"]), src.id, dst.id,
                morphism_from_json(i["lhs_map"], src.lhs, dst.lhs),
                morphism_from_json(i["rhs_map"], src.rhs, dst.rhs)))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad rule system: {exc}") from exc
    return RuleSystem(base, rules, incs)


def dumps(data: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc


def write_json(path: str | Path, data: Any) -> None:
    Path(path).write_text(dumps(data), encoding="utf-8")


def load_rule_system(path: str | Path) -> RuleSystem:
    return rule_system_from_json(read_json(path))


def load_presheaf(path: str | Path, base: BaseCategory) -> Presheaf:
    return presheaf_from_json(read_json(path), base)
