"""Rule systems: rules, rule inclusions, closure under composition, and checks."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .matching import find_monos
from .presheaf import (BaseCategory, Presheaf, PresheafMorphism, StructureError,
                       compose, identity, is_iso, is_mono, validate_morphism,
                       validate_presheaf)


class InvalidRuleSystem(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Rule:
    id: str
    lhs: Presheaf
    rhs: Presheaf


@dataclass(frozen=True, eq=False)
class RuleInclusion:
    id: str
    src: str
    dst: str
    lhs_map: PresheafMorphism
    rhs_map: PresheafMorphism

    @cached_property
    def key(self) -> tuple:
        return (self.src, self.dst, self.lhs_map.key())

    @cached_property
    def invertible(self) -> bool:
        return is_iso(self.lhs_map)


@dataclass(frozen=True, eq=False)
class RuleSystem:
    base: BaseCategory
    rules: Sequence[Rule]
    inclusions: Sequence[RuleInclusion] = ()
    closure: tuple[RuleInclusion, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "inclusions", tuple(self.inclusions))

    @cached_property
    def _rule_index(self) -> dict[str, int]:
        return {r.id: i for i, r in enumerate(self.rules)}

    def rule(self, rid: str) -> Rule:
        return self.rules[self._rule_index[rid]]

    def rule_order(self, rid: str) -> int:
        return self._rule_index[rid]

    def closed(self) -> RuleSystem:
        return self if self.closure is not None else close_under_composition(self)

    def into(self, rid: str) -> list[RuleInclusion]:
        """Closure members with target ``rid``."""
        return self._into.get(rid, [])

    def out_of(self, rid: str) -> list[RuleInclusion]:
        """Closure members with source ``rid``."""
        return self._out.get(rid, [])

    @cached_property
    def _into(self) -> dict[str, list[RuleInclusion]]:
        out: dict[str, list[RuleInclusion]] = {}
        for m in self._members:
            out.setdefault(m.dst, []).append(m)
        return out

    @cached_property
    def _out(self) -> dict[str, list[RuleInclusion]]:
        out: dict[str, list[RuleInclusion]] = {}
        for m in self._members:
            out.setdefault(m.src, []).append(m)
        return out

    @cached_property
    def _members(self) -> tuple[RuleInclusion, ...]:
        if self.closure is None:
            raise InvalidRuleSystem("closure not computed; call close_under_composition first")
        return self.closure

    @cached_property
    def minimal_rules(self) -> list[str]:
        """Rules with no incoming non-invertible inclusion."""
        return [r.id for r in self.rules
                if not any(not m.invertible for m in self.into(r.id))]


def identity_inclusion(r: Rule) -> RuleInclusion:
    return RuleInclusion(f"id_{r.id}", r.id, r.id, identity(r.lhs), identity(r.rhs))


def compose_inclusions(a: RuleInclusion, b: RuleInclusion) -> RuleInclusion:
    """``a`` followed by ``b``."""
    return RuleInclusion(f"{b.id}∘{a.id}", a.src, b.dst,
                         compose(a.lhs_map, b.lhs_map), compose(a.rhs_map, b.rhs_map))


def close_under_composition(rs: RuleSystem) -> RuleSystem:
    """Add identities and all composites, deduplicated by component equality.

    Raises :class:`InvalidRuleSystem` when two members share a left-hand map but
    disagree on the right-hand one (the right-hand side would not be a functor).
    """
    members: dict[tuple, RuleInclusion] = {}

    def add(m: RuleInclusion) -> bool:
        have = members.get(m.key)
        if have is None:
            members[m.key] = m
            return True
        if have.rhs_map.key() != m.rhs_map.key():
            raise InvalidRuleSystem(
                f"inclusions {have.id!r} and {m.id!r} have equal left maps "
                f"but different right maps")
        return False

    idents = set()
    for r in rs.rules:
        ident = identity_inclusion(r)
        add(ident)
        idents.add(ident.key)
    frontier = [m for m in rs.inclusions if add(m)]
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(members.values()):
                if b.key in idents:
                    continue
                for first, second in ((a, b), (b, a)):
                    if first.dst == second.src:
                        c = compose_inclusions(first, second)
                        if add(c):
                            fresh.append(c)
        frontier = fresh
    order = {r.id: i for i, r in enumerate(rs.rules)}
    closure = tuple(sorted(members.values(),
                           key=lambda m: (order[m.src], order[m.dst], m.lhs_map.key(),
                                          m.rhs_map.key())))
    return dataclasses.replace(rs, closure=closure)


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __str__(self) -> str:
        lines = [f"error: {e}" for e in self.errors] + [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines) if lines else "ok"


def validate_rule_system(rs: RuleSystem) -> ValidationReport:
    report = ValidationReport()
    err = report.errors.append
    ids = [r.id for r in rs.rules]
    if len(set(ids)) != len(ids):
        err("duplicate rule id")
    for r in rs.rules:
        for side, p in (("lhs", r.lhs), ("rhs", r.rhs)):
            if p.base != rs.base:
                err(f"rule {r.id!r}: {side} is over a different base")
                continue
            try:
                v = validate_presheaf(rs.base, p)
            except StructureError as exc:
                err(f"rule {r.id!r}: {side}: {exc}")
                continue
            if v is not None:
                err(f"rule {r.id!r}: {side}: {v}")
        if r.lhs.size == 0:
            err(f"rule {r.id!r}: empty left-hand side")
    known = set(ids)
    inc_ids = [i.id for i in rs.inclusions]
    if len(set(inc_ids)) != len(inc_ids):
        err("duplicate inclusion id")
    for inc in rs.inclusions:
        if inc.src not in known or inc.dst not in known:
            err(f"inclusion {inc.id!r}: unknown rule")
            continue
        for side, m in (("lhs_map", inc.lhs_map), ("rhs_map", inc.rhs_map)):
            v = validate_morphism(m)
            if v is not None:
                err(f"inclusion {inc.id!r}: {side}: {v}")
        if not is_mono(inc.lhs_map):
            err(f"inclusion {inc.id!r}: lhs_map is not a monomorphism")
        if not is_mono(inc.rhs_map):
            report.warnings.append(f"inclusion {inc.id!r}: rhs_map is not a monomorphism")
    if report.errors:
        return report
    try:
        closed = rs.closed()
    except InvalidRuleSystem as exc:
        err(str(exc))
        return report
    for r1 in closed.rules:
        for r2 in closed.rules:
            have = {m.lhs_map.key() for m in closed.out_of(r1.id) if m.dst == r2.id}
            for f in find_monos(r1.lhs, r2.lhs):
                if f.key() not in have:
                    err(f"no inclusion {r1.id!r} -> {r2.id!r} with left map {dict(f.components)}")
    return report


@dataclass(frozen=True)
class Counterexample:
    """Two sub-rules whose right-hand sides overlap with no common sub-rule explaining it."""

    rule: str
    inclusion1: str
    inclusion2: str
    sub_rule1: str
    sub_rule2: str
    obj: str
    element1: str
    element2: str

    def __str__(self) -> str:
        return (f"rule {self.rule!r}: {self.sub_rule1!r} --{self.inclusion1}--> {self.rule!r} "
                f"<--{self.inclusion2}-- {self.sub_rule2!r}; elements {self.element1!r} and "
                f"{self.element2!r} over {self.obj!r} meet with no common sub-rule")


def check_incremental(rs: RuleSystem) -> Counterexample | None:
    """Decide incrementality; ``None`` when every rule is incremental.

    Elements of a right-hand side over ``c`` stand for morphisms from the
    representable on ``c``, so the quantification is over element pairs.
    """
    rs = rs.closed()
    objects = rs.base.objects
    lhs_after: dict[tuple[int, int], tuple] = {}

    def lhs_key(a: RuleInclusion, b: RuleInclusion) -> tuple:
        k = (id(a), id(b))
        if k not in lhs_after:
            lhs_after[k] = compose(a.lhs_map, b.lhs_map).key()
        return lhs_after[k]

    def explained(i1, i2, c, x1, x2) -> bool:
        for r in rs.rules:
            for p1 in rs.out_of(r.id):
                if p1.dst != i1.src:
                    continue
                for p2 in rs.out_of(r.id):
                    if p2.dst != i2.src or lhs_key(p1, i1) != lhs_key(p2, i2):
                        continue
                    for x in r.rhs.carrier(c):
                        if p1.rhs_map(c, x) == x1 and p2.rhs_map(c, x) == x2:
                            return True
        return False

    for g in rs.rules:
        into = rs.into(g.id)
        for i1 in into:
            for i2 in into:
                for c in objects:
                    hits: dict[str, list[str]] = {}
                    for x2 in rs.rule(i2.src).rhs.carrier(c):
                        hits.setdefault(i2.rhs_map(c, x2), []).append(x2)
                    for x1 in rs.rule(i1.src).rhs.carrier(c):
                        for x2 in hits.get(i1.rhs_map(c, x1), ()):
                            if not explained(i1, i2, c, x1, x2):
                                return Counterexample(g.id, i1.id, i2.id, i1.src, i2.src,
                                                      c, x1, x2)
    return None
