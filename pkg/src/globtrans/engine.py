"""Applying a rule system to a presheaf: online accretive step, batch colimit, transport.

An *instance* is a rule together with a mono from its left-hand side into the
input.  Instances ordered by rule inclusions form a preorder; the batch step
takes the colimit of the right-hand sides over all of it, while the online step
walks it breadth-first from a minimal instance and glues one maximal instance
at a time onto the intermediate result.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator

from .colimit import Span, colimit_of_diagram, generalized_pushout, mediating
from .matching import extend_mono, find_monos, iter_monos
from .presheaf import (Cocone, Diagram, Presheaf, PresheafMorphism, compose,
                       disjoint_union, empty_presheaf, is_mono, prefixed)
from .rules import RuleInclusion, RuleSystem

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Instance:
    rule: str
    match: PresheafMorphism

    @cached_property
    def key(self) -> tuple:
        return (self.rule, self.match.key())

    def __eq__(self, other) -> bool:
        return isinstance(other, Instance) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Instance({self.rule}, {dict(self.match.components)})"


def all_instances(rs: RuleSystem, p: Presheaf) -> list[Instance]:
    return [Instance(r.id, f) for r in rs.rules for f in find_monos(r.lhs, p)]


def _sort_key(rs: RuleSystem, inst: Instance) -> tuple:
    return (rs.rule_order(inst.rule), inst.match.key())


def sub_instances(rs: RuleSystem, p: Presheaf, m: Instance, proper: bool = False
                  ) -> list[tuple[Instance, RuleInclusion]]:
    """Instances below ``m``, one entry per distinct instance, with the inclusion reaching it.

    ``proper`` skips inclusions whose left map is invertible (identities, symmetries).
    """
    rs = rs.closed()
    out: dict[Instance, RuleInclusion] = {}
    for e in rs.into(m.rule):
        if proper and e.invertible:
            continue
        n = Instance(e.src, compose(e.lhs_map, m.match))
        out.setdefault(n, e)
    return list(out.items())


def super_instances(rs: RuleSystem, p: Presheaf, n: Instance, proper: bool = False
                    ) -> list[tuple[Instance, RuleInclusion]]:
    """Instances above ``n``, found by extending its match along each outgoing inclusion."""
    rs = rs.closed()
    out: dict[Instance, RuleInclusion] = {}
    for e in rs.out_of(n.rule):
        if proper and e.invertible:
            continue
        for f in extend_mono(e.lhs_map, n.match):
            out.setdefault(Instance(e.dst, f), e)
    return list(out.items())


def _extensions(e: RuleInclusion, n: Instance) -> Iterator[PresheafMorphism]:
    fixed = {(o, e.lhs_map(o, x)): n.match(o, x)
             for o, comp in e.lhs_map.components.items() for x in comp}
    return iter_monos(e.lhs_map.target, n.match.target, fixed)


def is_maximal(rs: RuleSystem, p: Presheaf, n: Instance) -> bool:
    rs = rs.closed()
    return not any(next(_extensions(e, n), None) is not None
                   for e in rs.out_of(n.rule) if not e.invertible)


def representative(rs: RuleSystem, inst: Instance) -> Instance:
    """Least instance isomorphic to ``inst`` (reached through an invertible inclusion)."""
    rs = rs.closed()
    best = inst
    for e in rs.into(inst.rule):
        if e.invertible:
            other = Instance(e.src, compose(e.lhs_map, inst.match))
            if _sort_key(rs, other) < _sort_key(rs, best):
                best = other
    return best


def _minimal_candidates(rs: RuleSystem, p: Presheaf) -> Iterator[Instance]:
    for rid in rs.minimal_rules:
        for f in find_monos(rs.rule(rid).lhs, p):
            yield representative(rs, Instance(rid, f))


def find_any_minimal(rs: RuleSystem, p: Presheaf, exclude=frozenset()) -> Instance | None:
    """First instance of a minimal rule not in ``exclude`` (rule order, then match order)."""
    rs = rs.closed()
    return next((i for i in _minimal_candidates(rs, p) if i not in exclude), None)


@dataclass
class EngineState:
    """Live data of one online component: result so far, queue, processed edges, cocone legs."""

    P: Presheaf
    N: dict[Instance, None] = field(default_factory=dict)
    E: dict[Instance, set[Instance]] = field(default_factory=dict)
    C: dict[Instance, dict[str, dict[str, str]]] = field(default_factory=dict)
    visited_maximals: set[Instance] = field(default_factory=set)
    head: Instance | None = None

    def leg(self, n: Instance, rhs: Presheaf) -> PresheafMorphism:
        return PresheafMorphism(rhs, self.P, self.C[n])


@dataclass
class PushoutEvent:
    index: int
    maximal: Instance
    span_count: int
    leg_from_result: PresheafMorphism
    state: EngineState

    @property
    def mono(self) -> bool:
        return is_mono(self.leg_from_result)


@dataclass
class OnlineRun:
    result: Presheaf
    components: int = 0
    pushouts: int = 0
    non_mono_pushouts: list[int] = field(default_factory=list)
    max_queue: int = 0

    @property
    def accretive(self) -> bool:
        return not self.non_mono_pushouts


class _Online:
    def __init__(self, rs: RuleSystem, p: Presheaf,
                 observer: Callable[[PushoutEvent], None] | None = None):
        self.rs = rs.closed()
        self.p = p
        self.observer = observer
        self.seen: set[Instance] = set()
        self.dropped: set[Instance] = set()
        self.run = OnlineRun(empty_presheaf(p.base))
        self._maximal_supers: dict[Instance, list[Instance]] = {}

    def rhs(self, inst: Instance) -> Presheaf:
        return self.rs.rule(inst.rule).rhs

    def maximal_supers(self, n: Instance) -> list[Instance]:
        got = self._maximal_supers.get(n)
        if got is None:
            got = []
            for m, _ in super_instances(self.rs, self.p, n, proper=True):
                m = representative(self.rs, m)
                if m not in got and is_maximal(self.rs, self.p, m):
                    got.append(m)
            self._maximal_supers[n] = got
        return got

    def proper_subs(self, m: Instance) -> list[tuple[Instance, RuleInclusion]]:
        return [(n, e) for n, e in sub_instances(self.rs, self.p, m, proper=True)
                if representative(self.rs, n) == n]

    def execute(self) -> OnlineRun:
        parts = []
        for seed in _minimal_candidates(self.rs, self.p):
            if seed in self.seen:
                continue
            parts.append(self.component(seed))
        self.run.components = len(parts)
        if len(parts) == 1:
            self.run.result = parts[0]
        elif parts:
            self.run.result = disjoint_union(parts)[0]
        return self.run

    def component(self, seed: Instance) -> Presheaf:
        self.seen.add(seed)
        P, c0 = prefixed(self.rhs(seed), "0/")
        if is_maximal(self.rs, self.p, seed):
            return P
        st = EngineState(P, {seed: None}, {seed: set()}, {seed: c0.components})
        step = 0
        while st.N:
            n = st.head = next(iter(st.N))
            for m in self.maximal_supers(n):
                if m in st.E[n]:
                    continue
                assert m not in st.visited_maximals, "maximal instance processed twice"
                step += 1
                self.glue(st, m, step)
            self.drop(st, n)
        return st.P

    def glue(self, st: EngineState, m: Instance, step: int) -> None:
        subs = self.proper_subs(m)
        spans = []
        for n2, e in subs:
            assert n2 not in self.dropped, "gluing needs an instance that was already dropped"
            if n2 in st.N:
                spans.append(Span(self.rhs(n2), st.leg(n2, self.rhs(n2)), e.rhs_map))
        res = generalized_pushout(st.P, self.rhs(m), spans, prefix=f"{step}/")
        t = res.leg1
        self.run.pushouts += 1
        if not is_mono(t):
            self.run.non_mono_pushouts.append(self.run.pushouts)
            log.warning("gluing step %d merges elements of the intermediate result", step)
        if any(x != y for comp in t.components.values() for x, y in comp.items()):
            st.C = {k: {o: {x: t(o, y) for x, y in comp.items()} for o, comp in c.items()}
                    for k, c in st.C.items()}
        for n2, e in subs:
            st.E.setdefault(n2, set()).add(m)
            if n2 not in st.N:
                st.C[n2] = {o: {x: res.leg2(o, y) for x, y in comp.items()}
                            for o, comp in e.rhs_map.components.items()}
                st.N[n2] = None
                self.seen.add(n2)
        st.visited_maximals.add(m)
        self.seen.add(m)
        st.P = res.apex
        # Eagerly forget sub-instances whose maximal super-instances are all glued.
        for n2, _ in subs:
            if n2 != st.head and n2 in st.N:
                if all(x in st.E[n2] for x in self.maximal_supers(n2)):
                    self.drop(st, n2)
        self.run.max_queue = max(self.run.max_queue, len(st.N))
        if self.observer is not None:
            self.observer(PushoutEvent(self.run.pushouts, m, len(spans), t, st))

    def drop(self, st: EngineState, n: Instance) -> None:
        del st.N[n]
        del st.C[n]
        st.E.pop(n, None)
        self.dropped.add(n)


def run_online(rs: RuleSystem, p: Presheaf,
               observer: Callable[[PushoutEvent], None] | None = None) -> OnlineRun:
    """Online computation with bookkeeping (pushout count, accretiveness, queue size)."""
    return _Online(rs, p, observer).execute()


def online_step(rs: RuleSystem, p: Presheaf) -> Presheaf:
    return run_online(rs, p).result


def comma_diagram(rs: RuleSystem, p: Presheaf) -> Diagram:
    """Right-hand sides of every instance, with the inclusions between instances."""
    rs = rs.closed()
    insts = all_instances(rs, p)
    nodes = {i: rs.rule(i.rule).rhs for i in insts}
    arrows = []
    for m in insts:
        for n, e in sub_instances(rs, p, m):
            if n != m:
                arrows.append((n, m, e.rhs_map))
    return Diagram(nodes, arrows)


def batch_step(rs: RuleSystem, p: Presheaf) -> Cocone:
    d = comma_diagram(rs, p)
    if not d.nodes:
        return Cocone(d, empty_presheaf(p.base), {})
    return colimit_of_diagram(d)


def thinness_violations(rs: RuleSystem, p: Presheaf) -> int:
    """Pairs of instances joined by more than one comma morphism."""
    rs = rs.closed()
    insts = all_instances(rs, p)
    known = {i.key for i in insts}
    hits: Counter = Counter()
    for m in insts:
        for e in rs.into(m.rule):
            n_key = (e.src, compose(e.lhs_map, m.match).key())
            assert n_key in known
            hits[(n_key, m.key)] += 1
    return sum(1 for c in hits.values() if c > 1)


def transport(rs: RuleSystem, h: PresheafMorphism,
              source_step: Cocone | None = None, target_step: Cocone | None = None
              ) -> PresheafMorphism:
    """Image of a mono ``h: p >-> q``: the mediating map out of the batch result on ``p``."""
    bp = source_step or batch_step(rs, h.source)
    bq = target_step or batch_step(rs, h.target)
    legs = {i: bq.legs[Instance(i.rule, compose(i.match, h))] for i in bp.diagram.nodes}
    if not legs:
        return PresheafMorphism(bp.apex, bq.apex, {})
    return mediating(bp, Cocone(bp.diagram, bq.apex, legs))


def iterate(rs: RuleSystem, p: Presheaf, k: int) -> Presheaf:
    if k < 0:
        raise ValueError("k must be non-negative")
    for _ in range(k):
        p = online_step(rs, p)
    return p
