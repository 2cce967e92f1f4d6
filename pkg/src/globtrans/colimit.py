"""Colimits of finite presheaf diagrams by quotienting elements."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .presheaf import Cocone, Diagram, Presheaf, PresheafMorphism


class UnionFind:
    """Disjoint sets over hashable items, path compression and union by size."""

    def __init__(self):
        self.parent: dict = {}
        self.size: dict = {}

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _quotient(base, uf: UnionFind, members_of, name_of, act) -> tuple[Presheaf, dict]:
    """Build the quotient presheaf; ``members_of[o]`` lists keys over ``o``.

    Returns the apex and a map ``key -> class name``.
    """
    elements: dict[str, list[str]] = {}
    cls_name: dict = {}
    for o in base.objects:
        groups: dict = {}
        for k in members_of[o]:
            groups.setdefault(uf.find((o, k)), []).append(k)
        names = []
        for ks in groups.values():
            n = name_of(o, ks)
            names.append(n)
            for k in ks:
                cls_name[(o, k)] = n
        elements[o] = names
    maps: dict[str, dict[str, str]] = {}
    for g in base.generators:
        m: dict[str, str] = {}
        for k in members_of[g.dst]:
            y = cls_name[(g.dst, k)]
            x = cls_name[(g.src, act(g.name, k))]
            assert m.setdefault(y, x) == x, "induced action is not well defined"
        maps[g.name] = m
    return Presheaf(base, elements, maps), cls_name


def colimit_of_diagram(d: Diagram) -> Cocone:
    """Universal cocone over ``d``.

    The apex carrier over ``c`` is the disjoint union of the node carriers over
    ``c`` modulo the equivalence generated by the arrows.  A class is named by
    its least member ``"<node index>/<element>"``.
    """
    keys = list(d.nodes)
    if not keys:
        raise ValueError("colimit of the empty diagram needs a base; use an empty presheaf")
    base = d.nodes[keys[0]].base
    index = {k: i for i, k in enumerate(keys)}
    uf = UnionFind()
    members: dict[str, list] = {o: [] for o in base.objects}
    for k in keys:
        for o, xs in d.nodes[k].elements.items():
            for x in xs:
                uf.add((o, (k, x)))
                members[o].append((k, x))
    for i, j, a in d.arrows:
        for o, comp in a.components.items():
            for x, y in comp.items():
                uf.union((o, (i, x)), (o, (j, y)))

    def name_of(o, ks):
        return min(f"{index[k]}/{x}" for k, x in ks)

    def act(gen, kx):
        k, x = kx
        return k, d.nodes[k].act(gen, x)

    apex, cls = _quotient(base, uf, members, name_of, act)
    legs = {k: PresheafMorphism(d.nodes[k], apex,
                                {o: {x: cls[(o, (k, x))] for x in d.nodes[k].elements[o]}
                                 for o in base.objects})
            for k in keys}
    return Cocone(d, apex, legs)


@dataclass(frozen=True, eq=False)
class Span:
    apex: Presheaf
    left: PresheafMorphism
    right: PresheafMorphism


@dataclass(frozen=True, eq=False)
class GeneralizedPushoutResult:
    apex: Presheaf
    leg1: PresheafMorphism
    leg2: PresheafMorphism


def generalized_pushout(p1: Presheaf, p2: Presheaf, spans: Sequence[Span],
                        prefix: str = "") -> GeneralizedPushoutResult:
    """Colimit of a family of spans ``p1 <- s -> p2``.

    Classes meeting ``p1`` keep the least ``p1`` identifier, so ``leg1`` is a plain
    inclusion whenever it is injective.  Classes made only of ``p2`` elements are
    named ``prefix + id``, primed until they avoid every ``p1`` identifier.
    """
    base = p1.base
    uf = UnionFind()
    members: dict[str, list] = {o: [] for o in base.objects}
    for side, p in ((1, p1), (2, p2)):
        for o, xs in p.elements.items():
            for x in xs:
                uf.add((o, (side, x)))
                members[o].append((side, x))
    for s in spans:
        for o, xs in s.apex.elements.items():
            for x in xs:
                uf.union((o, (1, s.left(o, x))), (o, (2, s.right(o, x))))
    taken = {o: set(p1.elements[o]) for o in base.objects}

    def name_of(o, ks):
        own = [x for side, x in ks if side == 1]
        if own:
            return min(own)
        n = prefix + min(x for _, x in ks)
        while n in taken[o]:
            n += "'"
        taken[o].add(n)
        return n

    def act(gen, kx):
        side, x = kx
        return side, (p1 if side == 1 else p2).act(gen, x)

    apex, cls = _quotient(base, uf, members, name_of, act)
    leg1 = PresheafMorphism(p1, apex, {o: {x: cls[(o, (1, x))] for x in p1.elements[o]}
                                       for o in base.objects})
    leg2 = PresheafMorphism(p2, apex, {o: {x: cls[(o, (2, x))] for x in p2.elements[o]}
                                       for o in base.objects})
    return GeneralizedPushoutResult(apex, leg1, leg2)


def span_diagram(p1: Presheaf, p2: Presheaf, spans: Sequence[Span]) -> Diagram:
    """The diagram whose colimit :func:`generalized_pushout` computes."""
    nodes: dict[Hashable, Presheaf] = {"p1": p1, "p2": p2}
    arrows = []
    for i, s in enumerate(spans):
        nodes[("span", i)] = s.apex
        arrows.append((("span", i), "p1", s.left))
        arrows.append((("span", i), "p2", s.right))
    return Diagram(nodes, arrows)


def mediating(universal: Cocone, other: Cocone) -> PresheafMorphism:
    """The unique ``u`` with ``universal.legs[i]`` followed by ``u`` equal to ``other.legs[i]``."""
    comps: dict[str, dict[str, str]] = {o: {} for o in universal.apex.base.objects}
    for k, leg in universal.legs.items():
        for o, comp in leg.components.items():
            for x, c in comp.items():
                y = other.legs[k](o, x)
                assert comps[o].setdefault(c, y) == y, "other is not a cocone over the diagram"
    return PresheafMorphism(universal.apex, other.apex, comps)
