"""Finite base categories, finite presheaves over them and their morphisms.

Paths of generators are written in diagrammatic order: ``("s", "m")`` means
``s`` first, then ``m``.  A presheaf acts contravariantly, so the map stored
for a generator ``m: a -> b`` sends elements over ``b`` to elements over ``a``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterator, Mapping, Sequence


class StructureError(ValueError):
    """Raised when a value mentions objects or generators that do not exist."""


@dataclass(frozen=True)
class Generator:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class Violation:
    """First broken invariant found by a validator."""

    kind: str
    name: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} {self.name!r}: {self.detail}"


Path = tuple  # tuple[str, ...] of generator names, diagrammatic order


@dataclass(frozen=True)
class BaseCategory:
    """Finitely presented index category with an acyclic generator graph."""

    objects: tuple[str, ...]
    generators: tuple[Generator, ...] = ()
    relations: tuple[tuple[Path, Path], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(
            self, "generators",
            tuple(g if isinstance(g, Generator) else Generator(*g) for g in self.generators))
        object.__setattr__(
            self, "relations",
            tuple((tuple(l), tuple(r)) for l, r in self.relations))
        self._check()

    def _check(self) -> None:
        if len(set(self.objects)) != len(self.objects):
            raise StructureError("duplicate object name")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise StructureError("duplicate generator name")
        objs = set(self.objects)
        for g in self.generators:
            if g.src not in objs or g.dst not in objs:
                raise StructureError(f"generator {g.name!r} has unknown endpoint")
        for l, r in self.relations:
            ends = [self.path_ends(l), self.path_ends(r)]
            if ends[0] != ends[1]:
                raise StructureError(f"relation {l} = {r} has mismatched endpoints")
        # Kahn's algorithm; leftover objects lie on a cycle.
        indeg = {o: 0 for o in self.objects}
        for g in self.generators:
            indeg[g.dst] += 1
        ready = [o for o in self.objects if indeg[o] == 0]
        seen = 0
        while ready:
            o = ready.pop()
            seen += 1
            for g in self.generators:
                if g.src == o:
                    indeg[g.dst] -= 1
                    if indeg[g.dst] == 0:
                        ready.append(g.dst)
        if seen != len(self.objects):
            raise StructureError("generator graph has a directed cycle")

    def generator(self, name: str) -> Generator:
        try:
            return self._gen_index[name]
        except KeyError:
            raise StructureError(f"unknown generator {name!r}") from None

    @cached_property
    def _gen_index(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    def path_ends(self, path: Sequence[str]) -> tuple[str, str]:
        if not path:
            raise StructureError("empty path")
        gens = [self.generator(n) for n in path]
        for a, b in zip(gens, gens[1:]):
            if a.dst != b.src:
                raise StructureError(f"path {tuple(path)} is not composable")
        return gens[0].src, gens[-1].dst

    @cached_property
    def depth(self) -> dict[str, int]:
        """Length of the longest generator path ending at each object."""
        depth = {o: 0 for o in self.objects}
        changed = True
        while changed:
            changed = False
            for g in self.generators:
                if depth[g.dst] < depth[g.src] + 1:
                    depth[g.dst] = depth[g.src] + 1
                    changed = True
        return depth

    def hom(self, d: str, c: str) -> dict[Path, Path]:
        """Paths ``d -> c`` mapped to the canonical path of their class."""
        return self._hom_cache(d, c)

    def _hom_cache(self, d: str, c: str) -> dict[Path, Path]:
        cache = self.__dict__.setdefault("_homs", {})
        if (d, c) not in cache:
            cache[(d, c)] = self._compute_hom(d, c)
        return cache[(d, c)]

    def _compute_hom(self, d: str, c: str) -> dict[Path, Path]:
        paths: list[Path] = []

        def walk(at: str, acc: Path) -> None:
            if at == c:
                paths.append(acc)
            for g in self.generators:
                if g.src == at:
                    walk(g.dst, acc + (g.name,))

        walk(d, ())
        parent = {p: p for p in paths}

        def find(p):
            while parent[p] != p:
                parent[p] = parent[parent[p]]
                p = parent[p]
            return p

        for p in paths:
            for lhs, rhs in self.relations:
                for a, b in ((lhs, rhs), (rhs, lhs)):
                    k = len(a)
                    for i in range(len(p) - k + 1):
                        if p[i:i + k] == a:
                            q = p[:i] + b + p[i + k:]
                            ra, rb = find(p), find(q)
                            if ra != rb:
                                parent[ra] = rb
        classes: dict[Path, list[Path]] = {}
        for p in paths:
            classes.setdefault(find(p), []).append(p)
        canon = {}
        for members in classes.values():
            rep = min(members, key=lambda q: (len(q), q))
            for q in members:
                canon[q] = rep
        return canon


def path_id(path: Path) -> str:
    return ".".join(path) if path else "id"


@dataclass(frozen=True, eq=False)
class Presheaf:
    """Finite presheaf: a carrier per object and a contravariant action."""

    base: BaseCategory
    elements: Mapping[str, tuple[str, ...]]
    maps: Mapping[str, Mapping[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        elements = {o: tuple(sorted(set(self.elements.get(o, ())))) for o in self.base.objects}
        for o in self.elements:
            if o not in elements:
                elements[o] = tuple(sorted(set(self.elements[o])))
        maps = {g.name: dict(self.maps.get(g.name, {})) for g in self.base.generators}
        for name in self.maps:
            if name not in maps:
                maps[name] = dict(self.maps[name])
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "maps", maps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Presheaf):
            return NotImplemented
        return (self.base == other.base and self.elements == other.elements
                and self.maps == other.maps)

    __hash__ = None

    def __repr__(self) -> str:
        counts = ", ".join(f"{o}:{len(xs)}" for o, xs in self.elements.items())
        return f"Presheaf({counts})"

    def carrier(self, obj: str) -> tuple[str, ...]:
        return self.elements[obj]

    def count(self, obj: str) -> int:
        return len(self.elements[obj])

    @property
    def size(self) -> int:
        return sum(len(xs) for xs in self.elements.values())

    def act(self, gen: str, x: str) -> str:
        return self.maps[gen][x]

    def act_path(self, path: Sequence[str], x: str) -> str:
        for name in reversed(path):
            x = self.maps[name][x]
        return x

    @cached_property
    def element_sets(self) -> dict[str, frozenset[str]]:
        return {o: frozenset(xs) for o, xs in self.elements.items()}

    @cached_property
    def preimages(self) -> dict[str, dict[str, tuple[str, ...]]]:
        """For each generator ``m: a -> b``, elements over ``a`` -> their preimages over ``b``."""
        out: dict[str, dict[str, tuple[str, ...]]] = {}
        for g in self.base.generators:
            inv: dict[str, list[str]] = {}
            for y, x in self.maps[g.name].items():
                inv.setdefault(x, []).append(y)
            out[g.name] = {x: tuple(sorted(ys)) for x, ys in inv.items()}
        return out


def validate_presheaf(b: BaseCategory, p: Presheaf) -> Violation | None:
    """Return the first broken presheaf invariant, or ``None`` when ``p`` is valid.

    Raises :class:`StructureError` when ``p`` names objects or generators unknown to ``b``.
    """
    for o in p.elements:
        if o not in b.objects:
            raise StructureError(f"unknown object {o!r}")
    gen_names = {g.name for g in b.generators}
    for name in p.maps:
        if name not in gen_names:
            raise StructureError(f"unknown generator {name!r}")
    for g in b.generators:
        m = p.maps.get(g.name, {})
        dom, cod = p.element_sets[g.dst], p.element_sets[g.src]
        for y in p.elements[g.dst]:
            if y not in m:
                return Violation("map", g.name, f"undefined on {y!r}")
            if m[y] not in cod:
                return Violation("map", g.name, f"{y!r} lands on {m[y]!r}, not over {g.src!r}")
        for y in m:
            if y not in dom:
                return Violation("map", g.name, f"defined on {y!r}, not over {g.dst!r}")
    for lhs, rhs in b.relations:
        _, end = b.path_ends(lhs)
        for x in p.elements[end]:
            if p.act_path(lhs, x) != p.act_path(rhs, x):
                return Violation("relation", f"{'.'.join(lhs)} = {'.'.join(rhs)}",
                                 f"differs on {x!r}")
    return None


@dataclass(frozen=True, eq=False)
class PresheafMorphism:
    source: Presheaf
    target: Presheaf
    components: Mapping[str, Mapping[str, str]]

    def __post_init__(self):
        comps = {o: dict(self.components.get(o, {})) for o in self.source.base.objects}
        object.__setattr__(self, "components", comps)

    def __call__(self, obj: str, x: str) -> str:
        return self.components[obj][x]

    def __repr__(self) -> str:
        return f"PresheafMorphism({self.key()})"

    def key(self) -> tuple:
        """Canonical hashable form of the components."""
        return self._key

    @cached_property
    def _key(self) -> tuple:
        return tuple((o, tuple(sorted(self.components[o].items())))
                     for o in self.source.base.objects)


def validate_morphism(f: PresheafMorphism) -> Violation | None:
    """Check totality, landing and naturality of ``f``."""
    src, tgt = f.source, f.target
    for o in src.base.objects:
        comp = f.components[o]
        for x in src.elements[o]:
            if x not in comp:
                return Violation("component", o, f"undefined on {x!r}")
            if comp[x] not in tgt.element_sets[o]:
                return Violation("component", o, f"{x!r} lands outside the target")
    for g in src.base.generators:
        for y in src.elements[g.dst]:
            if f(g.src, src.act(g.name, y)) != tgt.act(g.name, f(g.dst, y)):
                return Violation("naturality", g.name, f"square fails on {y!r}")
    return None


def identity(p: Presheaf) -> PresheafMorphism:
    return PresheafMorphism(p, p, {o: {x: x for x in xs} for o, xs in p.elements.items()})


def compose(f: PresheafMorphism, g: PresheafMorphism) -> PresheafMorphism:
    """``f`` followed by ``g`` (that is, ``g . f``)."""
    if f.target != g.source:
        raise ValueError("compose: target of the first morphism is not the source of the second")
    return PresheafMorphism(
        f.source, g.target,
        {o: {x: g.components[o][y] for x, y in f.components[o].items()}
         for o in f.source.base.objects})


def morphism_equal(f: PresheafMorphism, g: PresheafMorphism) -> bool:
    return f.components == g.components


def is_mono(f: PresheafMorphism) -> bool:
    return all(len(set(c.values())) == len(c) for c in f.components.values())


def is_iso(f: PresheafMorphism) -> bool:
    return is_mono(f) and all(
        len(f.components[o]) == f.target.count(o) for o in f.source.base.objects)


def representable(b: BaseCategory, c: str) -> Presheaf:
    """The presheaf of generator paths into ``c``, modulo relations."""
    if c not in b.objects:
        raise StructureError(f"unknown object {c!r}")
    elements = {d: sorted({path_id(q) for q in b.hom(d, c).values()}) for d in b.objects}
    maps = {}
    for g in b.generators:
        hom_src = b.hom(g.src, c)
        maps[g.name] = {path_id(q): path_id(hom_src[(g.name,) + q])
                        for q in set(b.hom(g.dst, c).values())}
    return Presheaf(b, elements, maps)


def yoneda(p: Presheaf, c: str, x: str) -> PresheafMorphism:
    """The morphism ``representable(c) -> p`` picking out element ``x``."""
    b = p.base
    rep = representable(b, c)
    comps = {d: {path_id(q): p.act_path(q, x) for q in set(b.hom(d, c).values())}
             for d in b.objects}
    return PresheafMorphism(rep, p, comps)


def elements_as_morphisms(p: Presheaf, c: str) -> list[PresheafMorphism]:
    return [yoneda(p, c, x) for x in p.carrier(c)]


def empty_presheaf(b: BaseCategory) -> Presheaf:
    return Presheaf(b, {}, {})


def relabel(p: Presheaf, names: Mapping[str, Mapping[str, str]]) -> tuple[Presheaf, PresheafMorphism]:
    """Rename elements injectively; returns the renamed copy and the bijection into it."""
    b = p.base
    elements = {o: [names[o][x] for x in p.elements[o]] for o in b.objects}
    maps = {g.name: {names[g.dst][y]: names[g.src][x] for y, x in p.maps[g.name].items()}
            for g in b.generators}
    q = Presheaf(b, elements, maps)
    return q, PresheafMorphism(p, q, {o: dict(names[o]) for o in b.objects})


def prefixed(p: Presheaf, prefix: str) -> tuple[Presheaf, PresheafMorphism]:
    return relabel(p, {o: {x: prefix + x for x in xs} for o, xs in p.elements.items()})


def disjoint_union(ps: Sequence[Presheaf], base: BaseCategory | None = None
                   ) -> tuple[Presheaf, list[PresheafMorphism]]:
    """Coproduct with ``"i/x"`` tagging; returns the sum and its injections."""
    if not ps:
        if base is None:
            raise ValueError("disjoint_union of nothing needs an explicit base")
        return empty_presheaf(base), []
    b = ps[0].base
    elements: dict[str, list[str]] = {o: [] for o in b.objects}
    maps: dict[str, dict[str, str]] = {g.name: {} for g in b.generators}
    comps = []
    for i, p in enumerate(ps):
        tag = f"{i}/"
        for o in b.objects:
            elements[o].extend(tag + x for x in p.elements[o])
        for g in b.generators:
            maps[g.name].update({tag + y: tag + x for y, x in p.maps[g.name].items()})
        comps.append({o: {x: tag + x for x in p.elements[o]} for o in b.objects})
    total = Presheaf(b, elements, maps)
    return total, [PresheafMorphism(p, total, c) for p, c in zip(ps, comps)]


@dataclass(frozen=True, eq=False)
class Diagram:
    """Finite diagram: keyed nodes and arrows ``(src_key, dst_key, morphism)``."""

    nodes: Mapping[Hashable, Presheaf]
    arrows: Sequence[tuple[Hashable, Hashable, PresheafMorphism]] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", dict(self.nodes))
        object.__setattr__(self, "arrows", list(self.arrows))
        for i, j, _ in self.arrows:
            if i not in self.nodes or j not in self.nodes:
                raise ValueError(f"arrow {i!r} -> {j!r} leaves the diagram")


@dataclass(frozen=True, eq=False)
class Cocone:
    diagram: Diagram
    apex: Presheaf
    legs: Mapping[Hashable, PresheafMorphism]

    def commutes(self) -> bool:
        return all(morphism_equal(compose(a, self.legs[j]), self.legs[i])
                   for i, j, a in self.diagram.arrows)


def iter_elements(p: Presheaf) -> Iterator[tuple[str, str]]:
    for o, xs in p.elements.items():
        for x in xs:
            yield o, x
