"""Enumeration of monomorphisms between finite presheaves."""
from __future__ import annotations

from typing import Iterator, Mapping

from .presheaf import Presheaf, PresheafMorphism, validate_morphism

Assignment = dict  # (obj, pattern element) -> target element


class _Search:
    """Backtracking over pattern elements with forced-image propagation.

    Assigning an element fixes the images of everything reachable from it by the
    action, so picking the deepest elements first (edges before vertices, in the
    graph case) prunes most of the tree.
    """

    def __init__(self, pattern: Presheaf, target: Presheaf):
        self.p = pattern
        self.q = target
        self.base = pattern.base
        self.down = {o: [g for g in self.base.generators if g.dst == o]
                     for o in self.base.objects}
        self.assigned: Assignment = {}
        self.used: dict[str, set[str]] = {o: set() for o in self.base.objects}
        self.trail: list[tuple[str, str]] = []

    def assign(self, o: str, x: str, y: str) -> bool:
        """Assign and propagate; on failure the caller undoes to its mark."""
        stack = [(o, x, y)]
        while stack:
            o, x, y = stack.pop()
            have = self.assigned.get((o, x))
            if have is not None:
                if have != y:
                    return False
                continue
            if y in self.used[o]:
                return False
            self.assigned[(o, x)] = y
            self.used[o].add(y)
            self.trail.append((o, x))
            for g in self.down[o]:
                stack.append((g.src, self.p.act(g.name, x), self.q.act(g.name, y)))
        return True

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            o, x = self.trail.pop()
            y = self.assigned.pop((o, x))
            self.used[o].discard(y)

    def candidates(self, o: str, x: str) -> list[str]:
        pools = []
        for g in self.down[o]:
            img = self.assigned.get((g.src, self.p.act(g.name, x)))
            if img is not None:
                pools.append(self.q.preimages[g.name].get(img, ()))
        if pools:
            pools.sort(key=len)
            rest = [set(pl) for pl in pools[1:]]
            cands = [y for y in pools[0] if all(y in r for r in rest)]
        else:
            cands = list(self.q.elements[o])
        used = self.used[o]
        return [y for y in cands if y not in used]

    def pick(self) -> tuple[str, str, list[str]] | None:
        best = None
        depth = self.base.depth
        for o in self.base.objects:
            for x in self.p.elements[o]:
                if (o, x) in self.assigned:
                    continue
                c = self.candidates(o, x)
                rank = (len(c), -depth[o])
                if best is None or rank < best[0]:
                    best = (rank, o, x, c)
                    if not c:
                        return o, x, c
        return None if best is None else (best[1], best[2], best[3])

    def run(self) -> Iterator[Assignment]:
        nxt = self.pick()
        if nxt is None:
            yield dict(self.assigned)
            return
        o, x, cands = nxt
        for y in cands:
            mark = len(self.trail)
            if self.assign(o, x, y):
                yield from self.run()
            self.undo(mark)


def _as_morphism(pattern: Presheaf, target: Presheaf, a: Assignment) -> PresheafMorphism:
    comps: dict[str, dict[str, str]] = {o: {} for o in pattern.base.objects}
    for (o, x), y in a.items():
        comps[o][x] = y
    return PresheafMorphism(pattern, target, comps)


def iter_monos(pattern: Presheaf, target: Presheaf,
               fixed: Mapping[tuple[str, str], str] | None = None
               ) -> Iterator[PresheafMorphism]:
    """Yield monomorphisms ``pattern >-> target`` agreeing with ``fixed``, in search order."""
    if pattern.base != target.base:
        raise ValueError("pattern and target live over different base categories")
    for o in pattern.base.objects:
        if pattern.count(o) > target.count(o):
            return
    s = _Search(pattern, target)
    for (o, x), y in (fixed or {}).items():
        if not s.assign(o, x, y):
            return
    for a in s.run():
        yield _as_morphism(pattern, target, a)


def find_monos(pattern: Presheaf, target: Presheaf) -> list[PresheafMorphism]:
    """All monomorphisms ``pattern >-> target``, sorted by their components."""
    return sorted(iter_monos(pattern, target), key=PresheafMorphism.key)


def extend_mono(e_l: PresheafMorphism, f: PresheafMorphism) -> list[PresheafMorphism]:
    """All monos ``g: e_l.target >-> f.target`` with ``e_l`` followed by ``g`` equal to ``f``."""
    if e_l.source != f.source:
        raise ValueError("extend_mono: e_l and f must share their source")
    fixed = {}
    for o, comp in e_l.components.items():
        for x, y in comp.items():
            z = f(o, x)
            if fixed.setdefault((o, y), z) != z:
                return []
    return sorted(iter_monos(e_l.target, f.target, fixed), key=PresheafMorphism.key)


def refine_colors(*ps: Presheaf, initial: list[dict] | None = None
                  ) -> list[dict[tuple[str, str], int]]:
    """Joint colour refinement of the elements of several presheaves.

    Colours start from ``initial`` (default: the object of each element) and are
    split by the colours of each element's images and preimages until stable.
    Colour numbers are comparable across the inputs, and isomorphisms preserve them.
    """
    base = ps[0].base
    down = {o: [g for g in base.generators if g.dst == o] for o in base.objects}
    up = {o: [g for g in base.generators if g.src == o] for o in base.objects}
    if initial is None:
        colors = [{(o, x): base.objects.index(o) for o, xs in p.elements.items() for x in xs}
                  for p in ps]
    else:
        colors = [dict(c) for c in initial]
    n_classes = len({c for col in colors for c in col.values()})
    while True:
        sigs = []
        for p, col in zip(ps, colors):
            sig = {}
            for (o, x), c in col.items():
                sig[(o, x)] = (
                    c,
                    tuple(col[(g.src, p.act(g.name, x))] for g in down[o]),
                    tuple(sorted((i, col[(g.dst, y)]) for i, g in enumerate(up[o])
                                 for y in p.preimages[g.name].get(x, ()))),
                )
            sigs.append(sig)
        ordered = {s: i for i, s in enumerate(sorted({s for sig in sigs for s in sig.values()}))}
        colors = [{k: ordered[s] for k, s in sig.items()} for sig in sigs]
        if len(ordered) == n_classes:
            return colors
        n_classes = len(ordered)


def _histogram(col: dict) -> dict[int, int]:
    h: dict[int, int] = {}
    for c in col.values():
        h[c] = h.get(c, 0) + 1
    return h


def _is_top(p: Presheaf, o: str, x: str) -> bool:
    return not any(x in p.preimages[g.name] for g in p.base.generators if g.src == o)


def _iso_search(p: Presheaf, q: Presheaf, cp: dict, cq: dict) -> PresheafMorphism | None:
    """Individualise one element of the smallest ambiguous class, refine, recurse.

    A class of elements with no preimages whose images are all pinned down holds
    interchangeable twins (parallel edges, say) and is paired off without branching.
    """
    if _histogram(cp) != _histogram(cq):
        return None
    classes: dict[int, list] = {}
    for k, c in cp.items():
        classes.setdefault(c, []).append(k)
    sizes = {c: len(ks) for c, ks in classes.items()}

    def pinned(p_, col, o, x):
        return all(sizes[col[(g.src, p_.act(g.name, x))]] == 1
                   for g in p_.base.generators if g.dst == o)

    def twins(ks):
        return all(_is_top(p, o, x) and pinned(p, cp, o, x) for o, x in ks)

    ambiguous = [ks for ks in classes.values() if len(ks) > 1 and not twins(ks)]
    if not ambiguous:
        q_classes: dict[int, list] = {}
        for k, c in cq.items():
            q_classes.setdefault(c, []).append(k)
        comps: dict[str, dict[str, str]] = {o: {} for o in p.base.objects}
        for c, ks in classes.items():
            for (o, x), (_, y) in zip(sorted(ks), sorted(q_classes[c])):
                comps[o][x] = y
        f = PresheafMorphism(p, q, comps)
        return f if validate_morphism(f) is None else None
    target = min(ambiguous, key=lambda ks: (len(ks), min(ks)))
    x = min(target)
    fresh = 1 + max(max(cp.values()), max(cq.values()))
    color = cp[x]
    for y in sorted(k for k, c in cq.items() if c == color):
        np_, nq = dict(cp), dict(cq)
        np_[x] = nq[y] = fresh
        rp, rq = refine_colors(p, q, initial=[np_, nq])
        found = _iso_search(p, q, rp, rq)
        if found is not None:
            return found
    return None


def is_isomorphic(p: Presheaf, q: Presheaf) -> PresheafMorphism | None:
    """Some isomorphism ``p -> q``, or ``None``."""
    if p.base != q.base:
        return None
    if any(p.count(o) != q.count(o) for o in p.base.objects):
        return None
    if p.size == 0:
        return PresheafMorphism(p, q, {})
    cp, cq = refine_colors(p, q)
    return _iso_search(p, q, cp, cq)
