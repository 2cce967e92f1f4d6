"""Directed multigraphs as presheaves over ``v ==s,t==> e``, plus the usual families."""
from __future__ import annotations

from typing import Iterable, Mapping

from .presheaf import BaseCategory, Generator, Presheaf

GRAPH = BaseCategory(("v", "e"), (Generator("s", "v", "e"), Generator("t", "v", "e")))


def graph(vertices: Iterable[str], edges: Mapping[str, tuple[str, str]]) -> Presheaf:
    """Build a graph from vertex names and ``{edge: (source, target)}``."""
    vs = set(vertices)
    for s, t in edges.values():
        vs.update((s, t))
    return Presheaf(
        GRAPH,
        {"v": sorted(vs), "e": sorted(edges)},
        {"s": {e: st[0] for e, st in edges.items()},
         "t": {e: st[1] for e, st in edges.items()}},
    )


def edge_list(p: Presheaf) -> list[tuple[str, str, str]]:
    return [(e, p.act("s", e), p.act("t", e)) for e in p.carrier("e")]


def discrete(k: int) -> Presheaf:
    """``d_k``: k vertices, no edge."""
    return graph([f"v{i}" for i in range(k)], {})


def path(k: int) -> Presheaf:
    """``p_k``: directed path with k edges."""
    return graph([f"v{i}" for i in range(k + 1)],
                 {f"e{i}": (f"v{i}", f"v{i + 1}") for i in range(k)})


def cycle(k: int) -> Presheaf:
    """``c_k``: directed cycle with k edges."""
    return graph([f"v{i}" for i in range(k)],
                 {f"e{i}": (f"v{i}", f"v{(i + 1) % k}") for i in range(k)})


def acyclic_triangle() -> Presheaf:
    return graph(["a", "b", "c"], {"ab": ("a", "b"), "bc": ("b", "c"), "ac": ("a", "c")})


def parallel_edges(k: int) -> Presheaf:
    return graph(["a", "b"], {f"e{i}": ("a", "b") for i in range(k)})


def counts(p: Presheaf) -> tuple[int, int]:
    return p.count("v"), p.count("e")
