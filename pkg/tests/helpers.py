"""Shared generators and brute-force oracles for the test suite."""
from __future__ import annotations

import functools
import itertools
import random
import time

from hypothesis import strategies as st

from globtrans.graphs import GRAPH, graph
from globtrans.presheaf import Presheaf, PresheafMorphism, validate_morphism


def brute_force_morphisms(p: Presheaf, q: Presheaf, mono_only: bool = True) -> list[tuple]:
    """Every natural (optionally injective) family of component maps, as sorted keys."""
    objs = p.base.objects
    per_obj = []
    for o in objs:
        xs, ys = p.carrier(o), q.carrier(o)
        maps = itertools.permutations(ys, len(xs)) if mono_only else itertools.product(ys, repeat=len(xs))
        per_obj.append([dict(zip(xs, m)) for m in maps])
    found = []
    for choice in itertools.product(*per_obj):
        f = PresheafMorphism(p, q, dict(zip(objs, choice)))
        if validate_morphism(f) is None:
            found.append(f.key())
    return sorted(found)


def random_graph(rng: random.Random, n_vertices: int, n_edges: int, loops: bool = False,
                 connected: bool = False, prefix: str = "") -> Presheaf:
    vs = [f"{prefix}v{i}" for i in range(n_vertices)]
    edges: dict[str, tuple[str, str]] = {}
    k = 0
    if connected:
        for i in range(1, n_vertices):
            j = rng.randrange(i)
            pair = (vs[i], vs[j]) if rng.random() < 0.5 else (vs[j], vs[i])
            edges[f"{prefix}e{k}"] = pair
            k += 1
    while k < n_edges:
        a, b = rng.choice(vs), rng.choice(vs)
        if a == b and not loops:
            if n_vertices < 2:
                break
            continue
        edges[f"{prefix}e{k}"] = (a, b)
        k += 1
    return graph(vs, edges)


@st.composite
def graphs(draw, max_vertices: int = 5, max_edges: int = 5, loops: bool = True, min_vertices: int = 0):
    n = draw(st.integers(min_vertices, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    if not vs:
        return graph([], {})
    m = draw(st.integers(0, max_edges))
    edges = {}
    for k in range(m):
        a = draw(st.sampled_from(vs))
        b = draw(st.sampled_from(vs))
        if a == b and not loops:
            continue
        edges[f"e{k}"] = (a, b)
    return graph(vs, edges)


def empty_graph() -> Presheaf:
    return Presheaf(GRAPH, {}, {})


ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def criterion(number: int, title: str):
    """Record the outcome of an acceptance test for the end-of-run summary.

    The wrapped test may return a short detail string.
    """
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                ACCEPTANCE[number] = (title, False, f"{type(exc).__name__}: {exc}".splitlines()[0])
                raise
            took = f"{time.perf_counter() - start:.1f}s"
            ACCEPTANCE[number] = (title, True, f"{detail}; {took}" if detail else took)
        return run
    return wrap
