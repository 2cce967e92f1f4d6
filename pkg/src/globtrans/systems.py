"""Ready-made rule systems on graphs.

``sierpinski`` refines acyclic triangles; the four small systems are the usual
non-examples (dualization, contraction of components, removal of isolated
vertices, simplification of multi-edges).  None of them has a rule whose
left-hand side contains a self-loop, so self-loops never survive a step.
"""
from __future__ import annotations

from itertools import product
from typing import Callable, Mapping

from .graphs import GRAPH, graph
from .matching import find_monos
from .presheaf import Presheaf, PresheafMorphism
from .rules import Rule, RuleInclusion, RuleSystem

VERTEX = graph(["x"], {})
EDGE = graph(["a", "b"], {"ab": ("a", "b")})


def _inc(iid: str, rules: Mapping[str, Rule], src: str, dst: str,
         lhs: Mapping[str, Mapping[str, str]], rhs: Mapping[str, Mapping[str, str]]
         ) -> RuleInclusion:
    r1, r2 = rules[src], rules[dst]
    return RuleInclusion(iid, src, dst,
                         PresheafMorphism(r1.lhs, r2.lhs, lhs),
                         PresheafMorphism(r1.rhs, r2.rhs, rhs))


def sierpinski() -> RuleSystem:
    """Vertex, edge and acyclic-triangle rules; every edge is split at a new midpoint
    (both halves pointing into it) and every acyclic triangle gets an inner triangle."""
    half = graph(["a", "b", "m"], {"am": ("a", "m"), "bm": ("b", "m")})
    tri_l = graph(["a", "b", "c"], {"ab": ("a", "b"), "bc": ("b", "c"), "ac": ("a", "c")})
    tri_r = graph(
        ["a", "b", "c", "mab", "mbc", "mac"],
        {"a_ab": ("a", "mab"), "b_ab": ("b", "mab"),
         "b_bc": ("b", "mbc"), "c_bc": ("c", "mbc"),
         "a_ac": ("a", "mac"), "c_ac": ("c", "mac"),
         "mab_mac": ("mab", "mac"), "mac_mbc": ("mac", "mbc"), "mbc_mab": ("mbc", "mab")})
    rules = {"vertex": Rule("vertex", VERTEX, VERTEX),
             "edge": Rule("edge", EDGE, half),
             "triangle": Rule("triangle", tri_l, tri_r)}
    incs = [
        _inc("i1", rules, "vertex", "edge", {"v": {"x": "a"}}, {"v": {"x": "a"}}),
        _inc("i2", rules, "vertex", "edge", {"v": {"x": "b"}}, {"v": {"x": "b"}}),
    ]
    for iid, (u, w) in (("i3", "ac"), ("i4", "ab"), ("i5", "bc")):
        side = u + w
        incs.append(_inc(
            iid, rules, "edge", "triangle",
            {"v": {"a": u, "b": w}, "e": {"ab": side}},
            {"v": {"a": u, "b": w, "m": "m" + side},
             "e": {"am": f"{u}_{side}", "bm": f"{w}_{side}"}}))
    return RuleSystem(GRAPH, list(rules.values()), incs)


def dualization() -> RuleSystem:
    """Vertices become edges and edges become vertices."""
    dual_v = graph(["in", "out"], {"x": ("in", "out")})
    dual_e = graph(["a_in", "ab", "b_out"], {"a": ("a_in", "ab"), "b": ("ab", "b_out")})
    rules = {"vertex": Rule("vertex", VERTEX, dual_v), "edge": Rule("edge", EDGE, dual_e)}
    incs = [
        _inc("src", rules, "vertex", "edge", {"v": {"x": "a"}},
             {"v": {"in": "a_in", "out": "ab"}, "e": {"x": "a"}}),
        _inc("tgt", rules, "vertex", "edge", {"v": {"x": "b"}},
             {"v": {"in": "ab", "out": "b_out"}, "e": {"x": "b"}}),
    ]
    return RuleSystem(GRAPH, list(rules.values()), incs)


def contraction() -> RuleSystem:
    """Every connected component collapses to one vertex."""
    rules = {"vertex": Rule("vertex", VERTEX, VERTEX), "edge": Rule("edge", EDGE, VERTEX)}
    incs = [
        _inc("src", rules, "vertex", "edge", {"v": {"x": "a"}}, {"v": {"x": "x"}}),
        _inc("tgt", rules, "vertex", "edge", {"v": {"x": "b"}}, {"v": {"x": "x"}}),
    ]
    return RuleSystem(GRAPH, list(rules.values()), incs)


def identity_rule_system(patterns: Mapping[str, Presheaf]) -> RuleSystem:
    """Rules ``l => l`` for each pattern, with every mono between left sides as inclusion."""
    rules = [Rule(name, p, p) for name, p in patterns.items()]
    incs = []
    for r1, r2 in product(rules, rules):
        monos = find_monos(r1.lhs, r2.lhs)
        for k, f in enumerate(monos):
            if r1 is r2 and all(x == y for c in f.components.values() for x, y in c.items()):
                continue
            incs.append(RuleInclusion(f"{r1.id}>{r2.id}#{k}", r1.id, r2.id, f,
                                      PresheafMorphism(r1.rhs, r2.rhs, f.components)))
    return RuleSystem(rules[0].lhs.base, rules, incs)


def isolated_vertex_removal() -> RuleSystem:
    """Keep every edge and every way two edges can share a vertex; nothing for lone vertices."""
    return identity_rule_system({
        "edge": EDGE,
        "converging": graph([], {"e1": ("a", "c"), "e2": ("b", "c")}),
        "diverging": graph([], {"e1": ("a", "b"), "e2": ("a", "c")}),
        "chain": graph([], {"e1": ("a", "b"), "e2": ("b", "c")}),
        "parallel": graph([], {"e1": ("a", "b"), "e2": ("a", "b")}),
        "antiparallel": graph([], {"e1": ("a", "b"), "e2": ("b", "a")}),
    })


def multi_edge_simplification() -> RuleSystem:
    """Parallel edges between the same ordered pair of vertices merge into one."""
    par = graph([], {"e1": ("a", "b"), "e2": ("a", "b")})
    rules = {"vertex": Rule("vertex", VERTEX, VERTEX), "edge": Rule("edge", EDGE, EDGE),
             "parallel": Rule("parallel", par, EDGE)}
    same = {"v": {"a": "a", "b": "b"}, "e": {"ab": "ab"}}
    incs = [
        _inc("src", rules, "vertex", "edge", {"v": {"x": "a"}}, {"v": {"x": "a"}}),
        _inc("tgt", rules, "vertex", "edge", {"v": {"x": "b"}}, {"v": {"x": "b"}}),
        _inc("first", rules, "edge", "parallel",
             {"v": {"a": "a", "b": "b"}, "e": {"ab": "e1"}}, same),
        _inc("second", rules, "edge", "parallel",
             {"v": {"a": "a", "b": "b"}, "e": {"ab": "e2"}}, same),
        _inc("swap", rules, "parallel", "parallel",
             {"v": {"a": "a", "b": "b"}, "e": {"e1": "e2", "e2": "e1"}}, same),
    ]
    return RuleSystem(GRAPH, list(rules.values()), incs)


SYSTEMS: dict[str, Callable[[], RuleSystem]] = {
    "sierpinski": sierpinski,
    "dualization": dualization,
    "contraction": contraction,
    "isolated_vertex_removal": isolated_vertex_removal,
    "multi_edge_simplification": multi_edge_simplification,
}
