import random

import pytest
from hypothesis import given, settings, strategies as st

from globtrans.corpus import INPUTS
from globtrans.engine import (_Online, all_instances, batch_step, find_any_minimal, is_maximal,
                              iterate, online_step, run_online, sub_instances, super_instances,
                              thinness_violations, transport)
from globtrans.graphs import GRAPH, acyclic_triangle, counts, cycle, discrete, graph, path
from globtrans.matching import find_monos, is_isomorphic
from globtrans.presheaf import empty_presheaf, is_iso, is_mono, validate_morphism, validate_presheaf
from globtrans.systems import SYSTEMS, contraction, dualization, sierpinski
from helpers import graphs, random_graph

SIER = sierpinski()
TWO_TRIANGLES = INPUTS["two_triangles"]()


def _instance(rs, p, rule, **images):
    """The instance of ``rule`` whose match sends the given vertices as requested."""
    for i in all_instances(rs, p):
        if i.rule == rule and all(i.match("v", x) == y for x, y in images.items()):
            return i
    raise LookupError(rule)


def test_sub_instances_of_a_triangle():
    t = _instance(SIER, TWO_TRIANGLES, "triangle", a="a")
    subs = [n for n, _ in sub_instances(SIER, TWO_TRIANGLES, t, proper=True)]
    assert sorted(n.rule for n in subs) == ["edge"] * 3 + ["vertex"] * 3
    assert all(n.rule == "vertex" for n, _ in sub_instances(SIER, TWO_TRIANGLES,
               _instance(SIER, TWO_TRIANGLES, "edge", a="a", b="b"), proper=True))


def test_super_instances_of_a_corner():
    v = _instance(SIER, TWO_TRIANGLES, "vertex", x="a")
    sups = super_instances(SIER, TWO_TRIANGLES, v)
    assert sorted(m.rule for m, _ in sups) == ["edge", "edge", "triangle", "vertex"]
    lone = _instance(SIER, discrete(1), "vertex")
    assert [m for m, _ in super_instances(SIER, discrete(1), lone)] == [lone]


def test_dualization_edge_has_no_proper_super():
    rs = dualization()
    e = all_instances(rs, cycle(3))[-1]
    assert e.rule == "edge"
    assert [m for m, _ in super_instances(rs, cycle(3), e)] == [e]


def test_maximality():
    t = _instance(SIER, TWO_TRIANGLES, "triangle", a="a")
    assert is_maximal(SIER, TWO_TRIANGLES, t)
    assert not is_maximal(SIER, TWO_TRIANGLES, _instance(SIER, TWO_TRIANGLES, "edge", a="a", b="b"))
    assert is_maximal(SIER, path(1), _instance(SIER, path(1), "edge"))


def test_find_any_minimal():
    assert find_any_minimal(SIER, acyclic_triangle()).rule == "vertex"
    assert find_any_minimal(SIER, empty_presheaf(GRAPH)) is None
    assert find_any_minimal(dualization(), discrete(1)).rule == "vertex"


def test_online_on_a_triangle():
    out = online_step(SIER, acyclic_triangle())
    assert counts(out) == (6, 9)
    assert is_isomorphic(out, SIER.rule("triangle").rhs) is not None
    assert counts(online_step(SIER, out)) == (15, 27)
    assert online_step(SIER, discrete(1)).elements == {"v": ("0/x",), "e": ()}


def test_two_triangles_glued_at_a_vertex():
    out = online_step(SIER, TWO_TRIANGLES)
    assert counts(out) == (11, 18)
    assert is_isomorphic(out, batch_step(SIER, TWO_TRIANGLES).apex) is not None


def test_empty_input():
    assert online_step(SIER, empty_presheaf(GRAPH)).size == 0
    assert batch_step(SIER, empty_presheaf(GRAPH)).apex.size == 0


def test_disconnected_input_is_processed_per_component():
    p = graph(["z"], {"ab": ("a", "b"), "bc": ("b", "c"), "ac": ("a", "c")})
    run = run_online(SIER, p)
    assert run.components == 2
    assert counts(run.result) == (7, 9)
    assert is_isomorphic(run.result, batch_step(SIER, p).apex) is not None


def test_iterate():
    p = acyclic_triangle()
    assert iterate(SIER, p, 0) is p
    assert counts(iterate(SIER, p, 2)) == (15, 27)
    with pytest.raises(ValueError):
        iterate(SIER, p, -1)


def test_output_is_deterministic():
    a = iterate(SIER, acyclic_triangle(), 2)
    b = iterate(SIER, acyclic_triangle(), 2)
    assert a == b


def test_step_prefixes():
    out = online_step(SIER, path(2))
    prefixes = {x.split("/")[0] for xs in out.elements.values() for x in xs}
    assert prefixes <= {str(i) for i in range(10)}
    assert "0" in prefixes


def test_batch_on_worked_examples():
    d, c = dualization(), contraction()
    assert is_isomorphic(batch_step(d, path(2)).apex, path(3)) is not None
    assert is_isomorphic(batch_step(d, cycle(3)).apex, cycle(3)) is not None
    assert is_isomorphic(batch_step(c, discrete(2)).apex, discrete(2)) is not None
    assert is_isomorphic(batch_step(c, path(1)).apex, discrete(1)) is not None
    m = SYSTEMS["multi_edge_simplification"]()
    assert is_isomorphic(batch_step(m, INPUTS["parallel3"]()).apex, path(1)) is not None


def test_transport():
    p = acyclic_triangle()
    assert is_iso(transport(SIER, find_monos(p, p)[0]))
    h = find_monos(path(2), cycle(3))[0]
    t = transport(dualization(), h)
    assert validate_morphism(t) is None and not is_mono(t)
    h = find_monos(discrete(2), path(1))[0]
    assert not is_mono(transport(contraction(), h))


def test_contraction_is_accretive_on_a_path():
    run = run_online(contraction(), path(3))
    assert run.accretive and counts(run.result) == (1, 0)


def test_dualization_on_cycle_reports_a_fold():
    run = run_online(dualization(), cycle(3))
    assert not run.accretive
    assert is_isomorphic(run.result, cycle(3)) is not None


def test_thinness_on_corpus():
    for make in SYSTEMS.values():
        rs = make()
        for p in INPUTS.values():
            assert thinness_violations(rs, p()) == 0


def test_memory_invariant_holds_after_every_gluing():
    events = []

    def observe(ev):
        st = ev.state
        for n in st.N:
            if n != st.head:
                assert any(m not in st.E.get(n, ()) for m in engine.maximal_supers(n))
        assert set(st.C) == set(st.N)
        for n in st.C:
            assert validate_morphism(st.leg(n, SIER.rule(n.rule).rhs)) is None
        events.append(ev.index)

    engine = _Online(SIER.closed(), TWO_TRIANGLES, observe)
    run = engine.execute()
    assert events == list(range(1, run.pushouts + 1))
    assert run.pushouts == 2


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_online_matches_batch_on_random_graphs(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    p = random_graph(rng, n, rng.randint(0, 8), loops=True)
    run = run_online(SIER, p)
    assert validate_presheaf(GRAPH, run.result) is None
    assert run.accretive
    assert is_isomorphic(run.result, batch_step(SIER, p).apex) is not None


@settings(max_examples=25)
@given(graphs(max_vertices=4, max_edges=4, loops=False), graphs(max_vertices=5, max_edges=6, loops=False),
       st.data())
def test_transport_of_monos_stays_mono(p, q, data):
    monos = find_monos(p, q)
    if not monos:
        return
    h = data.draw(st.sampled_from(monos))
    t = transport(SIER, h)
    assert validate_morphism(t) is None and is_mono(t)
