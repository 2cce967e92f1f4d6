"""End-to-end acceptance checks; each test records one PASS/FAIL line in the summary."""
from __future__ import annotations

import json
import random
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from globtrans.cli import main
from globtrans.colimit import Span, colimit_of_diagram, generalized_pushout, mediating, span_diagram
from globtrans.corpus import INPUTS, export
from globtrans.engine import batch_step, run_online, thinness_violations, transport
from globtrans.graphs import GRAPH, acyclic_triangle, counts, cycle, discrete, graph, path
from globtrans.matching import find_monos, is_isomorphic
from globtrans.presheaf import (Cocone, PresheafMorphism, compose, is_iso, is_mono,
                                morphism_equal, validate_morphism, validate_presheaf)
from globtrans.rules import check_incremental
from globtrans.serialize import presheaf_from_json, presheaf_to_json, write_json
from globtrans.systems import (SYSTEMS, contraction, dualization, isolated_vertex_removal,
                               multi_edge_simplification, sierpinski)
from helpers import brute_force_morphisms, criterion, random_graph

SIERPINSKI_COUNTS = [(6, 9), (15, 27), (42, 81), (123, 243)]


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    export(root)
    return root


def _gt(*args: str) -> int:
    """Run the installed command when available, otherwise the module."""
    exe = shutil.which("gt")
    cmd = [exe] if exe else [sys.executable, "-m", "globtrans"]
    return subprocess.run(cmd + list(args), capture_output=True, text=True).returncode


def _load(path: Path):
    return presheaf_from_json(json.loads(path.read_text()), GRAPH)


@pytest.fixture(scope="module")
def sierpinski_chain(corpus, tmp_path_factory):
    """Outputs of ``gt run`` for k = 0..4 from one acyclic triangle."""
    work = tmp_path_factory.mktemp("chain")
    rules = str(corpus / "rules" / "sierpinski.json")
    tri = str(corpus / "inputs" / "triangle.json")
    outs = {0: _load(Path(tri))}
    for k in range(1, 5):
        out = work / f"k{k}.json"
        assert _gt("run", "--rules", rules, "--input", tri, "--steps", str(k),
                   "--output", str(out)) == 0
        outs[k] = _load(out)
    return work, rules, outs


@criterion(1, "Sierpinski growth k=1..4 and isomorphism with the oracle")
def test_sierpinski_growth(sierpinski_chain):
    work, rules, outs = sierpinski_chain
    for k, expected in enumerate(SIERPINSKI_COUNTS, start=1):
        assert counts(outs[k]) == expected, k
        prev = work / f"prev{k}.json"
        write_json(prev, presheaf_to_json(outs[k - 1]))
        oracle = work / f"oracle{k}.json"
        assert _gt("oracle", "--rules", rules, "--input", str(prev), "--output", str(oracle)) == 0
        assert is_isomorphic(outs[k], _load(oracle)) is not None, k
    return "counts " + " ".join(f"{v}/{e}" for v, e in SIERPINSKI_COUNTS)


@criterion(2, "incrementality table 5/5")
def test_incrementality_table():
    expected = {"sierpinski": True, "dualization": False, "contraction": False,
                "isolated_vertex_removal": False, "multi_edge_simplification": False}
    got = {name: check_incremental(make()) is None for name, make in SYSTEMS.items()}
    assert got == expected
    return f"{sum(got[n] == expected[n] for n in expected)}/5"


def _without_isolated(p):
    used = {p.act(g, e) for g in ("s", "t") for e in p.carrier("e")}
    return graph(sorted(used), {e: (p.act("s", e), p.act("t", e)) for e in p.carrier("e")})


REMOVAL_CASES = {
    "lone vertex": discrete(1),
    "three lone vertices": discrete(3),
    "edge plus lone": graph(["z"], {"ab": ("a", "b")}),
    "path with two lone": graph(["y", "z"], {"ab": ("a", "b"), "bc": ("b", "c"), "cd": ("c", "d")}),
    "cycle with lone": graph(["z"], {"ab": ("a", "b"), "bc": ("b", "c"), "ca": ("c", "a")}),
    "star": graph(["q"], {"ha": ("h", "a"), "hb": ("h", "b"), "ch": ("c", "h"), "dh": ("d", "h")}),
    "parallel and antiparallel": graph(["z"], {"x": ("a", "b"), "y": ("a", "b"), "w": ("b", "a")}),
    "acyclic triangle": acyclic_triangle(),
    "two components": graph(["m", "n"], {"ab": ("a", "b"), "cd": ("c", "d"), "de": ("d", "e")}),
    "diamond": graph(["i1", "i2", "i3"], {"ab": ("a", "b"), "ac": ("a", "c"),
                                           "bd": ("b", "d"), "cd": ("c", "d")}),
}


@criterion(3, "batch step on worked examples and 10 removal graphs")
def test_batch_semantics():
    d, c = dualization(), contraction()
    assert is_isomorphic(batch_step(d, path(2)).apex, path(3)) is not None
    assert is_isomorphic(batch_step(d, cycle(3)).apex, cycle(3)) is not None
    assert is_isomorphic(batch_step(c, discrete(2)).apex, discrete(2)) is not None
    assert is_isomorphic(batch_step(c, path(1)).apex, discrete(1)) is not None
    m = multi_edge_simplification()
    for k in (2, 3, 4):
        p = graph([], {f"e{i}": ("a", "b") for i in range(k)})
        assert is_isomorphic(batch_step(m, p).apex, path(1)) is not None
    r = isolated_vertex_removal()
    assert len(REMOVAL_CASES) == 10
    for name, p in REMOVAL_CASES.items():
        assert is_isomorphic(batch_step(r, p).apex, _without_isolated(p)) is not None, name
    return "7 worked examples, 10/10 removal graphs"


def _random_mono(rng: random.Random):
    """A random graph with at most 12 elements, a random sub-part of it, and a mono between them."""
    while True:
        nv = rng.randint(1, 6)
        q = random_graph(rng, nv, rng.randint(0, 12 - nv), prefix="q")
        keep_e = [e for e in q.carrier("e") if rng.random() < 0.6]
        ends = {q.act(g, e) for g in ("s", "t") for e in keep_e}
        keep_v = sorted(ends | {v for v in q.carrier("v") if rng.random() < 0.5})
        names = {v: f"w{i}" for i, v in enumerate(rng.sample(keep_v, len(keep_v)))}
        p = graph([names[v] for v in keep_v],
                  {f"f{i}": (names[q.act("s", e)], names[q.act("t", e)]) for i, e in enumerate(keep_e)})
        monos = find_monos(p, q)
        if monos:
            return rng.choice(monos)


@criterion(4, "transport: non-mono for the two non-examples, mono for 50 Sierpinski monos")
def test_transport():
    h = PresheafMorphism(path(2), cycle(3), {"v": {"v0": "v0", "v1": "v1", "v2": "v2"},
                                             "e": {"e0": "e0", "e1": "e1"}})
    assert validate_morphism(h) is None and is_mono(h)
    t = transport(dualization(), h)
    assert not is_mono(t)
    h = PresheafMorphism(discrete(2), path(1), {"v": {"v0": "v0", "v1": "v1"}})
    assert not is_mono(transport(contraction(), h))
    rng = random.Random(4)
    rs = sierpinski()
    for _ in range(50):
        h = _random_mono(rng)
        assert h.source.size <= 12 and h.target.size <= 12
        t = transport(rs, h)
        assert validate_morphism(t) is None and is_mono(t)
    return "2 non-mono, 50/50 mono"


@criterion(5, "accretive Sierpinski runs; dualization on c3 reports a fold")
def test_accretiveness(sierpinski_chain, corpus, capsys):
    _, _, outs = sierpinski_chain
    rs = sierpinski()
    legs = []
    for k in range(4):
        run = run_online(rs, outs[k], observer=lambda ev: legs.append(ev.mono))
        assert run.accretive
    assert legs and all(legs)
    run = run_online(dualization(), cycle(3))
    assert run.non_mono_pushouts
    assert main(["compare", "--rules", str(corpus / "rules" / "dualization.json"),
                 "--input", str(corpus / "inputs" / "c3.json"), "--unchecked"]) == 0
    assert "non-mono gluing steps:" in capsys.readouterr().out
    return f"{len(legs)} mono legs; dualization fold at step {run.non_mono_pushouts[0]}"


@criterion(6, "online equals batch on 100 random connected graphs")
def test_online_equals_batch(corpus, tmp_path, capsys):
    rng = random.Random(6)
    rules = str(corpus / "rules" / "sierpinski.json")
    sizes = []
    for i in range(100):
        nv = rng.randint(1, 12)
        ne = rng.randint(nv - 1, 25 - nv)
        p = random_graph(rng, nv, ne, loops=rng.random() < 0.2, connected=True)
        assert p.size <= 25
        path_ = tmp_path / f"g{i}.json"
        write_json(path_, presheaf_to_json(p))
        assert main(["compare", "--rules", rules, "--input", str(path_)]) == 0, i
        sizes.append(p.size)
    capsys.readouterr()
    return f"100/100, sizes {min(sizes)}..{max(sizes)}"


def _random_morphism(rng, s, p):
    options = brute_force_morphisms(s, p, mono_only=False)
    return PresheafMorphism(s, p, dict(rng.choice(options))) if options else None


@criterion(7, "generalized pushout equals the colimit of its span diagram (200 cases)")
def test_pushout_oracle():
    rng = random.Random(7)
    for case in range(200):
        p1 = random_graph(rng, rng.randint(1, 4), rng.randint(0, 4), loops=True, prefix="a")
        p2 = random_graph(rng, rng.randint(1, 4), rng.randint(0, 4), loops=True, prefix="b")
        spans = []
        for _ in range(rng.randint(0, 3)):
            s = random_graph(rng, rng.randint(1, 3), rng.randint(0, 2), loops=True)
            left, right = _random_morphism(rng, s, p1), _random_morphism(rng, s, p2)
            if left is not None and right is not None:
                spans.append(Span(s, left, right))
        res = generalized_pushout(p1, p2, spans, prefix="n/")
        assert validate_presheaf(GRAPH, res.apex) is None
        d = span_diagram(p1, p2, spans)
        colim = colimit_of_diagram(d)
        legs = {"p1": res.leg1, "p2": res.leg2}
        for i, s in enumerate(spans):
            legs[("span", i)] = compose(s.left, res.leg1)
        other = Cocone(d, res.apex, legs)
        assert other.commutes(), case
        u = mediating(colim, other)
        assert is_iso(u) and validate_morphism(u) is None, case
        for k, leg in colim.legs.items():
            assert morphism_equal(compose(leg, u), other.legs[k]), case
    return "200/200"


@criterion(8, "thinness: zero violations over the corpus")
def test_thinness(sierpinski_chain):
    _, _, outs = sierpinski_chain
    pairs = violations = 0
    for make in SYSTEMS.values():
        rs = make()
        for p in INPUTS.values():
            violations += thinness_violations(rs, p())
            pairs += 1
    for k in range(3):
        violations += thinness_violations(sierpinski(), outs[k])
        pairs += 1
    assert violations == 0
    return f"{pairs} pairs"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
