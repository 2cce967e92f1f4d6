"""Sample rule systems and input graphs, exportable as JSON files.

    python3 -m globtrans.corpus DIR
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import Callable

from . import graphs
from .presheaf import Presheaf
from .serialize import presheaf_to_json, rule_system_to_json, write_json
from .systems import SYSTEMS

INPUTS: dict[str, Callable[[], Presheaf]] = {
    "d1": lambda: graphs.discrete(1),
    "d2": lambda: graphs.discrete(2),
    "p1": lambda: graphs.path(1),
    "p2": lambda: graphs.path(2),
    "p3": lambda: graphs.path(3),
    "p5": lambda: graphs.path(5),
    "c3": lambda: graphs.cycle(3),
    "c4": lambda: graphs.cycle(4),
    "triangle": graphs.acyclic_triangle,
    "parallel3": lambda: graphs.parallel_edges(3),
    "two_triangles": lambda: graphs.graph(
        [], {"ab": ("a", "b"), "bc": ("b", "c"), "ac": ("a", "c"),
             "cd": ("c", "d"), "de": ("d", "e"), "ce": ("c", "e")}),
    "star_with_isolated": lambda: graphs.graph(
        ["hub", "x", "y", "z", "lone1", "lone2"],
        {"hx": ("hub", "x"), "hy": ("hub", "y"), "zh": ("z", "hub")}),
    "loop": lambda: graphs.graph(["a"], {"aa": ("a", "a")}),
}


def export(directory: str | Path) -> list[Path]:
    root = Path(directory)
    (root / "rules").mkdir(parents=True, exist_ok=True)
    (root / "inputs").mkdir(parents=True, exist_ok=True)
    written = []
    for name, make in SYSTEMS.items():
        path = root / "rules" / f"{name}.json"
        write_json(path, rule_system_to_json(make()))
        written.append(path)
    for name, make in INPUTS.items():
        path = root / "inputs" / f"{name}.json"
        write_json(path, presheaf_to_json(make()))
        written.append(path)
    return written


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit("usage: python3 -m globtrans.corpus DIR")
    for p in export(sys.argv[1]):
        print(p)
