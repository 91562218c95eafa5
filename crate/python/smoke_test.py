#!/usr/bin/env python3
"""Drives the compiled geodetic_py module end to end.

Build the extension first (either profile works):

    cargo build -p geodetic-py            # or --release

then run:  python3 python/smoke_test.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libgeodetic_py.so",
        ROOT / "target" / "debug" / "libgeodetic_py.so",
    ]
    built = [p for p in candidates if p.is_file()]
    if not built:
        sys.exit("no libgeodetic_py.so under target/; run `cargo build -p geodetic-py` first")
    newest = max(built, key=lambda p: p.stat().st_mtime)
    stage = Path(tempfile.mkdtemp(prefix="geodetic_py_"))
    shutil.copy2(newest, stage / "geodetic_py.so")
    sys.path.insert(0, str(stage))
    import geodetic_py

    return geodetic_py


def main():
    gp = load_module()

    # path on five vertices: the two endpoints see everything
    p5 = gp.Graph(5)
    for v in range(4):
        p5.add_edge(v, v + 1)
    assert p5.is_connected() and p5.is_forest()
    assert p5.pendants() == [0, 4]
    assert gp.interval(p5, 0, 4) == [0, 1, 2, 3, 4]
    assert gp.min_geodetic(p5) == [0, 4]
    ok, uncovered = gp.is_geodetic(p5, [0, 4])
    assert ok and uncovered == []
    assert gp.decide_geodetic(p5, 1) is None

    # four-cycle: the two diagonals, dimension two
    c4 = gp.Graph(4)
    for u, v in [(0, 1), (1, 2), (2, 3), (0, 3)]:
        c4.add_edge(u, v)
    dim, witness = gp.strong_metric_dimension(c4)
    assert dim == 2, dim
    assert gp.mmd_pairs(c4) == [(0, 2), (1, 3)]
    sr = gp.strong_resolving_graph(c4)
    assert sr.edge_count == 2
    assert len(gp.min_vertex_cover(sr)) == 2

    # formula side: n=1, two clauses, satisfiable, cover meets 3n+2m
    clauses = [[1, 1, 1], [-1, 1, -1]]
    assignment = gp.solve_e3p3(1, clauses)
    assert assignment is not None
    h, budget = gp.reduce_e3p3_to_vc(1, clauses)
    assert budget == 7
    assert len(gp.min_vertex_cover(h)) == budget

    # matching side: build, audit, decide, and sweep the searchers
    sets = [[1, 1, 1], [1, 1, 1]]
    red = gp.Reduction.build(1, sets, scale=5)
    assert red.k == 23, red.k
    assert all(ok for _, ok, _ in red.audit()), red.audit()
    assert all(ok for _, ok, _ in red.pendant_cover())
    assert all(ok for _, ok, _ in red.discrimination())

    witness = red.decide()
    assert witness is not None and len(witness) == red.k
    ok, uncovered = gp.is_geodetic(red.graph(), witness)
    assert ok, f"{len(uncovered)} vertices uncovered"
    assert witness == red.witness(gp.solve_3dm(1, sets))

    cleared, max_searchers, recontaminations, ops = red.search()
    assert cleared and max_searchers <= 17 and recontaminations == 0, (
        cleared,
        max_searchers,
        recontaminations,
    )
    assert ops > 0

    round_trip = gp.Reduction.from_text(red.to_text())
    assert round_trip.k == red.k and round_trip.edge_count == red.edge_count

    # generators agree with the oracle
    assert gp.solve_3dm(2, gp.planted_3dm(2, 3, seed=11)) is not None
    assert gp.solve_3dm(2, gp.no_3dm(2, seed=11)) is None
    assert isinstance(gp.REVERSE_DIRECTION_NOTE, str) and gp.REVERSE_DIRECTION_NOTE

    print("smoke test passed")


if __name__ == "__main__":
    main()
