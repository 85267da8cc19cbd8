"""Random instance builders shared by the acceptance and property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from torelli.graphs import WeightedGraph, enumerate_stable_weighted_graphs, is_stable, single_vertex
from torelli.stable import CurveModel, bridgeless_multigraphs

_CACHE: dict = {}


def stable_graphs(genus: int) -> list[WeightedGraph]:
    if genus not in _CACHE:
        _CACHE[genus] = enumerate_stable_weighted_graphs(genus) if genus >= 2 else [single_vertex(1)]
    return _CACHE[genus]


def random_lengths(rng: random.Random, g: WeightedGraph, denom: int = 3) -> dict:
    return {e: Fraction(rng.randint(1, 3 * denom), rng.randint(1, denom)) for e in g.edge_ids}


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> list[list[int]]:
    h = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        h[i] = [a + c * b for a, b in zip(h[i], h[j])]
    if rng.random() < 0.5:
        h[0] = [-a for a in h[0]]
    return h


def _blocks():
    if "blocks" not in _CACHE:
        _CACHE["blocks"] = [g for g in bridgeless_multigraphs(4) if g.b1 >= 1]
    return _CACHE["blocks"]


def _block_has_survivor(g: WeightedGraph) -> bool:
    return any(w > 0 or g.valence(v) >= 3 for v, w in zip(g.vertices, g.weights))


def random_separated_model(rng: random.Random, labels="ABC", max_blocks: int = 3) -> CurveModel:
    """Positive-genus blocks joined by a random tree of bridges, optionally through genus-0 hubs.

    Every positive-genus block keeps at least one component that survives
    stabilization, so component labels are never ambiguous.
    """
    while True:
        parts = []
        for _ in range(rng.randint(1, max_blocks)):
            if rng.random() < 0.25:
                parts.append(([("w", rng.randint(1, 2))], []))
            else:
                g = rng.choice(_blocks())
                ws = [rng.choice((0, 0, 1)) for _ in g.vertices]
                if not any(ws) and not _block_has_survivor(g):
                    ws[0] = 1
                parts.append((list(zip(g.vertices, ws)), [(a, b) for _, a, b in g.edges]))
        if len(parts) >= 3 and rng.random() < 0.5:
            parts.append(([("h", 0)], []))
        vs, ws, es, labs = [], [], [], {}
        tops = []
        for k, (verts, edges) in enumerate(parts):
            names = {v: f"b{k}{v}" for v, _ in verts}
            for v, w in verts:
                vs.append(names[v])
                ws.append(w)
                labs[names[v]] = rng.choice(labels)
            es.extend((names[a], names[b]) for a, b in edges)
            tops.append([names[v] for v, _ in verts])
        order = list(range(len(tops)))
        rng.shuffle(order)
        for i in range(1, len(order)):
            a = rng.choice(tops[order[i]])
            b = rng.choice(tops[order[rng.randrange(i)]])
            es.append((a, b))
        g = WeightedGraph(tuple(vs), tuple(ws), tuple((f"e{i}", a, b) for i, (a, b) in enumerate(es)))
        if is_stable(g):
            return CurveModel.build(g, labs)


def rename_vertices(rng: random.Random, x: CurveModel) -> CurveModel:
    vs = list(x.dual.vertices)
    new = [f"r{i}" for i in range(len(vs))]
    rng.shuffle(new)
    vmap = dict(zip(vs, new))
    es = list(x.dual.edges)
    rng.shuffle(es)
    g = WeightedGraph(
        tuple(vmap[v] for v in vs),
        x.dual.weights,
        tuple((f"s{i}", vmap[a], vmap[b]) for i, (_, a, b) in enumerate(es)),
    )
    return CurveModel(g, x.labels)
