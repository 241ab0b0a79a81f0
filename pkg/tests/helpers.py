"""Network generators shared by the test modules."""

import random

from secnet.netmodel import Network


def line(hops, prefix="e"):
    vs = ["s"] + [f"v{i}" for i in range(1, len(hops))] + ["d"]
    return Network.build([(f"{prefix}{i + 1}", vs[i], vs[i + 1], d, de) for i, (d, de) in enumerate(hops)], "s", "d")


def parallel(*pairs):
    return Network.build([(f"e{i + 1}", "s", "d", d, de) for i, (d, de) in enumerate(pairs)], "s", "d")


DIAMOND_EDGES = [("sa", "s", "a"), ("sb", "s", "b"), ("ad", "a", "d"), ("bd", "b", "d")]


def diamond(params=None):
    params = params or [(0.0, 0.0)] * 4
    return Network.build([(*e, *p) for e, p in zip(DIAMOND_EDGES, params)], "s", "d")


def random_dag(rng: random.Random, max_vertices=5, max_edges=6, lossless=False, connected=True, sources=1):
    """Random DAG over vertices ordered s, v1.., d; optionally guarantees an s-d path."""
    nv = rng.randint(3, max_vertices)
    names = ["s"] + [f"v{i}" for i in range(1, nv - 1)] + ["d"]
    edges = []
    if connected:
        chain = sorted(rng.sample(range(1, nv - 1), rng.randint(0, nv - 2)))
        hops = [0, *chain, nv - 1]
        for a, b in zip(hops, hops[1:]):
            edges.append((names[a], names[b]))
    target = rng.randint(max(len(edges), 2), max(max_edges, len(edges)))
    while len(edges) < target:
        a = rng.randrange(nv - 1)
        b = rng.randrange(a + 1, nv)
        edges.append((names[a], names[b]))
    out = []
    for i, (a, b) in enumerate(edges):
        if lossless:
            d, de = 0.0, 0.0
        else:
            d, de = round(rng.uniform(0, 0.95), 3), round(rng.uniform(0.05, 1), 3)
        out.append((f"e{i}", a, b, d, de))
    return Network.build(out, "s", "d", vertices=names)
