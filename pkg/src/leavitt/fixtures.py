"""Named example graphs and a seeded random graph generator."""
from __future__ import annotations

import random

from .graph import Graph


def line(n: int) -> Graph:
    """v1 -> v2 -> ... -> vn."""
    vs = [f"v{i}" for i in range(1, n + 1)]
    return Graph.build(vs, [(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(1, n)])


def loop() -> Graph:
    return Graph.build(["v"], [("e", "v", "v")])


def double_loop() -> Graph:
    return Graph.build(["v"], [("e", "v", "v"), ("f", "v", "v")])


def toeplitz() -> Graph:
    """Loop e at v with exit f: v -> w."""
    return Graph.build(["v", "w"], [("e", "v", "v"), ("f", "v", "w")])


def rose(k: int) -> Graph:
    """Loop g at v fed by e_i: u_i -> v for i = 1..k."""
    vs = ["v"] + [f"u{i}" for i in range(1, k + 1)]
    es = [("g", "v", "v")] + [(f"e{i}", f"u{i}", "v") for i in range(1, k + 1)]
    return Graph.build(vs, es)


def clock(k: int) -> Graph:
    """Edges e_i: v -> w_i for i = 1..k."""
    vs = ["v"] + [f"w{i}" for i in range(1, k + 1)]
    return Graph.build(vs, [(f"e{i}", "v", f"w{i}") for i in range(1, k + 1)])


def star2() -> Graph:
    return clock(2)


def single_edge() -> Graph:
    return Graph.build(["v", "w"], [("e", "v", "w")])


def twocycles() -> Graph:
    """Loop g at u, edge h: u -> v, loop c at v."""
    return Graph.build(["u", "v"], [("g", "u", "u"), ("h", "u", "v"), ("c", "v", "v")])


def omega_star() -> Graph:
    """Infinitely many edges v -> w1 beside one edge f: v -> w2."""
    return Graph.build(["v", "w1", "w2"], [("f", "v", "w2")], [("v", "w1")])


def omega_breaking() -> Graph:
    """Loop a at u plus infinitely many edges u -> w; u breaks {w}."""
    return Graph.build(["u", "w"], [("a", "u", "u")], [("u", "w")])


def fixtures() -> dict:
    """Every named fixture, keyed by a stable name."""
    out = {f"line{n}": line(n) for n in range(1, 7)}
    out["loop"] = loop()
    out["double_loop"] = double_loop()
    out["toeplitz"] = toeplitz()
    out.update({f"rose{k}": rose(k) for k in range(1, 5)})
    out.update({f"clock{k}": clock(k) for k in range(1, 7)})
    out["star2"] = star2()
    out["single_edge"] = single_edge()
    out["twocycles"] = twocycles()
    out["omega_star"] = omega_star()
    out["omega_breaking"] = omega_breaking()
    return out


def finite_fixtures() -> dict:
    """Fixtures without infinite emitters, where symbolic arithmetic applies."""
    return {k: g for k, g in fixtures().items() if not g.has_omega}


def random_graph(rng: random.Random, max_vertices: int = 8, max_edges: int = 12, omega_rate: float = 0.15) -> Graph:
    """Either a uniform multigraph or a layered graph whose terminal vertices
    may carry a loop or close into a 2-cycle, so that graphs where no cycle
    has an exit show up often."""
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    pairs = []
    if rng.random() < 0.3:
        for _ in range(rng.randint(0, max_edges)):
            pairs.append((rng.choice(vs), rng.choice(vs)))
    else:
        budget = rng.randint(0, max_edges)
        for _ in range(budget):
            if n < 2:
                break
            i, j = sorted(rng.sample(range(n), 2))
            pairs.append((vs[i], vs[j]))
        terminal = [v for v in vs if all(s != v for s, _ in pairs)]
        rng.shuffle(terminal)
        while terminal and len(pairs) < max_edges:
            v = terminal.pop()
            roll = rng.random()
            if roll < 0.35:
                pairs.append((v, v))
            elif roll < 0.55 and terminal and len(pairs) + 2 <= max_edges:
                w = terminal.pop()
                pairs += [(v, w), (w, v)]
    edges = [(f"e{k}", s, r) for k, (s, r) in enumerate(pairs)]
    omega = set()
    if n > 1 and rng.random() < omega_rate:
        for _ in range(rng.randint(1, 2)):
            i, j = sorted(rng.sample(range(n), 2))
            omega.add((vs[i], vs[j]))
    return Graph.build(vs, edges, sorted(omega))
