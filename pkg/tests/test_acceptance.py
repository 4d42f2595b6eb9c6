"""The fourteen acceptance criteria.  Each prints one PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary,
or through pytest where each criterion is its own test.
"""

from __future__ import annotations

import os
import random
import sys
from math import comb

import networkx as nx
import pytest

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from conftest import from_nx  # noqa: E402
from gencol.admissibility import adm_of_order, greedy_adm_order, universal_order  # noqa: E402
from gencol.augmentation import fraternal_augment, order_from_augmentation, trichotomy  # noqa: E402
from gencol.colorings import exact_distance_color, exact_distance_graph, p_centered_zhu, verify_centered  # noqa: E402
from gencol.games import Strategy, counter_game, pursuit_game, replay_pursuit, robber_survives, splitter_game  # noqa: E402
from gencol.graph import INF, generate, nabla_exact  # noqa: E402
from gencol.reach import VertexOrder, exact_parameter, order_profile, wcol_of_order  # noqa: E402
from gencol.wideness import neighborhood_complexity, neighborhood_cover, trace_bound  # noqa: E402

_cache: dict = {}


def corpus(max_n=6):
    key = ("corpus", max_n)
    if key not in _cache:
        _cache[key] = [from_nx(h) for h in oracles.connected_graphs(max_n)]
    return _cache[key]


def exact(g, r, measure, cap=9):
    key = (g, r, measure)
    if key not in _cache:
        _cache[key] = exact_parameter(g, r, measure, cap=cap).value
    return _cache[key]


def random_connected(rng, n, p):
    while True:
        g = generate("random_gnp", n, p, seed=rng.randrange(10**9))
        if g.is_connected():
            return g


def fail(msg):
    return False, msg


# ---------------------------------------------------------------- criteria


def c1():
    """Exact chain adm <= col <= wcol and the power bounds."""
    graphs = corpus()
    for g in graphs:
        adj = oracles.adjacency(g)
        for r in (1, 2, 3):
            a, c, w = exact(g, r, "adm"), exact(g, r, "col"), exact(g, r, "wcol")
            # the search results must agree with plain enumeration of all orders
            if (a, c, w) != tuple(oracles.brute_min(adj, r, kind) for kind in ("adm", "col", "wcol")):
                return fail(f"{g.edges} r={r}: search disagrees with permutation brute force")
            if not (a <= c <= w and w <= c**r and w <= a**r and c <= a**r):
                return fail(f"{g.edges} r={r}: adm={a} col={c} wcol={w}")
    return True, f"{len(graphs)} graphs x r in 1..3, cross-checked over all orders"


def c2():
    """col_inf - 1 = treewidth, wcol_inf = treedepth, wcol_1 = degeneracy + 1."""
    graphs = corpus()
    for g in graphs:
        adj = oracles.adjacency(g)
        if exact(g, INF, "col") - 1 != oracles.treewidth(adj):
            return fail(f"treewidth mismatch on {g.edges}")
        if exact(g, INF, "wcol") != oracles.treedepth(adj):
            return fail(f"treedepth mismatch on {g.edges}")
        if exact(g, 1, "wcol") != oracles.degeneracy(g) + 1:
            return fail(f"degeneracy mismatch on {g.edges}")
    return True, f"{len(graphs)} graphs"


def c3():
    """Greedy admissibility order is optimal."""
    rng = random.Random(3)
    cases = [(g, r) for g in corpus() for r in (1, 2, 3)]
    for _ in range(200):
        g = generate("random_gnp", rng.randint(1, 7), rng.choice([0.3, 0.5, 0.7]), seed=rng.randrange(10**9))
        cases.append((g, rng.randint(1, 3)))
    for g, r in cases:
        got = greedy_adm_order(g, r, "exact").value
        if got != exact(g, r, "adm"):
            return fail(f"{g.edges} r={r}: greedy {got} vs exact {exact(g, r, 'adm')}")
    return True, f"{len(cases)} (graph, r) cases"


def _low_tw_fixtures():
    rng = random.Random(4)
    out = [g for g in corpus() if oracles.treewidth(oracles.adjacency(g)) in (1, 2)]
    for n in (7, 8):
        for _ in range(6):
            out.append(from_nx(nx.random_labeled_tree(n, seed=rng.randrange(10**9))))
        # series-parallel: grow by subdividing or doubling edges of a cycle
        for _ in range(6):
            h = nx.cycle_graph(3)
            while h.number_of_nodes() < n:
                u, v = rng.choice(list(h.edges()))
                w = h.number_of_nodes()
                h.add_edges_from([(u, w), (w, v)])
                if rng.random() < 0.5:
                    h.remove_edge(u, v)
            out.append(from_nx(h))
    return out


def c4():
    """wcol_r <= C(r + k, k) for treewidth k in {1, 2}."""
    fixtures = _low_tw_fixtures()
    for g in fixtures:
        k = oracles.treewidth(oracles.adjacency(g))
        if k not in (1, 2):
            continue
        for r in (1, 2, 3, 4):
            w = exact(g, r, "wcol")
            if w > comb(r + k, k):
                return fail(f"{g.edges} tw={k} r={r}: wcol {w} > {comb(r + k, k)}")
    return True, f"{len(fixtures)} fixtures, r <= 4"


def c5():
    """Planar bounds col_r <= 5r + 1 and wcol_r <= C(r+2, 2)(2r+1)."""
    rng = random.Random(5)
    fixtures = []
    while len(fixtures) < 50:
        n = rng.randint(4, 8)
        g = generate("random_gnp", n, rng.choice([0.4, 0.6, 0.8]), seed=rng.randrange(10**9))
        if nx.check_planarity(oracles.to_nx(g))[0]:
            fixtures.append(g)
    for g in fixtures:
        for r in (1, 2, 3):
            c, w = exact(g, r, "col"), exact(g, r, "wcol")
            if c > 5 * r + 1 or w > comb(r + 2, 2) * (2 * r + 1):
                return fail(f"{g.edges} r={r}: col={c} wcol={w}")
    return True, "50 planar fixtures, r <= 3"


def c6():
    """Counter game depth equals wcol_r of the placement order."""
    rng = random.Random(6)
    for _ in range(500):
        n = rng.randint(1, 10)
        g = generate("random_gnp", n, rng.random(), seed=rng.randrange(10**9))
        perm = list(range(n))
        rng.shuffle(perm)
        o = VertexOrder(perm)
        r = rng.choice([1, 2, 3, INF])
        prof = order_profile(g, o, 3)
        if counter_game(g, r, o) != prof.value("wcol", r):
            return fail(f"{g.edges} {perm} r={r}")
    return True, "500 triples"


def c7():
    """Order-based Splitter wins within wcol_2r(pi) + 1 rounds."""
    rng = random.Random(7)
    games = 0
    for g in corpus(7):
        perm = list(range(g.n))
        rng.shuffle(perm)
        o = VertexOrder(perm)
        for r in (1, 2):
            bound = wcol_of_order(g, o, 2 * r) + 1
            for rule in ("random", "minimax"):
                t = splitter_game(g, r, Strategy("splitter", "order", order=o), Strategy("connector", rule, seed=games))
                games += 1
                if t.winner != "splitter" or t.length > bound:
                    return fail(f"{g.edges} r={r} {rule}: {t.length} rounds > {bound}")
    return True, f"{games} games"


def c8():
    """Robber survives adm_r cops; order cops with wcol_2r budget capture."""
    lower_failures = []
    shelter_ok = True
    graphs = corpus()
    for g in graphs:
        for r in (1, 2):
            a = exact(g, r, "adm")
            if not robber_survives(g, r, a):
                lower_failures.append((g.n, g.m, r, a))
            if a > 1 and not robber_survives(g, r, a - 1):
                shelter_ok = False
            o = VertexOrder(exact_parameter(g, 2 * r, "wcol").order)
            k = wcol_of_order(g, o, 2 * r)
            for rule in ("minimax", "random"):
                t = pursuit_game(g, r, "agile", k, Strategy("cop", "order", order=o), Strategy("robber", rule, seed=1))
                if t.winner != "cops" or replay_pursuit(g, t) != "cops" or t.length > g.n:
                    return fail(f"order cops failed on {g.edges} r={r}")
    if lower_failures:
        n, m, r, a = lower_failures[0]
        return fail(
            f"upper bound holds; lower bound fails in {len(lower_failures)}/{2 * len(graphs)} cases, "
            f"e.g. n={n} m={m} r={r}: {a} = adm_r cops catch the robber; "
            f"robber survives adm_r - 1 cops everywhere: {shelter_ok}"
        )
    return True, f"{len(graphs)} graphs x r in 1..2"


def _fixtures12():
    rng = random.Random(9)
    out = [generate("path", n) for n in (3, 6, 9, 12)]
    out += [generate("cycle", n) for n in (4, 7, 12)]
    out += [generate("grid", 2, 3), generate("grid", 3, 3), generate("grid", 3, 4), generate("star", 6)]
    out += [from_nx(nx.random_labeled_tree(n, seed=rng.randrange(10**9))) for n in (8, 10, 12)]
    return out


def c9():
    """Reach-graph colourings are p-centered with palette <= wcol_{2^(p-2)}."""
    for g in _fixtures12():
        for p in (2, 3, 4):
            r = 2 ** (p - 2)
            o = greedy_adm_order(g, r, "auto").order
            c = p_centered_zhu(g, p, o)
            if not verify_centered(g, c, p) or c.palette > wcol_of_order(g, o, r):
                return fail(f"{g.edges} p={p}")
    return True, f"{len(_fixtures12())} fixtures x p in 2..4"


def c10():
    """Exact-distance colourings for odd p with palette <= wcol_{2p-1}."""
    for g in _fixtures12():
        for p in (1, 3):
            o = greedy_adm_order(g, 2 * p - 1, "auto").order
            c = exact_distance_color(g, p, o)
            target = exact_distance_graph(g, p)
            if any(c.colors[u] == c.colors[v] for u, v in target.edges) or c.palette > wcol_of_order(g, o, 2 * p - 1):
                return fail(f"{g.edges} p={p}")
    return True, f"{len(_fixtures12())} fixtures x p in 1, 3"


def _paths(g, r):
    adj = oracles.adjacency(g)
    for v in range(g.n):
        for p in oracles.simple_paths(adj, v, r):
            if len(p) > 1:
                yield p


def c11():
    """Trichotomy on short paths and wcol_r <= 4 (r Delta^r)^2."""
    rng = random.Random(11)
    paths = 0
    for i in range(200):
        n = rng.randint(4, 40)
        g = generate("bounded_degree_random", n, 3, seed=rng.randrange(10**9))
        if 2 * g.m > 3 * n:
            return fail("fixture too dense")
        for r in (2, 3):
            seq = fraternal_augment(g, r)
            res = order_from_augmentation(g, seq)
            if res.achieved > 4 * (r * res.delta**r) ** 2 and res.achieved > 1:
                return fail(f"bound broken on fixture {i}")
            if n <= 10:
                for p in _paths(g, r):
                    paths += 1
                    if trichotomy(seq.weights, p) is None:
                        return fail(f"trichotomy fails on {p} in fixture {i}")
    return True, f"200 graphs, {paths} paths checked"


def c12():
    """Cover verification and the trace-count bound with exact wcol_2r."""
    for g in _fixtures12():
        for r in (1, 2):
            o = greedy_adm_order(g, 2 * r, "auto").order
            cover = neighborhood_cover(g, o, r)
            for u in range(g.n):
                ball = set(g.bfs(u, r))
                if not any(ball <= c for c in cover.clusters):
                    return fail(f"ball of {u} uncovered")
            if cover.radius > 2 * r or cover.degree > wcol_of_order(g, o, 2 * r):
                return fail(f"cover stats on {g.edges}")
            c = exact(g, 2 * r, "wcol", cap=12)
            count, _ = neighborhood_complexity(g, range(g.n), r, order=o)
            if count > trace_bound(c, r, g.n):
                return fail(f"trace bound on {g.edges}")
    return True, f"{len(_fixtures12())} fixtures x r in 1, 2"


def c13():
    """nabla_r <= wcol_{2r+1} and nabla_r <= col_{4r+1}."""
    graphs = corpus()
    for g in graphs:
        for r in (0, 1):
            d = nabla_exact(g, r).density
            if d > exact(g, 2 * r + 1, "wcol") or d > exact(g, 4 * r + 1, "col"):
                return fail(f"{g.edges} r={r}: density {d}")
    return True, f"{len(graphs)} graphs x r in 0, 1"


def c14():
    """Universal order: adm_r(pi) <= 2^(r+1) adm_r for r <= 4."""
    graphs = corpus()
    for g in graphs:
        res = universal_order(g, 4)
        for r in range(1, 5):
            if adm_of_order(g, res.order, r) > 2 ** (r + 1) * exact(g, r, "adm"):
                return fail(f"{g.edges} r={r}")
    return True, f"{len(graphs)} graphs"


CRITERIA = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14]


def report(i, fn):
    ok, detail = fn()
    line = f"ACCEPTANCE {i:2d} {'PASS' if ok else 'FAIL'}: {fn.__doc__.strip()} [{detail}]"
    return ok, line


@pytest.mark.parametrize("i", range(1, 15))
def test_criterion(i, capsys):
    ok, line = report(i, CRITERIA[i - 1])
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    import time

    for i, fn in enumerate(CRITERIA, 1):
        t0 = time.time()
        ok, line = report(i, fn)
        print(f"{line} ({time.time() - t0:.1f}s)", flush=True)
