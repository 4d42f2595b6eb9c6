"""Fraternity functions and greedy transitive-fraternal augmentations.

Arcs point from larger to smaller vertices: a weight ``w(u, v) = i`` says
that ``v`` is reached from ``u`` at distance ``i``.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ContractError, ValidationError
from .graph import INF, DiGraph, Graph, degeneracy_elimination
from .reach import VertexOrder, check_order, wcol_of_order


def degeneracy_orientation(g: Graph) -> DiGraph:
    """Orient each edge away from the endpoint removed first by min-degree elimination."""
    removal, _ = degeneracy_elimination(g)
    gone = set()
    arcs = []
    for v in removal:
        arcs.extend((v, u) for u in sorted(g.adj[v]) if u not in gone)
        gone.add(v)
    return DiGraph.from_arcs(g.n, arcs)


def orientation_from_order(g: Graph, order: VertexOrder) -> DiGraph:
    """Orient every edge from its larger to its smaller endpoint."""
    check_order(g, order)
    rank = order.rank
    return DiGraph.from_arcs(g.n, [(u, v) if rank[u] > rank[v] else (v, u) for u, v in g.edges])


def degeneracy_order(g: Graph) -> VertexOrder:
    """Last-removed vertex first, so every vertex has at most ``degeneracy`` smaller neighbours."""
    removal, _ = degeneracy_elimination(g)
    return VertexOrder(reversed(removal))


@dataclass
class FraternityFunction:
    """Weights on ordered pairs with values in ``1..r``; absent pairs are infinite."""

    n: int
    r: int
    weight: dict[tuple[int, int], int] = field(default_factory=dict)

    def w(self, u: int, v: int):
        return self.weight.get((u, v), INF)

    def out_arcs(self, u: int, up_to=None) -> list[tuple[int, int]]:
        cap = self.r if up_to is None else up_to
        return [(v, k) for (a, v), k in self.weight.items() if a == u and k <= cap]

    def digraph(self, i: int | None = None) -> DiGraph:
        cap = self.r if i is None else i
        return DiGraph.from_arcs(self.n, [p for p, k in self.weight.items() if k <= cap])

    def violations(self, g: Graph) -> list[str]:
        """All breaches of the fraternity-function definition (empty when valid)."""
        out = []
        r = self.r
        for (u, v), k in self.weight.items():
            if not (1 <= k <= r):
                out.append(f"weight {k} of ({u}, {v}) outside 1..{r}")
            if (v, u) in self.weight:
                out.append(f"both ({u}, {v}) and ({v}, {u}) are finite")
        for u, v in g.edges:
            if min(self.w(u, v), self.w(v, u)) != 1:
                out.append(f"edge {u}-{v} lacks a weight-1 direction")
        outs: list[dict[int, int]] = [dict() for _ in range(self.n)]
        for (a, b), k in self.weight.items():
            outs[a][b] = k
        for u in range(self.n):
            for v in range(u + 1, self.n):
                direct = min(self.w(u, v), self.w(v, u))
                if direct == 1:
                    continue
                via = INF
                for z in range(self.n):
                    if z != u and z != v and u in outs[z] and v in outs[z]:
                        via = min(via, outs[z][u] + outs[z][v])
                if direct == via or (direct > r and via > r):
                    continue
                out.append(f"pair {u},{v}: weight {direct} but cheapest common source {via}")
        return out

    def validate(self, g: Graph) -> None:
        bad = self.violations(g)
        if bad:
            raise ValidationError("not a fraternity function: " + bad[0])


@dataclass
class AugmentationSequence:
    """Nested digraphs ``G_1 <= ... <= G_r`` with the weights they realise."""

    graph: Graph
    r: int
    levels: list[DiGraph]
    weights: FraternityFunction
    out_degrees: list[int]

    def serialize(self) -> str:
        lines = [f"{u} {v} {k}" for (u, v), k in sorted(self.weights.weight.items())]
        return "\n".join(lines) + ("\n" if lines else "")

    def summary(self) -> str:
        return json.dumps(
            {
                "r": self.r,
                "levels": [
                    {"level": i + 1, "arcs": len(d.arcs), "max_out_degree": deg}
                    for i, (d, deg) in enumerate(zip(self.levels, self.out_degrees))
                ],
            },
            sort_keys=True,
        )


def fraternal_augment(g: Graph, r: int, orientation: DiGraph | None = None) -> AugmentationSequence:
    """Greedy augmentation: at level ``d + 1`` every still unconnected pair with a
    common source ``z`` and ``w(z, u) + w(z, v) <= d + 1`` receives one arc, oriented
    by the degeneracy orientation of the graph of all such pairs."""
    if r < 1:
        raise ValidationError("augmentation radius must be at least 1")
    g1 = degeneracy_orientation(g) if orientation is None else orientation
    weight: dict[tuple[int, int], int] = {}
    for u, v in g1.arcs:
        weight[(u, v)] = 1
    for u, v in g.edges:
        if (u, v) not in weight and (v, u) not in weight:
            raise ValidationError(f"orientation misses the edge {u}-{v}")
    ff = FraternityFunction(g.n, r, weight)
    levels = [ff.digraph(1)]
    for d in range(1, r):
        outs: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
        for (a, b), k in weight.items():
            outs[a].append((b, k))
        pairs = set()
        for z in range(g.n):
            nb = sorted(outs[z])
            for i, (u, wu) in enumerate(nb):
                for v, wv in nb[i + 1 :]:
                    if wu + wv <= d + 1 and (u, v) not in weight and (v, u) not in weight:
                        pairs.add((u, v))
        aux = Graph.from_edges(g.n, pairs)
        for u, v in degeneracy_orientation(aux).arcs:
            weight[(u, v)] = d + 1
        levels.append(ff.digraph(d + 1))
    return AugmentationSequence(g, r, levels, ff, [lv.max_out_degree() for lv in levels])


def fraternity_from_order(g: Graph, order: VertexOrder, r: int) -> FraternityFunction:
    """``w(u, v) = i`` when ``v`` is first strongly reachable from ``u`` at radius ``i``."""
    check_order(g, order)
    rank = order.rank
    weight = {}
    for u in range(g.n):
        ru = rank[u]
        dist = {u: 0}
        frontier = [u]
        for d in range(1, r + 1):
            nxt = []
            for x in frontier:
                for y in g.adj[x]:
                    if y in dist:
                        continue
                    dist[y] = d
                    if rank[y] < ru:
                        weight[(u, y)] = d
                    else:
                        nxt.append(y)
            frontier = nxt
    ff = FraternityFunction(g.n, r, weight)
    bad = ff.violations(g)
    if bad:
        raise ContractError("order-derived weights are not a fraternity function: " + bad[0])
    return ff


def weighted_closure(ff: FraternityFunction, budget: int) -> DiGraph:
    """Arcs ``(u, v)`` for every directed path of total weight at most ``budget``."""
    outs: list[list[tuple[int, int]]] = [[] for _ in range(ff.n)]
    for (a, b), k in ff.weight.items():
        if k <= ff.r:
            outs[a].append((b, k))
    arcs = []
    for s in range(ff.n):
        best = {s: 0}
        heap = [(0, s)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > best[x]:
                continue
            for y, k in outs[x]:
                nd = d + k
                if nd <= budget and nd < best.get(y, budget + 1):
                    best[y] = nd
                    heapq.heappush(heap, (nd, y))
        arcs.extend((s, t) for t in best if t != s)
    return DiGraph.from_arcs(ff.n, arcs)


@dataclass(frozen=True)
class AugmentedOrder:
    order: VertexOrder
    bound: int
    delta: int
    achieved: int

    def __iter__(self):
        return iter((self.order, self.bound))


def order_from_augmentation(g: Graph, seq: AugmentationSequence) -> AugmentedOrder:
    """Degeneracy order of the weighted closure, with the bound ``4 d^2``, ``d = r * Delta^r``.

    The bound is reported as at least 1, since a vertex always reaches itself.
    """
    r = seq.r
    delta = seq.levels[-1].max_out_degree() if seq.levels else 0
    d = r * delta**r
    bound = max(1, 4 * d * d)
    closure = weighted_closure(seq.weights, r)
    h = Graph.from_edges(g.n, {(min(a, b), max(a, b)) for a, b in closure.arcs})
    order = degeneracy_order(h)
    achieved = wcol_of_order(g, order, r)
    if achieved > bound:
        raise ContractError(f"wcol_{r} of the augmentation order is {achieved} > bound {bound}")
    return AugmentedOrder(order, bound, delta, achieved)


def _chain(ff: FraternityFunction, path: Sequence[int], start: int, stop: int, step: int):
    """Index chains from ``start`` towards ``stop`` whose consecutive arcs (in walking
    direction) weigh at most their index gap; returns the predecessor map."""
    pred = {start: None}
    for j in range(start + step, stop + step, step):
        for i in range(start, j, step):
            if i in pred and ff.w(path[i], path[j]) <= abs(j - i):
                pred[j] = i
                break
    return pred


def _unwind(pred, j):
    out = []
    while j is not None:
        out.append(j)
        j = pred[j]
    return out[::-1]


def trichotomy(ff: FraternityFunction, path: Sequence[int]):
    """Which case of the path lemma applies to ``path = v_0 .. v_l``.

    Returns ``(1, indices)`` for a directed ``v_0 -> v_l`` chain, ``(2, indices)``
    for a ``v_l -> v_0`` chain, ``(3, (left, right))`` for two chains meeting at
    an inner index, or None.  Each arc of a chain must weigh at most the number
    of path steps it skips, so a chain has weighted length at most ``l``.
    """
    ell = len(path) - 1
    if ell <= 0:
        return (1, [0])
    fwd = _chain(ff, path, 0, ell, 1)
    if ell in fwd:
        return (1, _unwind(fwd, ell))
    bwd = _chain(ff, path, ell, 0, -1)
    if 0 in bwd:
        return (2, _unwind(bwd, 0))
    for j in range(1, ell):
        if j in fwd and j in bwd:
            return (3, (_unwind(fwd, j), _unwind(bwd, j)))
    return None
