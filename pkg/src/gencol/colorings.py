"""Centered, treedepth and exact-distance colorings built from vertex orders."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import ContractError, SizeLimitError, ValidationError
from .graph import Graph
from .reach import EXACT_CAP, VertexOrder, check_order, exact_parameter, weak_sets, wcol_of_order

CENTERED_CAP = 16
CENTERED_P_CAP = 12


@dataclass(frozen=True)
class Coloring:
    """``colors[v]`` is the colour of ``v``, colours are 0-based."""

    colors: tuple[int, ...]
    verified: bool | None = None

    @classmethod
    def of(cls, colors: Iterable[int], verified=None) -> "Coloring":
        return cls(tuple(colors), verified)

    @property
    def palette(self) -> int:
        return len(set(self.colors))

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return out

    def serialize(self) -> str:
        return "".join(f"{v} {c}\n" for v, c in enumerate(self.colors))

    def summary(self, **extra) -> str:
        return json.dumps({"palette": self.palette, "verified": self.verified, **extra}, sort_keys=True)


def _normalise(colors: Sequence) -> tuple[int, ...]:
    """Relabel arbitrary hashable colours to ``0..k-1`` by first appearance."""
    ids: dict = {}
    return tuple(ids.setdefault(c, len(ids)) for c in colors)


def reach_graph(g: Graph, order: VertexOrder, r) -> Graph:
    """``G<pi, r>``: ``u ~ v`` iff one weakly ``r``-reaches the other."""
    check_order(g, order)
    sets = weak_sets(g, order, r)
    return Graph.from_edges(g.n, {(min(u, v), max(u, v)) for v in range(g.n) for u in sets[v] if u != v})


def first_fit(h: Graph, sequence: Iterable[int]) -> list[int]:
    color = [-1] * h.n
    for v in sequence:
        taken = {color[u] for u in h.adj[v]}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    return color


def reach_graph_coloring(g: Graph, order: VertexOrder, r) -> Coloring:
    """First-fit along ``order`` on ``G<pi, r>``; each vertex sees only its own
    weak reach set among earlier vertices, so at most ``wcol_r(G, pi)`` colours."""
    h = reach_graph(g, order, r)
    return Coloring.of(first_fit(h, order))


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class CenteredResult:
    ok: bool
    witness: frozenset[int] | None = None

    def __bool__(self):
        return self.ok


def _violates(colors: Sequence[int], members: Iterable[int]) -> bool:
    counts: dict[int, int] = {}
    for v in members:
        counts[colors[v]] = counts.get(colors[v], 0) + 1
    return all(k > 1 for k in counts.values())


def _shrink(g: Graph, colors: Sequence[int], witness: set[int]) -> frozenset[int]:
    """Drop vertices while the set stays connected and without a unique colour."""
    changed = True
    while changed:
        changed = False
        for x in sorted(witness):
            rest = witness - {x}
            if rest and g.is_connected(rest) and _violates(colors, rest):
                witness = rest
                changed = True
                break
    return frozenset(witness)


def verify_centered(g: Graph, coloring: Coloring, p: int, cap: int = CENTERED_CAP) -> CenteredResult:
    """Exhaustive check that each connected subgraph has a unique colour or ``>= p`` colours.

    Connected vertex sets are grown from their minimum vertex, each produced
    once; a branch stops as soon as it holds ``p`` colours, since every
    superset then satisfies the condition too.  A failure comes with an
    inclusion-minimal violating vertex set.
    """
    if len(coloring.colors) != g.n:
        raise ValidationError("colouring length differs from vertex count")
    if g.n > cap:
        raise SizeLimitError(f"exhaustive centered check is exponential; n={g.n} exceeds cap {cap}")
    colors = coloring.colors
    counts: dict[int, int] = {}
    found: list[set[int]] = []

    def add(v):
        counts[colors[v]] = counts.get(colors[v], 0) + 1

    def remove(v):
        counts[colors[v]] -= 1
        if not counts[colors[v]]:
            del counts[colors[v]]

    def extend(sub: set[int], ext: set[int], root: int, closed: frozenset[int]) -> bool:
        if len(counts) >= p:
            return False
        if all(k > 1 for k in counts.values()):
            found.append(set(sub))
            return True
        ext = set(ext)
        while ext:
            w = ext.pop()
            fresh = {u for u in g.adj[w] if u > root and u not in closed}
            sub.add(w)
            add(w)
            hit = extend(sub, ext | fresh, root, closed | fresh | {w})
            remove(w)
            sub.discard(w)
            if hit:
                return True
        return False

    for v in range(g.n):
        first = {u for u in g.adj[v] if u > v}
        add(v)
        hit = extend({v}, first, v, frozenset(first | {v}))
        remove(v)
        if hit:
            return CenteredResult(False, _shrink(g, colors, found[0]))
    return CenteredResult(True)


def verify_centered_by_decomposition(g: Graph, coloring: Coloring, p: int) -> CenteredResult:
    """Polynomial check for fixed palette: for every set ``I`` of ``p - 1`` colours,
    each component of ``G[I]`` must have a uniquely coloured vertex whose removal
    leaves components with the same property."""
    colors = coloring.colors
    palette = sorted(set(colors))
    size = min(max(p - 1, 0), len(palette))
    if size == 0:
        return CenteredResult(True)

    def centered(block: list[int]):
        stack = [block]
        while stack:
            part = stack.pop()
            counts: dict[int, int] = {}
            for v in part:
                counts[colors[v]] = counts.get(colors[v], 0) + 1
            centre = next((v for v in part if counts[colors[v]] == 1), None)
            if centre is None:
                return set(part)
            rest = [v for v in part if v != centre]
            stack.extend(g.components(rest))
        return None

    for chosen in combinations(palette, size):
        allowed = [v for v in range(g.n) if colors[v] in chosen]
        for comp in g.components(allowed):
            bad = centered(comp)
            if bad is not None:
                return CenteredResult(False, _shrink(g, colors, bad))
    return CenteredResult(True)


def treedepth_of(g: Graph, vertices: Iterable[int], cap: int = EXACT_CAP) -> int:
    """Exact treedepth of the induced subgraph (maximum over its components)."""
    best = 0
    for comp in g.components(vertices):
        sub, _ = g.induced(comp)
        best = max(best, exact_parameter(sub, measure="treedepth", cap=cap).value)
    return best


@dataclass(frozen=True)
class TreedepthColoringResult:
    ok: bool
    colors: tuple[int, ...] | None = None
    treedepth: int | None = None

    def __bool__(self):
        return self.ok


def verify_treedepth_coloring(g: Graph, coloring: Coloring, p: int, cap: int = EXACT_CAP) -> TreedepthColoringResult:
    """Every ``i <= p`` colour classes together must induce treedepth at most ``i``."""
    classes = coloring.classes()
    palette = sorted(classes)
    for i in range(1, min(p, len(palette)) + 1):
        for chosen in combinations(palette, i):
            td = treedepth_of(g, [v for c in chosen for v in classes[c]], cap)
            if td > i:
                return TreedepthColoringResult(False, chosen, td)
    return TreedepthColoringResult(True)


# ---------------------------------------------------------------- constructions


def _default_order(g: Graph, r: int) -> VertexOrder:
    from .admissibility import greedy_adm_order

    return greedy_adm_order(g, r, "auto").order


def _verify_any(g: Graph, coloring: Coloring, p: int) -> CenteredResult:
    if g.n <= CENTERED_CAP:
        return verify_centered(g, coloring, p)
    return verify_centered_by_decomposition(g, coloring, p)


def p_centered_zhu(g: Graph, p: int, order: VertexOrder | None = None) -> Coloring:
    """First-fit colouring of ``G<pi, 2^(p-2)>``, which is ``p``-centered.

    The default order is the greedy admissibility order at radius ``2^(p-2)``.
    """
    if not 2 <= p <= CENTERED_P_CAP:
        raise ValidationError(f"p must lie in 2..{CENTERED_P_CAP}, got {p}")
    r = 2 ** (p - 2)
    if order is None:
        order = _default_order(g, r)
    coloring = reach_graph_coloring(g, order, r)
    if coloring.palette > max(wcol_of_order(g, order, r), 0):
        raise ContractError("reach-graph colouring uses more colours than wcol")
    result = _verify_any(g, coloring, p)
    if not result:
        raise ContractError(f"colouring is not {p}-centered; witness {sorted(result.witness)}")
    return Coloring(coloring.colors, True)


def _forest_parents(sub: Graph, order: VertexOrder) -> list[int | None]:
    """Elimination forest of an order: the ancestors of ``v`` are ``WReach_inf[v] - {v}``,
    and the parent is the largest of them."""
    sets = weak_sets(sub, order, sub.n)
    parents: list[int | None] = []
    for v in range(sub.n):
        above = [u for u in sets[v] if u != v]
        parents.append(max(above, key=order.rank.__getitem__) if above else None)
    return parents


def centered_from_treedepth(g: Graph, coloring: Coloring, p: int, cap: int = EXACT_CAP) -> Coloring:
    """Turn a ``p``-treedepth colouring with ``k`` colours into a ``(p+1)``-centered one.

    For each set ``I`` of ``p`` colours, an optimal elimination forest of
    ``G[I]`` gives arcs from each vertex to its ancestors; a first-fit colouring
    ``gamma`` of these arcs along a degeneracy order, paired with the input
    colour, uses at most ``k (2p C(k-1, p-1) + 1)`` colours.
    """
    if p < 2:
        raise ValidationError("p must be at least 2")
    check = verify_treedepth_coloring(g, coloring, p, cap)
    if not check:
        raise ValidationError(
            f"input is not a {p}-treedepth colouring: colours {check.colors} induce treedepth {check.treedepth}"
        )
    classes = coloring.classes()
    palette = sorted(classes)
    k = len(palette)
    arcs = set()
    for chosen in combinations(palette, min(p, k)):
        members = [v for c in chosen for v in classes[c]]
        for comp in g.components(members):
            sub, ids = g.induced(comp)
            witness = exact_parameter(sub, measure="treedepth", cap=cap).order
            parents = _forest_parents(sub, witness)
            for local in range(sub.n):
                a = parents[local]
                while a is not None:
                    arcs.add((ids[local], ids[a]))
                    a = parents[a]
    from .augmentation import degeneracy_order

    h = Graph.from_edges(g.n, {(min(a, b), max(a, b)) for a, b in arcs})
    gamma = first_fit(h, degeneracy_order(h))
    product = Coloring(_normalise([(coloring.colors[v], gamma[v]) for v in range(g.n)]))
    bound = k * (2 * p * comb(k - 1, p - 1) + 1) if k else 0
    if product.palette > max(bound, 1):
        raise ContractError(f"product colouring uses {product.palette} colours, above {bound}")
    result = _verify_any(g, product, p + 1)
    if not result:
        raise ContractError(f"product colouring is not {p + 1}-centered; witness {sorted(result.witness)}")
    return Coloring(product.colors, True)


def exact_distance_graph(g: Graph, p: int) -> Graph:
    """Edges between vertices at hop distance exactly ``p``."""
    edges = set()
    for v in range(g.n):
        for u, d in g.bfs(v, p).items():
            if d == p and v < u:
                edges.add((v, u))
    return Graph.from_edges(g.n, edges)


def exact_distance_color(g: Graph, p: int, order: VertexOrder | None = None) -> Coloring:
    """Proper colouring of the exact distance-``p`` graph for odd ``p``.

    ``v`` gets ``rho(m(v))`` where ``m(v)`` is the smallest vertex of the closed
    ball of radius ``p // 2`` around ``v`` and ``rho`` colours ``G<pi, 2p - 1>``.
    """
    if p < 1 or p % 2 == 0:
        raise ValidationError(f"p must be a positive odd integer, got {p}")
    radius = 2 * p - 1
    if order is None:
        order = _default_order(g, radius)
    check_order(g, order)
    rho = reach_graph_coloring(g, order, radius).colors
    half = p // 2
    colors = []
    for v in range(g.n):
        m = min(g.bfs(v, half), key=order.rank.__getitem__)
        colors.append(rho[m])
    target = exact_distance_graph(g, p)
    for u, v in target.edges:
        if colors[u] == colors[v]:
            raise ContractError(f"vertices {u} and {v} at distance {p} share a colour")
    return Coloring(tuple(colors), True)
