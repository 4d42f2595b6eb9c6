"""Connected and flat partitions, isometric-path peeling, and orders built
from rooted tree decompositions."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ContractError, ParseError, ValidationError
from .graph import Graph
from .reach import VertexOrder, order_width


@dataclass(frozen=True)
class ConnectedPartition:
    """Ordered parts ``V_1 .. V_l``; each must induce a connected subgraph."""

    parts: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, parts: Iterable[Iterable[int]]) -> "ConnectedPartition":
        return cls(tuple(frozenset(p) for p in parts))

    def __len__(self):
        return len(self.parts)

    def owner(self, n: int) -> list[int]:
        where = [-1] * n
        for i, part in enumerate(self.parts):
            for v in part:
                where[v] = i
        return where

    def validate(self, g: Graph) -> None:
        seen: set[int] = set()
        for i, part in enumerate(self.parts):
            if not part:
                raise ValidationError(f"part {i} is empty")
            if any(not 0 <= v < g.n for v in part):
                raise ValidationError(f"part {i} has a vertex outside the graph")
            if part & seen:
                raise ValidationError(f"part {i} overlaps an earlier part")
            seen |= part
            if not g.is_connected(part):
                raise ValidationError(f"part {i} {sorted(part)} is not connected")
        if len(seen) != g.n:
            raise ValidationError(f"parts miss vertices {sorted(set(range(g.n)) - seen)}")


@dataclass(frozen=True)
class Quotient:
    graph: Graph
    width: int


def quotient(g: Graph, partition: ConnectedPartition) -> Quotient:
    """Contract each part; quotient vertex ``i`` is part ``i``, width is that of the part order."""
    partition.validate(g)
    where = partition.owner(g.n)
    edges = {(min(where[u], where[v]), max(where[u], where[v])) for u, v in g.edges if where[u] != where[v]}
    q = Graph.from_edges(len(partition), edges)
    return Quotient(q, order_width(q, VertexOrder.identity(q.n)))


@dataclass(frozen=True)
class FlatnessViolation:
    part: int
    vertex: int
    r: int
    count: int
    allowed: int


def flatness_check(g: Graph, partition: ConnectedPartition, f: Callable[[int], int], r_max: int):
    """First ``(i, v, r)`` with ``|N_r[v] ∩ V_i| > f(r)`` in ``G - (V_1 ∪ .. ∪ V_{i-1})``, or None.

    Balls are closed, the convention under which a shortest path meets any
    ``r``-ball in at most ``2r + 1`` vertices.
    """
    residual = set(range(g.n))
    for i, part in enumerate(partition.parts):
        for v in sorted(residual):
            dist = g.bfs(v, r_max, allowed=residual)
            for r in range(1, r_max + 1):
                count = sum(1 for x, d in dist.items() if d <= r and x in part)
                if count > f(r):
                    return FlatnessViolation(i, v, r, count, f(r))
        residual -= part
    return None


def _bfs_inner(g: Graph, part: frozenset[int]) -> list[int]:
    dist = g.bfs(min(part), allowed=part)
    return sorted(dist, key=lambda v: (dist[v], v))


def order_from_partition(g: Graph, partition: ConnectedPartition, inner: Mapping[int, Sequence[int]] | None = None) -> VertexOrder:
    """Parts in order; inside part ``i`` use ``inner[i]`` or BFS from its smallest vertex."""
    partition.validate(g)
    perm: list[int] = []
    for i, part in enumerate(partition.parts):
        seq = list(inner[i]) if inner and i in inner else _bfs_inner(g, part)
        if sorted(seq) != sorted(part):
            raise ValidationError(f"inner order of part {i} is not a permutation of the part")
        perm.extend(seq)
    return VertexOrder(perm)


# ---------------------------------------------------------------- peeling


def _is_isometric_path(g: Graph, path: Sequence[int], residual: set[int]) -> bool:
    if any(not g.has_edge(a, b) for a, b in zip(path, path[1:])):
        return False
    dist = g.bfs(path[0], allowed=residual)
    return all(dist.get(x) == i for i, x in enumerate(path))


def _shortest_path(g: Graph, a: int, b: int, residual: set[int]) -> list[int]:
    dist = g.bfs(a, allowed=residual)
    path = [b]
    while path[-1] != a:
        x = path[-1]
        path.append(min(y for y in g.adj[x] if dist.get(y) == dist[x] - 1))
    return path[::-1]


def _diameter_parts(g: Graph) -> list[list[int]]:
    residual = set(range(g.n))
    parts = []
    while residual:
        best = None
        for a in sorted(residual):
            for b, d in g.bfs(a, allowed=residual).items():
                if b >= a and (best is None or d > best[0]):
                    best = (d, a, b)
        _, a, b = best
        path = _shortest_path(g, a, b, residual)
        parts.append(path)
        residual -= set(path)
    return parts


def _vertical_parts(g: Graph) -> list[list[int]]:
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    for comp in g.components():
        root = comp[0]
        for v, d in g.bfs(root).items():
            depth[v] = d
        parent[root] = None
        for v in sorted(comp, key=lambda x: (depth[x], x)):
            if v != root:
                parent[v] = min(u for u in g.adj[v] if depth[u] == depth[v] - 1)
    children: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for v, p in parent.items():
        if p is not None:
            children[p].append(v)
    remaining = set(range(g.n))

    def height(v):
        return 1 + max((height(c) for c in children[v] if c in remaining), default=0)

    parts = []
    while remaining:
        top = min(remaining, key=lambda x: (depth[x], x))
        path = [top]
        while True:
            kids = [c for c in children[path[-1]] if c in remaining]
            if not kids:
                break
            path.append(max(kids, key=lambda c: (height(c), -c)))
        parts.append(path)
        remaining -= set(path)
    return parts


def isometric_peel(g: Graph, policy: str = "diameter_path") -> ConnectedPartition:
    """Partition into paths, each isometric in the graph left after removing earlier ones.

    ``diameter_path`` removes a shortest path between a farthest pair (smallest
    ids on ties).  ``bfs_vertical`` cuts a BFS tree of every component, rooted
    at its smallest vertex, into vertical paths, taking the shallowest remaining
    vertex and descending into its tallest remaining subtree; tree depth bounds
    graph distance from below, so every such path stays isometric.
    """
    if policy == "diameter_path":
        paths = _diameter_parts(g)
    elif policy == "bfs_vertical":
        paths = _vertical_parts(g)
    else:
        raise ValidationError(f"unknown peeling policy {policy!r}")
    residual = set(range(g.n))
    for p in paths:
        if not _is_isometric_path(g, p, residual):
            raise ContractError(f"peeled part {p} is not an isometric path of the residual graph")
        residual -= set(p)
    return ConnectedPartition.of(paths)


def peel_paths(partition: ConnectedPartition, g: Graph) -> list[list[int]]:
    """The parts of an isometric-path partition as vertex sequences along each path."""
    out = []
    for part in partition.parts:
        ends = [v for v in part if sum(1 for u in g.adj[v] if u in part) <= 1]
        start = min(ends) if ends else min(part)
        seq = [start]
        while len(seq) < len(part):
            seq.append(next(u for u in sorted(g.adj[seq[-1]]) if u in part and u not in seq))
        out.append(seq)
    return out


# ---------------------------------------------------------------- tree decompositions


@dataclass
class TreeDecomposition:
    """Rooted tree decomposition; nodes are ``0..t-1``."""

    bags: list[frozenset[int]]
    parent: list[int | None]
    root: int = 0
    children: list[list[int]] = field(init=False)

    def __post_init__(self):
        self.bags = [frozenset(b) for b in self.bags]
        t = len(self.bags)
        if len(self.parent) != t:
            raise ValidationError("parent map length differs from the number of bags")
        self.children = [[] for _ in range(t)]
        for x, p in enumerate(self.parent):
            if p is None:
                if x != self.root:
                    raise ValidationError(f"node {x} has no parent but is not the root")
            else:
                if not 0 <= p < t:
                    raise ValidationError(f"node {x} has unknown parent {p}")
                self.children[p].append(x)
        for ch in self.children:
            ch.sort()
        if t and self.parent[self.root] is not None:
            raise ValidationError("the root has a parent")
        if len(self.preorder()) != t:
            raise ValidationError("the tree is not connected or contains a cycle")

    @classmethod
    def from_edges(cls, bags: Sequence[Iterable[int]], edges: Iterable[tuple[int, int]], root: int = 0):
        t = len(bags)
        nbrs: list[list[int]] = [[] for _ in range(t)]
        for a, b in edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        parent: list[int | None] = [None] * t
        seen = {root} if t else set()
        queue = deque([root] if t else [])
        while queue:
            x = queue.popleft()
            for y in sorted(nbrs[x]):
                if y in seen:
                    if parent[x] != y:
                        raise ValidationError("tree edges contain a cycle")
                    continue
                seen.add(y)
                parent[y] = x
                queue.append(y)
        if len(seen) != t:
            raise ValidationError("tree edges do not connect all nodes")
        return cls([frozenset(b) for b in bags], parent, root)

    def preorder(self) -> list[int]:
        if not self.bags:
            return []
        out = []
        stack = [self.root]
        seen = set()
        while stack:
            x = stack.pop()
            if x in seen:
                return out
            seen.add(x)
            out.append(x)
            stack.extend(reversed(self.children[x]))
        return out

    def adhesion(self, x: int) -> frozenset[int]:
        p = self.parent[x]
        return frozenset() if p is None else self.bags[x] & self.bags[p]

    def margin(self, x: int) -> frozenset[int]:
        return self.bags[x] - self.adhesion(x)

    @property
    def adhesion_size(self) -> int:
        return max((len(self.adhesion(x)) for x in range(len(self.bags))), default=0)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def torso(self, g: Graph, x: int) -> tuple[Graph, list[int]]:
        """Torso of ``x`` on its bag (relabelled in sorted order) and the vertex list."""
        bag = sorted(self.bags[x])
        index = {v: i for i, v in enumerate(bag)}
        edges = {(index[u], index[v]) for u in bag for v in g.adj[u] if v in index and u < v}
        for clique in [self.adhesion(x)] + [self.adhesion(c) for c in self.children[x]]:
            c = sorted(clique)
            for i, a in enumerate(c):
                for b in c[i + 1 :]:
                    edges.add((index[a], index[b]))
        return Graph.from_edges(len(bag), edges), bag

    def validate(self, g: Graph) -> None:
        """Raise naming the violated condition: coverage, edge coverage or connectivity."""
        covered = set().union(*self.bags) if self.bags else set()
        if covered != set(range(g.n)):
            raise ValidationError(f"vertex coverage fails: vertices {sorted(set(range(g.n)) - covered)} are in no bag")
        for u, v in g.edges:
            if not any(u in b and v in b for b in self.bags):
                raise ValidationError(f"edge coverage fails: no bag contains edge {u}-{v}")
        for v in range(g.n):
            nodes = [x for x, b in enumerate(self.bags) if v in b]
            tops = [x for x in nodes if self.parent[x] is None or v not in self.bags[self.parent[x]]]
            if len(tops) != 1:
                raise ValidationError(f"connectivity fails: the bags containing vertex {v} are not connected in the tree")

    @classmethod
    def parse(cls, text: str) -> "TreeDecomposition":
        """PACE-style ``td`` document, 1-based: ``s td t w n``, ``b x v..``,
        then ``t parent child`` (rooted) or bare ``a b`` tree edges (rooted at node 1)."""
        header = None
        bags: dict[int, list[int]] = {}
        rooted: list[tuple[int, int]] = []
        plain: list[tuple[int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            toks = raw.split("#", 1)[0].split()
            if not toks or toks[0] == "c":
                continue
            try:
                if toks[0] == "s":
                    if len(toks) != 5 or toks[1] != "td":
                        raise ParseError("header must read 's td <nodes> <maxbag> <n>'", lineno)
                    header = tuple(int(t) for t in toks[2:])
                elif toks[0] == "b":
                    x = int(toks[1])
                    if x in bags:
                        raise ParseError(f"bag {x} given twice", lineno)
                    bags[x] = [int(t) - 1 for t in toks[2:]]
                elif toks[0] == "t":
                    rooted.append((int(toks[1]) - 1, int(toks[2]) - 1))
                elif len(toks) == 2:
                    plain.append((int(toks[0]) - 1, int(toks[1]) - 1))
                else:
                    raise ParseError(f"unrecognised line {raw.strip()!r}", lineno)
            except ValueError:
                raise ParseError(f"expected integers in {raw.strip()!r}", lineno) from None
        if header is None:
            raise ParseError("missing 's td' header")
        t, _, n = header
        if sorted(bags) != list(range(1, t + 1)):
            raise ParseError(f"expected bags 1..{t}")
        bag_list = [bags[x + 1] for x in range(t)]
        if any(not 0 <= v < n for b in bag_list for v in b):
            raise ParseError(f"bag vertex outside 1..{n}")
        if rooted and plain:
            raise ParseError("mixes rooted 't' lines with bare tree edges")
        if rooted:
            parent: list[int | None] = [None] * t
            for p, c in rooted:
                if not (0 <= p < t and 0 <= c < t) or parent[c] is not None:
                    raise ParseError(f"bad tree arc {p + 1} -> {c + 1}")
                parent[c] = p
            roots = [x for x in range(t) if parent[x] is None]
            if len(roots) != 1:
                raise ParseError("rooted tree must have exactly one root")
            return cls(bag_list, parent, roots[0])
        return cls.from_edges(bag_list, plain, 0)

    def serialize(self, n: int) -> str:
        t = len(self.bags)
        lines = [f"s td {t} {self.width + 1} {n}"]
        lines += [f"b {x + 1} " + " ".join(str(v + 1) for v in sorted(b)) for x, b in enumerate(self.bags)]
        lines += [f"t {p + 1} {x + 1}" for x, p in enumerate(self.parent) if p is not None]
        return "\n".join(lines) + "\n"


def separation_holds(g: Graph, td: TreeDecomposition, x: int) -> bool:
    """Removing ``Bag(x) ∩ Bag(parent)`` separates the two sides of the tree edge."""
    p = td.parent[x]
    if p is None:
        return True
    below = set()
    stack = [x]
    while stack:
        y = stack.pop()
        below |= td.bags[y]
        stack.extend(td.children[y])
    sep = td.bags[x] & td.bags[p]
    above = set().union(*(td.bags[y] for y in range(len(td.bags)))) - below
    side_a, side_b = below - sep, above - sep
    allowed = set(range(g.n)) - sep
    for comp in g.components(allowed):
        if set(comp) & side_a and set(comp) & side_b:
            return False
    return True


def compose_td_order(g: Graph, td: TreeDecomposition, torso_orders: Mapping[int, Sequence[int]] | None = None) -> VertexOrder:
    """Margins in DFS preorder of the tree, each sorted by its torso order.

    ``torso_orders[x]`` lists the vertices of ``Bag(x)``; the default is sorted order.
    """
    td.validate(g)
    perm = []
    for x in td.preorder():
        seq = list(torso_orders[x]) if torso_orders and x in torso_orders else sorted(td.bags[x])
        if sorted(seq) != sorted(td.bags[x]):
            raise ValidationError(f"torso order of node {x} is not a permutation of its bag")
        margin = td.margin(x)
        perm.extend(v for v in seq if v in margin)
    return VertexOrder(perm)


def skeleton(g: Graph, td: TreeDecomposition):
    from .graph import DiGraph

    arcs = set()
    for x in range(len(td.bags)):
        adh = td.adhesion(x)
        for u in td.margin(x):
            for v in adh:
                arcs.add((u, v))
    dag = DiGraph.from_arcs(g.n, arcs)
    if not dag.is_acyclic():
        raise ContractError("skeleton has a cycle; the decomposition is invalid")
    return dag


@dataclass(frozen=True)
class SkeletonReach:
    vertices: frozenset[int]
    bound: int

    @property
    def count(self) -> int:
        return len(self.vertices)


def skeleton_reach(g: Graph, td: TreeDecomposition, u: int, r: int) -> SkeletonReach:
    """Vertices reachable from ``u`` by skeleton paths of length at most ``r``;
    checks the count against ``C(r + k, k)`` for adhesion ``k``."""
    dag = skeleton(g, td)
    seen = {u}
    frontier = [u]
    for _ in range(r):
        nxt = []
        for x in frontier:
            for y in dag.out[x]:
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    k = td.adhesion_size
    bound = comb(r + k, k)
    if len(seen) > bound:
        raise ContractError(f"skeleton reach of {u} has {len(seen)} vertices, above C({r}+{k},{k}) = {bound}")
    return SkeletonReach(frozenset(seen), bound)
