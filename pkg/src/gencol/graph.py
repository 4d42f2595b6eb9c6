"""Finite simple graphs: representation, I/O, generators and distances.

Vertices are the integers ``0..n-1``.  External labels survive only through
parsing and serialization.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParseError, SizeLimitError, ValidationError

#: Distance / radius sentinel for "unreachable" and "unbounded".
INF = math.inf

NABLA_CAP = 8


def finite_radius(r, n: int) -> int:
    """Replace the unbounded radius by one that is large enough for ``n`` vertices."""
    if r == INF:
        return max(n, 1)
    if r < 0:
        raise ValidationError(f"radius must be non-negative, got {r}")
    return int(r)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``."""

    n: int
    adj: tuple[frozenset[int], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValidationError("adjacency length differs from vertex count")
        for v, nbrs in enumerate(self.adj):
            if v in nbrs:
                raise ValidationError(f"self-loop at vertex {v}")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise ValidationError(f"edge endpoint {u} out of range")
                if v not in self.adj[u]:
                    raise ValidationError(f"asymmetric adjacency between {v} and {u}")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValidationError("label map length differs from vertex count")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nbrs), None if labels is None else tuple(labels))

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    @property
    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled to ``0..k-1``; returns it with the old ids."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[w]) for u in keep for w in self.adj[u] if w in index and u < w]
        return Graph.from_edges(len(keep), edges), keep

    def components(self, within: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components (sorted lists) of the subgraph induced by ``within``."""
        allowed = set(range(self.n)) if within is None else set(within)
        seen: set[int] = set()
        comps = []
        for s in sorted(allowed):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if y in allowed and y not in seen:
                        seen.add(y)
                        comp.append(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self, within: Iterable[int] | None = None) -> bool:
        verts = list(range(self.n)) if within is None else list(within)
        return len(verts) == 0 or len(self.components(verts)) == 1

    def bfs(self, source: int, radius=INF, allowed=None) -> dict[int, int]:
        """Hop distances from ``source`` up to ``radius`` inside ``allowed`` (all if None)."""
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            d = dist[x]
            if d >= radius:
                continue
            for y in self.adj[x]:
                if y not in dist and (allowed is None or y in allowed):
                    dist[y] = d + 1
                    queue.append(y)
        return dist


@dataclass(frozen=True)
class DiGraph:
    """Directed graph without self-arcs; at most one arc per ordered pair."""

    n: int
    out: tuple[frozenset[int], ...]

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "DiGraph":
        out: list[set[int]] = [set() for _ in range(n)]
        for u, v in arcs:
            if u == v:
                raise ValidationError(f"self-arc at vertex {u}")
            out[u].add(v)
        return cls(n, tuple(frozenset(s) for s in out))

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.out[u])]

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.out[u]

    def max_out_degree(self) -> int:
        return max((len(o) for o in self.out), default=0)

    def is_acyclic(self) -> bool:
        indeg = [0] * self.n
        for u in range(self.n):
            for v in self.out[u]:
                indeg[v] += 1
        stack = [v for v in range(self.n) if indeg[v] == 0]
        seen = 0
        while stack:
            u = stack.pop()
            seen += 1
            for v in self.out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    stack.append(v)
        return seen == self.n


# ---------------------------------------------------------------- parsing


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_graph(text: str) -> Graph:
    """Parse an edge-list or DIMACS-style document.

    A document containing a ``p`` line is DIMACS-style (``p edge n m`` followed
    by ``e u v`` lines, or PACE ``p tw n m`` followed by bare ``u v`` lines),
    with 1-based vertices.  Otherwise it is an edge list of ``u v`` pairs with
    an optional ``n m`` header; all-integer tokens are taken as 0-based ids,
    anything else is a label mapped to ids in order of first appearance.
    Duplicate edges collapse; self-loops are rejected.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("c ") or line == "c":
            continue
        rows.append((lineno, line.split("#", 1)[0].split()))
    rows = [(ln, toks) for ln, toks in rows if toks]
    if any(toks[0] == "p" for _, toks in rows):
        return _parse_dimacs(rows)
    return _parse_edge_list(rows)


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


def _parse_dimacs(rows) -> Graph:
    n = None
    edges = []
    for lineno, toks in rows:
        if toks[0] == "p":
            if n is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(toks) != 4:
                raise ParseError("problem line must read 'p <kind> <n> <m>'", lineno)
            n = _int(toks[2], lineno)
            if n < 0:
                raise ParseError("negative vertex count", lineno)
            continue
        if n is None:
            raise ParseError("edge before problem line", lineno)
        pair = toks[1:] if toks[0] == "e" else toks
        if len(pair) != 2:
            raise ParseError(f"expected an edge, got {' '.join(toks)!r}", lineno)
        u, v = (_int(t, lineno) for t in pair)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"vertex out of range 1..{n}", lineno)
        edges.append((u - 1, v - 1))
    return Graph.from_edges(n, edges, labels=[str(i + 1) for i in range(n)])


def _is_nat(tok: str) -> bool:
    return tok.isdigit()


def _parse_edge_list(rows) -> Graph:
    for lineno, toks in rows:
        if len(toks) != 2:
            raise ParseError(f"expected 'u v', got {' '.join(toks)!r}", lineno)
    header_n = None
    body = rows
    if rows and all(_is_nat(t) for t in rows[0][1]):
        n0, m0 = (int(t) for t in rows[0][1])
        rest = rows[1:]
        distinct = {t for _, toks in rest for t in toks}
        if m0 == len(rest) and n0 >= len(distinct) and (
            not all(_is_nat(t) for t in distinct) or all(int(t) < n0 for t in distinct)
        ):
            header_n, body = n0, rest
    tokens = [t for _, toks in body for t in toks]
    if all(_is_nat(t) for t in tokens):
        n = max((int(t) + 1 for t in tokens), default=0)
        if header_n is not None:
            n = max(n, header_n)
        ids = {str(i): i for i in range(n)}
        labels = [str(i) for i in range(n)]
    else:
        ids, labels = {}, []
        for t in tokens:
            if t not in ids:
                ids[t] = len(labels)
                labels.append(t)
        if header_n is not None:
            while len(labels) < header_n:
                labels.append(f"_{len(labels)}")
        n = len(labels)
    edges = []
    for lineno, (a, b) in body:
        if a == b:
            raise ParseError(f"self-loop at vertex {a}", lineno)
        edges.append((ids[a], ids[b]))
    return Graph.from_edges(n, edges, labels=labels)


def serialize_graph(g: Graph, fmt: str = "edgelist") -> str:
    """Write ``g`` as an edge list with header (0-based) or as DIMACS (1-based)."""
    if fmt == "edgelist":
        lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    elif fmt == "dimacs":
        lines = [f"p edge {g.n} {g.m}"] + [f"e {u + 1} {v + 1}" for u, v in g.edges]
    else:
        raise ValidationError(f"unknown graph format {fmt!r}")
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


# ---------------------------------------------------------------- generators

FAMILIES = (
    "path",
    "cycle",
    "clique",
    "star",
    "grid",
    "complete_bipartite",
    "random_gnp",
    "bounded_degree_random",
)


def _need(cond, msg):
    if not cond:
        raise ValidationError(msg)


def generate(family: str, *params, seed: int | None = None) -> Graph:
    """Build a member of a test family.

    Vertex conventions: paths and cycles are numbered along the walk; ``star k``
    has leaves ``0..k-1`` and centre ``k``; ``grid rows cols`` is row-major;
    ``complete_bipartite a b`` puts the ``a`` side first.  The random families
    draw from :class:`random.Random` (Mersenne Twister) seeded with ``seed``:
    ``random_gnp n p`` tests the pairs ``(i, j), i < j`` in lexicographic order,
    ``bounded_degree_random n d`` shuffles all pairs once and keeps a pair
    while both endpoints have degree below ``d``.
    """
    sizes = [p for p in params if isinstance(p, int)]
    _need(all(s >= 0 for s in sizes), f"sizes must be non-negative: {params}")
    if family == "path":
        (n,) = params
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if family == "cycle":
        (n,) = params
        _need(n >= 3, "a cycle needs at least 3 vertices")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if family == "clique":
        (n,) = params
        return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if family == "star":
        (k,) = params
        return Graph.from_edges(k + 1, [(i, k) for i in range(k)])
    if family == "grid":
        rows, cols = params
        edges = []
        for i in range(rows):
            for j in range(cols):
                v = i * cols + j
                if j + 1 < cols:
                    edges.append((v, v + 1))
                if i + 1 < rows:
                    edges.append((v, v + cols))
        return Graph.from_edges(rows * cols, edges)
    if family == "complete_bipartite":
        a, b = params
        return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    if family == "random_gnp":
        n, p = params
        _need(0 <= p <= 1, f"edge probability {p} outside [0, 1]")
        _need(seed is not None, "random families need an explicit seed")
        rng = random.Random(seed)
        return Graph.from_edges(
            n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        )
    if family == "bounded_degree_random":
        n, d = params
        _need(seed is not None, "random families need an explicit seed")
        rng = random.Random(seed)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        rng.shuffle(pairs)
        deg = [0] * n
        edges = []
        for i, j in pairs:
            if deg[i] < d and deg[j] < d:
                edges.append((i, j))
                deg[i] += 1
                deg[j] += 1
        return Graph.from_edges(n, edges)
    raise ValidationError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


# ---------------------------------------------------------------- distances


class DistanceOracle:
    """All-pairs hop distances; unreachable pairs hold :data:`INF`."""

    def __init__(self, g: Graph):
        self.graph = g
        table = []
        for s in range(g.n):
            row = [INF] * g.n
            for v, d in g.bfs(s).items():
                row[v] = d
            table.append(tuple(row))
        self._table = tuple(table)

    def dist(self, u: int, v: int):
        return self._table[u][v]

    def ball(self, v: int, r) -> set[int]:
        """Closed ball ``N_r[v]``."""
        row = self._table[v]
        return {u for u in range(self.graph.n) if row[u] <= r}

    def exact_sphere(self, v: int, r) -> set[int]:
        row = self._table[v]
        return {u for u in range(self.graph.n) if row[u] == r}


def distances(g: Graph) -> DistanceOracle:
    return DistanceOracle(g)


# ---------------------------------------------------------------- shallow minors


def _radius_ok(g: Graph, members: frozenset[int], r: int) -> bool:
    for c in members:
        reach = g.bfs(c, r, allowed=members)
        if len(reach) == len(members):
            return True
    return False


def connected_subsets(g: Graph, max_size: int | None = None) -> list[frozenset[int]]:
    """Every connected vertex subset exactly once (ESU enumeration from its minimum)."""
    out = []

    def extend(sub: frozenset[int], ext: set[int], root: int, closed: frozenset[int]):
        out.append(sub)
        if max_size is not None and len(sub) >= max_size:
            return
        ext = set(ext)
        while ext:
            w = ext.pop()
            fresh = {u for u in g.adj[w] if u > root and u not in closed}
            extend(sub | {w}, ext | fresh, root, closed | fresh | {w})

    for v in range(g.n):
        first = {u for u in g.adj[v] if u > v}
        extend(frozenset([v]), first, v, frozenset(first | {v}))
    return out


@dataclass(frozen=True)
class MinorWitness:
    density: Fraction
    branch_sets: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]


def nabla_exact(g: Graph, r, cap: int = NABLA_CAP) -> MinorWitness:
    """Greatest density ``|E(H)|/|V(H)|`` over depth-``r`` minors ``H`` of ``g``.

    Brute force over all families of disjoint connected branch sets of radius at
    most ``r``; exponential, hence the vertex cap.
    """
    if g.n > cap:
        raise SizeLimitError(f"nabla_exact is exponential; n={g.n} exceeds cap {cap}")
    if g.n == 0:
        return MinorWitness(Fraction(0), (), ())
    r = finite_radius(r, g.n)
    valid = [s for s in connected_subsets(g) if _radius_ok(g, s, r)]
    by_min: dict[int, list[frozenset[int]]] = {v: [] for v in range(g.n)}
    for s in valid:
        by_min[min(s)].append(s)
    best = [Fraction(-1), ()]
    chosen: list[frozenset[int]] = []

    def minor_edges(sets):
        owner = {}
        for i, s in enumerate(sets):
            for x in s:
                owner[x] = i
        es = set()
        for i, s in enumerate(sets):
            for x in s:
                for y in g.adj[x]:
                    j = owner.get(y)
                    if j is not None and j != i:
                        es.add((min(i, j), max(i, j)))
        return es

    def search(v: int, used: frozenset[int]):
        while v < g.n and v in used:
            v += 1
        if v == g.n:
            if chosen:
                es = minor_edges(chosen)
                dens = Fraction(len(es), len(chosen))
                if dens > best[0]:
                    best[0] = dens
                    best[1] = (tuple(chosen), tuple(sorted(es)))
            return
        search(v + 1, used)
        for s in by_min[v]:
            if not (s & used):
                chosen.append(s)
                search(v + 1, used | s)
                chosen.pop()

    search(0, frozenset())
    sets, es = best[1]
    return MinorWitness(best[0], sets, es)


def greedy_chromatic_number(g: Graph, order: Sequence[int] | None = None) -> int:
    """Colours used by first-fit along ``order``; by default the smallest-last
    order, which needs at most ``degeneracy + 1`` colours."""
    if order is None:
        order = degeneracy_elimination(g)[0][::-1]
    color: dict[int, int] = {}
    for v in order:
        taken = {color[u] for u in g.adj[v] if u in color}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    return len(set(color.values()))


def degeneracy_elimination(g: Graph) -> tuple[list[int], int]:
    """Min-degree-first removal sequence (smallest id on ties) and the degeneracy."""
    deg = [len(a) for a in g.adj]
    alive = [True] * g.n
    removal = []
    worst = 0
    for _ in range(g.n):
        v = min((u for u in range(g.n) if alive[u]), key=lambda u: (deg[u], u))
        worst = max(worst, deg[v])
        removal.append(v)
        alive[v] = False
        for u in g.adj[v]:
            if alive[u]:
                deg[u] -= 1
    return removal, worst


def degeneracy(g: Graph) -> int:
    return degeneracy_elimination(g)[1]
