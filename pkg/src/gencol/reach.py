"""Vertex orders, reachability sets, order profiles and exact minimisation.

Conventions: in an order, earlier means smaller, and every vertex belongs to
its own reach sets (the path of length 0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ParseError, SizeLimitError, ValidationError
from .graph import INF, Graph, degeneracy_elimination, finite_radius

EXACT_CAP = 9


class VertexOrder:
    """A permutation of ``0..n-1``; ``perm[i]`` is the vertex of rank ``i``."""

    __slots__ = ("perm", "rank")

    def __init__(self, permutation: Iterable[int]):
        perm = tuple(permutation)
        n = len(perm)
        rank = [-1] * n
        for i, v in enumerate(perm):
            if not (isinstance(v, int) and 0 <= v < n) or rank[v] != -1:
                raise ValidationError(f"not a permutation of 0..{n - 1}: {list(perm)}")
            rank[v] = i
        self.perm = perm
        self.rank = tuple(rank)

    @classmethod
    def identity(cls, n: int) -> "VertexOrder":
        return cls(range(n))

    @classmethod
    def parse(cls, text: str) -> "VertexOrder":
        tokens = [t for line in text.splitlines() for t in line.split("#", 1)[0].split()]
        try:
            return cls(int(t) for t in tokens)
        except ValueError:
            raise ParseError("order must be whitespace-separated integers") from None

    def serialize(self) -> str:
        return " ".join(map(str, self.perm)) + "\n"

    def __len__(self):
        return len(self.perm)

    def __iter__(self):
        return iter(self.perm)

    def __getitem__(self, i):
        return self.perm[i]

    def __eq__(self, other):
        return isinstance(other, VertexOrder) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"VertexOrder({list(self.perm)})"

    def less(self, u: int, v: int) -> bool:
        return self.rank[u] < self.rank[v]

    def reversed(self) -> "VertexOrder":
        return VertexOrder(reversed(self.perm))

    def restricted(self, vertices: Iterable[int]) -> list[int]:
        """The given vertices listed in this order."""
        return sorted(vertices, key=self.rank.__getitem__)


def check_order(g: Graph, order: VertexOrder) -> None:
    if len(order) != g.n:
        raise ValidationError(f"order has {len(order)} vertices, graph has {g.n}")


@dataclass(frozen=True)
class ReachMode:
    """``weak``, ``strong`` or ``hop`` with a budget of ``hops`` descents."""

    kind: str
    hops: int | None = None

    def __post_init__(self):
        if self.kind not in ("weak", "strong", "hop"):
            raise ValidationError(f"unknown reach mode {self.kind!r}")
        if self.kind == "hop" and (self.hops is None or self.hops < 1):
            raise ValidationError("hop mode needs a budget of at least 1")

    @classmethod
    def coerce(cls, mode) -> "ReachMode":
        if isinstance(mode, ReachMode):
            return mode
        if isinstance(mode, str):
            if mode.startswith("hop"):
                return cls("hop", int(mode[3:].strip("()")))
            return cls(mode)
        raise ValidationError(f"cannot interpret {mode!r} as a reach mode")


WEAK = ReachMode("weak")
STRONG = ReachMode("strong")


def hop(ell: int) -> ReachMode:
    return ReachMode("hop", ell)


def _hop_reach(g: Graph, rank: Sequence, v: int, r: int, ell: int) -> set[int]:
    """Pruned simple-path search for the hop-limited reach set.

    Along the path ``v = v_0 .. v_s = u``, ``u`` must be smaller than every
    other path vertex, and the number of records (positions ``j >= 1`` smaller
    than all earlier path vertices) must stay within ``ell``.
    """
    found = {v}
    on_path = {v}

    def walk(x: int, length: int, low, records: int):
        # ``low`` is the smallest rank met so far, i.e. the current record.
        if length == r:
            return
        for y in g.adj[x]:
            if y in on_path:
                continue
            ry = rank[y]
            if ry < low:
                if records + 1 <= ell:
                    found.add(y)
                    # y may be an internal record on the way to a smaller u
                    if records + 1 < ell:
                        on_path.add(y)
                        walk(y, length + 1, ry, records + 1)
                        on_path.discard(y)
            else:
                # y stays internal; any later endpoint is smaller than low <= ry
                on_path.add(y)
                walk(y, length + 1, low, records)
                on_path.discard(y)

    walk(v, 0, rank[v], 0)
    return found


def reach_set(g: Graph, order: VertexOrder, v: int, r=INF, mode="weak") -> frozenset[int]:
    """The strong, weak or hop-limited ``r``-reach set of ``v`` (containing ``v``).

    Computed by depth-first search over simple paths.  A branch is cut as soon
    as it can no longer end in a valid target: for strong reach the first
    vertex smaller than ``v`` ends the path, for weak reach the path may keep
    descending, for ``hop(l)`` at most ``l`` descents are allowed.
    """
    check_order(g, order)
    mode = ReachMode.coerce(mode)
    if not 0 <= v < g.n:
        raise ValidationError(f"vertex {v} out of range")
    r = finite_radius(r, g.n)
    if mode.kind == "strong":
        ell = 1
    elif mode.kind == "weak":
        ell = max(r, 1)
    else:
        ell = mode.hops
    return frozenset(_hop_reach(g, order.rank, v, r, ell))


# ---------------------------------------------------------------- fast evaluators
# Independent of the path search above: BFS for strong reach, a widest-path
# recurrence for weak reach, and elimination for the fill-in width.


def strong_sets(g: Graph, order: VertexOrder, r) -> list[set[int]]:
    r = finite_radius(r, g.n)
    rank = order.rank
    out = []
    for v in range(g.n):
        rv = rank[v]
        reach = {v}
        dist = {v: 0}
        frontier = [v]
        d = 0
        while frontier and d < r:
            d += 1
            nxt = []
            for x in frontier:
                for y in g.adj[x]:
                    if y in dist:
                        continue
                    dist[y] = d
                    if rank[y] < rv:
                        reach.add(y)
                    else:
                        nxt.append(y)
            frontier = nxt
        out.append(reach)
    return out


def weak_sets(g: Graph, order: VertexOrder, r) -> list[set[int]]:
    """Weak reach sets via ``best_k[y]`` = largest possible minimum internal rank.

    ``best_k[y]`` ranges over walks of length ``k`` from ``v`` to ``y``; ``u``
    is weakly reachable iff some ``k <= r`` has ``best_k[u] > rank(u)``.
    Walks suffice because shortcutting a walk keeps a subset of its internals.
    """
    r = finite_radius(r, g.n)
    rank = order.rank
    n = g.n
    top = n  # exceeds every rank: "no internal vertex yet"
    out = []
    for v in range(n):
        rv = rank[v]
        reach = {v}
        best = {y: top for y in g.adj[v]}
        k = 1
        while True:
            for y, b in best.items():
                if rank[y] < rv and b > rank[y]:
                    reach.add(y)
            if k == r or not best:
                break
            nxt: dict[int, int] = {}
            for x, b in best.items():
                through = min(b, rank[x])
                for y in g.adj[x]:
                    if through > nxt.get(y, -1):
                        nxt[y] = through
            if nxt == best:
                break
            best = nxt
            k += 1
        out.append(reach)
    return out


def order_width(g: Graph, order: VertexOrder) -> int:
    """Fill-in width: eliminate from the back, each vertex cliquing its smaller neighbours."""
    check_order(g, order)
    rank = order.rank
    nbrs = [set(a) for a in g.adj]
    width = 0
    for v in reversed(order.perm):
        back = [u for u in nbrs[v] if rank[u] < rank[v]]
        width = max(width, len(back))
        for i, a in enumerate(back):
            for b in back[i + 1 :]:
                nbrs[a].add(b)
                nbrs[b].add(a)
    return width


def order_depth(g: Graph, order: VertexOrder) -> int:
    check_order(g, order)
    return max((len(s) for s in weak_sets(g, order, INF)), default=0)


def col_of_order(g: Graph, order: VertexOrder, r) -> int:
    check_order(g, order)
    return max((len(s) for s in strong_sets(g, order, r)), default=0)


def wcol_of_order(g: Graph, order: VertexOrder, r) -> int:
    check_order(g, order)
    return max((len(s) for s in weak_sets(g, order, r)), default=0)


def gcol_of_order(g: Graph, order: VertexOrder, r, ell: int) -> int:
    check_order(g, order)
    rr = finite_radius(r, g.n)
    return max((len(_hop_reach(g, order.rank, v, rr, ell)) for v in range(g.n)), default=0)


def _key(r) -> str:
    return "inf" if r == INF else str(r)


@dataclass
class OrderProfile:
    """Per-radius values of an order; ``table[measure][r]``, with ``r = INF`` included."""

    table: dict[str, dict] = field(default_factory=dict)

    def value(self, measure: str, r):
        return self.table[measure][r]

    def radii(self):
        return list(self.table["col"].keys())

    def to_json(self) -> str:
        data = {m: {_key(r): v for r, v in rows.items()} for m, rows in self.table.items()}
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "OrderProfile":
        raw = json.loads(text)
        table = {
            m: {(INF if k == "inf" else int(k)): v for k, v in rows.items()} for m, rows in raw.items()
        }
        return cls(table)


def order_profile(g: Graph, order: VertexOrder, r_max=4, include_hop: Iterable[int] = ()) -> OrderProfile:
    """col, wcol and optional gcol rows for ``r = 1..r_max`` plus the ``INF`` row.

    The ``INF`` row holds fill-in width + 1 for col and the order depth for wcol.
    An unbounded ``r_max`` means rows up to ``n``.
    """
    check_order(g, order)
    top = max(g.n, 1) if r_max == INF else int(r_max)
    if top < 1:
        raise ValidationError("r_max must be at least 1")
    radii = list(range(1, top + 1))
    table: dict[str, dict] = {"col": {}, "wcol": {}}
    for r in radii:
        table["col"][r] = col_of_order(g, order, r)
        table["wcol"][r] = wcol_of_order(g, order, r)
    table["col"][INF] = order_width(g, order) + 1 if g.n else 0
    table["wcol"][INF] = order_depth(g, order)
    for ell in include_hop:
        name = f"gcol{ell}"
        table[name] = {r: gcol_of_order(g, order, r, ell) for r in radii}
        table[name][INF] = gcol_of_order(g, order, INF, ell)
    return OrderProfile(table)


# ---------------------------------------------------------------- exact search


@dataclass(frozen=True)
class ExactResult:
    value: int
    order: VertexOrder


MEASURES = ("col", "wcol", "gcol", "adm", "treewidth", "treedepth")


def heuristic_order(g: Graph) -> VertexOrder:
    """Reverse min-degree elimination: the degeneracy order, last-removed first."""
    removal, _ = degeneracy_elimination(g)
    return VertexOrder(reversed(removal))


def _strong_back_count(g: Graph, earlier: int, v: int, r: int) -> int:
    """1 + number of vertices in bitmask ``earlier`` strongly r-reachable from v."""
    seen = 1 << v
    frontier = [v]
    hits = 0
    for _ in range(r):
        nxt = []
        for x in frontier:
            for y in g.adj[x]:
                bit = 1 << y
                if seen & bit:
                    continue
                seen |= bit
                if earlier & bit:
                    hits += 1
                else:
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return hits + 1


def _subset_dp(n: int, cost) -> tuple[int, list[int]]:
    """Minimise ``max_i cost(prefix_i, v_i)`` over orders, prefix given as bitmask.

    Returns the optimum and the lexicographically smallest optimal order.
    """
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def completion(placed: int) -> int:
        if placed == full:
            return 0
        best = None
        for v in range(n):
            if placed >> v & 1:
                continue
            c = cost(placed, v)
            if best is not None and c >= best:
                continue
            c = max(c, completion(placed | 1 << v))
            if best is None or c < best:
                best = c
        return best

    opt = completion(0)
    perm = []
    placed = 0
    for _ in range(n):
        for v in range(n):
            if not placed >> v & 1 and max(cost(placed, v), completion(placed | 1 << v)) <= opt:
                perm.append(v)
                placed |= 1 << v
                break
    completion.cache_clear()
    return opt, perm


def _wcol_branch_and_bound(g: Graph, r: int) -> tuple[int, list[int]]:
    """Counter-based search; placing ``v`` credits every unplaced vertex within
    distance ``r`` of ``v`` in the graph minus earlier vertices."""
    n = g.n
    start = heuristic_order(g)
    best_val = wcol_of_order(g, start, r)
    best_perm = list(start.perm)
    bound = [best_val + 1]
    counters = [0] * n
    placed = [False] * n
    prefix: list[int] = []

    def ball(v):
        dist = {v: 0}
        frontier = [v]
        for d in range(r):
            nxt = []
            for x in frontier:
                for y in g.adj[x]:
                    if not placed[y] and y not in dist:
                        dist[y] = d + 1
                        nxt.append(y)
            if not nxt:
                break
            frontier = nxt
        return list(dist)

    def search(cur: int):
        nonlocal best_val, best_perm
        if len(prefix) == n:
            if cur < bound[0]:
                bound[0] = cur
                best_val = cur
                best_perm = list(prefix)
            return
        for v in range(n):
            if placed[v]:
                continue
            b = ball(v)
            for w in b:
                counters[w] += 1
            lb = cur
            for w in b:
                lb = max(lb, counters[w] if w == v else counters[w] + 1)
            if lb < bound[0]:
                placed[v] = True
                prefix.append(v)
                search(lb)
                prefix.pop()
                placed[v] = False
            for w in b:
                counters[w] -= 1

    search(0)
    return best_val, best_perm


def _gcol_branch_and_bound(g: Graph, r: int, ell: int) -> tuple[int, list[int]]:
    """Front-to-back search; a vertex's hop reach set is final once it is placed,
    since only smaller vertices can be records on its paths."""
    n = g.n
    start = heuristic_order(g)
    best = [gcol_of_order(g, start, r, ell) + 1, list(start.perm)]
    rank = [n + v for v in range(n)]
    prefix: list[int] = []

    def search(cur: int):
        if len(prefix) == n:
            if cur < best[0]:
                best[0], best[1] = cur, list(prefix)
            return
        for v in range(n):
            if rank[v] < n:
                continue
            rank[v] = len(prefix)
            size = len(_hop_reach(g, rank, v, r, ell))
            nxt = max(cur, size)
            if nxt < best[0]:
                prefix.append(v)
                search(nxt)
                prefix.pop()
            rank[v] = n + v

    search(0)
    return best[0], best[1]


def exact_parameter(g: Graph, r=INF, measure: str = "wcol", cap: int = EXACT_CAP, hops: int | None = None) -> ExactResult:
    """Minimum of an order measure over all orders, with the lexicographically
    smallest witness order.

    ``col``, ``adm`` and ``treewidth`` depend only on which vertices precede a
    vertex, so they are solved by dynamic programming over prefix sets.
    ``wcol``, ``treedepth`` and ``gcol`` use branch and bound over partial
    orders.  ``treewidth`` is reported as ``col_inf - 1`` and ``treedepth`` as
    ``wcol_inf``; ``r`` is ignored for both.  Exponential: refuses ``n > cap``.
    """
    if measure not in MEASURES:
        raise ValidationError(f"unknown measure {measure!r}; choose from {', '.join(MEASURES)}")
    if g.n > cap:
        raise SizeLimitError(f"exact search is exponential; n={g.n} exceeds cap {cap}")
    if g.n == 0:
        return ExactResult(0, VertexOrder([]))
    if measure in ("treewidth", "treedepth"):
        rr = g.n
    else:
        rr = finite_radius(r, g.n)
        if rr < 1:
            raise ValidationError("radius must be at least 1")
    if measure in ("col", "treewidth"):
        value, perm = _subset_dp(g.n, lambda placed, v: _strong_back_count(g, placed, v, rr))
        if measure == "treewidth":
            value -= 1
    elif measure == "adm":
        from .admissibility import fan_number

        value, perm = _subset_dp(g.n, lambda placed, v: fan_number(g, placed | 1 << v, v, rr))
    elif measure in ("wcol", "treedepth"):
        value, perm = _wcol_branch_and_bound(g, rr)
    else:
        if hops is None or hops < 1:
            raise ValidationError("gcol needs a hop budget of at least 1")
        value, perm = _gcol_branch_and_bound(g, rr, hops)
    return ExactResult(value, VertexOrder(perm))
