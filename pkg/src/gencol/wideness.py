"""Neighbourhood covers, neighbourhood complexity and uniform quasi-wideness.

Conventions: covers use closed balls ``N_r[u]``; neighbourhood complexity
uses open balls ``N_r(v) = N_r[v] - {v}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .errors import ContractError, ValidationError
from .graph import Graph, finite_radius
from .reach import EXACT_CAP, VertexOrder, check_order, exact_parameter, heuristic_order, wcol_of_order, weak_sets


# ---------------------------------------------------------------- covers


@dataclass
class Cover:
    clusters: list[frozenset[int]]
    centers: list[int]
    r: int
    radius: int
    degree: int

    def serialize(self) -> str:
        lines = [" ".join(map(str, sorted(c))) for c in self.clusters]
        stats = {"radius": self.radius, "degree": self.degree, "clusters": len(self.clusters)}
        return "\n".join(lines + [json.dumps(stats, sort_keys=True)]) + "\n"


def cover_defects(g: Graph, clusters, r: int) -> list[str]:
    """Vertices whose closed ``r``-ball lies in no cluster."""
    out = []
    for u in range(g.n):
        ball = set(g.bfs(u, r))
        if not any(ball <= c for c in clusters):
            out.append(f"N_{r}[{u}] is not inside any cluster")
    return out


def neighborhood_cover(g: Graph, order: VertexOrder, r) -> Cover:
    """Clusters ``X_v = {w : v in WReach_2r[w]}``; verified before returning.

    ``N_r[u]`` sits inside ``X_m`` for the order-minimum ``m`` of the ball, each
    ``X_v`` has radius at most ``2r`` around ``v`` in ``G[X_v]``, and ``w`` lies
    in at most ``|WReach_2r[w]|`` clusters.
    """
    check_order(g, order)
    r = finite_radius(r, g.n)
    weak = weak_sets(g, order, 2 * r)
    members: list[set[int]] = [set() for _ in range(g.n)]
    for w, reach in enumerate(weak):
        for v in reach:
            members[v].add(w)
    centers = [v for v in order if members[v]]
    clusters = [frozenset(members[v]) for v in centers]

    radius = 0
    for v, c in zip(centers, clusters):
        dist = g.bfs(v, allowed=c)
        if len(dist) != len(c):
            raise ContractError(f"cluster of {v} is disconnected")
        radius = max(radius, max(dist.values()))
    degree = max((sum(1 for c in clusters if w in c) for w in range(g.n)), default=0)
    bound = wcol_of_order(g, order, 2 * r) if g.n else 0
    bad = cover_defects(g, clusters, r)
    if bad:
        raise ContractError(bad[0])
    if radius > 2 * r or degree > bound:
        raise ContractError(f"cover radius {radius} / degree {degree} exceed {2 * r} / {bound}")
    return Cover(clusters, centers, r, radius, degree)


# ---------------------------------------------------------------- traces


@dataclass
class TraceReport:
    count: int
    wcol: int
    exact: bool
    bound: float
    holds: bool

    def as_dict(self):
        return {"traces": self.count, "wcol_2r": self.wcol, "exact": self.exact, "bound": self.bound, "holds": self.holds}


def trace_count(g: Graph, A, r) -> int:
    r = finite_radius(r, g.n)
    A = set(A)
    seen = set()
    for v in range(g.n):
        ball = g.bfs(v, r)
        seen.add(frozenset(x for x in ball if x != v and x in A))
    return len(seen)


def trace_bound(c: int, r: int, size: int) -> float:
    return 0.5 * (2 * r + 2) ** c * c * size + 1


def neighborhood_complexity(g: Graph, A, r, order: VertexOrder | None = None) -> tuple[int, TraceReport]:
    """Distinct traces ``N_r(v) & A`` checked against ``0.5 (2r+2)^c c |A| + 1``
    with ``c = wcol_2r``.

    The bound uses exact ``wcol_2r`` when the graph is small enough, else the
    value of ``order`` (default: the degeneracy order), which only loosens it.
    """
    A = set(A)
    if not A:
        raise ValidationError("A must be nonempty")
    if not A <= set(range(g.n)):
        raise ValidationError("A contains vertices outside the graph")
    r = finite_radius(r, g.n)
    count = trace_count(g, A, r)
    if order is None and g.n <= EXACT_CAP:
        c, exact = exact_parameter(g, 2 * r, "wcol").value, True
    else:
        c, exact = wcol_of_order(g, order or heuristic_order(g), 2 * r), False
    bound = trace_bound(c, r, len(A))
    return count, TraceReport(count, c, exact, bound, count <= bound)


# ---------------------------------------------------------------- wideness


def distance_independent(g: Graph, S, B, r: int) -> bool:
    alive = set(range(g.n)) - set(S)
    B = list(B)
    for i, b in enumerate(B):
        if b not in alive:
            return False
        ball = g.bfs(b, r, allowed=alive)
        if any(x in ball for x in B[i + 1 :]):
            return False
    return True


@dataclass
class WidenessCertificate:
    A: frozenset[int]
    r: int
    m: int
    S: list[int]
    B: list[int]

    def verify(self, g: Graph) -> bool:
        return (
            set(self.B) <= self.A - set(self.S)
            and len(self.B) >= self.m
            and distance_independent(g, self.S, self.B, self.r)
        )

    def to_json(self) -> str:
        return json.dumps({"r": self.r, "m": self.m, "S": self.S, "B": self.B, "found": True}, sort_keys=True)


@dataclass
class WidenessFailure:
    r: int
    m: int
    best_S: list[int]
    best_B: list[int]
    attempts: list[tuple[int, int]] = field(default_factory=list)

    def verify(self, g: Graph) -> bool:
        return False

    def to_json(self) -> str:
        return json.dumps(
            {"r": self.r, "m": self.m, "S": self.best_S, "B": self.best_B, "found": False, "attempts": self.attempts},
            sort_keys=True,
        )


def _far_apart(g: Graph, cand, S: set[int], r: int) -> list[int]:
    alive = set(range(g.n)) - S
    blocked: set[int] = set()
    out = []
    for a in sorted(cand):
        if a in blocked:
            continue
        out.append(a)
        blocked.update(g.bfs(a, r, allowed=alive))
    return out


def _bottleneck(g: Graph, A: set[int], S: set[int], r: int) -> int | None:
    """Vertex lying in the most weak reach sets of the remaining ``A`` vertices."""
    keep = sorted(set(range(g.n)) - S)
    sub, old = g.induced(keep)
    if sub.n == 0:
        return None
    order = heuristic_order(sub)
    weak = weak_sets(sub, order, r)
    freq = [0] * sub.n
    for i, v in enumerate(old):
        if v in A:
            for u in weak[i]:
                if u != i:
                    freq[u] += 1
    best = max(range(sub.n), key=lambda i: (freq[i], -order.rank[i]))
    return old[best] if freq[best] else None


def _exhaustive(g: Graph, A: set[int], r: int, m: int, budget: int):
    for size in range(budget + 1):
        for S in combinations(range(g.n), size):
            cand = sorted(A - set(S))
            if len(cand) < m:
                continue
            for B in combinations(cand, m):
                if distance_independent(g, S, B, r):
                    return list(S), list(B)
    return None


def uqw_extract(g: Graph, A, r, m: int, s_budget: int, exhaustive_cap: int = 10):
    """Find ``S`` with ``|S| <= s_budget`` and ``B ⊆ A - S`` with ``|B| >= m``,
    distance-``r`` independent in ``G - S``.

    Greedy far-apart selection in ``G - S``; when it falls short, the vertex
    that occurs most often in weak ``r``-reach sets of ``A`` vertices is moved
    into ``S``.  Graphs with at most ``exhaustive_cap`` vertices get an
    exhaustive search if the greedy pass fails.  Returns a verified
    certificate or a ``WidenessFailure``.
    """
    if m < 1 or s_budget < 0:
        raise ValidationError("need m >= 1 and s_budget >= 0")
    A = set(A)
    if not A <= set(range(g.n)):
        raise ValidationError("A contains vertices outside the graph")
    r = finite_radius(r, g.n)
    S: list[int] = []
    attempts = []
    best = ([], [])
    while True:
        B = _far_apart(g, A - set(S), set(S), r)
        attempts.append((len(S), len(B)))
        if len(B) > len(best[1]):
            best = (list(S), B)
        if len(B) >= m:
            cert = WidenessCertificate(frozenset(A), r, m, list(S), B)
            break
        if len(S) >= s_budget:
            cert = None
            break
        z = _bottleneck(g, A - set(S), set(S), r)
        if z is None:
            cert = None
            break
        S.append(z)
    if cert is None and g.n <= exhaustive_cap:
        found = _exhaustive(g, A, r, m, s_budget)
        if found:
            cert = WidenessCertificate(frozenset(A), r, m, *found)
    if cert is None:
        return WidenessFailure(r, m, *best, attempts)
    if not cert.verify(g):
        raise ContractError("wideness certificate failed re-verification")
    return cert
