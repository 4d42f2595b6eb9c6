"""Fans, fan-set certificates, admissibility of orders and greedy admissibility orders.

A ``v``-``A`` fan may contain the length-0 path ``(v,)`` when ``v`` is in
``A``; with this convention ``adm_1`` coincides with ``col_1``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ContractError, SizeLimitError, ValidationError
from .graph import INF, Graph, finite_radius
from .reach import VertexOrder, check_order

FAN_CAP = 12


@dataclass(frozen=True)
class Fan:
    """Paths from ``apex`` into a target set; ``upper_bound`` bounds the best fan."""

    apex: int
    paths: tuple[tuple[int, ...], ...]
    r: int
    exact: bool = True
    upper_bound: int = 0

    @property
    def size(self) -> int:
        return len(self.paths)


def check_fan(g: Graph, fan: Fan, A: Iterable[int]) -> str | None:
    """Return a description of the first defect of ``fan``, or None if it is valid."""
    A = set(A)
    v = fan.apex
    used: set[int] = set()
    for p in fan.paths:
        if not p or p[0] != v:
            return f"path {p} does not start at the apex {v}"
        if p[-1] not in A:
            return f"path {p} does not end in the target set"
        if len(p) - 1 > fan.r:
            return f"path {p} is longer than {fan.r}"
        if len(set(p)) != len(p):
            return f"path {p} repeats a vertex"
        for a, b in zip(p, p[1:]):
            if not g.has_edge(a, b):
                return f"path {p} uses the non-edge {a}-{b}"
        if any(x in A for x in p[1:-1]):
            return f"path {p} has an internal vertex in the target set"
        rest = set(p[1:])
        if rest & used:
            return f"path {p} meets another path away from the apex"
        used |= rest
    if sum(1 for p in fan.paths if len(p) == 1) > 1:
        return "the length-0 path appears twice"
    return None


def _free_region(g: Graph, A_mask: int, v: int, r: int) -> int:
    """Vertices outside ``A`` that can be interior vertices of a fan path."""
    seen = {v}
    frontier = [v]
    count = 0
    for _ in range(r - 1):
        nxt = []
        for x in frontier:
            for y in g.adj[x]:
                if y not in seen and not A_mask >> y & 1:
                    seen.add(y)
                    nxt.append(y)
                    count += 1
        frontier = nxt
    return count


def _exact_fan(g: Graph, A_mask: int, v: int, r: int, cap: int) -> list[tuple[int, ...]]:
    if _free_region(g, A_mask, v, r) > cap:
        raise SizeLimitError(
            f"exact fan search around vertex {v} exceeds {cap} interior vertices; use approx mode"
        )
    # Candidate paths grouped by endpoint, keeping inclusion-minimal vertex sets.
    by_end: dict[int, dict[int, tuple[int, ...]]] = {}
    path = [v]

    def walk(x: int, mask: int):
        for y in sorted(g.adj[x]):
            bit = 1 << y
            if mask & bit or y == v:
                continue
            if A_mask & bit:
                by_end.setdefault(y, {})[mask | bit] = tuple(path) + (y,)
            elif len(path) < r:
                path.append(y)
                walk(y, mask | bit)
                path.pop()

    walk(v, 0)
    options = []
    for end in sorted(by_end):
        masks = sorted(by_end[end], key=lambda m: (bin(m).count("1"), m))
        minimal: list[int] = []
        for m in masks:
            if not any(k & m == k for k in minimal):
                minimal.append(m)
        options.append([(m, by_end[end][m]) for m in minimal])
    options.sort(key=len)
    first_hops = 0
    for y in g.adj[v]:
        first_hops |= 1 << y

    best: list = [[]]
    chosen: list[tuple[int, ...]] = []

    def pack(i: int, used: int):
        if len(chosen) > len(best[0]):
            best[0] = list(chosen)
        if i == len(options):
            return
        free_starts = bin(first_hops & ~used).count("1")
        if len(chosen) + min(len(options) - i, free_starts) <= len(best[0]):
            return
        for m, p in options[i]:
            if not m & used:
                chosen.append(p)
                pack(i + 1, used | m)
                chosen.pop()
        pack(i + 1, used)

    pack(0, 0)
    return [(v,)] + sorted(best[0], key=lambda p: (len(p), p))


def _approx_fan(g: Graph, A_mask: int, v: int, r: int) -> list[tuple[int, ...]]:
    """Greedy peeling: repeatedly take a shortest admissible path avoiding earlier ones."""
    used = {v}
    paths = [(v,)]
    while True:
        parent = {v: None}
        depth = {v: 0}
        queue = deque([v])
        hit = None
        while queue and hit is None:
            x = queue.popleft()
            for y in sorted(g.adj[x]):
                if y in used or y in parent:
                    continue
                if A_mask >> y & 1:
                    parent[y] = x
                    hit = y
                    break
                if depth[x] + 1 < r:
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    queue.append(y)
        if hit is None:
            return paths
        p = [hit]
        while parent[p[-1]] is not None:
            p.append(parent[p[-1]])
        p.reverse()
        paths.append(tuple(p))
        used.update(p)


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for x in vertices:
        m |= 1 << x
    return m


def fan_number(g: Graph, A_mask: int, v: int, r: int, cap: int = FAN_CAP) -> int:
    """Exact ``b_r(A, v)`` with ``A`` given as a bitmask containing ``v``."""
    return len(_exact_fan(g, A_mask, v, r, cap))


def max_fan(g: Graph, A: Iterable[int], v: int, r=INF, mode: str = "exact", cap: int = FAN_CAP) -> tuple[int, Fan]:
    """Largest depth-``r`` fan from ``v`` into ``A`` (``v`` in ``A``).

    ``exact`` searches all path packings (exponential, capped by the number of
    candidate interior vertices).  ``approx`` peels shortest paths greedily;
    every optimal path meets one of the at most ``r`` non-apex vertices of some
    peeled path, so the true value is at most ``1 + r * (size - 1)``.
    """
    A = set(A)
    if v not in A:
        raise ValidationError(f"apex {v} must belong to the target set")
    r = finite_radius(r, g.n)
    if mode == "exact":
        paths = _exact_fan(g, _mask(A), v, r, cap)
        fan = Fan(v, tuple(paths), r, True, len(paths))
    elif mode == "approx":
        paths = _approx_fan(g, _mask(A), v, r)
        fan = Fan(v, tuple(paths), r, False, 1 + r * (len(paths) - 1))
    else:
        raise ValidationError(f"unknown fan mode {mode!r}")
    return fan.size, fan


def adm_of_order(g: Graph, order: VertexOrder, r=INF, mode: str = "exact") -> int:
    """``max_i b_r(V_i, v_i)``; in approx mode the certified upper bound of each term."""
    check_order(g, order)
    r = finite_radius(r, g.n)
    best = 0
    prefix = 0
    for v in order:
        prefix |= 1 << v
        if mode == "exact":
            best = max(best, fan_number(g, prefix, v, r))
        else:
            best = max(best, 1 + r * (len(_approx_fan(g, prefix, v, r)) - 1))
    return best


# ---------------------------------------------------------------- fan sets


@dataclass(frozen=True)
class FanSetCertificate:
    A: frozenset[int]
    k: int
    r: int
    fans: dict[int, Fan] = field(hash=False)

    def verify(self, g: Graph) -> bool:
        if set(self.fans) != set(self.A):
            return False
        for a, fan in self.fans.items():
            if fan.apex != a or fan.size < self.k or fan.r > self.r:
                return False
            if check_fan(g, fan, self.A) is not None:
                return False
        return True

    def to_json(self) -> str:
        return json.dumps(
            {
                "A": sorted(self.A),
                "k": self.k,
                "r": self.r,
                "fans": {str(a): [list(p) for p in self.fans[a].paths] for a in sorted(self.fans)},
            },
            sort_keys=True,
        )


@dataclass(frozen=True)
class FanSetRefutation:
    vertex: int
    best: int
    fan: Fan


def verify_fan_set(g: Graph, A: Iterable[int], k: int, r=INF, cap: int = FAN_CAP):
    """Certificate that every ``a`` in ``A`` has ``b_r(A, a) >= k``, or a refuting vertex."""
    A = frozenset(A)
    if not A:
        raise ValidationError("fan set must be nonempty")
    r = finite_radius(r, g.n)
    fans = {}
    for a in sorted(A):
        size, fan = max_fan(g, A, a, r, "exact", cap)
        if size < k:
            return FanSetRefutation(a, size, fan)
        fans[a] = fan
    cert = FanSetCertificate(A, k, r, fans)
    if not cert.verify(g):
        raise ContractError("constructed fan-set certificate failed verification")
    return cert


# ---------------------------------------------------------------- greedy orders


@dataclass(frozen=True)
class AdmResult:
    order: VertexOrder
    value: int
    steps: tuple[int, ...] = ()
    fan_set: frozenset[int] = frozenset()

    def __iter__(self):
        return iter((self.order, self.value))


def _fan_value(g: Graph, S: int, v: int, r: int, mode: str, cap: int = FAN_CAP) -> tuple[int, int]:
    """(selection value, certified upper bound) of ``b_r(S, v)``."""
    if mode == "exact":
        b = fan_number(g, S, v, r, cap)
        return b, b
    s = len(_approx_fan(g, S, v, r))
    return s, 1 + r * (s - 1)


def greedy_adm_order(g: Graph, r=INF, mode: str = "exact", cap: int = FAN_CAP) -> AdmResult:
    """Build the order from the back, always taking a vertex of least ``b_r``.

    Exact mode reports ``adm_r(G)`` itself.  Approx mode ranks vertices by
    their peeled fan size ``s`` and reports ``max s``; that value is at most
    ``adm_r(G)``, and ``adm_r`` of the returned order is at most ``r`` times it.
    ``auto`` tries exact mode and falls back to approx when the cap is hit.

    In exact mode ``fan_set`` is the remaining set at the step that attains
    the value: every vertex in it has ``b_r >= value``, a matching lower bound.
    """
    if mode == "auto":
        try:
            return greedy_adm_order(g, r, "exact", cap)
        except SizeLimitError:
            return greedy_adm_order(g, r, "approx", cap)
    if mode not in ("exact", "approx"):
        raise ValidationError(f"unknown mode {mode!r}")
    r = finite_radius(r, g.n)
    S = (1 << g.n) - 1
    cache: dict[int, int] = {}
    back = []
    steps = []
    ball_cache: dict[int, list[int]] = {}
    witness = 0
    for _ in range(g.n):
        best_v, best_b = -1, None
        for v in range(g.n):
            if not S >> v & 1:
                continue
            if v not in cache:
                cache[v] = _fan_value(g, S, v, r, mode, cap)[0]
            if best_b is None or cache[v] < best_b:
                best_v, best_b = v, cache[v]
        if best_b > max(steps, default=0):
            witness = S
        back.append(best_v)
        steps.append(best_b)
        S &= ~(1 << best_v)
        # only fans within distance r of the removed vertex can change
        if best_v not in ball_cache:
            ball_cache[best_v] = list(g.bfs(best_v, r))
        for w in ball_cache[best_v]:
            cache.pop(w, None)
    back.reverse()
    steps.reverse()
    fan_set = frozenset(v for v in range(g.n) if witness >> v & 1) if mode == "exact" else frozenset()
    return AdmResult(VertexOrder(back), max(steps, default=0), tuple(steps), fan_set)


@dataclass(frozen=True)
class UniversalResult:
    order: VertexOrder
    achieved: dict[int, int]
    thresholds: dict[int, int]
    doublings: int = 0

    def __iter__(self):
        return iter((self.order, self.achieved))


def _bound(g: Graph, S: int, v: int, r: int) -> int:
    try:
        return fan_number(g, S, v, r)
    except SizeLimitError:
        return _fan_value(g, S, v, r, "approx")[1]


def universal_order(g: Graph, r_max: int = 4, schedule="auto") -> UniversalResult:
    """One order whose ``adm_r`` stays below ``f(r)`` for every ``r <= r_max``.

    The order is built from the back, each step taking the smallest vertex
    with ``b_r(S, v) <= f(r)`` for all radii at once.  The automatic schedule
    is ``f(r) = 2^(r+1) * greedy adm_r``; when no vertex qualifies, every
    threshold doubles, so the loop ends once thresholds exceed ``n``.
    """
    top = max(g.n, 1) if r_max == INF else int(r_max)
    if top < 1:
        raise ValidationError("r_max must be at least 1")
    radii = range(1, top + 1)
    if schedule == "auto":
        f = {r: 2 ** (r + 1) * max(1, greedy_adm_order(g, r, "auto").value) for r in radii}
    elif callable(schedule):
        f = {r: int(schedule(r)) for r in radii}
    else:
        f = {r: int(schedule[r]) for r in radii}
    S = (1 << g.n) - 1
    back = []
    doublings = 0
    while S:
        pick = None
        for v in range(g.n):
            if S >> v & 1 and all(_bound(g, S, v, r) <= f[r] for r in radii):
                pick = v
                break
        if pick is None:
            f = {r: 2 * t for r, t in f.items()}
            doublings += 1
            continue
        back.append(pick)
        S &= ~(1 << pick)
    order = VertexOrder(reversed(back))
    achieved = {}
    for r in radii:
        try:
            achieved[r] = adm_of_order(g, order, r, "exact")
        except SizeLimitError:
            achieved[r] = adm_of_order(g, order, r, "approx")
    return UniversalResult(order, achieved, f, doublings)
