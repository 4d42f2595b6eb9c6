"""Game engines: radius-r counter game, Splitter game and bounded-speed pursuit.

Pursuit rules used throughout.  Each round the cops announce a landing set
``C'`` of at most ``k`` vertices.  Cops in ``C ∩ C'`` stay put; the others
are airborne.  The robber may then run along a path of length at most ``r``
that avoids ``C ∩ C'`` and must end outside ``C'``.  If there is no such
path, the robber is caught.  Then the cops land and ``C := C'``.  In the
visible-agile variant the robber may run every round and the cops see it.
In the invisible-inert variant the robber may run only when its vertex is
in ``C'``, and the cop strategy is not told where the robber is.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from .errors import SizeLimitError, ValidationError
from .graph import INF, Graph, finite_radius
from .reach import VertexOrder, check_order, strong_sets, weak_sets

SOLVER_CAP = 200_000


# ---------------------------------------------------------------- counter game


def counter_game(g: Graph, r, placement: VertexOrder) -> int:
    """Place cops along ``placement``; each placement at ``v`` bumps the counter
    of every vertex within distance ``r`` of ``v`` in ``G - X`` (``v`` included),
    where ``X`` are the earlier cops.  Returns the largest counter."""
    check_order(g, placement)
    r = finite_radius(r, g.n)
    counters = [0] * g.n
    placed: set[int] = set()
    for v in placement:
        for u in g.bfs(v, r, allowed=set(range(g.n)) - placed):
            counters[u] += 1
        placed.add(v)
    return max(counters, default=0)


# ---------------------------------------------------------------- strategies


@dataclass
class Strategy:
    """Decision rule for one role: ``order``, ``random``, ``greedy`` or ``minimax``."""

    role: str
    rule: str
    order: VertexOrder | None = None
    seed: int = 0
    node_cap: int = SOLVER_CAP
    rng: random.Random = field(init=False, repr=False)

    ROLES = ("cop", "robber", "splitter", "connector")
    RULES = ("order", "random", "greedy", "minimax")

    def __post_init__(self):
        if self.role not in self.ROLES:
            raise ValidationError(f"unknown role {self.role!r}")
        if self.rule not in self.RULES:
            raise ValidationError(f"unknown rule {self.rule!r}")
        if self.rule == "order" and self.order is None:
            raise ValidationError("an order-based strategy needs an order")
        self.rng = random.Random(self.seed)

    def reset(self):
        self.rng = random.Random(self.seed)


@dataclass
class GameTranscript:
    variant: str
    params: dict[str, Any]
    rounds: list[dict[str, Any]] = field(default_factory=list)
    winner: str | None = None

    @property
    def length(self) -> int:
        return len(self.rounds)

    @property
    def resolved(self) -> bool:
        return self.winner not in (None, "unresolved")

    def to_jsonl(self) -> str:
        lines = [json.dumps({"variant": self.variant, **self.params}, sort_keys=True)]
        lines += [json.dumps(rec, sort_keys=True) for rec in self.rounds]
        lines.append(json.dumps({"winner": self.winner, "rounds": self.length}, sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "GameTranscript":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        head, *body, tail = rows
        variant = head.pop("variant")
        return cls(variant, head, body, tail["winner"])


# ---------------------------------------------------------------- splitter game


def _ball(g: Graph, c: int, r: int, alive: set[int]) -> set[int]:
    return set(g.bfs(c, r, allowed=alive))


class _SplitterSearch:
    """Exhaustive game values on vertex subsets, memoised, with a node cap."""

    def __init__(self, g: Graph, r: int, splitter: Strategy, cap: int):
        self.g, self.r, self.splitter, self.cap = g, r, splitter, cap
        self.memo: dict[frozenset[int], int] = {}

    def deterministic_split(self, alive, c, ball):
        return _split_choice(self.g, self.splitter, alive, c, ball, self) if self.splitter.rule in ("order", "greedy") else None

    def value(self, alive: frozenset[int]) -> int:
        """Rounds still to play from ``alive`` with Connector maximising."""
        if not alive:
            return 0
        if alive in self.memo:
            return self.memo[alive]
        if len(self.memo) >= self.cap:
            raise SizeLimitError("splitter game search exceeded its node cap")
        best = 0
        for c in sorted(alive):
            ball = _ball(self.g, c, self.r, set(alive))
            s = self.deterministic_split(alive, c, ball)
            if s is None:
                cont = min(self.value(frozenset(ball - {x})) for x in sorted(ball))
            else:
                cont = self.value(frozenset(ball - {s}))
            best = max(best, 1 + cont)
        self.memo[alive] = best
        return best

    def split_value(self, alive: frozenset[int]) -> int:
        """Rounds still to play with both players optimal."""
        if not alive:
            return 0
        key = ("opt", alive)
        if key in self.memo:
            return self.memo[key]
        if len(self.memo) >= self.cap:
            raise SizeLimitError("splitter game search exceeded its node cap")
        best = 0
        for c in sorted(alive):
            ball = _ball(self.g, c, self.r, set(alive))
            best = max(best, 1 + min(self.split_value(frozenset(ball - {x})) for x in sorted(ball)))
        self.memo[key] = best
        return best


def _split_choice(g, splitter: Strategy, alive, c, ball, search: _SplitterSearch | None) -> int:
    rule = splitter.rule
    if rule == "order":
        return min(ball, key=splitter.order.rank.__getitem__)
    if rule == "random":
        return splitter.rng.choice(sorted(ball))
    if rule == "minimax" and search is not None:
        try:
            return min(sorted(ball), key=lambda x: search.split_value(frozenset(ball - {x})))
        except SizeLimitError:
            pass
    # greedy: the ball vertex with most neighbours inside the ball
    return max(sorted(ball), key=lambda x: (sum(1 for y in g.adj[x] if y in ball), -x))


def _connect_choice(g, connector: Strategy, alive, r, search: _SplitterSearch | None) -> int:
    rule = connector.rule
    if rule == "random":
        return connector.rng.choice(sorted(alive))
    if rule == "minimax" and search is not None:
        try:
            def worth(c):
                ball = _ball(g, c, r, set(alive))
                s = search.deterministic_split(alive, c, ball)
                if s is None:
                    return min(search.split_value(frozenset(ball - {x})) for x in sorted(ball))
                return search.value(frozenset(ball - {s}))

            return max(sorted(alive), key=lambda c: (worth(c), -c))
        except SizeLimitError:
            pass
    if rule == "order":
        return min(alive, key=connector.order.rank.__getitem__)
    return max(sorted(alive), key=lambda c: (len(_ball(g, c, r, set(alive))), -c))


def splitter_game(g: Graph, r, splitter: Strategy, connector: Strategy, round_cap: int | None = None) -> GameTranscript:
    """Connector picks ``c``; Splitter deletes ``s`` from the closed ball ``N_r[c]`` of
    the current graph, and play continues on the rest of that ball.  Splitter wins
    when nothing is left."""
    r = finite_radius(r, g.n)
    cap = g.n + 1 if round_cap is None else round_cap
    if cap < 1:
        raise ValidationError("round cap must be at least 1")
    splitter.reset()
    connector.reset()
    search = _SplitterSearch(g, r, splitter, min(splitter.node_cap, connector.node_cap))
    alive = set(range(g.n))
    t = GameTranscript("splitter", {"r": r, "splitter": splitter.rule, "connector": connector.rule})
    while alive:
        if t.length >= cap:
            t.winner = "unresolved"
            return t
        c = _connect_choice(g, connector, frozenset(alive), r, search)
        ball = _ball(g, c, r, alive)
        s = _split_choice(g, splitter, frozenset(alive), c, ball, search)
        alive = ball - {s}
        t.rounds.append({"round": t.length + 1, "connector": c, "ball": sorted(ball), "splitter": s, "remaining": len(alive)})
    t.winner = "splitter"
    return t


def replay_splitter(g: Graph, t: GameTranscript) -> str:
    """Re-check every move of a Splitter transcript; returns the recomputed winner."""
    r = t.params["r"]
    alive = set(range(g.n))
    for rec in t.rounds:
        c, s = rec["connector"], rec["splitter"]
        if c not in alive:
            raise ValidationError(f"round {rec['round']}: connector vertex {c} is not in play")
        ball = _ball(g, c, r, alive)
        if sorted(ball) != rec["ball"] or s not in ball:
            raise ValidationError(f"round {rec['round']}: illegal splitter move")
        alive = ball - {s}
    return "splitter" if not alive else "unresolved"


# ---------------------------------------------------------------- pursuit


def _popcount(x: int) -> int:
    return bin(x).count("1")


class PursuitSolver:
    """Exact solution of the visible-agile game with ``k`` cops by backward induction.

    Positions are ``(C, v)`` with the cops on ``C`` to move and the robber on
    ``v``.  Only landing sets of size exactly ``min(k, n)`` are considered, which
    loses nothing since more cops never help the robber.  ``rank[(C, v)]`` is the
    number of rounds the cops need to force a capture, or ``INF``.
    """

    def __init__(self, g: Graph, r: int, k: int, cap: int = SOLVER_CAP):
        self.g, self.r, self.k = g, r, k
        n = g.n
        size = min(k, n)
        self.landings = [sum(1 << x for x in combo) for combo in combinations(range(n), size)]
        states = (len(self.landings) + 1) * n
        if states * max(1, len(self.landings)) > cap * 64:
            raise SizeLimitError(f"pursuit solver would explore about {states} positions, above its cap")
        self._dest: dict[tuple[int, int], int] = {}
        self.rank = self._solve()

    def dest(self, v: int, blocked: int) -> int:
        key = (v, blocked)
        got = self._dest.get(key)
        if got is None:
            seen = 1 << v
            frontier = [v]
            for _ in range(self.r):
                nxt = []
                for x in frontier:
                    for y in self.g.adj[x]:
                        bit = 1 << y
                        if not (seen | blocked) & bit:
                            seen |= bit
                            nxt.append(y)
                frontier = nxt
            got = self._dest[key] = seen
        return got

    def options(self, C: int, v: int, Cp: int) -> list[int]:
        mask = self.dest(v, C & Cp) & ~Cp
        return [x for x in range(self.g.n) if mask >> x & 1]

    def _solve(self) -> dict[tuple[int, int], float]:
        n = self.g.n
        positions = [(0, v) for v in range(n)]
        positions += [(C, v) for C in self.landings for v in range(n) if not C >> v & 1]
        rank: dict[tuple[int, int], float] = {p: INF for p in positions}
        level = 0
        changed = True
        while changed:
            changed = False
            level += 1
            newly = []
            for C, v in positions:
                if rank[(C, v)] != INF:
                    continue
                for Cp in self.landings:
                    if all(rank[(Cp, x)] < level for x in self.options(C, v, Cp)):
                        newly.append((C, v))
                        break
            for p in newly:
                rank[p] = level
                changed = True
        return rank

    def robber_wins(self) -> bool:
        return any(self.rank[(0, v)] == INF for v in range(self.g.n))

    def best_start(self) -> int:
        return max(range(self.g.n), key=lambda v: (self.rank[(0, v)], -v))

    def best_landing(self, C: int, v: int) -> int:
        def worst(Cp):
            return max((self.rank[(Cp, x)] for x in self.options(C, v, Cp)), default=0)

        return min(self.landings, key=lambda Cp: (worst(Cp), Cp))

    def best_escape(self, C: int, Cp: int, options: list[int]) -> int:
        return max(options, key=lambda x: (self.rank.get((Cp, x), INF), -x))


def robber_survives(g: Graph, r, k: int, cap: int = SOLVER_CAP) -> bool:
    """Whether the robber evades ``k`` cops forever in the visible-agile speed-``r`` game."""
    if g.n == 0:
        return False
    return PursuitSolver(g, finite_radius(r, g.n), k, cap).robber_wins()


def _mask(xs) -> int:
    m = 0
    for x in xs:
        m |= 1 << x
    return m


def _reach_within(g: Graph, v: int, r: int, blocked: set[int]) -> list[int]:
    return sorted(g.bfs(v, r, allowed=set(range(g.n)) - blocked))


def pursuit_game(
    g: Graph,
    r,
    variant: str,
    k: int,
    cop: Strategy,
    robber: Strategy,
    round_cap: int | None = None,
) -> GameTranscript:
    """Play one game; see the module docstring for the rules.

    Order-based cops: in the agile game they land on ``WReach_2r[v]`` for the
    robber's vertex ``v`` (so ``k = wcol_2r(G, pi)`` suffices and every robber
    path bottoms out strictly later in ``pi`` each round); in the inert game they
    sweep ``pi``, landing first on ``SReach_r[v_i] - {v_i}`` and then on
    ``SReach_r[v_i]``, which needs ``k = col_r(G, pi)``.
    """
    if variant not in ("agile", "inert"):
        raise ValidationError(f"unknown variant {variant!r}")
    if k < 1:
        raise ValidationError("at least one cop is required")
    if g.n == 0:
        raise ValidationError("the pursuit game needs a nonempty graph")
    r = finite_radius(r, g.n)
    cap = (2 * g.n + 2) if round_cap is None else round_cap
    cop.reset()
    robber.reset()
    solver = None
    if "minimax" in (cop.rule, robber.rule) and variant == "agile":
        try:
            solver = PursuitSolver(g, r, k, min(cop.node_cap, robber.node_cap))
        except SizeLimitError:
            solver = None
    schedule = None
    if cop.rule == "order" and variant == "inert":
        strong = strong_sets(g, cop.order, r)
        schedule = []
        for v in cop.order:
            schedule.append(sorted(strong[v] - {v}))
            schedule.append(sorted(strong[v]))
    weak2r = weak_sets(g, cop.order, 2 * r) if cop.rule == "order" and variant == "agile" else None

    # starting vertex
    if robber.rule == "random":
        v = robber.rng.randrange(g.n)
    elif robber.rule == "minimax" and solver is not None:
        v = solver.best_start()
    else:
        v = max(range(g.n), key=lambda x: (g.degree(x), -x))
    C: set[int] = set()
    t = GameTranscript(variant, {"r": r, "k": k, "cop": cop.rule, "robber": robber.rule, "start": v})
    while True:
        i = t.length
        if i >= cap:
            t.winner = "unresolved"
            return t
        # cops announce
        if schedule is not None:
            Cp = schedule[min(i, len(schedule) - 1)]
        elif weak2r is not None:
            Cp = cop.order.restricted(weak2r[v])[:k]
        elif cop.rule == "random":
            Cp = sorted(cop.rng.sample(range(g.n), min(k, g.n)))
        elif cop.rule == "minimax" and solver is not None:
            m = solver.best_landing(_mask(C), v)
            Cp = [x for x in range(g.n) if m >> x & 1]
        else:
            # greedy, or minimax without a solver: nearest vertices to the robber
            # (agile) or to the last landing (inert, where the robber is unseen)
            anchor = v if variant == "agile" else (min(C) if C else 0)
            dist = g.bfs(anchor)
            Cp = sorted(sorted(range(g.n), key=lambda x: (dist.get(x, INF), x))[:k])
        Cp_set = set(Cp)
        if len(Cp_set) > k:
            raise ValidationError(f"cop strategy announced {len(Cp_set)} > {k} vertices")
        rec: dict[str, Any] = {"round": i + 1, "cops": sorted(Cp_set), "robber_from": v}
        if variant == "inert" and v not in Cp_set:
            rec["robber_to"] = v
        else:
            opts = [x for x in _reach_within(g, v, r, C & Cp_set) if x not in Cp_set]
            if not opts:
                rec["robber_to"] = None
                rec["captured"] = True
                t.rounds.append(rec)
                t.winner = "cops"
                return t
            if robber.rule == "random":
                v = robber.rng.choice(opts)
            elif robber.rule == "minimax" and solver is not None:
                v = solver.best_escape(_mask(C), _mask(Cp_set), opts)
            else:
                # greedy: the option farthest from the landing cops, then highest degree
                def score(x):
                    d = g.bfs(x, allowed=set(range(g.n)) - Cp_set)
                    return (len(d), g.degree(x), -x)

                v = max(opts, key=score)
            rec["robber_to"] = v
        C = Cp_set
        t.rounds.append(rec)


def replay_pursuit(g: Graph, t: GameTranscript) -> str:
    """Check every move of a pursuit transcript; returns the recomputed winner."""
    r, k = t.params["r"], t.params["k"]
    v = t.params["start"]
    C: set[int] = set()
    for rec in t.rounds:
        Cp = set(rec["cops"])
        if len(Cp) > k or rec["robber_from"] != v:
            raise ValidationError(f"round {rec['round']}: inconsistent record")
        opts = [x for x in _reach_within(g, v, r, C & Cp) if x not in Cp]
        to = rec["robber_to"]
        if to is None:
            if opts or v not in Cp:
                raise ValidationError(f"round {rec['round']}: capture claimed but the robber could escape")
            return "cops"
        if t.variant == "inert" and v not in Cp:
            if to != v:
                raise ValidationError(f"round {rec['round']}: inert robber moved while unthreatened")
        elif to not in opts:
            raise ValidationError(f"round {rec['round']}: robber move {v}->{to} is illegal")
        v = to
        C = Cp
    return "unresolved"
