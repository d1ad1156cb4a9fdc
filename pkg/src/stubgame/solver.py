"""Strategy synthesis for reachability games on Petri net games.

``solve`` explores the reachable game graph from the initial marking (all
enabled transitions, or only stubborn ones with partial order reduction),
then labels winning markings with a backward least fixed point.  Goal
markings are never expanded, and with early termination neither are
markings from which the goal is provably unreachable.
"""
from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field

from .net import BoundednessError, Marking, PetriNetGame
from .query import Formula, nnf, sat
from .reduction import stubborn_set


class StrategyError(RuntimeError):
    """A strategy is undefined or illegal at a reached marking."""


class InvariantViolation(RuntimeError):
    """NORMAL and POR disagree on the winner."""


@dataclass(frozen=True)
class SolveConfig:
    use_por: bool = True
    max_states: int = 1_000_000
    search_order: str = "dfs"
    early_termination: bool = True
    # reproduces the unsound reduction without the visibility condition
    ablate_condition_v: bool = False

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be >= 1")
        if self.search_order not in ("dfs", "bfs"):
            raise ValueError(f"search_order must be 'dfs' or 'bfs', not {self.search_order!r}")


@dataclass
class SolveReport:
    winning: bool
    strategy: dict = field(repr=False)
    unique_markings: int
    edges_explored: int
    wall_time: float
    early_terminated: int = 0
    use_por: bool = False

    def to_text(self, include_time: bool = False) -> str:
        lines = [
            f"winning={'true' if self.winning else 'false'}",
            f"por={'true' if self.use_por else 'false'}",
            f"unique_markings={self.unique_markings}",
            f"edges_explored={self.edges_explored}",
            f"early_terminated={self.early_terminated}",
            f"strategy_size={len(self.strategy)}",
        ]
        if include_time:
            lines.append(f"wall_time={self.wall_time:.6f}")
        return "\n".join(lines)

    def csv_row(self) -> list[str]:
        return [str(int(self.winning)), str(self.unique_markings), str(self.edges_explored),
                f"{self.wall_time:.3f}"]


class GameGraph:
    """Explored (possibly reduced) game graph with its winning labels."""

    def __init__(self, net: PetriNetGame, goal: Formula, cfg: SolveConfig):
        self.net = net
        self.goal_formula = nnf(goal)
        self.cfg = cfg
        self.succ: dict[Marking, list[tuple[str, Marking]]] = {}
        self.goal: set[Marking] = set()
        self.terminated: set[Marking] = set()
        self.edges = 0
        self.rank: dict[Marking, int] = {}
        self._pending: set[Marking] = set()

    def _expand(self, m: Marking) -> list[tuple[str, Marking]]:
        net = self.net
        if sat(net, m, self.goal_formula):
            self.goal.add(m)
            return []
        succ = net.successors(m)
        if self.cfg.use_por and succ:
            res = stubborn_set(net, m, self.goal_formula,
                               ablate_condition_v=self.cfg.ablate_condition_v)
            if self.cfg.early_termination and res.early_terminate:
                self.terminated.add(m)
                return []
            succ = [(t, m2) for t, m2 in succ if t in res.stub]
        return succ

    def explore(self, roots) -> None:
        bfs = self.cfg.search_order == "bfs"
        todo = deque()
        for r in roots:
            if r not in self.succ:
                self._admit(r, len(todo))
                todo.append(r)
        while todo:
            m = todo.popleft() if bfs else todo.pop()
            self._pending.discard(m)
            out = self._expand(m)
            self.succ[m] = out
            self.edges += len(out)
            # reversed so that DFS pops the lowest transition first
            for t, m2 in (out if bfs else reversed(out)):
                if m2 not in self.succ and m2 not in self._pending:
                    self._admit(m2, len(todo))
                    todo.append(m2)
        self._pending.clear()

    def _admit(self, m: Marking, frontier: int) -> None:
        if len(self.succ) + len(self._pending) >= self.cfg.max_states:
            raise BoundednessError(self.cfg.max_states, len(self.succ), frontier + 1, self.edges)
        self._pending.add(m)

    def __len__(self) -> int:
        return len(self.succ)

    def solve(self) -> None:
        """Attractor-style least fixed point; ``rank`` is the round a marking
        became winning (goal markings: 0)."""
        net = self.net
        preds: dict[Marking, list[tuple[Marking, str]]] = {m: [] for m in self.succ}
        need2: dict[Marking, int] = {}
        has1: dict[Marking, bool] = {}
        for m, out in self.succ.items():
            n2 = 0
            h1 = False
            for t, m2 in out:
                preds[m2].append((m, t))
                if t in net.transitions1:
                    h1 = True
                else:
                    n2 += 1
            need2[m] = n2
            has1[m] = h1
        rank: dict[Marking, int] = {m: 0 for m in self.goal}
        ok1: set[Marking] = set()
        layer = list(self.goal)
        r = 0
        while layer:
            r += 1
            nxt = []
            for w in layer:
                for m, t in preds[w]:
                    if m in rank:
                        continue
                    if t in net.transitions1:
                        ok1.add(m)
                    else:
                        need2[m] -= 1
            for w in layer:
                for m, _ in preds[w]:
                    if m in rank or not self.succ[m]:
                        continue
                    if need2[m] == 0 and (m in ok1 or not has1[m]):
                        rank[m] = r
                        nxt.append(m)
            layer = nxt
        self.rank = rank

    def strategy(self) -> dict[Marking, str | None]:
        """Rank-decreasing choice at explored markings with player-1 moves."""
        net = self.net
        sigma = {}
        for m, out in self.succ.items():
            choices = [(t, m2) for t, m2 in out if t in net.transitions1]
            if not choices:
                continue
            best = None
            if m in self.rank:
                ranked = [(self.rank[m2], t) for t, m2 in choices if m2 in self.rank]
                if ranked:
                    best = min(ranked)[1]
            sigma[m] = best if best is not None else min(t for t, _ in choices)
        return sigma


def solve(net: PetriNetGame, m0: Marking, goal: Formula,
          cfg: SolveConfig | None = None) -> SolveReport:
    """Decide whether player 1 can force ``goal`` from ``m0``."""
    cfg = cfg or SolveConfig()
    m0 = net.check_marking(m0)
    start = time.perf_counter()
    graph = GameGraph(net, goal, cfg)
    graph.explore([m0])
    graph.solve()
    sigma = graph.strategy()
    elapsed = time.perf_counter() - start
    return SolveReport(
        winning=m0 in graph.rank,
        strategy=sigma,
        unique_markings=len(graph),
        edges_explored=graph.edges,
        wall_time=elapsed,
        early_terminated=len(graph.terminated),
        use_por=cfg.use_por,
    )


def complete_strategy(net: PetriNetGame, m0: Marking, goal: Formula,
                      cfg: SolveConfig | None = None) -> dict[Marking, str | None]:
    """Strategy covering every marking reachable under it in the full game.

    With partial order reduction the explored graph omits markings that
    player 2 can still reach in the unreduced game.  Whenever the strategy
    walk meets one, the reduced exploration is resumed from it, so the
    choice at every marking comes from one and the same reduced game.
    """
    cfg = cfg or SolveConfig()
    m0 = net.check_marking(m0)
    graph = GameGraph(net, goal, cfg)
    graph.explore([m0])
    graph.solve()
    sigma = graph.strategy()
    seen = {m0}
    queue = deque([m0])
    while queue:
        missing = []
        batch = list(queue)
        queue.clear()
        for m in batch:
            if m in graph.goal:
                continue
            if m not in graph.succ:
                missing.append(m)
        if missing:
            graph.explore(missing)
            graph.solve()
            sigma = graph.strategy()
        for m in batch:
            if m in graph.goal:
                continue
            choice = sigma.get(m)
            for t, m2 in net.successors(m):
                if t in net.transitions2 or t == choice:
                    if m2 not in seen:
                        if len(seen) >= cfg.max_states:
                            raise BoundednessError(cfg.max_states, len(seen), len(queue))
                        seen.add(m2)
                        queue.append(m2)
    return sigma


def verify_strategy(net: PetriNetGame, m0: Marking, goal: Formula,
                    strategy: dict, max_states: int = 1_000_000) -> bool:
    """True iff every maximal run from ``m0`` that follows ``strategy`` (and
    any player-2 behaviour) in the full game visits a goal marking."""
    goal = nnf(goal)
    m0 = net.check_marking(m0)
    succ: dict[Marking, list[Marking]] = {}
    order = [m0]
    queue = deque([m0])
    seen = {m0}
    while queue:
        m = queue.popleft()
        if sat(net, m, goal):
            succ[m] = None
            continue
        out = net.successors(m)
        en1 = [t for t, _ in out if t in net.transitions1]
        choice = strategy.get(m)
        if en1:
            if choice is None:
                raise StrategyError(f"strategy undefined at {net.format_marking(m)}")
            if choice not in en1:
                raise StrategyError(f"strategy plays disabled or foreign {choice!r} at "
                                    f"{net.format_marking(m)}")
        nxt = [m2 for t, m2 in out if t in net.transitions2 or t == choice]
        succ[m] = nxt
        for m2 in nxt:
            if m2 not in seen:
                if len(seen) >= max_states:
                    raise BoundednessError(max_states, len(seen), len(queue))
                seen.add(m2)
                order.append(m2)
                queue.append(m2)
    # winning iff no goal-free deadlock or cycle is reachable: peel states
    # whose successors are all settled, starting from goals
    pending = {}
    preds: dict[Marking, list[Marking]] = {m: [] for m in succ}
    settled = deque()
    for m, nxt in succ.items():
        if nxt is None:
            settled.append(m)
            continue
        uniq = set(nxt)
        pending[m] = len(uniq)
        for m2 in uniq:
            preds[m2].append(m)
    won = set(settled)
    while settled:
        m2 = settled.popleft()
        for m in preds[m2]:
            pending[m] -= 1
            if pending[m] == 0:
                won.add(m)
                settled.append(m)
    # non-goal deadlocks have pending 0 from the start but were never settled
    return m0 in won


@dataclass
class Comparison:
    normal: SolveReport
    por: SolveReport

    @property
    def pct_markings(self) -> int:
        return reduction_pct(self.normal.unique_markings, self.por.unique_markings)

    @property
    def pct_time(self) -> int:
        return reduction_pct(self.normal.wall_time, self.por.wall_time)


def reduction_pct(normal: float, por: float) -> int:
    """Relative saving of POR over NORMAL in whole percent, halves rounded up."""
    if normal <= 0:
        return 0
    return math.floor(100 * (1 - por / normal) + 0.5)


def compare_runs(net: PetriNetGame, m0: Marking, goal: Formula,
                 max_states: int = 1_000_000, search_order: str = "dfs",
                 early_termination: bool = True) -> Comparison:
    """Solve without and with partial order reduction; winners must agree."""
    base = dict(max_states=max_states, search_order=search_order,
                early_termination=early_termination)
    normal = solve(net, m0, goal, SolveConfig(use_por=False, **base))
    por = solve(net, m0, goal, SolveConfig(use_por=True, **base))
    if normal.winning != por.winning:
        raise InvariantViolation(
            f"winner mismatch: NORMAL says {normal.winning}, POR says {por.winning}")
    return Comparison(normal, por)


def lifted_reduction(net: PetriNetGame, m0: Marking, goal: Formula,
                     max_states: int = 100_000, *, ablate_condition_v: bool = False):
    """Unfold the full game and attach the computed stubborn set to every
    reachable marking, ready for ``glts.check_stable``."""
    from .net import unfold

    goal = nnf(goal)
    glts = unfold(net, m0, goal, max_states)
    stub = {m: stubborn_set(net, m, goal, ablate_condition_v=ablate_condition_v).stub
            for m in glts.states}
    return glts, stub
