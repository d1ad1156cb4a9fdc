"""Explicit game labelled transition systems.

This module is the ground truth for everything the Petri net engine computes
approximately: an exact solver for two-player reachability games on finite
deterministic GLTSs, strategy extraction and depth, exact safe actions, and
exhaustive checkers for every stable-reduction condition (I, W, R, G1, G2,
S, V, D).

Player 1 is the controller and wants to reach ``goal``; player 2 is the
environment.  A maximal run either is infinite or ends in a deadlock.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable, Mapping

State = Hashable
Action = Hashable

CONDITIONS = ("I", "W", "R", "G1", "G2", "S", "V", "D")


class GLTSError(ValueError):
    """Malformed GLTS or an operation called outside its precondition."""


class StateKind(str, Enum):
    PLAYER1 = "player1"
    PLAYER2 = "player2"
    MIXED = "mixed"
    DEADLOCK = "deadlock"


def _ordered(items: Iterable) -> list:
    items = list(items)
    try:
        return sorted(items)
    except TypeError:
        return sorted(items, key=repr)


class ExplicitGLTS:
    """A finite deterministic GLTS ``(states, actions1, actions2, edges, goal)``.

    ``edges`` maps ``(state, action)`` to the unique successor.  States keep
    the order in which they were given; that order drives every traversal, so
    results (including witnesses) are deterministic.
    """

    __slots__ = ("states", "actions1", "actions2", "goal", "_succ", "_index")

    def __init__(self, states: Iterable[State], actions1: Iterable[Action],
                 actions2: Iterable[Action],
                 edges: Mapping[tuple[State, Action], State],
                 goal: Iterable[State] = ()):
        self.states = tuple(dict.fromkeys(states))
        self.actions1 = frozenset(actions1)
        self.actions2 = frozenset(actions2)
        if self.actions1 & self.actions2:
            raise GLTSError("player action sets overlap: "
                            f"{_ordered(self.actions1 & self.actions2)}")
        self._index = {s: i for i, s in enumerate(self.states)}
        succ: dict[State, dict[Action, State]] = {s: {} for s in self.states}
        for (src, a), dst in edges.items():
            if src not in self._index or dst not in self._index:
                raise GLTSError(f"edge {src!r} -{a!r}-> {dst!r} leaves the state set")
            if a not in self.actions1 and a not in self.actions2:
                raise GLTSError(f"edge label {a!r} is not a declared action")
            succ[src][a] = dst
        # per-state action order is fixed once so traversals are reproducible
        self._succ = {s: {a: out[a] for a in _ordered(out)} for s, out in succ.items()}
        self.goal = frozenset(goal)
        unknown = self.goal - self._index.keys()
        if unknown:
            raise GLTSError(f"goal states not in the state set: {_ordered(unknown)}")

    @property
    def actions(self) -> frozenset:
        return self.actions1 | self.actions2

    def edges(self) -> dict[tuple[State, Action], State]:
        return {(s, a): d for s, out in self._succ.items() for a, d in out.items()}

    def out(self, s: State) -> Mapping[Action, State]:
        try:
            return self._succ[s]
        except KeyError:
            raise GLTSError(f"unknown state {s!r}") from None

    def succ(self, s: State, a: Action) -> State | None:
        return self.out(s).get(a)

    def owner(self, a: Action) -> int:
        return 1 if a in self.actions1 else 2

    def __contains__(self, s: State) -> bool:
        return s in self._index

    def __len__(self) -> int:
        return len(self.states)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExplicitGLTS):
            return NotImplemented
        return (set(self.states) == set(other.states)
                and self.actions1 == other.actions1
                and self.actions2 == other.actions2
                and self.goal == other.goal
                and self.edges() == other.edges())

    def __repr__(self) -> str:
        n_edges = sum(len(o) for o in self._succ.values())
        return (f"ExplicitGLTS({len(self.states)} states, {n_edges} edges, "
                f"{len(self.goal)} goal)")


# -- basic queries ----------------------------------------------------------

def enabled(glts: ExplicitGLTS, s: State, player: int | None = None) -> frozenset:
    """Enabled actions at ``s`` for player 1, player 2, or both (``None``)."""
    out = glts.out(s)
    if player is None:
        return frozenset(out)
    if player == 1:
        return frozenset(a for a in out if a in glts.actions1)
    if player == 2:
        return frozenset(a for a in out if a in glts.actions2)
    raise GLTSError(f"player must be 1, 2 or None, got {player!r}")


def classify(glts: ExplicitGLTS, s: State) -> StateKind:
    out = glts.out(s)
    if not out:
        return StateKind.DEADLOCK
    has1 = any(a in glts.actions1 for a in out)
    has2 = any(a in glts.actions2 for a in out)
    if has1 and has2:
        return StateKind.MIXED
    return StateKind.PLAYER1 if has1 else StateKind.PLAYER2


def is_non_mixed(glts: ExplicitGLTS) -> bool:
    return all(classify(glts, s) is not StateKind.MIXED for s in glts.states)


def reduce(glts: ExplicitGLTS, stub: Mapping[State, Iterable[Action]]) -> ExplicitGLTS:
    """The reduced game: keep ``s -a-> s'`` iff ``a`` is stubborn at ``s``."""
    kept = {}
    for s in glts.states:
        if s not in stub:
            raise GLTSError(f"reduction undefined at state {s!r}")
        st = stub[s]
        for a, d in glts.out(s).items():
            if a in st:
                kept[(s, a)] = d
    return ExplicitGLTS(glts.states, glts.actions1, glts.actions2, kept, glts.goal)


# -- game solving -----------------------------------------------------------

def winning_ranks(glts: ExplicitGLTS) -> dict[State, int]:
    """Round index at which each player-1 winning state enters the least
    fixed point.  Goal states have rank 0; losing states are absent.

    Round ``r`` adds every state whose player-2 successors all won in an
    earlier round and that either has no player-1 action or has one leading
    to an earlier winner.  Deadlocks outside the goal never win.
    """
    rank = {s: 0 for s in glts.states if s in glts.goal}
    r = 0
    while True:
        r += 1
        new = []
        for s in glts.states:
            if s in rank:
                continue
            out = glts.out(s)
            if not out:
                continue
            ok2 = True
            has1 = ok1 = False
            for a, d in out.items():
                if a in glts.actions1:
                    has1 = True
                    if d in rank:
                        ok1 = True
                elif d not in rank:
                    ok2 = False
                    break
            if ok2 and (ok1 or not has1):
                new.append(s)
        if not new:
            return rank
        for s in new:
            rank[s] = r


def solve_glts(glts: ExplicitGLTS) -> dict[State, bool]:
    rank = winning_ranks(glts)
    return {s: s in rank for s in glts.states}


def extract_strategy(glts: ExplicitGLTS, win: Mapping[State, bool] | None = None
                     ) -> dict[State, Action | None]:
    """Memoryless strategy that strictly decreases the fixed-point rank.

    At a winning non-goal state the chosen action leads to the winning
    successor of least rank (lowest action on ties); elsewhere the lowest
    enabled player-1 action is chosen, and ``None`` stands for bottom.
    """
    rank = winning_ranks(glts)
    if win is not None:
        for s in glts.states:
            if bool(win.get(s)) != (s in rank):
                raise GLTSError(f"win map disagrees with the fixed point at {s!r}")
    sigma: dict[State, Action | None] = {}
    for s in glts.states:
        choices = [(a, d) for a, d in glts.out(s).items() if a in glts.actions1]
        if not choices:
            sigma[s] = None
            continue
        best = None
        if s in rank and s not in glts.goal:
            ranked = [(rank[d], i) for i, (a, d) in enumerate(choices) if d in rank]
            if ranked:
                best = choices[min(ranked)[1]][0]
        sigma[s] = best if best is not None else choices[0][0]
    return sigma


def check_strategy(glts: ExplicitGLTS, sigma: Mapping[State, Action | None]) -> None:
    """Raise unless ``sigma`` satisfies the strategy definition."""
    for s in glts.states:
        en1 = enabled(glts, s, 1)
        choice = sigma.get(s)
        if en1 and choice not in en1:
            raise GLTSError(f"strategy picks {choice!r} at {s!r}, enabled: {_ordered(en1)}")
        if not en1 and choice is not None:
            raise GLTSError(f"strategy picks {choice!r} at {s!r} with no player-1 action")


def strategy_next(glts: ExplicitGLTS, sigma: Mapping[State, Action | None], s: State
                  ) -> list[tuple[Action, State]]:
    out = glts.out(s)
    choice = sigma.get(s)
    return [(a, d) for a, d in out.items() if a in glts.actions2 or a == choice]


def strategy_depths(glts: ExplicitGLTS, sigma: Mapping[State, Action | None]
                    ) -> dict[State, int]:
    """Depth of ``sigma`` at every state where it is winning.

    Goal states have depth 0; a non-goal state gets ``1 + max`` over its
    sigma-successors once all of them have a depth.  States on goal-free
    cycles or leading to goal-free deadlocks never get one.
    """
    preds: dict[State, list[State]] = {s: [] for s in glts.states}
    pending: dict[State, int] = {}
    for s in glts.states:
        if s in glts.goal:
            continue
        nxt = {d for _, d in strategy_next(glts, sigma, s)}
        pending[s] = len(nxt)
        for d in nxt:
            preds[d].append(s)
    depth: dict[State, int] = {}
    queue = deque(s for s in glts.states if s in glts.goal)
    for s in queue:
        depth[s] = 0
    while queue:
        d = queue.popleft()
        for s in preds[d]:
            pending[s] -= 1
            if pending[s] == 0:
                depth[s] = 1 + max(depth[x] for _, x in strategy_next(glts, sigma, s))
                queue.append(s)
    # a non-goal deadlock has no successors, so pending was 0 but it never wins
    return depth


def strategy_depth(glts: ExplicitGLTS, sigma: Mapping[State, Action | None], s: State
                   ) -> int | None:
    glts.out(s)
    return strategy_depths(glts, sigma).get(s)


# -- safe actions -----------------------------------------------------------

def _unsafe_witness(glts: ExplicitGLTS, s: State, a: Action) -> tuple | None:
    """Shortest ``w`` over player-1 actions other than ``a`` showing that
    ``a`` is unsafe at ``s``, or ``None`` if ``a`` is safe."""
    start = (s, glts.succ(s, a))
    parent: dict[tuple, tuple | None] = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        x, y = pair
        if not enabled(glts, x, 2) and enabled(glts, y, 2):
            path = []
            while parent[pair] is not None:
                pair, b = parent[pair]
                path.append(b)
            return tuple(reversed(path))
        for b, x2 in glts.out(x).items():
            if b == a or b not in glts.actions1:
                continue
            y2 = glts.succ(y, b)
            if y2 is None:
                continue
            nxt = (x2, y2)
            if nxt not in parent:
                parent[nxt] = (pair, b)
                queue.append(nxt)
    return None


def safe_actions_glts(glts: ExplicitGLTS, s: State) -> frozenset:
    """Exact set of safe player-1 actions at a state without player-2 moves."""
    if enabled(glts, s, 2):
        raise GLTSError(f"safe actions are only defined where en2 is empty; {s!r} has "
                        f"{_ordered(enabled(glts, s, 2))}")
    return frozenset(a for a in enabled(glts, s, 1) if _unsafe_witness(glts, s, a) is None)


# -- stable reduction conditions -------------------------------------------

@dataclass(frozen=True)
class Violation:
    condition: str
    state: State
    path: tuple
    detail: str = ""

    def __str__(self) -> str:
        w = " ".join(map(str, self.path)) or "<empty>"
        msg = f"{self.condition} fails at {self.state!r} via {w}"
        return f"{msg}: {self.detail}" if self.detail else msg


@dataclass
class ConditionReport:
    """First violation (BFS-minimal witness) per condition; ``None`` = pass."""

    violations: dict[str, Violation | None] = field(
        default_factory=lambda: {c: None for c in CONDITIONS})

    @property
    def ok(self) -> bool:
        return all(v is None for v in self.violations.values())

    def passed(self, condition: str) -> bool:
        return self.violations[condition] is None

    def failed(self) -> list[str]:
        return [c for c in CONDITIONS if self.violations[c] is not None]

    def holds_except(self, *skipped: str) -> bool:
        return all(self.violations[c] is None for c in CONDITIONS if c not in skipped)

    def record(self, v: Violation) -> None:
        if self.violations[v.condition] is None:
            self.violations[v.condition] = v

    def __str__(self) -> str:
        lines = []
        for c in CONDITIONS:
            v = self.violations[c]
            lines.append(f"{c:<2} {'pass' if v is None else 'FAIL  ' + str(v)}")
        return "\n".join(lines)


def _nonstub_region(glts: ExplicitGLTS, s: State, stub) -> dict[State, tuple]:
    """States reachable from ``s`` by non-stubborn actions, with the BFS path."""
    paths = {s: ()}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for b, d in glts.out(x).items():
            if b in stub or d in paths:
                continue
            paths[d] = paths[x] + (b,)
            queue.append(d)
    return paths


def _commutation_witness(glts: ExplicitGLTS, s: State, a: Action, stub) -> tuple | None:
    """Shortest non-stubborn ``w`` with ``s -wa-> s'`` but not ``s -aw-> s'``."""
    start = (s, glts.succ(s, a))
    parent: dict[tuple, tuple | None] = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        x, y = pair
        xa = glts.succ(x, a)
        if xa is not None and (y is None or xa != y):
            path = []
            while parent[pair] is not None:
                pair, b = parent[pair]
                path.append(b)
            return tuple(reversed(path))
        for b, x2 in glts.out(x).items():
            if b in stub:
                continue
            y2 = None if y is None else glts.succ(y, b)
            nxt = (x2, y2)
            if nxt not in parent:
                parent[nxt] = (pair, b)
                queue.append(nxt)
    return None


def _player2_goal_path(glts: ExplicitGLTS, s: State) -> tuple | None:
    paths = {s: ()}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        if x in glts.goal:
            return paths[x]
        for b, d in glts.out(x).items():
            if b in glts.actions2 and d not in paths:
                paths[d] = paths[x] + (b,)
                queue.append(d)
    return None


def check_state(glts: ExplicitGLTS, s: State, stub, report: ConditionReport) -> None:
    """Check all eight conditions at one state, recording violations."""
    stub = frozenset(stub)
    en1 = enabled(glts, s, 1)
    en2 = enabled(glts, s, 2)
    en = en1 | en2

    if en1 and en2 and not en <= stub:
        report.record(Violation("I", s, (), f"mixed state misses {_ordered(en - stub)}"))

    region = _nonstub_region(glts, s, stub)

    for a in _ordered(stub):
        w = _commutation_witness(glts, s, a, stub)
        if w is not None:
            report.record(Violation("W", s, w + (a,), f"{a!r} does not commute"))
            break

    if s not in glts.goal:
        for x, w in region.items():
            if x in glts.goal:
                report.record(Violation("R", s, w, "goal reached by non-stubborn actions"))
                break

    if not en2:
        for x, w in region.items():
            if enabled(glts, x, 2):
                report.record(Violation("G1", s, w, "player 2 becomes enabled"))
                break
    if not en1:
        for x, w in region.items():
            if enabled(glts, x, 1):
                report.record(Violation("G2", s, w, "player 1 becomes enabled"))
                break

    if not en2 and not en1 <= stub:
        unsafe = [a for a in _ordered(en1 & stub) if _unsafe_witness(glts, s, a) is not None]
        if unsafe:
            a = unsafe[0]
            report.record(Violation("S", s, (a,) + _unsafe_witness(glts, s, a),
                                    f"stubborn {a!r} is unsafe"))

    if not en2 <= stub:
        w = _player2_goal_path(glts, s)
        if w is not None:
            report.record(Violation("V", s, w, f"goal reachable by player 2 but "
                                    f"{_ordered(en2 - stub)} not stubborn"))

    if en2:
        keepers = [a for a in _ordered(en2 & stub)
                   if all(glts.succ(x, a) is not None for x in region)]
        if not keepers:
            worst = ()
            for a in _ordered(en2 & stub):
                for x, w in region.items():
                    if glts.succ(x, a) is None:
                        worst = w
                        break
            report.record(Violation("D", s, worst, "no stubborn player-2 action stays enabled"))


def check_stable(glts: ExplicitGLTS, stub: Mapping[State, Iterable[Action]]
                 ) -> ConditionReport:
    """Exhaustively check the stable-reduction conditions at every state.

    Condition R is checked semantically (no goal reachable by non-stubborn
    actions), which holds iff some interesting set lies inside the stubborn
    set.  Condition S is only checked where no player-2 action is enabled.
    """
    report = ConditionReport()
    for s in glts.states:
        if s not in stub:
            raise GLTSError(f"reduction undefined at state {s!r}")
        check_state(glts, s, stub[s], report)
    return report


def identity_reduction(glts: ExplicitGLTS) -> dict[State, frozenset]:
    return {s: glts.actions for s in glts.states}
