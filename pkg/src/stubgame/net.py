"""Weighted Petri net games with inhibitor arcs.

A marking is a tuple of token counts aligned with ``net.places`` (sorted
place ids), which doubles as the canonical, hashable state encoding.
"""
from __future__ import annotations

import math
from collections import deque
from functools import cached_property
from typing import Iterable, Mapping

from .glts import ExplicitGLTS
from .kernel import NetKernel

INF = math.inf

Marking = tuple  # tuple[int, ...] aligned with PetriNetGame.places


class NetError(ValueError):
    """Structural error: unknown ids, bad weights, malformed arcs."""


class FiringError(RuntimeError):
    """A disabled transition was fired."""

    def __init__(self, transition, place, reason):
        self.transition = transition
        self.place = place
        self.reason = reason
        super().__init__(f"{transition} is disabled: {reason} on place {place}")


class BoundednessError(RuntimeError):
    """State exploration exceeded its budget."""

    def __init__(self, limit, explored, frontier, edges=0):
        self.limit = limit
        self.explored = explored
        self.frontier = frontier
        self.edges = edges
        super().__init__(f"more than {limit} states (explored {explored}, "
                         f"frontier {frontier})")


class PetriNetGame:
    """Places, player-1/player-2 transitions, arc and inhibitor weights.

    ``arcs`` maps ``(src, dst)`` to a weight; zero weights mean "no arc".
    ``inhibitors`` maps ``(place, transition)`` to a threshold >= 1; missing
    entries (or ``math.inf``) mean "no inhibitor arc".
    """

    def __init__(self, places: Iterable[str], transitions1: Iterable[str],
                 transitions2: Iterable[str],
                 arcs: Mapping[tuple[str, str], int] = (),
                 inhibitors: Mapping[tuple[str, str], float] = ()):
        places = list(places)
        t1, t2 = list(transitions1), list(transitions2)
        for group, name in ((places, "place"), (t1 + t2, "transition")):
            if len(set(group)) != len(group):
                dup = sorted({x for x in group if group.count(x) > 1})
                raise NetError(f"duplicate {name} ids: {dup}")
        if set(t1) & set(t2):
            raise NetError(f"transitions owned by both players: {sorted(set(t1) & set(t2))}")
        if set(places) & (set(t1) | set(t2)):
            raise NetError(f"ids used as place and transition: "
                           f"{sorted(set(places) & (set(t1) | set(t2)))}")
        self.places = tuple(sorted(places))
        self.transitions1 = frozenset(t1)
        self.transitions2 = frozenset(t2)
        self.transitions = tuple(sorted(t1 + t2))
        self.place_index = {p: i for i, p in enumerate(self.places)}
        self.transition_index = {t: i for i, t in enumerate(self.transitions)}

        self._in: dict[tuple[str, str], int] = {}   # W(p, t)
        self._out: dict[tuple[str, str], int] = {}  # W(t, p)
        for (src, dst), w in dict(arcs).items():
            if not isinstance(w, int) or w < 0:
                raise NetError(f"arc {src}->{dst} has invalid weight {w!r}")
            if src in self.place_index and dst in self.transition_index:
                if w:
                    self._in[(src, dst)] = w
            elif src in self.transition_index and dst in self.place_index:
                if w:
                    self._out[(dst, src)] = w
            else:
                raise NetError(f"arc {src}->{dst} must connect a place and a transition")
        self._inhib: dict[tuple[str, str], int] = {}
        for (p, t), w in dict(inhibitors).items():
            if p not in self.place_index or t not in self.transition_index:
                raise NetError(f"inhibitor {p}-o{t} must go from a place to a transition")
            if w == INF:
                continue
            if not isinstance(w, int) or w < 1:
                raise NetError(f"inhibitor {p}-o{t} needs a weight >= 1, got {w!r}")
            self._inhib[(p, t)] = w
        self._build_sets()
        # kept so that other kernel backends can be built for the same net
        self.kernel_args = (
            len(self.places),
            [[(self.place_index[p], w) for p, w in self._pre_w[t]] for t in self.transitions],
            [[(self.place_index[p], w) for p, w in self._inhib_w[t]] for t in self.transitions],
            [[(self.place_index[p], d) for p, d in self._delta[t]] for t in self.transitions],
        )
        self.kernel = NetKernel(*self.kernel_args)

    # -- weights ------------------------------------------------------------

    def W(self, x: str, y: str) -> int:
        """Arc weight from ``x`` to ``y`` (0 when there is no arc)."""
        if x in self.place_index:
            return self._in.get((x, y), 0)
        return self._out.get((y, x), 0)

    def inhib(self, p: str, t: str) -> float:
        return self._inhib.get((p, t), INF)

    def arcs(self) -> dict[tuple[str, str], int]:
        out = {(p, t): w for (p, t), w in self._in.items()}
        out.update({(t, p): w for (p, t), w in self._out.items()})
        return out

    def inhibitors(self) -> dict[tuple[str, str], int]:
        return dict(self._inhib)

    def owner(self, t: str) -> int:
        if t in self.transitions1:
            return 1
        if t in self.transitions2:
            return 2
        raise NetError(f"unknown transition {t!r}")

    def _build_sets(self):
        P, T = self.places, self.transitions
        self._pre_w = {t: [(p, self._in[(p, t)]) for p in P if (p, t) in self._in] for t in T}
        self._inhib_w = {t: [(p, self._inhib[(p, t)]) for p in P if (p, t) in self._inhib]
                         for t in T}
        self._delta = {}
        for t in T:
            d = [(p, self._out.get((p, t), 0) - self._in.get((p, t), 0)) for p in P]
            self._delta[t] = [(p, v) for p, v in d if v]

        def fs(xs):
            return frozenset(xs)

        self.t_preset = {t: fs(p for p, _ in self._pre_w[t]) for t in T}
        self.t_postset = {t: fs(p for p in P if (p, t) in self._out) for t in T}
        self.t_inhib_preset = {t: fs(p for p, _ in self._inhib_w[t]) for t in T}
        self.t_decr_preset = {t: fs(p for p in self.t_preset[t]
                                    if self.W(p, t) > self.W(t, p)) for t in T}
        self.t_incr_postset = {t: fs(p for p in self.t_postset[t]
                                     if self.W(p, t) < self.W(t, p)) for t in T}
        self.p_preset = {p: fs(t for t in T if (p, t) in self._out) for p in P}
        self.p_postset = {p: fs(t for t in T if (p, t) in self._in) for p in P}
        self.p_inhib_postset = {p: fs(t for t in T if (p, t) in self._inhib) for p in P}
        self.p_incr_preset = {p: fs(t for t in self.p_preset[p]
                                    if self.W(t, p) > self.W(p, t)) for p in P}
        self.p_decr_postset = {p: fs(t for t in self.p_postset[p]
                                     if self.W(t, p) < self.W(p, t)) for p in P}

    @cached_property
    def preset_T2(self) -> frozenset:
        return frozenset().union(*(self.t_preset[t] for t in self.transitions2))

    @cached_property
    def inhib_preset_T2(self) -> frozenset:
        return frozenset().union(*(self.t_inhib_preset[t] for t in self.transitions2))

    # -- markings -----------------------------------------------------------

    def marking(self, tokens: Mapping[str, int] | None = None, **kw) -> Marking:
        """Build a canonical marking; unspecified places hold 0 tokens."""
        tokens = dict(tokens or {}, **kw)
        unknown = set(tokens) - set(self.place_index)
        if unknown:
            raise NetError(f"unknown places in marking: {sorted(unknown)}")
        m = tuple(int(tokens.get(p, 0)) for p in self.places)
        if any(v < 0 for v in m):
            raise NetError("token counts must be non-negative")
        return m

    def tokens(self, m: Marking) -> dict[str, int]:
        return dict(zip(self.places, m))

    def check_marking(self, m: Marking) -> Marking:
        if len(m) != len(self.places) or any(v < 0 for v in m):
            raise NetError(f"marking {m!r} does not fit places {self.places}")
        return tuple(m)

    def format_marking(self, m: Marking) -> str:
        parts = [f"{p}={v}" for p, v in zip(self.places, m) if v]
        return "{" + ",".join(parts) + "}"

    def __repr__(self) -> str:
        return (f"PetriNetGame({len(self.places)} places, {len(self.transitions1)}+"
                f"{len(self.transitions2)} transitions)")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PetriNetGame):
            return NotImplemented
        return (self.places == other.places and self.transitions1 == other.transitions1
                and self.transitions2 == other.transitions2
                and self.arcs() == other.arcs() and self.inhibitors() == other.inhibitors())

    __hash__ = None

    # -- semantics ----------------------------------------------------------

    def is_enabled(self, m: Marking, t: str) -> bool:
        return self.kernel.is_enabled(m, self.transition_index[t])

    def enabled(self, m: Marking) -> frozenset:
        T = self.transitions
        return frozenset(T[i] for i in self.kernel.enabled(m))

    def fire(self, m: Marking, t: str) -> Marking:
        if t not in self.transition_index:
            raise NetError(f"unknown transition {t!r}")
        for p, w in self._pre_w[t]:
            if m[self.place_index[p]] < w:
                raise FiringError(t, p, f"needs {w} tokens, has {m[self.place_index[p]]}")
        for p, w in self._inhib_w[t]:
            if m[self.place_index[p]] >= w:
                raise FiringError(t, p, f"inhibitor threshold {w} reached "
                                        f"({m[self.place_index[p]]} tokens)")
        return self.kernel.fire(m, self.transition_index[t])

    def successors(self, m: Marking) -> list[tuple[str, Marking]]:
        T = self.transitions
        return [(T[i], m2) for i, m2 in self.kernel.successors(m)]


# -- module-level operations --------------------------------------------------

_SET_NAMES = {
    "place": ("preset", "postset", "inhib_postset", "incr_preset", "decr_postset"),
    "transition": ("preset", "postset", "inhib_preset", "decr_preset", "incr_postset"),
}


def structural_sets(net: PetriNetGame, x: str) -> dict[str, frozenset]:
    """All pre/post sets of a place or transition, keyed by name."""
    if x in net.place_index:
        return {
            "preset": net.p_preset[x],
            "postset": net.p_postset[x],
            "inhib_postset": net.p_inhib_postset[x],
            "incr_preset": net.p_incr_preset[x],
            "decr_postset": net.p_decr_postset[x],
        }
    if x in net.transition_index:
        return {
            "preset": net.t_preset[x],
            "postset": net.t_postset[x],
            "inhib_preset": net.t_inhib_preset[x],
            "decr_preset": net.t_decr_preset[x],
            "incr_postset": net.t_incr_postset[x],
        }
    raise NetError(f"unknown place or transition {x!r}")


def enabled_t(net: PetriNetGame, m: Marking) -> tuple[frozenset, frozenset]:
    en = net.enabled(m)
    return en & net.transitions1, en & net.transitions2


def fire(net: PetriNetGame, m: Marking, t: str) -> Marking:
    return net.fire(m, t)


def unfold(net: PetriNetGame, m0: Marking, goal, max_states: int = 100_000) -> ExplicitGLTS:
    """Breadth-first unfolding of every reachable marking into a GLTS.

    ``goal`` is a formula; goal states are the markings satisfying it.
    """
    from .query import sat

    if max_states < 1:
        raise ValueError("max_states must be >= 1")
    m0 = net.check_marking(m0)
    seen = {m0: None}
    queue = deque([m0])
    edges = {}
    while queue:
        m = queue.popleft()
        for t, m2 in net.successors(m):
            edges[(m, t)] = m2
            if m2 not in seen:
                if len(seen) >= max_states:
                    raise BoundednessError(max_states, len(seen), len(queue) + 1, len(edges))
                seen[m2] = None
                queue.append(m2)
    states = list(seen)
    goals = [m for m in states if sat(net, m, goal)]
    return ExplicitGLTS(states, net.transitions1, net.transitions2, edges, goals)
