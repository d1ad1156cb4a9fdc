"""Stable stubborn sets for Petri net games.

``stubborn_set`` computes, for one marking, a set of transitions such that
the induced reduction is stable and therefore preserves the winner of the
reachability game.  Its ingredients are the syntactic safe-transition test,
the player-2 reachability over-approximation ``reach_overapprox`` (interval
bounds on places and firing counts), and the closure ``saturate``.

All selection points ("pick any") take the lowest id.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .net import Marking, PetriNetGame
from .query import (And, BinOp, Compare, Const, Deadlock, FalseF, Fireable, Formula,
                    Not, Or, PlaceRef, QueryError, TrueF, interesting, sat)

INF = math.inf

MIXED_FULL = "mixed_full"
DEADLOCKED_FULL = "deadlocked_full"
VISIBILITY_FULL = "visibility_full"
UNSAFE_FULL = "unsafe_full"
SATURATED = "saturated"
FULL_REASONS = frozenset({MIXED_FULL, DEADLOCKED_FULL, VISIBILITY_FULL, UNSAFE_FULL})


def syntactic_safe(net: PetriNetGame, t: str) -> bool:
    """``t`` is safe in every marking if it never adds tokens to a pre-place
    of a player-2 transition nor removes tokens from a player-2 inhibitor
    place."""
    return (not (net.t_incr_postset[t] & net.preset_T2)
            and not (net.t_decr_preset[t] & net.inhib_preset_T2))


# -- extended arithmetic ------------------------------------------------------
# Values are ints or +-inf.  Products with a zero factor are 0 (inf * 0 would
# be nan); sums mixing +inf and -inf cannot arise from the bounds computed
# here, but resolve towards the conservative side if they ever do.

def _mul(a, b):
    if a == 0 or b == 0:
        return 0
    return a * b


def _add(a, b, upper: bool):
    if math.isinf(a) and math.isinf(b) and a != b:
        return INF if upper else -INF
    return a + b


def _floordiv(n, k):
    return INF if n == INF else n // k


@dataclass
class IntervalEnv:
    """Bounds on markings reachable by player-2 transitions alone.

    ``lb``/``ub`` bound the tokens per place; ``ub_t`` bounds how often each
    player-2 transition can fire.
    """

    lb: dict[str, int] = field(default_factory=dict)
    ub: dict[str, float] = field(default_factory=dict)
    ub_t: dict[str, float] = field(default_factory=dict)

    def expr_bounds(self, e) -> tuple[float, float]:
        if isinstance(e, Const):
            return e.value, e.value
        if isinstance(e, PlaceRef):
            return self.lb[e.place], self.ub[e.place]
        l1, u1 = self.expr_bounds(e.left)
        l2, u2 = self.expr_bounds(e.right)
        if e.op == "+":
            return _add(l1, l2, False), _add(u1, u2, True)
        if e.op == "-":
            return _add(l1, -u2, False), _add(u1, -l2, True)
        prods = [_mul(l1, l2), _mul(l1, u2), _mul(u1, l2), _mul(u1, u2)]
        return min(prods), max(prods)

    def describe(self, net: PetriNetGame) -> str:
        def fmt(v):
            return "inf" if v == INF else str(v)
        lines = [f"place {p}: lb={self.lb[p]} ub={fmt(self.ub[p])}" for p in net.places]
        lines += [f"trans {t}: ub={fmt(self.ub_t[t])}" for t in sorted(self.ub_t)]
        return "\n".join(lines)


def player2_bounds(net: PetriNetGame, m: Marking) -> IntervalEnv:
    """Upper/lower token bounds under player-2 firing sequences from ``m``."""
    T2 = sorted(net.transitions2)
    idx = net.place_index
    ub: dict[str, float] = {p: INF for p in net.places}
    ub_t: dict[str, float] = {t: INF for t in T2}
    producers = {}
    for p in net.places:
        pre2 = [t for t in sorted(net.p_preset[p]) if t in net.transitions2]
        if all(net.W(p, t) >= net.W(t, p) for t in pre2):
            ub[p] = m[idx[p]]
        producers[p] = [(t, net.W(t, p) - net.W(p, t)) for t in pre2
                        if net.W(t, p) > net.W(p, t)]
    consumers = {t: [(p, net.W(p, t) - net.W(t, p)) for p in sorted(net.t_decr_preset[t])]
                 for t in T2}
    while True:
        changed = False
        for t in T2:
            v = min((_floordiv(ub[p], k) for p, k in consumers[t]), default=INF)
            if v != ub_t[t]:
                ub_t[t] = v
                changed = True
        for p in net.places:
            v = m[idx[p]]
            for t, k in producers[p]:
                v = v + _mul(ub_t[t], k)
            if v != ub[p]:
                ub[p] = v
                changed = True
        if not changed:
            break
    lb: dict[str, int] = {}
    for p in net.places:
        v = m[idx[p]]
        for t in T2:
            k = net.W(p, t) - net.W(t, p)
            if k > 0:
                v = v - _mul(ub_t[t], k)
        # negative or -inf lower bounds carry no information for token counts
        lb[p] = max(0, v)
    return IntervalEnv(lb, ub, ub_t)


def _may_enable(env: IntervalEnv, net: PetriNetGame, t: str) -> bool:
    return (all(env.ub[p] >= net.W(p, t) for p in net.t_preset[t])
            and all(env.lb[p] < net.inhib(p, t) for p in net.t_inhib_preset[t]))


def _may_disable(env: IntervalEnv, net: PetriNetGame, t: str) -> bool:
    return (any(env.lb[p] < net.W(p, t) for p in net.t_preset[t])
            or any(env.ub[p] >= net.inhib(p, t) for p in net.t_inhib_preset[t]))


def lusat(env: IntervalEnv, net: PetriNetGame, f: Formula) -> bool:
    """Whether some marking within the bounds may satisfy ``f`` (NNF only).

    ``deadlock`` holds if every transition may be disabled; this is the
    sound reading, since requiring every transition to be definitely
    disabled would miss deadlocks reachable inside the interval.
    """
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Fireable):
        return _may_enable(env, net, f.transition)
    if isinstance(f, Deadlock):
        return all(_may_disable(env, net, t) for t in net.transitions)
    if isinstance(f, Not):
        if isinstance(f.arg, Fireable):
            return _may_disable(env, net, f.arg.transition)
        if isinstance(f.arg, Deadlock):
            return any(_may_enable(env, net, t) for t in net.transitions)
        raise QueryError("lusat() needs a formula in negation normal form")
    if isinstance(f, And):
        return lusat(env, net, f.left) and lusat(env, net, f.right)
    if isinstance(f, Or):
        return lusat(env, net, f.left) or lusat(env, net, f.right)
    if isinstance(f, Compare):
        l1, u1 = env.expr_bounds(f.left)
        l2, u2 = env.expr_bounds(f.right)
        op = f.op
        if op == "<":
            return l1 < u2
        if op == "<=":
            return l1 <= u2
        if op == ">":
            return u1 > l2
        if op == ">=":
            return u1 >= l2
        if op == "=":
            return max(l1, l2) <= min(u1, u2)
        return not (l1 == l2 == u1 == u2)
    raise QueryError(f"not a formula: {f!r}")


def reach_overapprox(net: PetriNetGame, m: Marking, f: Formula) -> tuple[bool, IntervalEnv]:
    """False only if no player-2 firing sequence from ``m`` can reach ``f``."""
    env = player2_bounds(net, m)
    return lusat(env, net, f), env


def saturate(net: PetriNetGame, m: Marking, Y) -> frozenset:
    """Close ``Y`` under the enabling/disabling dependencies at ``m``.

    A disabled transition pulls in the transitions able to fix one chosen
    blocking place; an enabled one pulls in every transition it could
    disable by consuming shared tokens or by feeding an inhibitor place.
    """
    idx = net.place_index
    work = set(Y)
    done: set[str] = set()
    while work:
        t = min(work)
        work.discard(t)
        done.add(t)
        if not net.is_enabled(m, t):
            short = [p for p in sorted(net.t_preset[t]) if m[idx[p]] < net.W(p, t)]
            if short:
                add = net.p_incr_preset[short[0]]
            else:
                p = min(p for p in net.t_inhib_preset[t] if m[idx[p]] >= net.inhib(p, t))
                add = net.p_decr_postset[p]
        else:
            add = set()
            for p in net.t_decr_preset[t]:
                add |= net.p_postset[p]
            for p in net.t_incr_postset[t]:
                add |= net.p_inhib_postset[p]
        work |= set(add) - done
    return frozenset(done)


@dataclass(frozen=True)
class StubbornResult:
    stub: frozenset
    reason: str
    early_terminate: bool = False

    @property
    def full(self) -> bool:
        return self.reason in FULL_REASONS


def safe_oracle_for(net: PetriNetGame, en1: frozenset):
    """Safe player-1 transitions at a marking, via the syntactic test."""
    def oracle(t):
        return t in en1 and syntactic_safe(net, t)
    return oracle


def early_termination(net: PetriNetGame, m: Marking, f: Formula, en=None,
                      safe_oracle=None) -> bool:
    """True if the saturated interesting set has no enabled transition, which
    certifies that no marking satisfying ``f`` is reachable from ``m``."""
    if sat(net, m, f):
        return False
    if en is None:
        en = net.enabled(m)
    return not (saturate(net, m, interesting(net, m, f, safe_oracle)) & en)


def stubborn_set(net: PetriNetGame, m: Marking, f: Formula, *,
                 ablate_condition_v: bool = False) -> StubbornResult:
    """Stubborn set of a stable reduction at ``m`` for goal ``f`` (in NNF).

    ``ablate_condition_v`` skips the player-2 visibility check; the result is
    then unsound and only exists to demonstrate why the check is needed.
    """
    everything = frozenset(net.transitions)
    en = net.enabled(m)
    en1 = en & net.transitions1
    en2 = en & net.transitions2
    oracle = safe_oracle_for(net, en1)
    et = early_termination(net, m, f, en, oracle)
    if not en:
        return StubbornResult(everything, DEADLOCKED_FULL, et)
    if en1 and en2:
        return StubbornResult(everything, MIXED_FULL, et)
    if not en1:
        if not ablate_condition_v and reach_overapprox(net, m, f)[0]:
            return StubbornResult(everything, VISIBILITY_FULL, et)
        t = min(en2)
        Y = set(net.transitions1) | {t}
        for p in net.t_preset[t]:
            Y |= net.p_decr_postset[p]
        for p in net.t_inhib_preset[t]:
            Y |= net.p_incr_preset[p]
    else:
        Y = set(net.transitions2)
    Y |= interesting(net, m, f, oracle)
    X = saturate(net, m, Y)
    if not all(syntactic_safe(net, t) for t in X & en1):
        return StubbornResult(everything, UNSAFE_FULL, et)
    return StubbornResult(X, SATURATED, et)
