"""Deterministic model families.

chain(n)
    n independent player-1 transitions ``t_i: p_i -> q_i``; the goal asks
    for every ``q_i`` to be marked.  Without reduction all 2^n subsets of
    fired transitions are reachable.

nim(k, s)
    Misere subtraction game played by adding 1..k pebbles to an initially
    empty stack; whoever brings the stack to s or more loses.  Player 1
    moves first.  Places: ``stack``, ``turn1``/``turn2`` (the turn token)
    and ``lose2``.  ``add1_i`` (player 1) moves the turn token from turn1
    to turn2 and puts i pebbles on the stack; ``add2_i`` is symmetric.
    Every add transition has an inhibitor arc of weight s from ``stack``,
    which freezes the game once the stack crossed s.  The player-2
    transition ``detect`` consumes the turn1 token and marks ``lose2``; it
    tests ``stack >= s`` with a self-loop of weight s.  So ``lose2`` can
    only be marked when player 2 made the crossing move (the turn token is
    then back at turn1), and the goal is ``lose2 >= 1``.  If player 1
    crosses, the net deadlocks with the token on turn2.

workflow(n)
    Player 2 makes n sequential binary feature choices ``chA_i``/``chB_i``
    moving a control token c_{i-1} -> c_i and marking fA_i or fB_i.  Once
    all choices are made (c_n marked, read through a self-loop) player 1
    assembles each feature with ``asmA_i``/``asmB_i`` into ``done_i``;
    ``complete`` then turns all done_i into ``product``.  Player 1 always
    wins and the n assembly steps are mutually independent.
"""
from __future__ import annotations

import random

from .formats import ModelFile
from .net import PetriNetGame
from .query import Compare, Const, PlaceRef, conj


def _geq(p: str, n: int):
    return Compare(">=", PlaceRef(p), Const(n))


def gen_chain(n: int) -> ModelFile:
    if n < 1:
        raise ValueError("chain needs n >= 1")
    w = len(str(n))
    ids = [str(i).zfill(w) for i in range(1, n + 1)]
    places = [f"p{i}" for i in ids] + [f"q{i}" for i in ids]
    arcs = {}
    for i in ids:
        arcs[(f"p{i}", f"t{i}")] = 1
        arcs[(f"t{i}", f"q{i}")] = 1
    net = PetriNetGame(places, [f"t{i}" for i in ids], [], arcs)
    m0 = net.marking({f"p{i}": 1 for i in ids})
    return ModelFile(net, m0, conj(*(_geq(f"q{i}", 1) for i in ids)))


def gen_nim(k: int, s: int) -> ModelFile:
    if k < 1:
        raise ValueError("nim needs k >= 1")
    if s < 2:
        raise ValueError("nim needs s >= 2")
    t1 = [f"add1_{i}" for i in range(1, k + 1)]
    t2 = [f"add2_{i}" for i in range(1, k + 1)] + ["detect"]
    arcs = {}
    inhib = {}
    for i in range(1, k + 1):
        for me, other in ((1, 2), (2, 1)):
            t = f"add{me}_{i}"
            arcs[(f"turn{me}", t)] = 1
            arcs[(t, f"turn{other}")] = 1
            arcs[(t, "stack")] = i
            inhib[("stack", t)] = s
    arcs[("turn1", "detect")] = 1
    arcs[("stack", "detect")] = s
    arcs[("detect", "stack")] = s
    arcs[("detect", "lose2")] = 1
    net = PetriNetGame(["stack", "turn1", "turn2", "lose2"], t1, t2, arcs, inhib)
    return ModelFile(net, net.marking(turn1=1), _geq("lose2", 1))


def gen_choice_workflow(n: int) -> ModelFile:
    if n < 1:
        raise ValueError("workflow needs n >= 1")
    places = [f"c{i}" for i in range(n + 1)] + ["product"]
    t1, t2 = ["complete"], []
    arcs = {}
    for i in range(1, n + 1):
        places += [f"fA{i}", f"fB{i}", f"done{i}"]
        for x in "AB":
            ch, asm = f"ch{x}{i}", f"asm{x}{i}"
            t2.append(ch)
            t1.append(asm)
            arcs[(f"c{i - 1}", ch)] = 1
            arcs[(ch, f"c{i}")] = 1
            arcs[(ch, f"f{x}{i}")] = 1
            arcs[(f"f{x}{i}", asm)] = 1
            arcs[(f"c{n}", asm)] = 1
            arcs[(asm, f"c{n}")] = 1
            arcs[(asm, f"done{i}")] = 1
        arcs[(f"done{i}", "complete")] = 1
    arcs[("complete", "product")] = 1
    net = PetriNetGame(places, t1, t2, arcs)
    return ModelFile(net, net.marking(c0=1), _geq("product", 1))


GENERATORS = {
    "chain": (gen_chain, ("n",)),
    "nim": (gen_nim, ("k", "s")),
    "workflow": (gen_choice_workflow, ("n",)),
}


def nim_oracle(k: int, s: int) -> bool:
    """Player 1 (moving first) wins the misere adding game iff
    ``(s - 1) mod (k + 1) != 0``."""
    return (s - 1) % (k + 1) != 0


def nim_minimax(k: int, s: int) -> bool:
    """Independent minimax check of ``nim_oracle`` by memoised search."""
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def mover_wins(stack: int) -> bool:
        # the mover loses if every move crosses s or leads to a winning
        # position for the opponent
        return any(stack + i < s and not mover_wins(stack + i) for i in range(1, k + 1))

    return mover_wins(0)


# -- random games for property tests -----------------------------------------

def random_game(seed: int, max_places: int = 6, max_transitions: int = 6,
                cap: int = 3, query_depth: int = 3) -> ModelFile:
    """Small random Petri net game with a random goal formula.

    Token counts stay at most ``cap``: every transition that adds tokens to
    a place gets an inhibitor arc from that place, so it is disabled once
    firing could overflow.
    """
    from .query import DEADLOCK, FALSE, TRUE, And, BinOp, Fireable, Not, Or, sat

    rng = random.Random(seed)
    n_p = rng.randint(2, max_places)
    n_t = rng.randint(2, max_transitions)
    places = [f"p{i}" for i in range(n_p)]
    trans = [f"t{i}" for i in range(n_t)]
    owners = {t: rng.choice((1, 2)) for t in trans}
    arcs, inhib = {}, {}
    for t in trans:
        for p in places:
            r = rng.random()
            if r < 0.3:
                arcs[(p, t)] = rng.choice((1, 1, 2))
            if rng.random() < 0.3:
                arcs[(t, p)] = rng.choice((1, 1, 2))
        for p in places:
            gain = arcs.get((t, p), 0) - arcs.get((p, t), 0)
            if gain > 0:
                inhib[(p, t)] = cap - gain + 1
            elif rng.random() < 0.1:
                inhib[(p, t)] = rng.randint(1, cap)
    # an inhibitor threshold below the pre-arc weight only disables t
    net = PetriNetGame(places, [t for t in trans if owners[t] == 1],
                       [t for t in trans if owners[t] == 2], arcs, inhib)
    m0 = net.marking({p: rng.randint(1, cap) if rng.random() < 0.7 else 0 for p in places})

    def expr(d):
        r = rng.random()
        if d <= 0 or r < 0.5:
            return PlaceRef(rng.choice(places)) if rng.random() < 0.7 else Const(rng.randint(0, 3))
        return BinOp(rng.choice("+-*"), expr(d - 1), expr(d - 1))

    def formula(d):
        r = rng.random()
        if d <= 0 or r < 0.35:
            a = rng.random()
            if a < 0.65:
                return Compare(rng.choice(("<", "<=", "=", "!=", ">", ">=")),
                               expr(1), Const(rng.randint(0, 3)) if rng.random() < 0.7
                               else expr(1))
            if a < 0.85:
                f = Fireable(rng.choice(trans))
            elif a < 0.93:
                f = DEADLOCK
            else:
                return rng.choice((TRUE, FALSE))
            return Not(f) if rng.random() < 0.4 else f
        op = And if rng.random() < 0.5 else Or
        return op(formula(d - 1), formula(d - 1))

    # redraw goals that already hold initially; those instances are trivial
    for _ in range(20):
        f = formula(query_depth)
        if not sat(net, m0, f):
            break
    return ModelFile(net, m0, f)
