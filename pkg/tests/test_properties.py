"""Property tests: oracle comparisons on random GLTSs and random nets."""
import random

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from stubgame.generators import random_game
from stubgame.glts import (ConditionReport, ExplicitGLTS, check_stable, check_state, enabled,
                           reduce, safe_actions_glts, solve_glts)
from stubgame.net import unfold
from stubgame.query import (And, Compare, Or, Not, eval_expr, incr_decr, interesting, nnf,
                            sat)
from stubgame.reduction import (player2_bounds, reach_overapprox, safe_oracle_for, saturate,
                                stubborn_set, syntactic_safe)
from stubgame.solver import (GameGraph, SolveConfig, compare_runs, solve, verify_strategy)

PROPS = settings(max_examples=150, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow])
seeds = st.integers(0, 10 ** 9)


# -- random GLTSs -------------------------------------------------------------

@st.composite
def gltss(draw, non_mixed=False):
    n = draw(st.integers(1, 12))
    states = [f"s{i}" for i in range(n)]
    a1 = [f"a{i}" for i in range(draw(st.integers(0, 3)))]
    a2 = [f"b{i}" for i in range(draw(st.integers(0, 3)))]
    density = draw(st.floats(0.0, 1.0))
    rng = random.Random(draw(seeds))
    owner = {s: rng.choice((1, 2)) for s in states}
    edges = {}
    for s in states:
        for a in a1 + a2:
            if non_mixed and owner[s] != (1 if a in a1 else 2):
                continue
            if rng.random() < density:
                edges[(s, a)] = rng.choice(states)
    goal = rng.sample(states, rng.randint(1, min(2, n)))
    return ExplicitGLTS(states, a1, a2, edges, goal)


def random_reduction(g, rng, skip=()):
    """Per-state random stubborn sets, replaced by everything where they
    violate a condition (conditions only depend on the set at that state)."""
    red = {}
    everything = g.actions
    for s in g.states:
        cand = frozenset(a for a in everything if rng.random() < 0.5)
        rep = ConditionReport()
        check_state(g, s, cand, rep)
        red[s] = cand if rep.holds_except(*skip) else everything
    return red


@PROPS
@given(gltss(), seeds)
def test_stable_reductions_preserve_winner(g, seed):
    red = random_reduction(g, random.Random(seed))
    assert check_stable(g, red).ok
    assert solve_glts(g) == solve_glts(reduce(g, red))


@PROPS
@given(gltss(non_mixed=True), seeds)
def test_non_mixed_games_do_not_need_s(g, seed):
    red = random_reduction(g, random.Random(seed), skip=("S",))
    assert solve_glts(g) == solve_glts(reduce(g, red))


@PROPS
@given(gltss(), seeds)
def test_goal_reachable_means_enabled_stubborn_action(g, seed):
    red = random_reduction(g, random.Random(seed), skip=("I", "G1", "G2", "S", "V", "D"))
    for s in g.states:
        if s in g.goal:
            continue
        seen, todo = {s}, [s]
        while todo:
            x = todo.pop()
            for d in g.out(x).values():
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        if seen & g.goal:
            assert red[s] & enabled(g, s)


@PROPS
@given(gltss(), st.data())
def test_more_goals_never_lose(g, data):
    extra = data.draw(st.sampled_from(g.states))
    bigger = ExplicitGLTS(g.states, g.actions1, g.actions2, g.edges(), g.goal | {extra})
    before, after = solve_glts(g), solve_glts(bigger)
    assert all(after[s] for s in g.states if before[s])


# -- random nets ---------------------------------------------------------------

def walks(net, m, depth, allowed=None):
    """All firing sequences up to ``depth`` as (sequence, marking) pairs."""
    out = [((), m)]
    frontier = [((), m)]
    for _ in range(depth):
        nxt = []
        for w, x in frontier:
            for t, y in net.successors(x):
                if allowed is None or allowed(t):
                    nxt.append((w + (t,), y))
        out += nxt
        frontier = nxt
    return out


def reachable(mf, limit=2000):
    return unfold(mf.net, mf.initial, mf.query, limit)


def sample_markings(g, seed, k=6):
    rng = random.Random(seed)
    states = list(g.states)
    return rng.sample(states, min(k, len(states)))


def comparisons(f):
    if isinstance(f, Compare):
        yield f
    elif isinstance(f, (And, Or)):
        yield from comparisons(f.left)
        yield from comparisons(f.right)
    elif isinstance(f, Not):
        yield from comparisons(f.arg)


@PROPS
@given(seeds)
def test_incr_decr_cover_value_changes(seed):
    mf = random_game(seed)
    net = mf.net
    exprs = [e for c in comparisons(mf.query) for e in (c.left, c.right)]
    assume(exprs)
    g = reachable(mf)
    for m in sample_markings(g, seed, 3):
        for e in exprs:
            inc, dec = incr_decr(net, m, e)
            v0 = eval_expr(net, m, e)
            for w, m2 in walks(net, m, 4):
                v = eval_expr(net, m2, e)
                if v > v0:
                    assert set(w) & inc
                if v < v0:
                    assert set(w) & dec


@PROPS
@given(seeds, st.sampled_from(["token", "inhibitor"]))
def test_interesting_transitions_block_the_goal(seed, prefer):
    mf = random_game(seed)
    net, f = mf.net, nnf(mf.query)
    g = reachable(mf)
    for m in sample_markings(g, seed):
        if sat(net, m, f):
            continue
        oracle = safe_oracle_for(net, net.enabled(m) & net.transitions1)
        block = interesting(net, m, f, oracle, prefer=prefer)
        assert block <= set(net.transitions)
        for _, m2 in walks(net, m, 4, lambda t: t not in block):
            assert not sat(net, m2, f)


@PROPS
@given(seeds)
def test_nnf_preserves_sat(seed):
    mf = random_game(seed, query_depth=4)
    g = reachable(mf)
    f = mf.query
    for m in g.states:
        assert sat(mf.net, m, f) == sat(mf.net, m, nnf(f))
        assert sat(mf.net, m, Not(f)) == sat(mf.net, m, nnf(Not(f)))


@PROPS
@given(seeds)
def test_reach_overapprox_is_sound(seed):
    mf = random_game(seed)
    net, f = mf.net, nnf(mf.query)
    g = reachable(mf)
    for m in sample_markings(g, seed):
        hit = any(sat(net, m2, f) for _, m2 in walks(net, m, 5, net.transitions2.__contains__))
        if hit:
            assert reach_overapprox(net, m, f)[0]


@PROPS
@given(seeds)
def test_player2_bounds_hold_along_runs(seed):
    mf = random_game(seed)
    net = mf.net
    g = reachable(mf)
    for m in sample_markings(g, seed, 3):
        env = player2_bounds(net, m)
        for w, m2 in walks(net, m, 5, net.transitions2.__contains__):
            for t in set(w):
                assert w.count(t) <= env.ub_t[t]
            for p, v in net.tokens(m2).items():
                assert env.lb[p] <= v <= env.ub[p]


@PROPS
@given(seeds)
def test_syntactic_safety_is_sound(seed):
    mf = random_game(seed)
    net = mf.net
    g = reachable(mf)
    safe = {t for t in net.transitions1 if syntactic_safe(net, t)}
    for m in g.states:
        if enabled(g, m, 2):
            continue
        assert (enabled(g, m, 1) & safe) <= safe_actions_glts(g, m)


@PROPS
@given(seeds, st.data())
def test_saturate_is_a_closure(seed, data):
    mf = random_game(seed)
    net = mf.net
    g = reachable(mf)
    ts = sorted(net.transitions)
    y1 = set(data.draw(st.lists(st.sampled_from(ts), max_size=3)))
    y2 = set(data.draw(st.lists(st.sampled_from(ts), max_size=3)))
    for m in sample_markings(g, seed, 3):
        x1, x2 = saturate(net, m, y1), saturate(net, m, y2)
        assert y1 <= x1
        assert saturate(net, m, x1) == x1
        assert saturate(net, m, y1 | y2) >= x1 | x2


@PROPS
@given(seeds)
def test_lifted_stubborn_sets_are_stable(seed):
    mf = random_game(seed)
    g = reachable(mf)
    f = nnf(mf.query)
    red = {m: stubborn_set(mf.net, m, f).stub for m in g.states}
    report = check_stable(g, red)
    assert report.ok, str(report)


@PROPS
@given(seeds)
def test_early_termination_is_sound(seed):
    mf = random_game(seed)
    g = reachable(mf)
    f = nnf(mf.query)
    win_reach = {}
    # markings from which some goal marking is reachable at all
    rev = {m: [] for m in g.states}
    for (m, _), m2 in g.edges().items():
        rev[m2].append(m)
    todo = list(g.goal)
    can = set(todo)
    while todo:
        x = todo.pop()
        for y in rev[x]:
            if y not in can:
                can.add(y)
                todo.append(y)
    for m in g.states:
        if stubborn_set(mf.net, m, f).early_terminate:
            assert m not in can


@PROPS
@given(seeds, st.sampled_from(["dfs", "bfs"]))
def test_por_and_normal_agree(seed, order):
    mf = random_game(seed)
    truth = solve_glts(reachable(mf))[mf.initial]
    cmp = compare_runs(mf.net, mf.initial, mf.query, max_states=2000, search_order=order)
    assert cmp.normal.winning == cmp.por.winning == truth
    for et in (False,):
        rep = solve(mf.net, mf.initial, mf.query,
                    SolveConfig(max_states=2000, early_termination=et, search_order=order))
        assert rep.winning == truth


@PROPS
@given(seeds)
def test_reduced_exploration_is_a_subgame(seed):
    mf = random_game(seed)
    full = reachable(mf).edges()
    graph = GameGraph(mf.net, mf.query, SolveConfig(max_states=2000))
    graph.explore([mf.initial])
    for m, out in graph.succ.items():
        for t, m2 in out:
            assert full[(m, t)] == m2


@PROPS
@given(seeds, st.booleans())
def test_winning_strategies_win_the_full_game(seed, use_por):
    mf = random_game(seed)
    rep = solve(mf.net, mf.initial, mf.query, SolveConfig(use_por=use_por, max_states=2000))
    if rep.winning:
        assert verify_strategy(mf.net, mf.initial, mf.query, rep.strategy)


@PROPS
@given(seeds)
def test_solving_is_deterministic(seed):
    mf = random_game(seed)
    a = solve(mf.net, mf.initial, mf.query)
    b = solve(mf.net, mf.initial, mf.query)
    assert (a.winning, a.unique_markings, a.edges_explored, a.strategy) == \
        (b.winning, b.unique_markings, b.edges_explored, b.strategy)
