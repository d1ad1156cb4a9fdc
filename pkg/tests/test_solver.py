import pytest

from stubgame.generators import gen_chain, gen_nim
from stubgame.net import BoundednessError, PetriNetGame
from stubgame.query import TRUE, Compare, Const, PlaceRef
from stubgame.solver import (InvariantViolation, SolveConfig, StrategyError, compare_runs,
                             complete_strategy, reduction_pct, solve, verify_strategy)

from models import alg1_net, diamond_net


class TestConfig:
    def test_invalid(self):
        with pytest.raises(ValueError):
            SolveConfig(max_states=0)
        with pytest.raises(ValueError):
            SolveConfig(search_order="random")


class TestSolve:
    def test_chain10_normal(self):
        mf = gen_chain(10)
        rep = solve(mf.net, mf.initial, mf.query, SolveConfig(use_por=False))
        assert rep.winning and rep.unique_markings == 1024

    def test_chain10_por(self):
        mf = gen_chain(10)
        rep = solve(mf.net, mf.initial, mf.query)
        assert rep.winning and rep.unique_markings <= 11

    @pytest.mark.parametrize("use_por", [False, True])
    def test_diamond(self, use_por):
        net, m0, goal = diamond_net()
        assert solve(net, m0, goal, SolveConfig(use_por=use_por)).winning is False

    def test_diamond_ablated(self):
        net, m0, goal = diamond_net()
        assert solve(net, m0, goal, SolveConfig(ablate_condition_v=True)).winning is True

    def test_goal_at_start(self):
        net, m0 = alg1_net()
        rep = solve(net, m0, TRUE)
        assert rep.winning and rep.unique_markings == 1 and rep.edges_explored == 0

    def test_state_limit(self):
        net, m0 = alg1_net()
        with pytest.raises(BoundednessError):
            solve(net, m0, Compare(">=", PlaceRef("p4"), Const(5)),
                  SolveConfig(use_por=False, max_states=10))

    @pytest.mark.parametrize("order", ["dfs", "bfs"])
    def test_orders_agree(self, order):
        mf = gen_nim(2, 7)
        rep = solve(mf.net, mf.initial, mf.query, SolveConfig(search_order=order))
        assert rep.winning is False

    def test_early_termination_counts(self):
        net = PetriNetGame(["p", "g"], ["a"], [], {("p", "a"): 1, ("a", "p"): 1})
        goal = Compare(">=", PlaceRef("g"), Const(1))
        rep = solve(net, net.marking(p=1), goal)
        assert not rep.winning and rep.early_terminated == 1 and rep.edges_explored == 0
        rep = solve(net, net.marking(p=1), goal, SolveConfig(early_termination=False))
        assert not rep.winning and rep.early_terminated == 0

    def test_report_text(self):
        mf = gen_chain(2)
        text = solve(mf.net, mf.initial, mf.query).to_text()
        assert text.splitlines()[0] == "winning=true"
        assert "wall_time" not in text
        assert "wall_time=" in solve(mf.net, mf.initial, mf.query).to_text(include_time=True)


class TestVerify:
    def test_goal_at_start(self):
        net, m0 = alg1_net()
        assert verify_strategy(net, m0, TRUE, {})

    def test_chain2_in_order(self):
        mf = gen_chain(2)
        net = mf.net
        sigma = {}
        for m in [mf.initial, net.fire(mf.initial, "t1"), net.fire(mf.initial, "t2")]:
            sigma[m] = min(net.enabled(m))
        assert verify_strategy(net, mf.initial, mf.query, sigma)

    def test_diamond_empty_strategy(self):
        net, m0, goal = diamond_net()
        assert verify_strategy(net, m0, goal, {}) is False

    def test_undefined_strategy(self):
        mf = gen_chain(2)
        with pytest.raises(StrategyError):
            verify_strategy(mf.net, mf.initial, mf.query, {})

    def test_illegal_choice(self):
        mf = gen_chain(2)
        with pytest.raises(StrategyError):
            verify_strategy(mf.net, mf.initial, mf.query, {mf.initial: "nope"})

    def test_cycle_is_failure(self):
        net = PetriNetGame(["p", "g"], ["a"], [], {("p", "a"): 1, ("a", "p"): 1})
        m = net.marking(p=1)
        assert not verify_strategy(net, m, Compare(">=", PlaceRef("g"), Const(1)), {m: "a"})

    @pytest.mark.parametrize("s", [2, 3, 5, 6, 8])
    def test_nim_strategy(self, s):
        mf = gen_nim(2, s)
        rep = solve(mf.net, mf.initial, mf.query)
        assert rep.winning
        assert verify_strategy(mf.net, mf.initial, mf.query, rep.strategy)
        full = complete_strategy(mf.net, mf.initial, mf.query)
        assert verify_strategy(mf.net, mf.initial, mf.query, full)


class TestCompare:
    def test_chain8(self):
        mf = gen_chain(8)
        cmp = compare_runs(mf.net, mf.initial, mf.query)
        assert cmp.normal.winning == cmp.por.winning
        assert cmp.pct_markings >= 90

    def test_single_transition(self):
        net = PetriNetGame(["p", "q"], ["t"], [], {("p", "t"): 1, ("t", "q"): 1})
        cmp = compare_runs(net, net.marking(p=1), Compare(">=", PlaceRef("q"), Const(1)))
        assert cmp.pct_markings == 0

    def test_nim25(self):
        mf = gen_nim(2, 5)
        cmp = compare_runs(mf.net, mf.initial, mf.query)
        assert cmp.normal.winning and cmp.por.winning

    def test_mismatch_raises(self, monkeypatch):
        import stubgame.solver as solver
        real = solver.solve

        def lying(net, m0, goal, cfg=None):
            rep = real(net, m0, goal, cfg)
            if cfg.use_por:
                rep.winning = not rep.winning
            return rep

        monkeypatch.setattr(solver, "solve", lying)
        mf = gen_chain(2)
        with pytest.raises(InvariantViolation):
            solver.compare_runs(mf.net, mf.initial, mf.query)

    @pytest.mark.parametrize("normal,por,pct", [(1024, 11, 99), (8, 4, 50), (0, 0, 0),
                                                (200, 1, 100), (3, 2, 33), (8, 1, 88)])
    def test_reduction_pct(self, normal, por, pct):
        assert reduction_pct(normal, por) == pct
