import pytest

from stubgame.formats import parse_query
from stubgame.net import PetriNetGame
from stubgame.query import (DEADLOCK, TRUE, And, BinOp, Compare, Const, Fireable, Not, Or,
                            PlaceRef, QueryError, decr, eval_expr, incr, incr_decr,
                            interesting, is_nnf, nnf, sat, validate)

from models import alg1_net

P1, P2, P4 = PlaceRef("p1"), PlaceRef("p2"), PlaceRef("p4")


@pytest.fixture
def example():
    return alg1_net()


def test_eval_expr(example):
    net, m0 = example
    assert eval_expr(net, m0, BinOp("-", P1, Const(5))) == -2
    assert eval_expr(net, m0, Const(7)) == 7
    assert eval_expr(net, m0, BinOp("*", P1, P4)) == 0


def test_sat(example):
    net, m0 = example
    assert sat(net, m0, Fireable("t2")) is False
    assert sat(net, m0, TRUE) is True
    assert sat(net, m0, DEADLOCK) is False
    assert sat(net, m0, Not(Fireable("t2"))) is True


def test_sat_deadlock():
    net = PetriNetGame(["p"], ["t"], [], {("p", "t"): 1})
    assert sat(net, net.marking(), DEADLOCK)


def test_nnf():
    a, b = Fireable("t1"), Fireable("t2")
    assert nnf(Not(And(a, b))) == Or(Not(a), Not(b))
    assert nnf(Not(Not(a))) == a
    assert nnf(Not(Compare("<", P1, P2))) == Compare(">=", P1, P2)
    assert is_nnf(nnf(Not(Or(DEADLOCK, Not(And(a, Compare("=", P1, P2)))))))
    assert not is_nnf(Not(Compare("<", P1, P2)))


def test_incr_decr(example):
    net, m0 = example
    assert incr_decr(net, m0, BinOp("-", P1, P4)) == (frozenset(), {"t1", "t2"})
    assert incr_decr(net, m0, Const(7)) == (frozenset(), frozenset())
    both = incr_decr(net, m0, BinOp("*", P2, P4))
    assert both == ({"t1", "t2"}, {"t1", "t2"})
    assert incr(net, m0, P4) == {"t2"} and decr(net, m0, P4) == frozenset()


def test_interesting_satisfied_is_empty(example):
    net, m0 = example
    assert interesting(net, m0, Compare(">=", P1, Const(1))) == frozenset()


def test_interesting_rows(example):
    net, m0 = example
    assert interesting(net, m0, Compare(">=", P4, Const(1))) == {"t2"}
    assert interesting(net, m0, DEADLOCK) == {"t1", "t2"}
    # t2 is short of a token on p3 only
    assert interesting(net, m0, Fireable("t2")) == {"t3"}
    assert interesting(net, m0, Not(Fireable("t1"))) == {"t1", "t2"}
    assert interesting(net, m0, Not(DEADLOCK)) == frozenset()


def test_interesting_conjunction_uses_unsatisfied_side(example):
    net, m0 = example
    phi1 = Compare(">=", P1, Const(1))
    phi2 = Compare(">=", P4, Const(1))
    assert interesting(net, m0, And(phi1, phi2)) == interesting(net, m0, phi2)
    assert interesting(net, m0, And(phi2, phi1)) == interesting(net, m0, phi2)


def test_interesting_conjunction_prefers_safe_then_smaller(example):
    net, m0 = example
    left = Compare(">=", P2, Const(5))        # {t1}
    right = Compare(">=", P4, Const(1))       # {t2}
    assert interesting(net, m0, And(left, right)) == {"t1"}
    assert interesting(net, m0, And(left, right), lambda t: t == "t2") == {"t2"}
    bigger = Compare(">=", BinOp("+", P2, P4), Const(9))  # {t1, t2}
    assert interesting(net, m0, And(bigger, right)) == {"t2"}


def test_interesting_inhibitor_choice():
    net = PetriNetGame(["p", "q"], ["t", "add", "clear"], [],
                       {("p", "t"): 1, ("add", "p"): 1, ("q", "clear"): 1},
                       {("q", "t"): 1})
    m = net.marking(q=1)
    assert interesting(net, m, Fireable("t")) == {"add"}
    assert interesting(net, m, Fireable("t"), prefer="inhibitor") == {"clear"}


def test_interesting_equality_directions(example):
    net, m0 = example
    # p1 = 3 is too high for "p1 = 1" and must go down
    assert interesting(net, m0, Compare("=", P1, Const(1))) == {"t1", "t2"}
    assert interesting(net, m0, Compare("=", P4, Const(1))) == {"t2"}
    assert interesting(net, m0, Compare("!=", P1, Const(3))) == {"t1", "t2"}


def test_validate(example):
    net, _ = example
    validate(net, parse_query("p1 >= 1 and en(t1)"))
    with pytest.raises(QueryError):
        validate(net, parse_query("zz >= 1"))
    with pytest.raises(QueryError):
        validate(net, parse_query("en(tz)"))
