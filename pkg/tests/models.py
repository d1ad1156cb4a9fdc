"""Small hand-built models shared by the tests."""
from stubgame import PetriNetGame
from stubgame.formats import parse_glts
from stubgame.query import And, Compare, Const, PlaceRef

# four places, three player-2 transitions; t3 pumps p3 without bound
ALG1_MODEL = """\
place p1 3
place p2 0
place p3 0
place p4 0
trans t1 p2
trans t2 p2
trans t3 p2
arc p1 t1 1
arc t1 p2 1
arc p1 t2 2
arc p3 t2 1
arc t2 p4 1
arc t3 p3 1
query p4 >= 2
"""

# s1 is a player-1 state; only a is safe because c leads towards the
# mixed state s5
SAFE_INTERESTING = """\
s1 a 1 s2
s2 b 1 s3
s3 c 1 s6
s1 c 1 s4
s4 a 1 s5
s5 b 1 s6
s5 d 2 s7
goal: s6
"""

STABLE_REDUCTION = """\
s1 a 1 s2
s1 b 1 s3
s1 c 1 s4
s2 b 1 s5
s2 c 1 s6
s3 a 1 s5
s3 c 1 s7
s4 a 1 s6
s4 b 1 s7
s5 c 1 s8
s6 b 1 s8
s7 a 1 s8
s7 d 1 s9
s9 e 2 s10
goal: s8
"""

# only player 2 moves; the goal s2 can be avoided by playing b first
DIAMOND = """\
s1 a 2 s2
s1 b 2 s3
s2 b 2 s4
s3 a 2 s4
goal: s2
"""


def alg1_net():
    net = PetriNetGame(
        ["p1", "p2", "p3", "p4"], [], ["t1", "t2", "t3"],
        {("p1", "t1"): 1, ("t1", "p2"): 1, ("p1", "t2"): 2, ("p3", "t2"): 1,
         ("t2", "p4"): 1, ("t3", "p3"): 1})
    return net, net.marking(p1=3)


def diamond_net():
    """The diamond as a 1-safe net: a marks qa, b marks qb; the goal is
    "a fired but b did not"."""
    net = PetriNetGame(["pa", "pb", "qa", "qb"], [], ["a", "b"],
                       {("pa", "a"): 1, ("a", "qa"): 1, ("pb", "b"): 1, ("b", "qb"): 1})
    goal = And(Compare(">=", PlaceRef("qa"), Const(1)), Compare("<=", PlaceRef("qb"), Const(0)))
    return net, net.marking(pa=1, pb=1), goal


def glts(name):
    return parse_glts({"safe": SAFE_INTERESTING, "stable": STABLE_REDUCTION,
                       "diamond": DIAMOND}[name])
