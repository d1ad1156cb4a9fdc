"""Goal formulas over markings.

Expressions are built from constants, places and ``+ - *``; formulas from
``true``/``false``, transition-enabledness atoms, comparisons, ``deadlock``
and the boolean connectives.  Besides evaluation this module provides the
negation normal form, the increasing/decreasing transition analysis and the
interesting-transition sets used to seed stubborn sets.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Union

from .net import Marking, PetriNetGame

# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class PlaceRef:
    place: str


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: "Expr"
    right: "Expr"


Expr = Union[Const, PlaceRef, BinOp]


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Fireable:
    transition: str


@dataclass(frozen=True)
class Compare:
    op: str  # '<', '<=', '=', '!=', '>', '>='
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Deadlock:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    arg: "Formula"


Formula = Union[TrueF, FalseF, Fireable, Compare, Deadlock, And, Or, Not]

TRUE = TrueF()
FALSE = FalseF()
DEADLOCK = Deadlock()

ARITH = {"+": operator.add, "-": operator.sub, "*": operator.mul}
COMPARE = {"<": operator.lt, "<=": operator.le, "=": operator.eq,
           "!=": operator.ne, ">": operator.gt, ">=": operator.ge}
NEGATED = {"<": ">=", "<=": ">", "=": "!=", "!=": "=", ">": "<=", ">=": "<"}


class QueryError(ValueError):
    pass


def conj(*fs: Formula) -> Formula:
    """Right-nested conjunction; ``true`` for no arguments."""
    if not fs:
        return TRUE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def places_of(e) -> set[str]:
    if isinstance(e, PlaceRef):
        return {e.place}
    if isinstance(e, BinOp):
        return places_of(e.left) | places_of(e.right)
    if isinstance(e, Compare):
        return places_of(e.left) | places_of(e.right)
    if isinstance(e, (And, Or)):
        return places_of(e.left) | places_of(e.right)
    if isinstance(e, Not):
        return places_of(e.arg)
    return set()


def transitions_of(f) -> set[str]:
    if isinstance(f, Fireable):
        return {f.transition}
    if isinstance(f, (And, Or)):
        return transitions_of(f.left) | transitions_of(f.right)
    if isinstance(f, Not):
        return transitions_of(f.arg)
    return set()


def validate(net: PetriNetGame, f) -> None:
    """Raise ``QueryError`` if ``f`` names places/transitions not in ``net``."""
    bad_p = places_of(f) - set(net.places)
    bad_t = transitions_of(f) - set(net.transitions)
    if bad_p:
        raise QueryError(f"unknown places in query: {sorted(bad_p)}")
    if bad_t:
        raise QueryError(f"unknown transitions in query: {sorted(bad_t)}")


# -- semantics ----------------------------------------------------------------

def eval_expr(net: PetriNetGame, m: Marking, e: Expr) -> int:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, PlaceRef):
        return m[net.place_index[e.place]]
    return ARITH[e.op](eval_expr(net, m, e.left), eval_expr(net, m, e.right))


def sat(net: PetriNetGame, m: Marking, f: Formula) -> bool:
    if isinstance(f, Compare):
        return COMPARE[f.op](eval_expr(net, m, f.left), eval_expr(net, m, f.right))
    if isinstance(f, And):
        return sat(net, m, f.left) and sat(net, m, f.right)
    if isinstance(f, Or):
        return sat(net, m, f.left) or sat(net, m, f.right)
    if isinstance(f, Not):
        return not sat(net, m, f.arg)
    if isinstance(f, Fireable):
        return net.is_enabled(m, f.transition)
    if isinstance(f, Deadlock):
        return not net.kernel.enabled(m)
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    raise QueryError(f"not a formula: {f!r}")


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Push negations down to ``Fireable``/``Deadlock`` atoms.

    Negated comparisons are flipped instead (``not e1 < e2`` is ``e1 >= e2``).
    """
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        l, r = nnf(f.left, negate), nnf(f.right, negate)
        return Or(l, r) if negate else And(l, r)
    if isinstance(f, Or):
        l, r = nnf(f.left, negate), nnf(f.right, negate)
        return And(l, r) if negate else Or(l, r)
    if isinstance(f, Compare):
        return Compare(NEGATED[f.op], f.left, f.right) if negate else f
    if isinstance(f, TrueF):
        return FALSE if negate else f
    if isinstance(f, FalseF):
        return TRUE if negate else f
    if isinstance(f, (Fireable, Deadlock)):
        return Not(f) if negate else f
    raise QueryError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Not):
        return isinstance(f.arg, (Fireable, Deadlock))
    if isinstance(f, (And, Or)):
        return is_nnf(f.left) and is_nnf(f.right)
    return True


# -- increasing / decreasing transitions ----------------------------------------

def incr_decr(net: PetriNetGame, m: Marking, e: Expr) -> tuple[frozenset, frozenset]:
    """Transitions that may raise resp. lower the value of ``e`` when fired.

    The result does not depend on ``m`` for this expression language.
    """
    if isinstance(e, Const):
        return frozenset(), frozenset()
    if isinstance(e, PlaceRef):
        return net.p_incr_preset[e.place], net.p_decr_postset[e.place]
    i1, d1 = incr_decr(net, m, e.left)
    i2, d2 = incr_decr(net, m, e.right)
    if e.op == "+":
        return i1 | i2, d1 | d2
    if e.op == "-":
        return i1 | d2, d1 | i2
    both = i1 | d1 | i2 | d2
    return both, both


def incr(net, m, e) -> frozenset:
    return incr_decr(net, m, e)[0]


def decr(net, m, e) -> frozenset:
    return incr_decr(net, m, e)[1]


# -- interesting transitions ------------------------------------------------

def _lowest(xs):
    return min(xs) if xs else None


def _disabling_set(net: PetriNetGame, t: str) -> frozenset:
    """Transitions that can disable ``t``: they lower a pre-place of ``t`` or
    raise one of its inhibitor places."""
    out = set()
    for p in net.t_preset[t]:
        out |= net.p_decr_postset[p]
    for p in net.t_inhib_preset[t]:
        out |= net.p_incr_preset[p]
    return frozenset(out)


def _enabling_set(net: PetriNetGame, m: Marking, t: str, prefer: str) -> frozenset:
    """Transitions one of which must fire before the disabled ``t`` can fire."""
    idx = net.place_index
    short = sorted(p for p in net.t_preset[t] if m[idx[p]] < net.W(p, t))
    blocked = sorted(p for p in net.t_inhib_preset[t] if m[idx[p]] >= net.inhib(p, t))
    if short and (prefer == "token" or not blocked):
        return net.p_incr_preset[short[0]]
    if blocked:
        return net.p_decr_postset[blocked[0]]
    raise QueryError(f"{t} is enabled; no enabling set exists")


SafeOracle = Callable[[str], bool]


def interesting(net: PetriNetGame, m: Marking, f: Formula,
                safe_oracle: SafeOracle | None = None, *, prefer: str = "token"
                ) -> frozenset:
    """Interesting transitions of ``f`` at ``m`` (``f`` must be in NNF).

    Every firing sequence from ``m`` that reaches a marking satisfying ``f``
    contains one of them.  Where several places or transitions could be
    selected the lowest id wins; ``prefer`` decides between a token-deficient
    pre-place and a blocking inhibitor place for enabledness atoms.
    """
    if sat(net, m, f):
        return frozenset()
    if safe_oracle is None:
        def safe_oracle(_t):
            return False
    return _interesting(net, m, f, safe_oracle, prefer)


def _interesting(net, m, f, safe_oracle, prefer) -> frozenset:
    # precondition: m does not satisfy f
    if isinstance(f, (TrueF, FalseF)):
        return frozenset()
    if isinstance(f, Deadlock):
        t = _lowest(net.enabled(m))
        return frozenset({t}) | _disabling_set(net, t)
    if isinstance(f, Fireable):
        return _enabling_set(net, m, f.transition, prefer)
    if isinstance(f, Not):
        if isinstance(f.arg, Fireable):
            return _disabling_set(net, f.arg.transition)
        if isinstance(f.arg, Deadlock):
            return frozenset()
        raise QueryError("interesting() needs a formula in negation normal form")
    if isinstance(f, Compare):
        i1, d1 = incr_decr(net, m, f.left)
        i2, d2 = incr_decr(net, m, f.right)
        if f.op in ("<", "<="):
            return d1 | i2
        if f.op in (">", ">="):
            return i1 | d2
        if f.op == "!=":
            return i1 | d1 | i2 | d2
        # '=' is only reached when the two sides differ
        if eval_expr(net, m, f.left) > eval_expr(net, m, f.right):
            return d1 | i2
        return i1 | d2
    if isinstance(f, Or):
        return (_interesting(net, m, f.left, safe_oracle, prefer)
                | _interesting(net, m, f.right, safe_oracle, prefer))
    if isinstance(f, And):
        s1 = sat(net, m, f.left)
        s2 = sat(net, m, f.right)
        if s2:
            return _interesting(net, m, f.left, safe_oracle, prefer)
        if s1:
            return _interesting(net, m, f.right, safe_oracle, prefer)
        a = _interesting(net, m, f.left, safe_oracle, prefer)
        if all(safe_oracle(t) for t in a):
            return a
        b = _interesting(net, m, f.right, safe_oracle, prefer)
        if all(safe_oracle(t) for t in b):
            return b
        return a if len(a) <= len(b) else b
    raise QueryError(f"not a formula: {f!r}")


# -- text rendering -----------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def expr_to_text(e: Expr, parent: int = 0, right: bool = False) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, PlaceRef):
        return e.place
    p = _PREC[e.op]
    s = f"{expr_to_text(e.left, p)} {e.op} {expr_to_text(e.right, p, True)}"
    if p < parent or (p == parent and right):
        return f"({s})"
    return s


def to_text(f: Formula, parent: int = 0) -> str:
    """Render a formula in the query syntax accepted by ``formats.parse_query``."""
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Deadlock):
        return "deadlock"
    if isinstance(f, Fireable):
        return f"en({f.transition})"
    if isinstance(f, Compare):
        return f"{expr_to_text(f.left)} {f.op} {expr_to_text(f.right)}"
    if isinstance(f, Not):
        return f"not {to_text(f.arg, 3)}"
    p = 1 if isinstance(f, Or) else 2
    # connectives associate to the right, as in the parser
    s = f"{to_text(f.left, p + 1)} {'or' if p == 1 else 'and'} {to_text(f.right, p)}"
    return f"({s})" if p < parent else s
