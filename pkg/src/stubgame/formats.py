"""Text formats: models, queries and explicit GLTS fixtures.

Model files are line oriented; ``#`` starts a comment::

    place <id> <initial-tokens>
    trans <id> p1|p2
    arc <src> <dst> <weight>          # place->transition or transition->place
    inhib <place> <transition> <weight>
    query <formula>

Queries use infix syntax with the keywords ``true false deadlock en(t)``,
the arithmetic operators ``+ - *``, comparisons ``< <= = != >= >`` and the
connectives ``not``, ``and``, ``or`` (loosest).  Parentheses group either
expressions or formulas.

GLTS fixture files hold one edge per line, ``<src> <action> <1|2> <dst>``,
plus ``goal: s1 s2 ...`` and optionally ``state <id>`` for isolated states.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .glts import ExplicitGLTS
from .net import Marking, NetError, PetriNetGame
from .query import (DEADLOCK, FALSE, TRUE, And, BinOp, Compare, Const, Fireable,
                    Formula, Not, Or, PlaceRef, QueryError, to_text, validate)

IDENT = r"[A-Za-z_][A-Za-z0-9_.']*"
KEYWORDS = {"true", "false", "deadlock", "en", "and", "or", "not"}


class ModelError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line else msg)


class QuerySyntaxError(QueryError):
    def __init__(self, msg: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {msg}")


# -- query parser ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(" + IDENT + r")|(<=|>=|!=|[<>=()+\-*]))")


def _tokenize(text: str, line: int):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise QuerySyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                                   line, len(text[:pos]) + (len(text[pos:]) - len(text[pos:].lstrip())) + 1)
        num, ident, sym = m.groups()
        col = m.start(m.lastindex) + 1
        if num is not None:
            toks.append(("num", num, col))
        elif ident is not None:
            toks.append(("kw" if ident in KEYWORDS else "id", ident, col))
        else:
            toks.append(("sym", sym, col))
        pos = m.end()
    toks.append(("eof", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str, line: int = 1):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.line = line

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise QuerySyntaxError(msg, self.line, tok[2])

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            self.error(f"expected {want!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def at(self, kind, value=None):
        tok = self.peek()
        return tok[0] == kind and (value is None or tok[1] == value)

    # formula := conj ('or' conj)*
    def formula(self):
        f = self.conjunction()
        if self.at("kw", "or"):
            self.i += 1
            return Or(f, self.formula())
        return f

    def conjunction(self):
        f = self.unary()
        if self.at("kw", "and"):
            self.i += 1
            return And(f, self.conjunction())
        return f

    def unary(self):
        if self.at("kw", "not"):
            self.i += 1
            return Not(self.unary())
        tok = self.peek()
        if tok[0] == "kw":
            if tok[1] == "true":
                self.i += 1
                return TRUE
            if tok[1] == "false":
                self.i += 1
                return FALSE
            if tok[1] == "deadlock":
                self.i += 1
                return DEADLOCK
            if tok[1] == "en":
                self.i += 1
                self.take("sym", "(")
                t = self.take("id")[1]
                self.take("sym", ")")
                return Fireable(t)
            self.error(f"unexpected keyword {tok[1]!r}")
        if self.at("sym", "("):
            # either a parenthesised formula or the start of an expression
            save = self.i
            try:
                self.i += 1
                f = self.formula()
                self.take("sym", ")")
                if not (self.peek()[0] == "sym" and self.peek()[1] in
                        ("+", "-", "*", "<", "<=", "=", "!=", ">=", ">")):
                    return f
            except QuerySyntaxError:
                pass
            self.i = save
        return self.comparison()

    def comparison(self):
        left = self.expr()
        tok = self.peek()
        if tok[0] == "sym" and tok[1] in ("<", "<=", "=", "!=", ">=", ">"):
            self.i += 1
            return Compare(tok[1], left, self.expr())
        self.error(f"expected a comparison operator, found {tok[1] or 'end of input'!r}")

    def expr(self):
        e = self.term()
        while self.peek()[0] == "sym" and self.peek()[1] in ("+", "-"):
            op = self.take("sym")[1]
            e = BinOp(op, e, self.term())
        return e

    def term(self):
        e = self.factor()
        while self.at("sym", "*"):
            self.i += 1
            e = BinOp("*", e, self.factor())
        return e

    def factor(self):
        tok = self.peek()
        if tok[0] == "num":
            self.i += 1
            return Const(int(tok[1]))
        if tok[0] == "id":
            self.i += 1
            return PlaceRef(tok[1])
        if self.at("sym", "("):
            self.i += 1
            e = self.expr()
            self.take("sym", ")")
            return e
        self.error(f"expected a number, place or '(', found {tok[1] or 'end of input'!r}")


def parse_query(text: str, net: PetriNetGame | None = None, line: int = 1) -> Formula:
    p = _Parser(text, line)
    f = p.formula()
    if not p.at("eof"):
        p.error(f"unexpected {p.peek()[1]!r}")
    if net is not None:
        validate(net, f)
    return f


# -- model files ----------------------------------------------------------------

@dataclass
class ModelFile:
    net: PetriNetGame
    initial: Marking
    query: Formula | None = None


def parse_model(text: str) -> ModelFile:
    places: dict[str, int] = {}
    owners: dict[str, str] = {}
    arcs: dict[tuple[str, str], int] = {}
    inhibs: dict[tuple[str, str], int] = {}
    query_line = None
    where: dict[str, int] = {}

    def ident(tok, lineno):
        if not re.fullmatch(IDENT, tok) or tok in KEYWORDS:
            raise ModelError(f"invalid identifier {tok!r}", lineno)
        return tok

    def weight(tok, lineno, minimum):
        if not re.fullmatch(r"\d+", tok) or int(tok) < minimum:
            raise ModelError(f"weight must be an integer >= {minimum}, got {tok!r}", lineno)
        return int(tok)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw, _, rest = line.partition(" ")
        args = rest.split()
        if kw == "query":
            if query_line is not None:
                raise ModelError("duplicate query", lineno)
            query_line = (rest.strip(), lineno)
            continue
        arity = {"place": 2, "trans": 2, "arc": 3, "inhib": 3}.get(kw)
        if arity is None:
            raise ModelError(f"unknown directive {kw!r}", lineno)
        if len(args) != arity:
            raise ModelError(f"{kw} takes {arity} arguments, got {len(args)}", lineno)
        if kw in ("place", "trans"):
            name = ident(args[0], lineno)
            if name in where:
                raise ModelError(f"duplicate id {name!r} (first declared on line "
                                 f"{where[name]})", lineno)
            where[name] = lineno
            if kw == "place":
                places[name] = weight(args[1], lineno, 0)
            else:
                if args[1] not in ("p1", "p2"):
                    raise ModelError(f"owner must be p1 or p2, got {args[1]!r}", lineno)
                owners[name] = args[1]
        elif kw == "arc":
            src, dst = args[0], args[1]
            for x in (src, dst):
                if x not in where:
                    raise ModelError(f"undeclared id {x!r}", lineno)
            if (src in places) == (dst in places):
                kind = "places" if src in places else "transitions"
                raise ModelError(f"arc {src} -> {dst} connects two {kind}", lineno)
            if (src, dst) in arcs:
                raise ModelError(f"duplicate arc {src} -> {dst}", lineno)
            arcs[(src, dst)] = weight(args[2], lineno, 1)
        else:
            p, t = args[0], args[1]
            if p not in places:
                raise ModelError(f"inhibitor source {p!r} is not a declared place", lineno)
            if t not in owners:
                raise ModelError(f"inhibitor target {t!r} is not a declared transition", lineno)
            if (p, t) in inhibs:
                raise ModelError(f"duplicate inhibitor {p} -o {t}", lineno)
            inhibs[(p, t)] = weight(args[2], lineno, 1)

    try:
        net = PetriNetGame(places, [t for t, o in owners.items() if o == "p1"],
                           [t for t, o in owners.items() if o == "p2"], arcs, inhibs)
    except NetError as exc:
        raise ModelError(str(exc)) from None
    query = None
    if query_line is not None:
        text_q, lineno = query_line
        try:
            query = parse_query(text_q, net, lineno)
        except QuerySyntaxError as exc:
            # report columns relative to the whole line
            raise QuerySyntaxError(str(exc).split(": ", 1)[1], lineno,
                                   exc.col + len("query ")) from None
        except QueryError as exc:
            raise ModelError(str(exc), lineno) from None
    return ModelFile(net, net.marking(places), query)


def format_model(model: ModelFile, header: str | None = None) -> str:
    net = model.net
    out = []
    if header:
        out += [f"# {line}" if line else "#" for line in header.splitlines()]
    for p in net.places:
        out.append(f"place {p} {model.initial[net.place_index[p]]}")
    for t in net.transitions:
        out.append(f"trans {t} p{net.owner(t)}")
    for (src, dst), w in sorted(net.arcs().items()):
        out.append(f"arc {src} {dst} {w}")
    for (p, t), w in sorted(net.inhibitors().items()):
        out.append(f"inhib {p} {t} {w}")
    if model.query is not None:
        out.append(f"query {to_text(model.query)}")
    return "\n".join(out) + "\n"


def read_model(path) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


# -- GLTS fixtures --------------------------------------------------------------

def parse_glts(text: str) -> ExplicitGLTS:
    states: list[str] = []
    a1: set[str] = set()
    a2: set[str] = set()
    edges: dict[tuple[str, str], str] = {}
    goal: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("goal:"):
            goal += line[5:].split()
            continue
        parts = line.split()
        if parts[0] == "state" and len(parts) == 2:
            states.append(parts[1])
            continue
        if len(parts) != 4 or parts[2] not in ("1", "2"):
            raise ModelError("expected '<src> <action> <1|2> <dst>'", lineno)
        src, a, player, dst = parts
        (a1 if player == "1" else a2).add(a)
        if (src, a) in edges and edges[(src, a)] != dst:
            raise ModelError(f"nondeterministic edge {src} -{a}->", lineno)
        edges[(src, a)] = dst
        states += [src, dst]
    states += goal
    return ExplicitGLTS(states, a1, a2, edges, goal)


def format_glts(glts: ExplicitGLTS) -> str:
    out = []
    touched = set()
    for (s, a), d in glts.edges().items():
        out.append(f"{s} {a} {glts.owner(a)} {d}")
        touched |= {s, d}
    for s in glts.states:
        if s not in touched:
            out.append(f"state {s}")
    out.append("goal: " + " ".join(str(s) for s in glts.states if s in glts.goal))
    return "\n".join(out) + "\n"
