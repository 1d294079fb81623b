"""Formulas, schemas, the ASCII surface syntax, and defined connectives.

A single family of immutable node classes serves both formulas and schemas:
a schema is simply a tree whose leaves are :class:`MetaVar` nodes, a formula
one whose leaves are :class:`Atom` nodes.  Mixed trees are allowed and
treated uniformly by the semantic layer (every leaf is a variable).

Surface syntax::

    atoms       p, q, r1, foo_bar     ([a-z][a-z0-9_]*, except the bare "o")
    metavars    A, B, C2              ([A-Z][A-Za-z0-9_]*)
    ~  negation      o  consistency     *  inconsistency
    &  conjunction   |  disjunction     -> implication (right assoc.)
    <-> bi-implication (left assoc., loosest)
    -  strong negation (~A := ~A & oA)   => dotted strong negation (A -> _|_)
    _|_ bottom       A^n  iterated o     A^(n) cumulative o
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Union

__all__ = [
    "Atom", "MetaVar", "Neg", "Cons", "Incons", "And", "Or", "Imp",
    "Iff", "StrongNeg", "DotNeg", "Bottom", "Power", "ConsPower",
    "Formula", "Schema", "Substitution", "ParseError", "MissingBindingError",
    "AbbreviationError", "AbbreviationPolicy", "BOTTOM_ATOM",
    "parse", "render", "instantiate", "match_schema", "expand_abbreviations",
    "atoms", "metavars", "variables", "size", "depth", "subformulas",
    "is_primitive", "neg_power", "conjoin", "bottom_formula",
]


def _mkhash(self) -> None:
    object.__setattr__(self, "_h", hash((type(self).__name__,) + self._key()))


@dataclass(frozen=True, eq=False)
class _Node:
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _mkhash(self)

    def _key(self) -> tuple:
        raise NotImplementedError

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __hash__(self) -> int:
        return self._h

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self._h != other._h:  # type: ignore[attr-defined]
            return False
        return self._key() == other._key()  # type: ignore[attr-defined]

    def __str__(self) -> str:
        return render(self)  # type: ignore[arg-type]


@dataclass(frozen=True, eq=False)
class _Leaf(_Node):
    name: str = ""

    def _key(self) -> tuple:
        return (self.name,)


@dataclass(frozen=True, eq=False)
class _Unary(_Node):
    arg: "Formula" = None  # type: ignore[assignment]

    def _key(self) -> tuple:
        return (self.arg,)

    def children(self) -> tuple["Formula", ...]:
        return (self.arg,)


@dataclass(frozen=True, eq=False)
class _Binary(_Node):
    left: "Formula" = None  # type: ignore[assignment]
    right: "Formula" = None  # type: ignore[assignment]

    def _key(self) -> tuple:
        return (self.left, self.right)

    def children(self) -> tuple["Formula", ...]:
        return (self.left, self.right)


class Atom(_Leaf):
    """Propositional atom."""


class MetaVar(_Leaf):
    """Schematic letter standing for an arbitrary formula."""


class Neg(_Unary):
    pass


class Cons(_Unary):
    """The consistency connective."""


class Incons(_Unary):
    """The inconsistency connective."""


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Imp(_Binary):
    pass


# Surface sugar, removed by expand_abbreviations.

class Iff(_Binary):
    pass


class StrongNeg(_Unary):
    """``-A``, abbreviating ``~A & oA``."""


class DotNeg(_Unary):
    """``=>A``, abbreviating ``A -> _|_``."""


@dataclass(frozen=True, eq=False)
class Bottom(_Node):
    def _key(self) -> tuple:
        return ()


@dataclass(frozen=True, eq=False)
class _Indexed(_Node):
    arg: "Formula" = None  # type: ignore[assignment]
    n: int = 0

    def _key(self) -> tuple:
        return (self.arg, self.n)

    def children(self) -> tuple["Formula", ...]:
        return (self.arg,)


class Power(_Indexed):
    """``A^n``: n-fold application of the consistency connective."""


class ConsPower(_Indexed):
    """``A^(n)``: ``A^1 & A^2 & ... & A^n``."""


Formula = Union[Atom, MetaVar, Neg, Cons, Incons, And, Or, Imp,
                Iff, StrongNeg, DotNeg, Bottom, Power, ConsPower]
Schema = Formula
Substitution = Mapping[str, Formula]

PRIMITIVE_TYPES = (Atom, MetaVar, Neg, Cons, Incons, And, Or, Imp)
BOTTOM_ATOM = "_b"


# ---------------------------------------------------------------- traversal

def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children()))


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def metavars(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, MetaVar))


def variables(*fs: Formula) -> list[Formula]:
    """Leaves (atoms and metavariables) of ``fs`` in canonical order."""
    seen: set[Formula] = set()
    for f in fs:
        for g in subformulas(f):
            if isinstance(g, (Atom, MetaVar)):
                seen.add(g)
    return sorted(seen, key=lambda v: (v.name.lower(), isinstance(v, Atom), v.name))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def depth(f: Formula) -> int:
    kids = f.children()
    return 1 + max((depth(k) for k in kids), default=0)


def is_primitive(f: Formula) -> bool:
    return all(isinstance(g, PRIMITIVE_TYPES) for g in subformulas(f))


def neg_power(f: Formula, n: int) -> Formula:
    for _ in range(n):
        f = Neg(f)
    return f


def conjoin(fs: list[Formula]) -> Formula:
    """Left-nested conjunction of a nonempty list."""
    if not fs:
        raise ValueError("empty conjunction")
    out = fs[0]
    for g in fs[1:]:
        out = And(out, g)
    return out


def bottom_formula() -> Formula:
    b = Atom(BOTTOM_ATOM)
    return And(Cons(b), And(b, Neg(b)))


def map_leaves(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    if isinstance(f, (Atom, MetaVar)):
        return fn(f)
    if isinstance(f, Bottom):
        return f
    if isinstance(f, _Unary):
        return type(f)(map_leaves(f.arg, fn))
    if isinstance(f, _Indexed):
        return type(f)(map_leaves(f.arg, fn), f.n)
    return type(f)(map_leaves(f.left, fn), map_leaves(f.right, fn))


# ------------------------------------------------------------------ parsing

class ParseError(ValueError):
    """Syntax error at byte ``offset``; ``expected`` lists acceptable tokens."""

    def __init__(self, text: str, offset: int, expected: frozenset[str], found: str):
        self.text = text
        self.offset = offset
        self.expected = expected
        self.found = found
        exp = ", ".join(sorted(expected))
        super().__init__(f"syntax error at offset {offset}: found {found}, expected one of: {exp}")


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<bot>_\|_)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<dneg>=>)
  | (?P<atom>[a-z][a-z0-9_]*|_[a-z0-9_]+)
  | (?P<meta>[A-Z][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<sym>[~*&|()^\-])
""", re.VERBOSE)

_PREFIX = {"~": Neg, "o": Cons, "*": Incons, "-": StrongNeg, "=>": DotNeg}
_PRIMARY_START = frozenset({"atom", "metavariable", "'('", "'_|_'"})
_UNARY_START = frozenset({"'~'", "'o'", "'*'", "'-'", "'=>'"})


@dataclass
class _Tok:
    kind: str
    text: str
    offset: int

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


def _tokenize(text: str) -> list[_Tok]:
    raw = text.encode("utf-8")
    toks: list[_Tok] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            off = len(text[:pos].encode("utf-8"))
            raise ParseError(text, off, _PRIMARY_START | _UNARY_START, repr(text[pos]))
        kind = m.lastgroup
        val = m.group()
        off = len(text[:pos].encode("utf-8"))
        pos = m.end()
        if kind == "ws":
            continue
        if kind == "atom" and val == "o":
            toks.append(_Tok("op", "o", off))
        elif kind in ("sym", "imp", "iff", "dneg", "bot"):
            toks.append(_Tok("op", val, off))
        else:
            toks.append(_Tok(kind, val, off))
    toks.append(_Tok("eof", "", len(raw)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected: frozenset[str]) -> ParseError:
        t = self.peek()
        return ParseError(self.text, t.offset, expected, t.describe())

    def at(self, *ops: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text in ops

    def expect(self, op: str, also: frozenset[str] = frozenset()) -> None:
        if not self.at(op):
            raise self.fail(frozenset({repr(op)}) | also)
        self.take()

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek().kind != "eof":
            raise self.fail(frozenset({"'<->'", "'->'", "'|'", "'&'", "'^'", "end of input"}))
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.at("<->"):
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.at("->"):
            self.take()
            return Imp(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.peek()
        if t.kind == "op" and t.text in _PREFIX:
            self.take()
            return _PREFIX[t.text](self.unary())
        return self.postfix()

    def postfix(self) -> Formula:
        f = self.primary()
        while self.at("^"):
            self.take()
            if self.at("("):
                self.take()
                n = self.integer()
                self.expect(")")
                f = ConsPower(f, n)
            else:
                f = Power(f, self.integer())
        return f

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "int":
            raise self.fail(frozenset({"integer"}) | ({"'('"} if self.toks[self.i - 1].text == "^" else set()))
        self.take()
        return int(t.text)

    def primary(self) -> Formula:
        t = self.peek()
        if t.kind == "atom":
            self.take()
            return Atom(t.text)
        if t.kind == "meta":
            self.take()
            return MetaVar(t.text)
        if self.at("_|_"):
            self.take()
            return Bottom()
        if self.at("("):
            self.take()
            f = self.iff()
            self.expect(")", frozenset({"'<->'", "'->'", "'|'", "'&'", "'^'"}))
            return f
        raise self.fail(_PRIMARY_START | _UNARY_START)


def parse(text: str) -> Formula:
    """Parse the ASCII surface syntax.  Uppercase identifiers are metavariables."""
    return _Parser(text).parse()


# ---------------------------------------------------------------- rendering

_LEVEL = {Iff: 0, Imp: 1, Or: 2, And: 3}
_PREFIX_SYM = {Neg: "~", Cons: "o", Incons: "*", StrongNeg: "-", DotNeg: "=>"}
_BIN_SYM = {Iff: "<->", Imp: "->", Or: "|", And: "&"}
_UNARY_LEVEL = 4
_POSTFIX_LEVEL = 5
_ATOMIC_LEVEL = 6


def _level(f: Formula) -> int:
    t = type(f)
    if t in _LEVEL:
        return _LEVEL[t]
    if t in _PREFIX_SYM:
        return _UNARY_LEVEL
    if t in (Power, ConsPower):
        return _POSTFIX_LEVEL
    return _ATOMIC_LEVEL


def _wrap(f: Formula, min_level: int) -> str:
    s = render(f)
    return s if _level(f) >= min_level else f"({s})"


def render(f: Formula) -> str:
    """Print with the fewest parentheses that ``parse`` reads back identically."""
    t = type(f)
    if t in (Atom, MetaVar):
        return f.name  # type: ignore[union-attr]
    if t is Bottom:
        return "_|_"
    if t in _PREFIX_SYM:
        body = _wrap(f.arg, _UNARY_LEVEL)  # type: ignore[union-attr]
        sym = _PREFIX_SYM[t]
        if sym == "o" and (body[0].isalnum() or body[0] == "_"):
            return "o " + body
        return sym + body
    if t in (Power, ConsPower):
        body = _wrap(f.arg, _POSTFIX_LEVEL)  # type: ignore[union-attr]
        n = f.n  # type: ignore[union-attr]
        return f"{body}^{n}" if t is Power else f"{body}^({n})"
    lvl = _LEVEL[t]
    if t is Imp:
        left, right = _wrap(f.left, lvl + 1), _wrap(f.right, lvl)  # type: ignore[union-attr]
    else:
        left, right = _wrap(f.left, lvl), _wrap(f.right, lvl + 1)  # type: ignore[union-attr]
    return f"{left} {_BIN_SYM[t]} {right}"


# ------------------------------------------------------------ substitution

class MissingBindingError(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound metavariable {name}")

    def __str__(self) -> str:
        return self.args[0]


def instantiate(s: Schema, sigma: Substitution) -> Formula:
    """Replace every metavariable of ``s`` by its image under ``sigma``."""
    def leaf(v: Formula) -> Formula:
        if isinstance(v, MetaVar):
            try:
                return sigma[v.name]
            except KeyError:
                raise MissingBindingError(v.name) from None
        return v
    return map_leaves(s, leaf)


def match_schema(s: Schema, f: Formula) -> dict[str, Formula] | None:
    """The substitution ``sigma`` with ``instantiate(s, sigma) == f``, if any."""
    sigma: dict[str, Formula] = {}
    stack = [(s, f)]
    while stack:
        a, b = stack.pop()
        if isinstance(a, MetaVar):
            bound = sigma.get(a.name)
            if bound is None:
                sigma[a.name] = b
            elif bound != b:
                return None
            continue
        if type(a) is not type(b):
            return None
        if isinstance(a, Atom):
            if a.name != b.name:  # type: ignore[union-attr]
                return None
            continue
        if isinstance(a, _Indexed) and a.n != b.n:  # type: ignore[union-attr]
            return None
        stack.extend(zip(a.children(), b.children()))
    return sigma


# ------------------------------------------------------------ abbreviations

class AbbreviationError(ValueError):
    pass


@dataclass(frozen=True)
class AbbreviationPolicy:
    """How defined connectives unfold inside a given system.

    ``consistency``: whether the language has a consistency connective, so
    that strong negation, bottom and the power notations make sense.
    ``dc``: when set, ``oA`` unfolds to ``~(A & ~A)`` and ``*A`` to ``A & ~A``.
    ``cn``: when set to n, ``oA`` unfolds to ``A^(n)`` (the C_n hierarchy).
    """

    consistency: bool = True
    dc: bool = False
    cn: int | None = None


def _resolve_policy(system: str | AbbreviationPolicy | None, dc: bool) -> AbbreviationPolicy:
    if system is None:
        pol = AbbreviationPolicy()
    elif isinstance(system, AbbreviationPolicy):
        pol = system
    else:
        from .hilbert import get_system  # local import: hilbert depends on this module
        try:
            pol = get_system(system).policy
        except KeyError as exc:
            raise AbbreviationError(f"unknown system {system!r}") from exc
    if dc and not pol.dc:
        pol = AbbreviationPolicy(pol.consistency, True, pol.cn)
    return pol


def expand_abbreviations(
    f: Formula,
    system: str | AbbreviationPolicy | None = None,
    *,
    dc: bool = False,
    strict: bool = True,
) -> Formula:
    """Rewrite ``f`` into the seven primitive constructors.

    ``system`` names a Hilbert system (or passes a policy directly); it
    decides which abbreviations exist and whether consistency is itself a
    defined connective.  ``dc=True`` forces the dC unfolding of ``o``/``*``.
    With ``strict`` off, primitive ``o``/``*`` pass through even in a
    language without them (proof checking reports the rule instead).
    """
    pol = _resolve_policy(system, dc)
    name = system if isinstance(system, str) else "this system"
    memo: dict[Formula, Formula] = {}

    def cons_raw(g: Formula) -> Formula:
        # the primitive reading of o used as the "degree" operator
        return Neg(And(g, Neg(g))) if pol.dc else Cons(g)

    def cons(g: Formula) -> Formula:
        if pol.cn is not None:
            return cumulative(g, pol.cn)
        return cons_raw(g)

    def power(g: Formula, n: int) -> Formula:
        for _ in range(n):
            g = cons_raw(g)
        return g

    def cumulative(g: Formula, n: int) -> Formula:
        if n < 1:
            raise AbbreviationError("A^(n) needs n >= 1")
        return conjoin([power(g, k) for k in range(1, n + 1)])

    def need_consistency(sym: str) -> None:
        if not pol.consistency:
            raise AbbreviationError(f"unknown abbreviation {sym!r} for {name}")

    def bottom() -> Formula:
        b = Atom(BOTTOM_ATOM)
        return And(cons(b), And(b, Neg(b)))

    def go(g: Formula) -> Formula:
        hit = memo.get(g)
        if hit is not None:
            return hit
        t = type(g)
        if t in (Atom, MetaVar):
            out = g
        elif t is Neg:
            out = Neg(go(g.arg))
        elif t is Cons:
            out = cons(go(g.arg))
        elif t is Incons:
            a = go(g.arg)
            out = And(a, Neg(a)) if pol.dc else Incons(a)
        elif t in (And, Or, Imp):
            out = t(go(g.left), go(g.right))
        elif t is Iff:
            a, b = go(g.left), go(g.right)
            out = And(Imp(a, b), Imp(b, a))
        elif t is StrongNeg:
            need_consistency("-")
            a = go(g.arg)
            out = And(Neg(a), cons(a))
        elif t is DotNeg:
            need_consistency("=>")
            out = Imp(go(g.arg), bottom())
        elif t is Bottom:
            need_consistency("_|_")
            out = bottom()
        elif t is Power:
            need_consistency("^")
            out = power(go(g.arg), g.n)
        elif t is ConsPower:
            need_consistency("^()")
            out = cumulative(go(g.arg), g.n)
        else:  # pragma: no cover
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    if strict and not pol.consistency:
        for g in subformulas(f):
            if isinstance(g, (Cons, Incons)):
                raise AbbreviationError(f"connective {_PREFIX_SYM[type(g)]!r} not in the language of {name}")
    return go(f)
