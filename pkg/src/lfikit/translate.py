"""Recursive translations between logics and bounded conservativity checks.

A translation is given by one clause per constructor.  ``t1`` replaces
paraconsistent negation by the strong negation ``~A & oA``; ``t1e`` also
sends ``oA`` to ``o o t1(A)``.  ``t2-cons`` and ``t2-conj`` send atoms to
``o p`` and ``p & o p`` respectively and are otherwise homomorphic.
``p1embed`` realises the connectives of P1 inside any member of the 8K
family by double strong negation.

The hyperclassical synthesiser looks target tables up in the exact clones
of LFI1, which are closed once and cached.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .formula import (
    And, Atom, Cons, Formula, Imp, Incons, MetaVar, Neg, Or, Schema,
    expand_abbreviations, render, size,
)
from .matrices import (
    BINARY, MatrixLogic, _eval_many, clone_functions, truth_table,
)

__all__ = [
    "Translation", "TranslationError", "TRANSLATIONS", "get_translation",
    "apply_translation", "conservativity_check", "ConservativityVerdict",
    "consistency_premises_check", "define_hyperclassical", "HyperclassicalError",
    "source_formulas",
]


class TranslationError(ValueError):
    pass


class HyperclassicalError(ValueError):
    pass


def _sn(x: Formula) -> Formula:
    return And(Neg(x), Cons(x))


_BIN = (And, Or, Imp)


@dataclass(frozen=True)
class Translation:
    """``atom`` maps an atom; ``neg``/``cons``/``binary`` map translated children."""

    name: str
    atom: Callable[[Formula], Formula]
    neg: Callable[[Formula], Formula]
    binary: Callable[[type, Formula, Formula], Formula]
    cons: Callable[[Formula], Formula] | None = None
    description: str = ""

    @property
    def source_connectives(self) -> tuple[str, ...]:
        base = ("neg", "and", "or", "imp")
        return base + ("cons",) if self.cons is not None else base

    def __call__(self, f: Formula) -> Formula:
        return apply_translation(self, f)


def _homomorphic(node: type, a: Formula, b: Formula) -> Formula:
    return node(a, b)


def _double_sn(x: Formula) -> Formula:
    return _sn(_sn(x))


TRANSLATIONS: dict[str, Translation] = {
    "t1": Translation("t1", lambda p: p, _sn, _homomorphic,
                      description="atoms fixed, ~A to -t(A) = ~t(A) & o t(A)"),
    "t1e": Translation("t1e", lambda p: p, _sn, _homomorphic, cons=lambda x: Cons(Cons(x)),
                       description="t1 plus oA to o o t(A)"),
    "t2-cons": Translation("t2-cons", lambda p: Cons(p), Neg, _homomorphic, cons=Cons,
                           description="atoms p to o p, homomorphic elsewhere"),
    "t2-conj": Translation("t2-conj", lambda p: And(p, Cons(p)), Neg, _homomorphic, cons=Cons,
                           description="atoms p to p & o p, homomorphic elsewhere"),
    "p1embed": Translation("p1embed", lambda p: p, lambda x: _double_sn(Neg(x)),
                           lambda node, a, b: _double_sn(node(a, b)), cons=Cons,
                           description="P1's connectives as --(~A), --(A # B)"),
}


def get_translation(name: str | Translation) -> Translation:
    if isinstance(name, Translation):
        return name
    try:
        return TRANSLATIONS[name.strip().lower()]
    except KeyError:
        raise KeyError(f"unknown translation {name!r}; available: {', '.join(TRANSLATIONS)}") from None


def apply_translation(t: Translation | str, f: Formula) -> Formula:
    """Translate ``f``; abbreviations in ``f`` are expanded first."""
    t = get_translation(t)
    f = expand_abbreviations(f, strict=False)
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        hit = memo.get(g)
        if hit is not None:
            return hit
        ty = type(g)
        if ty in (Atom, MetaVar):
            out = t.atom(g)
        elif ty is Neg:
            out = t.neg(go(g.arg))
        elif ty is Cons:
            if t.cons is None:
                raise TranslationError(f"{t.name} is not defined on the consistency connective")
            out = t.cons(go(g.arg))
        elif ty is Incons:
            raise TranslationError(f"{t.name} is not defined on the inconsistency connective")
        elif ty in _BIN:
            out = t.binary(ty, go(g.left), go(g.right))
        else:  # pragma: no cover
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    return go(f)


# ------------------------------------------------------------ conservativity

_NODE = {"neg": Neg, "cons": Cons, "incons": Incons, "and": And, "or": Or, "imp": Imp}


def source_formulas(atoms: int, max_size: int, connectives: Sequence[str]) -> list[Formula]:
    """Every formula over the first ``atoms`` atoms with at most ``max_size`` nodes."""
    names = "pqrstuvw"
    if not 1 <= atoms <= len(names):
        raise ValueError(f"atoms must be between 1 and {len(names)}")
    un = [_NODE[c] for c in connectives if c not in BINARY]
    bi = [_NODE[c] for c in connectives if c in BINARY]
    by: dict[int, list[Formula]] = {1: [Atom(names[i]) for i in range(atoms)]}
    for s in range(2, max_size + 1):
        level = [u(f) for u in un for f in by[s - 1]]
        for ls in range(1, s - 1):
            for node in bi:
                level.extend(node(a, b) for a in by[ls] for b in by[s - 1 - ls])
        by[s] = level
    return [f for s in range(1, max_size + 1) for f in by[s]]


@dataclass
class ConservativityVerdict:
    translation: str
    source: str
    target: str
    atoms: int
    size: int
    ok: bool
    checked: int
    premises: list[str] | None = None
    conclusion: str | None = None
    source_holds: bool | None = None

    def as_dict(self) -> dict:
        d = {"translation": self.translation, "source": self.source, "target": self.target,
             "atoms": self.atoms, "size": self.size, "no_violation": self.ok,
             "checked": self.checked}
        if not self.ok:
            d["counterexample"] = {"premises": self.premises, "conclusion": self.conclusion,
                                   "holds_in_source": self.source_holds}
        return d


def _designation(L: MatrixLogic, fs: Sequence[Formula], vars_: Sequence[Formula]) -> np.ndarray:
    outs = _eval_many(L, [expand_abbreviations(f) for f in fs], vars_)
    return np.stack([L.designated_mask[o] for o in outs])


def _compare(src: np.ndarray, tgt: np.ndarray, max_premises: int):
    """First (premises, conclusion) where the two entailment relations differ.

    ``src``/``tgt`` are designation matrices (formulas x valuations).
    Premise sets run over all subsets of size at most ``max_premises``.
    """
    F = src.shape[0]
    checked = 0
    ns, nt = (~src).astype(np.int32).T, (~tgt).astype(np.int32).T
    sets: list[tuple[int, ...]] = [()]
    if max_premises >= 1:
        sets += [(i,) for i in range(F)]
    for size_ in range(2, max_premises + 1):
        sets += list(itertools.combinations(range(F), size_))
    chunk = 4096
    for c0 in range(0, len(sets), chunk):
        block = sets[c0:c0 + chunk]
        gs = np.ones((len(block), src.shape[1]), dtype=bool)
        gt = np.ones((len(block), tgt.shape[1]), dtype=bool)
        for k, prem in enumerate(block):
            for i in prem:
                gs[k] &= src[i]
                gt[k] &= tgt[i]
        es = (gs.astype(np.int32) @ ns) == 0
        et = (gt.astype(np.int32) @ nt) == 0
        checked += es.size
        diff = np.argwhere(es != et)
        if diff.size:
            k, a = diff[0]
            return checked, block[int(k)], int(a), bool(es[k, a])
    return checked, None, None, None


def conservativity_check(t: Translation | str, source: MatrixLogic, target: MatrixLogic,
                         atoms: int, size: int, max_premises: int = 2) -> ConservativityVerdict:
    """Bounded test of ``G |- A`` in source iff ``t[G] |- t(A)`` in target."""
    if atoms < 1 or size < 1:
        raise ValueError("bounds must be at least 1")
    t = get_translation(t)
    conns = [c for c in t.source_connectives if source.has(c)]
    fs = source_formulas(atoms, size, conns)
    vars_ = [Atom("pqrstuvw"[i]) for i in range(atoms)]
    src = _designation(source, fs, vars_)
    tgt = _designation(target, [apply_translation(t, f) for f in fs], vars_)
    checked, prem, concl, holds = _compare(src, tgt, max_premises)
    v = ConservativityVerdict(t.name, source.name, target.name, atoms, size, prem is None, checked)
    if prem is not None:
        v.premises = [render(fs[i]) for i in prem]
        v.conclusion = render(fs[concl])
        v.source_holds = holds
    return v


def consistency_premises_check(source: MatrixLogic, target: MatrixLogic, atoms: int, size: int,
                               max_premises: int = 2) -> ConservativityVerdict:
    """``G |- A`` in source iff ``o p1, ..., o pk, G |- A`` in target.

    The added premises assert consistency of every atom in range, which is
    the matrix-level reading of recovering classical inferences by
    consistency assumptions.
    """
    conns = [c for c in ("neg", "and", "or", "imp") if source.has(c)]
    fs = source_formulas(atoms, size, conns)
    vars_ = [Atom("pqrstuvw"[i]) for i in range(atoms)]
    src = _designation(source, fs, vars_)
    tgt = _designation(target, fs, vars_)
    cons = _designation(target, [Cons(v) for v in vars_], vars_).all(axis=0)
    # valuations where some atom is inconsistent never refute, so drop them
    tgt = tgt[:, cons]
    checked, prem, concl, holds = _compare(src, tgt, max_premises)
    v = ConservativityVerdict("consistent-atoms", source.name, target.name, atoms, size,
                              prem is None, checked)
    if prem is not None:
        v.premises = [render(fs[i]) for i in prem]
        v.conclusion = render(fs[concl])
        v.source_holds = holds
    return v


# ----------------------------------------------------------- hyperclassical

_CLASSICAL = {0: 0, 2: 2}  # LFI1 value indices for 1 and 0


@lru_cache(maxsize=2)
def _lfi1_clone(arity: int):
    from .registry import builtin
    L = builtin("lfi1")
    return L, clone_functions(L, arity)


def _normalise(table, L: MatrixLogic) -> tuple[int, tuple[int, ...]]:
    arr = np.asarray(table, dtype=object)
    if arr.ndim == 1 and arr.size == 3:
        arity = 1
    elif arr.shape == (3, 3):
        arity = 2
    else:
        raise HyperclassicalError("expected a unary table of 3 values or a 3x3 binary table")
    flat = []
    for x in arr.ravel():
        try:
            flat.append(L.index(x if isinstance(x, str) else int(x)))
        except (KeyError, ValueError, IndexError) as exc:
            raise HyperclassicalError(f"unknown value {x!r}") from exc
    return arity, tuple(flat)


def define_hyperclassical(table, *, values: Sequence[str] | None = None) -> Schema:
    """A term over LFI1's connectives computing ``table``.

    ``table`` holds labels (``"1"``, ``"1/2"``, ``"0"``) or value indices in
    LFI1's order, or is given over another three-valued order named by
    ``values``.  Classical inputs must give classical outputs.
    """
    L1, _ = _lfi1_clone(1)
    if values is not None:
        relabel = {v: L1.label(L1.index(v)) for v in values}
        table = np.vectorize(lambda x: relabel[values[x]] if not isinstance(x, str) else x,
                             otypes=[object])(np.asarray(table, dtype=object))
    arity, flat = _normalise(table, L1)
    grid = np.indices((3,) * arity).reshape(arity, -1).T
    for point, out in zip(grid, flat):
        if all(int(x) in _CLASSICAL for x in point) and out not in _CLASSICAL:
            raise HyperclassicalError(
                f"not hyperclassical: classical input {[L1.label(int(x)) for x in point]} "
                f"gives {L1.label(out)}")
    L, clone = _lfi1_clone(arity)
    term = clone.witness(flat)
    if term is None:  # pragma: no cover - the clone holds every hyperclassical function
        raise HyperclassicalError("table not in the clone of LFI1")
    vars_ = [MetaVar("A"), MetaVar("B")][:arity]
    got = tuple(int(x) for x in truth_table(L, term, vars_))
    if got != flat:  # pragma: no cover
        raise AssertionError(f"synthesised term {render(term)} computes {got}, not {flat}")
    return term
