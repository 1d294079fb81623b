"""The 8,192 three-valued logics obtained by freeing the non-classical cells.

A code is a 13-bit integer.  Bit 0 is the value of ``~(1/2)``; bits 1-3
are ``&`` at (1,1/2), (1/2,1), (1/2,1/2); bits 4-8 are ``|`` at (1,1/2),
(1/2,1), (1/2,1/2), (1/2,0), (0,1/2); bits 9-12 are ``->`` at (1,1/2),
(1/2,1), (1/2,1/2), (0,1/2).  A set bit means 1, a clear bit 1/2.

Most work here is done for all codes at once: a :class:`Family` stacks
the tables of many codes and evaluates a formula for every member in a
single pass.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .formula import (
    And, Atom, Cons, Formula, Imp, Incons, MetaVar, Neg, Or, Schema,
    expand_abbreviations, parse, render, variables,
)
from .matrices import MatrixLogic, _grid, clone_functions, is_valid, truth_table

__all__ = [
    "NCODES", "FREE_CELLS", "VALUES", "build_logic", "code_of", "Family",
    "census", "CensusReport", "separating_formula", "SearchBoundExhausted",
    "strong_negation_table", "signature_classes", "unary_clones",
]

NCODES = 1 << 13
VALUES = ("1", "1/2", "0")
ONE, HALF, ZERO = 0, 1, 2
DESIGNATED = frozenset({ONE, HALF})

FREE_CELLS: tuple[tuple[str, int, int], ...] = (
    ("neg", HALF, -1),
    ("and", ONE, HALF), ("and", HALF, ONE), ("and", HALF, HALF),
    ("or", ONE, HALF), ("or", HALF, ONE), ("or", HALF, HALF), ("or", HALF, ZERO), ("or", ZERO, HALF),
    ("imp", ONE, HALF), ("imp", HALF, ONE), ("imp", HALF, HALF), ("imp", ZERO, HALF),
)

# classical cells, and the fixed 0 cells of & and ->
_BASE = {
    "neg": np.array([ZERO, HALF, ONE]),
    "and": np.array([[ONE, HALF, ZERO], [HALF, HALF, ZERO], [ZERO, ZERO, ZERO]]),
    "or": np.array([[ONE, HALF, ONE], [HALF, HALF, HALF], [ONE, HALF, ZERO]]),
    "imp": np.array([[ONE, HALF, ZERO], [HALF, HALF, ZERO], [ONE, HALF, ONE]]),
}
CONS = np.array([ONE, ZERO, ONE])
INCONS = np.array([ZERO, ONE, ZERO])


class SearchBoundExhausted(RuntimeError):
    pass


def _check_code(code: int) -> int:
    if not isinstance(code, (int, np.integer)) or not 0 <= int(code) < NCODES:
        raise ValueError(f"8K code must be an integer in [0, {NCODES}), got {code!r}")
    return int(code)


def _stack(codes: np.ndarray) -> dict[str, np.ndarray]:
    codes = np.asarray(codes, dtype=np.int64)
    C = codes.size
    out = {k: np.broadcast_to(v, (C,) + v.shape).copy().astype(np.int8) for k, v in _BASE.items()}
    for bit, (conn, i, j) in enumerate(FREE_CELLS):
        val = np.where((codes >> bit) & 1, ONE, HALF).astype(np.int8)
        if conn == "neg":
            out[conn][:, i] = val
        else:
            out[conn][:, i, j] = val
    out["cons"] = np.broadcast_to(CONS, (C, 3)).astype(np.int8).copy()
    out["incons"] = np.broadcast_to(INCONS, (C, 3)).astype(np.int8).copy()
    return out


def build_logic(code: int) -> MatrixLogic:
    """The member of the family with the given code."""
    code = _check_code(code)
    t = _stack(np.array([code]))
    tables = {k: v[0].tolist() for k, v in t.items()}
    return MatrixLogic(f"8k:{code}", VALUES, DESIGNATED, tables)


def code_of(L: MatrixLogic) -> int | None:
    """The code whose tables agree with ``L`` on every free cell, if any.

    ``L`` must be three-valued with values ordered 1, 1/2, 0 and designated
    {1, 1/2}; fixed cells are checked too, so a non-member gives None.
    """
    if L.n != 3 or tuple(L.values) != VALUES or L.designated != DESIGNATED:
        return None
    code = 0
    for bit, (conn, i, j) in enumerate(FREE_CELLS):
        v = int(L.table(conn)[i] if conn == "neg" else L.table(conn)[i, j])
        if v not in (ONE, HALF):
            return None
        code |= (v == ONE) << bit
    ref = build_logic(code)
    for conn in ("neg", "and", "or", "imp"):
        if not np.array_equal(ref.table(conn), L.table(conn)):
            return None
    return code


# ------------------------------------------------------------------ family

_KEY = {Neg: "neg", Cons: "cons", Incons: "incons", And: "and", Or: "or", Imp: "imp"}


class Family:
    """Stacked tables of several codes, evaluated together.

    A formula in ``k`` variables evaluates to an int8 array of shape
    ``(len(codes), 3**k)`` with the usual valuation order (first variable
    most significant).
    """

    def __init__(self, codes: Iterable[int] | None = None):
        self.codes = np.arange(NCODES) if codes is None else np.asarray(list(codes), dtype=np.int64)
        self.tables = _stack(self.codes)
        C = self.codes.size
        self._rows = np.arange(C)[:, None]
        # flat binary tables: index by 9*row + 3*x + y
        self._flat = {k: v.reshape(C, -1) for k, v in self.tables.items()}

    def __len__(self) -> int:
        return int(self.codes.size)

    def apply(self, conn: str, *args: np.ndarray) -> np.ndarray:
        T = self._flat[conn]
        if len(args) == 1:
            return np.take_along_axis(T, args[0].astype(np.intp), axis=1)
        idx = args[0].astype(np.intp) * 3 + args[1]
        return np.take_along_axis(T, idx, axis=1)

    def evaluate(self, f: Formula, vars_: Sequence[Formula] | None = None) -> np.ndarray:
        f = expand_abbreviations(f)
        vs = variables(f) if vars_ is None else list(vars_)
        grid = _grid(3, len(vs)).astype(np.int8)
        C = len(self)
        memo: dict[Formula, np.ndarray] = {
            v: np.broadcast_to(grid[i], (C, grid.shape[1])) for i, v in enumerate(vs)}

        def go(g: Formula) -> np.ndarray:
            hit = memo.get(g)
            if hit is not None:
                return hit
            key = _KEY.get(type(g))
            if key is None:
                raise TypeError(f"unexpanded connective {type(g).__name__}")
            kids = [go(c) for c in g.children()]
            out = self.apply(key, *kids)
            memo[g] = out
            return out

        return go(f)

    def valid(self, s: Schema) -> np.ndarray:
        """Boolean per code: ``s`` designated at every valuation."""
        return (self.evaluate(s) != ZERO).all(axis=1)

    def rule_sound(self, premises: Sequence[Schema], conclusion: Schema) -> np.ndarray:
        fs = [expand_abbreviations(p) for p in premises] + [expand_abbreviations(conclusion)]
        vs = variables(*fs)
        outs = [self.evaluate(g, vs) for g in fs]
        bad = outs[-1] == ZERO
        for o in outs[:-1]:
            bad &= o != ZERO
        return ~bad.any(axis=1)

    def system_sound(self, system) -> np.ndarray:
        """Boolean per code: every rule of the system is sound."""
        from .hilbert import get_system
        S = get_system(system) if isinstance(system, str) else system
        ok = np.ones(len(self), dtype=bool)
        for r in S.rules:
            prem = [S.expand(p) for p in r.premises]
            ok &= self.rule_sound(prem, S.expand(r.conclusion))
        return ok

    def failing_rules(self, system) -> dict[str, np.ndarray]:
        from .hilbert import get_system
        S = get_system(system) if isinstance(system, str) else system
        out = {}
        for r in S.rules:
            ok = self.rule_sound([S.expand(p) for p in r.premises], S.expand(r.conclusion))
            if not ok.all():
                out[r.name] = self.codes[~ok]
        return out


@lru_cache(maxsize=1)
def _full() -> Family:
    return Family()


# ---------------------------------------------------------- unary clones

_UNARY_FNS = np.array(list(itertools.product(range(3), repeat=3)), dtype=np.int8)  # 27 x 3
_FN_ID = {tuple(int(x) for x in f): i for i, f in enumerate(_UNARY_FNS)}


def unary_clones(fam: Family, connectives: Sequence[str] = ("neg", "and", "or", "imp")) -> np.ndarray:
    """Membership matrix ``(codes, 27)`` of each code's unary clone.

    Unary functions are indexed by their value triple read in base 3.
    The closure runs for all codes together until no code gains a member.
    """
    C = len(fam)
    enc = np.array([9, 3, 1])
    comp = {}
    for conn in connectives:
        T = fam.tables[conn].astype(np.int64)
        if conn in ("neg", "cons", "incons"):
            # (C, 27): index of conn o f
            comp[conn] = (T[:, _UNARY_FNS] * enc).sum(axis=2)
        else:
            f = _UNARY_FNS[:, None, :]
            g = _UNARY_FNS[None, :, :]
            vals = T[:, f, g]  # (C, 27, 27, 3)
            comp[conn] = (vals * enc).sum(axis=3).reshape(C, -1)
    member = np.zeros((C, 27), dtype=bool)
    member[:, _FN_ID[(0, 1, 2)]] = True
    rows = np.arange(C)[:, None]
    while True:
        before = int(member.sum())
        for conn, R in comp.items():
            if R.shape[1] == 27:
                src = member
            else:
                src = (member[:, :, None] & member[:, None, :]).reshape(C, -1)
            hit = np.where(src, R, -1)
            r, c = np.nonzero(hit >= 0)
            member[r, hit[r, c]] = True
        if int(member.sum()) == before:
            return member


# ----------------------------------------------------------------- census

@dataclass
class CensusReport:
    """Counts and code lists for the five census criteria."""

    total: list[int]
    dc: list[int]
    cila_cons: list[int]
    cio: list[int]
    cio_cila: list[int]
    cia_all: bool = True
    extra: dict = field(default_factory=dict)

    EXPECTED = {"total": 8192, "dc": 7680, "cila_cons": 4096, "cio": 1680, "cio_cila": 980}

    @property
    def counts(self) -> dict[str, int]:
        return {k: len(getattr(self, k)) for k in self.EXPECTED}

    def discrepancies(self) -> dict[str, tuple[int, int]]:
        return {k: (v, self.EXPECTED[k]) for k, v in self.counts.items() if v != self.EXPECTED[k]}

    def as_dict(self, with_codes: bool = True) -> dict:
        d = {"counts": self.counts, "expected": dict(self.EXPECTED),
             "discrepancies": {k: {"got": g, "expected": e} for k, (g, e) in self.discrepancies().items()},
             "cia_all": self.cia_all}
        if with_codes:
            d["codes"] = {k: getattr(self, k) for k in self.EXPECTED if k != "total"}
        d.update(self.extra)
        return d


def census(parallel: int = 1) -> CensusReport:
    """Classify every code.

    (a) all codes; (b) dC: the consistency function lies in the unary clone
    of the other four connectives; (c) ``~(A & ~A)`` computes consistency;
    (d) every rule of Cio is sound; (e) codes in both (c) and (d).
    ``parallel`` is accepted for interface stability; the work is already
    vectorised over codes.
    """
    del parallel
    fam = _full()
    codes = fam.codes
    clones = unary_clones(fam)
    dc = clones[:, _FN_ID[tuple(CONS.tolist())]]
    cila = (fam.evaluate(parse("~(A & ~A)")) == CONS[None, :]).all(axis=1)
    cio = fam.system_sound("Cio")
    cia = fam.system_sound("Cia")
    return CensusReport(
        total=codes.tolist(),
        dc=codes[dc].tolist(),
        cila_cons=codes[cila].tolist(),
        cio=codes[cio].tolist(),
        cio_cila=codes[cio & cila].tolist(),
        cia_all=bool(cia.all()),
    )


# --------------------------------------------------------------- separation

_MV = (MetaVar("A"), MetaVar("B"))
_UN = (("neg", Neg), ("cons", Cons), ("incons", Incons))
_BI = (("and", And), ("or", Or), ("imp", Imp))


def _terms_by_size(fam: Family, bound: int, nvars: int = 2):
    """Yield ``(size, term, values)`` for distinct family functions in BFS order.

    ``values`` has shape ``(codes, 3**nvars)``.  Terms whose function over
    the whole family repeats an earlier one are dropped: substituting the
    earlier (no larger) term changes no validity anywhere.
    """
    C = len(fam)
    grid = _grid(3, nvars).astype(np.int8)
    seen: set[bytes] = set()
    by_size: dict[int, list[tuple[Schema, np.ndarray]]] = {}

    def fresh(arr: np.ndarray) -> bool:
        k = arr.tobytes()
        if k in seen:
            return False
        seen.add(k)
        return True

    for i in range(nvars):
        arr = np.ascontiguousarray(np.broadcast_to(grid[i], (C, grid.shape[1])))
        if fresh(arr):
            by_size.setdefault(1, []).append((_MV[i], arr))
            yield 1, _MV[i], arr
    for sz in range(2, bound + 1):
        level: list[tuple[Schema, np.ndarray]] = []
        for t, arr in by_size.get(sz - 1, []):
            for key, node in _UN:
                out = fam.apply(key, arr)
                if fresh(out):
                    level.append((node(t), out))
                    yield sz, node(t), out
        for lsz in range(1, sz - 1):
            for lt, la in by_size.get(lsz, []):
                for rt, ra in by_size.get(sz - 1 - lsz, []):
                    for key, node in _BI:
                        out = fam.apply(key, la, ra)
                        if fresh(out):
                            level.append((node(lt, rt), out))
                            yield sz, node(lt, rt), out
        if sz < bound:
            by_size[sz] = level


def separating_formula(c1: int, c2: int, bound: int = 7) -> Schema:
    """Smallest schema (in A, B) valid in exactly one of the two codes."""
    c1, c2 = _check_code(c1), _check_code(c2)
    if c1 == c2:
        raise ValueError("codes must differ")
    fam = Family([c1, c2])
    for _, term, vals in _terms_by_size(fam, bound):
        v = (vals != ZERO).all(axis=1)
        if v[0] != v[1]:
            return term
    raise SearchBoundExhausted(f"no separating schema of size <= {bound} for {c1}, {c2}")


def signature_classes(bound: int = 7, codes: Iterable[int] | None = None,
                      stop_when_separated: bool = True) -> dict:
    """Refine the codes by validity of every schema up to ``bound``.

    Returns the number of classes, the largest class and the number of
    schemas examined.  All pairs are separated exactly when every class is
    a singleton, which is checked without visiting the pairs one by one.
    """
    fam = Family(codes)
    C = len(fam)
    label = np.zeros(C, dtype=np.int64)
    examined = 0
    classes = 1
    for _, term, vals in _terms_by_size(fam, bound):
        examined += 1
        v = (vals != ZERO).all(axis=1)
        if v.all() or not v.any():
            continue
        label = label * 2 + v
        _, label = np.unique(label, return_inverse=True)
        classes = int(label.max()) + 1
        if stop_when_separated and classes == C:
            break
    sizes = np.bincount(label)
    return {"codes": C, "classes": classes, "largest_class": int(sizes.max()),
            "schemas_examined": examined, "all_separated": classes == C}


# ---------------------------------------------------------- strong negation

SN_TABLE = (ZERO, ZERO, ONE)


def strong_negation_table(code: int) -> dict:
    """The classical negation of the family with its witness terms checked.

    Returns the table (as labels), the witness ``~A & oA`` (primitive ``~``
    here is the paraconsistent one), the alternative ``A -> bottom`` with
    bottom ``oB & ~oB``, and the validity of ``o~A``.
    """
    L = build_logic(code)
    w1 = parse("~A & o A")
    w2 = parse("A -> (o A & ~o A)")
    t1 = tuple(int(x) for x in truth_table(L, w1, [MetaVar("A")]))
    t2 = tuple(int(x) for x in truth_table(L, w2, [MetaVar("A")]))
    if t1 != SN_TABLE or t2 != SN_TABLE:
        raise AssertionError(f"code {code}: strong negation witnesses disagree ({t1}, {t2})")
    return {
        "code": int(code),
        "table": {VALUES[i]: VALUES[v] for i, v in enumerate(SN_TABLE)},
        "witness": render(w1),
        "alternative": render(w2),
        "cons_of_strong_neg_valid": is_valid(L, parse("o -A")),
    }


def strong_negations_in_clone(code: int) -> list[tuple[int, ...]]:
    """Unary clone members that behave as a strong negation.

    Strong here means: never designated together with their argument and
    not a bottom.
    """
    L = build_logic(code)
    out = []
    for fn in clone_functions(L, 1):
        des = [x != ZERO for x in fn]
        if any(des[i] and i != ZERO for i in range(3)):
            continue  # designated on a designated input: A, f(A) not explosive
        if not any(des):
            continue  # bottom
        out.append(fn)
    return out
