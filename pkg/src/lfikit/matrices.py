"""Finite logical matrices and decision procedures over them.

Evaluation is vectorised: a formula in k variables over an n-valued matrix
is computed at all n**k valuations at once, as a flat integer array whose
index encodes the valuation with the first variable most significant.  The
same flat layout is used for truth functions in clones, so the binary
function of a table ``T`` is ``T.ravel()``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formula import (
    And, Atom, Cons, Formula, Imp, Incons, MetaVar, Neg, Or, Schema,
    expand_abbreviations, instantiate, is_primitive, parse, render, variables,
)
from .formula import _Node

__all__ = [
    "MatrixLogic", "MatrixError", "MissingTableError", "MissingAtomError",
    "DomainTooLargeError", "CloneSet", "ExplosionProfile", "UNARY", "BINARY",
    "CONNECTIVES", "connective_of", "Valuation",
    "truth_table", "evaluate", "is_valid", "entails", "find_countermodel",
    "rule_sound", "clone_functions", "bounded_terms", "classify_explosion",
]

UNARY = ("neg", "cons", "incons")
BINARY = ("and", "or", "imp")
CONNECTIVES = UNARY + BINARY
REQUIRED = ("neg", "and", "or", "imp")

_NODE_OF = {"neg": Neg, "cons": Cons, "incons": Incons, "and": And, "or": Or, "imp": Imp}
_KEY_OF = {v: k for k, v in _NODE_OF.items()}

Valuation = dict[str, int]


def connective_of(node_type: type) -> str:
    return _KEY_OF[node_type]


class MatrixError(ValueError):
    pass


class MissingTableError(KeyError):
    def __init__(self, logic: str, conn: str):
        self.logic = logic
        self.connective = conn
        super().__init__(f"matrix {logic!r} has no table for {conn!r}")

    def __str__(self) -> str:
        return self.args[0]


class MissingAtomError(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"valuation does not assign atom {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class DomainTooLargeError(ValueError):
    pass


def _freeze_table(conn: str, table, n: int) -> tuple:
    arr = np.asarray(table)
    if conn in UNARY:
        if arr.shape != (n,):
            raise MatrixError("table size mismatch")
        out = tuple(int(x) for x in arr)
    else:
        if arr.shape != (n, n):
            raise MatrixError("table size mismatch")
        out = tuple(tuple(int(x) for x in row) for row in arr)
    flat = arr.ravel()
    if flat.size and (flat.min() < 0 or flat.max() >= n):
        raise MatrixError(f"table {conn!r} has an entry outside the value range")
    return out


@dataclass(frozen=True, eq=False)
class MatrixLogic:
    """A finite matrix: value labels, designated indices and truth tables.

    Tables map connective keys (``neg``, ``cons``, ``incons``, ``and``,
    ``or``, ``imp``) to tuples of value indices; binary tables are indexed
    ``table[left][right]``.
    """

    name: str
    values: tuple[str, ...]
    designated: frozenset[int]
    tables: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self) -> None:
        vals = tuple(str(v) for v in self.values)
        n = len(vals)
        if n < 2:
            raise MatrixError("a matrix needs at least two values")
        if len(set(vals)) != n:
            raise MatrixError("duplicate value labels")
        des = frozenset(int(d) for d in self.designated)
        if any(not 0 <= d < n for d in des):
            raise MatrixError("designated out of range")
        if not des or len(des) == n:
            raise MatrixError("designated set must be nonempty and proper")
        tabs = {}
        for conn, table in dict(self.tables).items():
            if conn not in CONNECTIVES:
                raise MatrixError(f"unknown connective {conn!r}")
            tabs[conn] = _freeze_table(conn, table, n)
        for conn in REQUIRED:
            if conn not in tabs:
                raise MatrixError(f"missing required table {conn!r}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "designated", des)
        object.__setattr__(self, "tables", {k: tabs[k] for k in CONNECTIVES if k in tabs})

    # identity is the table content; the name is cosmetic
    def fingerprint(self) -> tuple:
        return (self.values, tuple(sorted(self.designated)), tuple(sorted(self.tables.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixLogic):
            return NotImplemented
        return self.name == other.name and self.fingerprint() == other.fingerprint()

    def same_tables(self, other: "MatrixLogic", connectives: Iterable[str] | None = None) -> bool:
        conns = CONNECTIVES if connectives is None else tuple(connectives)
        if len(self.values) != len(other.values) or self.designated != other.designated:
            return False
        return all(self.tables.get(c) == other.tables.get(c) for c in conns)

    def __hash__(self) -> int:
        return hash(self.fingerprint())

    @property
    def n(self) -> int:
        return len(self.values)

    def has(self, conn: str) -> bool:
        return conn in self.tables

    def index(self, label: str | int) -> int:
        if isinstance(label, int):
            if not 0 <= label < self.n:
                raise MatrixError(f"value index {label} out of range")
            return label
        label = str(label).strip()
        if label in self.values:
            return self.values.index(label)
        aliases = {"½": "1/2", "⅔": "2/3", "⅓": "1/3"}
        alt = aliases.get(label)
        if alt in self.values:
            return self.values.index(alt)
        raise MatrixError(f"unknown value {label!r} for {self.name}; values are {list(self.values)}")

    def label(self, i: int) -> str:
        return self.values[i]

    def is_designated(self, i: int) -> bool:
        return i in self.designated

    @cached_property
    def designated_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(self.designated)] = True
        return mask

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        return {k: np.asarray(v, dtype=np.int16 if self.n > 127 else np.int8) for k, v in self.tables.items()}

    def table(self, conn: str) -> np.ndarray:
        try:
            return self.arrays[conn]
        except KeyError:
            raise MissingTableError(self.name, conn) from None

    def with_tables(self, name: str | None = None, **tables) -> "MatrixLogic":
        """Copy with some tables replaced (``None`` removes a table)."""
        merged = dict(self.tables)
        for k, v in tables.items():
            if v is None:
                merged.pop(k, None)
            else:
                merged[k] = v
        return MatrixLogic(name or self.name, self.values, self.designated, merged)

    def restrict(self, connectives: Iterable[str], name: str | None = None) -> "MatrixLogic":
        keep = set(connectives)
        return MatrixLogic(name or self.name, self.values, self.designated,
                           {k: v for k, v in self.tables.items() if k in keep})

    def __repr__(self) -> str:
        return f"MatrixLogic({self.name!r}, values={list(self.values)}, designated={sorted(self.designated)})"


# ----------------------------------------------------------------- evaluation

def _prepare(f: Formula) -> Formula:
    return f if is_primitive(f) else expand_abbreviations(f)


def _grid(n: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((0, 1), dtype=np.int64)
    return np.indices((n,) * k).reshape(k, -1)


def _eval_many(L: MatrixLogic, fs: Sequence[Formula], vars_: Sequence[Formula],
               grid: np.ndarray | None = None) -> list[np.ndarray]:
    n = L.n
    if grid is None:
        grid = _grid(n, len(vars_))
    dtype = L.table(REQUIRED[0]).dtype
    width = grid.shape[1]
    memo: dict[Formula, np.ndarray] = {
        v: grid[i].astype(dtype) for i, v in enumerate(vars_)
    }

    def go(g: Formula) -> np.ndarray:
        hit = memo.get(g)
        if hit is not None:
            return hit
        t = type(g)
        if t in (Atom, MetaVar):
            raise MissingAtomError(g.name)
        key = _KEY_OF.get(t)
        if key is None:
            raise TypeError(f"unexpanded connective {t.__name__}")
        T = L.table(key)
        if key in UNARY:
            out = T[go(g.arg)]
        else:
            out = T[go(g.left), go(g.right)]
        memo[g] = out
        return out

    res = []
    for f in fs:
        out = go(f)
        if out.shape[0] != width:  # constant could only arise with no variables
            out = np.broadcast_to(out, (width,))
        res.append(out)
    return res


def truth_table(L: MatrixLogic, f: Formula, vars_: Sequence[Formula] | None = None) -> np.ndarray:
    """Values of ``f`` at every valuation of ``vars_`` (default: its own leaves)."""
    f = _prepare(f)
    vs = variables(f) if vars_ is None else list(vars_)
    return _eval_many(L, [f], vs)[0]


def evaluate(L: MatrixLogic, f: Formula, v: Mapping[str, int | str]) -> int:
    """Value index of ``f`` under valuation ``v`` (atom or metavariable name -> value)."""
    f = _prepare(f)
    vs = variables(f)
    point = []
    for var in vs:
        if var.name not in v:
            raise MissingAtomError(var.name)
        point.append(L.index(v[var.name]))
    grid = np.asarray(point, dtype=np.int64).reshape(len(vs), 1)
    return int(_eval_many(L, [f], vs, grid)[0][0])


def is_valid(L: MatrixLogic, s: Schema) -> bool:
    """Every assignment to the variables of ``s`` yields a designated value."""
    return bool(L.designated_mask[truth_table(L, s)].all())


def _counter_mask(L: MatrixLogic, premises: Sequence[Formula], conclusion: Formula):
    fs = [_prepare(p) for p in premises] + [_prepare(conclusion)]
    vs = variables(*fs)
    outs = _eval_many(L, fs, vs)
    mask = L.designated_mask
    ok = np.ones(outs[-1].shape[0], dtype=bool)
    for out in outs[:-1]:
        ok &= mask[out]
    return ok & ~mask[outs[-1]], vs


def entails(L: MatrixLogic, premises: Sequence[Formula], conclusion: Formula) -> bool:
    bad, _ = _counter_mask(L, premises, conclusion)
    return not bool(bad.any())


def find_countermodel(L: MatrixLogic, premises: Sequence[Formula], conclusion: Formula) -> Valuation | None:
    """First valuation (lexicographic in variable order) refuting the entailment."""
    bad, vs = _counter_mask(L, premises, conclusion)
    hits = np.flatnonzero(bad)
    if hits.size == 0:
        return None
    idx = int(hits[0])
    n = L.n
    digits = []
    for _ in vs:
        digits.append(idx % n)
        idx //= n
    digits.reverse()
    return {v.name: d for v, d in zip(vs, digits)}


def rule_sound(L: MatrixLogic, premises: Sequence[Schema], conclusion: Schema) -> bool:
    """Schematic rule preserves designation under every assignment."""
    return entails(L, premises, conclusion)


# --------------------------------------------------------------------- clones

_A, _B = MetaVar("A"), MetaVar("B")


@dataclass
class CloneSet:
    """Truth functions of one arity, each with a witnessing term.

    Functions are flat tuples over the ``n**arity`` inputs (first argument
    most significant).  ``exact`` distinguishes a closed clone from the
    lower approximation produced by :func:`bounded_terms`.
    """

    arity: int
    n: int
    witnesses: dict[tuple[int, ...], Schema]
    exact: bool
    bound: int | None = None

    def __contains__(self, fn) -> bool:
        return tuple(int(x) for x in np.asarray(fn).ravel()) in self.witnesses

    def __len__(self) -> int:
        return len(self.witnesses)

    def __iter__(self):
        return iter(self.witnesses)

    def functions(self) -> set[tuple[int, ...]]:
        return set(self.witnesses)

    def witness(self, fn) -> Schema | None:
        return self.witnesses.get(tuple(int(x) for x in np.asarray(fn).ravel()))

    def items(self):
        return self.witnesses.items()


def _connective_list(L: MatrixLogic, connectives: Iterable[str] | None) -> tuple[list, list]:
    conns = [c for c in CONNECTIVES if c in L.tables] if connectives is None else list(connectives)
    unary, binary = [], []
    for c in conns:
        T = L.table(c).astype(np.int64)
        (unary if c in UNARY else binary).append((_NODE_OF[c], T))
    return unary, binary


def _projections(n: int, arity: int) -> list[tuple[np.ndarray, Schema]]:
    g = _grid(n, arity)
    return [(g[i].astype(np.int64), v) for i, v in enumerate([_A, _B][:arity])]


def _encoder(n: int, width: int) -> np.ndarray:
    if width * np.log2(max(n, 2)) > 62:
        raise DomainTooLargeError("truth functions too wide to encode")
    return n ** np.arange(width, dtype=np.int64)



class _FreshFilter:
    """Vectorised "key not seen yet" test against a fixed set of keys."""

    def __init__(self, known: list[int], space: int):
        if space <= 1 << 25:
            self.table = np.zeros(space, dtype=bool)
            self.table[np.asarray(known, dtype=np.int64)] = True
            self.sorted = None
        else:
            self.table = None
            self.sorted = np.sort(np.asarray(known, dtype=np.int64))

    def __call__(self, keys: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return ~self.table[keys]
        pos = np.searchsorted(self.sorted, keys)
        pos[pos == self.sorted.size] = 0
        return self.sorted[pos] != keys


class _Packer:
    """Packs truth functions into a few small digit groups.

    Composing two functions with a binary table then costs one lookup per
    group in a precomputed pair table instead of one per input point.
    """

    def __init__(self, n: int, width: int):
        self.n = n
        self.width = width
        g = 1
        while n ** (g + 1) <= 64 and g + 1 <= width:
            g += 1
        self.groups = [(s, min(s + g, width)) for s in range(0, width, g)]
        self.base = n ** g
        self.gpow = [n ** s for s, _ in self.groups]
        self._pairs: dict[int, np.ndarray] = {}

    def pack(self, F: np.ndarray) -> np.ndarray:
        out = np.empty((F.shape[0], len(self.groups)), dtype=np.int64)
        for k, (s, e) in enumerate(self.groups):
            out[:, k] = F[:, s:e] @ (self.n ** np.arange(e - s, dtype=np.int64))
        return out

    def pair_table(self, T: np.ndarray) -> list[np.ndarray]:
        tables = []
        n = self.n
        for s, e in self.groups:
            g = e - s
            codes = np.arange(n ** g)
            digits = (codes[:, None] // (n ** np.arange(g))) % n  # (n^g, g)
            out = T[digits[:, None, :], digits[None, :, :]]  # (n^g, n^g, g)
            tables.append((out @ (n ** np.arange(g, dtype=np.int64))).ravel().astype(np.int64))
        return tables

    def compose(self, pair: list[np.ndarray], lg: np.ndarray, rg: np.ndarray) -> np.ndarray:
        keys = np.zeros((lg.shape[0], rg.shape[0]), dtype=np.int64)
        for k, (s, e) in enumerate(self.groups):
            size = self.n ** (e - s)
            keys += pair[k][lg[:, k][:, None] * size + rg[:, k][None, :]] * self.gpow[k]
        return keys


def clone_functions(
    L: MatrixLogic,
    arity: int,
    connectives: Iterable[str] | None = None,
    *,
    limit: int = 3_000_000,
) -> CloneSet:
    """Exact closure of the projections under the chosen connectives.

    Breadth-first by composition depth; every new function is recorded
    with the term that first produced it.
    """
    if arity not in (1, 2):
        raise ValueError("arity must be 1 or 2")
    n = L.n
    if n > 4:
        raise DomainTooLargeError(
            f"{L.name} has {n} values; exact clones are limited to 4, use bounded_terms")
    unary, binary = _connective_list(L, connectives)
    width = n ** arity
    enc = _encoder(n, width)
    packer = _Packer(n, width)

    known_keys: dict[int, int] = {}
    funcs: list[np.ndarray] = []
    terms: list[Schema] = []

    def add(arr: np.ndarray, term: Schema) -> bool:
        key = int(arr @ enc)
        if key in known_keys:
            return False
        known_keys[key] = len(funcs)
        funcs.append(arr)
        terms.append(term)
        return True

    for arr, term in _projections(n, arity):
        add(arr, term)
    frontier = list(range(len(funcs)))

    while frontier:
        start = len(funcs)
        front = np.stack([funcs[i] for i in frontier])
        fidx = np.asarray(frontier)
        for node, T in unary:
            out = T[front]
            keys = out @ enc
            for j in range(len(frontier)):
                if int(keys[j]) not in known_keys:
                    add(out[j], node(terms[frontier[j]]))
        everything = np.stack(funcs[:start])
        fresh_of = _FreshFilter(list(known_keys), n ** width)
        # candidate rows: key, binary op index, left index, right index
        cands: list[np.ndarray] = []
        for oi, (node, T) in enumerate(binary):
            pair = packer.pair_table(T)
            for left_is_front in (True, False):
                lhs_all = front if left_is_front else everything
                rhs_all = everything if left_is_front else front
                lg, rg = packer.pack(lhs_all), packer.pack(rhs_all)
                m = rhs_all.shape[0]
                chunk = max(1, 2_000_000 // m)
                for c0 in range(0, lhs_all.shape[0], chunk):
                    keys = packer.compose(pair, lg[c0:c0 + chunk], rg).ravel()
                    pos = np.flatnonzero(fresh_of(keys))
                    if pos.size == 0:
                        continue
                    uniq, first = np.unique(keys[pos], return_index=True)
                    first = pos[first]
                    i, j = np.divmod(first, m)
                    li = fidx[c0 + i] if left_is_front else c0 + i
                    rj = j if left_is_front else fidx[j]
                    cands.append(np.stack([uniq, np.full(uniq.size, oi), li, rj], axis=1))
        if cands:
            allc = np.concatenate(cands)
            _, first = np.unique(allc[:, 0], return_index=True)
            for key, oi, li, rj in allc[np.sort(first)].tolist():
                if key in known_keys:
                    continue
                node, T = binary[oi]
                add(T[funcs[li], funcs[rj]], node(terms[li], terms[rj]))
                if len(funcs) > limit:
                    raise DomainTooLargeError(f"clone of {L.name} exceeds {limit} functions")
        frontier = list(range(start, len(funcs)))

    witnesses = {tuple(int(x) for x in f): t for f, t in zip(funcs, terms)}
    return CloneSet(arity, n, witnesses, exact=True)


def bounded_terms(
    L: MatrixLogic,
    arity: int,
    max_size: int,
    connectives: Iterable[str] | None = None,
) -> CloneSet:
    """Truth functions of all terms with at most ``max_size`` nodes.

    Terms are built by size; only the smallest term per function is kept
    as a building block, which loses nothing because substituting a
    smaller equivalent subterm never increases size.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    if arity not in (1, 2):
        raise ValueError("arity must be 1 or 2")
    n = L.n
    unary, binary = _connective_list(L, connectives)
    width = n ** arity
    # rows are keyed by their bytes, so any width works
    row = np.dtype((np.void, width))
    seen: dict[bytes, tuple[np.ndarray, Schema]] = {}
    by_size: dict[int, list[bytes]] = {}

    def add(sz: int, arr: np.ndarray, term: Schema) -> None:
        key = arr.astype(np.uint8).tobytes()
        if key not in seen:
            seen[key] = (arr, term)
            by_size.setdefault(sz, []).append(key)

    for arr, term in _projections(n, arity):
        add(1, arr, term)
    for sz in range(2, max_size + 1):
        for key in list(by_size.get(sz - 1, [])):
            arr, term = seen[key]
            for node, T in unary:
                add(sz, T[arr], node(term))
        for lsz in range(1, sz - 1):
            rsz = sz - 1 - lsz
            lk, rk = by_size.get(lsz, []), by_size.get(rsz, [])
            if not lk or not rk:
                continue
            la = np.stack([seen[k][0] for k in lk])
            ra = np.stack([seen[k][0] for k in rk])
            for node, T in binary:
                out = T[la[:, None, :], ra[None, :, :]].reshape(-1, width)
                rows = np.ascontiguousarray(out.astype(np.uint8)).view(row).ravel()
                _, first = np.unique(rows, return_index=True)
                for pos in np.sort(first).tolist():
                    if out[pos].astype(np.uint8).tobytes() in seen:
                        continue
                    i, j = divmod(pos, len(rk))
                    add(sz, out[pos], node(seen[lk[i]][1], seen[rk[j]][1]))
    witnesses = {tuple(int(x) for x in arr): term for arr, term in seen.values()}
    return CloneSet(arity, n, witnesses, exact=False, bound=max_size)


# ----------------------------------------------------------------- explosion

@dataclass
class ExplosionProfile:
    """Matrix-level reading of the explosion principles.

    Witness fields hold unary schemas in ``A``; ``pps_bound`` records the
    term-size bound of the partial-explosion search (``None``: exact clone).
    """

    logic: str
    explosive: bool
    paraconsistent: bool
    has_bottom: bool
    bottom_witness: Schema | None
    has_strong_negation: bool
    strong_negation_witness: Schema | None
    gently_explosive: bool
    gentle_witness: Schema | None
    controllably_explosive: bool
    controllable_witness: Schema | None
    partially_explosive_bounded: bool
    partial_witness: Schema | None
    pps_bound: int | None
    clone_exact: bool
    clone_size: int

    def as_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            out[k] = render(v) if isinstance(v, _Node) else v
        return out


def _unary_fn(L: MatrixLogic, term: Schema) -> np.ndarray | None:
    try:
        return truth_table(L, term, [_A])
    except MissingTableError:
        return None


def _is_bottom(L, f) -> bool:
    return not L.designated_mask[f].any()


def _is_strong_negation(L, f) -> bool:
    m = L.designated_mask
    return not _is_bottom(L, f) and not (m & m[f]).any()


def _is_gentle(L, f) -> bool:
    m = L.designated_mask
    x = np.arange(L.n)
    neg = L.table("neg")[x]
    return (not (m & m[neg] & m[f]).any()) and bool((m & m[f]).any()) and bool((m[neg] & m[f]).any())


def _is_controllable(L, f) -> bool:
    m = L.designated_mask
    nf = L.table("neg")[f]
    return (not (m[f] & m[nf]).any()) and not _is_bottom(L, f) and not _is_bottom(L, nf)


_PREFERRED = {
    "bottom": ["oA & (A & ~A)", "A & ~A", "~A & A"],
    "strong": ["~A & oA", "oA & ~A", "~A"],
    "gentle": ["oA", "~*A"],
    "controllable": ["oA", "*A"],
}


def _search(L: MatrixLogic, clone: CloneSet, kind: str, pred) -> Schema | None:
    for text in _PREFERRED[kind]:
        term = parse(text)
        f = _unary_fn(L, term)
        if f is not None and pred(L, f):
            return term
    for fn, term in clone.items():
        if pred(L, np.asarray(fn)):
            return term
    return None


def classify_explosion(L: MatrixLogic, bound: int | None = None) -> ExplosionProfile:
    """Flags and witness terms for the explosion principles of ``L``.

    The unary clone is exact for up to four values; larger matrices need
    ``bound`` and are explored with :func:`bounded_terms`.
    """
    if L.n <= 4:
        clone = clone_functions(L, 1)
    elif bound is None:
        raise DomainTooLargeError(f"{L.name} has {L.n} values; pass a term-size bound")
    else:
        clone = bounded_terms(L, 1, bound)
    m = L.designated_mask
    x = np.arange(L.n)
    neg = L.table("neg")[x]
    glutty = bool((m & m[neg]).any())
    explosive = not glutty
    paraconsistent = glutty and not m.all()

    bottom = _search(L, clone, "bottom", _is_bottom)
    strong = _search(L, clone, "strong", _is_strong_negation)
    gentle = _search(L, clone, "gentle", _is_gentle)
    ctrl = _search(L, clone, "controllable", _is_controllable)

    # {A, ~A} |= sigma(C) for fresh C: when some value is a glut only tops qualify
    partial = None
    if explosive:
        for fn, term in clone.items():
            if not m[np.asarray(fn)].all():
                partial = term
                break
    return ExplosionProfile(
        logic=L.name,
        explosive=explosive,
        paraconsistent=paraconsistent,
        has_bottom=bottom is not None,
        bottom_witness=bottom,
        has_strong_negation=strong is not None,
        strong_negation_witness=strong,
        gently_explosive=gentle is not None,
        gentle_witness=gentle,
        controllably_explosive=ctrl is not None,
        controllable_witness=ctrl,
        partially_explosive_bounded=partial is not None,
        partial_witness=partial,
        pps_bound=None if clone.exact else bound,
        clone_exact=clone.exact,
        clone_size=len(clone),
    )


def verify_profile(L: MatrixLogic, prof: ExplosionProfile) -> bool:
    """Re-check every witness in ``prof`` by exhaustive evaluation."""
    checks = [
        (prof.bottom_witness, _is_bottom),
        (prof.strong_negation_witness, _is_strong_negation),
        (prof.gentle_witness, _is_gentle),
        (prof.controllable_witness, _is_controllable),
    ]
    for term, pred in checks:
        if term is not None and not pred(L, truth_table(L, term, [_A])):
            return False
    if prof.partial_witness is not None:
        C = MetaVar("C")
        sigma = expand_abbreviations(prof.partial_witness)
        if not entails(L, [_A, Neg(_A)], instantiate(sigma, {"A": C})):
            return False
    return True


def all_valuations(L: MatrixLogic, names: Sequence[str]):
    for combo in itertools.product(range(L.n), repeat=len(names)):
        yield dict(zip(names, combo))
