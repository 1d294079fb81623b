"""Congruences of finite matrices and the finite algebraizability checks.

A congruence is stored as its class-representative vector: entry ``x`` is
the smallest value index in the class of ``x``.  Partitions are generated
as restricted growth strings, so every partition appears exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .formula import MetaVar, Schema, instantiate, parse, render
from .matrices import (
    BINARY, UNARY, DomainTooLargeError, MatrixError, MatrixLogic, bounded_terms,
    truth_table,
)

__all__ = [
    "Congruence", "enumerate_congruences", "is_congruence",
    "congruence_connective_check", "relation_of", "blok_pigozzi_check",
    "blok_pigozzi_search", "lattice_order", "lattice_filters",
    "leibniz_verdict", "NotALatticeError", "MAX_VALUES",
]

MAX_VALUES = 8
_A, _B = MetaVar("A"), MetaVar("B")


class NotALatticeError(MatrixError):
    pass


@dataclass(frozen=True)
class Congruence:
    reps: tuple[int, ...]

    @property
    def classes(self) -> list[tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self.reps):
            out.setdefault(r, []).append(x)
        return [tuple(v) for v in out.values()]

    @property
    def is_identity(self) -> bool:
        return all(r == x for x, r in enumerate(self.reps))

    def related(self, x: int, y: int) -> bool:
        return self.reps[x] == self.reps[y]

    def labels(self, L: MatrixLogic) -> list[list[str]]:
        return [[L.label(x) for x in c] for c in self.classes]


def _partitions(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length ``n``."""
    if n == 0:
        yield []
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield list(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    a[0] = 0
    yield from rec(1, 0)


def _canonical(labels: Sequence[int]) -> tuple[int, ...]:
    first: dict[int, int] = {}
    for x, l in enumerate(labels):
        first.setdefault(int(l), x)
    return tuple(first[int(l)] for l in labels)


def is_congruence(L: MatrixLogic, labels: Sequence[int], designated_compatible: bool = False) -> bool:
    """Whether the partition given by ``labels`` is compatible with every table."""
    p = np.asarray(labels)
    same = p[:, None] == p[None, :]
    for conn, T in L.arrays.items():
        img = p[T]
        if conn in UNARY:
            if (same & (img[:, None] != img[None, :])).any():
                return False
        else:
            # related rows must give related images column by column, and likewise columns
            rows = (img[:, None, :] != img[None, :, :]).any(axis=2)
            cols = (img[:, :, None] != img[:, None, :]).any(axis=0)
            if (same & rows).any() or (same & cols).any():
                return False
    if designated_compatible:
        d = L.designated_mask
        if (same & (d[:, None] != d[None, :])).any():
            return False
    return True


def enumerate_congruences(L: MatrixLogic, designated_compatible: bool = False) -> list[Congruence]:
    """All congruences of the matrix's algebra, identity first."""
    if L.n > MAX_VALUES:
        raise DomainTooLargeError(f"{L.name} has {L.n} values; congruence enumeration stops at {MAX_VALUES}")
    out = []
    for labels in _partitions(L.n):
        if is_congruence(L, labels, designated_compatible):
            out.append(Congruence(_canonical(labels)))
    out.sort(key=lambda c: (-len(c.classes), c.reps))
    return out


def relation_of(L: MatrixLogic, e: Schema) -> np.ndarray:
    """Boolean matrix: ``e(x, y)`` designated, with A taking x and B taking y."""
    t = truth_table(L, e, [_A, _B]).reshape(L.n, L.n)
    return L.designated_mask[t]


def _is_equivalence(R: np.ndarray) -> bool:
    if not R.diagonal().all() or (R != R.T).any():
        return False
    Ri = R.astype(np.int64)
    return not ((Ri @ Ri > 0) & ~R).any()


def congruence_connective_check(L: MatrixLogic, e: Schema) -> bool:
    """``e`` defines a designated-compatible congruence of ``L``."""
    R = relation_of(L, e)
    if not _is_equivalence(R):
        return False
    labels = [int(np.flatnonzero(R[x])[0]) for x in range(L.n)]
    return is_congruence(L, labels, designated_compatible=True)


def blok_pigozzi_check(L: MatrixLogic, e: Schema, delta: Schema, epsilon: Schema) -> bool:
    """Finite form of the algebraizability conditions.

    ``e`` must define a designated-compatible congruence, and a value is
    designated exactly when ``e(delta(x), epsilon(x))`` is.
    """
    if not congruence_connective_check(L, e):
        return False
    back = instantiate(e, {"A": delta, "B": epsilon})
    t = truth_table(L, back, [_A])
    d = L.designated_mask
    return bool((d[t] == d).all())


def blok_pigozzi_search(L: MatrixLogic, bound: int) -> dict:
    """Look for any (e, delta, epsilon) passing the check among bounded terms.

    ``e`` ranges over binary term functions, ``delta`` and ``epsilon`` over
    unary ones, all with at most ``bound`` nodes.
    """
    bins = bounded_terms(L, 2, bound)
    uns = bounded_terms(L, 1, bound)
    d = L.designated_mask
    n = L.n
    ufns = [(np.asarray(f), t) for f, t in uns.items()]
    candidates = 0
    for fn, e in bins.items():
        R = d[np.asarray(fn).reshape(n, n)]
        if not _is_equivalence(R):
            continue
        labels = [int(np.flatnonzero(R[x])[0]) for x in range(n)]
        if not is_congruence(L, labels, designated_compatible=True):
            continue
        candidates += 1
        E = np.asarray(fn).reshape(n, n)
        for df, dt in ufns:
            for ef, et in ufns:
                if (d[E[df, ef]] == d).all():
                    return {"found": True, "e": render(e), "delta": render(dt),
                            "epsilon": render(et), "congruence_terms": candidates}
    return {"found": False, "e": None, "delta": None, "epsilon": None,
            "congruence_terms": candidates, "binary_terms": len(bins), "unary_terms": len(uns)}


# ----------------------------------------------------------------- lattices

def lattice_order(L: MatrixLogic) -> np.ndarray:
    """``le[x, y]`` iff x & y = x, after checking that & and | form a lattice."""
    M, J = L.table("and"), L.table("or")
    n = L.n
    idx = np.arange(n)
    le = M == idx[:, None]
    if not le.diagonal().all() or (le & le.T & (idx[:, None] != idx[None, :])).any():
        raise NotALatticeError(f"{L.name}: & does not induce a partial order")
    if ((le.astype(int) @ le.astype(int) > 0) & ~le).any():
        raise NotALatticeError(f"{L.name}: & does not induce a partial order")
    for x in range(n):
        for y in range(n):
            m, j = M[x, y], J[x, y]
            lower = le[:, x] & le[:, y]
            upper = le[x, :] & le[y, :]
            if not (lower[m] and le[lower, m].all()):
                raise NotALatticeError(f"{L.name}: & is not a meet at {L.label(x)}, {L.label(y)}")
            if not (upper[j] and le[j, upper].all()):
                raise NotALatticeError(f"{L.name}: | is not a join at {L.label(x)}, {L.label(y)}")
    return le


def lattice_filters(L: MatrixLogic) -> list[frozenset[str]]:
    """Nonempty up-closed subsets closed under meets, smallest first."""
    le = lattice_order(L)
    M = L.table("and")
    n = L.n
    out = []
    for mask in range(1, 1 << n):
        S = [x for x in range(n) if mask >> x & 1]
        inside = np.zeros(n, dtype=bool)
        inside[S] = True
        if not inside[le[S].any(axis=0)].all():
            continue
        if not inside[M[np.ix_(S, S)]].all():
            continue
        out.append(S)
    out.sort(key=lambda s: (len(s), s))
    return [frozenset(L.label(x) for x in s) for s in out]


def leibniz_verdict(L: MatrixLogic) -> dict:
    """Compare filters with designated-compatible congruences.

    With more filters than such congruences, the map from filters to their
    largest compatible congruence cannot be injective, which is reported as
    the "no isomorphism" verdict.
    """
    filters = lattice_filters(L)
    congs = enumerate_congruences(L, designated_compatible=True)
    return {
        "logic": L.name,
        "filters": [sorted(f) for f in filters],
        "congruences": [c.labels(L) for c in congs],
        "no_isomorphism": len(filters) >= 2 and len(congs) < len(filters),
    }
