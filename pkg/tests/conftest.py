import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from lfikit.formula import And, Atom, Cons, Imp, Incons, MetaVar, Neg, Or

ATOMS = [Atom(n) for n in ("p", "q", "r")]
METAS = [MetaVar(n) for n in ("A", "B")]


def formulas(leaves=ATOMS, cons=True, max_leaves=12):
    unary = [Neg, Cons, Incons] if cons else [Neg]

    def extend(children):
        return st.one_of(
            st.builds(lambda k, a: k(a), st.sampled_from(unary), children),
            st.builds(lambda k, a, b: k(a, b), st.sampled_from([And, Or, Imp]), children, children),
        )

    return st.recursive(st.sampled_from(leaves), extend, max_leaves=max_leaves)


def schemas(max_leaves=8, cons=True):
    return formulas(METAS, cons=cons, max_leaves=max_leaves)


def brute_valid(L, f, names):
    """Reference validity by looping over every valuation with a tiny evaluator."""
    des = set(L.designated)
    for combo in itertools.product(range(L.n), repeat=len(names)):
        if slow_eval(L, f, dict(zip(names, combo))) not in des:
            return False
    return True


_KEY = {Neg: "neg", Cons: "cons", Incons: "incons", And: "and", Or: "or", Imp: "imp"}


def slow_eval(L, f, v):
    if isinstance(f, (Atom, MetaVar)):
        return v[f.name]
    T = L.tables[_KEY[type(f)]]
    kids = f.children()
    if len(kids) == 1:
        return T[slow_eval(L, kids[0], v)]
    return T[slow_eval(L, kids[0], v)][slow_eval(L, kids[1], v)]


def brute_clone(L, arity, conns=None):
    """Fixpoint closure by plain Python sets, as an independent oracle."""
    n = L.n
    width = n ** arity
    pts = list(itertools.product(range(n), repeat=arity))
    funcs = {tuple(pt[i] for pt in pts) for i in range(arity)}
    tabs = {k: v for k, v in L.tables.items() if conns is None or k in conns}
    while True:
        new = set(funcs)
        for k, T in tabs.items():
            if k in ("neg", "cons", "incons"):
                new |= {tuple(T[x] for x in f) for f in funcs}
            else:
                new |= {tuple(T[f[i]][g[i]] for i in range(width)) for f in funcs for g in funcs}
        if new == funcs:
            return funcs
        funcs = new


# bit -> (table, cell); value 1 when set, 1/2 when clear (indices: 1 -> 0, 1/2 -> 1, 0 -> 2)
CELLS = [("neg", (1,))] + [("and", c) for c in ((0, 1), (1, 0), (1, 1))] \
    + [("or", c) for c in ((0, 1), (1, 0), (1, 1), (1, 2), (2, 1))] \
    + [("imp", c) for c in ((0, 1), (1, 0), (1, 1), (2, 1))]


def decode(code):
    """Independent reading of the bit layout into full tables."""
    neg = [2, None, 0]
    AND = [[0, None, 2], [None, None, 2], [2, 2, 2]]
    OR = [[0, None, 0], [None, None, None], [0, None, 2]]
    IMP = [[0, None, 2], [None, None, 2], [0, None, 0]]
    tabs = {"neg": neg, "and": AND, "or": OR, "imp": IMP}
    for bit, (conn, cell) in enumerate(CELLS):
        v = 0 if code >> bit & 1 else 1
        if len(cell) == 1:
            tabs[conn][cell[0]] = v
        else:
            tabs[conn][cell[0]][cell[1]] = v
    return tabs


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(7)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
