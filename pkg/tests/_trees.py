"""Random smooth expression trees in x (and optionally n)."""
import numpy as np
from hypothesis import strategies as st

from gfakit.basealg.expr import BinOp, Call, Const, Neg, Sym

X = Sym("x")
ONE = Const(1.0)


def _bounded(e):
    # keeps exp arguments in [-1, 1]
    return Call("sin", e)


def _positive(e):
    return BinOp("+", ONE, BinOp("*", e, e))


def leaves(with_n=False):
    consts = st.integers(-20, 20).map(lambda k: Const(k / 8))
    syms = [st.just(X)] + ([st.just(Sym("n"))] if with_n else [])
    return st.one_of(consts, *syms)


def extend(children):
    return st.one_of(
        st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: BinOp(t[0], t[1], t[2])),
        children.map(Neg),
        children.map(lambda e: Call("sin", e)),
        children.map(lambda e: Call("cos", e)),
        children.map(lambda e: Call("exp", _bounded(e))),
        children.map(lambda e: Call("log", _positive(e))),
        children.map(lambda e: Call("sqrt", _positive(e))),
        st.tuples(children, children).map(lambda t: BinOp("/", t[0], _positive(t[1]))),
        st.tuples(children, st.integers(2, 3)).map(lambda t: BinOp("^", t[0], Const(float(t[1])))),
    )


def trees(with_n=False, max_leaves=8):
    return st.recursive(leaves(with_n), extend, max_leaves=max_leaves)


def random_tree(rng: np.random.Generator, depth: int = 4, with_n: bool = False):
    """Plain-numpy generator for bulk checks (no hypothesis shrinking needed)."""
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.5:
            return X
        if with_n and r < 0.6:
            return Sym("n")
        return Const(int(rng.integers(-20, 21)) / 8)
    k = int(rng.integers(0, 10))
    a = random_tree(rng, depth - 1, with_n)
    if k == 0:
        return BinOp(str(rng.choice(list("+-*"))), a, random_tree(rng, depth - 1, with_n))
    if k == 1:
        return Neg(a)
    if k == 2:
        return Call("sin", a)
    if k == 3:
        return Call("cos", a)
    if k == 4:
        return Call("exp", _bounded(a))
    if k == 5:
        return Call("log", _positive(a))
    if k == 6:
        return Call("sqrt", _positive(a))
    if k == 7:
        return BinOp("/", a, _positive(random_tree(rng, depth - 1, with_n)))
    if k == 8:
        return BinOp("^", a, Const(float(rng.integers(2, 4))))
    return BinOp("*", a, random_tree(rng, depth - 1, with_n))
