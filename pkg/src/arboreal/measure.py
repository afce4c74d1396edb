"""The one-parameter measure on trees and tree embeddings.

The value on a nonempty tree T is

    (-1)^nodes * t * prod_over_nodes (t-2)(t-3)...(t-v+1) / (t-1)^leaves

with the empty tree assigned 1.  The value on an embedding sub -> super is
the symbolic ratio value(super)/value(sub); every finite-parameter
evaluation goes through the symbolic form first, so cancellations between
numerator and denominator happen automatically.

Parameter modes:

* symbolic: exact rational functions in t;
* numeric t (a rational, t != 1): the symbolic value evaluated at t, with a
  genuine pole after cancellation reported as an error;
* finite level n (an integer >= 3): evaluation at t = n restricted to trees
  of level <= n, where the measure stays nonzero;
* infinity: the integer-valued limit, computed on embeddings as a product
  of per-leaf-deletion generator limits (value(tree) of anything with two
  or more leaves is 0, so the limit only makes sense generator by
  generator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Union

from arboreal.amalgam import amalgamations
from arboreal.ratfun import ONE, Poly, RatFun, bracket
from arboreal.trees import Tree, TreeError, build_tree, parse_tree

Value = Union[RatFun, Fraction, int]


class LevelError(ValueError):
    """A finite-level request involved a tree outside the level bound."""


@dataclass(frozen=True)
class ParamSpec:
    """Evaluation mode: symbolic, numeric rational, finite level, or infinity."""

    mode: str
    t: Optional[Fraction] = None
    n: Optional[int] = None

    @staticmethod
    def symbolic() -> "ParamSpec":
        return ParamSpec("symbolic")

    @staticmethod
    def numeric(t) -> "ParamSpec":
        t = Fraction(t)
        if t == 1:
            raise ValueError("the measure is undefined at t = 1")
        return ParamSpec("numeric", t=t)

    @staticmethod
    def finite_level(n: int) -> "ParamSpec":
        if n < 3:
            raise ValueError("finite level requires n >= 3")
        return ParamSpec("level", n=n)

    @staticmethod
    def infinity() -> "ParamSpec":
        return ParamSpec("infinity")


SYMBOLIC = ParamSpec.symbolic()


@dataclass(frozen=True)
class MarkedTree:
    """A tree with one distinguished single-label leaf."""

    tree: Tree
    mark: str

    def __post_init__(self):
        v = self.tree.leaf_of(self.mark)
        if self.tree.labels_of(v) != (self.mark,):
            raise TreeError("marked leaf must carry exactly the mark")

    def unmarked(self) -> Tree:
        return self.tree.drop_leaf(self.mark)


# Limits of the generator values as t grows: marked types I_1, I_2, I_3,
# I_m (m >= 4), II, III.
INFINITY_GENERATOR_VALUES: Dict[str, int] = {
    "I1": 1,
    "I2": 0,
    "I3": -1,
    "Im": 1,
    "II": -1,
    "III": -1,
}


@lru_cache(maxsize=None)
def _mu_symbolic_key(key: str) -> RatFun:
    return _mu_formula(parse_tree(key))


_PERTURB_PER_LEAF: Optional[Fraction] = None


def set_mu_perturbation(scale_per_leaf: Optional[Fraction]) -> None:
    """Testing hook: scale the tree measure by c^leaf_count.

    A non-trivial scale breaks additivity over amalgamations (identified
    leaves change the leaf count), which is exactly what a harness self-test
    wants to observe.  Production code never sets this.
    """
    global _PERTURB_PER_LEAF
    _PERTURB_PER_LEAF = scale_per_leaf
    _mu_symbolic_key.cache_clear()


def _mu_formula(tree: Tree) -> RatFun:
    if tree.is_empty():
        return ONE
    num = Poly((0, 1))  # t
    for v in tree.nodes():
        num = num * bracket(len(tree.adj[v]))
    sign = -1 if tree.node_count % 2 else 1
    value = RatFun(num.scale(sign), Poly((-1, 1)) ** tree.leaf_count)
    if _PERTURB_PER_LEAF is not None:
        value = value * RatFun.from_scalar(_PERTURB_PER_LEAF) ** tree.leaf_count
    return value


def mu_symbolic(tree: Tree) -> RatFun:
    """The measure of a tree as an exact rational function of t."""
    return _mu_symbolic_key(tree.canonical_key())


def _require_level(tree: Tree, n: int) -> None:
    if tree.level > n:
        raise LevelError(
            "tree %s has level %d > %d and is outside the level-%d class"
            % (tree.canonical_key(), tree.level, n, n)
        )


def mu_of_tree(tree: Tree, p: ParamSpec = SYMBOLIC) -> Value:
    """The measure of a tree under the given parameter mode."""
    if p.mode == "symbolic":
        return mu_symbolic(tree)
    if p.mode == "numeric":
        return mu_symbolic(tree).evaluate(p.t)
    if p.mode == "level":
        _require_level(tree, p.n)
        return mu_symbolic(tree).evaluate(p.n)
    if p.mode == "infinity":
        return mu_embedding_infinity(None, tree)
    raise ValueError("unknown parameter mode %r" % (p.mode,))


def _extra_leaves(sub: Optional[Tree], super_tree: Tree) -> list:
    sub_labels = sub.label_set if sub is not None else frozenset()
    extras = []
    for v in super_tree.leaves():
        ls = super_tree.labels_of(v)
        if not any(l in sub_labels for l in ls):
            extras.append(min(ls))
    return sorted(extras)


def _check_embedding(sub: Tree, super_tree: Tree) -> None:
    if not sub.label_set <= super_tree.label_set:
        raise TreeError("sub labels are not contained in super labels")
    if super_tree.restrict(sub.label_set) != sub:
        raise TreeError("sub is not the restriction of super to its labels")


def mu_embedding(sub: Tree, super_tree: Tree, p: ParamSpec = SYMBOLIC) -> Value:
    """The measure of the embedding sub -> super under the parameter mode."""
    _check_embedding(sub, super_tree)
    if p.mode == "infinity":
        return mu_embedding_infinity(sub, super_tree)
    if p.mode == "level":
        _require_level(sub, p.n)
        _require_level(super_tree, p.n)
    ratio = mu_symbolic(super_tree) / mu_symbolic(sub)
    if p.mode == "symbolic":
        return ratio
    t = p.t if p.mode == "numeric" else Fraction(p.n)
    return ratio.evaluate(t)


def _type_code_at_leaf(tree: Tree, v: int) -> str:
    leaves = tree.leaf_count
    if leaves <= 3:
        return "I%d" % leaves
    node = tree.adj[v][0]
    valence = len(tree.adj[node])
    if valence >= 4:
        return "I%d" % valence
    leaf_neighbors = sum(1 for w in tree.adj[node] if tree.is_leaf(w))
    return "II" if leaf_neighbors == 2 else "III"


def marked_type_code(tree: Tree, mark: str) -> str:
    """Classify a marked tree: I1/I2/I3, Im (marked-node valence m >= 4),
    II, or III.

    For four or more leaves the type is read off the neighbor of the marked
    leaf: valence m >= 4 gives Im, valence three gives II when two of its
    neighbors are leaves and III when the mark is the only leaf neighbor.
    """
    v = tree.leaf_of(mark)
    if tree.labels_of(v) != (mark,):
        raise TreeError("mark must sit alone on its leaf")
    return _type_code_at_leaf(tree, v)


def generator_value_infinity(tree: Tree, mark: str) -> int:
    code = _type_code_at_leaf(tree, tree.leaf_of(mark))
    if code.startswith("I") and code not in ("II", "III"):
        m = int(code[1:])
        return INFINITY_GENERATOR_VALUES["Im"] if m >= 4 else INFINITY_GENERATOR_VALUES[code]
    return INFINITY_GENERATOR_VALUES[code]


def mu_embedding_infinity(sub: Optional[Tree], super_tree: Tree) -> int:
    """Product of generator limits along a leaf-deletion chain.

    The result does not depend on the deletion order; the default order
    removes the lexicographically smallest extra leaf first.
    """
    if sub is not None:
        _check_embedding(sub, super_tree)
    current = super_tree
    value = 1
    for label in _extra_leaves(sub, super_tree):
        value *= generator_value_infinity(current, label)
        current = current.drop_leaf(label)
    return value


def star_tree(m: int, prefix: str = "v") -> Tree:
    """The tree with m leaves on one node (an edge for m = 2, a point for 1)."""
    if m < 1:
        raise ValueError("star size must be >= 1")
    labels = {i: ("%s%d" % (prefix, i + 1),) for i in range(m)}
    if m == 1:
        return build_tree([0], [], labels)
    if m == 2:
        return build_tree([0, 1], [(0, 1)], labels)
    edges = [(i, m) for i in range(m)]
    return build_tree(range(m + 1), edges, labels)


def marked_star(m: int) -> MarkedTree:
    """The m-leaf star marked at one leaf: the type I_m minimal shape."""
    return MarkedTree(star_tree(m), "v1")


def marked_y() -> MarkedTree:
    """The four-leaf two-node tree marked at a cherry leaf: type II."""
    return MarkedTree(parse_tree("((a,b),(c,m))"), "m")


def marked_z() -> MarkedTree:
    """The five-leaf caterpillar marked at the middle leaf: type III."""
    return MarkedTree(parse_tree("((a,b),m,(c,d))"), "m")


def theta_generator_values(p: ParamSpec = SYMBOLIC, m_max: int = 6) -> Dict[str, Value]:
    """Generator values computed from embedding measures (never hardcoded).

    Returns x1..x{m_max} (star extensions), y, and z.
    """
    if m_max < 4:
        raise ValueError("m_max must be at least 4")
    out: Dict[str, Value] = {}
    for m in range(1, m_max + 1):
        big = star_tree(m)
        small = big.drop_leaf("v1") if m > 1 else None
        if small is None:
            out["x1"] = mu_of_tree(big, p)
        else:
            out["x%d" % m] = mu_embedding(small, big, p)
    ym = marked_y()
    out["y"] = mu_embedding(ym.unmarked(), ym.tree, p)
    zm = marked_z()
    out["z"] = mu_embedding(zm.unmarked(), zm.tree, p)
    return out


def verify_amalgamation_equation(t1: Tree, t2: Tree, p: ParamSpec = SYMBOLIC) -> Value:
    """Residual of the product equation over the shared-label base.

    Computes value(t1) * value(t2) / value(base) minus the sum of the values
    of all amalgamations; a correct measure returns exactly zero.  At finite
    level n only amalgamations within the level bound are counted.
    """
    base = t1.restrict(t1.label_set & t2.label_set)
    max_level = p.n if p.mode == "level" else None
    ams = amalgamations(t1, t2, max_level=max_level)

    def val(tree: Tree) -> Value:
        v = mu_of_tree(tree, p)
        return Fraction(v) if isinstance(v, int) else v

    base_value = val(base)
    if base_value == 0:
        raise ZeroDivisionError("base tree has measure zero at this parameter")
    lhs = val(t1) * val(t2) / base_value
    rhs = _zero_like(p)
    for a in ams:
        rhs = rhs + val(a.whole)
    return lhs - rhs


def _zero_like(p: ParamSpec) -> Value:
    return RatFun.zero() if p.mode == "symbolic" else Fraction(0)
