"""Amalgamation enumeration for leaf-labeled trees.

An amalgamation of trees T1 and T2 is a tree on the union of their label
sets whose restrictions to each side reproduce T1 and T2; a leaf may carry
one label from each side, meaning the two copies overlap there.  Shared
labels act as a base: both restrictions to the shared set must agree, and
those leaves are identified throughout.

Enumeration works over one identification pattern at a time: choose a
partial injective matching between the two private label sets, quotient the
labels into leaf classes, and enumerate all trees on those classes by
incremental leaf insertion, pruning any partial tree whose restriction
already disagrees with a required side.  Pruning is sound because
restriction commutes with taking sub-label-sets, so a mismatch can never be
repaired by later insertions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from arboreal.trees import EMPTY_TREE, Tree

MAX_CLASSES = 15
FRONTIER_CAP = 200_000


class AmalgamError(ValueError):
    """Invalid amalgamation request: disagreeing bases or blown caps."""


@dataclass(frozen=True)
class Amalgamation:
    """A tree covering two label blocks, restricting correctly to each.

    ``whole`` carries every label of ``left`` and ``right``; shared labels
    appear once, and a leaf carrying one private label from each side is an
    identified leaf.
    """

    whole: Tree
    left: FrozenSet[str]
    right: FrozenSet[str]

    def __post_init__(self):
        if self.whole.label_set != self.left | self.right:
            raise AmalgamError("whole tree does not cover both label blocks")
        for ls in self.whole.labels:
            if len([l for l in ls if l in self.left]) > 1 or len(
                [l for l in ls if l in self.right]
            ) > 1:
                raise AmalgamError("leaf carries two labels from one side")

    @property
    def key(self) -> str:
        return self.whole.canonical_key()

    def left_tree(self) -> Tree:
        return self.whole.restrict(self.left)

    def right_tree(self) -> Tree:
        return self.whole.restrict(self.right)

    def swap(self) -> "Amalgamation":
        return Amalgamation(self.whole, self.right, self.left)

    def to_json(self) -> Dict[str, object]:
        return {
            "whole": self.key,
            "left": sorted(self.left),
            "right": sorted(self.right),
        }

    def __lt__(self, other: "Amalgamation") -> bool:
        return self.key < other.key


@dataclass(frozen=True)
class TripleAmalgamation:
    """A tree covering three label blocks with prescribed pairwise patterns."""

    whole: Tree
    blocks: Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str]]

    @property
    def key(self) -> str:
        return self.whole.canonical_key()

    def pair(self, i: int, j: int) -> Amalgamation:
        bi, bj = self.blocks[i], self.blocks[j]
        return Amalgamation(self.whole.restrict(bi | bj), bi, bj)


def trees_with_restrictions(
    classes: Sequence[Tuple[str, ...]],
    constraints: Sequence[Tuple[FrozenSet[str], Tree]],
    max_level: Optional[int] = None,
) -> List[Tree]:
    """All trees whose leaves are exactly the given label classes and whose
    restriction to each constrained label set equals the given tree.

    Classes are inserted one leaf at a time with incremental pruning.
    """
    if len(classes) > MAX_CLASSES:
        raise AmalgamError("quotient label set has %d classes (cap %d)" % (len(classes), MAX_CLASSES))
    if not classes:
        out = EMPTY_TREE
        for (subset, expected) in constraints:
            if not expected.is_empty():
                return []
        return [out]
    order = sorted(classes, key=lambda c: min(c))
    inserted: set = set()
    current: Dict[str, Tree] = {"()": EMPTY_TREE}
    for cls in order:
        inserted |= set(cls)
        checks = []
        for (subset, expected) in constraints:
            if subset & set(cls):
                visible = frozenset(subset & inserted)
                checks.append((visible, expected.restrict(visible)))
        nxt: Dict[str, Tree] = {}
        for t in current.values():
            for cand in t.insertions(cls):
                if max_level is not None and cand.level > max_level:
                    continue
                ok = True
                for visible, expected in checks:
                    if cand.restrict(visible) != expected:
                        ok = False
                        break
                if ok:
                    nxt.setdefault(cand.canonical_key(), cand)
        if len(nxt) > FRONTIER_CAP:
            raise AmalgamError("enumeration frontier exceeded %d trees" % FRONTIER_CAP)
        current = nxt
        if not current:
            return []
    return [current[k] for k in sorted(current)]


def _partial_matchings(
    a: Sequence[str], b: Sequence[str]
) -> Iterable[Tuple[Tuple[str, str], ...]]:
    """Partial injective matchings a -> b in lexicographic order."""
    for k in range(min(len(a), len(b)) + 1):
        for asub in combinations(a, k):
            for bperm in permutations(b, k):
                yield tuple(zip(asub, bperm))


def amalgamations(
    t1: Tree, t2: Tree, max_level: Optional[int] = None
) -> List[Amalgamation]:
    """All amalgamations of t1 and t2 up to label-preserving isomorphism.

    Shared labels form the base and must induce the same tree on both sides.
    ``max_level`` restricts to amalgamations whose every node valence stays
    within the bound.
    """
    i1, i2 = t1.label_set, t2.label_set
    base = i1 & i2
    if t1.restrict(base) != t2.restrict(base):
        raise AmalgamError("base restrictions disagree on shared labels %s" % sorted(base))
    private1 = sorted(i1 - base)
    private2 = sorted(i2 - base)
    constraints = ((frozenset(i1), t1), (frozenset(i2), t2))
    out: Dict[str, Amalgamation] = {}
    for matching in _partial_matchings(private1, private2):
        matched1 = {x for x, _ in matching}
        matched2 = {y for _, y in matching}
        classes = (
            [(l,) for l in sorted(base)]
            + [pair for pair in matching]
            + [(l,) for l in private1 if l not in matched1]
            + [(l,) for l in private2 if l not in matched2]
        )
        for whole in trees_with_restrictions(classes, constraints, max_level):
            am = Amalgamation(whole, frozenset(i1), frozenset(i2))
            out.setdefault(am.key, am)
    return [out[k] for k in sorted(out)]


def count_by_shape(t1: Tree, t2: Tree, max_level: Optional[int] = None) -> Counter:
    """Amalgamation counts grouped by the unlabeled shape of the whole."""
    return Counter(a.whole.shape_key() for a in amalgamations(t1, t2, max_level))


COPY_TAG = "t:"


def fresh_copy(tree: Tree, tag: str = COPY_TAG) -> Tree:
    """A relabeled copy with every label prefixed by ``tag``."""
    mapping = {l: tag + l for l in tree.label_set}
    clash = set(mapping.values()) & tree.label_set
    if clash:
        raise AmalgamError("fresh-copy tag collides with labels %s" % sorted(clash))
    return tree.relabel(mapping)


def self_amalgamations(
    tree: Tree, max_level: Optional[int] = None
) -> List[Amalgamation]:
    """Amalgamations of a tree with a fresh-relabeled copy of itself."""
    return amalgamations(tree, fresh_copy(tree), max_level)


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x: str, y: str) -> None:
        self.parent[self.find(x)] = self.find(y)


def _identified_pairs(am: Amalgamation) -> List[Tuple[str, str]]:
    pairs = []
    for ls in am.whole.labels:
        lefts = [l for l in ls if l in am.left and l not in am.right]
        rights = [l for l in ls if l in am.right and l not in am.left]
        if lefts and rights:
            pairs.append((lefts[0], rights[0]))
    return pairs


def triple_amalgamations(
    x: Amalgamation, y: Amalgamation, max_level: Optional[int] = None
) -> List[Tuple[TripleAmalgamation, Amalgamation]]:
    """All three-block trees extending x on blocks (1,2) and y on (2,3).

    Identifications between blocks 1 and 2 are forced by x, between 2 and 3
    by y (with transitive closure); the free choices are extra matchings
    between still-untouched labels of blocks 1 and 3.  Each result is
    returned with its restriction to blocks (1,3).
    """
    b1, b2, b3 = x.left, x.right, y.right
    if y.left != b2:
        raise AmalgamError("middle blocks disagree")
    if x.whole.restrict(b2) != y.whole.restrict(b2):
        raise AmalgamError("middle trees disagree")
    if b1 & b3 or b1 & b2 or b2 & b3:
        raise AmalgamError("triple blocks must be disjoint")
    uf = _UnionFind(b1 | b2 | b3)
    for (a, b) in _identified_pairs(x) + _identified_pairs(y):
        uf.union(a, b)
    groups: Dict[str, List[str]] = {}
    for l in sorted(b1 | b2 | b3):
        groups.setdefault(uf.find(l), []).append(l)
    touched1 = {a for (a, _) in _identified_pairs(x)}
    touched3 = {b for (_, b) in _identified_pairs(y)}
    free1 = sorted(b1 - touched1)
    free3 = sorted(b3 - touched3)
    constraints = ((frozenset(b1 | b2), x.whole), (frozenset(b2 | b3), y.whole))
    out: Dict[str, Tuple[TripleAmalgamation, Amalgamation]] = {}
    for matching in _partial_matchings(free1, free3):
        merged: Dict[str, List[str]] = {k: list(v) for k, v in groups.items()}
        for (a, b) in matching:
            ka, kb = uf.find(a), uf.find(b)
            merged[ka] = merged[ka] + merged.pop(kb)
        classes = [tuple(sorted(v)) for v in merged.values()]
        for whole in trees_with_restrictions(classes, constraints, max_level):
            z = TripleAmalgamation(whole, (b1, b2, b3))
            y3 = Amalgamation(whole.restrict(b1 | b3), b1, b3)
            out.setdefault(z.key, (z, y3))
    return [out[k] for k in sorted(out)]
