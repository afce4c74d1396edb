"""Reduced leaf-labeled trees.

A tree here is a finite unrooted tree with no internal vertex of valence two,
whose leaves carry nonempty, pairwise disjoint sets of string labels.  These
are the universal combinatorial objects of the package: plain trees,
amalgamations (where a leaf may carry one label from each side), and the
block-tagged diagrams used by the morphism layer.

Text grammar (also the canonical serialization):

    tree      := label_set | '(' tree (',' tree)+ ')'
    label_set := label ('/' label)*

with labels over ``[A-Za-z0-9_:.]``, whitespace ignored, and ``()`` denoting
the empty tree.  ``canonical_key`` returns a string in this grammar that is
equal for two trees exactly when they are isomorphic by a label-preserving
isomorphism, so keys double as cheap value identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

LABEL_RE = re.compile(r"[A-Za-z0-9_:.]+\Z")

DEFAULT_LABEL_CAP = 9


class TreeError(ValueError):
    """Malformed tree input: bad labels, bad nesting, or broken invariants."""


def _label_set_str(labels: Sequence[str]) -> str:
    return "/".join(sorted(labels))


class Tree:
    """An immutable reduced leaf-labeled tree.

    Vertices are 0..n-1; ``adj[v]`` lists neighbors, ``labels[v]`` the sorted
    label tuple of v (empty for internal vertices).  Equality and hashing go
    through the canonical key, so two trees compare equal exactly when they
    are isomorphic by a label-preserving isomorphism.
    """

    __slots__ = ("adj", "labels", "_key", "_shape", "_hash", "_leaf_of")

    def __init__(self, adj: Tuple[Tuple[int, ...], ...], labels: Tuple[Tuple[str, ...], ...]):
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_shape", None)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_leaf_of", None)

    def __setattr__(self, name, value):
        raise AttributeError("Tree is immutable")

    # -- basic queries ------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.adj)

    def is_empty(self) -> bool:
        return not self.adj

    def is_leaf(self, v: int) -> bool:
        return len(self.adj[v]) <= 1

    def leaves(self) -> List[int]:
        return [v for v in range(len(self.adj)) if len(self.adj[v]) <= 1]

    def nodes(self) -> List[int]:
        return [v for v in range(len(self.adj)) if len(self.adj[v]) >= 2]

    @property
    def leaf_count(self) -> int:
        return len(self.leaves())

    @property
    def node_count(self) -> int:
        return len(self.nodes())

    @property
    def level(self) -> int:
        vals = [len(self.adj[v]) for v in self.nodes()]
        return max(vals) if vals else 0

    @property
    def label_set(self) -> FrozenSet[str]:
        return frozenset(l for ls in self.labels for l in ls)

    def leaf_of(self, label: str) -> int:
        cache = self._leaf_of
        if cache is None:
            cache = {}
            for v, ls in enumerate(self.labels):
                for l in ls:
                    cache[l] = v
            object.__setattr__(self, "_leaf_of", cache)
        try:
            return cache[label]
        except KeyError:
            raise TreeError("unknown label %r" % (label,)) from None

    def labels_of(self, v: int) -> Tuple[str, ...]:
        return self.labels[v]

    # -- identity -----------------------------------------------------------

    def canonical_key(self) -> str:
        if self._key is None:
            object.__setattr__(self, "_key", self._canonical(lambda ls: _label_set_str(ls)))
        return self._key

    def shape_key(self) -> str:
        if self._shape is None:
            object.__setattr__(self, "_shape", self._canonical(lambda ls: "*" * len(ls)))
        return self._shape

    def _canonical(self, leaf_repr: Callable[[Sequence[str]], str]) -> str:
        n = len(self.adj)
        if n == 0:
            return "()"
        if n == 1:
            return leaf_repr(self.labels[0])
        if n == 2:
            return "(%s)" % ",".join(sorted(leaf_repr(ls) for ls in self.labels))

        def serial(v: int, parent: int) -> str:
            if len(self.adj[v]) <= 1:
                return leaf_repr(self.labels[v])
            parts = sorted(serial(w, v) for w in self.adj[v] if w != parent)
            return "(%s)" % ",".join(parts)

        return min("(%s)" % ",".join(sorted(serial(w, v) for w in self.adj[v]))
                   for v in self.nodes())

    def __eq__(self, other) -> bool:
        return isinstance(other, Tree) and self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.canonical_key()))
        return self._hash

    def __repr__(self) -> str:
        return "Tree(%r)" % (self.canonical_key(),)

    def __str__(self) -> str:
        return self.canonical_key()

    # -- structural operations ----------------------------------------------

    def restrict(self, keep: Iterable[str]) -> "Tree":
        """The reduction of the minimal subtree spanning the kept labels.

        Labels outside ``keep`` are dropped; a leaf that loses all its labels
        is deleted.  Restricting to all labels is the identity, restricting
        to nothing gives the empty tree.
        """
        keep = frozenset(keep)
        unknown = keep - self.label_set
        if unknown:
            raise TreeError("unknown labels %s" % sorted(unknown))
        kept_leaves = [v for v, ls in enumerate(self.labels) if any(l in keep for l in ls)]
        if not kept_leaves:
            return EMPTY_TREE
        kept = set(kept_leaves)
        deg = {v: len(self.adj[v]) for v in range(len(self.adj))}
        alive = set(range(len(self.adj)))
        frontier = [v for v in alive if deg[v] <= 1 and v not in kept]
        while frontier:
            v = frontier.pop()
            if v not in alive:
                continue
            alive.discard(v)
            for w in self.adj[v]:
                if w in alive:
                    deg[w] -= 1
                    if deg[w] <= 1 and w not in kept:
                        frontier.append(w)
        edges = [(u, v) for u in alive for v in self.adj[u] if v in alive and u < v]
        labels = {
            v: tuple(l for l in self.labels[v] if l in keep)
            for v in alive
            if v in kept
        }
        return build_tree(alive, edges, labels)

    def drop_leaf(self, label: str) -> "Tree":
        """Delete the leaf carrying ``label`` (with all its labels)."""
        v = self.leaf_of(label)
        doomed = set(self.labels[v])
        return self.restrict(self.label_set - doomed)

    def relabel(self, mapping: Dict[str, str]) -> "Tree":
        """Apply a label substitution; labels absent from the map are kept.

        Two names of one leaf may map to the same new name (they collapse);
        collisions across leaves are rejected by construction.
        """
        labels = {
            v: tuple(sorted({mapping.get(l, l) for l in ls}))
            for v, ls in enumerate(self.labels)
            if ls
        }
        edges = [(u, v) for u in range(len(self.adj)) for v in self.adj[u] if u < v]
        return build_tree(range(len(self.adj)), edges, labels)

    def merge_labels(self, extra: Dict[str, Iterable[str]]) -> "Tree":
        """Add labels to leaves: ``extra`` maps an existing label to new ones."""
        added: Dict[int, List[str]] = {}
        for anchor, new in extra.items():
            added.setdefault(self.leaf_of(anchor), []).extend(new)
        labels = {
            v: tuple(ls) + tuple(added.get(v, ()))
            for v, ls in enumerate(self.labels)
            if ls or v in added
        }
        edges = [(u, v) for u in range(len(self.adj)) for v in self.adj[u] if u < v]
        return build_tree(range(len(self.adj)), edges, labels)

    def path_edges(self, a: int, b: int) -> FrozenSet[FrozenSet[int]]:
        """Edges on the unique path between vertices a and b."""
        if a == b:
            return frozenset()
        parent = {a: None}
        stack = [a]
        while stack:
            v = stack.pop()
            if v == b:
                break
            for w in self.adj[v]:
                if w not in parent:
                    parent[w] = v
                    stack.append(w)
        edges = set()
        v = b
        while parent[v] is not None:
            edges.add(frozenset((v, parent[v])))
            v = parent[v]
        return frozenset(edges)

    def quaternary(self, x1: str, x2: str, y1: str, y2: str) -> bool:
        """Whether the x1-x2 and y1-y2 leaf paths share an edge.

        False unless the four labels sit on four distinct leaves.
        """
        vs = [self.leaf_of(l) for l in (x1, x2, y1, y2)]
        if len(set(vs)) != 4:
            return False
        p = self.path_edges(vs[0], vs[1])
        q = self.path_edges(vs[2], vs[3])
        return bool(p & q)

    # -- leaf insertion (the enumeration move) --------------------------------

    def insertions(self, new_labels: Sequence[str]) -> Iterator["Tree"]:
        """All reduced trees obtained by adding one new leaf.

        The new leaf can attach to any internal vertex or subdivide any edge;
        the degenerate small cases are handled explicitly.  Every tree with
        this leaf arises exactly once up to isomorphism from its deletion,
        which is what makes incremental enumeration complete.
        """
        n = len(self.adj)
        new_labels = tuple(new_labels)
        if n == 0:
            yield build_tree([0], [], {0: new_labels})
            return
        if n == 1:
            yield build_tree([0, 1], [(0, 1)], {0: self.labels[0], 1: new_labels})
            return
        base_labels = {v: ls for v, ls in enumerate(self.labels) if ls}
        edges = [(u, v) for u in range(n) for v in self.adj[u] if u < v]
        for v in range(n):
            if len(self.adj[v]) >= 2:
                labels = dict(base_labels)
                labels[n] = new_labels
                yield build_tree(range(n + 1), edges + [(v, n)], labels)
        for (u, v) in edges:
            rest = [e for e in edges if e != (u, v)]
            labels = dict(base_labels)
            labels[n + 1] = new_labels
            yield build_tree(
                range(n + 2), rest + [(u, n), (v, n), (n, n + 1)], labels
            )

    # -- statistics ------------------------------------------------------------

    def stats(self) -> "TreeStats":
        vals = sorted(len(self.adj[v]) for v in self.nodes())
        return TreeStats(
            leaf_count=self.leaf_count,
            node_count=len(vals),
            level=vals[-1] if vals else 0,
            valences=tuple(vals),
        )

    def aut_order(self) -> int:
        """Order of the label-forgetting automorphism group of the graph."""
        n = len(self.adj)
        if n <= 1:
            return 1
        centers = self._centers()

        def shape(v: int, parent: int) -> str:
            kids = [shape(w, v) for w in self.adj[v] if w != parent]
            if not kids:
                return "*"
            return "(%s)" % ",".join(sorted(kids))

        def count(v: int, parent: int) -> int:
            kids = [(shape(w, v), w) for w in self.adj[v] if w != parent]
            if not kids:
                return 1
            total = 1
            by_shape: Dict[str, int] = {}
            for s, w in kids:
                by_shape[s] = by_shape.get(s, 0) + 1
                total *= count(w, v)
            for m in by_shape.values():
                total *= factorial(m)
            return total

        if len(centers) == 1:
            return count(centers[0], -1)
        u, v = centers
        order = count(u, v) * count(v, u)
        if shape(u, v) == shape(v, u):
            order *= 2
        return order

    def _centers(self) -> List[int]:
        n = len(self.adj)
        deg = [len(self.adj[v]) for v in range(n)]
        layer = [v for v in range(n) if deg[v] <= 1]
        seen = len(layer)
        while seen < n:
            nxt = []
            for v in layer:
                deg[v] = 0
                for w in self.adj[v]:
                    if deg[w] > 0:
                        deg[w] -= 1
                        if deg[w] == 1:
                            nxt.append(w)
            seen += len(nxt)
            layer = nxt
        return layer if layer else [0]


@dataclass(frozen=True)
class TreeStats:
    """Leaf count, node count, level, and the multiset of node valences."""

    leaf_count: int
    node_count: int
    level: int
    valences: Tuple[int, ...]


EMPTY_TREE = Tree((), ())


def build_tree(
    vertices: Iterable[int],
    edges: Iterable[Tuple[int, int]],
    labels: Dict[int, Iterable[str]],
) -> Tree:
    """Validate, reduce, and intern a tree given by explicit graph data.

    Valence-two unlabeled vertices are suppressed; a labeled vertex that ends
    up internal, a disconnected or cyclic graph, a repeated or malformed
    label, and an unlabeled leaf all raise :class:`TreeError`.
    """
    verts = sorted(set(vertices))
    adj: Dict[int, set] = {v: set() for v in verts}
    for (u, v) in edges:
        if u == v or u not in adj or v not in adj:
            raise TreeError("bad edge (%r, %r)" % (u, v))
        adj[u].add(v)
        adj[v].add(u)
    n = len(verts)
    if n and sum(len(s) for s in adj.values()) != 2 * (n - 1):
        raise TreeError("vertex/edge counts do not form a tree")
    if n:
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise TreeError("graph is not connected")
    lab: Dict[int, Tuple[str, ...]] = {}
    all_labels: set = set()
    for v, ls in labels.items():
        ls = tuple(ls)
        if v not in adj:
            raise TreeError("label on unknown vertex %r" % (v,))
        if not ls:
            continue
        for l in ls:
            if not isinstance(l, str) or not LABEL_RE.match(l):
                raise TreeError("malformed label %r" % (l,))
            if l in all_labels:
                raise TreeError("duplicate label %r" % (l,))
            all_labels.add(l)
        lab[v] = tuple(sorted(ls))
    # suppress valence-2 vertices (always unlabeled in valid input)
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            if len(adj[v]) == 2 and v not in lab:
                a, b = adj[v]
                adj[a].discard(v)
                adj[b].discard(v)
                if b in adj[a] or a == b:
                    raise TreeError("suppression created a parallel edge")
                adj[a].add(b)
                adj[b].add(a)
                del adj[v]
                changed = True
    for v in adj:
        d = len(adj[v])
        if d <= 1:
            if v not in lab:
                raise TreeError("unlabeled leaf vertex")
        else:
            if v in lab:
                raise TreeError("labels on internal vertex")
            if d == 2:
                raise TreeError("labeled vertex of valence two")
    order = sorted(adj)
    index = {v: i for i, v in enumerate(order)}
    packed_adj = tuple(tuple(sorted(index[w] for w in adj[v])) for v in order)
    packed_labels = tuple(lab.get(v, ()) for v in order)
    return Tree(packed_adj, packed_labels)


# -- parsing ---------------------------------------------------------------


def parse_tree(text: str) -> Tree:
    """Parse the tree grammar; see the module docstring."""
    s = "".join(text.split())
    if s == "()":
        return EMPTY_TREE
    pos = 0
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    edges: List[Tuple[int, int]] = []
    labels: Dict[int, Tuple[str, ...]] = {}

    def parse_node() -> int:
        nonlocal pos
        if pos < len(s) and s[pos] == "(":
            pos += 1
            me = fresh()
            children = [parse_node()]
            while pos < len(s) and s[pos] == ",":
                pos += 1
                children.append(parse_node())
            if pos >= len(s) or s[pos] != ")":
                raise TreeError("expected ')' at position %d in %r" % (pos, text))
            pos += 1
            if len(children) < 2:
                raise TreeError("parenthesized group needs at least two parts")
            for c in children:
                edges.append((me, c))
            return me
        m = re.match(r"[A-Za-z0-9_:.]+(?:/[A-Za-z0-9_:.]+)*", s[pos:])
        if not m:
            raise TreeError("expected a label at position %d in %r" % (pos, text))
        token = m.group(0)
        pos += len(token)
        me = fresh()
        labels[me] = tuple(token.split("/"))
        return me

    parse_node()
    if pos != len(s):
        raise TreeError("trailing input at position %d in %r" % (pos, text))
    return build_tree(range(counter[0]), edges, labels)


# -- module-level operation wrappers ----------------------------------------


def canonical_key(tree: Tree) -> str:
    return tree.canonical_key()


def shape_key(tree: Tree) -> str:
    return tree.shape_key()


def restrict(tree: Tree, subset: Iterable[str]) -> Tree:
    return tree.restrict(subset)


def quaternary(tree: Tree, x1: str, x2: str, y1: str, y2: str) -> bool:
    return tree.quaternary(x1, x2, y1, y2)


def stats(tree: Tree) -> TreeStats:
    return tree.stats()


def aut_order(tree: Tree) -> int:
    return tree.aut_order()


# -- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def _enumerate(labels: Tuple[str, ...], max_level: Optional[int]) -> Tuple[Tree, ...]:
    if not labels:
        return (EMPTY_TREE,)
    current: Dict[str, Tree] = {}
    first = build_tree([0], [], {0: (labels[0],)})
    current[first.canonical_key()] = first
    for l in labels[1:]:
        nxt: Dict[str, Tree] = {}
        for t in current.values():
            for cand in t.insertions((l,)):
                if max_level is not None and cand.level > max_level:
                    continue
                nxt.setdefault(cand.canonical_key(), cand)
        current = nxt
    return tuple(current[k] for k in sorted(current))


def enumerate_trees(
    labels: Iterable[str],
    max_level: Optional[int] = None,
    cap: int = DEFAULT_LABEL_CAP,
) -> List[Tree]:
    """All reduced trees with one label per leaf, each label used once.

    Deduplicated by canonical key and returned in sorted key order.
    ``max_level`` keeps only trees whose every node has valence at most that
    bound (valid to apply during construction, since deleting a leaf never
    raises a valence).
    """
    labs_list = list(labels)
    if len(set(labs_list)) != len(labs_list):
        raise TreeError("duplicate labels in enumeration request")
    labs = tuple(sorted(labs_list))
    for l in labs:
        if not LABEL_RE.match(l):
            raise TreeError("malformed label %r" % (l,))
    if len(labs) > cap:
        raise TreeError(
            "enumeration over %d labels exceeds the cap of %d" % (len(labs), cap)
        )
    if max_level is not None and max_level < 3:
        raise TreeError("max_level must be at least 3")
    return list(_enumerate(labs, max_level))
