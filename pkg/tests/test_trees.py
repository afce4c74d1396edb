"""Reduced leaf-labeled trees.

Core claims:
    - the grammar parses and suppresses valence-two vertices; bad input raises
    - canonical keys separate exactly the label-preserving isomorphism classes
      and parse back to the same tree
    - shape keys forget labels but keep per-leaf multiplicity
    - restriction agrees with an independent span-and-reduce oracle and is
      functorial for nested label sets
    - the quaternary relation matches an independent path computation and
      determines the tree among all trees on its labels
    - enumeration counts match an independent recursion, and insertion
      respects a level bound
    - automorphism orders match brute force over leaf permutations, and their
      prime factors stay below the level
"""

import random
from itertools import combinations, permutations

import pytest

from arboreal.trees import (
    EMPTY_TREE,
    Tree,
    TreeError,
    build_tree,
    canonical_key,
    enumerate_trees,
    parse_tree,
    stats,
)

LETTERS = "abcdefghi"


# -- independent oracles -------------------------------------------------------


def oracle_restrict(tree: Tree, keep) -> Tree:
    """Span the kept leaves by unions of paths, then reduce explicitly."""
    keep = frozenset(keep)
    kept_vertices = [v for v, ls in enumerate(tree.labels) if any(l in keep for l in ls)]
    if not kept_vertices:
        return EMPTY_TREE
    vertices = set()
    for a in kept_vertices:
        for b in kept_vertices:
            vertices.add(a)
            for e in tree.path_edges(a, b):
                vertices |= set(e)
    edges = [
        (u, v)
        for u in vertices
        for v in tree.adj[u]
        if v in vertices and u < v
    ]
    labels = {
        v: tuple(l for l in tree.labels[v] if l in keep)
        for v in kept_vertices
    }
    return build_tree(vertices, edges, labels)


def oracle_quaternary(tree: Tree, x1, x2, y1, y2) -> bool:
    """Path intersection recomputed with a DFS that is independent of the
    production breadth-first parent walk."""
    vs = [tree.leaf_of(l) for l in (x1, x2, y1, y2)]
    if len(set(vs)) != 4:
        return False

    def path(a, b):
        out = []

        def dfs(v, parent, acc):
            if v == b:
                out.extend(acc)
                return True
            return any(
                dfs(w, v, acc + [frozenset((v, w))])
                for w in tree.adj[v]
                if w != parent
            )

        dfs(a, None, [])
        return set(out)

    return bool(path(vs[0], vs[1]) & path(vs[2], vs[3]))


def oracle_counts(up_to: int):
    """Total-partition recursion for the number of trees on n labels."""
    from math import comb

    r = {1: 1}
    e = {0: 1, 1: 1}
    for n in range(2, up_to + 1):
        r[n] = sum(comb(n - 1, k - 1) * r[k] * e[n - k] for k in range(1, n))
        e[n] = 2 * r[n]
    return [1, 1] + [r[n - 1] for n in range(3, up_to + 1)]


def oracle_aut(tree: Tree) -> int:
    """Count leaf permutations that are label-forgetting automorphisms."""
    labels = sorted(tree.label_set)
    count = 0
    for perm in permutations(labels):
        mapping = {a: b + ".x" for a, b in zip(labels, perm)}
        image = tree.relabel(mapping)
        target = tree.relabel({l: l + ".x" for l in labels})
        if image == target:
            count += 1
    return count


# -- parsing ---------------------------------------------------------------------


def test_parse_base_cases():
    assert parse_tree("(a,b)").canonical_key() == "(a,b)"
    assert parse_tree("()").is_empty()
    assert parse_tree("a").canonical_key() == "a"
    assert parse_tree("b/a").canonical_key() == "a/b"
    assert parse_tree(" ( a , b ) ").canonical_key() == "(a,b)"


def test_parse_suppresses_valence_two():
    t1 = parse_tree("(a,b,(c,d))")
    t2 = parse_tree("((a,b),(c,d))")
    t3 = parse_tree("(a,(b,(c,d)))")
    assert t1 == t2 == t3
    assert t1.node_count == 2 and t1.leaf_count == 4


def test_parse_errors():
    for bad in ("(a,a)", "(a/a,b)", "(a)", "(,a)", "(a,b", "a,b", "(a,())", "", "(a,b))", "a-b"):
        with pytest.raises(TreeError):
            parse_tree(bad)


def test_build_rejects_broken_graphs():
    with pytest.raises(TreeError):
        build_tree([0, 1], [], {0: ("a",), 1: ("b",)})  # disconnected
    with pytest.raises(TreeError):
        build_tree([0, 1, 2], [(0, 1), (1, 2), (0, 2)], {0: ("a",)})  # cycle
    with pytest.raises(TreeError):
        build_tree([0, 1, 2], [(0, 1), (1, 2)], {0: ("a",), 1: ("b",), 2: ("c",)})  # labeled path middle
    with pytest.raises(TreeError):
        build_tree([0], [], {})  # unlabeled leaf


# -- canonical and shape keys ----------------------------------------------------


def test_keys_separate_isomorphism_classes():
    keys = {t.canonical_key() for t in enumerate_trees("abcd")}
    assert len(keys) == 4
    assert parse_tree("(a,b,(c,d))") == parse_tree("((d,c),b,a)")


def test_keys_roundtrip(small_trees):
    for n, trees in small_trees.items():
        for t in trees:
            assert parse_tree(t.canonical_key()) == t
            assert EMPTY_TREE.canonical_key() == "()"


def test_keys_respect_relabeling(small_trees):
    rng = random.Random(5)
    for t in small_trees[4] + small_trees[5]:
        labels = sorted(t.label_set)
        shuffled = labels[:]
        rng.shuffle(shuffled)
        image = t.relabel(dict(zip(labels, shuffled)))
        assert image.shape_key() == t.shape_key()
        # a monotone relabeling commutes with the serialization textually
        monotone = {l: "z%d" % i for i, l in enumerate(labels)}
        expected = t.canonical_key()
        for old, new in sorted(monotone.items(), reverse=True):
            expected = expected.replace(old, new)
        assert t.relabel(monotone).canonical_key() == expected


def test_shape_keys():
    quartets = [t for t in enumerate_trees("abcd") if t.node_count == 2]
    star = parse_tree("(a,b,c,d)")
    assert len({t.shape_key() for t in quartets}) == 1
    assert star.shape_key() not in {t.shape_key() for t in quartets}
    assert parse_tree("(a,b,c)").shape_key() != parse_tree("(a,b)").shape_key()
    assert parse_tree("(a/b,c)").shape_key() != parse_tree("(a,c)").shape_key()


# -- restriction -------------------------------------------------------------------


def test_restrict_examples():
    t5 = parse_tree("(a,b,(c,d))")
    assert t5.restrict("abc") == parse_tree("(a,b,c)")
    assert t5.restrict(t5.label_set) == t5
    assert t5.restrict(()) == EMPTY_TREE
    t8 = parse_tree("((a,b),c,(d,e))")
    assert t8.restrict("abde").shape_key() == t5.shape_key()
    with pytest.raises(TreeError):
        t5.restrict({"a", "nope"})


def test_restrict_matches_oracle(small_trees):
    rng = random.Random(9)
    for t in small_trees[4] + small_trees[5]:
        labels = sorted(t.label_set)
        for _ in range(6):
            keep = frozenset(l for l in labels if rng.random() < 0.6)
            assert t.restrict(keep) == oracle_restrict(t, keep)


def test_restrict_is_functorial(small_trees):
    for t in small_trees[5]:
        labels = sorted(t.label_set)
        for a_size in (2, 3, 4):
            big = frozenset(labels[:a_size])
            small = frozenset(labels[: a_size - 1])
            assert t.restrict(big).restrict(small) == t.restrict(small)


def test_restrict_on_multilabel_leaves():
    # a partially kept leaf survives with the kept labels
    t = parse_tree("((a/x,b),c,d)")
    assert t.restrict("abcd") == parse_tree("((a,b),c,d)")
    # a fully dropped leaf disappears and its node is suppressed
    t = parse_tree("((a,x/y),b,(c,d))")
    assert t.restrict("abcd") == parse_tree("(a,b,(c,d))")


# -- the quaternary relation ----------------------------------------------------------


def test_quaternary_examples():
    t5 = parse_tree("(a,b,(c,d))")
    assert t5.quaternary("a", "c", "b", "d") is True
    assert t5.quaternary("a", "b", "c", "d") is False
    assert t5.quaternary("a", "a", "c", "d") is False
    multi = parse_tree("(a/b,c,d,e)")
    assert multi.quaternary("a", "b", "c", "d") is False
    with pytest.raises(TreeError):
        t5.quaternary("a", "b", "c", "nope")


def test_quaternary_matches_oracle(small_trees):
    for t in small_trees[5]:
        for quad in combinations(sorted(t.label_set), 4):
            for (x1, x2), (y1, y2) in (((quad[0], quad[1]), (quad[2], quad[3])),
                                       ((quad[0], quad[2]), (quad[1], quad[3])),
                                       ((quad[0], quad[3]), (quad[1], quad[2]))):
                assert t.quaternary(x1, x2, y1, y2) == oracle_quaternary(t, x1, x2, y1, y2)


def test_quaternary_determines_the_tree():
    """Every tree on six labels is pinned down by its quaternary relation."""
    trees = enumerate_trees(LETTERS[:6])
    labels = sorted(trees[0].label_set)

    def fingerprint(t):
        true_quads = set()
        for quad in combinations(labels, 4):
            for split in ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)):
                pair = (quad[split[0]], quad[split[1]], quad[split[2]], quad[split[3]])
                if t.quaternary(*pair):
                    true_quads.add(
                        frozenset((frozenset(pair[:2]), frozenset(pair[2:])))
                    )
        return frozenset(true_quads)

    prints = [fingerprint(t) for t in trees]
    assert len(set(prints)) == len(trees)


# -- enumeration -----------------------------------------------------------------------


def test_enumeration_counts_match_recursion():
    got = [len(enumerate_trees(LETTERS[:n])) for n in range(1, 8)]
    assert got == oracle_counts(7) == [1, 1, 1, 4, 26, 236, 2752]


def test_enumeration_is_sorted_and_deduplicated():
    trees = enumerate_trees("abcde")
    keys = [t.canonical_key() for t in trees]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_enumeration_level_filter():
    all5 = enumerate_trees("abcde")
    level3 = enumerate_trees("abcde", max_level=3)
    assert set(level3) == {t for t in all5 if t.level <= 3}
    with pytest.raises(TreeError):
        enumerate_trees("abcde", max_level=2)


def test_enumeration_cap():
    with pytest.raises(TreeError):
        enumerate_trees(LETTERS[:8], cap=7)
    with pytest.raises(TreeError):
        enumerate_trees(["a", "a"])


# -- statistics ------------------------------------------------------------------------


def test_stats_examples():
    s = parse_tree("(a,b,c)").stats()
    assert (s.leaf_count, s.node_count, s.level, s.valences) == (3, 1, 3, (3,))
    s = parse_tree("(a,b)").stats()
    assert (s.leaf_count, s.node_count, s.level) == (2, 0, 0)
    assert stats(EMPTY_TREE).leaf_count == 0
    assert canonical_key(EMPTY_TREE) == "()"


def test_aut_examples():
    assert parse_tree("(a,b,c)").aut_order() == 6
    assert parse_tree("(a,b)").aut_order() == 2
    assert parse_tree("a").aut_order() == 1
    assert parse_tree("(a,b,(c,d))").aut_order() == 8
    assert parse_tree("((a,b),c,(d,e))").aut_order() == 8


def test_aut_matches_bruteforce(small_trees):
    for n in (2, 3, 4, 5):
        for t in small_trees[n]:
            assert t.aut_order() == oracle_aut(t)


def test_aut_prime_factors_bounded_by_level():
    for n in range(1, 8):
        for t in enumerate_trees(LETTERS[:n]):
            if t.level < 3:
                continue
            order = t.aut_order()
            p = 2
            while order > 1:
                while order % p == 0:
                    assert p <= t.level
                    order //= p
                p += 1
