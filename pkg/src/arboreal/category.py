"""Morphisms between trees as measured linear combinations of amalgamations.

A morphism from tree S to tree T is a formal linear combination, with
rational-function coefficients, of amalgamations of S and T.  To keep the
label universes of the two ends disjoint, S's labels are prefixed "s:" and
T's labels "t:" inside the stored amalgamations; composition temporarily
uses "1:", "2:", "3:" for the three blocks involved.

Composition of basis elements sums over all three-block trees extending the
two given amalgamations: each such tree contributes the measure of the
inclusion of its (source, target)-restriction, taken symbolically so that
numeric parameters can be substituted afterwards without spurious poles.

The endomorphism algebra of a tree has the self-amalgamations as basis, the
diagonal self-amalgamation as unit, and a trace that reads off the diagonal
coefficient times the measure of the tree.  The trace pairing is diagonal
with respect to transposition, which is what the Gram machinery exploits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from arboreal.amalgam import (
    Amalgamation,
    _UnionFind,
    amalgamations,
    trees_with_restrictions,
    triple_amalgamations,
)
from arboreal.measure import SYMBOLIC, ParamSpec, mu_embedding, mu_symbolic
from arboreal.ratfun import RatFun
from arboreal.trees import Tree, TreeError

Coeff = Union[RatFun, Fraction, int]

SOURCE_TAG = "s:"
TARGET_TAG = "t:"


def _coeff(c: Coeff) -> RatFun:
    return c if isinstance(c, RatFun) else RatFun.from_scalar(c)


def tag_labels(tree: Tree, tag: str) -> Tree:
    return tree.relabel({l: tag + l for l in tree.label_set})


def retag(tree: Tree, mapping: Dict[str, str]) -> Tree:
    """Swap label prefixes, e.g. {"s:": "1:"}; unmatched labels error out."""
    sub = {}
    for l in tree.label_set:
        for old, new in mapping.items():
            if l.startswith(old):
                sub[l] = new + l[len(old):]
                break
        else:
            raise TreeError("label %r carries no expected block tag" % (l,))
    return tree.relabel(sub)


def _block(tree: Tree, tag: str) -> frozenset:
    return frozenset(tag + l for l in tree.label_set)


def hom_basis(source: Tree, target: Tree, max_level: Optional[int] = None) -> List[Amalgamation]:
    """The amalgamation basis of the morphism space from source to target."""
    return amalgamations(
        tag_labels(source, SOURCE_TAG), tag_labels(target, TARGET_TAG), max_level
    )


def tensor_summands(t1: Tree, t2: Tree, max_level: Optional[int] = None) -> List[Tree]:
    """The object-level product: one summand per amalgamation of the inputs."""
    return [a.whole for a in amalgamations(t1, t2, max_level)]


def diagonal_amalgamation(tree: Tree) -> Amalgamation:
    """The identity self-amalgamation: every leaf carries both tags."""
    tagged = tag_labels(tree, SOURCE_TAG)
    whole = tagged.merge_labels(
        {SOURCE_TAG + l: (TARGET_TAG + l,) for l in tree.label_set}
    )
    return Amalgamation(whole, _block(tree, SOURCE_TAG), _block(tree, TARGET_TAG))


@dataclass(frozen=True)
class HomElement:
    """A finite linear combination of amalgamations from source to target."""

    source: Tree
    target: Tree
    terms: Tuple[Tuple[Amalgamation, RatFun], ...]

    @staticmethod
    def make(source: Tree, target: Tree, terms: Dict[Amalgamation, Coeff]) -> "HomElement":
        cleaned = {}
        for am, c in terms.items():
            c = _coeff(c)
            if not c.is_zero():
                cleaned[am] = cleaned.get(am, RatFun.zero()) + c
        pruned = tuple(
            sorted(((am, c) for am, c in cleaned.items() if not c.is_zero()),
                   key=lambda pair: pair[0].key)
        )
        return HomElement(source, target, pruned)

    @staticmethod
    def zero(source: Tree, target: Tree) -> "HomElement":
        return HomElement(source, target, ())

    @staticmethod
    def basis(source: Tree, target: Tree, am: Amalgamation) -> "HomElement":
        return HomElement.make(source, target, {am: RatFun.one()})

    def coefficients(self) -> Dict[Amalgamation, RatFun]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "HomElement") -> "HomElement":
        self._check_parallel(other)
        merged = self.coefficients()
        for am, c in other.terms:
            merged[am] = merged.get(am, RatFun.zero()) + c
        return HomElement.make(self.source, self.target, merged)

    def __sub__(self, other: "HomElement") -> "HomElement":
        return self + other.scale(-1)

    def scale(self, c: Coeff) -> "HomElement":
        c = _coeff(c)
        return HomElement.make(
            self.source, self.target, {am: x * c for am, x in self.terms}
        )

    def _check_parallel(self, other: "HomElement") -> None:
        if self.source != other.source or self.target != other.target:
            raise TreeError("morphisms are not parallel")

    def to_json(self) -> Dict[str, object]:
        return {
            "source": self.source.canonical_key(),
            "target": self.target.canonical_key(),
            "terms": [
                {"amalgamation": am.key, "coeff": str(c)} for am, c in self.terms
            ],
        }


def identity_hom(tree: Tree) -> HomElement:
    return HomElement.basis(tree, tree, diagonal_amalgamation(tree))


def transpose(f: HomElement) -> HomElement:
    """Swap the two blocks of every term; reverses source and target."""
    out: Dict[Amalgamation, RatFun] = {}
    for am, c in f.terms:
        whole = retag(am.whole, {SOURCE_TAG: TARGET_TAG, TARGET_TAG: SOURCE_TAG})
        out[Amalgamation(whole, _block(f.target, SOURCE_TAG), _block(f.source, TARGET_TAG))] = c
    return HomElement.make(f.target, f.source, out)


def embedding_morphisms(
    sub: Tree, super_tree: Tree, mapping: Optional[Dict[str, str]] = None
) -> Tuple[HomElement, HomElement]:
    """The forward and backward morphisms of an embedding of sub in super.

    The embedding sends each label of sub to the like-named label of super,
    or along an explicit injective ``mapping``; the induced subtree must be
    sub itself.  Both morphisms are the single amalgamation placing sub
    inside super; the backward one is the transpose of the forward one.
    """
    if mapping is None:
        mapping = {l: l for l in sub.label_set}
    image = set(mapping.values())
    if set(mapping) != set(sub.label_set) or len(image) != len(mapping):
        raise TreeError("mapping must be injective on the labels of sub")
    if super_tree.restrict(image) != sub.relabel(mapping):
        raise TreeError("sub is not an induced restriction of super")
    whole = tag_labels(super_tree, TARGET_TAG).merge_labels(
        {TARGET_TAG + mapping[l]: (SOURCE_TAG + l,) for l in sub.label_set}
    )
    beta = HomElement.basis(
        sub,
        super_tree,
        Amalgamation(whole, _block(sub, SOURCE_TAG), _block(super_tree, TARGET_TAG)),
    )
    return beta, transpose(beta)


_TRIPLE_CACHE: Dict[Tuple[str, str, Optional[int]], Tuple] = {}


def _composition_table(
    u: Amalgamation, v: Amalgamation, max_level: Optional[int]
) -> Tuple[Tuple[Amalgamation, RatFun], ...]:
    """For basis terms u (blocks 1,2) and v (blocks 2,3), the measured sum
    over all three-block extensions, grouped by the (1,3)-restriction."""
    key = (u.key, v.key, max_level)
    hit = _TRIPLE_CACHE.get(key)
    if hit is not None:
        return hit
    acc: Dict[Amalgamation, RatFun] = {}
    for z, y3 in triple_amalgamations(u, v, max_level=max_level):
        w = mu_embedding(y3.whole, z.whole, SYMBOLIC)
        acc[y3] = acc.get(y3, RatFun.zero()) + w
    table = tuple(sorted(acc.items(), key=lambda pair: pair[0].key))
    _TRIPLE_CACHE[key] = table
    return table


def compose(f: HomElement, g: HomElement, p: ParamSpec = SYMBOLIC) -> HomElement:
    """The composition f after g, computed symbolically.

    With a finite-level parameter the sum only runs over extensions within
    the level bound and the resulting coefficients are evaluated at t = n;
    with a numeric parameter the symbolic result is evaluated at t.
    """
    if g.target != f.source:
        raise TreeError("middle objects do not match")
    max_level = p.n if p.mode == "level" else None
    acc: Dict[Amalgamation, RatFun] = {}
    for gu, cg in g.terms:
        u = Amalgamation(
            retag(gu.whole, {SOURCE_TAG: "1:", TARGET_TAG: "2:"}),
            _block(g.source, "1:"),
            _block(g.target, "2:"),
        )
        for fv, cf in f.terms:
            v = Amalgamation(
                retag(fv.whole, {SOURCE_TAG: "2:", TARGET_TAG: "3:"}),
                _block(f.source, "2:"),
                _block(f.target, "3:"),
            )
            scale = cg * cf
            for y3, w in _composition_table(u, v, max_level):
                out = Amalgamation(
                    retag(y3.whole, {"1:": SOURCE_TAG, "3:": TARGET_TAG}),
                    _block(g.source, SOURCE_TAG),
                    _block(f.target, TARGET_TAG),
                )
                acc[out] = acc.get(out, RatFun.zero()) + w * scale
    if p.mode in ("numeric", "level"):
        t = p.t if p.mode == "numeric" else Fraction(p.n)
        acc = {am: RatFun.from_scalar(c.evaluate(t)) for am, c in acc.items()}
    return HomElement.make(g.source, f.target, acc)


def categorical_trace(e: HomElement) -> RatFun:
    """Measure of the tree times the diagonal coefficient of an endomorphism."""
    if e.source != e.target:
        raise TreeError("trace requires an endomorphism")
    diag = diagonal_amalgamation(e.source)
    coeff = RatFun.zero()
    for am, c in e.terms:
        if am.key == diag.key:
            coeff = c
            break
    return coeff * mu_symbolic(e.source)


def truncate_level(f: HomElement, n: int) -> HomElement:
    """Drop every term whose whole tree exceeds the level bound."""
    if n < 3:
        raise ValueError("truncation level must be at least 3")
    return HomElement.make(
        f.source, f.target, {am: c for am, c in f.terms if am.whole.level <= n}
    )


def evaluate_coefficients(f: HomElement, t) -> HomElement:
    """Evaluate every coefficient at a rational parameter value."""
    t = Fraction(t)
    return HomElement.make(
        f.source,
        f.target,
        {am: RatFun.from_scalar(c.evaluate(t)) for am, c in f.terms},
    )


def triple_trace_trees(
    u: Amalgamation, v: Amalgamation, w: Amalgamation
) -> List[Tree]:
    """The three-block trees computing the trace of the product u * v * w.

    The whole tree restricts to u on blocks (1,2), to the transpose of v on
    blocks (1,3), and to w on blocks (2,3); the transpose in the middle slot
    is what makes the enumeration match trace-of-composition for every
    pattern, not only the transpose-symmetric ones.  Identifications across
    blocks are forced by the three patterns, so no free matchings arise.
    """
    wholes = {
        "u": retag(u.whole, {SOURCE_TAG: "1:", TARGET_TAG: "2:"}),
        "v": retag(v.whole, {SOURCE_TAG: "3:", TARGET_TAG: "1:"}),
        "w": retag(w.whole, {SOURCE_TAG: "2:", TARGET_TAG: "3:"}),
    }
    b1 = frozenset("1:" + l[len(SOURCE_TAG):] for l in u.left)
    b2 = frozenset("2:" + l[len(SOURCE_TAG):] for l in u.right)
    b3 = frozenset("3:" + l[len(TARGET_TAG):] for l in w.right)
    labels = b1 | b2 | b3
    uf = _UnionFind(labels)
    for whole in wholes.values():
        for ls in whole.labels:
            for other in ls[1:]:
                uf.union(ls[0], other)
    groups: Dict[str, List[str]] = {}
    for l in sorted(labels):
        groups.setdefault(uf.find(l), []).append(l)
    classes = [tuple(sorted(g)) for g in groups.values()]
    for cls in classes:
        per_block = [sum(1 for l in cls if l.startswith(tag)) for tag in ("1:", "2:", "3:")]
        if max(per_block) > 1:
            return []
    constraints = (
        (frozenset(b1 | b2), wholes["u"]),
        (frozenset(b1 | b3), wholes["v"]),
        (frozenset(b2 | b3), wholes["w"]),
    )
    return trees_with_restrictions(classes, constraints)


def triple_trace(u: Amalgamation, v: Amalgamation, w: Amalgamation) -> RatFun:
    """Sum of the measures of the three-block trees for the pattern triple.

    Equals the trace of the corresponding triple product of basis
    endomorphisms; the agreement with compose-then-trace is part of the
    verification suite.
    """
    total = RatFun.zero()
    for tree in triple_trace_trees(u, v, w):
        total = total + mu_symbolic(tree)
    return total


# -- endomorphism algebras ---------------------------------------------------


class ArborealAlgebra:
    """The endomorphism algebra of a tree, with cached structure constants.

    The basis is the sorted list of self-amalgamations (within the level
    bound, when one is given); elements are coefficient vectors over it.
    """

    def __init__(self, tree: Tree, max_level: Optional[int] = None):
        self.tree = tree
        self.max_level = max_level
        self.param = (
            SYMBOLIC if max_level is None else ParamSpec.finite_level(max_level)
        )
        self.basis: List[Amalgamation] = hom_basis(tree, tree, max_level)
        self.index: Dict[str, int] = {am.key: i for i, am in enumerate(self.basis)}
        self.dim = len(self.basis)
        ident = diagonal_amalgamation(tree)
        self.identity_index = self.index[ident.key]
        self._products: Dict[Tuple[int, int], Tuple[RatFun, ...]] = {}

    # -- element plumbing --------------------------------------------------

    def zero_vector(self) -> Tuple[RatFun, ...]:
        return tuple(RatFun.zero() for _ in range(self.dim))

    def element(self, coeffs: Dict[object, Coeff]) -> "AlgebraElement":
        vec = list(self.zero_vector())
        for key, c in coeffs.items():
            if isinstance(key, Amalgamation):
                key = key.key
            if isinstance(key, str):
                key = self.index[key]
            vec[key] = vec[key] + _coeff(c)
        return AlgebraElement(self, tuple(vec))

    def basis_element(self, i: int) -> "AlgebraElement":
        return self.element({i: 1})

    def identity(self) -> "AlgebraElement":
        return self.element({self.identity_index: 1})

    def from_hom(self, f: HomElement) -> "AlgebraElement":
        vec = list(self.zero_vector())
        for am, c in f.terms:
            vec[self.index[am.key]] = vec[self.index[am.key]] + c
        return AlgebraElement(self, tuple(vec))

    def to_hom(self, e: "AlgebraElement") -> HomElement:
        return HomElement.make(
            self.tree,
            self.tree,
            {self.basis[i]: c for i, c in enumerate(e.vec) if not c.is_zero()},
        )

    # -- multiplication ------------------------------------------------------

    def product_row(self, i: int, j: int) -> Tuple[RatFun, ...]:
        """Structure constants of basis[i] * basis[j] (i acting after j)."""
        hit = self._products.get((i, j))
        if hit is not None:
            return hit
        f = HomElement.basis(self.tree, self.tree, self.basis[i])
        g = HomElement.basis(self.tree, self.tree, self.basis[j])
        vec = self.from_hom(compose(f, g, self.param)).vec
        self._products[(i, j)] = vec
        return vec

    def multiply(self, a: "AlgebraElement", b: "AlgebraElement") -> "AlgebraElement":
        out = list(self.zero_vector())
        for i, ca in enumerate(a.vec):
            if ca.is_zero():
                continue
            for j, cb in enumerate(b.vec):
                if cb.is_zero():
                    continue
                scale = ca * cb
                for k, w in enumerate(self.product_row(i, j)):
                    if not w.is_zero():
                        out[k] = out[k] + w * scale
        return AlgebraElement(self, tuple(out))

    def utr(self, e: "AlgebraElement") -> RatFun:
        mu = mu_symbolic(self.tree)
        if self.max_level is not None:
            mu = RatFun.from_scalar(mu.evaluate(self.max_level))
        return e.vec[self.identity_index] * mu

    def transpose_vector(self, e: "AlgebraElement") -> "AlgebraElement":
        out = list(self.zero_vector())
        for i, c in enumerate(e.vec):
            if not c.is_zero():
                j = self.transpose_index(i)
                out[j] = out[j] + c
        return AlgebraElement(self, tuple(out))

    def transpose_index(self, i: int) -> int:
        am = self.basis[i]
        whole = retag(am.whole, {SOURCE_TAG: TARGET_TAG, TARGET_TAG: SOURCE_TAG})
        return self.index[whole.canonical_key()]

    # -- trace form ----------------------------------------------------------

    def gram_matrix(self) -> List[List[RatFun]]:
        """Trace pairing on the basis: entry (i,j) is the measure of basis[i]
        when basis[j] is its transpose, else zero."""
        g = [[RatFun.zero()] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            j = self.transpose_index(i)
            mu = mu_symbolic(self.basis[i].whole)
            if self.max_level is not None:
                mu = RatFun.from_scalar(mu.evaluate(self.max_level))
            g[i][j] = mu
        return g

    def gram_det(self) -> RatFun:
        """Determinant of the trace pairing: a signed product of basis measures."""
        sign = 1
        seen = [False] * self.dim
        for i in range(self.dim):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = self.transpose_index(j)
                length += 1
            if length % 2 == 0:
                sign = -sign
        det = RatFun.from_scalar(sign)
        for am in self.basis:
            mu = mu_symbolic(am.whole)
            if self.max_level is not None:
                mu = RatFun.from_scalar(mu.evaluate(self.max_level))
            det = det * mu
        return det

    def is_semisimple_at(self, t) -> Tuple[bool, Optional[str], Optional[str]]:
        """Whether the trace pairing stays nondegenerate at t.

        Returns (verdict, witness basis key, vanishing factor); the witness
        is a basis element whose measure vanishes at t.
        """
        t = Fraction(t)
        if t == 1:
            raise ValueError("the measure is undefined at t = 1")
        for am in self.basis:
            if mu_symbolic(am.whole).evaluate(t) == 0:
                return False, am.key, "(t-%s)" % (t,)
        return True, None, None

    # -- spectral helpers ------------------------------------------------------

    def minimal_polynomial(self, e: "AlgebraElement") -> List[RatFun]:
        """Monic least-degree annihilating polynomial, constant term first.

        Powers of the element are reduced by exact elimination over the
        rational-function field until the first linear dependence.
        """
        powers: List[Tuple[RatFun, ...]] = [self.identity().vec]
        current = self.identity()
        while True:
            current = self.multiply(current, e)
            solution = _solve_dependence(powers, current.vec)
            if solution is not None:
                coeffs = [-c for c in solution]
                coeffs.append(RatFun.one())
                return coeffs
            powers.append(current.vec)
            if len(powers) > self.dim + 1:
                raise AssertionError("no dependence within the algebra dimension")

    def idempotent_report(self, e: "AlgebraElement") -> Dict[str, object]:
        square = self.multiply(e, e)
        return {
            "is_idempotent": square.vec == e.vec,
            "udim_image": self.utr(e),
        }


class AlgebraElement:
    """A coefficient vector in a fixed endomorphism algebra."""

    __slots__ = ("algebra", "vec")

    def __init__(self, algebra: ArborealAlgebra, vec: Tuple[RatFun, ...]):
        self.algebra = algebra
        self.vec = vec

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(
            self.algebra, tuple(a + b for a, b in zip(self.vec, other.vec))
        )

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(
            self.algebra, tuple(a - b for a, b in zip(self.vec, other.vec))
        )

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(-a for a in self.vec))

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "AlgebraElement":
        return self.scale(other)

    def scale(self, c: Coeff) -> "AlgebraElement":
        c = _coeff(c)
        return AlgebraElement(self.algebra, tuple(a * c for a in self.vec))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.algebra is other.algebra
            and self.vec == other.vec
        )

    def __hash__(self):
        return hash(self.vec)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.vec)

    def utr(self) -> RatFun:
        return self.algebra.utr(self)

    def transpose(self) -> "AlgebraElement":
        return self.algebra.transpose_vector(self)

    def __repr__(self) -> str:
        terms = [
            "%s*[%s]" % (c, self.algebra.basis[i].key)
            for i, c in enumerate(self.vec)
            if not c.is_zero()
        ]
        return " + ".join(terms) if terms else "0"


def _solve_dependence(
    rows: Sequence[Tuple[RatFun, ...]], target: Tuple[RatFun, ...]
) -> Optional[List[RatFun]]:
    """Express target as a combination of rows, or return None.

    Exact Gaussian elimination over the rational-function field.
    """
    n = len(target)
    k = len(rows)
    # augmented columns: solve A^T x = target with A rows
    matrix = [[rows[r][c] for r in range(k)] + [target[c]] for c in range(n)]
    pivots: List[Tuple[int, int]] = []
    row = 0
    for col in range(k):
        pivot = None
        for r in range(row, n):
            if not matrix[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        matrix[row], matrix[pivot] = matrix[pivot], matrix[row]
        inv = RatFun.one() / matrix[row][col]
        matrix[row] = [x * inv for x in matrix[row]]
        for r in range(n):
            if r != row and not matrix[r][col].is_zero():
                f = matrix[r][col]
                matrix[r] = [a - f * b for a, b in zip(matrix[r], matrix[row])]
        pivots.append((row, col))
        row += 1
    for r in range(row, n):
        if not matrix[r][k].is_zero():
            return None
    solution = [RatFun.zero()] * k
    for r, c in pivots:
        solution[c] = matrix[r][k]
    return solution


_ALGEBRAS: Dict[Tuple[str, Optional[int]], ArborealAlgebra] = {}


def algebra_for(tree: Tree, max_level: Optional[int] = None) -> ArborealAlgebra:
    """Shared algebra instances, keyed by tree identity and level bound."""
    key = (tree.canonical_key(), max_level)
    if key not in _ALGEBRAS:
        _ALGEBRAS[key] = ArborealAlgebra(tree, max_level)
    return _ALGEBRAS[key]
