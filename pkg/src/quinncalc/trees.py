"""Labeled roottrees, state vectors and the primitive rewriting moves.

A roottree is a rooted binary tree whose nodes (leaves and forks) all carry
an object label; the root carries the unit.  Nodes are addressed by paths,
strings over ``"L"``/``"R"`` read from the root (``""`` is the root).

Every primitive is linear and acts term by term: the output of a move on a
:class:`StateVector` is the sum of its outputs on the basis trees, so a move's
matrix in the basis returned by :func:`enumerate_admissible` is well defined.
Terms that a move sends to zero are dropped silently.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .category import UNIT, FusionCategory
from .errors import CategoryError, InadmissibleError, ParseError, ShapeError


def _key_of(pre: tuple) -> tuple:
    return tuple(-1 if x is None else x for x in pre)


@dataclass(frozen=True)
class Leaf:
    label: object = None

    is_leaf = True

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("leaf", self.label)))
        object.__setattr__(self, "_pre", (self.label,))
        object.__setattr__(self, "_sig", (self.label,))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Leaf):
            return NotImplemented
        return self.label == other.label

    @property
    def _shape(self) -> "Leaf":
        return self if self.label is None else _BLANK


@dataclass(frozen=True)
class Fork:
    left: "Tree"
    right: "Tree"
    label: object = None

    is_leaf = False

    def __post_init__(self):
        # hash and preorder are built from the children's, so each costs O(1) per node
        object.__setattr__(self, "_hash", hash((self.left._hash, self.right._hash, self.label)))
        object.__setattr__(self, "_pre", (self.label,) + self.left._pre + self.right._pre)
        # nested tuple of the whole tree, so equality is one C-level comparison
        object.__setattr__(self, "_sig", (self.label, self.left._sig, self.right._sig))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Fork):
            return NotImplemented
        return self._hash == other._hash and self._sig == other._sig

    @property
    def _shape(self) -> "Fork":
        cached = self.__dict__.get("_shape_")
        if cached is None:
            left, right = self.left._shape, self.right._shape
            if self.label is None and left is self.left and right is self.right:
                cached = self
            else:
                cached = Fork(left, right)
            object.__setattr__(self, "_shape_", cached)
        return cached


_BLANK = Leaf()


Tree = Leaf | Fork


def _check_path(path: str) -> str:
    if any(ch not in "LR" for ch in path):
        raise ShapeError(f"bad path {path!r}: only L and R steps are allowed")
    return path


def node_at(tree: Tree, path: str) -> Tree:
    node = tree
    for i, step in enumerate(_check_path(path)):
        if node.is_leaf:
            raise ShapeError(f"path {path!r} runs past a leaf at {path[:i]!r}")
        node = node.left if step == "L" else node.right
    return node


def replace_at(tree: Tree, path: str, new: Tree) -> Tree:
    if not path:
        return new
    if tree.is_leaf:
        raise ShapeError(f"path {path!r} runs past a leaf")
    if path[0] == "L":
        return Fork(replace_at(tree.left, path[1:], new), tree.right, tree.label)
    return Fork(tree.left, replace_at(tree.right, path[1:], new), tree.label)


def preorder(tree: Tree) -> tuple:
    return tree._pre


def node_paths(tree: Tree, prefix: str = "") -> list:
    if tree.is_leaf:
        return [prefix]
    return [prefix] + node_paths(tree.left, prefix + "L") + node_paths(tree.right, prefix + "R")


def leaf_paths(tree: Tree) -> list:
    return [p for p in node_paths(tree) if node_at(tree, p).is_leaf]


def shape_of(tree: Tree) -> Tree:
    return tree._shape


def num_leaves(tree: Tree) -> int:
    return 1 if tree.is_leaf else num_leaves(tree.left) + num_leaves(tree.right)


def _sort_key(tree: Tree) -> tuple:
    pre = tree._pre
    return _key_of(pre) if None in pre else pre


def inadmissible_node(cat: FusionCategory, tree: Tree, path: str = ""):
    """Path of the first node violating the fusion rules, or None."""
    if tree.is_leaf:
        return None
    if not cat.n(tree.left.label, tree.right.label, tree.label):
        return path
    return inadmissible_node(cat, tree.left, path + "L") or inadmissible_node(cat, tree.right, path + "R")


def check_admissible(cat: FusionCategory, tree: Tree) -> Tree:
    if tree.label != UNIT:
        raise InadmissibleError(f"root label is {cat.name(tree.label)}, not 1", "")
    bad = inadmissible_node(cat, tree)
    if bad is not None:
        node = node_at(tree, bad)
        raise InadmissibleError(
            f"node @{bad or '.'} labelled {cat.name(node.label)} cannot split as "
            f"{cat.name(node.left.label)} (x) {cat.name(node.right.label)}",
            bad,
        )
    return tree


# -- state vectors ----------------------------------------------------------------


class StateVector:
    """A formal Z_p-linear combination of roottrees of one common shape."""

    __slots__ = ("prime", "shape", "terms")

    def __init__(self, prime: int, shape: Tree, terms: Iterable = ()):
        self.prime = prime
        self.shape = shape_of(shape)
        self.terms = tuple(terms)

    @classmethod
    def basis(cls, prime: int, tree: Tree, coeff: int = 1) -> "StateVector":
        coeff %= prime
        return cls(prime, tree, [(tree, coeff)] if coeff else [])

    @classmethod
    def zero(cls, prime: int, shape: Tree) -> "StateVector":
        return cls(prime, shape)

    def normalized(self) -> "StateVector":
        if len(self.terms) == 1:
            tree, c = self.terms[0]
            c %= self.prime
            return StateVector(self.prime, self.shape, [(tree, c)] if c else [])
        acc = defaultdict(int)
        for tree, c in self.terms:
            acc[tree] += c
        kept = sorted(((t, c % self.prime) for t, c in acc.items() if c % self.prime), key=lambda tc: _sort_key(tc[0]))
        return StateVector(self.prime, self.shape, kept)

    def as_dict(self) -> dict:
        return dict(self.normalized().terms)

    def coefficient(self, tree: Tree) -> int:
        return self.as_dict().get(tree, 0)

    def is_zero(self) -> bool:
        return not self.normalized().terms

    def scaled(self, k: int) -> "StateVector":
        return StateVector(self.prime, self.shape, [(t, c * k) for t, c in self.terms]).normalized()

    def __add__(self, other: "StateVector") -> "StateVector":
        if other.shape != self.shape:
            raise ShapeError("cannot add state vectors of different shapes")
        return StateVector(self.prime, self.shape, self.terms + other.terms).normalized()

    def __sub__(self, other: "StateVector") -> "StateVector":
        return self + other.scaled(-1)

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return (
            self.prime == other.prime
            and self.shape == other.shape
            and self.normalized().terms == other.normalized().terms
        )

    def __hash__(self):
        return hash((self.prime, self.shape, self.normalized().terms))

    def __iter__(self) -> Iterator:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self):
        return f"StateVector(p={self.prime}, terms={len(self.terms)})"


class SplitState:
    """Element of a tensor product of two state modules, after a split.

    Terms are ``((lower, upper), coeff)``.  The lower tree keeps the original
    root and has a unit leaf at the cut; the upper tree is the cut-off subtree,
    rooted at the unit.
    """

    __slots__ = ("prime", "shapes", "terms")

    def __init__(self, prime: int, shapes: tuple, terms: Iterable = ()):
        self.prime = prime
        self.shapes = shapes
        acc = defaultdict(int)
        for pair, c in terms:
            acc[pair] += c
        self.terms = tuple(
            sorted(
                ((pr, c % prime) for pr, c in acc.items() if c % prime),
                key=lambda pc: (_sort_key(pc[0][0]), _sort_key(pc[0][1])),
            )
        )

    def is_zero(self) -> bool:
        return not self.terms

    def factors(self) -> tuple:
        """Return ``(lower, upper)`` with ``self == lower (x) upper``.

        Raises :class:`ShapeError` when the tensor is not a pure product.
        """
        p = self.prime
        lower_zero = StateVector.zero(p, self.shapes[0])
        upper_zero = StateVector.zero(p, self.shapes[1])
        if not self.terms:
            return lower_zero, upper_zero
        table = dict(self.terms)
        (l0, u0), c0 = self.terms[0]
        lowers = {l: c for (l, u), c in self.terms if u == u0}
        c0inv = pow(c0, -1, p)
        uppers = {u: c * c0inv % p for (l, u), c in self.terms if l == l0}
        for l, u in itertools.product(lowers, uppers):
            if table.get((l, u), 0) != lowers[l] * uppers[u] % p:
                raise ShapeError("split state is entangled; it has no factorisation")
        if len(table) != len(lowers) * len(uppers):
            raise ShapeError("split state is entangled; it has no factorisation")
        return (
            StateVector(p, self.shapes[0], lowers.items()).normalized(),
            StateVector(p, self.shapes[1], uppers.items()).normalized(),
        )

    def __eq__(self, other):
        if not isinstance(other, SplitState):
            return NotImplemented
        return (self.prime, self.shapes, self.terms) == (other.prime, other.shapes, other.terms)

    def __hash__(self):
        return hash((self.prime, self.shapes, self.terms))

    def __repr__(self):
        return f"SplitState(p={self.prime}, terms={len(self.terms)})"


def normalize(state: StateVector) -> StateVector:
    return state.normalized()


def _apply(state: StateVector, new_shape: Tree, fn: Callable) -> StateVector:
    out = []
    for tree, c in state.terms:
        for new, k in fn(tree):
            out.append((new, c * k))
    return StateVector(state.prime, new_shape, out).normalized()


# -- enumeration --------------------------------------------------------------------


def enumerate_admissible(cat: FusionCategory, shape: Tree, fixed_labels: Mapping | None = None) -> list:
    """All admissible roottrees on ``shape`` extending its fixed labels.

    Integer labels in ``shape`` are fixed, ``None`` labels are free, and string
    labels are free but tied: nodes sharing a name get the same object.
    ``fixed_labels`` maps extra paths to objects.  Ordered by preorder labels.
    """
    pattern = shape
    for path, lab in (fixed_labels or {}).items():
        node = node_at(pattern, path)
        lab = cat.index(lab)
        if isinstance(node.label, int) and node.label != lab:
            return []
        pattern = replace_at(pattern, path, Leaf(lab) if node.is_leaf else Fork(node.left, node.right, lab))

    memo = {}

    def gen(node, label):
        key = (id(node), label)
        if key in memo:
            return memo[key]
        out = []
        if isinstance(node.label, int) and node.label != label:
            pass
        elif node.is_leaf:
            out.append(Leaf(label))
        else:
            for b, c in itertools.product(cat.ids, repeat=2):
                if cat.n(b, c, label):
                    rights = gen(node.right, c)
                    for lt in gen(node.left, b):
                        out.extend(Fork(lt, rt, label) for rt in rights)
        memo[key] = out
        return out

    ties = defaultdict(list)
    for path in node_paths(pattern):
        lab = node_at(pattern, path).label
        if isinstance(lab, str):
            ties[lab].append(path)
    out = []
    for tree in gen(pattern, UNIT):
        if all(len({node_at(tree, p).label for p in ps}) == 1 for ps in ties.values()):
            out.append(tree)
    out.sort(key=_sort_key)
    return out


# -- primitive moves ------------------------------------------------------------------


def _rebracket_shape(shape: Tree, path: str, direction: str) -> Tree:
    node = node_at(shape, path)
    if direction == "L":
        if node.is_leaf or node.right.is_leaf:
            raise ShapeError(f"assoc L @{path or '.'} needs a node of the form (x (y z))")
        new = Fork(Fork(node.left, node.right.left), node.right.right)
    elif direction == "R":
        if node.is_leaf or node.left.is_leaf:
            raise ShapeError(f"assoc R @{path or '.'} needs a node of the form ((x y) z)")
        new = Fork(node.left.left, Fork(node.left.right, node.right))
    else:
        raise ShapeError(f"direction must be 'L' or 'R', got {direction!r}")
    return replace_at(shape, path, new)


def assoc(cat: FusionCategory, state: StateVector, path: str, direction: str) -> StateVector:
    """Rebracket at ``path``.

    ``direction="L"`` turns ``(x (y z)_f)_d`` into ``((x y)_e z)_d`` with
    coefficients ``F[e, f]``; ``"R"`` is the inverse move, using the inverse block.
    """
    new_shape = _rebracket_shape(state.shape, path, direction)

    def move(tree):
        node = node_at(tree, path)
        if direction == "L":
            x, (y, z) = node.left, (node.right.left, node.right.right)
            d, f = node.label, node.right.label
            for e in cat.left_channels(x.label, y.label, z.label, d):
                k = cat.f_entry(x.label, y.label, z.label, d, e, f)
                if k:
                    yield replace_at(tree, path, Fork(Fork(x, y, e), z, d)), k
        else:
            (x, y), z = (node.left.left, node.left.right), node.right
            d, e = node.label, node.left.label
            block = cat.f_inverse(x.label, y.label, z.label, d)
            for f in block.rows:
                k = block.entry(f, e)
                if k:
                    yield replace_at(tree, path, Fork(x, Fork(y, z, f), d)), k

    try:
        return _apply(state, new_shape, move)
    except CategoryError as exc:
        raise InadmissibleError(str(exc), path) from exc


def insert_unit_leaf(state: StateVector, path: str, side: str = "R") -> StateVector:
    """Replace the node ``a`` at ``path`` by ``(a 1)_a`` (side R) or ``(1 a)_a`` (side L)."""
    if side not in ("L", "R"):
        raise ShapeError(f"side must be 'L' or 'R', got {side!r}")

    def wrap(node, label):
        return Fork(node, Leaf(label), node.label) if side == "R" else Fork(Leaf(label), node, node.label)

    new_shape = replace_at(state.shape, path, wrap(node_at(state.shape, path), None))
    new_shape = shape_of(new_shape)
    return _apply(state, new_shape, lambda t: [(replace_at(t, path, wrap(node_at(t, path), UNIT)), 1)])


def remove_unit_leaf(state: StateVector, path: str) -> StateVector:
    """Delete the unit leaf at ``path``; its parent is replaced by the sibling."""
    if not path:
        raise ShapeError("cannot remove the root")
    if not node_at(state.shape, path).is_leaf:
        raise ShapeError(f"@{path} is not a leaf")
    parent, sib = path[:-1], path[:-1] + ("R" if path[-1] == "L" else "L")
    new_shape = replace_at(state.shape, parent, node_at(state.shape, sib))

    def move(tree):
        if node_at(tree, path).label != UNIT:
            raise InadmissibleError(f"leaf @{path} is not labelled 1", path)
        return [(replace_at(tree, parent, node_at(tree, sib)), 1)]

    return _apply(state, new_shape, move)


def _coeffs(element) -> Mapping:
    return getattr(element, "coeffs", element)


def attach_trace_unit(cat: FusionCategory, state: StateVector, leaf_path: str, element) -> StateVector:
    """Replace a leaf labelled ``l`` by ``sum_a element[a] * (a, dual a)_l``."""
    if not node_at(state.shape, leaf_path).is_leaf:
        raise ShapeError(f"@{leaf_path or '.'} is not a leaf")
    coeffs = _coeffs(element)
    new_shape = replace_at(state.shape, leaf_path, Fork(Leaf(), Leaf()))

    def move(tree):
        lab = node_at(tree, leaf_path).label
        for a in cat.ids:
            k = coeffs.get(a, 0) if isinstance(coeffs, Mapping) else coeffs[a]
            if k % cat.prime and cat.n(a, cat.dual(a), lab):
                yield replace_at(tree, leaf_path, Fork(Leaf(a), Leaf(cat.dual(a)), lab)), k

    return _apply(state, new_shape, move)


def split_at(state: StateVector, edge_path: str) -> SplitState:
    """Cut the edge above ``edge_path``; only unit-labelled edges survive."""
    if not edge_path:
        raise ShapeError("the root has no edge above it")
    node = node_at(state.shape, edge_path)
    if node.is_leaf:
        raise ShapeError(f"@{edge_path} is a leaf edge, not an internal edge")
    shapes = (replace_at(state.shape, edge_path, Leaf()), node)
    out = []
    for tree, c in state.terms:
        upper = node_at(tree, edge_path)
        if upper.label == UNIT:
            out.append(((replace_at(tree, edge_path, Leaf(UNIT)), upper), c))
    return SplitState(state.prime, shapes, out)


@dataclass(frozen=True)
class BoundaryPairing:
    """Where to graft the upper tree, plus leaf pairs that must carry dual labels.

    ``graft`` is a unit leaf of the lower tree; each ``(lower_path, upper_path)``
    in ``matches`` names two boundary points being identified.
    """

    graft: str
    matches: tuple = ()

    def __str__(self):
        parts = [f"@{self.graft or '.'}"] + [f"{l or '.'}~{u or '.'}" for l, u in self.matches]
        return " ".join(parts)


def _graft(cat: FusionCategory, lower: Tree, upper: Tree, pairing: BoundaryPairing) -> Tree:
    for lp, up in pairing.matches:
        a, b = node_at(lower, lp).label, node_at(upper, up).label
        if a != cat.dual(b):
            raise InadmissibleError(
                f"label mismatch in pairing: {cat.name(a)} @{lp or '.'} vs {cat.name(b)} @{up or '.'}", lp
            )
    site = node_at(lower, pairing.graft)
    if not site.is_leaf or site.label != UNIT:
        raise InadmissibleError(f"graft site @{pairing.graft or '.'} is not a unit leaf", pairing.graft)
    return replace_at(lower, pairing.graft, upper)


def _glue_shape(lower_shape: Tree, upper_shape: Tree, pairing: BoundaryPairing) -> Tree:
    if not node_at(lower_shape, pairing.graft).is_leaf:
        raise ShapeError(f"graft site @{pairing.graft or '.'} is not a leaf")
    for lp, up in pairing.matches:
        node_at(lower_shape, lp)
        node_at(upper_shape, up)
    return replace_at(lower_shape, pairing.graft, upper_shape)


def glue(cat: FusionCategory, left: StateVector, right: StateVector, pairing: BoundaryPairing) -> StateVector:
    """Graft ``right`` into ``left``; coefficients multiply over all term pairs."""
    new_shape = _glue_shape(left.shape, right.shape, pairing)
    out = []
    for (lt, lc), (rt, rc) in itertools.product(left.terms, right.terms):
        out.append((_graft(cat, lt, rt, pairing), lc * rc))
    return StateVector(left.prime, new_shape, out).normalized()


def glue_split(cat: FusionCategory, split: SplitState, pairing: BoundaryPairing) -> StateVector:
    """Glue the two halves of each term of a split state back into one tree."""
    new_shape = _glue_shape(split.shapes[0], split.shapes[1], pairing)
    out = [(_graft(cat, lt, ut, pairing), c) for (lt, ut), c in split.terms]
    return StateVector(split.prime, new_shape, out).normalized()


def apply_form(cat: FusionCategory, state: StateVector, fork_path: str) -> StateVector:
    """Evaluate the dual pair below ``fork_path`` with the form; non-unit forks vanish."""
    node = node_at(state.shape, fork_path)
    if node.is_leaf or not (node.left.is_leaf and node.right.is_leaf):
        raise ShapeError(f"@{fork_path or '.'} is not a fork of two leaves")
    new_shape = replace_at(state.shape, fork_path, Leaf())

    def move(tree):
        fork = node_at(tree, fork_path)
        a, b = fork.left.label, fork.right.label
        if b != cat.dual(a):
            raise InadmissibleError(f"leaves {cat.name(a)}, {cat.name(b)} @{fork_path or '.'} are not dual", fork_path)
        if fork.label == UNIT:
            yield replace_at(tree, fork_path, Leaf(UNIT)), cat.pairing.form_scalar(a)

    return _apply(state, new_shape, move)


def apply_coform(cat: FusionCategory, state: StateVector, leaf_path: str, obj) -> StateVector:
    """Replace the unit leaf at ``leaf_path`` by ``(a, dual a)_1``, scaled by the coform."""
    a = cat.index(obj)
    if not node_at(state.shape, leaf_path).is_leaf:
        raise ShapeError(f"@{leaf_path or '.'} is not a leaf")
    new_shape = replace_at(state.shape, leaf_path, Fork(Leaf(), Leaf()))

    def move(tree):
        if node_at(tree, leaf_path).label != UNIT:
            raise InadmissibleError(f"leaf @{leaf_path or '.'} is not labelled 1", leaf_path)
        return [(replace_at(tree, leaf_path, Fork(Leaf(a), Leaf(cat.dual(a)), UNIT)), cat.pairing.coform_scalar(a))]

    return _apply(state, new_shape, move)


def operator_matrix(op: Callable, domain: Sequence, codomain: Sequence, prime: int) -> np.ndarray:
    """Matrix of a linear map on state vectors, columns indexed by ``domain`` trees."""
    index = {t: i for i, t in enumerate(codomain)}
    mat = np.zeros((len(codomain), len(domain)), dtype=np.int64)
    for j, tree in enumerate(domain):
        for out, c in op(StateVector.basis(prime, tree)).terms:
            mat[index[out], j] = c
    return mat


# -- text form -----------------------------------------------------------------------


def _tokens(text: str):
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            col, i = col + 1, i + 1
            continue
        if ch in "():":
            yield ch, line, col
            col, i = col + 1, i + 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "():":
            j += 1
        yield text[i:j], line, col
        col, i = col + (j - i), j
    yield None, line, col


class _TreeParser:
    def __init__(self, text: str, cat: FusionCategory, pattern: bool):
        self.toks = list(_tokens(text))
        self.pos = 0
        self.cat = cat
        self.pattern = pattern

    def peek(self):
        return self.toks[self.pos]

    def take(self, expected=None):
        tok = self.toks[self.pos]
        if expected is not None and tok[0] != expected:
            found = "end of input" if tok[0] is None else repr(tok[0])
            raise ParseError(f"expected {expected!r}, found {found}", tok[1], tok[2])
        self.pos += 1
        return tok

    def label(self):
        tok, line, col = self.take()
        if tok is None or tok in "():":
            raise ParseError(f"expected a label, found {'end of input' if tok is None else repr(tok)}", line, col)
        if tok.startswith("?"):
            if not self.pattern:
                raise ParseError(f"free label {tok!r} not allowed in a concrete tree", line, col)
            return tok[1:] or None
        try:
            return self.cat.index(tok)
        except CategoryError as exc:
            raise ParseError(f"unknown object {tok!r}", line, col) from exc

    def tree(self):
        if self.peek()[0] == "(":
            self.take("(")
            left = self.tree()
            right = self.tree()
            self.take(")")
            self.take(":")
            return Fork(left, right, self.label())
        return Leaf(self.label())

    def parse(self):
        t = self.tree()
        tok = self.peek()
        if tok[0] is not None:
            raise ParseError(f"unexpected {tok[0]!r} after tree", tok[1], tok[2])
        return t


def parse_tree(text: str, cat: FusionCategory) -> Tree:
    """Parse ``( A ( A A ):A ):1`` style text into an admissible roottree."""
    return check_admissible(cat, _TreeParser(text, cat, pattern=False).parse())


def parse_pattern(text: str, cat: FusionCategory) -> Tree:
    """Like :func:`parse_tree` but allows ``?`` / ``?name`` free labels."""
    return _TreeParser(text, cat, pattern=True).parse()


def format_tree(tree: Tree, cat: FusionCategory | None = None) -> str:
    def lab(x):
        if x is None:
            return "?"
        if isinstance(x, str):
            return "?" + x
        return cat.name(x) if cat is not None else str(x)

    if tree.is_leaf:
        return lab(tree.label)
    return f"( {format_tree(tree.left, cat)} {format_tree(tree.right, cat)} ):{lab(tree.label)}"


def format_state(state, cat: FusionCategory) -> list:
    """One ``coeff  tree`` line per term; ``["0"]`` for the zero vector."""
    if isinstance(state, SplitState):
        lines = [f"{c}  {format_tree(l, cat)}  (x)  {format_tree(u, cat)}" for (l, u), c in state.terms]
    else:
        lines = [f"{c}  {format_tree(t, cat)}" for t, c in state.normalized().terms]
    return lines or ["0"]


def parse_state(text: str, cat: FusionCategory) -> StateVector:
    """Inverse of :func:`format_state`: ``coeff  tree`` lines, or one bare tree.

    Blank lines and ``#`` comments are ignored; a zero vector needs a shape,
    so ``0`` alone is rejected.
    """
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head.lstrip("-").isdigit() and rest.strip():
            coeff, body = int(head), rest
        else:
            coeff, body = 1, line
        body = body.strip()
        try:
            tree = parse_tree(body, cat)
        except ParseError as exc:
            raise ParseError(exc.message, lineno, raw.find(body) + exc.column) from exc
        terms.append((tree, coeff))
    if not terms:
        raise ParseError("empty state: expected at least one tree")
    shapes = {shape_of(t) for t, _ in terms}
    if len(shapes) > 1:
        raise ShapeError("state terms have different shapes")
    return StateVector(cat.prime, terms[0][0], terms).normalized()
