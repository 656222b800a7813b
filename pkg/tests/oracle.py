"""Brute-force tensor-expansion oracle for the primitive moves.

A state on a shape with n nodes is a dense integer array with one axis per node
(in preorder) and one entry per labelling.  Each primitive becomes a single
``numpy.einsum`` against a small structure tensor built straight from the
category's F-blocks and pairing scalars.  None of the tree-rewriting code in
``quinncalc.trees`` is used here, only the category data.
"""
from __future__ import annotations

import functools
import itertools
import string

import numpy as np

from quinncalc.category import UNIT
from quinncalc.trees import Fork, Leaf

LETTERS = string.ascii_letters


def all_shapes(max_leaves: int):
    """Every unlabelled binary tree with 1..max_leaves leaves."""
    by_size = {1: [Leaf()]}
    for n in range(2, max_leaves + 1):
        by_size[n] = [Fork(l, r) for k in range(1, n) for l in by_size[k] for r in by_size[n - k]]
    return [s for n in range(1, max_leaves + 1) for s in by_size[n]]


def paths(shape, prefix=""):
    out = [prefix]
    if not shape.is_leaf:
        out += paths(shape.left, prefix + "L") + paths(shape.right, prefix + "R")
    return out


def sub(shape, path):
    for step in path:
        shape = shape.left if step == "L" else shape.right
    return shape


class Tensors:
    """Structure tensors of a category, indexed by object ids."""

    def __init__(self, cat):
        self.cat = cat
        k = len(cat.objects)
        self.k = k
        self.p = cat.prime
        self.N = np.zeros((k, k, k), dtype=np.int64)
        for a, b, c in itertools.product(range(k), repeat=3):
            self.N[a, b, c] = 1 if cat.n(a, b, c) else 0
        # F[a,b,c,d,e,f]: (a (b c)_f)_d -> coefficient on ((a b)_e c)_d
        self.F = np.zeros((k,) * 6, dtype=np.int64)
        self.G = np.zeros((k,) * 6, dtype=np.int64)  # G[a,b,c,d,f,e], the inverse block
        for a, b, c, d in itertools.product(range(k), repeat=4):
            rows = [e for e in range(k) if self.N[a, b, e] and self.N[e, c, d]]
            cols = [f for f in range(k) if self.N[b, c, f] and self.N[a, f, d]]
            if not rows:
                continue
            block = cat.associator.blocks.get((a, b, c, d))
            if block is None:
                mat = np.eye(len(rows), dtype=np.int64)
            else:
                mat = np.array(block, dtype=np.int64)
            inv = _inverse_mod(mat, self.p)
            for i, e in enumerate(rows):
                for j, f in enumerate(cols):
                    self.F[a, b, c, d, e, f] = mat[i, j]
                    self.G[a, b, c, d, f, e] = inv[j, i]
        self.unit = np.zeros(k, dtype=np.int64)
        self.unit[UNIT] = 1
        self.dual = np.zeros((k, k), dtype=np.int64)
        for a in range(k):
            self.dual[a, cat.dual(a)] = 1
        self.form = np.array(cat.pairing.form, dtype=np.int64)
        self.coform = np.array(cat.pairing.coform, dtype=np.int64)


def _inverse_mod(mat, p):
    """Gauss-Jordan inverse over Z_p."""
    n = mat.shape[0]
    aug = np.concatenate([mat % p, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r, col] % p)
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] * pow(int(aug[col, col]), -1, p) % p
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] = (aug[r] - aug[r, col] * aug[col]) % p
    return aug[:, n:]


class Frame:
    """Axis bookkeeping: one einsum letter per node path, batch axis first."""

    def __init__(self, shape):
        self.shape = shape
        self.paths = paths(shape)
        self.letters = {p: LETTERS[i + 1] for i, p in enumerate(self.paths)}
        self.fresh = iter(LETTERS[len(self.paths) + 1 :])

    def sig(self, letters_by_path, order):
        return "a" + "".join(letters_by_path[p] for p in order)


def admissible_mask(T: Tensors, shape) -> np.ndarray:
    ps = paths(shape)
    pos = {p: i for i, p in enumerate(ps)}
    mask = np.zeros((T.k,) * len(ps), dtype=np.int64)
    for labels in itertools.product(range(T.k), repeat=len(ps)):
        if labels[0] != UNIT:
            continue
        ok = all(
            T.N[labels[pos[p + "L"]], labels[pos[p + "R"]], labels[pos[p]]]
            for p in ps
            if not sub(shape, p).is_leaf
        )
        mask[labels] = ok
    return mask


@functools.lru_cache(maxsize=None)
def labels(tree) -> tuple:
    """Node labels in preorder, matching :func:`paths`."""
    if tree.is_leaf:
        return (tree.label,)
    return (tree.label,) + labels(tree.left) + labels(tree.right)


def _label_index(trees, n):
    table = np.array([labels(t) for t in trees], dtype=np.intp).reshape(len(trees), n)
    return tuple(table.T)


def basis_tensor(T: Tensors, shape, trees) -> np.ndarray:
    """Batch of one-hot arrays, one per tree."""
    n = len(paths(shape))
    out = np.zeros((len(trees),) + (T.k,) * n, dtype=DTYPE)
    out[(np.arange(len(trees)),) + _label_index(trees, n)] = 1
    return out


def read_matrix(T: Tensors, shape, arr, trees) -> np.ndarray:
    """Rows of the result: the batch ``arr`` read off at the labellings of ``trees``."""
    n = len(paths(shape))
    return arr[(slice(None),) + _label_index(trees, n)].T % T.p


DTYPE = np.int16  # entries stay below p**3, far inside int16 for small p


def _einsum(spec, *ops, p):
    # no reduction here: a single move keeps entries below p**3; callers reduce
    return np.einsum(spec, *(op.astype(DTYPE, copy=False) for op in ops))


# -- primitives ------------------------------------------------------------------------
# each returns (new_shape, new_batch)


def _replace(shape, path, new):
    if not path:
        return new
    if path[0] == "L":
        return Fork(_replace(shape.left, path[1:], new), shape.right)
    return Fork(shape.left, _replace(shape.right, path[1:], new))


def assoc(T, shape, arr, path, direction):
    fr = Frame(shape)
    old = fr.letters
    node = sub(shape, path)
    new = {}
    if direction == "L":
        new_shape = _replace(shape, path, Fork(Fork(node.left, node.right.left), node.right.right))
        e = next(fr.fresh)
        moved = {"LL": "L", "LR": "RL", "R": "RR"}
        tensor = T.F
        idx = old[path + "L"] + old[path + "RL"] + old[path + "RR"] + old[path] + e + old[path + "R"]
        inner = e
    else:
        new_shape = _replace(shape, path, Fork(node.left.left, Fork(node.left.right, node.right)))
        f = next(fr.fresh)
        moved = {"L": "LL", "RL": "LR", "RR": "R"}
        tensor = T.G
        idx = old[path + "LL"] + old[path + "LR"] + old[path + "R"] + old[path] + f + old[path + "L"]
        inner = f
    inner_path = path + ("L" if direction == "L" else "R")
    for q in paths(new_shape):
        if q == inner_path:
            new[q] = inner
            continue
        for dst, src in moved.items():
            if q.startswith(path + dst):
                new[q] = old[path + src + q[len(path + dst) :]]
                break
        else:
            new[q] = old[q]
    spec = f"{fr.sig(old, fr.paths)},{idx}->{fr.sig(new, paths(new_shape))}"
    return new_shape, _einsum(spec, arr, tensor, p=T.p)


def insert_unit(T, shape, arr, path, side):
    fr = Frame(shape)
    old = fr.letters
    node = sub(shape, path)
    new_shape = _replace(shape, path, Fork(node, Leaf()) if side == "R" else Fork(Leaf(), node))
    keep, unit = ("L", "R") if side == "R" else ("R", "L")
    u, w = next(fr.fresh), next(fr.fresh)
    new = {}
    for q in paths(new_shape):
        if q == path:
            new[q] = w  # the new fork copies the label of the wrapped node
        elif q == path + unit:
            new[q] = u
        elif q.startswith(path + keep):
            new[q] = old[path + q[len(path) + 1 :]]
        else:
            new[q] = old[q]
    spec = f"{fr.sig(old, fr.paths)},{u},{old[path]}{w}->{fr.sig(new, paths(new_shape))}"
    return new_shape, _einsum(spec, arr, T.unit, np.eye(T.k, dtype=np.int64), p=T.p)


def remove_unit(T, shape, arr, path):
    fr = Frame(shape)
    old = dict(fr.letters)
    parent = path[:-1]
    sib = parent + ("R" if path[-1] == "L" else "L")
    # the parent's label equals the sibling root's label for an admissible (x 1)_x
    old[sib] = old[parent]
    new_shape = _replace(shape, parent, sub(shape, sib))
    new = {}
    for q in paths(new_shape):
        if q.startswith(parent):
            new[q] = old[sib + q[len(parent) :]]
        else:
            new[q] = old[q]
    spec = f"{fr.sig(old, fr.paths)},{old[path]}->{fr.sig(new, paths(new_shape))}"
    return new_shape, _einsum(spec, arr, T.unit, p=T.p)


def trace(T, shape, arr, path, coeffs):
    fr = Frame(shape)
    old = fr.letters
    a, b = next(fr.fresh), next(fr.fresh)
    new_shape = _replace(shape, path, Fork(Leaf(), Leaf()))
    new = {q: old[q] for q in paths(new_shape) if q in old}
    new[path + "L"], new[path + "R"] = a, b
    # W[l, a, b] = c_a when b is dual to a and (a b) fuses to l
    W = np.einsum("a,ab,abl->lab", np.array(coeffs, dtype=np.int64), T.dual, T.N)
    spec = f"{fr.sig(old, fr.paths)},{old[path]}{a}{b}->{fr.sig(new, paths(new_shape))}"
    return new_shape, _einsum(spec, arr, W, p=T.p)


def form(T, shape, arr, path):
    fr = Frame(shape)
    old = fr.letters
    new_shape = _replace(shape, path, Leaf())
    n = next(fr.fresh)
    new = {q: old[q] for q in paths(new_shape)}
    new[path] = n
    # W[d, a, b, n] = lambda_a when b = dual a and d = n = 1
    W = np.einsum("d,a,ab,n->dabn", T.unit, T.form, T.dual, T.unit)
    spec = f"{fr.sig(old, fr.paths)},{old[path]}{old[path + 'L']}{old[path + 'R']}{n}->{fr.sig(new, paths(new_shape))}"
    return new_shape, _einsum(spec, arr, W, p=T.p)


def coform(T, shape, arr, path, obj):
    fr = Frame(shape)
    old = fr.letters
    a, b, d = next(fr.fresh), next(fr.fresh), next(fr.fresh)
    new_shape = _replace(shape, path, Fork(Leaf(), Leaf()))
    new = {q: old[q] for q in paths(new_shape) if q in old}
    new[path], new[path + "L"], new[path + "R"] = d, a, b
    pick = np.zeros(T.k, dtype=np.int64)
    pick[obj] = T.coform[obj]
    W = np.einsum("l,a,ab,d->labd", T.unit, pick, T.dual, T.unit)
    spec = f"{fr.sig(old, fr.paths)},{old[path]}{a}{b}{d}->{fr.sig(new, paths(new_shape))}"
    return new_shape, _einsum(spec, arr, W, p=T.p)


def split(T, shape, arr, path):
    """Returns (lower_shape, upper_shape, batch over lower axes then upper axes)."""
    fr = Frame(shape)
    old = fr.letters
    lower_shape = _replace(shape, path, Leaf())
    upper_shape = sub(shape, path)
    u = next(fr.fresh)
    lower = {q: old[q] for q in paths(lower_shape)}
    lower[path] = u
    upper = {q: old[path + q] for q in paths(upper_shape)}
    out = "a" + "".join(lower[q] for q in paths(lower_shape)) + "".join(upper[q] for q in paths(upper_shape))
    # the cut edge must carry the unit; the new leaf below is the unit too
    spec = f"{fr.sig(old, fr.paths)},{old[path]},{u}->{out}"
    return lower_shape, upper_shape, _einsum(spec, arr, T.unit, T.unit, p=T.p)


def glue(T, lower_shape, upper_shape, arr, graft):
    """Inverse bookkeeping of split: graft the upper axes in at the unit leaf."""
    lower_paths = paths(lower_shape)
    upper_paths = paths(upper_shape)
    letters = iter(LETTERS[1:])
    low = {q: next(letters) for q in lower_paths}
    up = {q: next(letters) for q in upper_paths}
    new_shape = _replace(lower_shape, graft, upper_shape)
    new = {}
    for q in paths(new_shape):
        new[q] = up[q[len(graft) :]] if q.startswith(graft) else low[q]
    src = "a" + "".join(low[q] for q in lower_paths) + "".join(up[q] for q in upper_paths)
    # graft site and upper root both carry the unit
    spec = f"{src},{low[graft]},{up['']}->" + "a" + "".join(new[q] for q in paths(new_shape))
    return new_shape, _einsum(spec, arr, T.unit, T.unit, p=T.p)


# -- pentagon --------------------------------------------------------------------------


def pentagon(T):
    """Compare both rebracketing routes (((a b) c) d) -> (a (b (c d))).

    Returns ``(number of admissible quintuple labellings, number of mismatches)``.
    """
    a, b, c, d = Leaf(), Leaf(), Leaf(), Leaf()
    start = Fork(Fork(Fork(a, b), c), d)
    mask = admissible_mask(T, start)
    labellings = np.argwhere(mask)
    batch = np.zeros((len(labellings),) + mask.shape, dtype=np.int64)
    for i, lab in enumerate(labellings):
        batch[(i,) + tuple(lab)] = 1
    x, y = batch, batch
    s1 = s2 = start
    for path in ("", ""):
        s1, x = assoc(T, s1, x, path, "R")
        x %= T.p
    for path in ("L", "", "R"):
        s2, y = assoc(T, s2, y, path, "R")
        y %= T.p
    assert s1 == s2
    bad = int(np.count_nonzero((x - y) % T.p))
    return len(labellings), bad
