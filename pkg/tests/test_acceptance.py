"""The thirteen acceptance criteria, one test each, at exact tolerance.

Run under pytest for the PASS/FAIL summary, or directly with
``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import functools
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from quinncalc import presentations as pres
from quinncalc.ambialgebra import replay_pairing, trace_unit_general, trace_unit_solve, unit_e
from quinncalc.category import builtin_c5, format_category, matmul_mod, pairing_scalar, parse_category, pentagon_defect, validate
from quinncalc.scripts import (
    EXAMPLE_SHAPE,
    bubble_relation,
    check_relation,
    evaluate,
    format_script,
    identity_script,
    new_sequence,
    parse_script,
    vertex_pass,
)
from quinncalc.trees import (
    BoundaryPairing,
    StateVector,
    enumerate_admissible,
    format_state,
    format_tree,
    parse_state,
    parse_tree,
)
from quinncalc import trees as T
from quinncalc.worked import BUBBLE_CASES, EXAMPLES, bubble_descriptor

sys.path.insert(0, str(Path(__file__).parent))
import oracle as O  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: dict = {}

# frozen oracle output: admissible labellings of (((a b) c) d) over C5, and mismatches
PENTAGON_LABELLINGS = 13
PENTAGON_MISMATCHES = 0


def criterion(n: int, title: str):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                RESULTS[n] = (title, False)
                raise
            RESULTS[n] = (title, True)

        return wrapper

    return deco


def _state(cat, pairs):
    terms = [(parse_tree(t, cat), c) for t, c in pairs]
    return StateVector(cat.prime, terms[0][0], terms).normalized()


def _example(name):
    return next(ex for ex in EXAMPLES if ex.name == name)


def _check_example(name):
    cat = builtin_c5()
    ex = _example(name)
    start = parse_tree(ex.start, cat)
    expected = _state(cat, ex.expected)
    for script in (new_sequence(), vertex_pass()):
        assert evaluate(cat, script, start) == expected, script.name
    for (_, coef), trail in zip(ex.expected, ex.trail):
        prod = 1
        for f in trail:
            prod = prod * f % 5
        assert prod == coef


@criterion(1, "F(A,A,A;A) is self-inverse mod 5")
def test_c1_self_inverse():
    cat = builtin_c5()
    block = cat.f_block("A", "A", "A", "A").matrix
    assert block == ((2, 4), (3, 3))
    assert matmul_mod(block, block, 5) == ((1, 0), (0, 1))


@criterion(2, "pairing composite is 1 at both objects; coform(A) = 3")
def test_c2_pairing():
    cat = builtin_c5()
    assert cat.pairing.coform_scalar(cat.index("A")) == 3
    for a in cat.ids:
        assert pairing_scalar(cat, a) == 1
        # the same composite replayed with tree moves
        out = replay_pairing(cat, a)
        assert [c for _, c in out.terms] == [1]


@criterion(3, "e = I + 3A, c = I + 4A, general formula agrees")
def test_c3_ambialgebra():
    cat = builtin_c5()
    t0 = time.perf_counter()
    e = unit_e(cat)
    c = trace_unit_solve(cat)
    g = trace_unit_general(cat)
    elapsed = time.perf_counter() - t0
    assert e.format(cat) == "I + 3A"
    assert c.format(cat) == "I + 4A"
    assert g == c
    assert elapsed < 1.0


@criterion(4, "example 1: 4 and 3 both ways")
def test_c4_example1():
    _check_example("ex1")


@criterion(5, "example 2: 2 and 3 both ways")
def test_c5_example2():
    _check_example("ex2")


@criterion(6, "example 3: coefficient 1 both ways")
def test_c6_example3():
    _check_example("ex3")


@criterion(7, "example 4: coefficient 1 both ways")
def test_c7_example4():
    _check_example("ex4")


@criterion(8, "bubble relation is the identity (main case and variant)")
def test_c8_bubble():
    cat = builtin_c5()
    for _, pattern, site, starts in BUBBLE_CASES:
        desc = bubble_descriptor(cat, pattern, site)
        script = bubble_relation(desc)
        for text in starts:
            tree = parse_tree(text, cat)
            assert evaluate(cat, script, tree) == StateVector.basis(5, tree)
        report = check_relation(cat, script, identity_script(desc.shape))
        assert report.equal and report.count > 0


@criterion(9, "new sequence = vertex pass on every admissible start, < 5 s")
def test_c9_exhaustive_relation():
    cat = builtin_c5()
    t0 = time.perf_counter()
    report = check_relation(cat, new_sequence(), vertex_pass())
    elapsed = time.perf_counter() - t0
    assert report.equal, report.counterexample
    assert report.count == len(enumerate_admissible(cat, EXAMPLE_SHAPE)) == 13
    assert elapsed < 5.0


# -- criterion 10: library matrices against the tensor oracle --------------------------


def _primitive_cases(cat, shape, c):
    """(name, library op, oracle op, domain filter) for every primitive that applies."""
    for p in O.paths(shape):
        node = O.sub(shape, p)
        if not node.is_leaf and not node.right.is_leaf:
            yield f"assoc L @{p}", lambda s, p=p: T.assoc(cat, s, p, "L"), lambda X, sh, a, p=p: O.assoc(X, sh, a, p, "L"), None
        if not node.is_leaf and not node.left.is_leaf:
            yield f"assoc R @{p}", lambda s, p=p: T.assoc(cat, s, p, "R"), lambda X, sh, a, p=p: O.assoc(X, sh, a, p, "R"), None
        for side in "LR":
            yield (
                f"unit+ @{p} {side}",
                lambda s, p=p, side=side: T.insert_unit_leaf(s, p, side),
                lambda X, sh, a, p=p, side=side: O.insert_unit(X, sh, a, p, side),
                None,
            )
        if node.is_leaf:
            is_unit = lambda t, p=p: T.node_at(t, p).label == 0  # noqa: E731
            yield f"trace @{p}", lambda s, p=p: T.attach_trace_unit(cat, s, p, c), lambda X, sh, a, p=p: O.trace(X, sh, a, p, c.coeffs), None
            for obj in cat.ids:
                yield (
                    f"coform @{p} {obj}",
                    lambda s, p=p, obj=obj: T.apply_coform(cat, s, p, obj),
                    lambda X, sh, a, p=p, obj=obj: O.coform(X, sh, a, p, obj),
                    is_unit,
                )
            if p:
                yield f"unit- @{p}", lambda s, p=p: T.remove_unit_leaf(s, p), lambda X, sh, a, p=p: O.remove_unit(X, sh, a, p), is_unit
        elif node.left.is_leaf and node.right.is_leaf:
            dual = lambda t, p=p: T.node_at(t, p + "R").label == cat.dual(T.node_at(t, p + "L").label)  # noqa: E731
            yield f"form @{p}", lambda s, p=p: T.apply_form(cat, s, p), lambda X, sh, a, p=p: O.form(X, sh, a, p), dual


def _split_glue_mismatches(cat, X, shape, enum):
    """Split at each internal edge and glue back; compare both halves of the round trip."""
    bad = []
    for p in O.paths(shape):
        if not p or O.sub(shape, p).is_leaf:
            continue
        dom = enum(shape)
        lower_shape, upper_shape, arr = O.split(X, shape, O.basis_tensor(X, shape, dom), p)
        pairs = [(l, u) for l in enum(lower_shape) for u in enum(upper_shape)]
        n_low = len(O.paths(lower_shape))
        idx = {pr: i for i, pr in enumerate(pairs)}
        lib = np.zeros((len(pairs), len(dom)), dtype=np.int64)
        for j, tree in enumerate(dom):
            for pr, k in T.split_at(StateVector.basis(cat.prime, tree), p).terms:
                lib[idx[pr], j] = k
        labels = np.array([O.labels(l) + O.labels(u) for l, u in pairs], dtype=np.intp).reshape(len(pairs), -1)
        orc = arr[(slice(None),) + tuple(labels.T)].T % cat.prime
        if not np.array_equal(lib, orc):
            bad.append(f"{format_tree(shape)} split @{p}")
        # glue: from every pair with a unit graft site back into the joined shape
        gdom = [(l, u) for l, u in pairs if T.node_at(l, p).label == 0 and u.label == 0]
        batch = np.zeros((len(gdom),) + (X.k,) * (n_low + len(O.paths(upper_shape))), dtype=O.DTYPE)
        for i, (l, u) in enumerate(gdom):
            batch[(i,) + O.labels(l) + O.labels(u)] = 1
        new_shape, out = O.glue(X, lower_shape, upper_shape, batch, p)
        cod = enum(new_shape)
        orc = O.read_matrix(X, new_shape, out, cod)
        pairing = BoundaryPairing(p)
        lib = np.zeros_like(orc)
        cidx = {t: i for i, t in enumerate(cod)}
        for j, (l, u) in enumerate(gdom):
            g = T.glue(cat, StateVector.basis(cat.prime, l), StateVector.basis(cat.prime, u), pairing)
            for t, k in g.terms:
                lib[cidx[t], j] = k
        if not np.array_equal(lib, orc):
            bad.append(f"{format_tree(shape)} glue @{p}")
    return bad


def oracle_sweep(cat, max_leaves: int = 6):
    """Compare every primitive's matrix with the oracle; returns (count, mismatches)."""
    X = O.Tensors(cat)
    c = trace_unit_solve(cat)
    cache = {}

    def enum(shape):
        if shape not in cache:
            cache[shape] = enumerate_admissible(cat, shape)
        return cache[shape]

    count, bad = 0, []
    for shape in O.all_shapes(max_leaves):
        full = enum(shape)
        for name, lib_op, orc_op, keep in _primitive_cases(cat, shape, c):
            dom = [t for t in full if keep is None or keep(t)]
            if not dom:
                continue
            new_shape, out = orc_op(X, shape, O.basis_tensor(X, shape, dom))
            cod = enum(new_shape)
            orc = O.read_matrix(X, new_shape, out, cod)
            lib = T.operator_matrix(lib_op, dom, cod, cat.prime)
            count += 1
            if not np.array_equal(orc, lib):
                bad.append(f"{format_tree(shape)} {name}")
        split_bad = _split_glue_mismatches(cat, X, shape, enum)
        count += 2 * sum(1 for p in O.paths(shape) if p and not O.sub(shape, p).is_leaf)
        bad += split_bad
    return count, bad


@criterion(10, "every primitive's matrix equals the tensor oracle (shapes <= 6 leaves)")
def test_c10_oracle_equivalence():
    count, bad = oracle_sweep(builtin_c5(), 6)
    assert not bad, bad[:10]
    assert count > 3000


@criterion(11, "pentagon brute force over all admissible quintuples")
def test_c11_pentagon():
    cat = builtin_c5()
    labellings, mismatches = O.pentagon(O.Tensors(cat))
    assert (labellings, mismatches) == (PENTAGON_LABELLINGS, PENTAGON_MISMATCHES)
    assert pentagon_defect(cat) is None
    assert validate(cat)["pentagon"].passed


@criterion(12, "Smith invariants survive a)-c) scripts; free_reduce idempotent")
def test_c12_presentations():
    rng = random.Random(20240612)
    for _ in range(100):
        p = pres.random_presentation(rng, max_gens=3, max_rels=3, max_len=8)
        steps = []
        q = p
        for _ in range(rng.randint(1, 8)):
            t = pres.random_q_step(rng, q)
            steps.append(t)
            q = pres.apply_q(q, t)
        assert (q.n, q.m) == (p.n, p.m)
        assert pres.smith_invariants(q) == pres.smith_invariants(p), (p, steps)
    for _ in range(1000):
        w = pres.random_word(rng, 4, 20)
        r = pres.free_reduce(w)
        assert pres.free_reduce(r) == r
        assert all(x != -y for x, y in zip(r, r[1:]))


def _fixture_files(kind, suffix):
    return sorted((FIXTURES / kind).glob(f"*{suffix}"))


@criterion(13, "parse/print round trips on fixtures; reproduce-paper byte-identical")
def test_c13_round_trips():
    cat = builtin_c5()
    checked = 0
    for path in _fixture_files("categories", ".cat"):
        text = path.read_text(encoding="utf-8")
        c = parse_category(text)
        assert parse_category(format_category(c)) == c
        assert format_category(parse_category(format_category(c))) == format_category(c)
        checked += 1
    for path in _fixture_files("trees", ".tree"):
        text = path.read_text(encoding="utf-8").strip()
        t = parse_tree(text, cat)
        assert format_tree(t, cat) == text
        assert parse_tree(format_tree(t, cat), cat) == t
        checked += 1
    for path in _fixture_files("trees", ".state"):
        text = path.read_text(encoding="utf-8")
        s = parse_state(text, cat)
        assert "\n".join(format_state(s, cat)) + "\n" == text
        checked += 1
    for path in _fixture_files("scripts", ".qs"):
        script = parse_script(path.read_text(encoding="utf-8"), cat)
        again = parse_script(format_script(script), cat)
        assert again.moves == script.moves and again.input_shape == script.input_shape
        assert format_script(again) == format_script(script)
        checked += 1
    for path in _fixture_files("presentations", ".pres"):
        text = path.read_text(encoding="utf-8").strip()
        p = pres.parse_presentation(text)
        assert pres.format_presentation(p) == text
        checked += 1
    for path in _fixture_files("presentations", ".qt"):
        steps = pres.parse_transformations(path.read_text(encoding="utf-8"))
        printed = "\n".join(pres.format_transformation(t) for t in steps)
        assert pres.parse_transformations(printed) == steps
        checked += 1
    assert checked >= 20

    cmd = [sys.executable, "-m", "quinncalc", "reproduce-paper"]
    env = {**os.environ, "QUINNCALC_COLOR": "0"}
    runs = [subprocess.run(cmd, capture_output=True, env=env, check=False) for _ in range(2)]
    assert runs[0].returncode == 0, runs[0].stderr
    assert runs[0].stdout == runs[1].stdout
    assert b"all rows match" in runs[0].stdout


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    for fn in sorted(tests, key=lambda f: int(f.__name__.split("_")[1][1:])):
        try:
            fn()
        except Exception:  # the line below reports it
            pass
    for n in sorted(RESULTS):
        title, ok = RESULTS[n]
        print(f"criterion {n:>2}  {'PASS' if ok else 'FAIL'}  {title}")
    sys.exit(0 if all(ok for _, ok in RESULTS.values()) and len(RESULTS) == 13 else 1)
