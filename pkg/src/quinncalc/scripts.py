"""Move scripts: sequences of primitive moves evaluated as linear maps.

A script is read left to right.  Between a ``split`` and the following
``glue`` the state is a :class:`~quinncalc.trees.SplitState`; every other move
acts on a single :class:`~quinncalc.trees.StateVector`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .ambialgebra import parse_element, trace_unit_solve, unit_e
from .category import FusionCategory
from .errors import ParseError, QuinnError, ScriptError, ShapeError
from .trees import (
    BoundaryPairing,
    Fork,
    Leaf,
    SplitState,
    StateVector,
    Tree,
    _glue_shape,
    _rebracket_shape,
    apply_coform,
    apply_form,
    assoc,
    attach_trace_unit,
    enumerate_admissible,
    format_tree,
    glue_split,
    insert_unit_leaf,
    node_at,
    normalize,
    parse_pattern,
    remove_unit_leaf,
    replace_at,
    shape_of,
    split_at,
)

KINDS = ("assoc", "unit+", "unit-", "trace", "split", "glue", "form", "coform", "norm")


def _at(path: str) -> str:
    return "@" + (path or ".")


@dataclass(frozen=True)
class Move:
    """One primitive move.

    ``arg`` holds the per-kind extra: the direction of ``assoc``, the side of
    ``unit+``, the element of ``trace`` (``c``, ``e`` or a literal such as
    ``I + 4A``) and the object of ``coform``.
    """

    kind: str
    path: str = ""
    arg: str = ""
    pairing: BoundaryPairing | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ShapeError(f"unknown move kind {self.kind!r}")
        if any(ch not in "LR" for ch in self.path):
            raise ShapeError(f"bad path {self.path!r}")
        if self.kind == "assoc" and self.arg not in ("L", "R"):
            raise ShapeError("assoc needs direction L or R")
        if self.kind == "unit+" and self.arg not in ("L", "R"):
            raise ShapeError("unit+ needs side L or R")
        if self.kind == "glue" and self.pairing is None:
            raise ShapeError("glue needs a boundary pairing")

    def __str__(self):
        k = self.kind
        if k == "assoc":
            return f"assoc {self.arg} {_at(self.path)}"
        if k == "unit+":
            return f"unit+ {_at(self.path)} {self.arg}"
        if k == "trace":
            return f"trace {_at(self.path)} with {self.arg or 'c'}"
        if k == "coform":
            return f"coform {_at(self.path)} {self.arg}"
        if k == "glue":
            return f"glue {self.pairing}"
        if k == "norm":
            return "norm"
        return f"{k} {_at(self.path)}"


@dataclass(frozen=True)
class MoveScript:
    moves: tuple
    input_shape: Tree | None = None
    name: str = ""

    def __add__(self, other: "MoveScript") -> "MoveScript":
        return MoveScript(self.moves + other.moves, self.input_shape, f"{self.name}+{other.name}".strip("+"))

    def __len__(self):
        return len(self.moves)

    def output_shape(self, shape: Tree | None = None):
        """Propagate a shape through the moves without touching labels.

        Raises :class:`ScriptError` at the first move whose local shape
        requirement cannot be met.
        """
        cur = shape_of(shape if shape is not None else self.input_shape)
        for i, mv in enumerate(self.moves):
            try:
                cur = _shape_step(cur, mv)
            except QuinnError as exc:
                raise ScriptError(i, mv, exc) from exc
        return cur


def _shape_step(cur, mv: Move):
    if isinstance(cur, tuple):
        if mv.kind != "glue":
            raise ShapeError("a split must be followed by glue")
        return _glue_shape(cur[0], cur[1], mv.pairing)
    k = mv.kind
    node = node_at(cur, mv.path)
    if k == "assoc":
        return _rebracket_shape(cur, mv.path, mv.arg)
    if k == "unit+":
        new = Fork(node, Leaf()) if mv.arg == "R" else Fork(Leaf(), node)
        return replace_at(cur, mv.path, new)
    if k == "unit-":
        if not mv.path or not node.is_leaf:
            raise ShapeError(f"unit- {_at(mv.path)} needs a non-root leaf")
        sib = mv.path[:-1] + ("R" if mv.path[-1] == "L" else "L")
        return replace_at(cur, mv.path[:-1], node_at(cur, sib))
    if k in ("trace", "coform"):
        if not node.is_leaf:
            raise ShapeError(f"{k} {_at(mv.path)} needs a leaf")
        return replace_at(cur, mv.path, Fork(Leaf(), Leaf()))
    if k == "split":
        if not mv.path or node.is_leaf:
            raise ShapeError(f"split {_at(mv.path)} needs an internal edge")
        return (replace_at(cur, mv.path, Leaf()), node)
    if k == "form":
        if node.is_leaf or not (node.left.is_leaf and node.right.is_leaf):
            raise ShapeError(f"form {_at(mv.path)} needs a fork of two leaves")
        return replace_at(cur, mv.path, Leaf())
    if k == "glue":
        raise ShapeError("glue without a preceding split")
    return cur


def _element(cat: FusionCategory, spec: str):
    spec = spec or "c"
    if spec == "c":
        return trace_unit_solve(cat)
    if spec == "e":
        return unit_e(cat)
    return parse_element(spec, cat)


def apply_move(cat: FusionCategory, state, mv: Move):
    if isinstance(state, SplitState):
        if mv.kind != "glue":
            raise ShapeError("a split must be followed by glue")
        return glue_split(cat, state, mv.pairing)
    k = mv.kind
    if k == "assoc":
        return assoc(cat, state, mv.path, mv.arg)
    if k == "unit+":
        return insert_unit_leaf(state, mv.path, mv.arg)
    if k == "unit-":
        return remove_unit_leaf(state, mv.path)
    if k == "trace":
        return attach_trace_unit(cat, state, mv.path, _element(cat, mv.arg))
    if k == "coform":
        return apply_coform(cat, state, mv.path, mv.arg)
    if k == "split":
        return split_at(state, mv.path)
    if k == "form":
        return apply_form(cat, state, mv.path)
    if k == "norm":
        return normalize(state)
    raise ShapeError("glue without a preceding split")


def _as_state(cat: FusionCategory, start) -> StateVector:
    if isinstance(start, StateVector):
        return start
    return StateVector.basis(cat.prime, start)


def evaluate(cat: FusionCategory, script: MoveScript, start, trace: list | None = None):
    """Run ``script`` on ``start`` (a tree or state vector).

    If ``trace`` is a list, ``(move, state)`` pairs are appended to it after
    every move, starting with ``(None, start)``.
    """
    state = _as_state(cat, start)
    if script.input_shape is not None and shape_of(script.input_shape) != state.shape:
        raise ShapeError("start shape does not match the script's input shape")
    if trace is not None:
        trace.append((None, state))
    for i, mv in enumerate(script.moves):
        try:
            state = apply_move(cat, state, mv)
        except QuinnError as exc:
            raise ScriptError(i, mv, exc) from exc
        if trace is not None:
            trace.append((mv, state))
    return state


# -- the named sequences ------------------------------------------------------------

EXAMPLE_SHAPE = Fork(Leaf(), Fork(Fork(Leaf(), Leaf()), Leaf()))


@dataclass(frozen=True)
class ShapeDescriptor:
    """Where a sequence acts: ``site`` is a node path inside ``shape``.

    For the vertex sequences the site is the node ``((c d)_y b)_a``; the
    sub-paths give the roles: ``c`` at ``site+LL``, ``d`` (where the trace
    unit is attached) at ``site+LR`` and ``b`` at ``site+R``.  For the bubble
    the site is the node the bubble grows from.
    """

    shape: Tree | None = EXAMPLE_SHAPE
    site: str = "R"

    def roles(self) -> dict:
        s = self.site
        return {"vertex": s, "c": s + "LL", "d": s + "LR", "b": s + "R"}

    def check_vertex(self):
        if self.shape is None:
            return
        node = node_at(self.shape, self.site)
        if node.is_leaf or node.left.is_leaf:
            raise ShapeError(f"site {_at(self.site)} is not of the form ((c d) b)")

    def check_node(self):
        if self.shape is not None:
            node_at(self.shape, self.site)


def _descriptor(desc) -> ShapeDescriptor:
    if desc is None:
        return ShapeDescriptor()
    if isinstance(desc, str):
        return ShapeDescriptor(None, desc)
    return desc


def new_sequence(desc=None) -> MoveScript:
    """The sequence that replaces a vertex pass: circle, cut, reglue, cap.

    A trace unit ``(r r*)`` is attached beside ``d``, rebracketing carries
    ``r*`` next to ``b``, the unit edge above ``(r* b)`` is cut, the cut-off
    piece is grafted onto a unit bridge beside ``r``, and ``(r r*)`` is closed
    with the form.  The net effect moves ``b`` from beside ``(c d)`` to
    beside ``d``.
    """
    d = _descriptor(desc)
    d.check_vertex()
    v = d.site
    moves = [
        Move("unit+", v + "LR", "R"),
        Move("trace", v + "LRR", "c"),
        Move("assoc", v + "LR", "L"),
        Move("assoc", v + "L", "L"),
        Move("assoc", v, "R"),
        Move("unit+", v + "LRR", "R"),
        Move("split", v + "R"),
        Move("glue", pairing=BoundaryPairing(v + "LRRR", ((v + "LRRL", "L"),))),
        Move("unit-", v + "R"),
        Move("assoc", v + "RR", "L"),
        Move("form", v + "RRL"),
        Move("unit-", v + "RRL"),
    ]
    return MoveScript(tuple(moves), d.shape, "newseq")


def vertex_pass(desc=None) -> MoveScript:
    """``((c d)_y b)_a -> (c (d b)_z)_a``: the c and b branches change sides."""
    d = _descriptor(desc)
    d.check_vertex()
    return MoveScript((Move("assoc", d.site, "R"),), d.shape, "vertexpass")


def bubble_relation(desc=None) -> MoveScript:
    """Grow a circle beside the node at the site, cut it open, reglue, cap it."""
    d = _descriptor(desc)
    if desc is None:
        d = ShapeDescriptor(Fork(Leaf(), Leaf()), "R")
    d.check_node()
    s = d.site
    moves = [
        Move("unit+", s, "R"),
        Move("trace", s + "R", "c"),
        Move("assoc", s, "L"),
        Move("split", s + "L"),
        Move("glue", pairing=BoundaryPairing(s + "L", ((s + "R", "R"),))),
        Move("norm"),
        Move("assoc", s, "R"),
        Move("form", s + "R"),
        Move("unit-", s + "R"),
    ]
    return MoveScript(tuple(moves), d.shape, "bubble")


def identity_script(shape: Tree | None = None) -> MoveScript:
    return MoveScript((), shape, "identity")


BUILTIN_SCRIPTS = {
    "newseq": new_sequence,
    "vertexpass": vertex_pass,
    "bubble": bubble_relation,
    "identity": lambda desc=None: identity_script(_descriptor(desc).shape),
}


# -- relations ----------------------------------------------------------------------


@dataclass(frozen=True)
class RelationReport:
    equal: bool
    rows: tuple = field(default=(), repr=False)
    counterexample: tuple | None = None

    @property
    def count(self) -> int:
        return len(self.rows)


def check_relation(cat: FusionCategory, script_a: MoveScript, script_b: MoveScript, start_domain=None) -> RelationReport:
    """Evaluate both scripts on every start and compare the normalized outputs."""
    shape_a = script_a.input_shape
    shape_b = script_b.input_shape
    if shape_a is not None and shape_b is not None and shape_of(shape_a) != shape_of(shape_b):
        raise ShapeError("scripts have different input shapes")
    if start_domain is None:
        shape = shape_a if shape_a is not None else shape_b
        if shape is None:
            raise ShapeError("no start domain and no input shape to enumerate")
        start_domain = enumerate_admissible(cat, shape)
    rows = []
    counter = None
    for start in start_domain:
        out_a = normalize(evaluate(cat, script_a, start))
        out_b = normalize(evaluate(cat, script_b, start))
        rows.append((start, out_a, out_b))
        if counter is None and out_a != out_b:
            counter = (start, out_a, out_b)
    return RelationReport(counter is None, tuple(rows), counter)


# -- text form ----------------------------------------------------------------------

_PATH = r"@(\.|[LR]*)"


def _path(tok: str) -> str:
    return "" if tok == "." else tok


def parse_move(line: str, lineno: int = 1) -> Move:
    text = line.strip()
    col = line.index(text[0]) + 1 if text else 1
    patterns = [
        (rf"assoc\s+([LR])\s+{_PATH}", lambda m: Move("assoc", _path(m[2]), m[1])),
        (rf"unit\+\s+{_PATH}\s+([LR])", lambda m: Move("unit+", _path(m[1]), m[2])),
        (rf"unit-\s+{_PATH}", lambda m: Move("unit-", _path(m[1]))),
        (rf"trace\s+{_PATH}(?:\s+with\s+(.+))?", lambda m: Move("trace", _path(m[1]), (m[2] or "c").strip())),
        (rf"coform\s+{_PATH}\s+(\S+)", lambda m: Move("coform", _path(m[1]), m[2])),
        (rf"split\s+{_PATH}", lambda m: Move("split", _path(m[1]))),
        (rf"form\s+{_PATH}", lambda m: Move("form", _path(m[1]))),
        (r"norm", lambda m: Move("norm")),
        (rf"glue\s+{_PATH}((?:\s+(?:\.|[LR]*)~(?:\.|[LR]*))*)", None),
    ]
    for pat, build in patterns:
        m = re.fullmatch(pat, text)
        if not m:
            continue
        if build is not None:
            return build(m)
        pairs = tuple(
            (_path(a), _path(b)) for a, b in (tok.split("~") for tok in m[2].split())
        )
        return Move("glue", pairing=BoundaryPairing(_path(m[1]), pairs))
    raise ParseError(f"cannot parse move {text!r}", lineno, col)


def parse_script(text: str, cat: FusionCategory | None = None, name: str = "") -> MoveScript:
    """One move per line; an optional ``input <pattern>`` line fixes the input shape."""
    moves = []
    shape = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.strip().startswith("input "):
            if cat is None:
                raise ParseError("an 'input' line needs a category to resolve labels", lineno)
            shape = shape_of(parse_pattern(line.strip()[6:], cat))
            continue
        moves.append(parse_move(line, lineno))
    return MoveScript(tuple(moves), shape, name)


def format_script(script: MoveScript) -> str:
    lines = []
    if script.input_shape is not None:
        lines.append("input " + format_tree(shape_of(script.input_shape)))
    lines += [str(m) for m in script.moves]
    return "\n".join(lines) + "\n"
