"""Roottree calculus over small fusion categories, with move scripts and presentations."""
from .ambialgebra import AlgebraElement, parse_element, trace_unit_general, trace_unit_solve, unit_e
from .category import FusionCategory, builtin_c5, f_block, fuse, load_category, parse_category, format_category, validate
from .errors import (
    CategoryError,
    InadmissibleError,
    NotSpecialError,
    ParseError,
    QuinnError,
    ScriptError,
    ShapeError,
)
from .presentations import Presentation, free_reduce, smith_invariants
from .scripts import (
    Move,
    MoveScript,
    RelationReport,
    ShapeDescriptor,
    bubble_relation,
    check_relation,
    evaluate,
    new_sequence,
    parse_script,
    format_script,
    vertex_pass,
)
from .trees import Fork, Leaf, StateVector, enumerate_admissible, format_state, format_tree, parse_state, parse_tree

__version__ = "0.1.0"
