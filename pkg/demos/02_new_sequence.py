"""
Replacing a vertex pass by a circle
===================================

Follow the twelve-move sequence on one start tree, then compare it with the
single rebracketing on every admissible start.
"""

from quinncalc import builtin_c5, evaluate, new_sequence, vertex_pass, check_relation, parse_tree, format_state

cat = builtin_c5()
start = parse_tree("( A ( ( A A ):A A ):A ):1", cat)

trace = []
result = evaluate(cat, new_sequence(), start, trace)
for mv, state in trace:
    print("start" if mv is None else mv)
    for line in format_state(state, cat):
        print("   ", line)

# the same vector comes out of one assoc R
print(result == evaluate(cat, vertex_pass(), start))

report = check_relation(cat, new_sequence(), vertex_pass())
print("equal:", report.equal, "over", report.count, "starts")

# the sequence depends on the trace unit; with e in place of c it breaks
from quinncalc.scripts import Move, MoveScript

swapped = MoveScript(
    tuple(Move(m.kind, m.path, "e", m.pairing) if m.kind == "trace" else m for m in new_sequence().moves),
    new_sequence().input_shape,
)
print("with e:", check_relation(cat, swapped, vertex_pass()).equal)
