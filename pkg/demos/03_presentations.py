"""
Presentation moves and their integer invariants
===============================================
"""

import random

from quinncalc.presentations import (
    apply_script,
    format_presentation,
    format_transformation,
    inverse_script,
    parse_presentation,
    parse_transformations,
    random_q_step,
    smith_invariants,
)

p = parse_presentation("<a,b | a b A B, a a b>")
steps = parse_transformations("""
mulR 1 2
conj 2 by "ab"
gmulR 1 2
prolong "ab"
""")

q = p
for t in steps:
    q = t.apply(q)
    print(f"{format_transformation(t):<16} {format_presentation(q)}")

# a prolongation only adds a 1 to the diagonal
print(smith_invariants(p), smith_invariants(q))

# undo everything
back = apply_script(q, inverse_script(p, steps))
print(format_presentation(back.reduced()))

# a short random walk of relator moves
rng = random.Random(3)
r = p
for _ in range(5):
    r = random_q_step(rng, r).apply(r)
print(format_presentation(r), smith_invariants(r))
