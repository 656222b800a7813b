"""
The five-element category and its trace unit
=============================================

Build C5, check its axioms and solve for the element that closes a circle.
"""

from quinncalc import builtin_c5, validate, trace_unit_solve, unit_e
from quinncalc.ambialgebra import structure_scalars, trace_composite

cat = builtin_c5()

# every axiom check with its verdict
report = validate(cat)
for line in report.lines(cat):
    print(line)

# the only nontrivial associator block, rows e and columns f
print(cat.f_block("A", "A", "A", "A").matrix)

# product and coproduct act diagonally on the forks I_1 and I_A
s = structure_scalars(cat)
print("m factors", s.m_factor, "Delta factors", s.delta_factor)

e = unit_e(cat)
c = trace_unit_solve(cat)
print("e =", e.format(cat))
print("c =", c.format(cat))

# m Psi Delta (c) should give back the unit
print(trace_composite(cat, c) == e)
