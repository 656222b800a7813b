"""The worked C5 examples as data, plus the deterministic reproduction report."""
from __future__ import annotations

from dataclasses import dataclass

from .ambialgebra import trace_unit_general, trace_unit_solve, unit_e
from .category import FusionCategory, builtin_c5, matmul_mod, pairing_scalar
from .scripts import ShapeDescriptor, bubble_relation, check_relation, evaluate, identity_script, new_sequence, vertex_pass
from .trees import format_tree, parse_pattern, parse_tree


@dataclass(frozen=True)
class WorkedExample:
    name: str
    start: str
    expected: tuple  # ((tree text, coefficient), ...)
    trail: tuple  # factor products, one per end tree, in new-sequence order


EXAMPLES = (
    WorkedExample(
        "ex1",
        "( A ( ( A A ):A A ):A ):1",
        (("( A ( A ( A A ):1 ):A ):1", 4), ("( A ( A ( A A ):A ):A ):1", 3)),
        ((4, 2, 4, 2), (4, 3, 3, 4, 2)),
    ),
    WorkedExample(
        "ex2",
        "( A ( ( A A ):1 A ):A ):1",
        (("( A ( A ( A A ):1 ):A ):1", 2), ("( A ( A ( A A ):A ):A ):1", 3)),
        ((4, 2, 2, 2), (4, 3, 2, 2)),
    ),
    WorkedExample(
        "ex3",
        "( 1 ( ( A A ):A A ):1 ):1",
        (("( 1 ( A ( A A ):A ):1 ):1", 1),),
        ((4, 3, 4, 2),),
    ),
    WorkedExample(
        "ex4",
        "( A ( ( 1 1 ):1 A ):A ):1",
        (("( A ( 1 ( 1 A ):A ):A ):1", 1),),
        ((4, 2, 2),),
    ),
)

EXAMPLE_PATTERN = "( ?p ( ( ?c ?d ):?y ?b ):?a ):1"

# the bubble grows on a two-leaf fork; the variant has the cut inside a three-leaf tree
BUBBLE_CASES = (
    ("bubble", "( ? ? ):1", "R", ("( A A ):1", "( 1 1 ):1")),
    ("bubble-variant", "( ? ( ? ? ):? ):1", "RR", ("( A ( A A ):A ):1", "( 1 ( A A ):1 ):1", "( A ( 1 A ):A ):1")),
)

EXPECTED_E = "I + 3A"
EXPECTED_C = "I + 4A"
BUBBLE_FACTORS = (4, 2, 2)


def product_mod(factors, p: int) -> int:
    out = 1
    for f in factors:
        out = out * f % p
    return out


def bubble_descriptor(cat: FusionCategory, pattern: str, site: str) -> ShapeDescriptor:
    return ShapeDescriptor(parse_pattern(pattern, cat), site)


def computed_coefficients(cat: FusionCategory, example: WorkedExample, script) -> dict:
    out = evaluate(cat, script, parse_tree(example.start, cat))
    return {format_tree(t, cat): c for t, c in out.as_dict().items()}


def reproduce(cat: FusionCategory | None = None) -> tuple[list, bool]:
    """Lines of the reproduction report and whether every row matched."""
    cat = cat or builtin_c5()
    p = cat.prime
    a = cat.index("A")
    ok = True
    lines = ["quinncalc reproduction over C5 (p = 5)", ""]

    def row(label, expected, computed):
        nonlocal ok
        good = expected == computed
        ok &= good
        lines.append(f"{label:<44} {str(expected):<10} {str(computed):<10} {'ok' if good else 'MISMATCH'}")

    lines.append(f"{'quantity':<44} {'expected':<10} {'computed':<10} status")
    block = cat.f_block(a, a, a, a).matrix
    row("F(A,A,A;A) squared is the identity", True, matmul_mod(block, block, p) == ((1, 0), (0, 1)))
    row("coform scalar at A", 3, cat.pairing.coform_scalar(a))
    for x in cat.ids:
        row(f"pairing composite at {cat.name(x)}", 1, pairing_scalar(cat, x))
    row("unit e", EXPECTED_E, unit_e(cat).format(cat))
    row("trace unit c (solve)", EXPECTED_C, trace_unit_solve(cat).format(cat))
    row("trace unit c (general formula)", EXPECTED_C, trace_unit_general(cat).format(cat))
    lines.append("")

    routes = (("newseq", new_sequence()), ("vertexpass", vertex_pass()))
    lines.append(f"{'example / route / end tree':<44} {'expected':<10} {'computed':<10} status")
    for ex in EXAMPLES:
        lines.append(f"{ex.name}: start {ex.start}")
        for route, script in routes:
            got = computed_coefficients(cat, ex, script)
            for tree, coef in ex.expected:
                row(f"  {route:<10} {tree}", coef, got.get(tree, 0))
            extra = sorted(set(got) - {t for t, _ in ex.expected})
            row(f"  {route:<10} other end trees", 0, len(extra))
        for (_, coef), trail in zip(ex.expected, ex.trail):
            shown = "*".join(map(str, trail))
            row(f"  factors {shown} mod {p}", coef, product_mod(trail, p))
    lines.append("")

    rel = check_relation(cat, new_sequence(), vertex_pass())
    row("newseq = vertexpass on every admissible start", "EQUAL", "EQUAL" if rel.equal else "DIFFER")
    lines.append(f"  starts checked: {rel.count}")
    row("bubble factors 4*2*2 mod 5", 1, product_mod(BUBBLE_FACTORS, p))
    for name, pattern, site, _ in BUBBLE_CASES:
        desc = bubble_descriptor(cat, pattern, site)
        rep = check_relation(cat, bubble_relation(desc), identity_script(desc.shape))
        row(f"{name} is the identity ({rep.count} starts)", "EQUAL", "EQUAL" if rep.equal else "DIFFER")
    lines.append("")
    lines.append("all rows match" if ok else "SOME ROWS DO NOT MATCH")
    return lines, ok

