"""Multiplicity-free semisimple tensor categories over a prime field.

Objects are referred to by integer ids; id 0 is always the unit object.
Associator blocks follow one fixed convention throughout the package: for a
triple ``(a, b, c)`` with total object ``d`` the rows of ``F(a,b,c;d)`` are the
channels ``e`` of the left-bracketed tree ``((a b)_e c)_d`` and the columns the
channels ``f`` of the right-bracketed tree ``(a (b c)_f)_d``.  A right-bracketed
basis tree with channel ``f`` therefore expands as ``sum_e F[e, f]`` left trees,
and the inverse block performs the opposite rebracketing.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from sympy import Matrix

from .errors import CategoryError, ParseError

UNIT = 0

Matrixlike = Sequence[Sequence[int]]


@dataclass(frozen=True)
class SimpleObject:
    id: int
    name: str
    dual_id: int


@dataclass(frozen=True)
class FusionRules:
    """Fusion multiplicities, stored as the set of admissible triples."""

    triples: frozenset

    def n(self, a: int, b: int, c: int) -> int:
        return 1 if (a, b, c) in self.triples else 0


@dataclass(frozen=True)
class FBlock:
    rows: tuple
    cols: tuple
    matrix: tuple

    def entry(self, row: int, col: int) -> int:
        try:
            return self.matrix[self.rows.index(row)][self.cols.index(col)]
        except ValueError:
            return 0

    def is_identity(self) -> bool:
        return len(self.rows) == len(self.cols) and all(
            self.matrix[i][j] == (i == j) for i in range(len(self.rows)) for j in range(len(self.cols))
        )


@dataclass(frozen=True)
class Associator:
    """Explicitly specified F-blocks; every other admissible block is the identity."""

    blocks: Mapping = field(default_factory=dict)


@dataclass(frozen=True)
class PairingData:
    form: tuple
    coform: tuple

    def form_scalar(self, a: int) -> int:
        return self.form[a]

    def coform_scalar(self, a: int) -> int:
        return self.coform[a]


def inverse_mod(matrix: Matrixlike, p: int) -> tuple:
    """Inverse of a square matrix over Z_p, as a tuple of row tuples."""
    inv = Matrix(matrix).inv_mod(p)
    return tuple(tuple(int(x) % p for x in inv.row(i)) for i in range(inv.rows))


def matmul_mod(x: Matrixlike, y: Matrixlike, p: int) -> tuple:
    return tuple(
        tuple(sum(x[i][k] * y[k][j] for k in range(len(y))) % p for j in range(len(y[0])))
        for i in range(len(x))
    )


@dataclass(frozen=True)
class FusionCategory:
    prime: int
    objects: tuple
    rules: FusionRules
    associator: Associator
    pairing: PairingData

    def __post_init__(self):
        if self.objects[UNIT].dual_id != UNIT:
            raise CategoryError("the unit object must be its own dual")

    # -- object bookkeeping -------------------------------------------------

    @property
    def unit(self) -> int:
        return UNIT

    @property
    def ids(self) -> range:
        return range(len(self.objects))

    @cached_property
    def _by_name(self) -> dict:
        return {o.name: o.id for o in self.objects}

    def index(self, x) -> int:
        """Object id from an id, a name or a SimpleObject."""
        if isinstance(x, SimpleObject):
            x = x.id
        if isinstance(x, str):
            if x not in self._by_name:
                raise CategoryError(f"unknown object {x!r}")
            return self._by_name[x]
        if isinstance(x, int) and 0 <= x < len(self.objects):
            return x
        raise CategoryError(f"unknown object id {x!r}")

    def name(self, a: int) -> str:
        return self.objects[a].name

    def dual(self, a: int) -> int:
        return self.objects[a].dual_id

    def n(self, a: int, b: int, c: int) -> int:
        return self.rules.n(a, b, c)

    def fuse(self, a, b) -> frozenset:
        a, b = self.index(a), self.index(b)
        return frozenset(c for c in self.ids if self.n(a, b, c))

    # -- associator ---------------------------------------------------------

    def left_channels(self, a, b, c, d) -> tuple:
        return tuple(e for e in self.ids if self.n(a, b, e) and self.n(e, c, d))

    def right_channels(self, a, b, c, d) -> tuple:
        return tuple(f for f in self.ids if self.n(b, c, f) and self.n(a, f, d))

    @cached_property
    def _blocks(self) -> dict:
        blocks = {}
        for a, b, c, d in itertools.product(self.ids, repeat=4):
            rows = self.left_channels(a, b, c, d)
            cols = self.right_channels(a, b, c, d)
            if not rows and not cols:
                continue
            given = self.associator.blocks.get((a, b, c, d))
            if given is None:
                given = tuple(tuple(int(i == j) for j in range(len(cols))) for i in range(len(rows)))
            blocks[a, b, c, d] = FBlock(rows, cols, tuple(tuple(x % self.prime for x in r) for r in given))
        return blocks

    @cached_property
    def _inverse_blocks(self) -> dict:
        inverses = {}
        for key, blk in self._blocks.items():
            if len(blk.rows) != len(blk.cols):
                continue
            try:
                inv = inverse_mod(blk.matrix, self.prime)
            except ValueError:
                continue
            inverses[key] = FBlock(blk.cols, blk.rows, inv)
        return inverses

    def f_block(self, a, b, c, d) -> FBlock:
        key = tuple(self.index(x) for x in (a, b, c, d))
        blk = self._blocks.get(key)
        if blk is None or not blk.rows or not blk.cols:
            names = ", ".join(self.name(x) for x in key[:3])
            raise CategoryError(f"inadmissible triple ({names}) with total object {self.name(key[3])}")
        return blk

    def f_inverse(self, a, b, c, d) -> FBlock:
        """Inverse block: rows are right-tree channels f, columns left-tree channels e."""
        self.f_block(a, b, c, d)
        key = tuple(self.index(x) for x in (a, b, c, d))
        if key not in self._inverse_blocks:
            raise CategoryError(f"F-block {key} is not invertible mod {self.prime}")
        return self._inverse_blocks[key]

    def f_entry(self, a: int, b: int, c: int, d: int, e: int, f: int) -> int:
        """Coefficient of left channel e when expanding right channel f."""
        blk = self._blocks.get((a, b, c, d))
        return blk.entry(e, f) if blk else 0

    def finv_entry(self, a: int, b: int, c: int, d: int, f: int, e: int) -> int:
        """Coefficient of right channel f when expanding left channel e."""
        blk = self._inverse_blocks.get((a, b, c, d))
        return blk.entry(f, e) if blk else 0

    def inv(self, x: int) -> int:
        x %= self.prime
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.prime}")
        return pow(x, -1, self.prime)


def fuse(cat: FusionCategory, a, b) -> frozenset:
    return cat.fuse(a, b)


def f_block(cat: FusionCategory, a, b, c, d) -> tuple:
    """The F-block for (a, b, c; d) as a tuple of row tuples."""
    return cat.f_block(a, b, c, d).matrix


def make_category(
    prime: int,
    objects: Sequence[tuple],
    fusion: Mapping,
    blocks: Mapping | None = None,
    coform: Mapping | None = None,
    form: Mapping | None = None,
) -> FusionCategory:
    """Build a category from name-level data.

    ``objects`` is a sequence of ``(name, dual_name)`` pairs with the unit
    (named ``"1"``) first.  ``fusion`` maps ``(x, y)`` name pairs to the list of
    outcomes; unit fusions are added automatically.  ``blocks`` maps
    ``(a, b, c, d)`` name tuples to matrices.
    """
    names = [o[0] for o in objects]
    if not names or names[0] != "1":
        raise CategoryError("the unit object '1' must be declared first")
    if len(set(names)) != len(names):
        raise CategoryError("duplicate object names")
    ids = {nm: i for i, nm in enumerate(names)}

    def idx(nm):
        if nm not in ids:
            raise CategoryError(f"unknown object {nm!r}")
        return ids[nm]

    simple = tuple(SimpleObject(i, nm, idx(d)) for i, (nm, d) in enumerate(objects))
    triples = set()
    for a in range(len(names)):
        triples.add((UNIT, a, a))
        triples.add((a, UNIT, a))
    for (x, y), outs in fusion.items():
        for z in outs:
            triples.add((idx(x), idx(y), idx(z)))
    blks = {}
    for key, mat in (blocks or {}).items():
        blks[tuple(idx(k) for k in key)] = tuple(tuple(int(v) % prime for v in row) for row in mat)
    lam = [1] * len(names)
    big_lam = [1] * len(names)
    for nm, v in (form or {}).items():
        lam[idx(nm)] = int(v) % prime
    for nm, v in (coform or {}).items():
        big_lam[idx(nm)] = int(v) % prime
    return FusionCategory(
        prime=prime,
        objects=simple,
        rules=FusionRules(frozenset(triples)),
        associator=Associator(blks),
        pairing=PairingData(tuple(lam), tuple(big_lam)),
    )


def builtin_c5() -> FusionCategory:
    """The two-object category {1, A} over Z_5 with A (x) A = 1 + A."""
    return make_category(
        5,
        [("1", "1"), ("A", "A")],
        {("A", "A"): ["1", "A"]},
        blocks={("A", "A", "A", "A"): [[2, 4], [3, 3]]},
        coform={"A": 3},
    )


def trivial_category(prime: int = 5) -> FusionCategory:
    return make_category(prime, [("1", "1")], {})


def pointed_z2(prime: int, twisted: bool = False) -> FusionCategory:
    """Vec(Z_2), optionally with the nontrivial 3-cocycle (F(g,g,g;g) = -1)."""
    sign = -1 if twisted else 1
    return make_category(
        prime,
        [("1", "1"), ("g", "g")],
        {("g", "g"): ["1"]},
        blocks={("g", "g", "g", "g"): [[sign]]},
        coform={"g": sign},
    )


def fibonacci(prime: int) -> FusionCategory:
    """Fibonacci fusion rules over Z_p, for primes where x^2 = x + 1 has a root.

    The F-matrix is the involutory one with diagonal (q, -q), q = 1/phi, in
    the gauge where the off-diagonal entries are 1 and q.
    """
    roots = [x for x in range(prime) if (x * x - x - 1) % prime == 0]
    if not roots:
        raise CategoryError(f"x^2 = x + 1 has no root mod {prime}")
    phi = roots[0]
    q = pow(phi, -1, prime)
    return make_category(
        prime,
        [("1", "1"), ("t", "t")],
        {("t", "t"): ["1", "t"]},
        blocks={("t", "t", "t", "t"): [[q, 1], [q, -q]]},
        coform={"t": pow(q, -1, prime)},
    )


# -- validation -----------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self, cat: FusionCategory | None = None) -> list:
        out = []
        for c in self.checks:
            line = f"{c.name:<24} {'PASS' if c.passed else 'FAIL'}"
            if not c.passed and c.witness is not None:
                wit = c.witness
                if cat is not None:
                    wit = tuple(cat.name(x) if isinstance(x, int) else x for x in wit)
                line += f"  witness={wit}"
            if c.detail:
                line += f"  {c.detail}"
            out.append(line)
        return out


def _first(pred, items):
    for it in items:
        if not pred(it):
            return it
    return None


def pentagon_defect(cat: FusionCategory):
    """First labelling at which the two rebracketing paths disagree, else None.

    Moves from the fully left-bracketed tree (((a b)_f c)_g d)_e to the fully
    right-bracketed tree (a (b (c d)_h)_k)_e, once with two moves and once with
    three, and compares the coefficients entry by entry.
    """
    p = cat.prime
    obj = cat.ids
    n = cat.n
    g = cat.finv_entry
    for a, b, c, d, e in itertools.product(obj, repeat=5):
        for f_, gg in itertools.product(obj, repeat=2):
            if not (n(a, b, f_) and n(f_, c, gg) and n(gg, d, e)):
                continue
            for h, k in itertools.product(obj, repeat=2):
                if not (n(c, d, h) and n(b, h, k) and n(a, k, e)):
                    continue
                two = g(f_, c, d, e, h, gg) * g(a, b, h, e, k, f_)
                three = sum(
                    g(a, b, c, gg, l, f_) * g(a, l, d, e, k, gg) * g(b, c, d, k, h, l) for l in obj
                )
                if (two - three) % p:
                    return (a, b, c, d, e, f_, gg, h, k)
    return None


def pairing_scalar(cat: FusionCategory, a: int) -> int:
    """Scalar of coform (at the dual), rebracketing, then form at object a."""
    ad = cat.dual(a)
    return (cat.pairing.form_scalar(a) * cat.pairing.coform_scalar(ad) * cat.f_entry(a, ad, a, a, UNIT, UNIT)) % cat.prime


def validate(cat: FusionCategory) -> ValidationReport:
    """Check every structural axiom; failures are reported, never raised."""
    obj = list(cat.ids)
    n = cat.n
    checks = []

    bad = _first(
        lambda t: bool(n(UNIT, t[0], t[1])) == (t[0] == t[1]) and bool(n(t[0], UNIT, t[1])) == (t[0] == t[1]),
        itertools.product(obj, repeat=2),
    )
    checks.append(CheckResult("unit laws", bad is None, bad))

    bad = _first(
        lambda t: bool(n(t[0], t[1], UNIT)) == (t[1] == cat.dual(t[0])) and cat.dual(cat.dual(t[0])) == t[0],
        itertools.product(obj, repeat=2),
    )
    checks.append(CheckResult("duality", bad is None, bad))

    bad = _first(
        lambda t: sum(n(t[0], t[1], e) * n(e, t[2], t[3]) for e in obj)
        == sum(n(t[1], t[2], f) * n(t[0], f, t[3]) for f in obj),
        itertools.product(obj, repeat=4),
    )
    checks.append(CheckResult("fusion associativity", bad is None, bad))

    bad = _first(lambda key: key in cat._inverse_blocks, sorted(cat._blocks))
    checks.append(CheckResult("block invertibility", bad is None, bad))

    bad = _first(
        lambda key: UNIT not in key[:3] or cat._blocks[key].is_identity(),
        sorted(cat._blocks),
    )
    checks.append(CheckResult("triangle", bad is None, bad))

    if checks[-2].passed:
        bad = pentagon_defect(cat)
        checks.append(CheckResult("pentagon", bad is None, bad))
    else:
        checks.append(CheckResult("pentagon", False, None, "skipped: singular blocks"))

    bad = _first(lambda a: pairing_scalar(cat, a) == 1, obj)
    checks.append(CheckResult("pairing nondegeneracy", bad is None, None if bad is None else (bad,)))
    return ValidationReport(tuple(checks))


# -- category files ---------------------------------------------------------------

_MATRIX = re.compile(r"^\[\s*(\[[^\[\]]*\]\s*(,\s*\[[^\[\]]*\]\s*)*)?\]$")


def _parse_matrix(text: str, lineno: int, col: int) -> list:
    text = text.strip()
    if not _MATRIX.match(text):
        raise ParseError(f"malformed matrix {text!r}", lineno, col)
    rows = re.findall(r"\[([^\[\]]*)\]", text[1:-1])
    try:
        return [[int(x) for x in r.split(",") if x.strip()] for r in rows]
    except ValueError as exc:
        raise ParseError(f"non-integer matrix entry in {text!r}", lineno, col) from exc


def parse_category(text: str, prime: int | None = None) -> FusionCategory:
    """Parse the line-oriented category format; ``prime`` overrides the file's."""
    file_prime = None
    objects, fusion, blocks, coform, form = [], {}, {}, {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = raw.index(line[0]) + 1
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "prime":
                file_prime = int(rest)
            elif head == "object":
                m = re.fullmatch(r"(\S+)\s+dual=(\S+)", rest)
                if not m:
                    raise ParseError("expected 'object <name> dual=<name>'", lineno, col)
                objects.append((m.group(1), m.group(2)))
            elif head == "fuse":
                m = re.fullmatch(r"(\S+)\s+(\S+)\s*->\s*(.*)", rest)
                if not m:
                    raise ParseError("expected 'fuse <a> <b> -> <c> ...'", lineno, col)
                fusion.setdefault((m.group(1), m.group(2)), []).extend(m.group(3).split())
            elif head == "F":
                m = re.fullmatch(r"(\S+)\s+(\S+)\s+(\S+)\s*@\s*(\S+)\s*=\s*(.*)", rest)
                if not m:
                    raise ParseError("expected 'F <a> <b> <c> @ <d> = [[...]]'", lineno, col)
                blocks[m.group(1, 2, 3, 4)] = _parse_matrix(m.group(5), lineno, col + len(head) + 1 + m.start(5))
            elif head in ("coform", "form"):
                m = re.fullmatch(r"(\S+)\s*=\s*(-?\d+)", rest)
                if not m:
                    raise ParseError(f"expected '{head} <name> = <int>'", lineno, col)
                (coform if head == "coform" else form)[m.group(1)] = int(m.group(2))
            else:
                raise ParseError(f"unknown directive {head!r}", lineno, col)
        except ValueError as exc:
            raise ParseError(str(exc), lineno, col) from exc
    p = prime if prime is not None else file_prime
    if p is None:
        raise ParseError("missing 'prime' line")
    if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        raise CategoryError(f"{p} is not prime")
    try:
        return make_category(p, objects, fusion, blocks, coform, form)
    except CategoryError as exc:
        raise ParseError(str(exc)) from exc


def format_category(cat: FusionCategory) -> str:
    """Canonical text form; ``parse_category(format_category(c)) == c``."""
    nm = cat.name
    lines = [f"prime {cat.prime}"]
    lines += [f"object {o.name} dual={nm(o.dual_id)}" for o in cat.objects]
    for a, b in itertools.product(cat.ids, repeat=2):
        if UNIT in (a, b):
            continue
        outs = sorted(c for c in cat.ids if cat.n(a, b, c))
        if outs:
            lines.append(f"fuse {nm(a)} {nm(b)} -> {' '.join(nm(c) for c in outs)}")
    for key in sorted(cat.associator.blocks):
        mat = cat.associator.blocks[key]
        body = ",".join("[" + ",".join(str(v) for v in row) + "]" for row in mat)
        lines.append(f"F {nm(key[0])} {nm(key[1])} {nm(key[2])} @ {nm(key[3])} = [{body}]")
    for a in cat.ids:
        if cat.pairing.form[a] != 1:
            lines.append(f"form {nm(a)} = {cat.pairing.form[a]}")
    for a in cat.ids:
        if cat.pairing.coform[a] != 1:
            lines.append(f"coform {nm(a)} = {cat.pairing.coform[a]}")
    return "\n".join(lines) + "\n"


BUILTINS = {"c5": builtin_c5}


def load_category(spec: str, prime: int | None = None) -> FusionCategory:
    """A built-in name (``c5``) or a path to a category file."""
    if spec in BUILTINS:
        if prime is not None:
            raise CategoryError("--p is only allowed with category files")
        return BUILTINS[spec]()
    path = Path(spec)
    if not path.exists():
        raise CategoryError(f"no such category file or built-in: {spec}")
    return parse_category(path.read_text(encoding="utf-8"), prime)


def objects_named(cat: FusionCategory, names: Iterable[str]) -> list:
    return [cat.index(x) for x in names]
