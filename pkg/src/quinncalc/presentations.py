"""Free-group words, group presentations and Q**-transformations.

A word is a tuple of nonzero ints: generator ``i`` (0-based) is ``i + 1`` and
its inverse ``-(i + 1)``.  Relators are kept freely reduced but never
cyclically reduced, so a conjugation stays visible.

Text forms use single letters: ``<a,b | a b A B, a a b>`` with uppercase for
inverses.  Transformation scripts have one line per step, indices 1-based::

    conj 1 by "ab"      # R_1 -> w R_1 w^-1
    inv 2               # R_2 -> R_2^-1
    mulR 1 2            # R_1 -> R_1 R_2   (mulL: R_2 R_1)
    ginv 1              # a_1 -> a_1^-1 in every relator
    gmulR 1 2           # a_1 -> a_1 a_2   (gmulL: a_2 a_1)
    prolong "ab"        # new generator a, new relator w^-1 a
    deprolong
    swap 1 2            # exchange R_1 and R_2 (convenience, not one of a)-f))
"""
from __future__ import annotations

import random
import re
import shlex
from dataclasses import dataclass

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from .errors import ParseError, QuinnError


class PresentationError(QuinnError):
    pass


def free_reduce(word) -> tuple:
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(word) -> tuple:
    return tuple(-x for x in reversed(word))


def substitute(word, images: dict) -> tuple:
    """Replace each generator ``g`` (1-based) by ``images[g]``; inverses follow."""
    out = []
    for x in word:
        img = images.get(abs(x), (abs(x),))
        out.extend(img if x > 0 else inverse(img))
    return free_reduce(out)


@dataclass(frozen=True)
class Presentation:
    n: int
    relators: tuple

    def __post_init__(self):
        for r in self.relators:
            if any(x == 0 or abs(x) > self.n for x in r):
                raise PresentationError(f"relator {r} uses a generator outside 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.relators)

    @property
    def deficiency(self) -> int:
        return self.n - self.m

    def reduced(self) -> "Presentation":
        return Presentation(self.n, tuple(free_reduce(r) for r in self.relators))


# -- transformations ----------------------------------------------------------------


@dataclass(frozen=True)
class Conjugate:
    i: int
    w: tuple

    def apply(self, p):
        _check_rel(p, self.i)
        return _set(p, self.i, free_reduce(self.w + p.relators[self.i] + inverse(self.w)))

    def inverse(self, p):
        return [Conjugate(self.i, inverse(self.w))]


@dataclass(frozen=True)
class Invert:
    i: int

    def apply(self, p):
        _check_rel(p, self.i)
        return _set(p, self.i, inverse(p.relators[self.i]))

    def inverse(self, p):
        return [self]


@dataclass(frozen=True)
class Multiply:
    i: int
    k: int
    side: str = "R"

    def apply(self, p):
        _check_rel(p, self.i)
        _check_rel(p, self.k)
        if self.i == self.k:
            raise PresentationError("relator multiplication needs i != k")
        ri, rk = p.relators[self.i], p.relators[self.k]
        return _set(p, self.i, free_reduce(ri + rk if self.side == "R" else rk + ri))

    def inverse(self, p):
        return [Invert(self.k), self, Invert(self.k)]


@dataclass(frozen=True)
class InvertGenerator:
    i: int

    def apply(self, p):
        _check_gen(p, self.i)
        g = self.i + 1
        return Presentation(p.n, tuple(substitute(r, {g: (-g,)}) for r in p.relators))

    def inverse(self, p):
        return [self]


@dataclass(frozen=True)
class MultiplyGenerator:
    i: int
    k: int
    side: str = "R"

    def apply(self, p):
        _check_gen(p, self.i)
        _check_gen(p, self.k)
        if self.i == self.k:
            raise PresentationError("generator substitution needs i != k")
        g, h = self.i + 1, self.k + 1
        img = (g, h) if self.side == "R" else (h, g)
        return Presentation(p.n, tuple(substitute(r, {g: img}) for r in p.relators))

    def inverse(self, p):
        return [InvertGenerator(self.k), self, InvertGenerator(self.k)]


@dataclass(frozen=True)
class Prolong:
    """Add a generator ``a`` and the relator ``w^-1 a``."""

    w: tuple = ()

    def apply(self, p):
        if any(x == 0 or abs(x) > p.n for x in self.w):
            raise PresentationError("prolongation word uses an unknown generator")
        new = p.n + 1
        return Presentation(new, p.relators + (free_reduce(inverse(self.w) + (new,)),))

    def inverse(self, p):
        return [Deprolong()]


@dataclass(frozen=True)
class Deprolong:
    def apply(self, p):
        return deprolong(p)

    def inverse(self, p):
        return [Prolong(_prolong_word(p))]


@dataclass(frozen=True)
class SwapRelators:
    i: int
    k: int

    def apply(self, p):
        _check_rel(p, self.i)
        _check_rel(p, self.k)
        rels = list(p.relators)
        rels[self.i], rels[self.k] = rels[self.k], rels[self.i]
        return Presentation(p.n, tuple(rels))

    def inverse(self, p):
        return [self]


def _check_rel(p, i):
    if not 0 <= i < p.m:
        raise PresentationError(f"no relator {i + 1}")


def _check_gen(p, i):
    if not 0 <= i < p.n:
        raise PresentationError(f"no generator {i + 1}")


def _set(p, i, word):
    rels = list(p.relators)
    rels[i] = word
    return Presentation(p.n, tuple(rels))


def _prolong_word(p: Presentation) -> tuple:
    if not p.relators or p.n == 0:
        raise PresentationError("nothing to deprolong")
    a = p.n
    last = free_reduce(p.relators[-1])
    if not last or last[-1] != a or any(abs(x) == a for x in last[:-1]):
        raise PresentationError("last relator is not of the form w^-1 a")
    if any(abs(x) == a for r in p.relators[:-1] for x in r):
        raise PresentationError("the last generator occurs in another relator")
    return inverse(last[:-1])


def apply_q(p: Presentation, t) -> Presentation:
    """Apply a relator transformation: conjugation, inversion or multiplication."""
    if not isinstance(t, (Conjugate, Invert, Multiply, SwapRelators)):
        raise PresentationError(f"{t} is not a relator transformation")
    return t.apply(p)


def apply_gen(p: Presentation, t) -> Presentation:
    """Apply a generator substitution a_i -> a_i^-1 or a_i -> a_i a_k."""
    if not isinstance(t, (InvertGenerator, MultiplyGenerator)):
        raise PresentationError(f"{t} is not a generator substitution")
    return t.apply(p)


def prolong(p: Presentation, w=()) -> Presentation:
    return Prolong(tuple(w)).apply(p)


def deprolong(p: Presentation) -> Presentation:
    _prolong_word(p)
    return Presentation(p.n - 1, p.relators[:-1])


def apply_script(p: Presentation, steps) -> Presentation:
    for t in steps:
        p = t.apply(p)
    return p


def inverse_script(p: Presentation, steps) -> list:
    """Steps undoing ``steps`` when applied to ``apply_script(p, steps)``."""
    inverses = []
    for t in steps:
        inverses.append(t.inverse(p))
        p = t.apply(p)
    return [s for inv in reversed(inverses) for s in inv]


# -- integer invariants -------------------------------------------------------------


def relation_matrix(p: Presentation) -> list:
    """Exponent sums: one row per relator, one column per generator."""
    rows = []
    for r in p.relators:
        row = [0] * p.n
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return rows


def smith_invariants(p: Presentation) -> list:
    """Diagonal of the Smith normal form of the abelianised relation matrix."""
    if p.m == 0 or p.n == 0:
        return []
    snf = smith_normal_form(Matrix(relation_matrix(p)), domain=ZZ)
    return [abs(int(snf[i, i])) for i in range(min(p.m, p.n))]


# -- text forms ---------------------------------------------------------------------

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def parse_word(text: str, n: int | None = None) -> tuple:
    word = []
    for ch in text:
        if ch.isspace() or ch == "1":
            continue
        if ch.lower() not in LETTERS:
            raise ParseError(f"bad letter {ch!r} in word {text!r}")
        g = LETTERS.index(ch.lower()) + 1
        if n is not None and g > n:
            raise ParseError(f"generator {ch!r} out of range in {text!r}")
        word.append(g if ch.islower() else -g)
    return tuple(word)


def format_word(word) -> str:
    if not word:
        return "1"
    return " ".join(LETTERS[abs(x) - 1] if x > 0 else LETTERS[abs(x) - 1].upper() for x in word)


def parse_presentation(text: str) -> Presentation:
    m = re.fullmatch(r"\s*<\s*([^|>]*)\|([^>]*)>\s*", text)
    if not m:
        raise ParseError(f"expected '<gens | relators>', got {text!r}")
    gens = [g.strip() for g in m.group(1).split(",") if g.strip()]
    if gens != list(LETTERS[: len(gens)]):
        raise ParseError("generators must be a, b, c, ... in order")
    rels = [r for r in m.group(2).split(",") if r.strip() and r.strip() != "-"]
    return Presentation(len(gens), tuple(free_reduce(parse_word(r, len(gens))) for r in rels))


def format_presentation(p: Presentation) -> str:
    gens = ",".join(LETTERS[: p.n])
    rels = ", ".join(format_word(r) for r in p.relators)
    return f"<{gens} | {rels}>"


def parse_transformation(line: str, lineno: int = 1):
    try:
        toks = shlex.split(line)
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from exc
    if not toks:
        raise ParseError("empty transformation", lineno)
    head, args = toks[0], toks[1:]
    try:
        if head == "conj" and len(args) == 3 and args[1] == "by":
            return Conjugate(int(args[0]) - 1, parse_word(args[2]))
        if head == "inv" and len(args) == 1:
            return Invert(int(args[0]) - 1)
        if head in ("mulR", "mulL") and len(args) == 2:
            return Multiply(int(args[0]) - 1, int(args[1]) - 1, head[-1])
        if head == "ginv" and len(args) == 1:
            return InvertGenerator(int(args[0]) - 1)
        if head in ("gmulR", "gmulL") and len(args) == 2:
            return MultiplyGenerator(int(args[0]) - 1, int(args[1]) - 1, head[-1])
        if head == "prolong" and len(args) <= 1:
            return Prolong(parse_word(args[0]) if args else ())
        if head == "deprolong" and not args:
            return Deprolong()
        if head == "swap" and len(args) == 2:
            return SwapRelators(int(args[0]) - 1, int(args[1]) - 1)
    except ValueError as exc:
        raise ParseError(f"bad index in {line!r}", lineno) from exc
    raise ParseError(f"cannot parse transformation {line!r}", lineno)


def format_transformation(t) -> str:
    if isinstance(t, Conjugate):
        return f'conj {t.i + 1} by "{format_word(t.w).replace(" ", "") if t.w else ""}"'
    if isinstance(t, Invert):
        return f"inv {t.i + 1}"
    if isinstance(t, Multiply):
        return f"mul{t.side} {t.i + 1} {t.k + 1}"
    if isinstance(t, InvertGenerator):
        return f"ginv {t.i + 1}"
    if isinstance(t, MultiplyGenerator):
        return f"gmul{t.side} {t.i + 1} {t.k + 1}"
    if isinstance(t, Prolong):
        return f'prolong "{format_word(t.w).replace(" ", "") if t.w else ""}"'
    if isinstance(t, Deprolong):
        return "deprolong"
    if isinstance(t, SwapRelators):
        return f"swap {t.i + 1} {t.k + 1}"
    raise TypeError(t)


def parse_transformations(text: str) -> list:
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            steps.append(parse_transformation(line, lineno))
    return steps


# -- random generation, used by tests and demos --------------------------------------


def random_word(rng: random.Random, n: int, max_len: int) -> tuple:
    return tuple(rng.choice([1, -1]) * rng.randint(1, n) for _ in range(rng.randint(0, max_len)))


def random_presentation(rng: random.Random, max_gens: int = 3, max_rels: int = 3, max_len: int = 8) -> Presentation:
    n = rng.randint(1, max_gens)
    m = rng.randint(1, max_rels)
    return Presentation(n, tuple(free_reduce(random_word(rng, n, max_len)) for _ in range(m)))


def random_q_step(rng: random.Random, p: Presentation, max_len: int = 4):
    kinds = ["conj", "inv"] + (["mul"] if p.m > 1 else [])
    kind = rng.choice(kinds)
    i = rng.randrange(p.m)
    if kind == "conj":
        return Conjugate(i, free_reduce(random_word(rng, p.n, max_len)))
    if kind == "inv":
        return Invert(i)
    k = rng.choice([j for j in range(p.m) if j != i])
    return Multiply(i, k, rng.choice("LR"))
