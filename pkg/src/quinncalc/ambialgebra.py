"""The ambialgebra on two-leaf forks and its trace unit.

The fork ``(a, dual a)_1`` is written ``I_a`` (``I`` for the unit object).
In the multiplicity-free fork basis the product, coproduct and swap are
diagonal per object, so they are carried by one scalar each::

    m(I_a (x) I_b)  = delta_ab * m_factor(a) * I_a
    Delta(I_a)      = delta_factor(a) * I_a (x) I_a
    Psi(x (x) y)    = y (x) x

The ``replay_*`` functions recompute the same maps by running the rewriting
moves on actual roottrees; they exist to cross-check the scalar formulas.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .category import UNIT, FusionCategory
from .errors import NotSpecialError, ParseError
from .trees import (
    Fork,
    Leaf,
    StateVector,
    apply_coform,
    apply_form,
    assoc,
    insert_unit_leaf,
    remove_unit_leaf,
    split_at,
)


@dataclass(frozen=True)
class AlgebraElement:
    prime: int
    coeffs: tuple

    @classmethod
    def from_dict(cls, cat: FusionCategory, coeffs) -> "AlgebraElement":
        vals = [0] * len(cat.objects)
        for k, v in coeffs.items():
            vals[cat.index(k)] = v % cat.prime
        return cls(cat.prime, tuple(vals))

    def __getitem__(self, a: int) -> int:
        return self.coeffs[a]

    def format(self, cat: FusionCategory) -> str:
        parts = []
        for a, c in enumerate(self.coeffs):
            if not c:
                continue
            sym = "I" if a == UNIT else cat.name(a)
            if c == 1:
                parts.append(sym)
            elif sym[0].isdigit():
                parts.append(f"{c}*{sym}")
            else:
                parts.append(f"{c}{sym}")
        return " + ".join(parts) or "0"


def parse_element(text: str, cat: FusionCategory) -> AlgebraElement:
    """Parse ``I + 4A``; coefficients are reduced mod p."""
    coeffs = {}
    if text.strip() == "0":
        return AlgebraElement.from_dict(cat, {})
    for raw in text.split("+"):
        term = raw.strip()
        m = re.fullmatch(r"(\d*)\s*\*?\s*(\S+)", term)
        if not m:
            raise ParseError(f"bad algebra term {term!r}")
        k = int(m.group(1)) if m.group(1) else 1
        name = m.group(2)
        a = UNIT if name == "I" else None
        if a is None:
            if name not in [o.name for o in cat.objects]:
                raise ParseError(f"unknown object {name!r} in {text!r}")
            a = cat.index(name)
        coeffs[a] = coeffs.get(a, 0) + k
    return AlgebraElement.from_dict(cat, coeffs)


@dataclass(frozen=True)
class StructureScalars:
    m_factor: tuple
    delta_factor: tuple
    e_coeff: tuple
    c_coeff: tuple


def _structure(cat: FusionCategory):
    p = cat.prime
    m, delta = [], []
    for a in cat.ids:
        ad = cat.dual(a)
        # product: one rebracketing brings the inner dual pair together, then the form
        m.append(cat.pairing.form_scalar(ad) * cat.f_entry(ad, a, ad, ad, UNIT, UNIT) % p)
        # coproduct: coform, then the inverse rebracketing (the one over the root is trivial)
        delta.append(cat.pairing.coform_scalar(ad) * cat.finv_entry(ad, a, ad, ad, UNIT, UNIT) % p)
    return m, delta


def structure_scalars(cat: FusionCategory) -> StructureScalars:
    p = cat.prime
    m, delta = _structure(cat)
    if any(x == 0 for x in delta):
        bad = delta.index(0)
        raise NotSpecialError(f"degenerate pairing: coproduct vanishes on {cat.name(bad)}")
    e = []
    c = []
    for a in cat.ids:
        if m[a] == 0:
            raise NotSpecialError(f"product vanishes on {cat.name(a)}; no unit exists")
        e.append(pow(m[a], -1, p))
        c.append(e[a] * pow(m[a] * delta[a], -1, p) % p)
    return StructureScalars(tuple(m), tuple(delta), tuple(e), tuple(c))


def product(cat: FusionCategory, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    m, _ = _structure(cat)
    return AlgebraElement(cat.prime, tuple(x[a] * y[a] * m[a] % cat.prime for a in cat.ids))


def coproduct(cat: FusionCategory, x: AlgebraElement) -> dict:
    """Delta(x) as a map ``(a, b) -> coeff`` on pairs of fork labels."""
    _, delta = _structure(cat)
    return {(a, a): x[a] * delta[a] % cat.prime for a in cat.ids if x[a] * delta[a] % cat.prime}


def swap(tensor: dict) -> dict:
    return {(b, a): c for (a, b), c in tensor.items()}


def multiply_tensor(cat: FusionCategory, tensor: dict) -> AlgebraElement:
    m, _ = _structure(cat)
    vals = [0] * len(cat.objects)
    for (a, b), c in tensor.items():
        if a == b:
            vals[a] = (vals[a] + c * m[a]) % cat.prime
    return AlgebraElement(cat.prime, tuple(vals))


def trace_composite(cat: FusionCategory, x: AlgebraElement) -> AlgebraElement:
    """m . Psi . Delta applied to x."""
    return multiply_tensor(cat, swap(coproduct(cat, x)))


def unit_e(cat: FusionCategory) -> AlgebraElement:
    return AlgebraElement(cat.prime, structure_scalars(cat).e_coeff)


def trace_unit_solve(cat: FusionCategory) -> AlgebraElement:
    """Solve m Psi Delta (c) = e object by object."""
    m, delta = _structure(cat)
    for a in cat.ids:
        if m[a] * delta[a] % cat.prime == 0:
            raise NotSpecialError(f"m Psi Delta vanishes on {cat.name(a)}: the ambialgebra is not special")
    return AlgebraElement(cat.prime, structure_scalars(cat).c_coeff)


def trace_unit_general(cat: FusionCategory) -> AlgebraElement:
    """c_a = (lambda Phi Lambda)_a ** 2, Phi the factor-free swap of the dual pair."""
    p = cat.prime
    m, delta = _structure(cat)
    for a in cat.ids:
        if m[a] * delta[a] % p == 0:
            raise NotSpecialError(f"m Psi Delta vanishes on {cat.name(a)}: the ambialgebra is not special")
    vals = []
    for a in cat.ids:
        loop = cat.pairing.form_scalar(a) * cat.pairing.coform_scalar(cat.dual(a))
        vals.append(loop * loop % p)
    return AlgebraElement(p, tuple(vals))


# -- roottree replays ----------------------------------------------------------------


def fork(a: int, b: int, label: int = UNIT) -> Fork:
    return Fork(Leaf(a), Leaf(b), label)


def replay_pairing(cat: FusionCategory, a: int) -> StateVector:
    """Coform next to a strand labelled a, rebracket, then apply the form."""
    ad = cat.dual(a)
    s = StateVector.basis(cat.prime, fork(ad, a))
    s = insert_unit_leaf(s, "R", "R")
    s = apply_coform(cat, s, "RR", ad)
    s = assoc(cat, s, "R", "L")
    s = apply_form(cat, s, "RL")
    return remove_unit_leaf(s, "RL")


def replay_product(cat: FusionCategory, a: int, b: int) -> StateVector:
    """m(I_a (x) I_b) on the tree ((a a*)_1 (b b*)_1)_1, result on a two-leaf fork."""
    if b != a:
        # the inner pair (a*, b) has no unit channel, so the form kills every term
        return StateVector.zero(cat.prime, fork(a, b))
    s = StateVector.basis(cat.prime, Fork(fork(a, cat.dual(a)), fork(b, cat.dual(b)), UNIT))
    s = assoc(cat, s, "", "R")
    s = assoc(cat, s, "R", "L")
    s = apply_form(cat, s, "RL")
    return remove_unit_leaf(s, "RL")


def replay_coproduct(cat: FusionCategory, a: int):
    """Delta(I_a): coform, two rebracketings, split at the unit edge."""
    ad = cat.dual(a)
    s = StateVector.basis(cat.prime, fork(a, ad))
    s = insert_unit_leaf(s, "R", "L")
    out = None
    for b in cat.ids:
        t = apply_coform(cat, s, "RL", b)
        t = assoc(cat, t, "R", "R")
        t = assoc(cat, t, "", "L")
        out = t if out is None else out + t
    return split_at(out, "L")


def replay_trace_composite(cat: FusionCategory, x: AlgebraElement) -> AlgebraElement:
    """m Psi Delta (x) computed entirely with roottree moves."""
    p = cat.prime
    vals = [0] * len(cat.objects)
    for a in cat.ids:
        if not x[a]:
            continue
        split = replay_coproduct(cat, a)
        for (lower, upper), c in split.terms:
            lower = remove_unit_leaf(StateVector.basis(p, lower), "L")
            for (lt, lc) in lower.terms:
                # Psi swaps the two tensor factors; it carries no factor
                left, right = upper, lt
                prod = replay_product(cat, left.left.label, right.left.label)
                for t, k in prod.terms:
                    vals[t.left.label] = (vals[t.left.label] + x[a] * c * lc * k) % p
    return AlgebraElement(p, tuple(vals))
