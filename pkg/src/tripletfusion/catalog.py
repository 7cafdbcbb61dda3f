"""Parameters, module labels, basis enumeration, blocks and conformal weights.

Everything in this module is exact: central charges and weights are
:class:`fractions.Fraction` values, never floats.

Labels are small frozen dataclasses.  A label only makes sense relative to a
pair ``(p_plus, p_minus)``; use :func:`check_label` (or :func:`parse_label`,
which calls it) to validate one against an :class:`AlgebraParams`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import (
    InadmissibleLabel,
    LabelSyntaxError,
    NotCoprime,
    OrderViolation,
    RangeViolation,
)

PLUS = "+"
MINUS = "-"
SIGNS = (PLUS, MINUS)


def flip(eps: str) -> str:
    return MINUS if eps == PLUS else PLUS


# --------------------------------------------------------------------------
# parameters
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraParams:
    """A validated coprime pair ``2 <= p_plus < p_minus``."""

    p_plus: int
    p_minus: int

    def __post_init__(self):
        p, q = self.p_plus, self.p_minus
        if not isinstance(p, int) or not isinstance(q, int):
            raise TypeError("p_plus and p_minus must be integers")
        if p < 2:
            raise RangeViolation("p_plus must be at least 2")
        if q <= p:
            raise OrderViolation("p_minus must be greater than p_plus")
        if math.gcd(p, q) != 1:
            raise NotCoprime("p_plus and p_minus must be coprime")

    @property
    def central_charge(self) -> Fraction:
        p, q = self.p_plus, self.p_minus
        return 1 - Fraction(6 * (p - q) ** 2, p * q)

    def __str__(self):
        return f"({self.p_plus},{self.p_minus})"


def validate_params(p_plus: int, p_minus: int) -> AlgebraParams:
    return AlgebraParams(p_plus, p_minus)


def coprime_pairs(max_product: int):
    """All valid ``(p_plus, p_minus)`` with ``p_plus * p_minus <= max_product``."""
    out = []
    for p in range(2, max_product + 1):
        for q in range(p + 1, max_product // p + 1):
            if math.gcd(p, q) == 1:
                out.append(AlgebraParams(p, q))
    return out


# --------------------------------------------------------------------------
# labels
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Simple:
    """The simple module X^eps_{r,s}."""

    eps: str
    r: int
    s: int

    def __str__(self):
        return f"X{self.eps}[{self.r},{self.s}]"


@dataclass(frozen=True)
class Minimal:
    """A Virasoro minimal simple L(h_{r,s}); stored as its canonical Kac rep."""

    r: int
    s: int

    def __str__(self):
        return f"L[{self.r},{self.s}]"


@dataclass(frozen=True)
class K:
    r: int
    s: int

    def __str__(self):
        return f"K[{self.r},{self.s}]"


@dataclass(frozen=True)
class KStar:
    r: int
    s: int

    def __str__(self):
        return f"K*[{self.r},{self.s}]"


@dataclass(frozen=True)
class Q:
    """Q(X^eps_{a,b})_{c,d}, a rank two logarithmic module."""

    eps: str
    a: int
    b: int
    c: int
    d: int

    def __str__(self):
        return f"Q(X{self.eps}[{self.a},{self.b}])[{self.c},{self.d}]"


@dataclass(frozen=True)
class P:
    """P^eps_{r,s}, a rank three logarithmic module (thick projective cover)."""

    eps: str
    r: int
    s: int

    def __str__(self):
        return f"P{self.eps}[{self.r},{self.s}]"


ModuleLabel = Union[Simple, Minimal, K, KStar, Q, P]


def format_label(label: ModuleLabel) -> str:
    return str(label)


def SimplePlus(r: int, s: int) -> Simple:
    return Simple(PLUS, r, s)


def SimpleMinus(r: int, s: int) -> Simple:
    return Simple(MINUS, r, s)


def kac_canonical(params: AlgebraParams, r: int, s: int) -> tuple[int, int]:
    """Lexicographic minimum of ``(r, s)`` and ``(p_plus - r, p_minus - s)``."""
    return min((r, s), (params.p_plus - r, params.p_minus - s))


def is_interior(params: AlgebraParams, r: int, s: int) -> bool:
    return 1 <= r < params.p_plus and 1 <= s < params.p_minus


def q_shape(params: AlgebraParams, label: Q) -> str | None:
    """Which family a Q label belongs to, or None if inadmissible.

    ``"row"``: ``(c, d) = (a^vee, b)``, thick for ``b < p_minus``, thin at
    ``b = p_minus``.  ``"col"``: ``(c, d) = (a, b^vee)``, thick for
    ``a < p_plus``, thin at ``a = p_plus``.
    """
    p, q = params.p_plus, params.p_minus
    a, b, c, d = label.a, label.b, label.c, label.d
    if label.eps not in SIGNS:
        return None
    if 1 <= a < p and 1 <= b <= q and (c, d) == (p - a, b):
        return "row"
    if 1 <= a <= p and 1 <= b < q and (c, d) == (a, q - b):
        return "col"
    return None


def check_label(params: AlgebraParams, label, *, interior_plus: bool = False) -> ModuleLabel:
    """Raise :class:`InadmissibleLabel` unless ``label`` is valid for ``params``.

    Interior ``X+[r,s]`` labels are simple modules but not elements of the ring
    P; they are accepted only with ``interior_plus=True`` (the K-ring basis).
    Minimal labels must already be canonical.
    """
    p, q = params.p_plus, params.p_minus
    bad = InadmissibleLabel(f"{label} is not admissible for {params}")
    if isinstance(label, Simple):
        if label.eps not in SIGNS or not (1 <= label.r <= p and 1 <= label.s <= q):
            raise bad
        if label.eps == PLUS and not interior_plus and is_interior(params, label.r, label.s):
            raise InadmissibleLabel(
                f"{label} is interior; the ring basis only contains boundary X+ labels"
            )
    elif isinstance(label, Minimal):
        if not is_interior(params, label.r, label.s):
            raise bad
        if kac_canonical(params, label.r, label.s) != (label.r, label.s):
            raise InadmissibleLabel(f"{label} is not the canonical Kac representative")
    elif isinstance(label, (K, KStar)):
        if not is_interior(params, label.r, label.s):
            raise bad
    elif isinstance(label, Q):
        if q_shape(params, label) is None:
            raise bad
    elif isinstance(label, P):
        if label.eps not in SIGNS or not is_interior(params, label.r, label.s):
            raise bad
    else:
        raise TypeError(f"not a module label: {label!r}")
    return label


_PAIR = r"\[(\d+),(\d+)\]"
_PATTERNS = [
    (re.compile(r"K\*" + _PAIR), lambda m: KStar(int(m[1]), int(m[2]))),
    (re.compile(r"K" + _PAIR), lambda m: K(int(m[1]), int(m[2]))),
    (re.compile(r"X([+-])" + _PAIR), lambda m: Simple(m[1], int(m[2]), int(m[3]))),
    (re.compile(r"L" + _PAIR), lambda m: Minimal(int(m[1]), int(m[2]))),
    (re.compile(r"P([+-])" + _PAIR), lambda m: P(m[1], int(m[2]), int(m[3]))),
    (
        re.compile(r"Q\(X([+-])" + _PAIR + r"\)" + _PAIR),
        lambda m: Q(m[1], int(m[2]), int(m[3]), int(m[4]), int(m[5])),
    ),
]


def parse_label(params: AlgebraParams, text: str, *, interior_plus: bool = False) -> ModuleLabel:
    """Parse the ASCII label grammar; whitespace is ignored.

    ``L[r,s]`` accepts any interior representative and returns the canonical one.
    """
    compact = "".join(text.split())
    for pattern, build in _PATTERNS:
        m = pattern.fullmatch(compact)
        if m:
            label = build(m)
            if isinstance(label, Minimal) and is_interior(params, label.r, label.s):
                label = Minimal(*kac_canonical(params, label.r, label.s))
            return check_label(params, label, interior_plus=interior_plus)
    raise LabelSyntaxError(f"cannot parse module label {text!r}")


# --------------------------------------------------------------------------
# bases
# --------------------------------------------------------------------------


def _p_basis(params: AlgebraParams) -> list[ModuleLabel]:
    p, q = params.p_plus, params.p_minus
    interior = [(r, s) for r in range(1, p) for s in range(1, q)]
    out: list[ModuleLabel] = []
    out += [K(r, s) for r, s in interior]
    out += [KStar(r, s) for r, s in interior]
    out += [Simple(MINUS, r, s) for r, s in interior]
    out += [Simple(PLUS, r, q) for r in range(1, p + 1)]
    out += [Simple(MINUS, r, q) for r in range(1, p + 1)]
    out += [Simple(PLUS, p, s) for s in range(1, q)]
    out += [Simple(MINUS, p, s) for s in range(1, q)]
    for eps in SIGNS:
        out += [Q(eps, r, s, p - r, s) for r, s in interior]
        out += [Q(eps, r, s, r, q - s) for r, s in interior]
    for eps in SIGNS:
        out += [Q(eps, r, q, p - r, q) for r in range(1, p)]
    for eps in SIGNS:
        out += [Q(eps, p, s, p, q - s) for s in range(1, q)]
    for eps in SIGNS:
        out += [P(eps, r, s) for r, s in interior]
    return out


def _k_basis(params: AlgebraParams) -> list[Simple]:
    p, q = params.p_plus, params.p_minus
    return [Simple(eps, r, s) for eps in SIGNS for r in range(1, p + 1) for s in range(1, q + 1)]


def _minimal_basis(params: AlgebraParams) -> list[Minimal]:
    p, q = params.p_plus, params.p_minus
    reps = {kac_canonical(params, r, s) for r in range(1, p) for s in range(1, q)}
    return [Minimal(r, s) for r, s in sorted(reps)]


@lru_cache(maxsize=None)
def _basis(params: AlgebraParams, which: str) -> tuple:
    builder = {"P": _p_basis, "K": _k_basis, "MINIMAL": _minimal_basis}[which]
    return tuple(builder(params))


def enumerate_basis(params: AlgebraParams, which: str = "P") -> list[ModuleLabel]:
    """Ordered basis of P(I) (``"P"``), K(S) (``"K"``) or the Kac table (``"MINIMAL"``)."""
    key = which.upper()
    if key not in ("P", "K", "MINIMAL"):
        raise ValueError(f"unknown basis {which!r}; expected P, K or MINIMAL")
    return list(_basis(params, key))


@lru_cache(maxsize=None)
def basis_index(params: AlgebraParams, which: str = "P") -> dict:
    return {label: i for i, label in enumerate(_basis(params, which.upper()))}


def p_basis_size(params: AlgebraParams) -> int:
    p, q = params.p_plus, params.p_minus
    return 9 * p * q - 5 * p - 5 * q + 3


# --------------------------------------------------------------------------
# blocks
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Thick:
    r: int
    s: int

    def __str__(self):
        return f"Thick({self.r},{self.s})"


@dataclass(frozen=True)
class ThinRow:
    """The thin block containing X+_{r,p_minus} and X-_{r^vee,p_minus}."""

    r: int

    def __str__(self):
        return f"ThinRow({self.r})"


@dataclass(frozen=True)
class ThinCol:
    """The thin block containing X+_{p_plus,s} and X-_{p_plus,s^vee}."""

    s: int

    def __str__(self):
        return f"ThinCol({self.s})"


@dataclass(frozen=True)
class SemiSimple:
    eps: str

    def __str__(self):
        return f"SemiSimple({self.eps})"


BlockId = Union[Thick, ThinRow, ThinCol, SemiSimple]


def enumerate_blocks(params: AlgebraParams) -> list[BlockId]:
    p, q = params.p_plus, params.p_minus
    blocks: list[BlockId] = [Thick(m.r, m.s) for m in _minimal_basis(params)]
    blocks += [ThinRow(r) for r in range(1, p)]
    blocks += [ThinCol(s) for s in range(1, q)]
    blocks += [SemiSimple(PLUS), SemiSimple(MINUS)]
    return blocks


def simple_block(params: AlgebraParams, eps: str, r: int, s: int) -> BlockId:
    p, q = params.p_plus, params.p_minus
    if r == p and s == q:
        return SemiSimple(eps)
    if s == q:
        return ThinRow(r if eps == PLUS else p - r)
    if r == p:
        return ThinCol(s if eps == PLUS else q - s)
    # interior: X+_{r,s} and X-_{r^vee,s} lie in Thick(r,s)
    if eps == PLUS:
        return Thick(*kac_canonical(params, r, s))
    return Thick(*kac_canonical(params, p - r, s))


def block_of(params: AlgebraParams, label: ModuleLabel) -> BlockId:
    """The block containing every composition factor of ``label``."""
    check_label(params, label, interior_plus=True)
    if isinstance(label, Simple):
        return simple_block(params, label.eps, label.r, label.s)
    if isinstance(label, (Minimal, K, KStar)):
        return Thick(*kac_canonical(params, label.r, label.s))
    if isinstance(label, Q):
        return simple_block(params, label.eps, label.a, label.b)
    return simple_block(params, label.eps, label.r, label.s)


# --------------------------------------------------------------------------
# conformal weights
# --------------------------------------------------------------------------
#
# Write t = sqrt(2 p_+ p_-).  Then alpha_+ = t/p_+, alpha_- = -t/p_- and
# alpha_0 = alpha_+ + alpha_- = t (1/p_+ - 1/p_-), so every alpha_{r,s;n} is a
# rational multiple of t and h_alpha = alpha (alpha - alpha_0) / 2 is rational.


def alpha_coefficient(params: AlgebraParams, r: int, s: int, n: int) -> Fraction:
    """The rational u with alpha_{r,s;n} = u * sqrt(2 p_+ p_-)."""
    p, q = params.p_plus, params.p_minus
    return Fraction(1 - r, 2 * p) - Fraction(1 - s, 2 * q) + Fraction(n, 2)


def alpha0_coefficient(params: AlgebraParams) -> Fraction:
    return Fraction(1, params.p_plus) - Fraction(1, params.p_minus)


def weight_of_alpha(params: AlgebraParams, u: Fraction) -> Fraction:
    """h_alpha for alpha = u * sqrt(2 p_+ p_-)."""
    t_squared = 2 * params.p_plus * params.p_minus
    return Fraction(t_squared, 2) * u * (u - alpha0_coefficient(params))


def conformal_weight(params: AlgebraParams, r: int, s: int, n: int = 0) -> Fraction:
    """The exact weight h_{r,s;n}."""
    return weight_of_alpha(params, alpha_coefficient(params, r, s, n))


def top_weight(params: AlgebraParams, eps: str, r: int, s: int, n: int = 0) -> Fraction:
    """Delta^eps_{r,s;n}: lowest weight of the n-th Virasoro layer of X^eps_{r,s}."""
    p, q = params.p_plus, params.p_minus
    h = lambda a, b, m: conformal_weight(params, a, b, m)  # noqa: E731
    if eps == PLUS:
        if r != p and s != q:
            return h(p - r, s, -2 * n - 1)
        if r == p and s != q:
            return h(p, s, -2 * n)
        if r != p:
            return h(r, q, 2 * n)
        return h(p, q, -2 * n)
    if r != p and s != q:
        return h(p - r, s, -2 * n - 2)
    if r == p and s != q:
        return h(p, s, -2 * n - 1)
    if r != p:
        return h(r, q, 2 * n + 1)
    return h(p, q, -2 * n - 1)


@dataclass(frozen=True)
class CatalogEntry:
    label: ModuleLabel
    block: BlockId
    extra: dict = field(default_factory=dict, compare=False)


def catalog_entries(params: AlgebraParams, which: str = "P") -> list[CatalogEntry]:
    return [CatalogEntry(lbl, block_of(params, lbl)) for lbl in enumerate_basis(params, which)]
