"""Second-kind Chebyshev polynomials with integer coefficients.

Normalization: U_0 = 1, U_1 = A, U_{n+1} = A U_n - U_{n-1}.  With this
convention U_n(2 cos t) = sin((n+1) t) / sin t and

    U_k U_l = U_{|k-l|} + U_{|k-l|+2} + ... + U_{k+l}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import DimensionMismatch, NegativeIndex


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial; ``coefficients[i]`` multiplies ``A**i``.

    Trailing zeros are stripped on construction, so the zero polynomial has
    an empty coefficient tuple.
    """

    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (n - len(self.coefficients))
        b = other.coefficients + (0,) * (n - len(other.coefficients))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(tuple(other * c for c in self.coefficients))
        if not self.coefficients or not other.coefficients:
            return IntPolynomial()
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> IntPolynomial:
        """Multiply by ``A**k``."""
        if not self.coefficients:
            return self
        return IntPolynomial((0,) * k + self.coefficients)

    def __call__(self, value: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * value + c
        return acc

    def __str__(self):
        if not self.coefficients:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("A" if i == 1 else f"A^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


@lru_cache(maxsize=None)
def chebyshev_u(n: int) -> IntPolynomial:
    """The n-th second-kind Chebyshev polynomial."""
    if n < 0:
        raise NegativeIndex(f"Chebyshev index must be nonnegative, got {n}")
    prev, cur = IntPolynomial((1,)), IntPolynomial((0, 1))
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, cur.shift() - prev
    return cur


def product_indices(k: int, l: int) -> list[int]:
    """Indices i with U_k U_l = sum of U_i."""
    if k < 0 or l < 0:
        raise NegativeIndex("Chebyshev indices must be nonnegative")
    return list(range(abs(k - l), k + l + 1, 2))


def to_u_basis(poly: IntPolynomial) -> dict[int, int]:
    """Coordinates of ``poly`` in the basis U_0, U_1, ...  (zeros dropped).

    Since U_n is monic of degree n, peeling off the leading term repeatedly
    terminates with integer coordinates.
    """
    out: dict[int, int] = {}
    rest = poly
    while rest.coefficients:
        d, c = rest.degree, rest.leading
        out[d] = c
        rest = rest - chebyshev_u(d) * c
    return dict(sorted(out.items()))


# --------------------------------------------------------------------------
# operator evaluation
# --------------------------------------------------------------------------


def _dense_matvec(rows: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v) if a and b) for row in rows]


def _sparse_sub(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    out = dict(a)
    for k, val in b.items():
        new = out.get(k, 0) - val
        if new:
            out[k] = new
        else:
            out.pop(k, None)
    return out


def apply_u(op, n: int, v):
    """U_n(op) applied to ``v`` via the vector recursion.

    ``op`` is either a dense square matrix given as a sequence of rows (with
    ``v`` a sequence of ints) or any object with ``dim`` and ``matvec`` that
    acts on sparse ``{index: int}`` dicts (with ``v`` such a dict).  The
    result has the same representation as ``v``.
    """
    if n < 0:
        raise NegativeIndex(f"Chebyshev index must be nonnegative, got {n}")
    if hasattr(op, "matvec"):
        if any(not 0 <= k < op.dim for k in v):
            raise DimensionMismatch("vector index outside operator dimension")
        v = {k: val for k, val in v.items() if val}
        matvec, sub = op.matvec, _sparse_sub
    else:
        rows = [list(r) for r in op]
        if any(len(r) != len(rows) for r in rows):
            raise DimensionMismatch("operator is not square")
        if len(v) != len(rows):
            raise DimensionMismatch(f"vector of length {len(v)} for a {len(rows)}x{len(rows)} operator")
        v = list(v)
        matvec = lambda x: _dense_matvec(rows, x)  # noqa: E731
        sub = lambda a, b: [x - y for x, y in zip(a, b)]  # noqa: E731
    if n == 0:
        return v
    prev, cur = v, matvec(v)
    for _ in range(n - 1):
        prev, cur = cur, sub(matvec(cur), prev)
    return cur


def apply_u_sum(op, indices, v):
    """Sum of U_i(op) v over the multiset ``indices`` (sparse vectors only).

    One recursion run serves every index, so the cost is set by the largest.
    """
    wanted: dict[int, int] = {}
    for i in indices:
        if i < 0:
            raise NegativeIndex(f"Chebyshev index must be nonnegative, got {i}")
        wanted[i] = wanted.get(i, 0) + 1
    out: dict[int, int] = {}
    if not wanted:
        return out

    def take(k, vec):
        mult = wanted.get(k)
        if mult:
            for idx, val in vec.items():
                new = out.get(idx, 0) + mult * val
                if new:
                    out[idx] = new
                else:
                    out.pop(idx, None)

    prev = {k: val for k, val in v.items() if val}
    take(0, prev)
    top = max(wanted)
    if top == 0:
        return out
    cur = op.matvec(prev)
    take(1, cur)
    for k in range(2, top + 1):
        prev, cur = cur, _sparse_sub(op.matvec(cur), prev)
        take(k, cur)
    return out
