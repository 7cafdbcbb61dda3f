"""Independent reference computations used only by the tests."""

from fractions import Fraction

import numpy as np
import sympy


def weight_closed_form(p, q, r, s, n=0):
    """h_{r,s;n} = ((q r - p s - n p q)^2 - (q - p)^2) / (4 p q)."""
    return Fraction((q * r - p * s - n * p * q) ** 2 - (q - p) ** 2, 4 * p * q)


def chebyshev_coefficients(n):
    """U_n(A) in the monic normalization, via sympy's U_n(x) at x = A/2."""
    a = sympy.Symbol("a")
    poly = sympy.Poly(sympy.expand(sympy.chebyshevu(n, a / 2)), a)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    return tuple(coeffs)


def dense_matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def dense_matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dense_poly_eval(coeffs, m):
    """sum c_i m^i as a dense matrix, by Horner's rule."""
    n = len(m)
    acc = [[0] * n for _ in range(n)]
    for c in reversed(coeffs):
        acc = dense_matmul(acc, m)
        for i in range(n):
            acc[i][i] += c
    return acc


def dense_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _object_matrix(op):
    return np.array(op.to_dense(), dtype=object)


def _object_poly_eval(coeffs, m):
    n = m.shape[0]
    acc = np.zeros((n, n), dtype=object)
    eye = np.identity(n, dtype=int).astype(object)
    for c in reversed(coeffs):
        acc = acc.dot(m) + c * eye
    return acc


class DenseOracle:
    """f(X, Y, Z) as dense exact matrices, with U_n(X) built from sympy coefficients."""

    def __init__(self, action):
        self.X, self.Y, self.Z = (_object_matrix(op) for op in (action.x, action.y, action.z))
        self._u = {}

    def u(self, which, n):
        key = (which, n)
        if key not in self._u:
            self._u[key] = _object_poly_eval(chebyshev_coefficients(n), getattr(self, which))
        return self._u[key]

    def matrix(self, poly):
        sx = sum(self.u("X", i) for i in poly.x_indices)
        sy = sum(self.u("Y", i) for i in poly.y_indices)
        m = sx.dot(sy)
        for _ in range(poly.z_exponent):
            m = self.Z.dot(m)
        return m


def kac_minimal_fusion(p, q, rs1, rs2):
    """BPZ rule written directly, with canonical representatives chosen by set minimum."""
    (r, s), (r2, s2) = rs1, rs2
    out = {}
    for i in range(1, p):
        for j in range(1, q):
            ok_i = abs(r - r2) < i < min(r + r2, 2 * p - r - r2) and (i + r + r2) % 2 == 1
            ok_j = abs(s - s2) < j < min(s + s2, 2 * q - s - s2) and (j + s + s2) % 2 == 1
            if ok_i and ok_j:
                key = min((i, j), (p - i, q - j))
                out[key] = out.get(key, 0) + 1
    return out
