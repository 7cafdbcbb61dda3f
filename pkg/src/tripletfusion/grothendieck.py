"""The Grothendieck ring K(S) and the composition-factor map gr: P(I) -> K(S).

Minimal simples L(h) are zero in K(S), so gr only counts the simples
X^{+-}_{r,s} appearing in a composition series.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .catalog import (
    MINUS,
    PLUS,
    AlgebraParams,
    K,
    KStar,
    ModuleLabel,
    Q,
    Simple,
    _basis,
    basis_index,
    check_label,
    flip,
)
from .chebyshev import apply_u
from .errors import NotInPBasis
from .fusion_engine import (
    ModulePolynomial,
    StructureTable,
    _compose,
    _matrix_equal,
    check_ring_axioms,
    operator_table_rows,
    require_p_label,
    structure_constants,
)
from .linalg import SparseIntMatrix, add_into
from .report import Report, ReportBuilder
from .vectors import IntVector


def gr(params: AlgebraParams, label: ModuleLabel) -> IntVector:
    """Composition factors of ``label`` in the basis of K(S)."""
    require_p_label(params, label)
    p, q = params.p_plus, params.p_minus
    acc: dict[ModuleLabel, int] = {}

    def add(mult, eps, r, s):
        key = Simple(eps, r, s)
        acc[key] = acc.get(key, 0) + mult

    if isinstance(label, (K, KStar)):
        # 0 -> X+ -> K -> L -> 0, and its contragredient for K*
        add(1, PLUS, label.r, label.s)
    elif isinstance(label, Simple):
        add(1, label.eps, label.r, label.s)
    elif isinstance(label, Q):
        # socle length three: X^eps_{a,b} at the bottom and the top, two copies
        # of X^{-eps}_{c,d} in the middle (plus one L(h_{a,b}) in the thick
        # eps = + case, which is dropped)
        add(2, label.eps, label.a, label.b)
        add(2, flip(label.eps), label.c, label.d)
    else:
        # Five socle layers, with e = eps, a^v = p+ - a, b^v = p- - b:
        #   layers 1 and 5: X^e_{a,b}
        #   layers 2 and 4: 2 X^{-e}_{a,b^v} + 2 X^{-e}_{a^v,b} (+ one L, dropped)
        #   layer 3:        2 X^e_{a,b} + 4 X^e_{a^v,b^v}
        # so each of the four simples occurs four times.
        e, a, b = label.eps, label.r, label.s
        add(4, e, a, b)
        add(4, e, p - a, q - b)
        add(4, flip(e), p - a, b)
        add(4, flip(e), a, q - b)
    return IntVector.from_labels(params, "K", acc)


def gr_matrix(params: AlgebraParams) -> sp.csr_matrix:
    """G with G[a, i] = multiplicity of simple a in basis element i of I."""
    basis = _basis(params, "P")
    rows, cols, data = [], [], []
    for i, m in enumerate(basis):
        for a, mult in gr(params, m).coords:
            rows.append(a)
            cols.append(i)
            data.append(mult)
    shape = (len(_basis(params, "K")), len(basis))
    return sp.csr_matrix((np.array(data, dtype=np.int64), (rows, cols)), shape=shape)


# --------------------------------------------------------------------------
# K-ring operators
# --------------------------------------------------------------------------


def _kx_image(params, m: Simple):
    q = params.p_minus
    e, r, s = m.eps, m.r, m.s
    if s == q:
        # gr of Q(X^e_{r,p- - 1})_{r,1}
        return [(2, Simple(e, r, q - 1)), (2, Simple(flip(e), r, 1))]
    if s == 1:
        return [(1, Simple(e, r, 2))]
    return [(1, Simple(e, r, s - 1)), (1, Simple(e, r, s + 1))]


def _ky_image(params, m: Simple):
    p = params.p_plus
    e, r, s = m.eps, m.r, m.s
    if r == p:
        # gr of Q(X^e_{p+ - 1,s})_{1,s}
        return [(2, Simple(e, p - 1, s)), (2, Simple(flip(e), 1, s))]
    if r == 1:
        return [(1, Simple(e, 2, s))]
    return [(1, Simple(e, r - 1, s)), (1, Simple(e, r + 1, s))]


def _kz_image(params, m: Simple):
    return [(1, Simple(flip(m.eps), m.r, m.s))]


@dataclass(frozen=True)
class KAction:
    params: AlgebraParams
    x: SparseIntMatrix
    y: SparseIntMatrix
    z: SparseIntMatrix

    @property
    def dim(self) -> int:
        return self.x.dim

    def operators(self) -> dict[str, SparseIntMatrix]:
        return {"x": self.x, "y": self.y, "z": self.z}


def _k_operator(params, rule) -> SparseIntMatrix:
    basis = _basis(params, "K")
    index = basis_index(params, "K")
    cols = []
    for m in basis:
        col: dict[int, int] = {}
        for mult, target in rule(params, m):
            col[index[target]] = col.get(index[target], 0) + mult
        cols.append(col)
    return SparseIntMatrix.from_columns(len(basis), cols)


@lru_cache(maxsize=None)
def build_K_action(params: AlgebraParams) -> KAction:
    return KAction(
        params,
        _k_operator(params, _kx_image),
        _k_operator(params, _ky_image),
        _k_operator(params, _kz_image),
    )


def k_polynomial(label: Simple) -> ModulePolynomial:
    return ModulePolynomial(0 if label.eps == PLUS else 1, (label.s - 1,), (label.r - 1,))


def _require_simple(params, label) -> Simple:
    if not isinstance(label, Simple):
        raise NotInPBasis(f"{label} is not a simple module")
    return check_label(params, label, interior_plus=True)


def _k_apply(action: KAction, label: Simple, v: dict) -> dict:
    # Kz^c U_{s-1}(Kx) U_{r-1}(Ky) v, in that order of application
    out = apply_u(action.y, label.r - 1, v)
    out = apply_u(action.x, label.s - 1, out)
    if label.eps == MINUS:
        out = action.z.matvec(out)
    return out


def kfuse(params: AlgebraParams, s1: Simple, s2: Simple) -> IntVector:
    """[s1][s2] in K(S)."""
    _require_simple(params, s1)
    _require_simple(params, s2)
    action = build_K_action(params)
    v = {basis_index(params, "K")[s2]: 1}
    return IntVector.from_indices(params, "K", _k_apply(action, s1, v))


def kfuse_vectors(params: AlgebraParams, u: IntVector, v: IntVector) -> IntVector:
    """Bilinear extension of kfuse to arbitrary K(S) vectors."""
    action = build_K_action(params)
    basis = _basis(params, "K")
    acc: dict[int, int] = {}
    vd = v.as_index_dict()
    for i, a in u.coords:
        add_into(acc, _k_apply(action, basis[i], vd), a)
    return IntVector.from_indices(params, "K", acc)


def compute_k_table(params: AlgebraParams, backend: str = "auto") -> StructureTable:
    from .cache import basis_fingerprint

    polys = [k_polynomial(m) for m in _basis(params, "K")]
    rows = operator_table_rows(build_K_action(params), polys, backend)
    return StructureTable(params, "K", basis_fingerprint(_basis(params, "K")), rows)


def k_structure_constants(params: AlgebraParams, use_cache: bool = True) -> StructureTable:
    from .cache import load_table, save_table

    if use_cache:
        cached = load_table(params, "K")
        if cached is not None:
            return cached
    table = compute_k_table(params)
    if use_cache:
        save_table(table)
    return table


# --------------------------------------------------------------------------
# verification
# --------------------------------------------------------------------------


def homomorphism_counterexample(params: AlgebraParams, table: StructureTable, ktable: StructureTable, pairs=None):
    """First basis pair (i, j) with gr(M_i x M_j) != gr(M_i) gr(M_j), or None.

    Left: S G^T, row i*N+j is gr of the product.  Right: kron(G^T, G^T) S_K,
    row i*N+j is sum_{a,b} G[a,i] G[b,j] kfuse(a, b).
    """
    G = gr_matrix(params)
    Gt = sp.csr_matrix(G.T)
    S = table.to_csr()
    SK = ktable.to_csr()
    n = table.n
    if pairs is not None:
        idx = np.array([i * n + j for i, j in pairs], dtype=np.int64)
        left = S[idx] @ Gt
        left_idx = np.array([i for i, _ in pairs])
        right_idx = np.array([j for _, j in pairs])
        # row-wise Kronecker product of selected columns of G
        A, B = Gt[left_idx], Gt[right_idx]
        kdim = Gt.shape[1]
        rows = []
        for t in range(len(pairs)):
            rows.append(sp.kron(A[t], B[t], format="csr"))
        kr = sp.vstack(rows, format="csr") if rows else sp.csr_matrix((0, kdim * kdim), dtype=np.int64)
        right = kr @ SK
    else:
        idx = None
        left = S @ Gt
        right = sp.kron(Gt, Gt, format="csr") @ SK
    diff = sp.csr_matrix(left - right)
    diff.eliminate_zeros()
    if not diff.nnz:
        return None
    k = int(diff.tocoo().row.min())
    if idx is not None:
        k = int(idx[k])
    return divmod(k, n)


def check_homomorphism(rb: ReportBuilder, params: AlgebraParams, table: StructureTable, level: str = "full",
                       ktable: StructureTable | None = None) -> None:
    ktable = ktable or k_structure_constants(params)
    n = table.n
    if level == "full":
        pairs, scope = None, f"all {n * n} basis pairs"
    else:
        import random

        rng = random.Random(7)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(500)]
        scope = "500 seeded basis pairs"
    hit = homomorphism_counterexample(params, table, ktable, pairs)
    if hit is None:
        rb.add("gr is a ring homomorphism", True, scope)
    else:
        i, j = hit
        basis = table.basis
        rb.add("gr is a ring homomorphism", False, f"{basis[i]} x {basis[j]}")


def k_relation_maps(action: KAction):
    p, q = action.params.p_plus, action.params.p_minus
    x, y, z = action.x, action.y, action.z

    def rel(op, n):
        return lambda v: add_into(
            add_into(apply_u(op, n, v), apply_u(op, n - 2, v), -1), z.matvec(v), -2
        )

    return {
        "Kz^2 = Id": lambda v: add_into(z.matvec(z.matvec(v)), v, -1),
        f"U_{q}(Kx) - U_{q - 2}(Kx) = 2Kz": rel(x, q),
        f"U_{p}(Ky) - U_{p - 2}(Ky) = 2Kz": rel(y, p),
    }


def verify_K(params: AlgebraParams, level: str = "full", table: StructureTable | None = None) -> Report:
    action = build_K_action(params)
    basis = _basis(params, "K")
    rb = ReportBuilder(f"K ring at {params}")
    n = action.dim

    for name, fn in k_relation_maps(action).items():
        bad = next((j for j in range(n) if fn({j: 1})), None)
        rb.add(name, bad is None, "exact matrix identity" if bad is None else f"fails at {basis[bad]}")

    ops = action.operators()
    for a, b in (("x", "y"), ("x", "z"), ("y", "z")):
        A, B = ops[a], ops[b]
        j = _matrix_equal(_compose(A.matvec, B.matvec), _compose(B.matvec, A.matvec), n)
        rb.add(f"commute K{a} K{b}", j is None, "exact matrix identity" if j is None else f"at {basis[j]}")

    unit = basis_index(params, "K")[Simple(PLUS, 1, 1)]
    bad = next((m for j, m in enumerate(basis) if _k_apply(action, m, {unit: 1}) != {j: 1}), None)
    rb.add("Kz^c U(Kx) U(Ky) e_X+[1,1] = e_X", bad is None, f"all {n} simples" if bad is None else f"fails at {bad}")

    ktable = k_structure_constants(params)
    check_ring_axioms(rb, ktable, unit, level, label="kfuse ")
    check_homomorphism(rb, params, table or structure_constants(params), level, ktable)
    return rb.build()
