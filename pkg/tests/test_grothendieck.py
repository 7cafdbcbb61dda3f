import pytest
from hypothesis import given
from hypothesis import strategies as st

from tripletfusion.catalog import MINUS, PLUS, AlgebraParams, K, KStar, Minimal, P, Q, Simple, basis_index, enumerate_basis
from tripletfusion.errors import NotInPBasis
from tripletfusion.fusion_engine import fuse
from tripletfusion.grothendieck import (
    build_K_action,
    compute_k_table,
    gr,
    kfuse,
    kfuse_vectors,
    verify_K,
)
from tripletfusion.vectors import IntVector

SMALL = [AlgebraParams(2, 3), AlgebraParams(2, 5), AlgebraParams(3, 4)]


def kvec(params, data):
    return IntVector.from_labels(params, "K", data)


class TestGr:
    def test_k(self, p34):
        for r in (1, 2):
            for s in (1, 2, 3):
                assert gr(p34, K(r, s)) == kvec(p34, {Simple(PLUS, r, s): 1})
                assert gr(p34, KStar(r, s)) == kvec(p34, {Simple(PLUS, r, s): 1})

    def test_q(self, p34):
        assert gr(p34, Q(PLUS, 1, 2, 2, 2)) == kvec(p34, {Simple(PLUS, 1, 2): 2, Simple(MINUS, 2, 2): 2})
        assert gr(p34, Q(MINUS, 3, 1, 3, 3)) == kvec(p34, {Simple(MINUS, 3, 1): 2, Simple(PLUS, 3, 3): 2})

    def test_p(self, p34):
        want = {Simple(PLUS, 1, 1): 4, Simple(PLUS, 2, 3): 4, Simple(MINUS, 2, 1): 4, Simple(MINUS, 1, 3): 4}
        assert gr(p34, P(PLUS, 1, 1)) == kvec(p34, want)

    @pytest.mark.parametrize("params", SMALL + [AlgebraParams(4, 5)], ids=str)
    def test_totals(self, params):
        for m in enumerate_basis(params, "P"):
            total = gr(params, m).total
            if isinstance(m, Q):
                assert total == 4
            elif isinstance(m, P):
                assert total == 16
            else:
                assert total == 1

    def test_rejects_minimal(self, p23):
        with pytest.raises(NotInPBasis):
            gr(p23, Minimal(1, 1))


class TestKAction:
    def test_kz(self, p23):
        a = build_K_action(p23)
        idx = basis_index(p23, "K")
        assert a.z.column(idx[Simple(PLUS, 1, 1)]) == {idx[Simple(MINUS, 1, 1)]: 1}

    def test_kx_boundary(self, p23):
        a = build_K_action(p23)
        idx = basis_index(p23, "K")
        assert a.x.column(idx[Simple(PLUS, 1, 3)]) == {idx[Simple(PLUS, 1, 2)]: 2, idx[Simple(MINUS, 1, 1)]: 2}
        assert a.x.column(idx[Simple(MINUS, 1, 1)]) == {idx[Simple(MINUS, 1, 2)]: 1}

    def test_dimension(self, p34):
        assert build_K_action(p34).dim == 24


class TestKfuse:
    def test_examples(self, p23):
        assert kfuse(p23, Simple(MINUS, 1, 1), Simple(MINUS, 1, 1)) == kvec(p23, {Simple(PLUS, 1, 1): 1})
        assert kfuse(p23, Simple(PLUS, 2, 1), Simple(PLUS, 2, 1)) == kvec(
            p23, {Simple(PLUS, 1, 1): 2, Simple(MINUS, 1, 1): 2}
        )

    @pytest.mark.parametrize("params", SMALL, ids=str)
    def test_unit(self, params):
        for s in enumerate_basis(params, "K"):
            assert kfuse(params, Simple(PLUS, 1, 1), s) == kvec(params, {s: 1})

    @given(st.sampled_from(SMALL), st.data())
    def test_commutative_nonnegative(self, params, data):
        basis = enumerate_basis(params, "K")
        a, b = data.draw(st.sampled_from(basis)), data.draw(st.sampled_from(basis))
        ab = kfuse(params, a, b)
        assert ab == kfuse(params, b, a) and ab.is_nonnegative()

    @given(st.sampled_from(SMALL), st.data())
    def test_homomorphism_property(self, params, data):
        basis = enumerate_basis(params, "P")
        a, b = data.draw(st.sampled_from(basis)), data.draw(st.sampled_from(basis))
        lhs = kvec(params, {})
        for m, k in fuse(params, a, b).items():
            lhs = lhs + gr(params, m).scale(k)
        assert lhs == kfuse_vectors(params, gr(params, a), gr(params, b))

    def test_table_backends_agree(self, p34):
        assert compute_k_table(p34, backend="python") == compute_k_table(p34, backend="int64")


class TestVerifyK:
    @pytest.mark.parametrize("params", SMALL, ids=str)
    def test_all_pass(self, params):
        report = verify_K(params)
        assert report.ok, report.lines()
        assert report.get("Kz^2 = Id").passed
