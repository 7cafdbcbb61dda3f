from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tripletfusion.catalog import (
    MINUS,
    PLUS,
    AlgebraParams,
    K,
    KStar,
    Minimal,
    P,
    Q,
    SemiSimple,
    Simple,
    Thick,
    ThinCol,
    ThinRow,
    block_of,
    conformal_weight,
    coprime_pairs,
    enumerate_basis,
    enumerate_blocks,
    format_label,
    kac_canonical,
    p_basis_size,
    parse_label,
    top_weight,
    validate_params,
)
from tripletfusion.errors import (
    InadmissibleLabel,
    LabelSyntaxError,
    NotCoprime,
    OrderViolation,
    RangeViolation,
)

from .oracles import weight_closed_form

PAIRS = coprime_pairs(35)
params_st = st.sampled_from(PAIRS)


class TestParams:
    def test_c_at_2_3_is_zero(self):
        assert validate_params(2, 3).central_charge == 0

    def test_c_is_exact(self):
        # c_{3,4} = 1 - 6/12
        assert AlgebraParams(3, 4).central_charge == Fraction(1, 2)
        assert AlgebraParams(2, 5).central_charge == Fraction(-22, 5)

    @pytest.mark.parametrize(
        "p,q,exc",
        [(2, 4, NotCoprime), (3, 2, OrderViolation), (3, 3, OrderViolation), (1, 2, RangeViolation), (0, 5, RangeViolation)],
    )
    def test_rejected(self, p, q, exc):
        with pytest.raises(exc):
            validate_params(p, q)

    def test_coprime_message(self):
        with pytest.raises(NotCoprime, match="p_plus and p_minus must be coprime"):
            validate_params(4, 6)

    def test_eighteen_pairs_in_range(self):
        assert len(PAIRS) == 18
        assert PAIRS[0] == AlgebraParams(2, 3)


class TestWeights:
    def test_vacuum(self, p23):
        assert conformal_weight(p23, 1, 1, 0) == 0

    def test_h21_at_2_3(self, p23):
        assert conformal_weight(p23, 2, 1, 0) == Fraction(5, 8)

    def test_h12_at_2_3(self, p23):
        assert conformal_weight(p23, 1, 2, 0) == 0

    def test_h21_general(self):
        # -2 h_{2,1} = -3 p_- / 4 + 1 for p_+ = 2
        for q in (3, 5, 7, 9):
            assert -2 * conformal_weight(AlgebraParams(2, q), 2, 1) == Fraction(-3 * q, 4) + 1

    def test_returns_fraction(self, p34):
        assert isinstance(conformal_weight(p34, 2, 3, -1), Fraction)

    @given(params_st, st.integers(-20, 20), st.integers(-20, 20), st.integers(-5, 5))
    def test_matches_closed_form(self, params, r, s, n):
        p, q = params.p_plus, params.p_minus
        assert conformal_weight(params, r, s, n) == weight_closed_form(p, q, r, s, n)

    @given(params_st, st.data())
    def test_identities(self, params, data):
        p, q = params.p_plus, params.p_minus
        bound = 3 * p * q
        r = data.draw(st.integers(-bound, bound))
        s = data.draw(st.integers(-bound, bound))
        n = data.draw(st.integers(-5, 5))
        h = conformal_weight(params, r, s, n)
        assert h == conformal_weight(params, -r, -s, -n)
        assert h == conformal_weight(params, r - n * p, s, 0)
        assert h == conformal_weight(params, r, s + n * q, 0)

    def test_kac_symmetry(self, p34):
        for r in range(1, 3):
            for s in range(1, 4):
                assert conformal_weight(p34, r, s) == conformal_weight(p34, 3 - r, 4 - s)

    def test_top_weights_rational(self, p23):
        # X+_{1,1}: top h_{1,1;-1}; X-_{1,1}: top h_{1,1;-2}
        assert top_weight(p23, PLUS, 1, 1) == conformal_weight(p23, 1, 1, -1) == 2
        assert top_weight(p23, MINUS, 1, 1) == conformal_weight(p23, 1, 1, -2) == 7
        assert top_weight(p23, PLUS, 2, 3) == conformal_weight(p23, 2, 3, 0)


class TestBasis:
    def test_sizes_2_3(self, p23):
        assert len(enumerate_basis(p23, "P")) == 32
        assert len(enumerate_basis(p23, "K")) == 12
        assert enumerate_basis(p23, "MINIMAL") == [Minimal(1, 1)]

    @pytest.mark.parametrize("params", PAIRS, ids=str)
    def test_sizes(self, params):
        p, q = params.p_plus, params.p_minus
        basis = enumerate_basis(params, "P")
        assert len(basis) == 9 * p * q - 5 * p - 5 * q + 3 == p_basis_size(params)
        assert len(set(basis)) == len(basis)
        assert len(enumerate_basis(params, "K")) == 2 * p * q
        assert len(enumerate_basis(params, "MINIMAL")) == (p - 1) * (q - 1) // 2

    def test_order_2_3(self, p23):
        text = [format_label(m) for m in enumerate_basis(p23, "P")]
        assert text[:6] == ["K[1,1]", "K[1,2]", "K*[1,1]", "K*[1,2]", "X-[1,1]", "X-[1,2]"]
        assert text[6:14] == ["X+[1,3]", "X+[2,3]", "X-[1,3]", "X-[2,3]", "X+[2,1]", "X+[2,2]", "X-[2,1]", "X-[2,2]"]
        assert text[14:18] == ["Q(X+[1,1])[1,1]", "Q(X+[1,2])[1,2]", "Q(X+[1,1])[1,2]", "Q(X+[1,2])[1,1]"]
        assert text[-4:] == ["P+[1,1]", "P+[1,2]", "P-[1,1]", "P-[1,2]"]

    def test_corner_stored_once(self, p34):
        basis = enumerate_basis(p34, "P")
        assert basis.count(Simple(PLUS, 3, 4)) == 1
        boundary = [m for m in basis if isinstance(m, Simple) and (m.r == 3 or m.s == 4)]
        assert len(boundary) == 2 * 3 + 2 * 4 - 2

    def test_interior_x_plus_absent(self, p34):
        basis = set(enumerate_basis(p34, "P"))
        assert all(Simple(PLUS, r, s) not in basis for r in (1, 2) for s in (1, 2, 3))

    def test_unknown_basis(self, p23):
        with pytest.raises(ValueError):
            enumerate_basis(p23, "X")


class TestBlocks:
    def test_examples(self, p23):
        assert block_of(p23, Simple(MINUS, 1, 1)) == Thick(1, 1)
        assert block_of(p23, Simple(PLUS, 2, 3)) == SemiSimple(PLUS)
        assert block_of(p23, Simple(MINUS, 2, 1)) == ThinCol(2)

    @pytest.mark.parametrize("params", PAIRS[:10], ids=str)
    def test_block_count(self, params):
        p, q = params.p_plus, params.p_minus
        blocks = enumerate_blocks(params)
        assert len(blocks) == len(set(blocks)) == (p - 1) * (q - 1) // 2 + (p - 1) + (q - 1) + 2

    @pytest.mark.parametrize("params", PAIRS[:10], ids=str)
    def test_fibers_partition_basis(self, params):
        blocks = set(enumerate_blocks(params))
        basis = enumerate_basis(params, "P")
        seen = [block_of(params, m) for m in basis]
        assert set(seen) == blocks

    @pytest.mark.parametrize("params", PAIRS[:8], ids=str)
    def test_simples_of_thin_blocks(self, params):
        p, q = params.p_plus, params.p_minus
        for r in range(1, p):
            assert block_of(params, Simple(PLUS, r, q)) == block_of(params, Simple(MINUS, p - r, q)) == ThinRow(r)
        for s in range(1, q):
            assert block_of(params, Simple(PLUS, p, s)) == block_of(params, Simple(MINUS, p, q - s)) == ThinCol(s)

    def test_thick_block_members(self, p34):
        # X+_{r,s} and X-_{r^v,s}, X-_{r,s^v} all land in Thick(canon(r,s))
        for r in (1, 2):
            for s in (1, 2, 3):
                b = Thick(*kac_canonical(p34, r, s))
                assert block_of(p34, Simple(PLUS, r, s)) == b
                assert block_of(p34, Simple(MINUS, 3 - r, s)) == b
                assert block_of(p34, Simple(MINUS, r, 4 - s)) == b
                assert block_of(p34, P(MINUS, r, s)) == block_of(p34, Simple(MINUS, r, s))

    def test_q_block_is_socle_block(self, p34):
        for m in enumerate_basis(p34, "P"):
            if isinstance(m, Q):
                assert block_of(p34, m) == block_of(p34, Simple(m.eps, m.a, m.b))
                # the middle factor X^{-eps}_{c,d} lies in the same block
                assert block_of(p34, Simple("-" if m.eps == "+" else "+", m.c, m.d)) == block_of(p34, m)


class TestKac:
    @given(params_st, st.data())
    def test_canonical_is_involution_fixed(self, params, data):
        r = data.draw(st.integers(1, params.p_plus - 1))
        s = data.draw(st.integers(1, params.p_minus - 1))
        c = kac_canonical(params, r, s)
        assert kac_canonical(params, params.p_plus - c[0], params.p_minus - c[1]) == c
        assert kac_canonical(params, *c) == c


class TestLabels:
    def test_parse_q(self, p23):
        assert parse_label(p23, "Q(X+[1,1])[1,1]") == Q(PLUS, 1, 1, 1, 1)

    def test_bad_k(self, p23):
        with pytest.raises(InadmissibleLabel):
            parse_label(p23, "K[1,3]")

    def test_format_kstar(self):
        assert format_label(KStar(1, 1)) == "K*[1,1]"

    def test_whitespace_ignored(self, p34):
        assert parse_label(p34, " Q( X-[2, 3] ) [1,3] ") == Q(MINUS, 2, 3, 1, 3)

    @pytest.mark.parametrize("text", ["", "K[1]", "K(1,1)", "X[1,1]", "Q(X+[1,1])", "P[1,1]", "K[a,b]", "K*[1,1]x"])
    def test_syntax(self, p23, text):
        with pytest.raises(LabelSyntaxError):
            parse_label(p23, text)

    @pytest.mark.parametrize("text", ["Q(X+[1,1])[1,2]x", "Q(X+[1,1])[2,2]", "P+[2,1]", "X-[3,1]", "X+[1,1]", "L[2,1]", "K*[0,1]"])
    def test_inadmissible(self, p23, text):
        with pytest.raises((InadmissibleLabel, LabelSyntaxError)):
            parse_label(p23, text)

    def test_interior_x_plus_opt_in(self, p23):
        assert parse_label(p23, "X+[1,1]", interior_plus=True) == Simple(PLUS, 1, 1)

    def test_minimal_canonicalized(self, p34):
        assert parse_label(p34, "L[2,1]") == Minimal(1, 3)

    def test_q_admissible_set(self, p34):
        with pytest.raises(InadmissibleLabel):
            parse_label(p34, "Q(X+[3,4])[0,4]")
        with pytest.raises(InadmissibleLabel):
            parse_label(p34, "Q(X+[1,1])[1,1]")

    def test_backslash_free_round_trip(self, p34):
        for which in ("P", "K", "MINIMAL"):
            for m in enumerate_basis(p34, which):
                assert parse_label(p34, format_label(m), interior_plus=True) == m

    @given(params_st, st.data())
    def test_round_trip_property(self, params, data):
        m = data.draw(st.sampled_from(enumerate_basis(params, "P")))
        text = format_label(m)
        assert parse_label(params, text) == m
        assert format_label(parse_label(params, text)) == text

    def test_k_labels_equal_by_value(self):
        assert K(1, 2) == K(1, 2) and K(1, 2) != KStar(1, 2)
