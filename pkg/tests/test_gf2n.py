# tests/test_gf2n.py
import numpy as np
import pytest

from dpsmap import ConfigurationError, FieldContext, field_context, find_selfdual_basis
from dpsmap.gf2n import IRREDUCIBLE_POLYS, clmul, is_irreducible, poly_degree, poly_mod


# ---------------------------------------------------------
# independent multiplication oracle (bit-by-bit schoolbook)
# ---------------------------------------------------------

def naive_mul(a, b, poly, n):
    """Polynomial product over GF(2) reduced mod poly, no shared code."""
    acc = 0
    for i in range(n):
        if (b >> i) & 1:
            acc ^= a << i
    for i in range(2 * n - 2, n - 1, -1):
        if (acc >> i) & 1:
            acc ^= poly << (i - n)
    return acc


def test_mul_matches_naive_oracle_exhaustive():
    for n in range(1, 5):
        ctx = field_context(n)
        poly = IRREDUCIBLE_POLYS[n]
        for a in ctx.elements():
            for b in ctx.elements():
                assert ctx.mul(a, b) == naive_mul(a, b, poly, n)


def test_mul_matches_naive_oracle_sampled():
    rng = np.random.default_rng(7)
    for n in range(5, 9):
        ctx = field_context(n)
        poly = IRREDUCIBLE_POLYS[n]
        pairs = rng.integers(0, ctx.order, size=(400, 2))
        for a, b in pairs:
            a, b = int(a), int(b)
            assert ctx.mul(a, b) == naive_mul(a, b, poly, n)


def test_frozen_small_products():
    # GF(4) with poly x^2+x+1: x*x = x+1, x*(x+1) = 1
    ctx = field_context(2)
    assert ctx.mul(2, 2) == 3
    assert ctx.mul(2, 3) == 1
    assert ctx.mul(3, 3) == 2
    # GF(8) with poly x^3+x+1: x*x^2 = x^3 = x+1
    ctx3 = field_context(3)
    assert ctx3.mul(2, 4) == 3


# ---------------------------------------------------------
# field axioms
# ---------------------------------------------------------

def test_add_is_xor():
    ctx = field_context(3)
    for a in ctx.elements():
        for b in ctx.elements():
            assert ctx.add(a, b) == a ^ b


def test_mul_commutative_table_symmetric():
    for n in range(1, 6):
        ctx = field_context(n)
        assert np.array_equal(ctx.mul_table, ctx.mul_table.T)


def test_mul_associative_exhaustive_small():
    for n in (2, 3):
        ctx = field_context(n)
        for a in ctx.elements():
            for b in ctx.elements():
                for c in ctx.elements():
                    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))


def test_distributive_exhaustive_small():
    ctx = field_context(3)
    for a in ctx.elements():
        for b in ctx.elements():
            for c in ctx.elements():
                left = ctx.mul(a, ctx.add(b, c))
                right = ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                assert left == right


def test_multiplicative_inverses():
    for n in range(1, 7):
        ctx = field_context(n)
        for a in range(1, ctx.order):
            assert ctx.mul(a, ctx.inv(a)) == 1
        assert ctx.inv_table[0] == 0  # sentinel, 0 has no inverse


def test_div_and_inv_consistent():
    ctx = field_context(4)
    rng = np.random.default_rng(3)
    for a, b in rng.integers(0, 16, size=(50, 2)):
        a, b = int(a), int(b)
        if b:
            assert ctx.div(a, b) == ctx.mul(a, ctx.inv(b))
    with pytest.raises(ZeroDivisionError):
        ctx.div(1, 0)


def test_frobenius_is_squaring():
    ctx = field_context(5)
    for a in ctx.elements():
        assert ctx.frobenius(a) == ctx.mul(a, a)
        # n-fold Frobenius is the identity
        assert ctx.frobenius(a, ctx.n) == a


def test_sqrt_squares_back():
    for n in range(1, 7):
        ctx = field_context(n)
        for a in ctx.elements():
            r = ctx.sqrt(a)
            assert ctx.mul(r, r) == a


# ---------------------------------------------------------
# trace and character
# ---------------------------------------------------------

def test_trace_frozen_n2():
    ctx = field_context(2)
    assert [ctx.trace(x) for x in range(4)] == [0, 0, 1, 1]


def test_trace_additive():
    for n in range(1, 6):
        ctx = field_context(n)
        for a in ctx.elements():
            for b in ctx.elements():
                assert ctx.trace(a ^ b) == (ctx.trace(a) + ctx.trace(b)) % 2


def test_trace_frobenius_invariant():
    """tr(x) = tr(x^2) for every element."""
    for n in range(1, 7):
        ctx = field_context(n)
        for a in ctx.elements():
            assert ctx.trace(a) == ctx.trace(ctx.mul(a, a))


def test_trace_balanced():
    # exactly half the elements have trace 1
    for n in range(1, 8):
        ctx = field_context(n)
        assert int(np.sum(ctx.trace_table)) == ctx.order // 2


def test_chi_is_sign_of_trace():
    ctx = field_context(4)
    for a in ctx.elements():
        assert ctx.chi(a) == (-1) ** ctx.trace(a)
    assert int(np.sum(ctx.chi_table)) == 0


def test_char_matrix_values_and_symmetry():
    for n in range(1, 5):
        ctx = field_context(n)
        C = ctx.char_matrix
        assert np.array_equal(C, C.T)
        for a in ctx.elements():
            for b in ctx.elements():
                assert C[a, b] == ctx.chi(ctx.mul(a, b))
        # character orthogonality: C C^T = q I
        assert np.array_equal(C.astype(np.int64) @ C.astype(np.int64),
                              ctx.order * np.eye(ctx.order, dtype=np.int64))


# ---------------------------------------------------------
# self-dual basis and coordinates
# ---------------------------------------------------------

def test_selfdual_basis_frozen():
    assert find_selfdual_basis(1) == (1,)
    assert find_selfdual_basis(2) == (2, 3)


def test_selfdual_gram_is_identity():
    for n in range(1, 9):
        ctx = field_context(n)
        assert np.array_equal(ctx.gram_matrix(), np.eye(n, dtype=np.int64))


def test_basis_elements_have_unit_trace():
    for n in range(1, 9):
        ctx = field_context(n)
        for theta in ctx.selfdual_basis:
            assert ctx.trace(theta) == 1


def test_coords_roundtrip():
    for n in range(1, 7):
        ctx = field_context(n)
        for x in ctx.elements():
            assert ctx.from_coords(ctx.to_coords(x)) == x


def test_field_unit_has_all_one_coords():
    """The basis is self-dual with tr(theta_i)=1, so 1 = sum of all thetas."""
    for n in range(1, 9):
        ctx = field_context(n)
        assert ctx.to_coords(1) == (1,) * n


def test_hweight_table_counts_coords():
    for n in range(1, 6):
        ctx = field_context(n)
        for x in ctx.elements():
            assert ctx.hweight(x) == sum(ctx.to_coords(x))
            assert ctx.hweight_table[x] == ctx.hweight(x)


def test_index_table_bijection():
    for n in range(1, 6):
        ctx = field_context(n)
        seen = sorted(int(ctx.index_table[x]) for x in ctx.elements())
        assert seen == list(range(ctx.order))
        for x in ctx.elements():
            assert int(ctx.element_of_index[ctx.index_table[x]]) == x


def test_index_follows_coords_msb_first():
    ctx = field_context(3)
    for x in ctx.elements():
        bits = ctx.to_coords(x)
        idx = int("".join(str(b) for b in bits), 2)
        assert ctx.index_table[x] == idx


# ---------------------------------------------------------
# transpositions of coordinate slots
# ---------------------------------------------------------

def test_transpose_coords_swaps_two_slots():
    for n in (2, 3, 4):
        ctx = field_context(n)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                for x in ctx.elements():
                    c = list(ctx.to_coords(x))
                    c[i - 1], c[j - 1] = c[j - 1], c[i - 1]
                    assert ctx.transpose_coords(x, i, j) == ctx.from_coords(c)


def test_transpose_coords_is_involution():
    ctx = field_context(4)
    for x in ctx.elements():
        y = ctx.transpose_coords(x, 2, 4)
        assert ctx.transpose_coords(y, 2, 4) == x


def test_transposition_element_construction():
    """The swap acts as x + eps*tr(x*eps) with eps the sum of the two thetas."""
    ctx = field_context(3)
    for i in range(1, 4):
        for j in range(i + 1, 4):
            eps = ctx.transposition_element(i, j)
            assert eps == ctx.selfdual_basis[i - 1] ^ ctx.selfdual_basis[j - 1]
            for x in ctx.elements():
                expected = x ^ (eps if ctx.trace(ctx.mul(x, eps)) else 0)
                assert ctx.transpose_coords(x, i, j) == expected


# ---------------------------------------------------------
# polynomial helpers, serialization, construction errors
# ---------------------------------------------------------

def test_poly_helpers():
    assert poly_degree(0b1011) == 3
    assert clmul(0b11, 0b11) == 0b101  # (x+1)^2 = x^2+1 over GF(2)
    assert poly_mod(0b100, 0b111) == 0b11  # x^2 mod (x^2+x+1) = x+1
    assert is_irreducible(0b111)
    assert not is_irreducible(0b101)  # x^2+1 = (x+1)^2


def test_listed_polys_are_irreducible():
    for n, poly in IRREDUCIBLE_POLYS.items():
        assert poly_degree(poly) == n
        assert is_irreducible(poly)


def test_json_roundtrip():
    ctx = field_context(3)
    restored = FieldContext.from_json(ctx.to_json())
    assert restored.n == 3
    assert restored.poly == ctx.poly
    assert restored.selfdual_basis == ctx.selfdual_basis
    assert np.array_equal(restored.mul_table, ctx.mul_table)


def test_field_context_is_cached():
    assert field_context(4) is field_context(4)


def test_bad_n_rejected():
    with pytest.raises(ConfigurationError):
        field_context(0)
    with pytest.raises(ConfigurationError):
        field_context(9)


def test_tables_deterministic():
    a = FieldContext(3)
    b = FieldContext(3)
    assert np.array_equal(a.mul_table, b.mul_table)
    assert a.selfdual_basis == b.selfdual_basis
