# tests/test_mubrot.py
import numpy as np
import pytest

from dpsmap import (ConfigurationError, TomographicPhase, VERTICAL, all_lines,
                    build_V, build_X, check_unbiased, coeffs_closed_form,
                    coeffs_from_phase, coeffs_graph, convention_from_name,
                    dual_basis_matrix, dual_basis_state, field_context,
                    line_states, mub_family)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0 + 0j, -1.0])


def valid_p_values(n):
    return [p for p in (1, 2, 4, 8) if p <= 1 << (n - 1)]


# ---------------------------------------------------------
# line geometry
# ---------------------------------------------------------

def test_line_count_and_size():
    for n in (1, 2, 3):
        ctx = field_context(n)
        q = ctx.order
        lines = list(all_lines(ctx))
        assert len(lines) == q * (q + 1)
        for line in lines:
            pts = line.points(ctx)
            assert len(pts) == q
            assert all(line.contains(ctx, a, b) for a, b in pts)


def test_parallel_lines_partition_the_grid():
    ctx = field_context(2)
    q = ctx.order
    slopes = [None] + list(range(q))
    for slope in slopes:
        covered = set()
        for line in all_lines(ctx):
            if line.slope == slope:
                covered.update(line.points(ctx))
        assert len(covered) == q * q


def test_nonparallel_lines_meet_once():
    ctx = field_context(2)
    lines = list(all_lines(ctx))
    for la in lines:
        for lb in lines:
            if la.slope == lb.slope:
                continue
            common = set(la.points(ctx)) & set(lb.points(ctx))
            assert len(common) == 1


def test_vertical_lines_fix_alpha():
    ctx = field_context(3)
    for line in all_lines(ctx):
        if line.slope is VERTICAL:
            assert {a for a, _ in line.points(ctx)} == {line.intercept}


# ---------------------------------------------------------
# dual basis
# ---------------------------------------------------------

def test_dual_basis_amplitudes_are_characters():
    for n in (1, 2, 3):
        ctx = field_context(n)
        q = ctx.order
        for nu in ctx.elements():
            ket = dual_basis_state(ctx, nu)
            for x in ctx.elements():
                expect = ctx.chi(ctx.mul(nu, x)) / np.sqrt(q)
                assert abs(ket[ctx.index_table[x]] - expect) < 1e-14


def test_dual_basis_matrix_unitary():
    ctx = field_context(3)
    B = dual_basis_matrix(ctx)
    assert np.allclose(B @ B.conj().T, np.eye(8))
    assert np.allclose(dual_basis_matrix(field_context(1)),
                       np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def test_dual_states_diagonalize_X():
    """X_delta acts on the dual basis by a character, no shift."""
    ctx = field_context(2)
    for delta in ctx.elements():
        X = build_X(ctx, delta)
        for nu in ctx.elements():
            ket = dual_basis_state(ctx, nu)
            assert np.allclose(X @ ket, ctx.chi(ctx.mul(nu, delta)) * ket)


# ---------------------------------------------------------
# rotation coefficients
# ---------------------------------------------------------

def test_closed_form_recurrence_exact():
    """The defining recurrence holds exactly (integer phases, no float)."""
    for n in (1, 2, 3, 4):
        ctx = field_context(n)
        for p in valid_p_values(n):
            for xi in range(1, ctx.order):
                assert coeffs_closed_form(ctx, xi, p).verify(ctx)


def test_graph_recurrence_exact():
    for n in (1, 2, 3, 4):
        ctx = field_context(n)
        for sign in (1, -1):
            for xi in range(1, ctx.order):
                assert coeffs_graph(ctx, xi, sign).verify(ctx)


def test_frozen_single_qubit_coefficients():
    ctx = field_context(1)
    c = coeffs_closed_form(ctx, 1, 1)
    assert np.allclose(c.values(), [1, -1j])


def test_coeffs_from_phase_matches_closed_form_p1():
    conv = convention_from_name("tomographic-p1")
    for n in (1, 2, 3):
        ctx = field_context(n)
        for xi in range(1, ctx.order):
            a = coeffs_from_phase(ctx, conv, xi)
            b = coeffs_closed_form(ctx, xi, 1)
            assert np.array_equal(a.exponents % 4, b.exponents % 4)


def test_invalid_coefficient_requests():
    ctx = field_context(2)
    with pytest.raises(ConfigurationError):
        coeffs_closed_form(ctx, 0, 1)  # slope 0 needs no rotation
    with pytest.raises(ConfigurationError):
        coeffs_closed_form(ctx, 1, 3)  # p must be a power of two
    with pytest.raises(ConfigurationError):
        coeffs_closed_form(ctx, 1, 4)  # p too large for n=2
    with pytest.raises(ConfigurationError):
        coeffs_graph(ctx, 1, 2)


def test_failed_recurrence_detected():
    """A deliberately corrupted exponent table must not verify."""
    from dpsmap import RotationCoefficients
    ctx = field_context(2)
    good = coeffs_closed_form(ctx, 1, 1)
    bad = np.array(good.exponents, copy=True)
    bad[2] = (bad[2] + 1) % 4
    assert not RotationCoefficients(1, bad, "corrupted").verify(ctx)


# ---------------------------------------------------------
# rotation operators
# ---------------------------------------------------------

def test_single_qubit_rotation_frozen():
    ctx = field_context(1)
    V = build_V(ctx, coeffs_closed_form(ctx, 1, 1))
    assert np.allclose(V @ V, SX)
    assert np.allclose(V @ SZ @ V.conj().T, SY)


def test_V_unitary_and_square_relation():
    """V_xi^2 = X at the square root of the slope."""
    for n in (1, 2, 3):
        ctx = field_context(n)
        for xi in range(1, ctx.order):
            V = build_V(ctx, coeffs_closed_form(ctx, xi, 1))
            assert np.allclose(V @ V.conj().T, np.eye(ctx.order))
            assert np.allclose(V @ V, build_X(ctx, ctx.sqrt(xi)))


def test_V_commutes_with_shifts():
    ctx = field_context(3)
    for xi in (1, 3, 5):
        V = build_V(ctx, coeffs_closed_form(ctx, xi, 1))
        for nu in ctx.elements():
            X = build_X(ctx, nu)
            assert np.allclose(V @ X, X @ V)


def test_line_states_orthonormal():
    ctx = field_context(2)
    states = line_states(ctx, coeffs_closed_form(ctx, 2, 1))
    G = np.array([[np.vdot(a, b) for b in states] for a in states])
    assert np.allclose(G, np.eye(4))


# ---------------------------------------------------------
# full basis families
# ---------------------------------------------------------

def test_family_structure_and_validation():
    for n in (1, 2, 3):
        ctx = field_context(n)
        fam = mub_family(ctx, "p1")
        fam.validate()
        assert set(fam.bases) == set(range(ctx.order)) | {VERTICAL}
        for slope, states in fam.bases.items():
            assert len(states) == ctx.order
            # each basis resolves the identity
            acc = sum(np.outer(s, s.conj()) for s in states)
            assert np.allclose(acc, np.eye(ctx.order))


def test_family_mutually_unbiased():
    for n in (1, 2, 3):
        ctx = field_context(n)
        fam = mub_family(ctx, "p1")
        keys = list(fam.bases)
        for i, ka in enumerate(keys):
            for kb in keys[i + 1:]:
                assert check_unbiased(ctx, fam.basis(ka), fam.basis(kb)) < 1e-10


def test_family_schemes_agree_on_unbiasedness():
    ctx = field_context(3)
    for scheme in ("p1", "p2", "p4", "graph+", "graph-"):
        fam = mub_family(ctx, scheme)
        fam.validate()
        assert check_unbiased(ctx, fam.basis(1), fam.basis(None)) < 1e-10


def test_scheme_validity_depends_on_n():
    with pytest.raises(ConfigurationError):
        mub_family(field_context(2), "p4")
    with pytest.raises(ConfigurationError):
        mub_family(field_context(2), "nope")


def test_logical_basis_is_slope_zero():
    ctx = field_context(2)
    fam = mub_family(ctx)
    for nu in ctx.elements():
        ket = fam.basis(0)[nu]
        assert abs(abs(ket[ctx.index_table[nu]]) - 1) < 1e-12


def test_line_state_lookup():
    """family.state(line) gives the basis vector labelled by the intercept."""
    ctx = field_context(2)
    fam = mub_family(ctx)
    for line in all_lines(ctx):
        ket = fam.state(line)
        assert abs(np.linalg.norm(ket) - 1) < 1e-12
        expect = fam.basis(line.slope)[line.intercept]
        assert np.allclose(ket, expect)
