"""Mutually unbiased bases from rotation operators diagonal in the dual
basis.

A slope xi != 0 selects the commuting set {Z_alpha X_(xi alpha)}; its
eigenbasis is produced by V_xi = sum_kappa c_(kappa,xi) |kappa~><kappa~|
where |kappa~> is the dual (character-transform) basis and the
coefficients obey the recurrence

    c_(kappa+alpha) c_kappa^* = chi(xi alpha kappa) c_alpha.

All built-in coefficient families are fourth roots of unity and are kept
as integer exponents of i, so the recurrence is checked exactly.  Line
states |psi_nu^xi> = V_xi X_nu |0> label the points of the line
beta = xi alpha + nu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .gf2n import FieldContext
from .pauli import I4, PhaseConvention, logical_state, require_operator_n

#: slope tag for vertical lines alpha = const (the dual basis)
VERTICAL = None


# ----------------------------------------------------------------------
# lines
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LineSpec:
    """A line in the (alpha, beta) grid: beta = slope*alpha + intercept,
    or alpha = intercept when slope is VERTICAL (None)."""

    slope: int | None
    intercept: int

    def points(self, ctx: FieldContext) -> list[tuple[int, int]]:
        if self.slope is VERTICAL:
            return [(self.intercept, b) for b in ctx.elements()]
        row = ctx.mul_table[self.slope]
        return [(a, int(row[a]) ^ self.intercept) for a in ctx.elements()]

    def contains(self, ctx: FieldContext, a: int, b: int) -> bool:
        if self.slope is VERTICAL:
            return a == self.intercept
        return b == (ctx.mul(self.slope, a) ^ self.intercept)


def all_lines(ctx: FieldContext):
    """All 2^n (2^n + 1) lines: every slope plus the vertical pencil."""
    for xi in ctx.elements():
        for nu in ctx.elements():
            yield LineSpec(xi, nu)
    for nu in ctx.elements():
        yield LineSpec(VERTICAL, nu)


# ----------------------------------------------------------------------
# dual basis
# ----------------------------------------------------------------------

def dual_basis_state(ctx: FieldContext, kappa: int) -> np.ndarray:
    """|kappa~> = 2^(-n/2) sum_nu chi(kappa nu) |nu>; X_beta eigenstate
    with eigenvalue chi(beta kappa)."""
    require_operator_n(ctx)
    vec = np.empty(ctx.order, dtype=complex)
    vec[ctx.index_table] = ctx.char_matrix[kappa]
    return vec / math.sqrt(ctx.order)


def dual_basis_matrix(ctx: FieldContext) -> np.ndarray:
    """Columns are |kappa~> for kappa in field order."""
    require_operator_n(ctx)
    q = ctx.order
    mat = np.empty((q, q), dtype=complex)
    mat[ctx.index_table, :] = ctx.char_matrix_c.T
    return mat / math.sqrt(q)


# ----------------------------------------------------------------------
# coefficient families
# ----------------------------------------------------------------------

@dataclass
class RotationCoefficients:
    """Coefficients c_kappa = i^exponents[kappa] for one slope xi."""

    xi: int
    exponents: np.ndarray
    provenance: str = "unverified"

    def values(self) -> np.ndarray:
        return I4[np.mod(self.exponents, 4)]

    def verify(self, ctx: FieldContext) -> bool:
        """Exact integer check of the recurrence for all (kappa, alpha)."""
        e = np.mod(self.exponents, 4)
        tr = ctx.trace_table[ctx.mul_table[self.xi, ctx.mul_table]]
        resid = (e[ctx.xor_grid] - e[:, None] - e[None, :] - 2 * tr) % 4
        return not resid.any()


def _xi_half_power(ctx: FieldContext, xi: int, p: int) -> int:
    """xi^(p/2): square root for p = 1, else xi^(2^(j-1)) for p = 2^j."""
    if p == 1:
        return ctx.sqrt(xi)
    return ctx.frobenius(xi, p.bit_length() - 2)


def coeffs_closed_form(ctx: FieldContext, xi: int, p: int = 1) -> RotationCoefficients:
    """c_(alpha,xi) = (-i)^h(alpha^p xi^(p/2)) for p in {1, 2, 4, ...}."""
    if xi == 0:
        raise ConfigurationError("slope 0 is the logical basis; no rotation needed")
    if p < 1 or p & (p - 1) or p > 1 << (ctx.n - 1):
        raise ConfigurationError(
            f"p must be a power of two in 1..{1 << (ctx.n - 1)}, got {p}")
    alpha = np.arange(ctx.order, dtype=np.int64)
    ap = alpha
    for _ in range(p.bit_length() - 1):
        ap = ctx.mul_table[ap, ap]
    exps = 3 * ctx.hweight_table[ctx.mul_table[ap, _xi_half_power(ctx, xi, p)]]
    coeffs = RotationCoefficients(xi, exps % 4, provenance=f"closed-form-p{p}")
    if not coeffs.verify(ctx):
        raise ConfigurationError("closed-form coefficients failed the recurrence")
    return coeffs


def coeffs_graph(ctx: FieldContext, xi: int, sign: int = 1) -> RotationCoefficients:
    """c_alpha = (sign*i)^(alpha^T Gamma alpha), Gamma_pq = tr(xi theta_p theta_q)."""
    if xi == 0:
        raise ConfigurationError("slope 0 is the logical basis; no rotation needed")
    if sign not in (1, -1):
        raise ConfigurationError("sign must be +1 or -1")
    theta = np.array(ctx.selfdual_basis, dtype=np.int64)
    gamma = ctx.trace_table[
        ctx.mul_table[xi, ctx.mul_table[np.ix_(theta, theta)]]]
    coords = ctx.coords_table
    quad = np.einsum("ap,pq,aq->a", coords, gamma, coords)
    tag = "graph+" if sign == 1 else "graph-"
    coeffs = RotationCoefficients(xi, (sign * quad) % 4, provenance=tag)
    if not coeffs.verify(ctx):
        raise ConfigurationError("graph coefficients failed the recurrence")
    return coeffs


def coeffs_from_phase(ctx: FieldContext, conv: PhaseConvention,
                      xi: int) -> RotationCoefficients:
    """Extract c_kappa = phi(kappa, xi kappa) from a phase convention.

    Valid only when the convention solves the tomographic relation on the
    slope-xi line; the recurrence is verified and failure raises.
    """
    if xi == 0:
        raise ConfigurationError("slope 0 is the logical basis; no rotation needed")
    kappa = np.arange(ctx.order, dtype=np.int64)
    exps = conv.exponent_table(ctx)[kappa, ctx.mul_table[xi]]
    coeffs = RotationCoefficients(xi, exps % 4,
                                  provenance=f"from-phase[{conv.name}]")
    if not coeffs.verify(ctx):
        raise ConfigurationError(
            f"{conv.name} does not satisfy the rotation recurrence on slope {xi}")
    return coeffs


# ----------------------------------------------------------------------
# rotation operators and line states
# ----------------------------------------------------------------------

def build_V(ctx: FieldContext, coeffs: RotationCoefficients) -> np.ndarray:
    """V_xi = sum_kappa c_kappa |kappa~><kappa~|; rejects bad coefficients."""
    require_operator_n(ctx)
    if not coeffs.verify(ctx):
        raise ConfigurationError("coefficients fail the recurrence; refusing to build V")
    b = dual_basis_matrix(ctx)
    return (b * coeffs.values()[None, :]) @ b.conj().T


def line_states(ctx: FieldContext, coeffs: RotationCoefficients) -> list[np.ndarray]:
    """|psi_nu^xi> = V_xi X_nu |0>, ordered by the intercept nu."""
    v = build_V(ctx, coeffs)
    return [v[:, ctx.basis_index(nu)].copy() for nu in ctx.elements()]


def check_unbiased(ctx: FieldContext, states_a, states_b,
                   slope_a=-1, slope_b=-2) -> float:
    """Max deviation of |<a|b>|^2 from 1/2^n across the two bases.

    Pass the slopes when known; identical slopes are rejected since
    unbiasedness only holds across different pencils.
    """
    if slope_a == slope_b:
        raise ConfigurationError("unbiasedness check needs two different slopes")
    a = np.column_stack(states_a)
    b = np.column_stack(states_b)
    overlaps = np.abs(a.conj().T @ b) ** 2
    return float(np.max(np.abs(overlaps - 1.0 / ctx.order)))


# ----------------------------------------------------------------------
# full MUB family
# ----------------------------------------------------------------------

@dataclass
class MubFamily:
    """2^n + 1 bases: one per slope (0 = logical) plus the vertical/dual."""

    ctx: FieldContext
    scheme: str
    bases: dict

    def basis(self, slope) -> list[np.ndarray]:
        return self.bases[slope]

    def state(self, line: LineSpec) -> np.ndarray:
        return self.bases[line.slope][line.intercept]

    def validate(self):
        q = self.ctx.order
        expected = set(self.ctx.elements()) | {VERTICAL}
        if set(self.bases) != expected:
            raise ConfigurationError("incomplete MUB family: missing slopes")
        for slope, states in self.bases.items():
            if len(states) != q:
                raise ConfigurationError(f"slope {slope}: expected {q} states")


def _coeffs_for_scheme(ctx, xi, scheme):
    if scheme.startswith("p"):
        return coeffs_closed_form(ctx, xi, int(scheme[1:]))
    if scheme == "graph+":
        return coeffs_graph(ctx, xi, 1)
    if scheme == "graph-":
        return coeffs_graph(ctx, xi, -1)
    raise ConfigurationError(f"unknown MUB scheme {scheme!r}")


def mub_family(ctx: FieldContext, scheme: str = "p1") -> MubFamily:
    """Build the complete family; scheme is 'p1', 'p2', ... or 'graph+-'."""
    require_operator_n(ctx)
    bases = {0: [logical_state(ctx, nu) for nu in ctx.elements()]}
    for xi in ctx.elements():
        if xi == 0:
            continue
        bases[xi] = line_states(ctx, _coeffs_for_scheme(ctx, xi, scheme))
    bases[VERTICAL] = [dual_basis_state(ctx, k) for k in ctx.elements()]
    fam = MubFamily(ctx, scheme, bases)
    fam.validate()
    return fam
