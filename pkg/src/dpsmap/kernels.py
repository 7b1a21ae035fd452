"""s-parametrized phase-space mapping kernels over the GF(2^n) grid.

The kernel at a grid point (alpha, beta) is

    Delta^(s)(alpha, beta) = 2^-n sum_(gamma, delta) chi(alpha delta + beta gamma)
                             [<xi| D(gamma, delta) |xi>]^(-s) D(gamma, delta)

with a fiducial |xi> whose displacement overlaps must all be nonzero when
s != 0.  Operator symbols are W_f = Tr[f Delta^(s)], inverted through the
dual kernel: f = 2^-n sum W_f Delta^(-s).

Everything is evaluated through character sums against the chi(xy) matrix,
which keeps the full forward/inverse transforms at O(8^n) flops without
materializing displacement operators.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, FiducialError
from .gf2n import FieldContext
from .mubrot import VERTICAL, LineSpec, MubFamily
from .pauli import (DEFAULT_FIDUCIAL_ZETA, PhaseConvention, check_fiducial,
                    displacement_overlaps, require_operator_n, spin_coherent)

#: dense kernel tables hold 16^n complex entries; cap per mode
MAX_DENSE_N = 4
MAX_LAZY_N = 6


@dataclass(eq=False)
class PhaseSpaceFunction:
    """An operator symbol W(alpha, beta) sampled on the full grid.

    ``grid[a, b]`` is indexed by field integers in polynomial-basis order.
    """

    n: int
    s: float
    grid: np.ndarray
    convention: str
    convention_invariant: bool = False
    fiducial: np.ndarray | None = None
    provenance: str = ""

    def total(self) -> complex:
        return complex(self.grid.sum())


class KernelSet:
    """All 4^n kernels for one (s, convention, fiducial) choice.

    Either backed by a phase convention (character-sum evaluation, with an
    optional dense table) or directly by a table of operators (used for
    the line-projector construction).
    """

    def __init__(self, ctx: FieldContext, s: float, conv: PhaseConvention | None,
                 fiducial: np.ndarray | None, mode: str, label: str,
                 hermitian: bool, threads: int = 1):
        require_operator_n(ctx)
        self.ctx = ctx
        self.s = s
        self.conv = conv
        self.fiducial = fiducial
        self.mode = mode
        self.label = label
        self.hermitian = hermitian
        self.fiducial_report = None
        self._table = None
        self._phi = None
        self._weights = None
        self._stable = None
        if conv is not None:
            self._prepare_character_data()
            if mode == "dense":
                self._materialize(threads)

    # -- construction ---------------------------------------------------

    def _prepare_character_data(self):
        ctx = self.ctx
        self._phi = self.conv.value_table(ctx)
        if self.s == 0:
            self._weights = np.ones((ctx.order, ctx.order), dtype=complex)
        else:
            overlaps = displacement_overlaps(ctx, self.conv, self.fiducial)
            self._weights = overlaps ** (-self.s)
        # stable[delta, t] = sum_gamma chi(gamma t) w[gamma, delta] phi[gamma, delta]
        self._stable = (ctx.char_matrix_c @ (self._weights * self._phi)).T

    def _point(self, alpha: int, beta: int) -> np.ndarray:
        ctx = self.ctx
        q = ctx.order
        xg = ctx.xor_grid
        chi_a = ctx.char_matrix_c[alpha]
        bmu = (np.arange(q) ^ beta)[:, None]
        vals = chi_a[xg] * self._stable[xg, bmu] / q
        out = np.empty((q, q), dtype=complex)
        out[ctx.index_table[:, None], ctx.index_table[None, :]] = vals
        return out

    def _materialize(self, threads: int = 1):
        q = self.ctx.order
        table = np.empty((q, q, q, q), dtype=complex)

        def fill_row(a):
            for b in range(q):
                table[a, b] = self._point(a, b)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(fill_row, range(q)))
        else:
            for a in range(q):
                fill_row(a)
        self._table = table

    @classmethod
    def from_table(cls, ctx: FieldContext, s: float, table: np.ndarray,
                   label: str, fiducial: np.ndarray | None = None,
                   hermitian: bool = True) -> "KernelSet":
        self = cls(ctx, s, None, fiducial, "dense", label, hermitian)
        self._table = np.asarray(table, dtype=complex)
        return self

    # -- access -----------------------------------------------------------

    def at(self, alpha: int, beta: int) -> np.ndarray:
        if self._table is not None:
            return self._table[alpha, beta]
        return self._point(alpha, beta)

    def points(self):
        q = self.ctx.order
        return [(a, b) for a in range(q) for b in range(q)]

    @property
    def convention_invariant(self) -> bool:
        return self.conv.permutation_invariant if self.conv is not None else False

    def normalization_residual(self) -> float:
        """Max-norm of sum_(alpha,beta) Delta - 2^n I."""
        q = self.ctx.order
        acc = np.zeros((q, q), dtype=complex)
        for a, b in self.points():
            acc += self.at(a, b)
        return float(np.max(np.abs(acc - q * np.eye(q))))

    def _psf(self, grid, provenance):
        return PhaseSpaceFunction(
            n=self.ctx.n, s=self.s, grid=grid, convention=self.label,
            convention_invariant=self.convention_invariant,
            fiducial=self.fiducial, provenance=provenance)


def build_kernel(ctx: FieldContext, s: float, conv: PhaseConvention,
                 fiducial: np.ndarray | None = None, mode: str | None = None,
                 threads: int = 1) -> KernelSet:
    """Construct the kernel set, checking the fiducial when s != 0.

    Vanishing displacement overlaps are fatal only when the kernel has to
    invert them (s > 0): the s = -1 family of coherent-state projectors is
    well defined for any fiducial, it merely stops being informationally
    complete.  The check result is attached as ``fiducial_report`` either
    way.
    """
    require_operator_n(ctx)
    if mode is None:
        mode = "dense" if ctx.n <= MAX_DENSE_N else "lazy"
    if mode == "dense" and ctx.n > MAX_DENSE_N:
        raise ConfigurationError(f"dense kernel tables are capped at n <= {MAX_DENSE_N}")
    if mode == "lazy" and ctx.n > MAX_LAZY_N:
        raise ConfigurationError(f"lazy kernels are capped at n <= {MAX_LAZY_N}")
    if mode not in ("dense", "lazy"):
        raise ConfigurationError(f"unknown kernel mode {mode!r}")
    report = None
    if s != 0:
        if fiducial is None:
            fiducial = spin_coherent(ctx, DEFAULT_FIDUCIAL_ZETA)
        report = check_fiducial(ctx, conv, fiducial)
        if s > 0 and not report.ok:
            raise FiducialError(
                f"fiducial has vanishing displacement overlaps (min {report.min_abs:.2e}) "
                f"at points {report.violations[:4]}; cannot raise them to a "
                f"negative power")
    kernel = KernelSet(ctx, s, conv, fiducial, mode, conv.name, conv.hermitian,
                       threads=threads)
    kernel.fiducial_report = report
    return kernel


# ----------------------------------------------------------------------
# forward / inverse maps
# ----------------------------------------------------------------------

def forward_map(kernel: KernelSet, op: np.ndarray,
                provenance: str = "") -> PhaseSpaceFunction:
    """Symbol W_f(alpha, beta) = Tr[f Delta^(s)(alpha, beta)]."""
    ctx = kernel.ctx
    q = ctx.order
    op = np.asarray(op, dtype=complex)
    if op.shape != (q, q):
        raise ValueError(f"operator must be {q}x{q}")
    if kernel.conv is not None:
        a_idx = ctx.index_table
        # monomial traces Tr[f D(gamma, delta)] via one character transform
        v = op[a_idx[ctx.xor_grid], a_idx[None, :]]          # v[delta, mu]
        t = v @ ctx.char_matrix_c                            # t[delta, gamma]
        f_tab = kernel._weights * kernel._phi * t.T
        grid = (ctx.char_matrix_c @ f_tab @ ctx.char_matrix_c).T / q
    else:
        grid = np.einsum("abij,ji->ab", kernel._table, op)
    return kernel._psf(grid, provenance)


def inverse_map(kernel: KernelSet, psf: PhaseSpaceFunction) -> np.ndarray:
    """Reconstruct f = 2^-n sum W(alpha, beta) Delta^(-s)(alpha, beta).

    ``kernel`` must be the dual of the kernel that produced ``psf``: s
    values opposite, same convention and same fiducial.
    """
    ctx = kernel.ctx
    q = ctx.order
    if psf.n != ctx.n:
        raise ConfigurationError("dimension mismatch between symbol and kernel")
    if abs(psf.s + kernel.s) > 1e-12:
        raise ConfigurationError(
            f"need the dual kernel: symbol has s = {psf.s}, kernel has s = {kernel.s}")
    if psf.convention != kernel.label:
        raise ConfigurationError(
            f"convention mismatch: {psf.convention!r} vs {kernel.label!r}")
    if (kernel.s != 0 and psf.fiducial is not None and kernel.fiducial is not None
            and not np.allclose(psf.fiducial, kernel.fiducial)):
        raise ConfigurationError("fiducial mismatch between symbol and kernel")
    w = np.asarray(psf.grid, dtype=complex)
    if kernel.conv is not None:
        c = ctx.char_matrix_c
        bracket = ((c @ w @ c).T) / (q * q)                  # [gamma, delta]
        g = bracket * kernel._weights * kernel._phi
        coef = c @ g                                         # coef[mu, delta]
        out = np.zeros((q, q), dtype=complex)
        out[ctx.index_table[:, None], ctx.index_table[ctx.xor_grid]] = coef
        return out
    return np.einsum("ab,abij->ij", w, kernel._table) / q


# ----------------------------------------------------------------------
# overlap relation and trace convolution
# ----------------------------------------------------------------------

@dataclass
class OverlapReport:
    """Fit of Tr[Delta^(s) Delta^(-s)'] = constant * delta_(points)."""

    n: int
    constant: complex
    max_diag_dev: float
    max_offdiag: float


def _flat_tables(kernel: KernelSet):
    q = kernel.ctx.order
    flat = np.empty((q * q, q * q), dtype=complex)
    flat_t = np.empty((q * q, q * q), dtype=complex)
    for i, (a, b) in enumerate(kernel.points()):
        op = kernel.at(a, b)
        flat[i] = op.reshape(-1)
        flat_t[i] = op.T.reshape(-1)
    return flat, flat_t


def overlap_check(kernel_a: KernelSet, kernel_b: KernelSet) -> OverlapReport:
    """Pairwise traces of a dual kernel pair; fits the diagonal constant."""
    if kernel_a.ctx is not kernel_b.ctx:
        raise ConfigurationError("kernels live on different fields")
    flat_a, _ = _flat_tables(kernel_a)
    _, flat_bt = _flat_tables(kernel_b)
    gram = flat_a @ flat_bt.T
    diag = np.diag(gram)
    constant = complex(diag.mean())
    off = gram - np.diag(diag)
    return OverlapReport(
        n=kernel_a.ctx.n,
        constant=constant,
        max_diag_dev=float(np.max(np.abs(diag - constant))),
        max_offdiag=float(np.max(np.abs(off))),
    )


def convolution_prefactor(kernel_a: KernelSet, kernel_b: KernelSet):
    """Prefactor c/4^n for Tr(fg) = pref * sum W_f^(s) W_g^(-s).

    Returned alongside the overlap report; never hardcoded.
    """
    report = overlap_check(kernel_a, kernel_b)
    points = kernel_a.ctx.order ** 2
    return report.constant / points, report


def trace_convolution(wf: PhaseSpaceFunction, wg: PhaseSpaceFunction,
                      prefactor: complex) -> complex:
    """Tr(fg) from the two symbols of a dual pair."""
    if wf.n != wg.n:
        raise ConfigurationError("symbol dimension mismatch")
    if abs(wf.s + wg.s) > 1e-12:
        raise ConfigurationError("trace convolution needs dual s values")
    if wf.convention != wg.convention:
        raise ConfigurationError("trace convolution needs one convention")
    return complex(prefactor * np.sum(wf.grid * wg.grid))


# ----------------------------------------------------------------------
# line-projector (tomographic) kernel and checks
# ----------------------------------------------------------------------

def wootters_kernel(ctx: FieldContext, family: MubFamily) -> KernelSet:
    """Delta^(0)(a, b) = |a~><a~| + sum_xi P^xi_(b + xi a) - I.

    P^xi_nu projects on the line state of slope xi through (a, b).  Equals
    the s = 0 kernel of the matching tomographic phase convention.
    """
    require_operator_n(ctx)
    if ctx.n > MAX_DENSE_N:
        raise ConfigurationError(f"line-projector tables are capped at n <= {MAX_DENSE_N}")
    family.validate()
    q = ctx.order
    eye = np.eye(q, dtype=complex)
    proj = {}
    for slope, states in family.bases.items():
        proj[slope] = np.stack([np.outer(s, s.conj()) for s in states])
    table = np.empty((q, q, q, q), dtype=complex)
    for a in range(q):
        mul_row = ctx.mul_table[:, a]
        for b in range(q):
            acc = proj[VERTICAL][a] - eye
            for xi in range(q):
                acc = acc + proj[xi][b ^ mul_row[xi]]
            table[a, b] = acc
    return KernelSet.from_table(ctx, 0.0, table, f"wootters[{family.scheme}]")


def line_marginal(ctx: FieldContext, psf: PhaseSpaceFunction,
                  line: LineSpec) -> complex:
    """2^-n sum of the symbol over the points of one line."""
    total = sum(psf.grid[a, b] for a, b in line.points(ctx))
    return complex(total / ctx.order)


@dataclass
class TomographicCheckResult:
    line: LineSpec
    lhs: complex
    rhs: complex

    @property
    def deviation(self) -> float:
        return abs(self.lhs - self.rhs)


def tomographic_check(kernel: KernelSet, rho: np.ndarray, line: LineSpec,
                      states: list) -> TomographicCheckResult:
    """Compare the line sum of W_rho with <psi|rho|psi> for the line state."""
    ctx = kernel.ctx
    psf = forward_map(kernel, rho)
    lhs = line_marginal(ctx, psf, line)
    psi = states[line.intercept]
    rhs = complex(psi.conj() @ np.asarray(rho, dtype=complex) @ psi)
    return TomographicCheckResult(line, lhs, rhs)
