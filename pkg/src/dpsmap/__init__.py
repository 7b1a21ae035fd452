"""Discrete phase-space mappings for n-qubit systems over GF(2^n).

Field arithmetic with self-dual coordinates, generalized Pauli displacement
operators under pluggable phase conventions, s-parametrized mapping kernels
with forward/inverse transforms, MUB/rotation-operator constructions, the
line-sum (tomographic) machinery, and projections onto the symmetric
(m, n, k) measurement space — including the constructive witness that the
tomographic condition and permutation invariance are incompatible.
"""

from ._version import __version__
from .errors import ConfigurationError, FiducialError
from .gf2n import (IRREDUCIBLE_POLYS, MAX_N, FieldContext, field_context,
                   find_selfdual_basis)
from .kernels import (MAX_DENSE_N, MAX_LAZY_N, KernelSet, OverlapReport,
                      PhaseSpaceFunction, TomographicCheckResult, build_kernel,
                      convolution_prefactor, forward_map, inverse_map,
                      line_marginal, overlap_check, tomographic_check,
                      trace_convolution, wootters_kernel)
from .mubrot import (VERTICAL, LineSpec, MubFamily, RotationCoefficients,
                     all_lines, build_V, check_unbiased, coeffs_closed_form,
                     coeffs_from_phase, coeffs_graph, dual_basis_matrix,
                     dual_basis_state, line_states, mub_family)
from .serialize import (DiffReport, diff_grids, diff_projected, load_symbol,
                        mub_to_json, proj_from_json, proj_to_csv,
                        proj_to_gnuplot, proj_to_json, psf_from_json,
                        psf_to_csv, psf_to_gnuplot, psf_to_json)
from .suites import SUITE_NAMES, run_suite
from .pauli import (DEFAULT_FIDUCIAL_ZETA, FactorizedPhase, FiducialReport,
                    GraphPhase, PhaseConvention, PlainPhase, SqrtPhase,
                    TomographicPhase, build_X, build_Z, check_fiducial,
                    collective_spin, convention_from_name, displacement,
                    displacement_overlaps, ghz_state, logical_state,
                    permutation_matrix, permutation_op, phase_value,
                    spin_coherent, su2_group_element, symmetrize, w_state)
from .symproj import (REFERENCE_IDS, InvarianceReport, PhaseSearchReport,
                      ProjectedFunction, TheoremWitness,
                      check_kernel_invariance, find_theorem_witness,
                      fit_constant, pair_counts, project, r_factor,
                      reference_symbol, search_invariant_phases,
                      symbol_depends_only_on_h, symmetric_average,
                      theorem_witness, valid_triples)

__all__ = [
    "__version__",
    "ConfigurationError", "FiducialError",
    "IRREDUCIBLE_POLYS", "MAX_N", "FieldContext", "field_context",
    "find_selfdual_basis",
    "MAX_DENSE_N", "MAX_LAZY_N", "KernelSet", "OverlapReport",
    "PhaseSpaceFunction", "TomographicCheckResult", "build_kernel",
    "convolution_prefactor", "forward_map", "inverse_map", "line_marginal",
    "overlap_check", "tomographic_check", "trace_convolution",
    "wootters_kernel",
    "VERTICAL", "LineSpec", "MubFamily", "RotationCoefficients", "all_lines",
    "build_V", "check_unbiased", "coeffs_closed_form", "coeffs_from_phase",
    "coeffs_graph", "dual_basis_matrix", "dual_basis_state", "line_states",
    "mub_family",
    "DEFAULT_FIDUCIAL_ZETA", "FactorizedPhase", "FiducialReport", "GraphPhase",
    "PhaseConvention", "PlainPhase", "SqrtPhase", "TomographicPhase",
    "build_X", "build_Z", "check_fiducial", "collective_spin",
    "convention_from_name", "displacement", "displacement_overlaps",
    "ghz_state", "logical_state", "permutation_matrix", "permutation_op",
    "phase_value", "spin_coherent", "su2_group_element", "symmetrize",
    "w_state",
    "REFERENCE_IDS", "InvarianceReport", "PhaseSearchReport",
    "ProjectedFunction", "TheoremWitness", "check_kernel_invariance",
    "find_theorem_witness", "fit_constant", "pair_counts", "project",
    "r_factor", "reference_symbol", "search_invariant_phases",
    "symbol_depends_only_on_h", "symmetric_average", "theorem_witness",
    "valid_triples",
    "DiffReport", "diff_grids", "diff_projected", "load_symbol",
    "mub_to_json", "proj_from_json", "proj_to_csv", "proj_to_gnuplot",
    "proj_to_json", "psf_from_json", "psf_to_csv", "psf_to_gnuplot",
    "psf_to_json",
    "SUITE_NAMES", "run_suite",
]
