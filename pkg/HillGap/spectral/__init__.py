"""
:Date: 18.02.2026

..	versionadded:: v0.1.0
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from HillGap.spectral.HGCoefficients import \
	CoefficientModel, PerturbedPair, MomentNorm, \
 \
	eval_triple, make_builtin, moment_norm, PERIODIC_FAMILIES, PERTURBATION_FAMILIES, FAMILY_ALIASES

from HillGap.spectral.HGQuadODE import \
	StateVector, TransferMatrix, DenseTrace, \
 \
	transfer_matrix, propagate_state, propagate_dense, wronskian, wronskian_trace

from HillGap.spectral.HGFloquet import \
	Structure, MonodromyResult, BandStructure, FloquetSolutionPair, CellEnergy, \
 \
	monodromy, discriminant, discriminant_sweep, band_structure, floquet_solutions, floquet_exponent, cell_energy, \
	cell_integrals

from HillGap.spectral.HGPerturb import \
	SolutionKind, VolterraSetup, PerturbedSolution, GronwallReport, NeumannReport, \
 \
	volterra_setup, volterra_apply, build_decaying_solution, build_second_solution, march_solution, \
	gronwall_envelope, neumann_terms, ode_residual, propagation_defect, choose_truncation, solution_wronskian

from HillGap.spectral.HGSpectra import \
	BoundaryCondition, GapEigenvalueReport, WronskianCount, EdgeTestVerdict, Verdict, GreensResult, \
	SubordinacyReport, ShootingScan, \
 \
	gap_eigenvalues_halfline, gap_eigenvalues_fullline, gap_report, wronskian_zero_count, wronskian_certificate, \
	greens_apply, edge_eigenvalue_test, subordinacy_diagnostic

from HillGap.spectral.HGOracle import \
	TridiagonalPencil, OracleReport, \
 \
	discretize, sturm_count, oracle_gap_eigenvalues, counting_profile, richardson_ratio
