"""
:Date: 17.02.2026

..	versionadded:: v0.1.0

Eigenvalues in the gaps of perturbed periodic problems and the tests around the band edges. Gap eigenvalues are
located by shooting with the decaying solution, counted independently by the zeros of the modified Wronskian and
checked against the finite-difference oracle. The module also provides the Green's operator in a gap, the band-edge
test for square-integrable solutions and the subordinacy diagnostic inside bands.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import enum
import math
from typing import Final, Tuple, Optional, Dict, Any, Sequence, Callable, List, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize
from scipy.interpolate import CubicHermiteSpline

from HillGap.HGLogger import log, WARNING, VERBOSE
from HillGap.HGPrinting import repr_str
from HillGap.HGUtils import Immutable, PreconditionError, NumericalError, parallel_map
from HillGap.spectral.HGCoefficients import CoefficientModel, PerturbedPair
from HillGap.spectral.HGQuadODE import DEFAULT_TOL, StateVector, propagate_dense, wronskian_trace
from HillGap.spectral.HGFloquet import TOL_EDGE, Structure, monodromy, discriminant_sweep, cell_integrals, \
	cell_energy
from HillGap.spectral.HGPerturb import N_MAX, SolutionKind, VolterraSetup, volterra_setup, \
	choose_truncation, build_decaying_solution, build_second_solution, solution_wronskian, gronwall_envelope, \
	interval_integrals
from HillGap.spectral.HGOracle import OracleReport, oracle_gap_eigenvalues

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

SCAN_SAMPLES: Final[int] = 200
""" Samples of ``m(λ')`` inside a gap, clustered towards the band edges. """
REFINE_POINTS: Final[int] = 8
""" Extra samples around each local minimum of ``|m|`` without a sign change. """
GAP_CHECK_POINTS: Final[int] = 33
EDGE_ANGLES: Final[int] = 12
""" Angles on the unit circle sampled by :py:func:`edge_eigenvalue_test`. """
N0_MAX: Final[int] = 10
""" Cells after which the edge test expects the cell integrals to stay above ``E/2``. """
ORACLE_CELLS: Final[int] = 40
""" Default oracle truncation in periods. """
ORACLE_STEP: Final[float] = 0.01
""" Default oracle grid step. """
GAMMA_MIN: Final[float] = 1e-12
""" Minima of the weighted base Wronskian below this value make the Wronskian cutoff unreliable. """
CELL_SLACK: Final[float] = 0.1
""" Relative slack of the subordinacy cell bounds. """
DECAY_TOL: Final[float] = 1e-6
""" Largest weighted tail deviation accepted for eigenfunctions found in a gap. """

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class BoundaryCondition(Immutable):
	"""
	The self-adjoint condition ``cos α u(a) + sin α (p u')(a) = 0`` with ``α`` normalized to ``[0, π)``.
	"""

	def __init__(self, alpha: float = 0.0):
		if not math.isfinite(alpha):
			raise PreconditionError("bad boundary angle", alpha=alpha)
		alpha = float(alpha) % math.pi
		# 0 and π describe the same condition
		self._alpha = 0.0 if math.isclose(alpha, math.pi, rel_tol=0.0, abs_tol=1e-15) else alpha

	@classmethod
	def dirichlet(cls) -> BoundaryCondition:
		return cls(0.0)

	@classmethod
	def neumann(cls) -> BoundaryCondition:
		return cls(math.pi / 2)

	@classmethod
	def from_state(cls, state: Union[StateVector, ArrayLike]) -> BoundaryCondition:
		""" :return: the condition satisfied by the real state ``(u, pu')`` at ``a`` """
		y = state.as_array() if isinstance(state, StateVector) else np.asarray(state)
		if np.iscomplexobj(y):
			if np.max(np.abs(np.imag(y))) > 1e-12 * max(1.0, float(np.max(np.abs(y)))):
				raise PreconditionError("boundary conditions need a real state", state=y)
			y = y.real
		if not np.any(y != 0):
			raise PreconditionError("the zero state satisfies every boundary condition")
		return cls(math.atan2(-float(y[0]), float(y[1])))

	@property
	def alpha(self) -> float:
		return self._alpha

	def residual(self, state: Union[StateVector, ArrayLike]) -> Any:
		""" :return: ``cos α u + sin α (pu')`` of a state or of states with shape ``(..., 2)`` """
		y = state.as_array() if isinstance(state, StateVector) else np.asarray(state)
		return math.cos(self._alpha) * y[..., 0] + math.sin(self._alpha) * y[..., 1]

	def to_json_dict(self) -> Dict[str, Any]:
		return {"alpha": self._alpha}

	def __eq__(self, other: Any) -> bool:
		return isinstance(other, BoundaryCondition) and self._alpha == other.alpha

	def __hash__(self) -> int:
		return hash(self._alpha)

	def __repr__(self) -> str:
		return repr_str(self, BoundaryCondition.alpha)

class ShootingScan(Immutable):
	""" The sampled, sign-aligned eigenvalue condition ``m(λ')`` and its refined zeros. """

	def __init__(self, lams: ArrayLike, values: ArrayLike, zeros: Sequence[float]):
		lams, values = np.array(lams, dtype=float), np.array(values, dtype=float)
		lams.setflags(write=False)
		values.setflags(write=False)
		self._lams = lams
		self._values = values
		self._zeros = tuple(float(z) for z in zeros)

	@property
	def lams(self) -> NDArray[np.float64]:
		return self._lams

	@property
	def values(self) -> NDArray[np.float64]:
		return self._values

	@property
	def zeros(self) -> Tuple[float, ...]:
		return self._zeros

	@property
	def count(self) -> int:
		return len(self._zeros)

	def rows(self) -> List[Tuple[float, float]]:
		return list(zip(self._lams.tolist(), self._values.tolist()))

	def __repr__(self) -> str:
		return repr_str(self, ShootingScan.zeros)

class WronskianCount(Immutable):
	"""
	Sign changes of the modified Wronskian ``W₁(x) = W(u₁(·, μ), u₁(·, λ))(x)`` on ``[a, X]``, with the cutoff after
	which the weighted deviation from the unperturbed Wronskian stays below half the cell minimum ``γ`` of its weighted
	modulus, so that no further zeros can occur. The count is reliable if ``γ > 0`` and the cutoff lies in the first
	three quarters of ``[a, X]``.
	"""

	def __init__(self,
				 mu: float,
				 lam: float,
				 grid: NDArray[np.float64],
				 values: NDArray[np.float64],
				 gamma: float,
				 cutoff: float,
				 reliable: bool,
				 bc_at_mu: BoundaryCondition):
		self._mu = float(mu)
		self._lam = float(lam)
		self._grid = grid
		self._values = np.array(values, dtype=float)
		self._values.setflags(write=False)
		self._gamma = float(gamma)
		self._cutoff = float(cutoff)
		self._reliable = bool(reliable)
		self._bc_at_mu = bc_at_mu
		signs = np.sign(self._values)
		signs = signs[signs != 0]
		self._count = int(np.count_nonzero(signs[1:] != signs[:-1]))

	@property
	def mu(self) -> float:
		return self._mu

	@property
	def lam(self) -> float:
		return self._lam

	@property
	def count(self) -> int:
		return self._count

	@property
	def gamma(self) -> float:
		return self._gamma

	@property
	def cutoff(self) -> float:
		return self._cutoff

	@property
	def x_max(self) -> float:
		return float(self._grid[-1])

	@property
	def reliable(self) -> bool:
		return self._reliable

	@property
	def bc_at_mu(self) -> BoundaryCondition:
		""" The boundary condition at ``a`` satisfied by ``u₁(·, μ)``. """
		return self._bc_at_mu

	def rows(self) -> List[Tuple[float, float]]:
		return list(zip(self._grid.tolist(), self._values.tolist()))

	def to_json_dict(self) -> Dict[str, Any]:
		return {"mu": self._mu, "lambda": self._lam, "count": self._count, "gamma": self._gamma,
				"cutoff": self._cutoff, "X": self.x_max, "reliable": self._reliable, "alpha_at_mu": self._bc_at_mu}

	def __repr__(self) -> str:
		return repr_str(self, WronskianCount.count, WronskianCount.gamma, WronskianCount.cutoff,
						WronskianCount.reliable)

class GapEigenvalueReport(Immutable):
	"""
	Eigenvalues found in one gap with the counts of every method that ran; counts of methods that did not run are
	``None``. Half-line agreement requires ``count_shooting == count_oracle`` and ``count_wronskian ==
	count_shooting_matched``, the latter being the shooting count for the boundary condition of ``u₁(·, μ)``.
	Full-line reports also carry the Dirichlet half-line counts on both sides.
	"""

	def __init__(self,
				 gap: Tuple[float, float],
				 eigenvalues: Sequence[float],
				 count_shooting: int,
				 count_wronskian: Optional[int] = None,
				 count_oracle: Optional[int] = None,
				 count_shooting_matched: Optional[int] = None,
				 count_left: Optional[int] = None,
				 count_right: Optional[int] = None,
				 scan: Optional[ShootingScan] = None,
				 wronskian: Optional[WronskianCount] = None,
				 oracle: Optional[OracleReport] = None,
				 decay_verified: Optional[bool] = None,
				 side: str = "half",
				 bc: Optional[BoundaryCondition] = None,
				 caveats: Sequence[str] = ()):
		self._gap = (float(gap[0]), float(gap[1]))
		self._eigenvalues = tuple(sorted(float(v) for v in eigenvalues))
		self._count_shooting = int(count_shooting)
		self._count_wronskian = count_wronskian
		self._count_oracle = count_oracle
		self._count_shooting_matched = count_shooting_matched
		self._count_left = count_left
		self._count_right = count_right
		self._scan = scan
		self._wronskian = wronskian
		self._oracle = oracle
		self._decay_verified = decay_verified
		self._side = side
		self._bc = bc
		self._caveats = tuple(caveats)

	# ~~~~~~~~~~~~~~~ properties ~~~~~~~~~~~~~~~

	@property
	def gap(self) -> Tuple[float, float]:
		return self._gap

	@property
	def eigenvalues(self) -> Tuple[float, ...]:
		return self._eigenvalues

	@property
	def count_shooting(self) -> int:
		return self._count_shooting

	@property
	def count_wronskian(self) -> Optional[int]:
		return self._count_wronskian

	@property
	def count_oracle(self) -> Optional[int]:
		return self._count_oracle

	@property
	def count_shooting_matched(self) -> Optional[int]:
		return self._count_shooting_matched

	@property
	def count_left(self) -> Optional[int]:
		return self._count_left

	@property
	def count_right(self) -> Optional[int]:
		return self._count_right

	@property
	def scan(self) -> Optional[ShootingScan]:
		return self._scan

	@property
	def wronskian(self) -> Optional[WronskianCount]:
		return self._wronskian

	@property
	def oracle(self) -> Optional[OracleReport]:
		return self._oracle

	@property
	def decay_verified(self) -> Optional[bool]:
		return self._decay_verified

	@property
	def side(self) -> str:
		return self._side

	@property
	def caveats(self) -> Tuple[str, ...]:
		return self._caveats

	@property
	def coupling_holds(self) -> Optional[bool]:
		""" ``|count_full - count_left - count_right| ≤ 2`` for full-line reports. """
		if self._count_left is None or self._count_right is None:
			return None
		return abs(self._count_shooting - self._count_left - self._count_right) <= 2

	@property
	def agreement(self) -> bool:
		checks = list()
		if self._count_oracle is not None:
			checks.append(self._count_shooting == self._count_oracle)
		if self._count_wronskian is not None and self._count_shooting_matched is not None:
			checks.append(self._count_wronskian == self._count_shooting_matched)
		if self.coupling_holds is not None:
			checks.append(self.coupling_holds)
		return len(checks) > 0 and all(checks)

	# ~~~~~~~~~~~~~~~ methods ~~~~~~~~~~~~~~~

	def to_json_dict(self) -> Dict[str, Any]:
		out = {"gap": self._gap, "side": self._side, "eigenvalues": self._eigenvalues,
			   "counts": {"shooting": self._count_shooting, "wronskian": self._count_wronskian,
						  "oracle": self._count_oracle, "shooting_matched": self._count_shooting_matched},
			   "agreement": self.agreement, "decay_verified": self._decay_verified, "caveats": self._caveats}
		if self._bc is not None:
			out["alpha"] = self._bc.alpha
		if self._side == "full":
			out["counts"].update({"left": self._count_left, "right": self._count_right})
			out["coupling_holds"] = self.coupling_holds
		if self._wronskian is not None:
			out["wronskian_certificate"] = self._wronskian
		if self._oracle is not None:
			out["oracle"] = self._oracle
		return out

	def __repr__(self) -> str:
		return repr_str(self, GapEigenvalueReport.gap, GapEigenvalueReport.eigenvalues,
						GapEigenvalueReport.agreement)

class Verdict(enum.Enum):
	NO_L2_SOLUTION = "no_L2_solution"
	INCONCLUSIVE = "inconclusive"

class EdgeTestVerdict(Immutable):
	"""
	Cell integrals ``∫ |w₁|² r₁`` of the combinations ``w₁ = cos θ u₁ + sin θ v₁`` at a band edge, one row per angle,
	and the bound ``E/2`` from the base solutions. ``n0`` is the first cell from which every row stays above its bound.
	"""

	def __init__(self,
				 lam_edge: float,
				 angles: ArrayLike,
				 cell_integrals: ArrayLike,
				 base_bounds: ArrayLike,
				 n0: Optional[int],
				 verdict: Verdict):
		self._lam_edge = float(lam_edge)
		self._angles = np.array(angles, dtype=float)
		self._cells = np.array(cell_integrals, dtype=float)
		self._base_bounds = np.array(base_bounds, dtype=float)
		for array in (self._angles, self._cells, self._base_bounds):
			array.setflags(write=False)
		self._n0 = n0
		self._verdict = verdict

	@property
	def lam_edge(self) -> float:
		return self._lam_edge

	@property
	def angles(self) -> NDArray[np.float64]:
		return self._angles

	@property
	def cell_integrals(self) -> NDArray[np.float64]:
		return self._cells

	@property
	def base_bounds(self) -> NDArray[np.float64]:
		""" The lower bounds ``E`` of the base cell integrals per angle. """
		return self._base_bounds

	@property
	def lower_bound_E(self) -> float:
		return float(np.min(self._base_bounds))

	@property
	def n0(self) -> Optional[int]:
		return self._n0

	@property
	def verdict(self) -> Verdict:
		return self._verdict

	def to_json_dict(self) -> Dict[str, Any]:
		return {"lambda_edge": self._lam_edge, "angles": self._angles, "cell_integrals": self._cells,
				"base_bounds": self._base_bounds, "E": self.lower_bound_E, "n0": self._n0,
				"verdict": self._verdict}

	def __repr__(self) -> str:
		return repr_str(self, EdgeTestVerdict.lam_edge, EdgeTestVerdict.verdict, EdgeTestVerdict.n0,
						value_function=str)

class GreensResult(Immutable):
	""" ``Sg`` and ``p (Sg)'`` on the grid of the setup, with the residual of ``(τ₁ - λ) Sg = g``. """

	def __init__(self, lam: float, grid: NDArray[np.float64], values: NDArray, flux: NDArray, residual_sup: float,
				 wronskian: float, inv_p: NDArray[np.float64]):
		self._lam = float(lam)
		self._grid = grid
		self._values = np.array(values)
		self._flux = np.array(flux)
		for array in (self._values, self._flux):
			array.setflags(write=False)
		self._residual_sup = float(residual_sup)
		self._wronskian = float(wronskian)
		self._spline = CubicHermiteSpline(grid, self._values, inv_p * self._flux)

	@property
	def lam(self) -> float:
		return self._lam

	@property
	def grid(self) -> NDArray[np.float64]:
		return self._grid

	@property
	def values(self) -> NDArray:
		return self._values

	@property
	def flux(self) -> NDArray:
		return self._flux

	@property
	def residual_sup(self) -> float:
		return self._residual_sup

	@property
	def wronskian(self) -> float:
		return self._wronskian

	def __call__(self, x: ArrayLike) -> NDArray:
		""" :return: ``Sg`` interpolated at ``x`` inside ``[a, X]`` """
		return self._spline(np.asarray(x, dtype=float))

	def rows(self) -> List[Tuple[float, float, float]]:
		return list(zip(self._grid.tolist(), self._values.tolist(), self._flux.tolist()))

	def to_json_dict(self) -> Dict[str, Any]:
		return {"lambda": self._lam, "X": float(self._grid[-1]), "residual_sup": self._residual_sup,
				"wronskian": self._wronskian}

	def __repr__(self) -> str:
		return repr_str(self, GreensResult.lam, GreensResult.residual_sup)

class SubordinacyReport(Immutable):
	"""
	Mass ratios ``R(X) = ∫_a^X |u|² r₁ / ∫_a^X |v|² r₁`` of two independent real solutions inside a band, with their
	cell integrals and the cell bounds ``E₁, E₂`` of the base solutions they approach.
	"""

	def __init__(self, lam: float, x_list: ArrayLike, ratios: ArrayLike, cells: ArrayLike, bounds: ArrayLike):
		self._lam = float(lam)
		self._x_list = np.array(x_list, dtype=float)
		self._ratios = np.array(ratios, dtype=float)
		self._cells = np.array(cells, dtype=float)
		self._bounds = np.array(bounds, dtype=float)
		for array in (self._x_list, self._ratios, self._cells, self._bounds):
			array.setflags(write=False)

	@property
	def lam(self) -> float:
		return self._lam

	@property
	def x_list(self) -> NDArray[np.float64]:
		return self._x_list

	@property
	def ratios(self) -> NDArray[np.float64]:
		return self._ratios

	@property
	def cells(self) -> NDArray[np.float64]:
		""" Cell integrals with shape ``(2, n_cells)``. """
		return self._cells

	@property
	def bounds(self) -> NDArray[np.float64]:
		""" The base bounds ``(E₁, E₂)`` per solution with shape ``(2, 2)``. """
		return self._bounds

	@property
	def cells_bounded(self) -> bool:
		""" Whether the cells of the second half of the range lie within ``[E₁, E₂]`` up to :py:data:`CELL_SLACK`. """
		tail = self._cells[:, self._cells.shape[1] // 2:]
		low = self._bounds[:, 0:1] * (1 - CELL_SLACK)
		high = self._bounds[:, 1:2] * (1 + CELL_SLACK)
		return bool(np.all((tail >= low) & (tail <= high)))

	def to_json_dict(self) -> Dict[str, Any]:
		return {"lambda": self._lam, "X": self._x_list, "R": self._ratios, "cells": self._cells,
				"E1_E2": self._bounds, "cells_bounded": self.cells_bounded}

	def __repr__(self) -> str:
		return repr_str(self, SubordinacyReport.lam, SubordinacyReport.ratios)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

# ~~~~~~~~~~~~~~~ gap checks ~~~~~~~~~~~~~~~

def _is_edge_or_gap(model: CoefficientModel, lam: float, tol: float, tol_edge: float) -> bool:
	return abs(monodromy(model, lam, tol, tol_edge).discriminant) >= 2 - tol_edge

def _check_gap(model: CoefficientModel, gap: Tuple[float, float], tol: float, tol_edge: float) -> Tuple[float, float]:
	mu, lam = float(gap[0]), float(gap[1])
	if not lam > mu:
		raise PreconditionError("closed gap: the gap has an empty interior", gap=gap)
	inner = np.linspace(mu, lam, GAP_CHECK_POINTS + 2)[1:-1]
	d = np.abs([value for _, value in discriminant_sweep(model, inner, tol)])
	if np.any(d <= 2):
		raise PreconditionError("gap overlaps a band", gap=gap, lam=float(inner[int(np.argmin(d))]))
	for end in (mu, lam):
		if not _is_edge_or_gap(model, end, tol, tol_edge):
			raise PreconditionError("gap end lies inside a band", gap=gap, end=end)
	return mu, lam

def _usable_end(pair: PerturbedPair, lam: float, tol: float, tol_edge: float) -> bool:
	""" Whether the decaying solution is available at a gap end, which needs moment class 1 at Jordan edges. """
	result = monodromy(pair.base, lam, tol, tol_edge)
	if result.structure == Structure.PARABOLIC_JORDAN:
		return pair.is_trivial or pair.moment_class >= 1
	return result.structure != Structure.ELLIPTIC

# ~~~~~~~~~~~~~~~ shooting ~~~~~~~~~~~~~~~

def _scan_grid(gap: Tuple[float, float], samples: int, include_lo: bool, include_hi: bool) -> NDArray[np.float64]:
	mu, lam = gap
	s = np.arange(1, samples + 1) / (samples + 1)
	inner = mu + (lam - mu) * (1 - np.cos(np.pi * s)) / 2
	return np.concatenate(([mu] if include_lo else [], inner, [lam] if include_hi else []))

def _decaying_state(pair: PerturbedPair, lam: float, tol: float, tol_edge: float, method: str) -> NDArray:
	setup = volterra_setup(pair, lam, tol, tol_edge=tol_edge)
	state = build_decaying_solution(setup, tol, N_MAX, method).states[0]
	return np.real(state)

def _normalize(states: NDArray) -> NDArray:
	return states / np.linalg.norm(states, axis=-1, keepdims=True)

def _align(states: NDArray) -> NDArray:
	""" Flips the sign of each state so that it points along its predecessor; states have shape ``(n, m, 2)``. """
	out = np.array(states)
	for j in range(1, out.shape[0]):
		dots = np.sum(out[j] * out[j - 1], axis=-1)
		out[j] = np.where((dots < 0)[:, None], -out[j], out[j])
	return out

def _shoot(state_at: Callable[[float], NDArray],
		   condition: Callable[[NDArray], Any],
		   lams: NDArray[np.float64],
		   tol: float) -> ShootingScan:
	"""
	Samples the condition on the sign-aligned states, refines around minima of its modulus and brackets its zeros.

	:param state_at: maps ``λ'`` to states with shape ``(m, 2)``
	:param condition: maps aligned states with shape ``(..., m, 2)`` to real values
	"""
	states = _align(_normalize(np.asarray(parallel_map(state_at, lams.tolist()))))
	values = np.asarray(condition(states), dtype=float)

	extra = list()
	for j in range(1, lams.size - 1):
		small = abs(values[j]) < abs(values[j - 1]) and abs(values[j]) < abs(values[j + 1])
		if small and values[j - 1] * values[j] > 0 and values[j] * values[j + 1] > 0:
			extra.extend(np.linspace(lams[j - 1], lams[j + 1], REFINE_POINTS + 2)[1:-1].tolist())
	if len(extra) > 0:
		extra = np.setdiff1d(np.asarray(extra), lams)
		new_states = _normalize(np.asarray(parallel_map(state_at, extra.tolist())))
		lams = np.concatenate((lams, extra))
		order = np.argsort(lams, kind="stable")
		lams = lams[order]
		states = _align(np.concatenate((states, new_states))[order])
		values = np.asarray(condition(states), dtype=float)
		log(f"[shooting] refined {extra.size} samples around minima of |m|", level=VERBOSE)

	zeros = list()
	for j in range(lams.size - 1):
		if values[j] == 0.0 and 0 < j:
			zeros.append(float(lams[j]))
		if values[j] * values[j + 1] < 0:
			reference = states[j]

			def aligned(lam: float) -> float:
				s = _normalize(np.asarray(state_at(lam)))
				dots = np.sum(s * reference, axis=-1)
				s = np.where((dots < 0)[:, None], -s, s)
				return float(condition(s))

			zeros.append(float(optimize.brentq(aligned, lams[j], lams[j + 1], xtol=max(tol, 1e-14))))
	return ShootingScan(lams, values, zeros)

def _halfline_scan(pair: PerturbedPair,
				   bc: BoundaryCondition,
				   gap: Tuple[float, float],
				   tol: float,
				   samples: int,
				   tol_edge: float,
				   method: str,
				   include_ends: bool = True) -> ShootingScan:
	lams = _scan_grid(gap, samples,
					  include_ends and _usable_end(pair, gap[0], tol, tol_edge),
					  include_ends and _usable_end(pair, gap[1], tol, tol_edge))
	return _shoot(lambda lam: _decaying_state(pair, lam, tol, tol_edge, method)[None, :],
				  lambda s: bc.residual(s[..., 0, :]), lams, tol)

def gap_eigenvalues_halfline(pair: PerturbedPair,
							 bc: BoundaryCondition,
							 gap: Tuple[float, float],
							 tol: float = DEFAULT_TOL,
							 samples: int = SCAN_SAMPLES,
							 tol_edge: float = TOL_EDGE,
							 method: str = "auto") -> GapEigenvalueReport:
	"""
	Locates the eigenvalues of the half-line problem with boundary condition ``bc`` inside a gap as the zeros of
	``m(λ') = cos α u₁(a, λ') + sin α (p₁u₁')(a, λ')``. The samples of ``u₁(a, ·)`` are sign-aligned with their
	predecessors so that every sign change of ``m`` is a zero; zeros are refined by Brent's method to ``tol``.

	:return: the shooting part of the report
	:raise PreconditionError: if the gap is closed or overlaps a band
	"""
	gap = _check_gap(pair.base, gap, tol, tol_edge)
	scan = _halfline_scan(pair, bc, gap, tol, samples, tol_edge, method)
	log(f"[gap_eigenvalues_halfline] {scan.count} eigenvalues in {gap} for α={bc.alpha:.6g}", level=VERBOSE)
	return GapEigenvalueReport(gap, scan.zeros, scan.count, scan=scan, side="half", bc=bc)

# ~~~~~~~~~~~~~~~ modified Wronskian ~~~~~~~~~~~~~~~

def wronskian_certificate(pair: PerturbedPair,
						  mu: float,
						  lam: float,
						  x_max: Optional[float] = None,
						  tol: float = DEFAULT_TOL,
						  tol_edge: float = TOL_EDGE,
						  method: str = "auto") -> WronskianCount:
	"""
	Counts the sign changes of ``W₁(x) = W(u₁(·, μ), u₁(·, λ))(x)`` on a common grid of ``[a, X]``. With
	``W̃(x) = e^{Re(c_μ + c_λ)(x-a)/ω} |W(x)|`` the unperturbed ``W̃₀`` is periodic with minimum ``γ`` and the
	perturbed ``W̃₁`` approaches it; wherever ``|W̃₁ - W̃₀| < γ`` the Wronskian cannot vanish.

	:param x_max: the common truncation point, at least the truncation chosen for both energies
	:raise PreconditionError: if ``μ ≥ λ`` or one of them lies inside a band
	"""
	if not mu < lam:
		raise PreconditionError("the Wronskian count needs μ < λ", mu=mu, lam=lam)
	for end in (mu, lam):
		if not _is_edge_or_gap(pair.base, end, tol, tol_edge):
			raise PreconditionError("energy lies inside a band", lam=end)
	a, w = pair.domain_start, pair.period
	x_common = max(choose_truncation(pair, mu, tol)[0], choose_truncation(pair, lam, tol)[0], x_max or a)

	setups = [volterra_setup(pair, e, tol, x_max=x_common, tol_edge=tol_edge) for e in (mu, lam)]
	u_mu, u_lam = (build_decaying_solution(s, tol, N_MAX, method) for s in setups)
	w1 = np.real(solution_wronskian(u_mu, u_lam))
	w0 = np.real(wronskian_trace(setups[0].base_states(SolutionKind.U1_DECAYING),
								 setups[1].base_states(SolutionKind.U1_DECAYING)))
	x = setups[0].grid
	scale = np.exp((setups[0].c.real + setups[1].c.real) * (x - a) / w)
	gamma = float(np.min((scale * np.abs(w0))[x <= a + w]))
	deviation = scale * np.abs(w1 - w0)

	above = np.nonzero(deviation >= gamma / 2)[0]
	cutoff = float(x[min(above[-1] + 1, x.size - 1)]) if above.size > 0 else float(x[0])
	reliable = gamma > GAMMA_MIN and cutoff <= a + 0.75 * (x_common - a)
	if not reliable:
		log(f"[wronskian_zero_count] unreliable cutoff for ({mu}, {lam}): γ={gamma:.3e}, cutoff={cutoff:.6g}",
			level=WARNING)
	return WronskianCount(mu, lam, x, w1, gamma, cutoff, reliable, BoundaryCondition.from_state(u_mu.states[0]))

def wronskian_zero_count(pair: PerturbedPair,
						 mu: float,
						 lam: float,
						 x_max: Optional[float] = None,
						 tol: float = DEFAULT_TOL,
						 tol_edge: float = TOL_EDGE) -> int:
	""" :return: the number of zeros of the modified Wronskian, see :py:func:`wronskian_certificate` """
	return wronskian_certificate(pair, mu, lam, x_max, tol, tol_edge).count

# ~~~~~~~~~~~~~~~ reports ~~~~~~~~~~~~~~~

def _decay_verified(pair: PerturbedPair, eigenvalues: Sequence[float], tol: float, tol_edge: float) -> bool:
	for lam in eigenvalues:
		setup = volterra_setup(pair, lam, tol, tol_edge=tol_edge)
		solution = build_decaying_solution(setup, tol, N_MAX, "auto")
		if solution.pixel_tail > DECAY_TOL or not gronwall_envelope(setup, solution).holds:
			return False
	return True

def _oracle_defaults(pair: PerturbedPair, L: Optional[float], N: Optional[int]) -> Tuple[float, int]:
	L = ORACLE_CELLS * pair.period if L is None else float(L)
	N = int(round(L / ORACLE_STEP)) if N is None else int(N)
	return L, N

def gap_report(pair: PerturbedPair,
			   gap: Tuple[float, float],
			   bc: BoundaryCondition = BoundaryCondition(),
			   L: Optional[float] = None,
			   N: Optional[int] = None,
			   x_max: Optional[float] = None,
			   tol: float = DEFAULT_TOL,
			   samples: int = SCAN_SAMPLES,
			   tol_edge: float = TOL_EDGE,
			   method: str = "auto") -> GapEigenvalueReport:
	"""
	Assembles the complete half-line report of a gap: shooting with ``bc``, the modified-Wronskian count between the
	outermost usable scan energies with its matched shooting count, the finite-difference oracle on ``[a, a + L]`` and
	the decay of the eigenfunctions found.

	:param L: oracle truncation, 40 periods by default
	:param N: oracle nodes, ``L / 0.01`` by default
	"""
	gap = _check_gap(pair.base, gap, tol, tol_edge)
	scan = _halfline_scan(pair, bc, gap, tol, samples, tol_edge, method)

	lo, hi = float(scan.lams[0]), float(scan.lams[-1])
	certificate = wronskian_certificate(pair, lo, hi, x_max, tol, tol_edge, method)
	matched = _halfline_scan(pair, certificate.bc_at_mu, (lo, hi), tol, samples, tol_edge, method, include_ends=False)

	L, N = _oracle_defaults(pair, L, N)
	oracle = oracle_gap_eigenvalues(pair, gap, L, N, side="half", alpha=bc.alpha)

	caveats = list()
	if not certificate.reliable:
		caveats.append("the Wronskian cutoff is not certified")
	if not oracle.stable:
		caveats.append("oracle eigenvalues are not stable under L → 2L, N → 2N")
	report = GapEigenvalueReport(gap, scan.zeros, scan.count,
								 count_wronskian=certificate.count,
								 count_oracle=oracle.count,
								 count_shooting_matched=matched.count,
								 scan=scan, wronskian=certificate, oracle=oracle,
								 decay_verified=_decay_verified(pair, scan.zeros, tol, tol_edge),
								 side="half", bc=bc, caveats=caveats)
	log(f"[gap_report] {gap}: shooting {report.count_shooting}, wronskian {report.count_wronskian} "
		f"(matched {report.count_shooting_matched}), oracle {report.count_oracle}", level=VERBOSE)
	return report

# ~~~~~~~~~~~~~~~ full line ~~~~~~~~~~~~~~~

def _glued(left: PerturbedPair, right: PerturbedPair) -> CoefficientModel:
	""" :return: the full-line model equal to the left pair's perturbed model left of ``a`` and the right one else """
	if left is right or left.pert.key == right.pert.key:
		return right.pert
	a = right.domain_start

	def glue(f_left: Callable, f_right: Callable) -> Callable:
		return lambda x: np.where(np.asarray(x, dtype=float) < a, f_left(x), f_right(x))

	breakpoints = [b for b in left.pert.breakpoints if b < a] + [a] + [b for b in right.pert.breakpoints if b > a]
	return CoefficientModel(f"{left.pert.name}|{right.pert.name}",
							glue(left.pert.inv_p, right.pert.inv_p),
							glue(left.pert.q, right.pert.q),
							glue(left.pert.r, right.pert.r),
							domain_start=a,
							breakpoints=breakpoints,
							periodic_breakpoints=right.pert.periodic_breakpoints,
							breakpoint_period=right.base.period)

def gap_eigenvalues_fullline(pair_left: Optional[PerturbedPair],
							 pair_right: PerturbedPair,
							 gap: Tuple[float, float],
							 tol: float = DEFAULT_TOL,
							 samples: int = SCAN_SAMPLES,
							 L: Optional[float] = None,
							 N: Optional[int] = None,
							 tol_edge: float = TOL_EDGE,
							 method: str = "auto") -> GapEigenvalueReport:
	"""
	Locates the eigenvalues of the full-line problem in a gap as zeros of ``λ' ↦ W(u₁⁻, u₁⁺)(a)``, where ``u₁⁺`` decays
	at ``+∞`` and ``u₁⁻`` at ``-∞``. The left solution is the decaying solution of the mirrored left pair, whose state
	at ``a`` is ``(w, -p w')``. The report also carries the Dirichlet half-line counts on both sides and the oracle
	count on ``[a - L, a + L]``.

	:param pair_left: the pair on ``(-∞, a]``, the right pair (on the whole line) if ``None``
	:raise PreconditionError: if the pairs have different bases, the gap is closed or overlaps a band
	"""
	pair_left = pair_right if pair_left is None else pair_left
	if pair_left.base.key != pair_right.base.key:
		raise PreconditionError("full-line pairs need the same base problem", left=pair_left.base.name,
								right=pair_right.base.name)
	gap = _check_gap(pair_right.base, gap, tol, tol_edge)
	mirrored = pair_left.reflected()
	include = tuple(_usable_end(pair_right, e, tol, tol_edge) and _usable_end(mirrored, e, tol, tol_edge)
					for e in gap)

	def states(lam: float) -> NDArray:
		w = _decaying_state(mirrored, lam, tol, tol_edge, method)
		u = _decaying_state(pair_right, lam, tol, tol_edge, method)
		return np.stack((np.array([w[0], -w[1]]), u))

	def condition(s: NDArray) -> Any:
		return s[..., 0, 0] * s[..., 1, 1] - s[..., 0, 1] * s[..., 1, 0]

	scan = _shoot(states, condition, _scan_grid(gap, samples, *include), tol)
	dirichlet = BoundaryCondition.dirichlet()
	count_right = _halfline_scan(pair_right, dirichlet, gap, tol, samples, tol_edge, method).count
	count_left = _halfline_scan(mirrored, dirichlet, gap, tol, samples, tol_edge, method).count

	L, N = _oracle_defaults(pair_right, L, N)
	oracle = oracle_gap_eigenvalues(_glued(pair_left, pair_right), gap, L, 2 * N, side="full")
	caveats = [] if oracle.stable else ["oracle eigenvalues are not stable under L → 2L, N → 2N"]
	report = GapEigenvalueReport(gap, scan.zeros, scan.count, count_oracle=oracle.count, count_left=count_left,
								 count_right=count_right, scan=scan, oracle=oracle, side="full", caveats=caveats)
	if not report.coupling_holds:
		log(f"[gap_eigenvalues_fullline] coupling bound violated in {gap}: full {scan.count}, left {count_left}, "
			f"right {count_right}", level=WARNING)
	return report

# ~~~~~~~~~~~~~~~ Green's operator ~~~~~~~~~~~~~~~

def _segment_inner(x: NDArray[np.float64], s0: float, s1: float) -> NDArray[np.float64]:
	delta = 1e-12 * (1.0 + max(abs(s0), abs(s1)))
	return np.clip(x, s0 + delta, s1 - delta)

def _piecewise_coefficients(setup: VolterraSetup, f: Callable[[NDArray], NDArray]) -> List[NDArray]:
	""" :return: per segment, ``f`` evaluated with one-sided limits at the segment ends """
	x = setup.grid
	return [f(_segment_inner(x[i0:i1 + 1], x[i0], x[i1])) for i0, i1 in setup.segment_bounds]

def _cumulative(setup: VolterraSetup, integrands: Sequence[NDArray]) -> Tuple[NDArray, NDArray]:
	""" :return: ``∫_a^x`` and ``∫_x^X`` of the per-segment integrands at the grid nodes """
	x = setup.grid
	pieces = np.zeros(x.size - 1, dtype=np.result_type(*integrands))
	for (i0, i1), g in zip(setup.segment_bounds, integrands):
		pieces[i0:i1] = interval_integrals(x[i0:i1 + 1], g[:, None])[:, 0]
	forward = np.concatenate(([0.0], np.cumsum(pieces)))
	backward = np.concatenate((np.cumsum(pieces[::-1])[::-1], [0.0]))
	return forward, backward

def greens_apply(pair: PerturbedPair,
				 lam: float,
				 g: Union[Callable[[NDArray[np.float64]], NDArray], ArrayLike],
				 bc: Optional[BoundaryCondition] = None,
				 x_max: Optional[float] = None,
				 tol: float = DEFAULT_TOL,
				 tol_edge: float = TOL_EDGE) -> GreensResult:
	"""
	Applies the Green's operator in a gap,
	``(Sg)(x) = (1/W) [u₁(x) ∫_a^x v₁ g r₁ + v₁(x) ∫_x^∞ u₁ g r₁]`` with ``W = W(u₁, v₁)``, where ``u₁`` decays and
	``v₁`` satisfies the boundary condition ``bc`` at ``a``. Without ``bc`` the growing solution continued from
	``v₀(a)`` is used. The residual ``(τ₁ - λ) Sg - g`` is measured with the five-point difference of ``p (Sg)'``.

	:param g: vectorised function or samples on the grid of the setup
	:raise PreconditionError: if ``λ`` is not inside a gap
	:raise NumericalError: if ``W(u₁, v₁)`` nearly vanishes (``λ`` is an eigenvalue for ``bc``)
	"""
	setup = volterra_setup(pair, lam, tol, x_max=x_max, tol_edge=tol_edge)
	if setup.floquet.structure != Structure.HYPERBOLIC:
		raise PreconditionError("the Green's operator needs λ strictly inside a gap", lam=lam,
								structure=setup.floquet.structure.value)
	u = np.real(build_decaying_solution(setup, tol, N_MAX, "auto").states)
	x = setup.grid
	if bc is None:
		v = np.real(build_second_solution(setup, tol, N_MAX, "auto").states)
	else:
		start = np.array([math.sin(bc.alpha), -math.cos(bc.alpha)])
		v = propagate_dense(pair.pert, lam, float(x[0]), float(x[-1]), tol).states(x, start)
	w = float(u[0, 0] * v[0, 1] - u[0, 1] * v[0, 0])
	if abs(w) <= 1e-8 * np.linalg.norm(u[0]) * np.linalg.norm(v[0]):
		raise NumericalError("W(u₁, v₁) nearly vanishes, λ is an eigenvalue", lam=lam, wronskian=w)

	g_values = np.asarray(g(x) if callable(g) else g, dtype=float)
	if g_values.shape != x.shape:
		raise PreconditionError("g must be sampled on the grid", shape=g_values.shape, size=x.size)
	r = _piecewise_coefficients(setup, lambda t: pair.pert.evaluate(t)[2])
	bounds = setup.segment_bounds
	from_a, _ = _cumulative(setup, [v[i0:i1 + 1, 0] * g_values[i0:i1 + 1] * rs for (i0, i1), rs in zip(bounds, r)])
	_, to_x = _cumulative(setup, [u[i0:i1 + 1, 0] * g_values[i0:i1 + 1] * rs for (i0, i1), rs in zip(bounds, r)])
	values = (u[:, 0] * from_a + v[:, 0] * to_x) / w
	flux = (u[:, 1] * from_a + v[:, 1] * to_x) / w

	inv_p, _, _ = pair.pert.evaluate(x)
	residual = 0.0
	for i0, i1 in bounds:
		if i1 - i0 < 4:
			continue
		h = x[i0 + 1] - x[i0]
		f = flux[i0:i1 + 1]
		derivative = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
		mid = x[i0 + 2:i1 - 1]
		_, q, rr = pair.pert.evaluate(mid)
		local = (-derivative + (q - lam * rr) * values[i0 + 2:i1 - 1]) / rr - g_values[i0 + 2:i1 - 1]
		residual = max(residual, float(np.max(np.abs(local))))
	return GreensResult(lam, x, values, flux, residual, w, inv_p)

# ~~~~~~~~~~~~~~~ band edges and bands ~~~~~~~~~~~~~~~

def edge_eigenvalue_test(pair: PerturbedPair,
						 lam_edge: float,
						 n_max: int = 20,
						 angles: int = EDGE_ANGLES,
						 n0_max: int = N0_MAX,
						 tol: float = DEFAULT_TOL,
						 tol_edge: float = TOL_EDGE) -> EdgeTestVerdict:
	"""
	Tests whether a band edge can be an eigenvalue. For ``angles`` combinations ``w₁ = cos θ u₁ + sin θ v₁`` the cell
	integrals ``∫_{a+nω}^{a+(n+1)ω} |w₁|² r₁`` for ``n = 0, ..., n_max`` are compared with ``E/2``, where ``E`` is the
	smallest cell integral of the base combination ``cos θ u₀ + sin θ v₀``. The verdict is ``no_L2_solution`` if every
	row stays above its bound from some cell ``n0 ≤ n0_max`` on.

	:raise PreconditionError: if ``λ_edge`` is not a band edge or the pair lacks moment class 2
	"""
	if n_max < 0:
		raise PreconditionError("n_max must be non-negative", n_max=n_max)
	if pair.moment_class < 2 and not pair.is_trivial:
		raise PreconditionError("the band-edge test needs moment class 2", moment_class=pair.moment_class)
	a, w = pair.domain_start, pair.period
	x_min = a + (n_max + 1) * w
	x_common = max(choose_truncation(pair, lam_edge, tol, min(pair.moment_class, 2))[0], x_min)
	setup = volterra_setup(pair, lam_edge, tol, x_max=x_common, tol_edge=tol_edge)
	if not setup.floquet.structure.is_parabolic:
		raise PreconditionError("λ is not a band edge", lam=lam_edge, structure=setup.floquet.structure.value)
	u1 = build_decaying_solution(setup, tol, N_MAX, "auto")
	v1 = build_second_solution(setup, tol, N_MAX, "auto", decaying=u1)

	thetas = np.arange(angles) * math.pi / angles
	u0, v0 = setup.floquet.u0_init.as_array().real, setup.floquet.v0_init.as_array().real
	trace = propagate_dense(pair.pert, lam_edge, a, x_min, tol)
	rows, bounds = list(), list()
	for theta in thetas:
		start = math.cos(theta) * np.real(u1.states[0]) + math.sin(theta) * np.real(v1.states[0])
		rows.append(cell_integrals(pair.pert, lambda s: trace.states(s, start)[..., 0], a, w, n_max + 1))
		base = math.cos(theta) * u0 + math.sin(theta) * v0
		bounds.append(cell_energy(pair.base, base, lam_edge, n_max, tol, tol_edge).lower_bound)
	rows, bounds = np.asarray(rows), np.asarray(bounds)

	below = rows < bounds[:, None] / 2
	failing = np.nonzero(np.any(below, axis=0))[0]
	n0 = int(failing[-1] + 1) if failing.size > 0 else 0
	if n0 > n_max:
		n0 = None
	verdict = Verdict.NO_L2_SOLUTION if n0 is not None and n0 <= n0_max else Verdict.INCONCLUSIVE
	log(f"[edge_eigenvalue_test] λ={lam_edge}: {verdict.value} (n0={n0}, E={float(np.min(bounds)):.4g})",
		level=VERBOSE)
	return EdgeTestVerdict(lam_edge, thetas, rows, bounds, n0, verdict)

def _mass(model: CoefficientModel, sampler: Callable[[NDArray], NDArray], a: float, x: float, period: float) -> float:
	points = 2 * int(math.ceil(32 * (x - a) / period)) + 1
	return float(cell_integrals(model, sampler, a, x - a, 1, points)[0])

def subordinacy_diagnostic(pair: PerturbedPair,
						   lam: float,
						   x_list: Sequence[float],
						   n_cells: int = 30,
						   tol: float = DEFAULT_TOL,
						   tol_edge: float = TOL_EDGE) -> SubordinacyReport:
	"""
	Computes ``R(X) = ∫_a^X |u|² r₁ / ∫_a^X |v|² r₁`` for two independent real solutions at ``λ`` inside a band
	(or at a touching point of two bands): the real and imaginary parts of ``u₁`` in the elliptic case, ``u₁`` and
	``v₁`` at touching points. Ratios bounded away from 0 and ∞ mean that neither solution is subordinate. The report
	also holds ``n_cells`` cell integrals per solution and the bounds ``E₁, E₂`` of the base solutions they approach.

	:raise PreconditionError: if ``x_list`` is empty or holds points not to the right of ``a``, or if ``λ`` lies in a
		gap or at a band edge with a Jordan block
	"""
	a, w = pair.domain_start, pair.period
	if len(x_list) == 0:
		raise PreconditionError("the subordinacy diagnostic needs at least one endpoint X")
	if min(x_list) <= a:
		raise PreconditionError("every endpoint X must lie to the right of the domain start", a=a, x=min(x_list))
	if n_cells < 1:
		raise PreconditionError("n_cells must be positive", n_cells=n_cells)
	x_end = max(a + n_cells * w, max(x_list))
	setup = volterra_setup(pair, lam, tol, tol_edge=tol_edge)
	structure = setup.floquet.structure
	if structure in (Structure.HYPERBOLIC, Structure.PARABOLIC_JORDAN):
		raise PreconditionError("the subordinacy diagnostic needs λ inside a band", lam=lam, structure=structure.value)
	u1 = build_decaying_solution(setup, tol, N_MAX, "auto")
	if structure == Structure.ELLIPTIC:
		starts = (np.real(u1.states[0]), np.imag(u1.states[0]))
		u0 = setup.floquet.u0_init.as_array()
		base_starts = (np.real(u0), np.imag(u0))
	else:
		v1 = build_second_solution(setup, tol, N_MAX, "auto", decaying=u1)
		starts = (np.real(u1.states[0]), np.real(v1.states[0]))
		base_starts = (setup.floquet.u0_init.as_array().real, setup.floquet.v0_init.as_array().real)

	trace = propagate_dense(pair.pert, lam, a, x_end, tol)
	samplers = [lambda s, y0=start: trace.states(s, y0)[..., 0] for start in starts]
	cells = np.asarray([cell_integrals(pair.pert, f, a, w, n_cells) for f in samplers])
	ratios = [_mass(pair.pert, samplers[0], a, x, w) / _mass(pair.pert, samplers[1], a, x, w) for x in x_list]
	bounds = list()
	for base in base_starts:
		energy = cell_energy(pair.base, base, lam, n_cells - 1, tol, tol_edge)
		bounds.append((energy.lower_bound, energy.upper_bound))
	return SubordinacyReport(lam, x_list, ratios, cells, bounds)
