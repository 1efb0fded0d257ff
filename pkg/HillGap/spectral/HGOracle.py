"""
:Date: 14.02.2026

..	versionadded:: v0.1.0

Brute-force reference spectra: a three-point finite-volume discretization of ``-(p u')' + q u = λ r u`` on a truncated
interval, counted with Sturm sequences and solved with LAPACK's tridiagonal eigensolver. Eigenvalues which move when
the interval doubles, or which live at its outer end, are truncation artifacts and are discarded.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import math
from typing import Final, Tuple, Optional, Dict, Any, Union, Sequence, Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import eigh_tridiagonal

from HillGap.HGLogger import log, WARNING, VERBOSE
from HillGap.HGPrinting import repr_str
from HillGap.HGUtils import Immutable, PreconditionError, parallel_map
from HillGap.spectral.HGCoefficients import CoefficientModel, PerturbedPair

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

MIN_NODES: Final[int] = 16
ARTIFACT_SHIFT: Final[float] = 1e-3
""" An eigenvalue moving by more than this under ``L → 2L`` is a truncation artifact. """
STABLE_TOL: Final[float] = 1e-4
""" Accepted eigenvalues agree to this tolerance under ``L → 2L`` and ``N → 2N``. """
OUTER_WEIGHT: Final[float] = 0.5
""" Eigenvectors with more than this share of their weight in the outer quarter are truncation artifacts. """
SIDES: Final[Tuple[str, ...]] = ("full", "half")

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(3)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class TridiagonalPencil(Immutable):
	"""
	The symmetric pencil ``K - λW`` of the discretized problem with tridiagonal stiffness ``K`` and diagonal mass ``W``.

	:param diag: diagonal of ``K``
	:param offdiag: off-diagonal of ``K``
	:param weight: diagonal of ``W``, positive
	:param h: grid step
	:param domain: the truncated interval
	:param nodes: positions of the unknowns
	:param alpha: angle of the boundary condition at the left end, ``None`` for Dirichlet conditions at both ends
	:raise PreconditionError: for inconsistent sizes or non-positive weights
	"""

	def __init__(self,
				 diag: ArrayLike,
				 offdiag: ArrayLike,
				 weight: ArrayLike,
				 h: float,
				 domain: Tuple[float, float],
				 nodes: ArrayLike,
				 alpha: Optional[float] = None):
		diag, offdiag, weight, nodes = (np.array(v, dtype=float) for v in (diag, offdiag, weight, nodes))
		if not (diag.size == weight.size == nodes.size == offdiag.size + 1):
			raise PreconditionError("inconsistent pencil sizes", diag=diag.size, offdiag=offdiag.size,
									weight=weight.size, nodes=nodes.size)
		if np.any(weight <= 0):
			raise PreconditionError("non-positive weight parameter in the mass matrix", minimum=float(weight.min()))
		for array in (diag, offdiag, weight, nodes):
			array.setflags(write=False)
		self._diag = diag
		self._offdiag = offdiag
		self._weight = weight
		self._nodes = nodes
		self._h = float(h)
		self._domain = (float(domain[0]), float(domain[1]))
		self._alpha = None if alpha is None else float(alpha)

	# ~~~~~~~~~~~~~~~ properties ~~~~~~~~~~~~~~~

	@property
	def diag(self) -> NDArray[np.float64]:
		return self._diag

	@property
	def offdiag(self) -> NDArray[np.float64]:
		return self._offdiag

	@property
	def weight(self) -> NDArray[np.float64]:
		return self._weight

	@property
	def nodes(self) -> NDArray[np.float64]:
		return self._nodes

	@property
	def h(self) -> float:
		return self._h

	@property
	def domain(self) -> Tuple[float, float]:
		return self._domain

	@property
	def alpha(self) -> Optional[float]:
		return self._alpha

	@property
	def size(self) -> int:
		return self._diag.size

	# ~~~~~~~~~~~~~~~ methods ~~~~~~~~~~~~~~~

	def standard_form(self) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
		""" :return: diagonal and off-diagonal of ``W^{-1/2} K W^{-1/2}`` """
		root = np.sqrt(self._weight)
		return self._diag / self._weight, self._offdiag / (root[:-1] * root[1:])

	def eigenvalues(self, select_range: Optional[Tuple[float, float]] = None) -> NDArray[np.float64]:
		""" :return: the eigenvalues in ``(lo, hi]``, all of them if ``select_range`` is omitted """
		d, e = self.standard_form()
		if select_range is None:
			return eigh_tridiagonal(d, e, eigvals_only=True)
		return eigh_tridiagonal(d, e, eigvals_only=True, select="v", select_range=select_range)

	def eigenpairs(self, select_range: Tuple[float, float]) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
		"""
		:return: the eigenvalues in ``(lo, hi]`` and the eigenvectors as columns, normalized to ``uᵀWu = 1``
		"""
		d, e = self.standard_form()
		values, vectors = eigh_tridiagonal(d, e, select="v", select_range=select_range)
		return values, vectors / np.sqrt(self._weight)[:, None]

	def scaled(self, r_factor: float) -> TridiagonalPencil:
		""" :return: the pencil with the weight ``r`` multiplied by ``r_factor`` """
		if not r_factor > 0:
			raise PreconditionError("non-positive weight parameter", r_factor=r_factor)
		return TridiagonalPencil(self._diag, self._offdiag, self._weight * r_factor, self._h, self._domain,
								 self._nodes, self._alpha)

	def to_json_dict(self) -> Dict[str, Any]:
		return {"size": self.size, "h": self._h, "domain": self._domain, "alpha": self._alpha}

	def __repr__(self) -> str:
		return repr_str(self, TridiagonalPencil.size, TridiagonalPencil.h, TridiagonalPencil.domain,
						TridiagonalPencil.alpha)

class OracleReport(Immutable):
	"""
	Eigenvalues of the truncated problem inside a gap that survive the artifact filters, together with the discarded
	artifacts and whether the accepted values and their count are stable under ``L → 2L`` and ``N → 2N``.
	"""

	def __init__(self,
				 gap: Tuple[float, float],
				 L: float,
				 N: int,
				 side: str,
				 eigenvalues: Sequence[float],
				 discarded: Sequence[float],
				 stable: bool,
				 alpha: Optional[float] = None):
		self._gap = (float(gap[0]), float(gap[1]))
		self._L = float(L)
		self._N = int(N)
		self._side = side
		self._eigenvalues = tuple(float(v) for v in eigenvalues)
		self._discarded = tuple(float(v) for v in discarded)
		self._stable = bool(stable)
		self._alpha = alpha

	@property
	def gap(self) -> Tuple[float, float]:
		return self._gap

	@property
	def L(self) -> float:
		return self._L

	@property
	def N(self) -> int:
		return self._N

	@property
	def side(self) -> str:
		return self._side

	@property
	def eigenvalues(self) -> Tuple[float, ...]:
		return self._eigenvalues

	@property
	def count(self) -> int:
		return len(self._eigenvalues)

	@property
	def discarded_artifacts(self) -> Tuple[float, ...]:
		return self._discarded

	@property
	def stable(self) -> bool:
		return self._stable

	def to_json_dict(self) -> Dict[str, Any]:
		return {"gap": self._gap, "L": self._L, "N": self._N, "side": self._side, "alpha": self._alpha,
				"eigenvalues": self._eigenvalues, "discarded_artifacts": self._discarded, "stable": self._stable}

	def __repr__(self) -> str:
		return repr_str(self, OracleReport.gap, OracleReport.eigenvalues, OracleReport.stable)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _as_model(problem: Union[CoefficientModel, PerturbedPair]) -> CoefficientModel:
	return problem.pert if isinstance(problem, PerturbedPair) else problem

def _cell_average(f: Callable[[ArrayLike], NDArray[np.float64]],
				  left: NDArray[np.float64],
				  right: NDArray[np.float64],
				  breakpoints: NDArray[np.float64]) -> NDArray[np.float64]:
	"""
	Averages ``f`` over the cells ``[left_i, right_i]`` with three-point Gauss rules. Cells containing breakpoints are
	split there, so jumps of the coefficients are integrated exactly up to the quadrature order.
	"""

	def gauss(lo: ArrayLike, hi: ArrayLike) -> NDArray[np.float64]:
		lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
		mid, half = (lo + hi) / 2, (hi - lo) / 2
		points = mid[..., None] + half[..., None] * _GAUSS_NODES
		return half * np.sum(_GAUSS_WEIGHTS * f(points), axis=-1)

	total = gauss(left, right)
	if breakpoints.size > 0:
		first = np.searchsorted(breakpoints, left, side="right")
		last = np.searchsorted(breakpoints, right, side="left")
		for i in np.nonzero(last > first)[0]:
			cuts = np.concatenate(([left[i]], breakpoints[first[i]:last[i]], [right[i]]))
			total[i] = float(np.sum(gauss(cuts[:-1], cuts[1:])))
	return total / (right - left)

def discretize(problem: Union[CoefficientModel, PerturbedPair],
			   interval: Tuple[float, float],
			   n: int,
			   alpha: Optional[float] = None) -> TridiagonalPencil:
	"""
	Discretizes ``-(p u')' + q u = λ r u`` on ``interval`` with step ``h`` in flux form. The stiffness uses the harmonic
	cell average of ``p`` between neighbouring nodes, ``q`` and ``r`` are averaged over the dual cells; both averages
	split at breakpoints of the model. The system is scaled by ``h`` so that it stays symmetric with a half dual cell at
	a Robin end.

	With ``alpha = None`` (or ``alpha = 0``) both ends carry Dirichlet conditions and the ``n`` unknowns sit at
	``lo + jh``, ``j = 1, ..., n``, ``h = (hi - lo)/(n + 1)``. Otherwise the left end carries
	``cos α u + sin α (p u') = 0`` through a one-sided flux in row 0 and ``u(lo)`` is an unknown.

	:param problem: a model, or a pair whose perturbed model is discretized
	:param interval: the truncated interval
	:param n: number of nodes inside the interval, at least :py:data:`MIN_NODES`; a Robin end adds the node at ``lo``
	:param alpha: the boundary angle at the left end
	:raise PreconditionError: for ``n < MIN_NODES`` or an empty interval
	"""
	model = _as_model(problem)
	lo, hi = float(interval[0]), float(interval[1])
	if n < MIN_NODES:
		raise PreconditionError(f"discretization needs at least {MIN_NODES} nodes", n=n)
	if not hi > lo:
		raise PreconditionError("empty discretization interval", interval=interval)
	robin = alpha is not None and math.sin(alpha) != 0.0
	h = (hi - lo) / (n + 1)
	nodes = lo + h * np.arange(0 if robin else 1, n + 1)
	breakpoints = model.breakpoints_in(lo, hi)

	# flux cells between neighbouring nodes, including the Dirichlet ends
	flux_left = np.concatenate(([nodes[0] - h] if not robin else [], nodes))
	flux_right = flux_left + h
	p_half = 1.0 / _cell_average(model.inv_p, flux_left, flux_right, breakpoints)
	dual_left = np.maximum(nodes - h / 2, lo)
	dual_right = nodes + h / 2
	q = _cell_average(model.q, dual_left, dual_right, breakpoints)
	r = _cell_average(model.r, dual_left, dual_right, breakpoints)
	width = dual_right - dual_left

	if robin:
		# p_half[j] belongs to [x_j, x_{j+1}]; the last cell ends at the Dirichlet node hi
		left_flux = np.concatenate(([0.0], p_half[:-1]))
		right_flux = p_half
	else:
		left_flux = p_half[:-1]
		right_flux = p_half[1:]
	diag = (left_flux + right_flux) / h + width * q
	offdiag = -right_flux[:-1] / h
	weight = width * r
	if robin:
		diag[0] -= math.cos(alpha) / math.sin(alpha)
	return TridiagonalPencil(diag, offdiag, weight, h, (lo, hi), nodes, alpha)

def sturm_count(pencil: TridiagonalPencil, lam: float) -> int:
	"""
	Counts the eigenvalues of the pencil below ``λ`` by the signs of the pivots of the ``LDLᵀ`` factorization of
	``K - λW``. A pivot that vanishes exactly is replaced by a tiny negative number, with a warning.

	:return: the number of eigenvalues ``< λ``
	"""
	diag = (pencil.diag - lam * pencil.weight).tolist()
	off_sq = (pencil.offdiag ** 2).tolist()
	eps = np.finfo(float).eps
	count = 0
	pivot = diag[0]
	for i in range(len(diag)):
		if i > 0:
			pivot = diag[i] - off_sq[i - 1] / pivot
		if pivot == 0.0:
			pivot = -eps * (abs(diag[i]) + 1.0)
			log(f"[sturm_count] zero pivot at row {i} for λ={lam}, perturbed by {pivot:.1e}", level=WARNING)
		if pivot < 0:
			count += 1
	return count

def _domain(problem: Union[CoefficientModel, PerturbedPair], L: float, side: str) -> Tuple[float, float]:
	if side not in SIDES:
		raise PreconditionError(f"unknown side {side!r}, expected one of {SIDES}")
	a = _as_model(problem).domain_start
	return (a - L, a + L) if side == "full" else (a, a + L)

def _outer_share(pencil: TridiagonalPencil, vectors: NDArray[np.float64], side: str) -> NDArray[np.float64]:
	lo, hi = pencil.domain
	x = pencil.nodes
	if side == "full":
		mid, half = (lo + hi) / 2, (hi - lo) / 2
		outer = np.abs(x - mid) >= 0.75 * half
	else:
		outer = x >= lo + 0.75 * (hi - lo)
	mass = pencil.weight[:, None] * vectors ** 2
	return np.sum(mass[outer], axis=0) / np.sum(mass, axis=0)

def _gap_values(problem: Union[CoefficientModel, PerturbedPair],
				gap: Tuple[float, float],
				L: float,
				N: int,
				side: str,
				alpha: Optional[float]) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
	pencil = discretize(problem, _domain(problem, L, side), N, alpha if side == "half" else None)
	values, vectors = pencil.eigenpairs(gap)
	inside = values < gap[1]
	values, vectors = values[inside], vectors[:, inside]
	expected = sturm_count(pencil, gap[1]) - sturm_count(pencil, gap[0])
	# eigenvalues exactly at the gap ends are counted by neither side
	if expected != values.size:
		log(f"[oracle] Sturm count {expected} differs from {values.size} eigenvalues in {gap} (L={L}, N={N})",
			level=WARNING)
	share = _outer_share(pencil, vectors, side) if values.size > 0 else np.empty(0)
	return values, share

def _partner(value: float, others: NDArray[np.float64]) -> float:
	return float(np.min(np.abs(others - value))) if others.size > 0 else math.inf

def oracle_gap_eigenvalues(problem: Union[CoefficientModel, PerturbedPair],
						   gap: Tuple[float, float],
						   L: float,
						   N: int,
						   side: str = "full",
						   alpha: Optional[float] = 0.0) -> OracleReport:
	"""
	Finds the eigenvalues of the truncated problem in the open gap on ``[a - L, a + L]`` (``side = "full"``, Dirichlet
	ends) or ``[a, a + L]`` (``side = "half"``, boundary angle ``alpha`` at ``a``). The computation is repeated at
	``(2L, 2N)`` (same step) and ``(L, 2N)`` (half step). An eigenvalue is an artifact if it moves by more than
	:py:data:`ARTIFACT_SHIFT` under ``L → 2L`` or if its eigenvector concentrates in the outer quarter of the domain.

	:return: the accepted eigenvalues, the artifacts, and whether the count and values are stable
	:raise PreconditionError: for an empty gap
	"""
	mu, lam = float(gap[0]), float(gap[1])
	if not lam > mu:
		raise PreconditionError("empty gap: closed gap or reversed ends", gap=gap)

	values, share = _gap_values(problem, (mu, lam), L, N, side, alpha)
	long_values, long_share = _gap_values(problem, (mu, lam), 2 * L, 2 * N, side, alpha)
	fine_values, _ = _gap_values(problem, (mu, lam), L, 2 * N, side, alpha)

	accepted, discarded = list(), list()
	for value, outer in zip(values, share):
		if _partner(value, long_values) > ARTIFACT_SHIFT or outer > OUTER_WEIGHT:
			discarded.append(value)
		else:
			accepted.append(value)
	long_accepted = [v for v, outer in zip(long_values, long_share)
					 if _partner(v, values) <= ARTIFACT_SHIFT and outer <= OUTER_WEIGHT]
	stable = len(long_accepted) == len(accepted) and all(
		_partner(v, long_values) <= STABLE_TOL and _partner(v, fine_values) <= STABLE_TOL for v in accepted)
	if len(discarded) > 0:
		log(f"[oracle] discarded truncation artifacts {discarded} in {gap}", level=VERBOSE)
	if not stable:
		log(f"[oracle] eigenvalues in {gap} are not stable under L → 2L, N → 2N", level=WARNING)
	return OracleReport((mu, lam), L, N, side, accepted, discarded, stable, alpha if side == "half" else None)

def counting_profile(problem: Union[CoefficientModel, PerturbedPair],
					 L: float,
					 N: int,
					 lam_grid: ArrayLike) -> NDArray[np.int_]:
	""" :return: the number of eigenvalues below each ``λ`` of the Dirichlet problem on ``[a - L, a + L]`` """
	pencil = discretize(problem, _domain(problem, L, "full"), N)
	lam_grid = np.asarray(lam_grid, dtype=float)
	return np.asarray(parallel_map(lambda lam: sturm_count(pencil, float(lam)), lam_grid), dtype=int)

def richardson_ratio(problem: Union[CoefficientModel, PerturbedPair],
					 gap: Tuple[float, float],
					 L: float,
					 N: int,
					 side: str = "full",
					 alpha: Optional[float] = 0.0) -> float:
	"""
	Estimates the convergence order of the lowest gap eigenvalue from the discretizations with ``N``, ``2N`` and ``4N``
	nodes; a second-order scheme gives ``(λ_N - λ_2N) / (λ_2N - λ_4N) ≈ 4``.

	:raise PreconditionError: if the gap holds no eigenvalue at some resolution
	"""
	estimates = list()
	for n in (N, 2 * N, 4 * N):
		values, share = _gap_values(problem, gap, L, n, side, alpha)
		genuine = values[share <= OUTER_WEIGHT]
		if genuine.size == 0:
			raise PreconditionError("no eigenvalue in the gap", gap=gap, N=n)
		estimates.append(float(genuine[0]))
	first, second = estimates[0] - estimates[1], estimates[1] - estimates[2]
	return first / second if second != 0 else math.inf
