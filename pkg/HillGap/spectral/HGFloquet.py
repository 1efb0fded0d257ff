"""
:Date: 09.02.2026

..	versionadded:: v0.1.0

Floquet theory of periodic problems: monodromy matrix, Hill discriminant, Floquet exponent and solutions, band
structure and the energy of solutions per period cell.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import cmath
import enum
import math
from typing import Final, List, Tuple, Sequence, Dict, Any, Callable, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, optimize

from HillGap.HGLogger import log, WARNING, VERBOSE
from HillGap.HGPrinting import repr_str
from HillGap.HGUtils import Immutable, PreconditionError, NumericalError, parallel_map
from HillGap.spectral.HGCoefficients import CoefficientModel
from HillGap.spectral.HGQuadODE import DEFAULT_TOL, transfer_matrix, propagate_dense, DenseTrace, StateVector

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

TOL_EDGE: Final[float] = 1e-9
""" Points with ``||D| - 2| ≤ TOL_EDGE`` are classified parabolic. """
JORDAN_TOL: Final[float] = 1e-7
""" Relative largest singular value of ``M - (D/2)I`` below which a parabolic monodromy counts as diagonalizable. """
TOUCH_TOL: Final[float] = 1e-7
""" A refined maximum of ``|D| - 2`` within this distance of zero is a touching of two bands. """
DEFAULT_RESOLUTION: Final[int] = 400
""" Scan points per unit of ``λ`` in :py:func:`band_structure`. """
COARSE_STEP: Final[float] = 0.01
""" Scan steps above this value are reported as caveat. """
PERIOD_SAMPLES: Final[int] = 256
""" Samples per period used for suprema of Floquet solutions. """
CELL_POINTS: Final[int] = 65
""" Odd number of Simpson nodes per breakpoint-free piece of a cell. """

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class Structure(enum.Enum):
	""" Classification of a monodromy matrix by its discriminant ``D``. """
	HYPERBOLIC = "hyperbolic"
	ELLIPTIC = "elliptic"
	PARABOLIC_DIAGONALIZABLE = "parabolic_diagonalizable"
	PARABOLIC_JORDAN = "parabolic_jordan"

	@property
	def is_parabolic(self) -> bool:
		return self in (Structure.PARABOLIC_DIAGONALIZABLE, Structure.PARABOLIC_JORDAN)

class MonodromyResult(Immutable):
	"""
	The monodromy matrix ``M`` over one period at ``λ`` with its discriminant ``D = tr M``, the Floquet exponent ``c``
	with ``Re c ≥ 0`` and the multipliers ``e^{-c}, e^{c}``.
	"""

	def __init__(self, matrix: NDArray[np.float64], lam: float, c: complex, structure: Structure,
				 jordan_deviation: float, period: float):
		matrix = np.array(matrix, dtype=float)
		matrix.setflags(write=False)
		self._matrix = matrix
		self._lam = float(lam)
		self._c = complex(c)
		self._structure = structure
		self._jordan_deviation = float(jordan_deviation)
		self._period = float(period)

	@property
	def matrix(self) -> NDArray[np.float64]:
		return self._matrix

	@property
	def lam(self) -> float:
		return self._lam

	@property
	def discriminant(self) -> float:
		return float(np.trace(self._matrix))

	@property
	def det(self) -> float:
		return float(np.linalg.det(self._matrix))

	@property
	def c(self) -> complex:
		return self._c

	@property
	def multipliers(self) -> Tuple[complex, complex]:
		""" :return: ``(e^{-c}, e^{c})`` """
		return cmath.exp(-self._c), cmath.exp(self._c)

	@property
	def structure(self) -> Structure:
		return self._structure

	@property
	def jordan_deviation(self) -> float:
		""" Largest singular value of ``M - (D/2)I`` relative to ``‖M‖``. """
		return self._jordan_deviation

	@property
	def period(self) -> float:
		return self._period

	def to_json_dict(self) -> Dict[str, Any]:
		return {"lambda": self._lam, "M": self._matrix, "D": self.discriminant, "det": self.det, "c": self._c,
				"multipliers": self.multipliers, "structure": self._structure.value,
				"jordan_deviation": self._jordan_deviation}

	def __repr__(self) -> str:
		return repr_str(self, MonodromyResult.lam, MonodromyResult.discriminant, MonodromyResult.c,
						MonodromyResult.structure, value_function=str)

class BandStructure(Immutable):
	"""
	Bands of the essential spectrum found in a scan range. ``edges`` lists every solution of ``|D| = 2`` in ascending
	order, touching edges (closed gaps) twice. ``touching[i]`` tells whether bands ``i`` and ``i + 1`` touch.
	"""

	def __init__(self,
				 edges: Sequence[float],
				 bands: Sequence[Tuple[float, float]],
				 touching: Sequence[bool],
				 lam_min: float,
				 lam_max: float,
				 clipped_low: bool,
				 clipped_high: bool,
				 caveats: Sequence[str] = ()):
		self._edges = tuple(float(e) for e in edges)
		self._bands = tuple((float(lo), float(hi)) for lo, hi in bands)
		self._touching = tuple(bool(t) for t in touching)
		self._lam_min = float(lam_min)
		self._lam_max = float(lam_max)
		self._clipped_low = bool(clipped_low)
		self._clipped_high = bool(clipped_high)
		self._caveats = tuple(caveats)

	@property
	def edges(self) -> Tuple[float, ...]:
		return self._edges

	@property
	def bands(self) -> Tuple[Tuple[float, float], ...]:
		return self._bands

	@property
	def touching(self) -> Tuple[bool, ...]:
		return self._touching

	@property
	def gaps(self) -> Tuple[Tuple[float, float], ...]:
		""" :return: the open gaps between consecutive bands that do not touch """
		return tuple((self._bands[i][1], self._bands[i + 1][0])
					 for i in range(len(self._bands) - 1) if not self._touching[i])

	@property
	def lam_min(self) -> float:
		return self._lam_min

	@property
	def lam_max(self) -> float:
		return self._lam_max

	@property
	def clipped_low(self) -> bool:
		""" Whether the first band continues below :py:attr:`lam_min`. """
		return self._clipped_low

	@property
	def clipped_high(self) -> bool:
		""" Whether the last band continues above :py:attr:`lam_max`. """
		return self._clipped_high

	@property
	def caveats(self) -> Tuple[str, ...]:
		return self._caveats

	def in_band(self, lam: float) -> bool:
		return any(lo <= lam <= hi for lo, hi in self._bands)

	def to_json_dict(self) -> Dict[str, Any]:
		return {"edges": self._edges, "bands": self._bands, "touching": self._touching, "gaps": self.gaps,
				"range": (self._lam_min, self._lam_max), "clipped_low": self._clipped_low,
				"clipped_high": self._clipped_high, "caveats": self._caveats}

	def __repr__(self) -> str:
		return repr_str(self, BandStructure.edges, BandStructure.touching, include_empty_sized=False)

class FloquetSolutionPair(Immutable):
	"""
	The Floquet solutions ``u₀`` (multiplier ``e^{-c}``, decaying for ``Re c > 0``) and ``v₀`` of a periodic problem,
	``u₀(x) = e^{-c(x-a)/ω} U₀(x)`` and ``v₀(x) = e^{c(x-a)/ω} V₀(x)`` with periodic ``U₀``. In the Jordan case
	``v₀(x + ω) = μ v₀(x) + u₀(x)`` and ``V₀`` grows linearly.

	Solutions are sampled on the one-period dense trace and extended to any ``x ≥ a`` through the multipliers, which
	keeps exponentially decaying solutions accurate on long intervals.
	"""

	def __init__(self, model: CoefficientModel, monodromy_result: MonodromyResult, u0: NDArray, v0: NDArray,
				 trace: DenseTrace, caveats: Sequence[str] = ()):
		self._model = model
		self._monodromy = monodromy_result
		self._u0 = np.array(u0)
		self._v0 = np.array(v0)
		self._trace = trace
		self._caveats = tuple(caveats)

		s = model.domain_start + np.linspace(0.0, model.period, PERIOD_SAMPLES + 1)
		u_norm = np.linalg.norm(self.u_periodic(s), axis=-1)
		v_norm = np.linalg.norm(self.v_periodic(s), axis=-1)
		if self.jordan:
			v_cell = np.linalg.norm(trace.states(s, self._v0), axis=-1)
			self._growth_constant = float(np.max(v_cell) + np.max(np.linalg.norm(trace.states(s, self._u0), axis=-1)))
		else:
			self._growth_constant = float(np.max(v_norm))
		self._sup_u = float(np.max(u_norm))
		self._sup_v = float(np.max(v_norm)) if not self.jordan else self._growth_constant
		self._wronskian = complex(self._u0[0] * self._v0[1] - self._u0[1] * self._v0[0])
		if abs(self._wronskian) == 0:
			raise NumericalError("Floquet solutions are linearly dependent", lam=monodromy_result.lam)

	# ~~~~~~~~~~~~~~~ properties ~~~~~~~~~~~~~~~

	@property
	def model(self) -> CoefficientModel:
		return self._model

	@property
	def monodromy(self) -> MonodromyResult:
		return self._monodromy

	@property
	def lam(self) -> float:
		return self._monodromy.lam

	@property
	def c(self) -> complex:
		return self._monodromy.c

	@property
	def structure(self) -> Structure:
		return self._monodromy.structure

	@property
	def jordan(self) -> bool:
		return self._monodromy.structure == Structure.PARABOLIC_JORDAN

	@property
	def u0_init(self) -> StateVector:
		return StateVector.from_array(self._u0, self._model.domain_start)

	@property
	def v0_init(self) -> StateVector:
		return StateVector.from_array(self._v0, self._model.domain_start)

	@property
	def wronskian(self) -> complex:
		""" ``W(u₀, v₀)``, constant in ``x``. """
		return self._wronskian

	@property
	def growth_constant(self) -> float:
		""" ``C`` with ``‖V₀(x)‖ ≤ C (1 + (x - a)/ω)`` in the Jordan case, ``sup ‖V₀‖`` otherwise. """
		return self._growth_constant

	@property
	def kernel_constant(self) -> float:
		""" ``E = 2 sup‖U₀‖ sup‖V₀‖ / |W|`` bounding the weighted kernel ``Φ(x)Φ(t)⁻¹`` of the Volterra operator. """
		return 2.0 * self._sup_u * self._sup_v / abs(self._wronskian)

	@property
	def caveats(self) -> Tuple[str, ...]:
		return self._caveats

	# ~~~~~~~~~~~~~~~ evaluation ~~~~~~~~~~~~~~~

	def _extend(self, x: ArrayLike, y0: NDArray, multiplier: complex) -> NDArray:
		a, w = self._model.domain_start, self._model.period
		x = np.asarray(x, dtype=float)
		flat = x.reshape(-1)
		if flat.size > 0 and flat.min() < a - 1e-12 * (1.0 + abs(a)):
			raise PreconditionError("Floquet solutions are extended to x ≥ a only", x=float(flat.min()), a=a)
		n = np.floor((flat - a) / w).astype(int)
		n = np.maximum(n, 0)
		s = np.clip(flat - n * w, a, a + w)
		out = np.empty((flat.size, 2), dtype=complex)
		structure = self.structure
		for k in np.unique(n):
			mask = n == k
			if structure.is_parabolic:
				coef = np.linalg.matrix_power(self._monodromy.matrix, int(k)) @ y0
			else:
				coef = multiplier ** int(k) * y0
			out[mask] = self._trace.states(s[mask], coef)
		if not (np.iscomplexobj(self._u0) or np.iscomplexobj(self._v0)):
			out = out.real
		return out.reshape(x.shape + (2,))

	def evaluate_u(self, x: ArrayLike) -> NDArray:
		""" :return: the states ``(u₀, p u₀')`` at ``x ≥ a`` with shape ``x.shape + (2,)`` """
		return self._extend(x, self._u0, self.monodromy.multipliers[0])

	def evaluate_v(self, x: ArrayLike) -> NDArray:
		""" :return: the states ``(v₀, p v₀')`` at ``x ≥ a`` with shape ``x.shape + (2,)`` """
		return self._extend(x, self._v0, self.monodromy.multipliers[1])

	def u_periodic(self, x: ArrayLike) -> NDArray:
		""" :return: ``U₀(x) = e^{c(x-a)/ω} (u₀, p u₀')(x)`` """
		x = np.asarray(x, dtype=float)
		weight = np.exp(self.c * (x - self._model.domain_start) / self._model.period)
		return weight[..., None] * self.evaluate_u(x)

	def v_periodic(self, x: ArrayLike) -> NDArray:
		""" :return: ``V₀(x) = e^{-c(x-a)/ω} (v₀, p v₀')(x)`` """
		x = np.asarray(x, dtype=float)
		weight = np.exp(-self.c * (x - self._model.domain_start) / self._model.period)
		return weight[..., None] * self.evaluate_v(x)

	def fundamental(self, x: ArrayLike) -> NDArray:
		""" :return: the matrices ``Φ(x)`` with columns ``(u₀, p u₀')`` and ``(v₀, p v₀')`` """
		return np.stack((self.evaluate_u(x), self.evaluate_v(x)), axis=-1)

	def to_json_dict(self) -> Dict[str, Any]:
		return {"lambda": self.lam, "structure": self.structure.value, "c": self.c, "jordan": self.jordan,
				"u0_init": self._u0, "v0_init": self._v0, "wronskian": self._wronskian,
				"growth_constant": self._growth_constant, "kernel_constant": self.kernel_constant,
				"caveats": self._caveats}

	def __repr__(self) -> str:
		return repr_str(self, FloquetSolutionPair.lam, FloquetSolutionPair.structure, FloquetSolutionPair.c,
						value_function=str)

class CellEnergy(Immutable):
	""" Per-cell energies ``∫ |u|² r`` of a solution with their minimum ``E`` (also ``E₁``) and maximum ``E₂``. """

	def __init__(self, cells: ArrayLike, lam: float):
		cells = np.array(cells, dtype=float)
		cells.setflags(write=False)
		self._cells = cells
		self._lam = float(lam)

	@property
	def cells(self) -> NDArray[np.float64]:
		return self._cells

	@property
	def lam(self) -> float:
		return self._lam

	@property
	def lower_bound(self) -> float:
		return float(np.min(self._cells))

	@property
	def upper_bound(self) -> float:
		return float(np.max(self._cells))

	def to_json_dict(self) -> Dict[str, Any]:
		return {"lambda": self._lam, "cells": self._cells, "E": self.lower_bound, "E2": self.upper_bound}

	def __repr__(self) -> str:
		return repr_str(self, CellEnergy.lam, CellEnergy.lower_bound, CellEnergy.upper_bound)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _require_periodic(model: CoefficientModel) -> None:
	if not model.is_periodic:
		raise PreconditionError(f"model {model.name!r} has no period")

def floquet_exponent(d: float) -> complex:
	"""
	:return: the Floquet exponent ``c`` with ``Re c ≥ 0`` for the discriminant ``d``, ``arccosh(|D|/2) + iπ[D < -2]``
		outside of ``[-2, 2]`` and ``i arccos(D/2)`` inside
	"""
	if abs(d) > 2:
		return complex(math.acosh(abs(d) / 2), math.pi if d < -2 else 0.0)
	return complex(0.0, math.acos(max(-1.0, min(1.0, d / 2))))

def monodromy(model: CoefficientModel, lam: float, tol: float = DEFAULT_TOL, tol_edge: float = TOL_EDGE) \
		-> MonodromyResult:
	"""
	Computes the monodromy matrix over ``[a, a + ω]`` and classifies it. Parabolic points (``||D| - 2| ≤ tol_edge``)
	are diagonalizable if ``M - (D/2)I`` vanishes up to :py:data:`JORDAN_TOL` relative to ``‖M‖``.

	:raise PreconditionError: if the model is not periodic
	:raise NumericalError: if the integration fails
	"""
	_require_periodic(model)
	a, w = model.domain_start, model.period
	m = transfer_matrix(model, lam, a, a + w, tol).entries
	d = float(np.trace(m))
	deviation = float(np.linalg.svd(m - (d / 2) * np.eye(2), compute_uv=False)[0] / np.linalg.norm(m, 2))
	if abs(abs(d) - 2) <= tol_edge:
		structure = Structure.PARABOLIC_DIAGONALIZABLE if deviation < JORDAN_TOL else Structure.PARABOLIC_JORDAN
		c = complex(0.0, 0.0 if d > 0 else math.pi)
	else:
		structure = Structure.HYPERBOLIC if abs(d) > 2 else Structure.ELLIPTIC
		c = floquet_exponent(d)
	return MonodromyResult(m, lam, c, structure, deviation, w)

def discriminant(model: CoefficientModel, lam: float, tol: float = DEFAULT_TOL) -> float:
	""" :return: the Hill discriminant ``D(λ)`` """
	_require_periodic(model)
	a = model.domain_start
	return transfer_matrix(model, lam, a, a + model.period, tol).trace

def discriminant_sweep(model: CoefficientModel, lam_grid: ArrayLike, tol: float = DEFAULT_TOL) \
		-> List[Tuple[float, float]]:
	"""
	Evaluates ``D`` on an ascending grid, in parallel if ``HILLGAP_THREADS`` allows it.

	:return: the pairs ``(λ, D(λ))``
	:raise PreconditionError: if the grid is not ascending
	"""
	grid = np.asarray(lam_grid, dtype=float).reshape(-1)
	if grid.size > 1 and np.any(np.diff(grid) <= 0):
		raise PreconditionError("lambda grid must be strictly ascending")
	values = parallel_map(lambda lam: discriminant(model, float(lam), tol), grid)
	return [(float(lam), float(d)) for lam, d in zip(grid, values)]

def band_structure(model: CoefficientModel,
				   lam_min: float,
				   lam_max: float,
				   scan_resolution: int = DEFAULT_RESOLUTION,
				   tol_edge: float = TOL_EDGE,
				   tol: float = DEFAULT_TOL) -> BandStructure:
	"""
	Locates all band edges, the solutions of ``|D(λ)| = 2``, in ``[lam_min, lam_max]``. Sign changes of ``|D| - 2``
	on the scan grid are refined by Brent's method; local extrema of the sampled ``|D| - 2`` are refined by bounded
	maximisation (minimisation) to recover gaps (bands) narrower than the scan step and tangential touchings.

	:param model: the periodic model
	:param lam_min: lower end of the scan
	:param lam_max: upper end of the scan
	:param scan_resolution: scan points per unit of ``λ``
	:param tol_edge: tolerance on ``|D| - 2`` at reported edges
	:param tol: integrator tolerance
	:return: the band structure
	:raise PreconditionError: if ``lam_min ≥ lam_max`` or the model is not periodic
	"""
	_require_periodic(model)
	if not lam_min < lam_max:
		raise PreconditionError("band scan needs lam_min < lam_max", lam_min=lam_min, lam_max=lam_max)
	if scan_resolution < 1:
		raise PreconditionError("scan resolution must be positive", scan_resolution=scan_resolution)

	n = max(16, int(math.ceil((lam_max - lam_min) * scan_resolution)))
	grid = np.linspace(lam_min, lam_max, n + 1)
	f = np.abs(np.asarray([d for _, d in discriminant_sweep(model, grid, tol)])) - 2.0
	step = float(grid[1] - grid[0])

	def g(lam: float) -> float:
		return abs(discriminant(model, lam, tol)) - 2.0

	caveats = list()
	if step > COARSE_STEP:
		caveats.append(f"scan step {step:.3g} is coarse, bands or gaps narrower than it may be missed")
		log(f"[band_structure] {caveats[-1]}", level=WARNING)

	sign = np.where(np.abs(f) <= tol_edge, 0, np.sign(f))
	# (position, kind) with kind "simple" or "double"
	found: List[Tuple[float, str]] = list()

	for i in range(n):
		if sign[i] * sign[i + 1] < 0:
			found.append((optimize.brentq(g, grid[i], grid[i + 1], xtol=1e-14, rtol=8.9e-16), "simple"))
	for i in range(n + 1):
		if sign[i] != 0:
			continue
		if i == 0 or i == n:
			# an edge on the scan boundary only counts if a band lies inside the range
			if sign[1 if i == 0 else n - 1] < 0:
				found.append((float(grid[i]), "simple"))
			continue
		left, right = sign[i - 1], sign[i + 1]
		if left * right < 0:
			found.append((float(grid[i]), "simple"))
		elif left < 0 and right < 0:
			found.append((float(grid[i]), "double"))
		elif left > 0 and right > 0:
			caveats.append(f"degenerate band at λ={grid[i]:.12g}")

	for i in range(1, n):
		lo, hi = grid[i - 1], grid[i + 1]
		if sign[i - 1] < 0 and sign[i] < 0 and sign[i + 1] < 0 and f[i] > f[i - 1] and f[i] >= f[i + 1]:
			res = optimize.minimize_scalar(lambda lam: -g(lam), bounds=(lo, hi), method="bounded",
										   options={"xatol": 1e-12})
			peak, top = float(res.x), -float(res.fun)
			if top > TOUCH_TOL:
				found.append((optimize.brentq(g, lo, peak, xtol=1e-14, rtol=8.9e-16), "simple"))
				found.append((optimize.brentq(g, peak, hi, xtol=1e-14, rtol=8.9e-16), "simple"))
				log(f"[band_structure] recovered a gap narrower than the scan step near λ={peak:.9g}", level=VERBOSE)
			elif top >= -TOUCH_TOL:
				found.append((peak, "double"))
		elif sign[i - 1] > 0 and sign[i] > 0 and sign[i + 1] > 0 and f[i] < f[i - 1] and f[i] <= f[i + 1]:
			res = optimize.minimize_scalar(g, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
			valley, bottom = float(res.x), float(res.fun)
			if bottom < -TOUCH_TOL:
				found.append((optimize.brentq(g, lo, valley, xtol=1e-14, rtol=8.9e-16), "simple"))
				found.append((optimize.brentq(g, valley, hi, xtol=1e-14, rtol=8.9e-16), "simple"))
				log(f"[band_structure] recovered a band narrower than the scan step near λ={valley:.9g}",
					level=VERBOSE)

	found.sort(key=lambda e: e[0])
	merged: List[Tuple[float, str]] = list()
	for position, kind in found:
		if len(merged) > 0 and abs(position - merged[-1][0]) <= 10 * tol_edge:
			# two simple edges closer than the tolerance form a closed gap
			if merged[-1][1] == "simple" and kind == "simple":
				merged[-1] = (0.5 * (position + merged[-1][0]), "double")
			continue
		merged.append((position, kind))

	inside = bool(sign[0] < 0)
	clipped_low = inside
	edges, bands, touching = list(), list(), list()
	start = lam_min if inside else None
	touch_next = False
	for position, kind in merged:
		if kind == "double":
			edges.extend((position, position))
			if inside:
				bands.append((start, position))
				touching.append(touch_next)
				touch_next = True
				start = position
			continue
		edges.append(position)
		if inside:
			bands.append((start, position))
			touching.append(touch_next)
			touch_next = False
			inside = False
		else:
			start = position
			inside = True
	clipped_high = inside
	if inside:
		bands.append((start, lam_max))
		touching.append(touch_next)

	# touching[i] refers to bands i and i + 1
	pair_touching = touching[1:]
	return BandStructure(edges, bands, pair_touching, lam_min, lam_max, clipped_low, clipped_high, caveats)

def _eigenvector(m: NDArray[np.float64], mu: complex) -> NDArray[np.complex128]:
	""" :return: the unit eigenvector of ``m`` for ``mu`` with its largest component made positive real """
	first = np.array([m[0, 1], mu - m[0, 0]], dtype=complex)
	second = np.array([mu - m[1, 1], m[1, 0]], dtype=complex)
	vec = first if np.linalg.norm(first) >= np.linalg.norm(second) else second
	norm = np.linalg.norm(vec)
	if norm == 0:
		raise NumericalError("degenerate eigenvector of the monodromy matrix", mu=mu)
	return _fix_phase(vec / norm)

def _fix_phase(vec: NDArray[np.complex128]) -> NDArray[np.complex128]:
	big = vec[int(np.argmax(np.abs(vec)))]
	return vec * (abs(big) / big)

def floquet_solutions(model: CoefficientModel,
					  lam: float,
					  tol: float = DEFAULT_TOL,
					  tol_edge: float = TOL_EDGE) -> FloquetSolutionPair:
	"""
	Computes the Floquet solutions at ``λ``. ``u₀`` belongs to the multiplier ``e^{-c}``. Initial data are real in the
	hyperbolic and parabolic cases; in the elliptic case ``v₀`` is the complex conjugate of ``u₀``. In the Jordan case
	``v₀`` is the generalised eigenvector with ``(M - μI) v₀ = u₀``, orthogonal to ``u₀``.

	:raise PreconditionError: if the model is not periodic
	:raise NumericalError: if the integration fails
	"""
	result = monodromy(model, lam, tol, tol_edge)
	m = result.matrix
	caveats = list()
	d = result.discriminant
	if not result.structure.is_parabolic and abs(abs(d) - 2) <= 10 * tol_edge:
		caveats.append(f"|D| is within {abs(abs(d) - 2):.2e} of 2, Floquet eigenvectors are ill-conditioned")
		log(f"[floquet_solutions] {caveats[-1]} (λ={lam})", level=WARNING)

	if result.structure == Structure.PARABOLIC_DIAGONALIZABLE:
		u0 = np.array([1.0, 0.0])
		v0 = np.array([0.0, 1.0])
	elif result.structure == Structure.PARABOLIC_JORDAN:
		mu = 1.0 if d > 0 else -1.0
		nil = m - mu * np.eye(2)
		j = int(np.argmax(np.linalg.norm(nil, axis=0)))
		column = nil[:, j]
		scale = float(np.linalg.norm(column))
		u0 = column / scale
		sign = 1.0 if u0[int(np.argmax(np.abs(u0)))] > 0 else -1.0
		u0 = sign * u0
		v0 = sign * np.eye(2)[j] / scale
		v0 = v0 - float(v0 @ u0) * u0
	else:
		mu_u = result.multipliers[0]
		u0 = _eigenvector(m, mu_u)
		if result.structure == Structure.HYPERBOLIC:
			u0 = u0.real
			v0 = _eigenvector(m, result.multipliers[1]).real
		else:
			v0 = np.conj(u0)

	a = model.domain_start
	trace = propagate_dense(model, lam, a, a + model.period, tol)
	return FloquetSolutionPair(model, result, u0, v0, trace, caveats)

def cell_integrals(model: CoefficientModel,
				   sampler: Callable[[NDArray[np.float64]], NDArray],
				   x_start: float,
				   period: float,
				   n_cells: int,
				   points: int = CELL_POINTS) -> NDArray[np.float64]:
	"""
	Integrates ``|u|² r`` over the cells ``[x_start + nω, x_start + (n + 1)ω]`` by Simpson's rule on every
	breakpoint-free piece.

	:param model: the model providing the weight ``r``
	:param sampler: maps positions to the values ``u(x)``
	:param x_start: left end of the first cell
	:param period: the cell length
	:param n_cells: the number of cells
	:param points: Simpson nodes per piece
	:return: the ``n_cells`` integrals
	"""
	out = np.empty(n_cells)
	for n in range(n_cells):
		lo = x_start + n * period
		nodes = model.segments(lo, lo + period)
		total = 0.0
		for s0, s1 in zip(nodes[:-1], nodes[1:]):
			x = np.linspace(s0, s1, points)
			# r is right-continuous, evaluate it inside the piece
			inner = np.clip(x, s0 + 1e-12 * (1 + abs(s0)), s1 - 1e-12 * (1 + abs(s1)))
			values = np.abs(sampler(x)) ** 2 * model.evaluate(inner)[2]
			total += float(integrate.simpson(values, x=x))
		out[n] = total
	return out

def cell_energy(model: CoefficientModel,
				initial: Union[StateVector, ArrayLike],
				lam: float,
				n_max: int,
				tol: float = DEFAULT_TOL,
				tol_edge: float = TOL_EDGE) -> CellEnergy:
	"""
	Integrates ``|u|² r`` over the cells ``n = 0, ..., n_max`` for the solution with the given initial data at ``a``.
	For ``λ`` in the essential spectrum the minimum ``E`` is strictly positive.

	:raise PreconditionError: if ``λ`` lies in a gap (``|D| > 2``) or ``n_max < 0``
	"""
	if n_max < 0:
		raise PreconditionError("n_max must be non-negative", n_max=n_max)
	result = monodromy(model, lam, tol, tol_edge)
	if result.structure == Structure.HYPERBOLIC:
		raise PreconditionError("cell energies need λ in the essential spectrum (|D| ≤ 2)", lam=lam,
								D=result.discriminant)
	y0 = initial.as_array() if isinstance(initial, StateVector) else np.asarray(initial)
	a, w = model.domain_start, model.period
	trace = propagate_dense(model, lam, a, a + (n_max + 1) * w, tol)
	cells = cell_integrals(model, lambda x: trace.states(x, y0)[..., 0], a, w, n_max + 1)
	return CellEnergy(cells, lam)
