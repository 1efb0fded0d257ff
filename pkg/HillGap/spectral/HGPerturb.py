"""
:Date: 11.02.2026

..	versionadded:: v0.1.0

Solutions of the perturbed problem with prescribed asymptotics. The base Floquet system ``Φ`` and the perturbation
matrix ``B`` define the Volterra operator ``(Tξ)(x) = -Φ(x) ∫_x^X Φ(t)⁻¹ B(t) ξ(t) dt``; the fixed point of
``ξ = φ + Tξ`` is a solution of the perturbed system which approaches the base solution ``φ``. The fixed point is
computed by Neumann iteration, or by marching the perturbed system back from ``X``, which solves the same truncated
equation.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import enum
import math
from typing import Final, Tuple, Optional, Dict, Any, Sequence, List

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate
from scipy.interpolate import CubicSpline

from HillGap.HGLogger import log, WARNING, VERBOSE
from HillGap.HGPrinting import repr_str
from HillGap.HGUtils import Immutable, PreconditionError, NumericalError
from HillGap.spectral.HGCoefficients import PerturbedPair, moment_norm
from HillGap.spectral.HGQuadODE import DEFAULT_TOL, StateVector, propagate_dense, transfer_matrix, wronskian_trace
from HillGap.spectral.HGFloquet import TOL_EDGE, FloquetSolutionPair, Structure, floquet_solutions

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

GRID_STEP: Final[float] = 0.01
""" Largest node spacing of the Volterra grid. """
MIN_SEGMENT_NODES: Final[int] = 5
""" Nodes per breakpoint-free segment, at least enough for the five-point residual stencil. """
N_MAX: Final[int] = 50
""" Iteration limit of the Neumann iteration. """
MIN_CELLS: Final[int] = 8
""" The truncation point lies at least this many periods right of ``a``. """
X_MAX: Final[float] = 200.0
""" Upper limit of the truncation search. """
TAIL_FRACTION: Final[float] = 0.01
""" The tail ``∫_X^∞ (1 + t)^k ‖B‖`` is pushed below ``TAIL_FRACTION · tol``. """
WRONSKIAN_MIN: Final[float] = 1e-8
""" Relative Wronskian below which two solutions count as dependent. """
PEAK_TERM: Final[float] = 1e4
""" Largest Neumann bound term ``(E∫‖B‖)ⁿ/n!`` tolerated by the ``auto`` method before marching instead. """

METHODS: Final[Tuple[str, ...]] = ("neumann", "march", "auto")

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class SolutionKind(enum.Enum):
	""" The base solution a perturbed solution approaches: ``u₀`` (decaying or bounded) or ``v₀``. """
	U1_DECAYING = "u1_decaying"
	V1_SECOND = "v1_second"

class VolterraSetup(Immutable):
	"""
	Everything the Volterra operator at ``λ`` needs, sampled once on a grid of ``[a, X]``: the base fundamental matrices
	``Φ(x)`` at the nodes and the integrand kernels ``Φ(t)⁻¹ B(t)`` per breakpoint-free segment. On both ends of a
	segment ``B`` takes its one-sided limit from inside the segment.

	Use :py:func:`volterra_setup` to choose the truncation point.

	:param pair: the base and perturbed models
	:param floquet: the Floquet solutions of the base model at ``λ``
	:param x_max: the truncation point ``X``
	:param tail: bound of ``∫_X^∞ (1 + t)^k ‖B(t)‖ dt``
	:param k: the moment order of ``tail``
	:param step: largest node spacing
	:param caveats: notes on the truncation
	"""

	def __init__(self,
				 pair: PerturbedPair,
				 floquet: FloquetSolutionPair,
				 x_max: float,
				 tail: float,
				 k: int = 0,
				 step: float = GRID_STEP,
				 caveats: Sequence[str] = ()):
		a, w = pair.domain_start, pair.period
		if not x_max > a:
			raise PreconditionError("truncation point must lie right of the domain start", x_max=x_max, a=a)
		self._pair = pair
		self._floquet = floquet
		self._x_max = float(x_max)
		self._tail = float(tail)
		self._k = int(k)
		self._caveats = tuple(caveats)

		x, bounds, edges = _grid(pair, a, self._x_max, step)
		x.setflags(write=False)
		self._grid = x
		self._bounds = bounds

		phi = floquet.fundamental(x)
		wronskian = floquet.wronskian if np.iscomplexobj(phi) else floquet.wronskian.real
		inverse = np.empty_like(phi)
		inverse[..., 0, 0] = phi[..., 1, 1]
		inverse[..., 0, 1] = -phi[..., 0, 1]
		inverse[..., 1, 0] = -phi[..., 1, 0]
		inverse[..., 1, 1] = phi[..., 0, 0]
		inverse = inverse / wronskian
		phi.setflags(write=False)
		self._phi = phi

		lam = floquet.lam
		kernels: List[NDArray] = list()
		b_norm = np.empty(x.size)
		b_integral = np.zeros(x.size)
		b_weighted = np.zeros(x.size)
		t = (x - a) / w
		for (i0, i1), (s0, s1) in zip(bounds, edges):
			inner = _inner(x[i0:i1 + 1], s0, s1)
			kernels.append(inverse[i0:i1 + 1] @ pair.b_matrix(inner, lam))
			norm = pair.b_norm(inner, lam)
			b_norm[i0:i1 + 1] = norm
			b_integral[i0:i1 + 1] = b_integral[i0] + integrate.cumulative_trapezoid(norm, x[i0:i1 + 1], initial=0.0)
			b_weighted[i0:i1 + 1] = b_weighted[i0] + integrate.cumulative_trapezoid((1 + t[i0:i1 + 1]) * norm,
																					 x[i0:i1 + 1], initial=0.0)
		self._kernels = tuple(kernels)
		for array in (b_norm, b_integral, b_weighted):
			array.setflags(write=False)
		self._b_norm = b_norm
		self._b_integral = b_integral
		self._b_weighted = b_weighted

	# ~~~~~~~~~~~~~~~ properties ~~~~~~~~~~~~~~~

	@property
	def pair(self) -> PerturbedPair:
		return self._pair

	@property
	def floquet(self) -> FloquetSolutionPair:
		return self._floquet

	@property
	def lam(self) -> float:
		return self._floquet.lam

	@property
	def c(self) -> complex:
		return self._floquet.c

	@property
	def jordan(self) -> bool:
		return self._floquet.jordan

	@property
	def x_max(self) -> float:
		return self._x_max

	@property
	def tail(self) -> float:
		return self._tail

	@property
	def k(self) -> int:
		return self._k

	@property
	def grid(self) -> NDArray[np.float64]:
		return self._grid

	@property
	def size(self) -> int:
		return self._grid.size

	@property
	def segment_bounds(self) -> Tuple[Tuple[int, int], ...]:
		""" Inclusive node index ranges of the breakpoint-free segments; neighbours share their end node. """
		return self._bounds

	@property
	def fundamental(self) -> NDArray:
		""" ``Φ`` at the grid nodes with shape ``(N, 2, 2)``. """
		return self._phi

	@property
	def b_norm(self) -> NDArray[np.float64]:
		return self._b_norm

	@property
	def kernel_constant(self) -> float:
		return self._floquet.kernel_constant

	@property
	def b_integral(self) -> float:
		""" ``∫_a^X ‖B‖``, weighted by ``1 + (t - a)/ω`` in the Jordan case. """
		return float(self._b_weighted[-1] if self.jordan else self._b_integral[-1])

	@property
	def neumann_estimate(self) -> float:
		""" ``E (∫_a^X ‖B‖ + tail)``, the rate of the factorial bound of the Neumann terms. """
		return self.kernel_constant * (self.b_integral + self._tail)

	@property
	def caveats(self) -> Tuple[str, ...]:
		return self._caveats + self._floquet.caveats

	# ~~~~~~~~~~~~~~~ methods ~~~~~~~~~~~~~~~

	def cumulative_b(self, weighted: bool = False) -> NDArray[np.float64]:
		""" :return: ``∫_a^x ‖B‖`` at the grid nodes, with the Jordan weight ``1 + (t - a)/ω`` if ``weighted`` """
		return self._b_weighted if weighted else self._b_integral

	def base_states(self, kind: SolutionKind) -> NDArray:
		""" :return: the states of ``u₀`` or ``v₀`` at the grid nodes """
		return self._phi[..., 0] if kind == SolutionKind.U1_DECAYING else self._phi[..., 1]

	def weight(self, kind: SolutionKind) -> NDArray[np.float64]:
		"""
		:return: the weight of the sup-norm the iteration for ``kind`` contracts in: ``e^{Re c (x-a)/ω}`` for ``u``,
			``e^{-Re c (x-a)/ω}`` for ``v`` and ``1 / (1 + (x-a)/ω)`` for the linearly growing ``v`` of the Jordan case
		"""
		t = (self._grid - self._pair.domain_start) / self._pair.period
		if kind == SolutionKind.U1_DECAYING:
			return np.exp(self.c.real * t)
		if self.jordan:
			return 1.0 / (1.0 + t)
		return np.exp(-self.c.real * t)

	def norm(self, xi: ArrayLike, kind: SolutionKind) -> float:
		""" :return: the weighted sup-norm of the sampled states ``xi`` """
		return float(np.max(self.weight(kind) * np.linalg.norm(np.asarray(xi), axis=-1)))

	def apply(self, xi: ArrayLike) -> NDArray:
		"""
		Applies the truncated Volterra operator. The integrand is interpolated by a cubic spline on every segment,
		integrated exactly per grid interval and summed from ``X`` towards ``a``.

		:param xi: states with shape ``(N, 2)``
		:return: ``Tξ`` at the grid nodes
		:raise PreconditionError: if ``xi`` is not sampled on the grid
		"""
		xi = np.asarray(xi)
		if xi.shape != (self.size, 2):
			raise PreconditionError("states must be sampled on the Volterra grid", shape=xi.shape, size=self.size)
		dtype = np.result_type(xi, self._phi, *self._kernels)
		pieces = np.zeros((self.size - 1, 2), dtype=dtype)
		for (i0, i1), kernel in zip(self._bounds, self._kernels):
			g = np.einsum("nij,nj->ni", kernel, xi[i0:i1 + 1])
			pieces[i0:i1] = interval_integrals(self._grid[i0:i1 + 1], g)
		integral = np.zeros((self.size, 2), dtype=dtype)
		integral[:-1] = np.cumsum(pieces[::-1], axis=0)[::-1]
		return -np.einsum("nij,nj->ni", self._phi, integral)

	def to_json_dict(self) -> Dict[str, Any]:
		return {"lambda": self.lam, "X": self._x_max, "k": self._k, "tail": self._tail, "grid_size": self.size,
				"structure": self._floquet.structure.value, "kernel_constant": self.kernel_constant,
				"b_integral": self.b_integral, "neumann_estimate": self.neumann_estimate, "caveats": self.caveats}

	def __repr__(self) -> str:
		return repr_str(self, VolterraSetup.lam, VolterraSetup.x_max, VolterraSetup.size,
						VolterraSetup.neumann_estimate)

class PerturbedSolution(Immutable):
	"""
	A solution of the perturbed system sampled on the grid of its :py:class:`VolterraSetup`, together with the history
	of the iteration that produced it and its quality measures: the weighted five-point ODE residual and the weighted
	deviation from the base solution over the last quarter of ``[a, X]``.

	:param setup: the setup the solution was computed on
	:param kind: which base solution it approaches
	:param states: the states ``(u, p₁u')`` at the grid nodes
	:param deltas: weighted sup-norm differences of consecutive iterates
	:param method: ``neumann``, ``march`` or ``forward``
	"""

	def __init__(self, setup: VolterraSetup, kind: SolutionKind, states: NDArray, deltas: Sequence[float] = (),
				 method: str = "neumann"):
		states = np.array(states)
		if not (np.iscomplexobj(setup.fundamental) or np.iscomplexobj(states)):
			states = states.real
		states.setflags(write=False)
		self._setup = setup
		self._kind = kind
		self._states = states
		self._deltas = tuple(float(d) for d in deltas)
		self._method = method

		weight = setup.weight(kind)
		deviation = weight * np.linalg.norm(states - setup.base_states(kind), axis=-1)
		deviation.setflags(write=False)
		self._deviation = deviation
		self._residual_sup = ode_residual(setup, states, weight)

	# ~~~~~~~~~~~~~~~ properties ~~~~~~~~~~~~~~~

	@property
	def setup(self) -> VolterraSetup:
		return self._setup

	@property
	def kind(self) -> SolutionKind:
		return self._kind

	@property
	def lam(self) -> float:
		return self._setup.lam

	@property
	def c(self) -> complex:
		return self._setup.c

	@property
	def grid(self) -> NDArray[np.float64]:
		return self._setup.grid

	@property
	def states(self) -> NDArray:
		return self._states

	@property
	def deltas(self) -> Tuple[float, ...]:
		return self._deltas

	@property
	def iterations(self) -> int:
		return len(self._deltas)

	@property
	def method(self) -> str:
		return self._method

	@property
	def x_max(self) -> float:
		return self._setup.x_max

	@property
	def at_start(self) -> StateVector:
		""" The state at ``a``. """
		return StateVector.from_array(self._states[0], float(self._setup.grid[0]))

	@property
	def residual_sup(self) -> float:
		return self._residual_sup

	@property
	def tail_deviation(self) -> NDArray[np.float64]:
		""" The weighted deviation ``‖ξ(x) - φ(x)‖`` from the base solution at the grid nodes. """
		return self._deviation

	@property
	def pixel_tail(self) -> float:
		""" Largest weighted deviation over the last quarter of ``[a, X]``. """
		return float(np.max(self._deviation[3 * (self._deviation.size - 1) // 4:]))

	# ~~~~~~~~~~~~~~~ methods ~~~~~~~~~~~~~~~

	def to_json_dict(self) -> Dict[str, Any]:
		return {"lambda": self.lam, "kind": self._kind.value, "iterations": self.iterations, "deltas": self._deltas,
				"residual_sup": self._residual_sup, "pixel_tail": self.pixel_tail, "X": self.x_max,
				"method": self._method, "c": self.c, "u_start": self.at_start, "caveats": self._setup.caveats}

	def __repr__(self) -> str:
		return repr_str(self, PerturbedSolution.kind, PerturbedSolution.lam, PerturbedSolution.method,
						PerturbedSolution.iterations, PerturbedSolution.residual_sup, value_function=str)

class GronwallReport(Immutable):
	""" The largest ratio of a solution norm to its Gronwall envelope, which is at most 1 if the envelope holds. """

	def __init__(self, max_ratio: float, x_at_max: float, kernel_constant: float):
		self._max_ratio = float(max_ratio)
		self._x_at_max = float(x_at_max)
		self._kernel_constant = float(kernel_constant)

	@property
	def max_ratio(self) -> float:
		return self._max_ratio

	@property
	def x_at_max(self) -> float:
		return self._x_at_max

	@property
	def kernel_constant(self) -> float:
		return self._kernel_constant

	@property
	def holds(self) -> bool:
		return self._max_ratio <= 1.0 + 1e-9

	def to_json_dict(self) -> Dict[str, Any]:
		return {"max_ratio": self._max_ratio, "x_at_max": self._x_at_max, "E": self._kernel_constant,
				"holds": self.holds}

	def __repr__(self) -> str:
		return repr_str(self, GronwallReport.max_ratio, GronwallReport.holds)

class NeumannReport(Immutable):
	"""
	Weighted norms of the Neumann terms ``Tⁿφ`` next to their factorial bounds ``‖φ‖ (E∫‖B‖)ⁿ / n!``.
	"""

	def __init__(self, norms: Sequence[float], estimate: float):
		self._norms = tuple(float(n) for n in norms)
		self._estimate = float(estimate)

	@property
	def norms(self) -> Tuple[float, ...]:
		return self._norms

	@property
	def estimate(self) -> float:
		return self._estimate

	@property
	def bounds(self) -> Tuple[float, ...]:
		return tuple(self._norms[0] * self._estimate ** n / math.factorial(n) for n in range(len(self._norms)))

	@property
	def ratios(self) -> Tuple[float, ...]:
		return tuple(b / a if a > 0 else 0.0 for a, b in zip(self._norms[:-1], self._norms[1:]))

	@property
	def bound_holds(self) -> bool:
		return all(n <= b * (1 + 1e-9) + 1e-300 for n, b in zip(self._norms, self.bounds))

	@property
	def ratio_holds(self) -> bool:
		""" Whether ``‖Tⁿ⁺¹φ‖ / ‖Tⁿφ‖ ≤ E∫‖B‖ / (n + 1)`` for all computed terms. """
		return all(r <= self._estimate / (n + 1) * (1 + 1e-9) for n, r in enumerate(self.ratios))

	def to_json_dict(self) -> Dict[str, Any]:
		return {"norms": self._norms, "bounds": self.bounds, "ratios": self.ratios, "estimate": self._estimate,
				"bound_holds": self.bound_holds, "ratio_holds": self.ratio_holds}

	def __repr__(self) -> str:
		return repr_str(self, NeumannReport.estimate, NeumannReport.norms)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _inner(x: NDArray[np.float64], s0: float, s1: float) -> NDArray[np.float64]:
	# one-sided limits of the right-continuous coefficients at both segment ends
	delta = 1e-12 * (1.0 + max(abs(s0), abs(s1)))
	return np.clip(x, s0 + delta, s1 - delta)

def _grid(pair: PerturbedPair, a: float, x_max: float, step: float) \
		-> Tuple[NDArray[np.float64], Tuple[Tuple[int, int], ...], Tuple[Tuple[float, float], ...]]:
	nodes = pair.pert.segments(a, x_max)
	parts, bounds, edges = list(), list(), list()
	start = 0
	for s0, s1 in zip(nodes[:-1], nodes[1:]):
		n = max(MIN_SEGMENT_NODES - 1, int(math.ceil((s1 - s0) / step)))
		points = np.linspace(s0, s1, n + 1)
		parts.append(points if start == 0 else points[1:])
		bounds.append((start, start + n))
		edges.append((float(s0), float(s1)))
		start += n
	return np.concatenate(parts), tuple(bounds), tuple(edges)

def interval_integrals(x: NDArray[np.float64], g: NDArray) -> NDArray:
	""" :return: the integrals of the cubic spline through ``g`` over every interval ``[x_j, x_{j+1}]`` """
	if np.iscomplexobj(g):
		return interval_integrals(x, g.real) + 1j * interval_integrals(x, g.imag)
	c = CubicSpline(x, g, axis=0).c
	h = np.diff(x)[:, None]
	return c[0] * h ** 4 / 4 + c[1] * h ** 3 / 3 + c[2] * h ** 2 / 2 + c[3] * h

def _numeric_tail(pair: PerturbedPair, k: int, x: float, lam: float) -> float:
	span = max(x - pair.domain_start, pair.period)
	t = np.linspace(x, x + span, 4001)
	return float(integrate.trapezoid((1 + np.abs(t)) ** k * pair.b_norm(t, lam), t))

def choose_truncation(pair: PerturbedPair,
					  lam: float,
					  tol: float = DEFAULT_TOL,
					  k: int = 0,
					  min_cells: int = MIN_CELLS) -> Tuple[float, float, Tuple[str, ...]]:
	"""
	Chooses the truncation point ``X = a + nω`` with the least number of cells ``n ≥ min_cells`` for which the tail
	``∫_X^∞ (1 + t)^k ‖B(t)‖ dt`` is below ``0.01 tol``. Families without an analytic tail are bounded by the integral
	over ``[X, 2X - a]``; the search stops at :py:data:`X_MAX`.

	:return: ``X``, the tail bound at ``X`` and caveats
	:raise PreconditionError: if the tail diverges
	"""
	a, w = pair.domain_start, pair.period
	if pair.is_trivial:
		return a + min_cells * w, 0.0, ()

	caveats = list()
	analytic = pair.has_analytic_tail
	if not analytic:
		caveats.append("no analytic tail, the tail beyond X is a numerical estimate")

	def tail(cells: int) -> float:
		x = a + cells * w
		value = pair.b_tail(k, x, lam) if analytic else _numeric_tail(pair, k, x, lam)
		if not math.isfinite(value):
			raise PreconditionError("perturbation is not integrable against (1 + t)^k", k=k, family=pair.pert.name)
		return value

	budget = TAIL_FRACTION * tol
	max_cells = max(min_cells, int(math.ceil((X_MAX - a) / w)))
	hi = min_cells
	while tail(hi) > budget and hi < max_cells:
		hi = min(2 * hi, max_cells)
	if tail(hi) > budget:
		caveats.append(f"tail bound {tail(hi):.3e} above {budget:.1e} at the search limit X = {a + hi * w:.6g}")
		log(f"[choose_truncation] {caveats[-1]}", level=WARNING)
		return a + hi * w, tail(hi), tuple(caveats)

	lo = max(min_cells, hi // 2)
	if lo < hi and tail(lo) <= budget:
		hi = lo
	while hi - lo > 1:
		mid = (lo + hi) // 2
		if tail(mid) <= budget:
			hi = mid
		else:
			lo = mid
	return a + hi * w, tail(hi), tuple(caveats)

def volterra_setup(pair: PerturbedPair,
				   lam: float,
				   tol: float = DEFAULT_TOL,
				   x_max: Optional[float] = None,
				   k: Optional[int] = None,
				   tol_edge: float = TOL_EDGE,
				   step: float = GRID_STEP,
				   floquet: Optional[FloquetSolutionPair] = None) -> VolterraSetup:
	"""
	Builds the Volterra setup at ``λ``.

	:param pair: the base and perturbed models
	:param lam: the spectral parameter
	:param tol: tolerance of the integrator and of the tail budget
	:param x_max: the truncation point, chosen by :py:func:`choose_truncation` if omitted
	:param k: moment order of the tail, by default 0 away from band edges and the declared moment class (at most 2) at
		Jordan edges
	:param tol_edge: band edge tolerance of the Floquet classification
	:param step: largest grid spacing
	:param floquet: precomputed Floquet solutions of the base model at ``λ``
	:raise PreconditionError: if the base is not periodic or the perturbation is not integrable
	"""
	if floquet is None:
		floquet = floquet_solutions(pair.base, lam, tol, tol_edge)
	if k is None:
		k = min(pair.moment_class, 2) if floquet.jordan else 0
	if not pair.has_analytic_tail and not pair.is_trivial:
		if moment_norm(pair, k).divergent:
			raise PreconditionError("perturbation moment diverges", k=k, family=pair.pert.name)

	if x_max is None:
		x_max, tail, caveats = choose_truncation(pair, lam, tol, k)
	else:
		caveats = ()
		tail = pair.b_tail(k, x_max, lam)
		if tail is None:
			tail = _numeric_tail(pair, k, x_max, lam)
		if not math.isfinite(tail):
			raise PreconditionError("perturbation is not integrable against (1 + t)^k", k=k, family=pair.pert.name)
	log(f"[volterra_setup] λ={lam}: X={x_max:.6g}, tail bound {tail:.3e} (k={k})", level=VERBOSE)
	return VolterraSetup(pair, floquet, x_max, tail, k, step, caveats)

def volterra_apply(setup: VolterraSetup, xi: ArrayLike) -> NDArray:
	""" :return: ``Tξ`` at the grid nodes, see :py:meth:`VolterraSetup.apply` """
	return setup.apply(xi)

def ode_residual(setup: VolterraSetup, states: ArrayLike, weight: Optional[ArrayLike] = None) -> float:
	"""
	Measures ``‖ξ' - (A + B) ξ‖`` at the interior nodes of every segment with the five-point central difference.

	:param setup: the setup the states are sampled on
	:param states: the states with shape ``(N, 2)``
	:param weight: optional weights per node
	:return: the (weighted) sup of the residual
	"""
	states = np.asarray(states)
	x = setup.grid
	weight = np.ones(x.size) if weight is None else np.asarray(weight)
	residual = 0.0
	for i0, i1 in setup.segment_bounds:
		if i1 - i0 < 4:
			continue
		y = states[i0:i1 + 1]
		h = x[i0 + 1] - x[i0]
		derivative = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
		inv_p, q, r = setup.pair.pert.evaluate(x[i0 + 2:i1 - 1])
		rhs = np.stack((inv_p * y[2:-2, 1], (q - setup.lam * r) * y[2:-2, 0]), axis=-1)
		local = weight[i0 + 2:i1 - 1] * np.linalg.norm(derivative - rhs, axis=-1)
		residual = max(residual, float(np.max(local)))
	return residual

def _iterate(setup: VolterraSetup, kind: SolutionKind, tol: float, n_max: int) -> Tuple[NDArray, List[float]]:
	phi = setup.base_states(kind)
	weight = setup.weight(kind)
	xi = phi
	deltas = list()
	for _ in range(n_max):
		following = phi + setup.apply(xi)
		delta = float(np.max(weight * np.linalg.norm(following - xi, axis=-1)))
		deltas.append(delta)
		xi = following
		if not math.isfinite(delta):
			break
		if delta < tol:
			return xi, deltas
	raise NumericalError("Volterra iteration did not converge", kind=kind.value, lam=setup.lam,
						 iterations=len(deltas), delta=deltas[-1], neumann_estimate=setup.neumann_estimate)

def _neumann_feasible(estimate: float, tol: float, n_max: int) -> bool:
	""" Whether the bound terms ``estimateⁿ/n!`` fall below ``tol`` within ``n_max`` steps without a large peak. """
	term, peak = 1.0, 1.0
	for n in range(1, n_max + 1):
		term *= estimate / n
		peak = max(peak, term)
		if term < tol:
			return peak <= PEAK_TERM
	return False

def _march(setup: VolterraSetup, kind: SolutionKind, tol: float) -> NDArray:
	pair, x = setup.pair, setup.grid
	trace = propagate_dense(pair.pert, setup.lam, float(x[-1]), float(x[0]), tol)
	return trace.states(x, setup.base_states(kind)[-1])

def march_solution(setup: VolterraSetup,
				   kind: SolutionKind = SolutionKind.U1_DECAYING,
				   tol: float = DEFAULT_TOL) -> PerturbedSolution:
	"""
	Solves the truncated fixed-point equation as the terminal-value problem ``ξ' = (A + B)ξ``, ``ξ(X) = φ(X)``,
	propagating from ``X`` back to ``a``.

	:raise NumericalError: if the integration fails
	"""
	return PerturbedSolution(setup, kind, _march(setup, kind, tol), (), "march")

def _solve(setup: VolterraSetup, kind: SolutionKind, tol: float, n_max: int, method: str) -> PerturbedSolution:
	if method not in METHODS:
		raise PreconditionError(f"unknown method {method!r}", methods=METHODS)
	if method == "march":
		return march_solution(setup, kind, tol)
	if method == "auto" and not _neumann_feasible(setup.neumann_estimate, tol, n_max):
		log(f"[perturb] λ={setup.lam}: Neumann estimate {setup.neumann_estimate:.3g} too large, marching",
			level=VERBOSE)
		return march_solution(setup, kind, tol)
	try:
		states, deltas = _iterate(setup, kind, tol, n_max)
	except NumericalError as e:
		if method != "auto":
			raise
		log(f"[perturb] {e}, marching instead", level=VERBOSE)
		return march_solution(setup, kind, tol)
	log(f"[perturb] λ={setup.lam}: {kind.value} converged after {len(deltas)} iterations", level=VERBOSE)
	return PerturbedSolution(setup, kind, states, deltas, "neumann")

def build_decaying_solution(setup: VolterraSetup,
							tol: float = DEFAULT_TOL,
							n_max: int = N_MAX,
							method: str = "neumann") -> PerturbedSolution:
	"""
	Computes the solution ``u₁`` of the perturbed problem with ``e^{Re c (x-a)/ω} ‖u₁ - u₀‖ → 0`` as the fixed point of
	``ξ = φ + Tξ`` with ``φ = (u₀, p₀u₀')``.

	:param setup: the Volterra setup at ``λ``
	:param tol: iteration stops when the weighted sup-norm of the update falls below ``tol``
	:param n_max: iteration limit
	:param method: ``neumann``, ``march`` or ``auto`` (Neumann iteration unless its bound is unfavourable or it fails)
	:raise PreconditionError: at a Jordan band edge if the pair has moment class 0
	:raise NumericalError: if the iteration does not converge within ``n_max`` steps
	"""
	if setup.jordan and setup.pair.moment_class < 1:
		raise PreconditionError("the decaying solution at a band edge needs moment class 1",
								moment_class=setup.pair.moment_class, lam=setup.lam)
	return _solve(setup, SolutionKind.U1_DECAYING, tol, n_max, method)

def build_second_solution(setup: VolterraSetup,
						  tol: float = DEFAULT_TOL,
						  n_max: int = N_MAX,
						  method: str = "neumann",
						  decaying: Optional[PerturbedSolution] = None) -> PerturbedSolution:
	"""
	Computes a second solution ``v₁`` independent of ``u₁``. Inside a band and at diagonalizable touching points ``v₁``
	is the fixed point approaching ``v₀``; at a Jordan edge the iteration runs in the space weighted by
	``1 / (1 + (x-a)/ω)``; in a gap ``v₁`` is the growing solution with ``v₁(a) = v₀(a)``, propagated forwards.

	:param setup: the Volterra setup at ``λ``
	:param tol: iteration tolerance
	:param n_max: iteration limit
	:param method: as in :py:func:`build_decaying_solution`
	:param decaying: the solution ``u₁`` on the same setup, computed if omitted
	:raise PreconditionError: at a Jordan edge if the pair has moment class below 2
	:raise NumericalError: if the iteration does not converge or ``|W(u₁, v₁)|`` falls below
		:py:data:`WRONSKIAN_MIN` relative to ``‖u₁(a)‖ ‖v₁(a)‖``
	"""
	if setup.jordan and setup.pair.moment_class < 2:
		raise PreconditionError("the second solution at a band edge needs moment class 2",
								moment_class=setup.pair.moment_class, lam=setup.lam)
	if setup.floquet.structure == Structure.HYPERBOLIC:
		x = setup.grid
		trace = propagate_dense(setup.pair.pert, setup.lam, float(x[0]), float(x[-1]), tol)
		second = PerturbedSolution(setup, SolutionKind.V1_SECOND, trace.states(x, setup.base_states(
			SolutionKind.V1_SECOND)[0]), (), "forward")
	else:
		second = _solve(setup, SolutionKind.V1_SECOND, tol, n_max, method)

	if decaying is None:
		decaying = build_decaying_solution(setup, tol, n_max, method)
	u, v = decaying.states[0], second.states[0]
	w = complex(u[0] * v[1] - u[1] * v[0])
	if abs(w) <= WRONSKIAN_MIN * np.linalg.norm(u) * np.linalg.norm(v):
		raise NumericalError("perturbed solutions lost linear independence", lam=setup.lam, wronskian=abs(w))
	return second

def solution_wronskian(first: PerturbedSolution, second: PerturbedSolution) -> NDArray:
	"""
	:return: the Wronskian ``u₁ (p v₁') - (p u₁') v₁`` of two solutions at the nodes of their common grid
	:raise PreconditionError: if the grids differ
	"""
	if first.grid.shape != second.grid.shape or not np.array_equal(first.grid, second.grid):
		raise PreconditionError("solutions are sampled on different grids", X=(first.x_max, second.x_max))
	return wronskian_trace(first.states, second.states)

def gronwall_envelope(setup: VolterraSetup, solution: PerturbedSolution) -> GronwallReport:
	"""
	Compares ``‖ξ(x)‖`` with the envelope ``e^{Re c (x-a)/ω} E ‖ξ(a)‖ exp(E ∫_a^x ‖B‖)``, which any solution obeys;
	at a Jordan edge the envelope is ``(1 + (x-a)/ω) E ‖ξ(a)‖ exp(E ∫_a^x (1 + (t-a)/ω) ‖B‖)``.

	:return: the largest ratio of norm and envelope on the grid
	"""
	t = (setup.grid - setup.pair.domain_start) / setup.pair.period
	e = setup.kernel_constant
	norms = np.linalg.norm(solution.states, axis=-1)
	start = e * norms[0]
	if setup.jordan:
		envelope = (1.0 + t) * start * np.exp(e * setup.cumulative_b(weighted=True))
	else:
		envelope = np.exp(setup.c.real * t) * start * np.exp(e * setup.cumulative_b())
	if start == 0:
		ratio = np.where(norms > 0, np.inf, 0.0)
	else:
		ratio = norms / envelope
	i = int(np.argmax(ratio))
	return GronwallReport(float(ratio[i]), float(setup.grid[i]), e)

def neumann_terms(setup: VolterraSetup, n: int = 6, kind: SolutionKind = SolutionKind.U1_DECAYING) -> NeumannReport:
	"""
	:return: the weighted norms of ``φ, Tφ, ..., Tⁿφ`` with the factorial bounds
	"""
	if n < 0:
		raise PreconditionError("number of Neumann terms must be non-negative", n=n)
	term = setup.base_states(kind)
	norms = [setup.norm(term, kind)]
	for _ in range(n):
		term = setup.apply(term)
		norms.append(setup.norm(term, kind))
	return NeumannReport(norms, setup.neumann_estimate)

def propagation_defect(setup: VolterraSetup, solution: PerturbedSolution, windows: int = 8,
					   tol: float = DEFAULT_TOL) -> float:
	"""
	Propagates the solution across ``windows`` consecutive windows of the grid with the integrator, in the direction in
	which it grows, and compares with the sampled states.

	:return: the largest relative defect
	"""
	x, states = setup.grid, solution.states
	nodes = np.unique(np.linspace(0, x.size - 1, windows + 1).astype(int))
	backwards = solution.kind == SolutionKind.U1_DECAYING
	defect = 0.0
	for i0, i1 in zip(nodes[:-1], nodes[1:]):
		source, target = (i1, i0) if backwards else (i0, i1)
		matrix = transfer_matrix(setup.pair.pert, setup.lam, float(x[source]), float(x[target]), tol).entries
		expected = states[target]
		scale = max(float(np.linalg.norm(expected)), 1e-300)
		defect = max(defect, float(np.linalg.norm(matrix @ states[source] - expected)) / scale)
	return defect
