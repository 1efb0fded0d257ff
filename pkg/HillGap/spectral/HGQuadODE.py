"""
:Date: 07.02.2026

..	versionadded:: v0.1.0

Propagation of the quasi-derivative system ``u' = (1/p) pu``, ``(pu)' = (q - λr) u`` with an embedded Runge-Kutta
scheme of order 8 (``DOP853``), split exactly at the breakpoints of the coefficients.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import math
from typing import Final, List, Optional, Tuple, Union, Dict, Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import solve_ivp, OdeSolution

from HillGap.HGLogger import log, WARNING
from HillGap.HGPrinting import repr_str
from HillGap.HGUtils import Immutable, NumericalError, PreconditionError
from HillGap.spectral.HGCoefficients import CoefficientModel

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

DEFAULT_TOL: Final[float] = 1e-10
""" Default relative tolerance of every propagation; the absolute tolerance is a hundredth of it. """
TOL_DET: Final[float] = 1e-9
""" Accepted deviation of ``det`` of a transfer matrix from 1, relative to the squared matrix norm. """
INTEGRATOR: Final[str] = "DOP853"

_POSITION_TOL: Final[float] = 1e-12

Scalar = Union[float, complex]

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class StateVector(Immutable):
	"""
	The quasi-derivative pair ``(u(x), (p u')(x))`` of a solution at position ``x``. Components may be complex for
	Floquet solutions of elliptic problems.

	:raise NumericalError: if a component is not finite
	"""

	def __init__(self, u: Scalar, pu: Scalar, x: float):
		if not (np.isfinite(u) and np.isfinite(pu)):
			raise NumericalError("state vector has non-finite components", u=u, pu=pu, x=x)
		self._u = u.item() if isinstance(u, np.generic) else u
		self._pu = pu.item() if isinstance(pu, np.generic) else pu
		self._x = float(x)

	@classmethod
	def from_array(cls, y: ArrayLike, x: float) -> StateVector:
		y = np.asarray(y)
		return cls(y[0], y[1], x)

	@property
	def u(self) -> Scalar:
		return self._u

	@property
	def pu(self) -> Scalar:
		return self._pu

	@property
	def x(self) -> float:
		return self._x

	def as_array(self) -> NDArray:
		return np.asarray([self._u, self._pu])

	def to_json_dict(self) -> Dict[str, Any]:
		return {"u": self._u, "pu": self._pu, "x": self._x}

	def __repr__(self) -> str:
		return repr_str(self, StateVector.u, StateVector.pu, StateVector.x)

class TransferMatrix(Immutable):
	"""
	The matrix ``Φ(x₁)Φ(x₀)⁻¹`` mapping states at ``x₀`` to states at ``x₁`` at spectral parameter ``λ``. Columns are
	the propagations of ``(1, 0)`` and ``(0, 1)``. Transfer matrices compose with ``@``: ``T(x1→x2) @ T(x0→x1)``.
	"""

	def __init__(self, entries: ArrayLike, from_x: float, to_x: float, lam: float):
		entries = np.array(entries, dtype=float)
		if entries.shape != (2, 2):
			raise PreconditionError("transfer matrix entries must have shape (2, 2)", shape=entries.shape)
		entries.setflags(write=False)
		self._entries = entries
		self._from_x = float(from_x)
		self._to_x = float(to_x)
		self._lam = float(lam)

	@property
	def entries(self) -> NDArray[np.float64]:
		return self._entries

	@property
	def from_x(self) -> float:
		return self._from_x

	@property
	def to_x(self) -> float:
		return self._to_x

	@property
	def lam(self) -> float:
		return self._lam

	@property
	def det(self) -> float:
		return float(np.linalg.det(self._entries))

	@property
	def trace(self) -> float:
		return float(np.trace(self._entries))

	def apply(self, state: StateVector) -> StateVector:
		"""
		:raise PreconditionError: if the state is not located at :py:attr:`from_x`
		"""
		_check_position(state.x, self._from_x)
		return StateVector.from_array(self._entries @ state.as_array(), self._to_x)

	def __matmul__(self, other: TransferMatrix) -> TransferMatrix:
		if not isinstance(other, TransferMatrix):
			return NotImplemented
		_check_position(other.to_x, self._from_x)
		if other.lam != self._lam:
			raise PreconditionError("cannot compose transfer matrices at different spectral parameters",
									lam=(other.lam, self._lam))
		return TransferMatrix(self._entries @ other.entries, other.from_x, self._to_x, self._lam)

	def to_json_dict(self) -> Dict[str, Any]:
		return {"entries": self._entries, "from_x": self._from_x, "to_x": self._to_x, "lambda": self._lam,
				"det": self.det}

	def __repr__(self) -> str:
		return repr_str(self, TransferMatrix.from_x, TransferMatrix.to_x, TransferMatrix.lam,
						entries=self._entries.tolist())

class DenseTrace(Immutable):
	"""
	Dense output of a propagated fundamental matrix between ``x0`` and ``x1``, one interpolant per breakpoint-free
	segment. Calling the trace at ``x`` returns ``Φ(x)`` with shape ``x.shape + (2, 2)``; :py:meth:`states` applies it
	to initial data.
	"""

	def __init__(self, segments: List[Tuple[float, float, OdeSolution]], x0: float, x1: float, lam: float,
				 initial: NDArray[np.float64], final: NDArray[np.float64]):
		segments = sorted(segments, key=lambda s: min(s[0], s[1]))
		self._starts = np.asarray([min(s[0], s[1]) for s in segments])
		self._solutions = tuple(s[2] for s in segments)
		self._x0 = float(x0)
		self._x1 = float(x1)
		self._lam = float(lam)
		self._initial = np.array(initial)
		self._final = np.array(final)

	@property
	def x0(self) -> float:
		return self._x0

	@property
	def x1(self) -> float:
		return self._x1

	@property
	def lo(self) -> float:
		return min(self._x0, self._x1)

	@property
	def hi(self) -> float:
		return max(self._x0, self._x1)

	@property
	def lam(self) -> float:
		return self._lam

	@property
	def initial(self) -> NDArray[np.float64]:
		return self._initial.copy()

	@property
	def final(self) -> NDArray[np.float64]:
		""" :return: ``Φ(x1)`` """
		return self._final.copy()

	@property
	def segment_count(self) -> int:
		return len(self._solutions)

	def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
		"""
		:raise PreconditionError: if ``x`` leaves the propagated interval
		"""
		x = np.asarray(x, dtype=float)
		flat = x.reshape(-1)
		slack = _POSITION_TOL * (1.0 + max(abs(self.lo), abs(self.hi)))
		if flat.size > 0 and (flat.min() < self.lo - slack or flat.max() > self.hi + slack):
			raise PreconditionError("position outside of the propagated interval",
									interval=(self.lo, self.hi), x=(float(flat.min()), float(flat.max())))
		index = np.clip(np.searchsorted(self._starts, flat, side="right") - 1, 0, len(self._solutions) - 1)
		out = np.empty((flat.size, 4))
		for i in np.unique(index):
			mask = index == i
			out[mask] = self._solutions[i](flat[mask]).T
		return out.reshape(x.shape + (2, 2))

	def states(self, x: ArrayLike, y0: ArrayLike) -> NDArray:
		"""
		:param x: positions
		:param y0: initial data at :py:attr:`x0`, a 2-vector (real or complex)
		:return: the states ``(u, pu)`` at ``x`` with shape ``x.shape + (2,)``
		"""
		return np.einsum("...ij,j->...i", self(x), np.asarray(y0))

	def __repr__(self) -> str:
		return repr_str(self, DenseTrace.x0, DenseTrace.x1, DenseTrace.lam, DenseTrace.segment_count)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _check_position(x: float, expected: float) -> None:
	if abs(x - expected) > _POSITION_TOL * (1.0 + abs(expected)):
		raise PreconditionError("position mismatch", x=x, expected=expected)

def max_step(model: CoefficientModel) -> float:
	""" :return: the largest step the integrator may take for this model, an eighth of the (base) period """
	period = model.period
	if period is None and model.base is not None:
		period = model.base.period
	return 0.5 if period is None else min(0.5, period / 8)

def _segment_rhs(model: CoefficientModel, lam: float, lo: float, hi: float):
	"""
	Right-hand side on one breakpoint-free segment. Positions are clamped into the open segment, so that the
	right-continuous coefficients yield their one-sided limits at both segment ends.
	"""
	delta = 1e-12 * (1.0 + max(abs(lo), abs(hi)))
	if hi - lo > 2 * delta:
		x_lo, x_hi = lo + delta, hi - delta
	else:
		x_lo = x_hi = 0.5 * (lo + hi)

	def rhs(x: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
		xc = np.asarray(min(max(x, x_lo), x_hi))
		inv_p, q, r = model.evaluate(xc)
		c = float(q) - lam * float(r)
		# y holds rows (u, pu) of the fundamental matrix, flattened
		return np.array([float(inv_p) * y[2], float(inv_p) * y[3], c * y[0], c * y[1]])

	return rhs

def _integrate(model: CoefficientModel,
			   lam: float,
			   initial: NDArray[np.float64],
			   x0: float,
			   x1: float,
			   tol: float,
			   dense: bool) -> Tuple[NDArray[np.float64], List[Tuple[float, float, OdeSolution]]]:
	if not tol > 0:
		raise PreconditionError("tolerance must be positive", tol=tol)
	y = np.asarray(initial, dtype=float).reshape(4)
	nodes = model.segments(x0, x1)
	step = max_step(model)
	segments = list()
	for s0, s1 in zip(nodes[:-1], nodes[1:]):
		if s0 == s1:
			continue
		sol = solve_ivp(_segment_rhs(model, lam, min(s0, s1), max(s0, s1)), (s0, s1), y,
						method=INTEGRATOR, rtol=tol, atol=tol * 1e-2, max_step=step, dense_output=dense)
		if sol.status == -1:
			raise NumericalError(f"integration failed: {sol.message}", model=model.name, lam=lam, x=(s0, s1))
		y = sol.y[:, -1]
		if not np.all(np.isfinite(y)):
			raise NumericalError("integration produced non-finite values", model=model.name, lam=lam, x=(s0, s1))
		if dense:
			segments.append((float(s0), float(s1), sol.sol))
	return y.reshape(2, 2), segments

def propagate_dense(model: CoefficientModel,
					lam: float,
					x0: float,
					x1: float,
					tol: float = DEFAULT_TOL,
					initial: Optional[ArrayLike] = None) -> DenseTrace:
	"""
	Propagates the fundamental matrix (``initial``, the identity by default) from ``x0`` to ``x1``, forwards or
	backwards, and keeps the dense output of every segment.

	:raise NumericalError: if the integrator fails or produces non-finite values
	"""
	start = np.eye(2) if initial is None else np.asarray(initial, dtype=float)
	if x0 == x1:
		raise PreconditionError("cannot propagate over an empty interval", x=x0)
	final, segments = _integrate(model, lam, start, x0, x1, tol, True)
	return DenseTrace(segments, x0, x1, lam, start, final)

def propagate_state(model: CoefficientModel,
					lam: float,
					state: StateVector,
					to_x: float,
					tol: float = DEFAULT_TOL) -> StateVector:
	"""
	Solves ``u' = (1/p) pu``, ``(pu)' = (q - λr) u`` from ``state`` to ``to_x``. The integrator stops exactly at all
	declared breakpoints in between.

	:param model: the coefficients
	:param lam: the spectral parameter
	:param state: the initial state
	:param to_x: the end position, may lie left of ``state.x``
	:param tol: relative tolerance of the integrator
	:return: the state at ``to_x``
	:raise NumericalError: if the integrator fails or produces non-finite values
	"""
	if to_x == state.x:
		return state
	matrix = transfer_matrix(model, lam, state.x, to_x, tol)
	return matrix.apply(state)

def transfer_matrix(model: CoefficientModel,
					lam: float,
					x0: float,
					x1: float,
					tol: float = DEFAULT_TOL) -> TransferMatrix:
	"""
	:return: the transfer matrix from ``x0`` to ``x1``
	:raise NumericalError: if the integrator fails or produces non-finite values
	"""
	if x0 == x1:
		return TransferMatrix(np.eye(2), x0, x1, lam)
	entries, _ = _integrate(model, lam, np.eye(2), x0, x1, tol, False)
	result = TransferMatrix(entries, x0, x1, lam)
	scale = max(1.0, float(np.linalg.norm(entries)) ** 2)
	if abs(result.det - 1.0) > TOL_DET * scale:
		log(f"[transfer_matrix] det deviates from 1 by {abs(result.det - 1.0):.3e} on [{x0}, {x1}] at λ={lam}",
			level=WARNING)
	return result

def wronskian(s1: StateVector, s2: StateVector) -> Scalar:
	"""
	:return: ``u₁ (pu₂) - (pu₁) u₂`` of two states at the same position
	:raise PreconditionError: if the positions differ
	"""
	_check_position(s2.x, s1.x)
	return s1.u * s2.pu - s1.pu * s2.u

def wronskian_trace(y1: ArrayLike, y2: ArrayLike) -> NDArray:
	"""
	:param y1: sampled states with shape ``(..., 2)``
	:param y2: sampled states with the same shape
	:return: the pointwise Wronskians
	"""
	y1, y2 = np.asarray(y1), np.asarray(y2)
	return y1[..., 0] * y2[..., 1] - y1[..., 1] * y2[..., 0]
