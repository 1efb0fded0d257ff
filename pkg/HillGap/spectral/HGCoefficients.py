"""
:Date: 06.02.2026

..	versionadded:: v0.1.0

Coefficient triples ``(1/p, q, r)`` of Sturm-Liouville expressions ``(1/r)(-(p u')' + q u)``, the built-in periodic
and perturbation families, and the moment norms of perturbations.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import enum
import math
from typing import Callable, Final, Optional, Tuple, Dict, Any, Sequence, Union, Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, special

from HillGap.HGLogger import log, VERBOSE
from HillGap.HGPrinting import repr_str
from HillGap.HGUtils import Immutable, PreconditionError

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Coefficient = Callable[[ArrayLike], NDArray[np.float64]]
""" A vectorised real coefficient function. """
TailFunction = Callable[[int, float], float]
""" ``tail(k, X)`` bounds ``∫_X^∞ |Δ(t)| t^k dt`` of a perturbation. """

COEFFICIENTS: Final[Tuple[str, ...]] = ("inv_p", "q", "r")
""" Names of the three coefficient functions, in the order of :py:func:`eval_triple`. """

PERIODIC_FAMILIES: Final[Tuple[str, ...]] = ("free", "const_shift", "mathieu", "kronig_penney")
PERTURBATION_FAMILIES: Final[Tuple[str, ...]] = ("square_well_pert", "exp_decay_pert", "power_decay_pert",
												 "gauss_pert")
FAMILY_ALIASES: Final[Dict[str, str]] = {"well" : "square_well_pert",
										 "exp"  : "exp_decay_pert",
										 "power": "power_decay_pert",
										 "gauss": "gauss_pert"}
""" Short names accepted by :py:func:`make_builtin` and the command line. """

MOMENT_WINDOW: Final[float] = 10.0
""" Quadrature window length of :py:func:`moment_norm`. """
DEFAULT_MOMENT_X: Final[float] = 50.0
""" Default truncation distance from ``a`` for moment norms of families with analytic tails. """
CAUCHY_RATIO: Final[float] = 0.9
""" A doubling-window increment ratio above this value is read as divergence. """
_PERIOD_SAMPLES: Final[int] = 2001

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class Smoothness(enum.Enum):
	""" Whether a model is smooth or piecewise continuous with declared breakpoints. """
	SMOOTH = "smooth"
	PIECEWISE = "piecewise_with_breakpoints"

class CoefficientModel(Immutable):
	"""
	:py:class:`CoefficientModel` is an evaluable triple ``(1/p, q, r)`` on ``[a, ∞)`` (or the whole line). Coefficients
	are vectorised callables, right-continuous at breakpoints. Periodic models declare their breakpoints as offsets
	``s`` in ``[0, ω)``, which repeat at ``a + s + nω``; perturbations declare absolute breakpoints.

	:param name: family name of the model
	:param inv_p: the function ``1/p``
	:param q: the potential
	:param r: the weight
	:param domain_start: the left end ``a`` of the half line
	:param period: the period ``ω``, ``None`` for non-periodic models
	:param breakpoints: absolute breakpoints
	:param periodic_breakpoints: breakpoint offsets repeating with ``breakpoint_period``
	:param breakpoint_period: the period of ``periodic_breakpoints``, defaults to ``period``
	:param params: the family parameters, for reporting
	:param base: for perturbations, the periodic model which is perturbed
	:param perturbed_coefficient: for perturbations, which of :py:data:`COEFFICIENTS` differs from ``base``
	:param tail: for perturbations, the analytic moment tail of the difference
	:param even: whether all coefficients are even functions of ``x`` about 0

	:raise PreconditionError: if the period is not positive
	"""

	def __init__(self,
				 name: str,
				 inv_p: Coefficient,
				 q: Coefficient,
				 r: Coefficient,
				 domain_start: float = 0.0,
				 period: Optional[float] = None,
				 breakpoints: Sequence[float] = (),
				 periodic_breakpoints: Sequence[float] = (),
				 breakpoint_period: Optional[float] = None,
				 params: Optional[Mapping[str, float]] = None,
				 base: Optional[CoefficientModel] = None,
				 perturbed_coefficient: Optional[str] = None,
				 tail: Optional[TailFunction] = None,
				 even: bool = False):
		if period is not None and not period > 0:
			raise PreconditionError(f"period of model {name!r} must be positive", period=period)
		if perturbed_coefficient is not None and perturbed_coefficient not in COEFFICIENTS:
			raise PreconditionError(f"unknown coefficient {perturbed_coefficient!r}, expected one of {COEFFICIENTS}")

		self._name = name
		self._inv_p = inv_p
		self._q = q
		self._r = r
		self._domain_start = float(domain_start)
		self._period = None if period is None else float(period)
		self._breakpoints = tuple(sorted(float(b) for b in breakpoints))
		self._breakpoint_period = self._period if breakpoint_period is None else float(breakpoint_period)
		if len(periodic_breakpoints) > 0 and self._breakpoint_period is None:
			raise PreconditionError(f"periodic breakpoints of model {name!r} need a period")
		self._periodic_breakpoints = tuple(sorted(float(s) % self._breakpoint_period for s in periodic_breakpoints)) \
			if len(periodic_breakpoints) > 0 else tuple()
		self._params = dict(params or {})
		self._base = base
		self._perturbed_coefficient = perturbed_coefficient
		self._tail = tail
		self._even = even

	# ~~~~~~~~~~~~~~~ properties ~~~~~~~~~~~~~~~

	@property
	def name(self) -> str:
		return self._name

	@property
	def inv_p(self) -> Coefficient:
		return self._inv_p

	@property
	def q(self) -> Coefficient:
		return self._q

	@property
	def r(self) -> Coefficient:
		return self._r

	@property
	def domain_start(self) -> float:
		return self._domain_start

	@property
	def period(self) -> Optional[float]:
		return self._period

	@property
	def is_periodic(self) -> bool:
		return self._period is not None

	@property
	def breakpoints(self) -> Tuple[float, ...]:
		return self._breakpoints

	@property
	def periodic_breakpoints(self) -> Tuple[float, ...]:
		return self._periodic_breakpoints

	@property
	def smoothness(self) -> Smoothness:
		if len(self._breakpoints) == 0 and len(self._periodic_breakpoints) == 0:
			return Smoothness.SMOOTH
		return Smoothness.PIECEWISE

	@property
	def params(self) -> Dict[str, float]:
		return dict(self._params)

	@property
	def base(self) -> Optional[CoefficientModel]:
		return self._base

	@property
	def perturbed_coefficient(self) -> Optional[str]:
		return self._perturbed_coefficient

	@property
	def tail(self) -> Optional[TailFunction]:
		return self._tail

	@property
	def even(self) -> bool:
		return self._even

	@property
	def key(self) -> Tuple[Any, ...]:
		""" Identifies the family, parameters and placement of a model. """
		return self._name, tuple(sorted(self._params.items())), self._domain_start

	# ~~~~~~~~~~~~~~~ methods ~~~~~~~~~~~~~~~

	def evaluate(self, x: ArrayLike) -> Tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
		""" :return: the arrays ``(1/p(x), q(x), r(x))`` broadcast to the shape of ``x`` """
		x = np.asarray(x, dtype=float)
		return tuple(np.broadcast_to(np.asarray(f(x), dtype=float), x.shape).copy()
					 for f in (self._inv_p, self._q, self._r))

	def breakpoints_in(self, x0: float, x1: float) -> NDArray[np.float64]:
		"""
		:return: the sorted breakpoints strictly between ``min(x0, x1)`` and ``max(x0, x1)``
		"""
		lo, hi = min(x0, x1), max(x0, x1)
		points = [b for b in self._breakpoints if lo < b < hi]
		if len(self._periodic_breakpoints) > 0:
			w, a = self._breakpoint_period, self._domain_start
			n0, n1 = math.floor((lo - a) / w) - 1, math.ceil((hi - a) / w) + 1
			for n in range(n0, n1 + 1):
				for s in self._periodic_breakpoints:
					b = a + s + n * w
					if lo < b < hi:
						points.append(b)
		return np.unique(np.asarray(points, dtype=float))

	def segments(self, x0: float, x1: float) -> NDArray[np.float64]:
		"""
		:return: the nodes ``x0, b_1, ..., b_m, x1`` splitting the interval at all breakpoints, ordered from ``x0`` to
			``x1`` (descending if ``x1 < x0``)
		"""
		inner = self.breakpoints_in(x0, x1)
		if x1 < x0:
			inner = inner[::-1]
		return np.concatenate(([x0], inner, [x1]))

	def reflected(self) -> CoefficientModel:
		"""
		:return: the mirror model ``x ↦ 2a - x``, which turns a problem on ``(-∞, a]`` into one on ``[a, ∞)``
		"""
		a = self._domain_start

		def mirror(f: Coefficient) -> Coefficient:
			return lambda x: f(2 * a - np.asarray(x, dtype=float))

		keep_tail = self._even and a == 0.0
		return CoefficientModel(f"{self._name}~reflected",
								mirror(self._inv_p), mirror(self._q), mirror(self._r),
								domain_start=a,
								period=self._period,
								breakpoints=[2 * a - b for b in self._breakpoints],
								periodic_breakpoints=[(-s) % self._breakpoint_period
													  for s in self._periodic_breakpoints],
								breakpoint_period=self._breakpoint_period,
								params=self._params,
								base=None if self._base is None else self._base.reflected(),
								perturbed_coefficient=self._perturbed_coefficient,
								tail=self._tail if keep_tail else None,
								even=self._even)

	def is_periodic_to(self, tol: float = 1e-12, samples: int = 1000, seed: int = 0) -> bool:
		"""
		Samples the periodicity invariant ``f(x + ω) = f(x)`` for all three coefficients at random points.

		:raise PreconditionError: if the model is not periodic
		"""
		if not self.is_periodic:
			raise PreconditionError(f"model {self._name!r} has no period")
		rng = np.random.default_rng(seed)
		x = self._domain_start + rng.uniform(0.0, 50.0 * self._period, samples)
		for f0, f1 in zip(self.evaluate(x), self.evaluate(x + self._period)):
			if np.max(np.abs(f0 - f1)) > tol * max(1.0, float(np.max(np.abs(f0)))):
				return False
		return True

	def __repr__(self) -> str:
		return repr_str(self, CoefficientModel.name, CoefficientModel.params, CoefficientModel.domain_start,
						CoefficientModel.period, CoefficientModel.perturbed_coefficient, value_function=str)

class MomentNorm(Immutable):
	"""
	Result of :py:func:`moment_norm`: the quadrature over ``[a, x_max]``, the tail estimate beyond and their sum.
	"""

	def __init__(self, integral: float, tail: float, x_max: float, k: int, divergent: bool, analytic_tail: bool):
		self._integral = float(integral)
		self._tail = float(tail)
		self._x_max = float(x_max)
		self._k = int(k)
		self._divergent = bool(divergent)
		self._analytic_tail = bool(analytic_tail)

	@property
	def integral(self) -> float:
		return self._integral

	@property
	def tail(self) -> float:
		return self._tail

	@property
	def value(self) -> float:
		return math.inf if self._divergent else self._integral + self._tail

	@property
	def x_max(self) -> float:
		return self._x_max

	@property
	def k(self) -> int:
		return self._k

	@property
	def divergent(self) -> bool:
		return self._divergent

	@property
	def analytic_tail(self) -> bool:
		return self._analytic_tail

	def to_json_dict(self) -> Dict[str, Any]:
		return {"k": self._k, "value": self.value, "integral": self._integral, "tail": self._tail,
				"x_max": self._x_max, "divergent": self._divergent, "analytic_tail": self._analytic_tail}

	def __repr__(self) -> str:
		return repr_str(self, MomentNorm.k, MomentNorm.value, MomentNorm.tail, MomentNorm.x_max, MomentNorm.divergent)

class PerturbedPair(Immutable):
	"""
	:py:class:`PerturbedPair` couples a periodic base model ``τ₀`` with a perturbed model ``τ₁`` on the same half line.
	The declared moment class ``k`` asserts that ``∫ (|Δr| + |Δ(1/p)| + |Δq|) |t|^j dt`` is finite for ``j ≤ k``; this
	is checked on construction.

	:param base: the periodic model
	:param pert: the perturbed model
	:param moment_class: the declared moment class, one of 0, 1, 2
	:param check: whether to check the moment condition

	:raise PreconditionError: if the base is not periodic, the domains differ, or a moment of order ``≤ k`` diverges
	"""

	def __init__(self, base: CoefficientModel, pert: CoefficientModel, moment_class: int = 0, check: bool = True):
		if not base.is_periodic:
			raise PreconditionError(f"base model {base.name!r} of a perturbed pair must be periodic")
		if pert.domain_start != base.domain_start:
			raise PreconditionError("base and perturbed model must share the domain start",
									base=base.domain_start, pert=pert.domain_start)
		if moment_class not in (0, 1, 2):
			raise PreconditionError(f"moment class must be 0, 1 or 2", moment_class=moment_class)
		self._base = base
		self._pert = pert
		self._moment_class = moment_class

		if check:
			for j in range(moment_class + 1):
				norm = moment_norm(self, j)
				if norm.divergent:
					raise PreconditionError(f"moment of order {j} diverges, the declared moment class "
											f"{moment_class} is wrong", pert=pert.name)

	@property
	def base(self) -> CoefficientModel:
		return self._base

	@property
	def pert(self) -> CoefficientModel:
		return self._pert

	@property
	def moment_class(self) -> int:
		return self._moment_class

	@property
	def domain_start(self) -> float:
		return self._base.domain_start

	@property
	def period(self) -> float:
		return self._base.period

	@property
	def is_trivial(self) -> bool:
		""" Whether the perturbed model is the base model itself. """
		return self._pert is self._base

	@property
	def has_analytic_tail(self) -> bool:
		return self.is_trivial or (self._pert.tail is not None and self._pert.base is not None
								   and self._pert.base.key == self._base.key)

	def delta(self, x: ArrayLike) -> Tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
		""" :return: the differences ``(Δ(1/p), Δq, Δr)`` at ``x`` """
		if self.is_trivial:
			zero = np.zeros(np.shape(x))
			return zero, zero.copy(), zero.copy()
		return tuple(f1 - f0 for f0, f1 in zip(self._base.evaluate(x), self._pert.evaluate(x)))

	def difference_norm(self, x: ArrayLike) -> NDArray[np.float64]:
		""" :return: ``|Δr| + |Δ(1/p)| + |Δq|`` at ``x`` """
		d_inv_p, d_q, d_r = self.delta(x)
		return np.abs(d_inv_p) + np.abs(d_q) + np.abs(d_r)

	def b_matrix(self, x: ArrayLike, lam: float) -> NDArray[np.float64]:
		"""
		:return: the perturbation matrices ``B(x) = [[0, Δ(1/p)], [Δq - λΔr, 0]]`` with shape ``x.shape + (2, 2)``
		"""
		d_inv_p, d_q, d_r = self.delta(x)
		b = np.zeros(np.shape(x) + (2, 2))
		b[..., 0, 1] = d_inv_p
		b[..., 1, 0] = d_q - lam * d_r
		return b

	def b_norm(self, x: ArrayLike, lam: float) -> NDArray[np.float64]:
		""" :return: the spectral norm of the anti-diagonal ``B(x)``, i.e. ``max(|Δ(1/p)|, |Δq - λΔr|)`` """
		d_inv_p, d_q, d_r = self.delta(x)
		return np.maximum(np.abs(d_inv_p), np.abs(d_q - lam * d_r))

	def b_tail(self, k: int, x: float, lam: float) -> Optional[float]:
		"""
		:return: an upper bound of ``∫_x^∞ (1 + t)^k ‖B(t)‖ dt`` from the analytic moment tails, ``None`` if the
			perturbation has none
		"""
		if self.is_trivial:
			return 0.0
		if not self.has_analytic_tail:
			return None
		factor = abs(lam) if self._pert.perturbed_coefficient == "r" else 1.0
		return factor * sum(math.comb(k, j) * self._pert.tail(j, max(x, 0.0)) for j in range(k + 1))

	def reflected(self) -> PerturbedPair:
		""" :return: the pair of mirrored models, see :py:meth:`CoefficientModel.reflected` """
		if self.is_trivial:
			base = self._base.reflected()
			return PerturbedPair(base, base, self._moment_class, check=False)
		return PerturbedPair(self._base.reflected(), self._pert.reflected(), self._moment_class, check=False)

	def __repr__(self) -> str:
		return repr_str(self, PerturbedPair.base, PerturbedPair.pert, PerturbedPair.moment_class)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def eval_triple(model: CoefficientModel, x: float) -> Tuple[float, float, float]:
	"""
	Evaluates a model at one point. At a declared breakpoint the right-limit value is returned.

	:return: the tuple ``(1/p(x), q(x), r(x))``
	"""
	inv_p, q, r = model.evaluate(np.asarray([x], dtype=float))
	return float(inv_p[0]), float(q[0]), float(r[0])

def _constant(value: float) -> Coefficient:
	return lambda x: np.full(np.shape(x), value, dtype=float)

def _require_positive(family: str, **values: float) -> None:
	for key, value in values.items():
		if not value > 0:
			raise PreconditionError(f"non-positive weight parameter {key!r} for family {family!r}", **{key: value})

# ~~~~~~~~~~~~~~~ periodic families ~~~~~~~~~~~~~~~

def _free(omega: float = math.pi, domain_start: float = 0.0) -> CoefficientModel:
	_require_positive("free", omega=omega)
	return CoefficientModel("free", _constant(1.0), _constant(0.0), _constant(1.0), domain_start, omega,
							params={"omega": omega}, even=True)

def _const_shift(shift: float = 0.0, omega: float = math.pi, domain_start: float = 0.0) -> CoefficientModel:
	_require_positive("const_shift", omega=omega)
	return CoefficientModel("const_shift", _constant(1.0), _constant(shift), _constant(1.0), domain_start, omega,
							params={"shift": shift, "omega": omega}, even=True)

def _mathieu(gamma: float = 1.0, domain_start: float = 0.0) -> CoefficientModel:
	return CoefficientModel("mathieu", _constant(1.0),
							lambda x: 2.0 * gamma * np.cos(2.0 * np.asarray(x, dtype=float)),
							_constant(1.0), domain_start, math.pi, params={"gamma": gamma}, even=True)

def _kronig_penney(height: float = 1.0,
				   fraction: float = 0.5,
				   omega: float = math.pi,
				   p_ratio: float = 1.0,
				   domain_start: float = 0.0) -> CoefficientModel:
	_require_positive("kronig_penney", omega=omega, p_ratio=p_ratio)
	if not 0 < fraction < 1:
		raise PreconditionError("fraction of family 'kronig_penney' must lie in (0, 1)", fraction=fraction)
	width = fraction * omega

	def barrier(x: ArrayLike) -> NDArray[np.bool_]:
		return np.mod(np.asarray(x, dtype=float) - domain_start, omega) < width

	return CoefficientModel("kronig_penney",
							lambda x: np.where(barrier(x), 1.0 / p_ratio, 1.0),
							lambda x: np.where(barrier(x), height, 0.0),
							_constant(1.0), domain_start, omega,
							periodic_breakpoints=(0.0, width),
							params={"height": height, "fraction": fraction, "omega": omega, "p_ratio": p_ratio})

# ~~~~~~~~~~~~~~~ perturbation families ~~~~~~~~~~~~~~~

def _perturbed(name: str,
			   base: CoefficientModel,
			   coefficient: str,
			   difference: Coefficient,
			   minimum: float,
			   tail: TailFunction,
			   params: Dict[str, float],
			   breakpoints: Sequence[float] = ()) -> CoefficientModel:
	""" Adds ``difference`` to one coefficient of ``base`` and checks that weights stay positive. """
	if coefficient not in COEFFICIENTS:
		raise PreconditionError(f"unknown coefficient {coefficient!r}, expected one of {COEFFICIENTS}")
	if coefficient in ("inv_p", "r"):
		x = base.domain_start + np.linspace(0.0, base.period, _PERIOD_SAMPLES)
		lowest = float(np.min(base.evaluate(x)[COEFFICIENTS.index(coefficient)])) + min(minimum, 0.0)
		if not lowest > 0:
			raise PreconditionError(f"non-positive weight parameter: perturbation {name!r} makes {coefficient!r} "
									f"non-positive", lowest=lowest)

	functions = {c: getattr(base, c) for c in COEFFICIENTS}
	unperturbed = functions[coefficient]
	functions[coefficient] = lambda x: unperturbed(x) + difference(x)
	return CoefficientModel(name, functions["inv_p"], functions["q"], functions["r"],
							domain_start=base.domain_start,
							breakpoints=breakpoints,
							periodic_breakpoints=base.periodic_breakpoints,
							breakpoint_period=base.period,
							params={**params, "coefficient": coefficient},
							base=base,
							perturbed_coefficient=coefficient,
							tail=tail,
							even=base.even)

def _square_well_pert(base: CoefficientModel,
					  depth: float = -2.0,
					  width: float = 2.0,
					  start: float = 0.0,
					  coefficient: str = "q") -> CoefficientModel:
	_require_positive("square_well_pert", width=width)
	if start < 0:
		raise PreconditionError("start of family 'square_well_pert' must be non-negative", start=start)
	end = start + width

	def difference(x: ArrayLike) -> NDArray[np.float64]:
		x = np.asarray(x, dtype=float)
		inside = np.where(x >= 0, (x >= start) & (x < end), (x >= -end) & (x < -start))
		return np.where(inside, depth, 0.0)

	def tail(k: int, X: float) -> float:
		lo = max(X, start)
		if lo >= end:
			return 0.0
		return abs(depth) * (end ** (k + 1) - lo ** (k + 1)) / (k + 1)

	points = sorted({start, end, -start, -end})
	return _perturbed("square_well_pert", base, coefficient, difference, depth, tail,
					  {"depth": depth, "width": width, "start": start}, points)

def _exp_decay_pert(base: CoefficientModel,
					amplitude: float = -1.0,
					rate: float = 1.0,
					coefficient: str = "q") -> CoefficientModel:
	_require_positive("exp_decay_pert", rate=rate)

	def difference(x: ArrayLike) -> NDArray[np.float64]:
		return amplitude * np.exp(-rate * np.abs(np.asarray(x, dtype=float)))

	def tail(k: int, X: float) -> float:
		return abs(amplitude) * math.gamma(k + 1) * float(special.gammaincc(k + 1, rate * X)) / rate ** (k + 1)

	return _perturbed("exp_decay_pert", base, coefficient, difference, amplitude, tail,
					  {"amplitude": amplitude, "rate": rate}, (0.0,))

def _power_decay_pert(base: CoefficientModel,
					  amplitude: float = 1.0,
					  power: float = 3.0,
					  coefficient: str = "q") -> CoefficientModel:
	_require_positive("power_decay_pert", power=power)

	def difference(x: ArrayLike) -> NDArray[np.float64]:
		return amplitude * (1.0 + np.abs(np.asarray(x, dtype=float))) ** (-power)

	def tail(k: int, X: float) -> float:
		if power <= k + 1:
			return math.inf
		return abs(amplitude) * (1.0 + X) ** (k + 1 - power) / (power - k - 1)

	return _perturbed("power_decay_pert", base, coefficient, difference, amplitude, tail,
					  {"amplitude": amplitude, "power": power}, (0.0,))

def _gauss_pert(base: CoefficientModel,
				amplitude: float = 1.0,
				width: float = 1.0,
				coefficient: str = "q") -> CoefficientModel:
	_require_positive("gauss_pert", width=width)

	def difference(x: ArrayLike) -> NDArray[np.float64]:
		return amplitude * np.exp(-(np.asarray(x, dtype=float) / width) ** 2)

	def tail(k: int, X: float) -> float:
		s = (k + 1) / 2
		return abs(amplitude) * width ** (k + 1) / 2 * math.gamma(s) * float(special.gammaincc(s, (X / width) ** 2))

	return _perturbed("gauss_pert", base, coefficient, difference, amplitude, tail,
					  {"amplitude": amplitude, "width": width})

_BUILDERS: Final[Dict[str, Callable[..., CoefficientModel]]] = {
	"free"            : _free,
	"const_shift"     : _const_shift,
	"mathieu"         : _mathieu,
	"kronig_penney"   : _kronig_penney,
	"square_well_pert": _square_well_pert,
	"exp_decay_pert"  : _exp_decay_pert,
	"power_decay_pert": _power_decay_pert,
	"gauss_pert"      : _gauss_pert,
}

FAMILY_PARAMETERS: Final[Dict[str, Tuple[str, ...]]] = {
	"free"            : ("omega", "domain_start"),
	"const_shift"     : ("shift", "omega", "domain_start"),
	"mathieu"         : ("gamma", "domain_start"),
	"kronig_penney"   : ("height", "fraction", "omega", "p_ratio", "domain_start"),
	"square_well_pert": ("depth", "width", "start", "coefficient"),
	"exp_decay_pert"  : ("amplitude", "rate", "coefficient"),
	"power_decay_pert": ("amplitude", "power", "coefficient"),
	"gauss_pert"      : ("amplitude", "width", "coefficient"),
}
""" The keyword parameters accepted by each family of :py:func:`make_builtin`. """

def make_builtin(name: str, base: Optional[CoefficientModel] = None, **params: Union[float, str]) -> CoefficientModel:
	"""
	Builds a model of a built-in family: ::

		mathieu = make_builtin("mathieu", gamma=1.0)
		well = make_builtin("square_well_pert", base=mathieu, depth=-2.0, width=2.0)

	Perturbation families need the periodic ``base`` they perturb, the free model of period π is used if it is
	omitted. Short names from :py:data:`FAMILY_ALIASES` are accepted.

	:param name: the family name
	:param base: the periodic base of a perturbation family
	:param params: the family parameters, see :py:data:`FAMILY_PARAMETERS`
	:return: the model
	:raise PreconditionError: for unknown families or parameters, and for non-positive weight parameters
	"""
	family = FAMILY_ALIASES.get(name, name)
	if family not in _BUILDERS:
		raise PreconditionError(f"unknown family {name!r}, expected one of {sorted(_BUILDERS)}")
	unknown = sorted(set(params) - set(FAMILY_PARAMETERS[family]))
	if len(unknown) > 0:
		raise PreconditionError(f"unknown parameters {unknown} for family {family!r}, expected some of "
								f"{list(FAMILY_PARAMETERS[family])}")

	if family in PERTURBATION_FAMILIES:
		if base is None:
			base = _free()
		if not base.is_periodic:
			raise PreconditionError(f"base of perturbation {family!r} must be periodic", base=base.name)
		return _BUILDERS[family](base, **params)
	if base is not None:
		raise PreconditionError(f"periodic family {family!r} does not take a base model")
	return _BUILDERS[family](**params)

def _moment_integral(pair: PerturbedPair, k: int, x0: float, x1: float) -> float:
	""" Integrates ``|Δ| |t|^k`` over ``[x0, x1]`` window by window, splitting at breakpoints. """
	if x1 <= x0 or pair.is_trivial:
		return 0.0

	def integrand(t: float) -> float:
		return float(pair.difference_norm(np.asarray([t]))[0]) * abs(t) ** k

	nodes = pair.pert.segments(x0, x1)
	total = 0.0
	for lo, hi in zip(nodes[:-1], nodes[1:]):
		n = max(1, math.ceil((hi - lo) / MOMENT_WINDOW))
		edges = np.linspace(lo, hi, n + 1)
		for w0, w1 in zip(edges[:-1], edges[1:]):
			total += integrate.quad(integrand, w0, w1, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
	return total

def moment_norm(pair: PerturbedPair, k: int, x_max: Optional[float] = None) -> MomentNorm:
	"""
	Computes the moment norm ``∫_a^X (|r₁ - r₀| + |1/p₁ - 1/p₀| + |q₁ - q₀|) |t|^k dt`` by adaptive quadrature and adds
	the analytic tail beyond ``X`` when the perturbation family provides one. Without an analytic tail, divergence is
	detected by the increments over the doubling windows ``[X, 2X]`` and ``[2X, 4X]``, which must shrink geometrically.

	:param pair: the perturbed pair
	:param k: the order of the moment, one of 0, 1, 2
	:param x_max: the truncation point, ``a + 50`` if omitted, ``math.inf`` requests the full integral
	:return: the norm with its tail estimate and a divergence flag
	:raise PreconditionError: if ``k`` is not 0, 1 or 2 or ``x_max ≤ a``
	"""
	if k not in (0, 1, 2):
		raise PreconditionError("moment order must be 0, 1 or 2", k=k)
	a = pair.domain_start
	infinite = x_max is None or math.isinf(x_max)
	X = a + DEFAULT_MOMENT_X if infinite else float(x_max)
	if not X > a:
		raise PreconditionError("truncation point must lie right of the domain start", x_max=X, a=a)

	integral = _moment_integral(pair, k, a, X)
	if pair.is_trivial:
		return MomentNorm(0.0, 0.0, X, k, False, True)

	if pair.has_analytic_tail:
		tail = pair.pert.tail(k, max(X, 0.0))
		return MomentNorm(integral, tail if math.isfinite(tail) else 0.0, X, k, not math.isfinite(tail), True)

	span = max(X - a, 1.0)
	first = _moment_integral(pair, k, a + span, a + 2 * span)
	second = _moment_integral(pair, k, a + 2 * span, a + 4 * span)
	divergent = first > 1e-12 * max(1.0, integral) and second > CAUCHY_RATIO * first
	log(f"[moment_norm] no analytic tail for {pair.pert.name!r}: doubling increments {first:.3e}, {second:.3e}",
		level=VERBOSE)
	# geometric extrapolation of the doubling increments
	tail = first / (1.0 - second / first) if (first > 0 and not divergent) else 0.0
	return MomentNorm(integral, tail if infinite else 0.0, X, k, divergent, False)
