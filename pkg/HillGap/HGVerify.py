"""
:Date: 21.02.2026

..	versionadded:: v0.1.0

Acceptance bundles of ``hillgap verify``. Each check runs a scaled, deterministic experiment, is timed with
:py:func:`~HillGap.HGDecorators.timed_return` and reports a :py:class:`Check` row. Exceptions of the library inside a
check make it fail with the error message as detail instead of aborting the bundle.

The checks of ``thm1``, ``thm2`` and ``thm3`` run on built-in Mathieu problems unless the command line names a
problem, e.g. ``hillgap verify thm2 --family kronig_penney+gauss --range 0 20``. The remaining checks of ``all`` always
use their fixed problems.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import math
import sys
from typing import Final, Tuple, List, Dict, Any, Callable, Optional

import numpy as np
from scipy import optimize

from HillGap.HGDecorators import timed_return
from HillGap.HGLogger import log, INFO, VERBOSE
from HillGap.HGPrinting import repr_str, table_str, time_str
from HillGap.HGUtils import Immutable, HillGapError, PreconditionError
from HillGap.spectral.HGCoefficients import CoefficientModel, PerturbedPair, make_builtin
from HillGap.spectral.HGQuadODE import transfer_matrix
from HillGap.spectral.HGFloquet import discriminant, discriminant_sweep, band_structure, BandStructure
from HillGap.spectral.HGPerturb import volterra_setup, build_decaying_solution, neumann_terms
from HillGap.spectral.HGSpectra import Verdict, BoundaryCondition, gap_report, gap_eigenvalues_fullline, \
	greens_apply, edge_eigenvalue_test, subordinacy_diagnostic
from HillGap.spectral.HGOracle import discretize, counting_profile, oracle_gap_eigenvalues

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

MATHIEU_RANGE: Final[Tuple[float, float]] = (-1.0, 8.0)
""" Scan range of the Mathieu band structure used by the bundles; it holds three bands, the last one clipped. """
MATHIEU_EDGES: Final[Tuple[float, ...]] = (-0.45514, -0.11025, 1.85911)
""" Reference values of the first Mathieu band edges for ``γ = 1``. """
STEP: Final[float] = 0.01
""" Grid step of the finite-difference oracle in all bundles. """

WELL_DEPTHS: Final[Tuple[float, ...]] = (-1.0, -2.0, -3.0)
SCAN_SAMPLES: Final[int] = 100
""" Shooting samples per gap in the bundles. """

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class Check(Immutable):
	""" One row of a verification bundle. The runtime is shown in the table but kept out of the JSON output. """

	def __init__(self, name: str, passed: bool, detail: str, seconds: float):
		self._name = name
		self._passed = bool(passed)
		self._detail = detail
		self._seconds = float(seconds)

	@property
	def name(self) -> str:
		return self._name

	@property
	def passed(self) -> bool:
		return self._passed

	@property
	def detail(self) -> str:
		return self._detail

	@property
	def seconds(self) -> float:
		return self._seconds

	def to_json_dict(self) -> Dict[str, Any]:
		return {"name": self._name, "passed": self._passed, "detail": self._detail}

	def __repr__(self) -> str:
		return repr_str(self, Check.name, Check.passed, Check.detail)

class Problem(Immutable):
	"""
	A problem given on the command line. The checks of ``thm1``, ``thm2`` and ``thm3`` run on it in place of their
	built-in Mathieu problems, taking bands, gaps and edges of its base in ``lam_range``.
	"""

	def __init__(self, pair: PerturbedPair, lam_range: Tuple[float, float] = MATHIEU_RANGE):
		if not lam_range[0] < lam_range[1]:
			raise PreconditionError("range needs lo < hi", lo=lam_range[0], hi=lam_range[1])
		self._pair = pair
		self._lam_range = (float(lam_range[0]), float(lam_range[1]))

	@property
	def pair(self) -> PerturbedPair:
		return self._pair

	@property
	def lam_range(self) -> Tuple[float, float]:
		return self._lam_range

	@property
	def label(self) -> str:
		if self._pair.is_trivial:
			return self._pair.base.name
		return f"{self._pair.base.name}+{self._pair.pert.name}"

	def bands(self) -> BandStructure:
		return band_structure(self._pair.base, *self._lam_range)

	def __repr__(self) -> str:
		return repr_str(self, Problem.label, Problem.lam_range)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

# ~~~~~~~~~~~~~~~ problems ~~~~~~~~~~~~~~~

def _mathieu() -> CoefficientModel:
	return make_builtin("mathieu", gamma=1.0)

def _mathieu_pair(pert: str, moment_class: int, **params: float) -> PerturbedPair:
	base = _mathieu()
	return PerturbedPair(base, make_builtin(pert, base=base, **params), moment_class)

def _mathieu_bands() -> BandStructure:
	return band_structure(_mathieu(), *MATHIEU_RANGE)

def _pair_and_bands(problem: Optional[Problem], pert: str, moment_class: int,
					**params: float) -> Tuple[PerturbedPair, BandStructure]:
	""" :return: the given problem, or the Mathieu pair with the built-in perturbation ``pert`` """
	if problem is None:
		return _mathieu_pair(pert, moment_class, **params), _mathieu_bands()
	return problem.pair, problem.bands()

def _inner(interval: Tuple[float, float], margin: float) -> Tuple[float, float]:
	return interval[0] + margin, interval[1] - margin

def problem_from_config(config: Optional[Any]) -> Optional[Problem]:
	"""
	:param config: a :py:class:`~HillGap.HGCLI.RunConfig` or ``None``
	:return: the problem of ``config`` with its ``lam_range`` (:py:data:`MATHIEU_RANGE` if none is given), or ``None``
		if it names neither a base family nor a perturbation
	:raise PreconditionError: for incomplete or invalid problems
	"""
	if config is None or (config.family is None and config.pert is None):
		return None
	return Problem(config.pair(), MATHIEU_RANGE if config.lam_range is None else config.lam_range)

# ~~~~~~~~~~~~~~~ checks ~~~~~~~~~~~~~~~

@timed_return
def check_free_closed_forms(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" ``D(λ) = 2 cos(ω√λ)`` (``2 cosh(ω√-λ)`` below 0) for the free problem, ``ω ∈ {1, π}``. """
	lams = np.linspace(-5.0, 25.0, 200)
	worst = 0.0
	for omega in (1.0, math.pi):
		model = make_builtin("free", omega=omega)
		computed = np.asarray([d for _, d in discriminant_sweep(model, lams)])
		exact = np.where(lams >= 0, 2 * np.cos(omega * np.sqrt(np.abs(lams))),
						 2 * np.cosh(omega * np.sqrt(np.abs(lams))))
		worst = max(worst, float(np.max(np.abs(computed - exact))))
	return worst <= 1e-8, f"max |D - D_exact| = {worst:.2e}"

@timed_return
def check_transfer_invariants(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" ``det T = 1`` and ``T(x₀→x₂) = T(x₁→x₂) T(x₀→x₁)`` on random cases, errors relative to ``‖T‖`` and ``‖T‖²``. """
	rng = np.random.default_rng(seed)
	mathieu = _mathieu()
	models = (mathieu, make_builtin("free", omega=1.0), make_builtin("kronig_penney", height=2.0, p_ratio=2.0),
			  make_builtin("square_well_pert", base=mathieu, depth=-2.0, width=2.0, start=0.5))
	worst_det, worst_comp = 0.0, 0.0
	for _ in range(100):
		model = models[int(rng.integers(len(models)))]
		lam = float(rng.uniform(-2.0, 10.0))
		x0 = float(rng.uniform(0.0, 5.0))
		x1 = x0 + float(rng.uniform(0.1, 3.0))
		x2 = x1 + float(rng.uniform(0.1, 3.0))
		first, second = transfer_matrix(model, lam, x0, x1), transfer_matrix(model, lam, x1, x2)
		whole = transfer_matrix(model, lam, x0, x2)
		scale = max(1.0, float(np.linalg.norm(whole.entries)))
		worst_det = max(worst_det, abs(whole.det - 1.0) / scale ** 2)
		worst_comp = max(worst_comp, float(np.max(np.abs((second @ first).entries - whole.entries))) / scale)
	return worst_det <= 1e-9 and worst_comp <= 1e-8, f"det error {worst_det:.2e}, composition error {worst_comp:.2e}"

def _bisection_edges(model: CoefficientModel, lam_min: float, lam_max: float, points: int = 6001) -> List[float]:
	""" Edges from plain bisection of ``|D| - 2`` on a fine grid, independent of the band-structure refinement. """
	grid = np.linspace(lam_min, lam_max, points)
	f = np.abs([d for _, d in discriminant_sweep(model, grid)]) - 2.0
	g = lambda lam: abs(discriminant(model, lam)) - 2.0
	return [optimize.bisect(g, grid[i], grid[i + 1], xtol=1e-13)
			for i in range(points - 1) if f[i] * f[i + 1] < 0]

@timed_return
def check_mathieu_edges(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" Band edges against bisection and the lowest oracle eigenvalue on ``[0, 40π]`` against the first edge. """
	model = _mathieu()
	bands = band_structure(model, -1.0, 5.0)
	reference = _bisection_edges(model, -1.0, 5.0)
	if len(reference) != len(bands.edges):
		return False, f"{len(bands.edges)} edges, bisection finds {len(reference)}"
	edge_error = float(np.max(np.abs(np.asarray(bands.edges) - np.asarray(reference))))
	known_error = max(abs(e - k) for e, k in zip(bands.edges, MATHIEU_EDGES))

	L = 40 * math.pi
	pencil = discretize(model, (0.0, L), int(round(L / STEP)))
	lowest = float(pencil.eigenvalues((bands.edges[0] - 1.0, bands.edges[0] + 0.1))[0])
	oracle_error = abs(lowest - bands.edges[0])
	passed = edge_error <= 1e-8 and known_error <= 1e-4 and oracle_error <= 1e-3
	return passed, f"edge error {edge_error:.2e}, reference error {known_error:.2e}, oracle distance {oracle_error:.2e}"

@timed_return
def check_band_density(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	"""
	Counting function of the Dirichlet oracle for a decaying perturbation on ``[-L, L]``, ``L`` ten periods: eigenvalues
	in bands double with ``L``, the counts in the gaps stay fixed.
	"""
	pair, bands = _pair_and_bands(problem, "exp_decay_pert", 0, amplitude=-1.0, rate=1.0)
	if len(bands.bands) == 0:
		return False, f"no band in {problem.lam_range}"
	L = 10 * pair.period
	grid = sorted({v for band in bands.bands for v in band} | {v for gap in bands.gaps for v in _inner(gap, 0.01)})
	short = dict(zip(grid, counting_profile(pair, L, int(round(2 * L / STEP)), grid)))
	long = dict(zip(grid, counting_profile(pair, 2 * L, int(round(4 * L / STEP)), grid)))

	ratios = [(long[hi] - long[lo]) / max(short[hi] - short[lo], 1) for lo, hi in bands.bands]
	gap_counts = [(short[hi] - short[lo], long[hi] - long[lo]) for lo, hi in (_inner(g, 0.01) for g in bands.gaps)]
	passed = all(1.7 <= r <= 2.3 for r in ratios) and all(a == b for a, b in gap_counts)
	return passed, f"band ratios {[round(r, 2) for r in ratios]}, gap counts {gap_counts}"

@timed_return
def check_cell_bounds(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" Cell integrals of two perturbed solutions inside the first band stay between the base bounds. """
	pair, bands = _pair_and_bands(problem, "exp_decay_pert", 0, amplitude=-1.0, rate=1.0)
	if len(bands.bands) == 0:
		return False, f"no band in {problem.lam_range}"
	band = bands.bands[0]
	lam = (band[0] + band[1]) / 2
	report = subordinacy_diagnostic(pair, lam, [10 * pair.period, 20 * pair.period], n_cells=24)
	bounded = bool(np.all(np.isfinite(report.ratios)) and np.all(report.ratios > 0))
	return report.cells_bounded and bounded, f"λ = {lam:.5f}, R = {[round(float(r), 4) for r in report.ratios]}"

@timed_return
def check_gap_counts(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" Shooting, Wronskian and oracle counts agree in the first two gaps, by default for wells of several depths. """
	if problem is None:
		labelled = [(f"{depth:g}", _mathieu_pair("square_well_pert", 1, depth=depth, width=2.0))
					for depth in WELL_DEPTHS]
		gaps, heading = _mathieu_bands().gaps[:2], "depth:shooting/wronskian/oracle "
	else:
		labelled = [(problem.label, problem.pair)]
		gaps, heading = problem.bands().gaps[:2], "problem:shooting/wronskian/oracle "
		if len(gaps) == 0:
			return False, f"{problem.label}: no gap in {problem.lam_range}"

	details, passed = list(), True
	for label, pair in labelled:
		for gap in gaps:
			report = gap_report(pair, gap, BoundaryCondition.dirichlet(), L=20 * pair.period, samples=SCAN_SAMPLES)
			ok = report.agreement and report.wronskian is not None and report.wronskian.reliable
			passed &= ok
			details.append(f"{label}:{report.count_shooting}/{report.count_wronskian}/{report.count_oracle}")
			log(f"[verify] {label}, gap {gap}: {report!r}", level=VERBOSE)
	return passed, heading + " ".join(details)

@timed_return
def check_edge_tests(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" The first four band edges carry no square-integrable solution, by default for a Gaussian perturbation. """
	pair, bands = _pair_and_bands(problem, "gauss_pert", 2, amplitude=1.0, width=1.0)
	edges = bands.edges[:4]
	if len(edges) == 0:
		return False, f"no band edge in {problem.lam_range}"
	verdicts = [edge_eigenvalue_test(pair, edge) for edge in edges]
	passed = all(v.verdict == Verdict.NO_L2_SOLUTION and v.n0 is not None and v.n0 <= 10 for v in verdicts)
	return passed, "n0 = " + str([v.n0 for v in verdicts])

@timed_return
def check_edge_oracle(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" No stable oracle eigenvalue within ``1e-4`` of the first band edges, by default for a Gaussian perturbation. """
	pair, bands = _pair_and_bands(problem, "gauss_pert", 2, amplitude=1.0, width=1.0)
	if len(bands.edges) == 0:
		return False, f"no band edge in {problem.lam_range}"
	gaps = [(bands.edges[0] - 1.0, bands.edges[0]), *bands.gaps[:2]]
	L = 20 * pair.period
	closest = math.inf
	for gap in gaps:
		report = oracle_gap_eigenvalues(pair, gap, L, int(round(2 * L / STEP)), side="full")
		for value in report.eigenvalues:
			closest = min(closest, abs(value - gap[0]), abs(value - gap[1]))
	return closest > 1e-4, f"closest gap eigenvalue to an edge: {closest:.3e}"

@timed_return
def check_volterra(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" Factorial bounds of the Neumann terms, residual and weighted tail deviation of decaying solutions. """
	mathieu_pair = _mathieu_pair("exp_decay_pert", 2, amplitude=-1.0, rate=1.0)
	free = make_builtin("free", omega=math.pi)
	free_pair = PerturbedPair(free, make_builtin("exp_decay_pert", base=free, amplitude=-1.0, rate=1.0), 2)
	gap = _mathieu_bands().gaps[0]
	passed, details = True, list()
	for pair, lam in ((mathieu_pair, (gap[0] + gap[1]) / 2), (free_pair, -1.0)):
		setup = volterra_setup(pair, lam)
		terms = neumann_terms(setup, 6)
		solution = build_decaying_solution(setup, method="auto")
		ok = terms.bound_holds and terms.ratio_holds and solution.residual_sup < 1e-7 and solution.pixel_tail < 1e-6
		passed &= ok
		details.append(f"{pair.base.name}@{lam:.4g}: residual {solution.residual_sup:.1e}, "
					   f"tail {solution.pixel_tail:.1e}")
	return passed, "; ".join(details)

@timed_return
def check_greens(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" The Green's operator against the closed form of the free problem and the residual on a perturbed problem. """
	free = make_builtin("free", omega=math.pi)
	result = greens_apply(PerturbedPair(free, free, 2, check=False), -1.0, lambda x: np.exp(-2 * x))
	x = result.grid
	error = float(np.max(np.abs(result.values - (np.exp(-x) / 2 - np.exp(-2 * x) / 3))))

	pair = _mathieu_pair("exp_decay_pert", 2, amplitude=-1.0, rate=1.0)
	gap = _mathieu_bands().gaps[0]
	perturbed = greens_apply(pair, (gap[0] + gap[1]) / 2, lambda t: np.exp(-t))
	return error <= 1e-8 and perturbed.residual_sup <= 1e-6, \
		f"closed-form error {error:.2e}, perturbed residual {perturbed.residual_sup:.2e}"

@timed_return
def check_coupling(seed: int, problem: Optional[Problem] = None) -> Tuple[bool, str]:
	""" ``|count_full - count_left - count_right| ≤ 2`` in the first gap for every perturbation family. """
	gap = _mathieu_bands().gaps[0]
	pairs = (_mathieu_pair("square_well_pert", 2, depth=-2.0, width=2.0),
			 _mathieu_pair("exp_decay_pert", 2, amplitude=-1.0, rate=1.0),
			 _mathieu_pair("gauss_pert", 2, amplitude=1.0, width=1.0),
			 _mathieu_pair("power_decay_pert", 1, amplitude=1.0, power=3.0))
	passed, details = True, list()
	for pair in pairs:
		report = gap_eigenvalues_fullline(None, pair, gap, samples=SCAN_SAMPLES, L=10 * math.pi)
		passed &= bool(report.coupling_holds)
		details.append(f"{pair.pert.name}:{report.count_shooting}/{report.count_left}/{report.count_right}")
	return passed, "full/left/right " + " ".join(details)

# ~~~~~~~~~~~~~~~ bundles ~~~~~~~~~~~~~~~

CheckFunction = Callable[[int, Optional[Problem]], Tuple[Tuple[bool, str], float]]
""" A timed check taking the seed and an optional problem given on the command line. """

BUNDLES: Final[Dict[str, Tuple[Tuple[str, CheckFunction], ...]]] = {
	"thm1": (("band density under L → 2L", check_band_density),
			 ("cell bounds inside a band", check_cell_bounds)),
	"thm2": (("gap counts agree", check_gap_counts),),
	"thm3": (("band edges carry no L² solution", check_edge_tests),
			 ("no oracle eigenvalue at band edges", check_edge_oracle)),
}
BUNDLES["all"] = (("free discriminant closed form", check_free_closed_forms),
				  ("transfer matrix invariants", check_transfer_invariants),
				  ("Mathieu band edges", check_mathieu_edges),
				  *BUNDLES["thm1"], *BUNDLES["thm2"], *BUNDLES["thm3"],
				  ("Volterra iteration", check_volterra),
				  ("Green's operator", check_greens),
				  ("full-line coupling bound", check_coupling))

_EDGE_BUNDLES: Final[Tuple[str, ...]] = ("thm3", "all")

def run_check(name: str, check: CheckFunction, seed: int, problem: Optional[Problem] = None) -> Check:
	""" Runs one check, turning library errors into a failed row. """
	try:
		(passed, detail), seconds = check(seed, problem)
	except HillGapError as e:
		passed, detail, seconds = False, f"{e.__class__.__name__}: {e}", 0.0
	log(f"[verify] {name}: {'pass' if passed else 'FAIL'} ({detail})", level=INFO)
	return Check(name, passed, detail, seconds)

def run_bundle(bundle: str, config: Optional[Any] = None) -> List[Check]:
	"""
	Runs a bundle on its built-in problems, or on the problem of ``config`` if it names one (see
	:py:func:`problem_from_config`).

	:param bundle: one of ``thm1``, ``thm2``, ``thm3`` and ``all``
	:param config: the run configuration, its seed, problem and ``lam_range`` are used
	:raise PreconditionError: for unknown bundles, invalid problems and band-edge bundles on a problem without moment
		class 2
	"""
	if bundle not in BUNDLES:
		raise PreconditionError(f"unknown bundle {bundle!r}, expected one of {sorted(BUNDLES)}")
	problem = problem_from_config(config)
	if problem is not None:
		if bundle in _EDGE_BUNDLES and problem.pair.moment_class < 2 and not problem.pair.is_trivial:
			raise PreconditionError(f"bundle {bundle!r} tests band edges and needs moment class 2",
									moment_class=problem.pair.moment_class)
		log(f"[verify] running {bundle!r} on {problem!r}", level=INFO)
	seed = 0 if config is None else config.seed
	return [run_check(name, check, seed, problem) for name, check in BUNDLES[bundle]]

def print_table(checks: List[Check], use_color: Optional[bool] = None) -> str:
	""" :return: the pass/fail table of a bundle, colored if ``stdout`` is a terminal """
	use_color = sys.stdout.isatty() if use_color is None else use_color
	rows = [(c.name, c.passed, c.detail, time_str(c.seconds)) for c in checks]
	return table_str(("check", "result", "detail", "time"), rows, status_column=1, use_color=use_color)
