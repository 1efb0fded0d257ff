"""
:Date: 20.02.2026

..	versionadded:: v0.1.0

The ``hillgap`` command line. Every subcommand reads its problem either from flags or from a TOML file given with
``--config`` (flags win), writes its result as JSON to ``stdout`` or ``--out`` and, where a trace exists, as CSV to
``--csv``. Exit codes are 0 on success, 1 for invalid input or violated preconditions and 2 for numerical failures, any
other library error and failed verification bundles.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import math
import sys
from typing import Final, Dict, Any, Optional, Tuple, Callable, Sequence, List, Mapping

import numpy as np

from HillGap.HGIO import ConsoleArguments, ConsoleArgsError, ConfigSchema, load_config, parse_real, write_json, \
	write_csv
from HillGap.HGLogger import log, log_call, set_verbosity, ERROR, WARNING, FATAL_ERROR
from HillGap.HGPrinting import repr_str
from HillGap.HGUtils import Immutable, HillGapError, PreconditionError, NumericalError, ConfigError
from HillGap.spectral.HGCoefficients import CoefficientModel, PerturbedPair, make_builtin, FAMILY_ALIASES, \
	PERIODIC_FAMILIES, PERTURBATION_FAMILIES
from HillGap.spectral.HGQuadODE import DEFAULT_TOL
from HillGap.spectral.HGFloquet import TOL_EDGE, DEFAULT_RESOLUTION, monodromy, discriminant_sweep, band_structure, \
	floquet_solutions
from HillGap.spectral.HGPerturb import N_MAX, volterra_setup, build_decaying_solution, build_second_solution, \
	gronwall_envelope
from HillGap.spectral.HGSpectra import SCAN_SAMPLES, BoundaryCondition, gap_report, gap_eigenvalues_fullline, \
	edge_eigenvalue_test
from HillGap.spectral.HGOracle import oracle_gap_eigenvalues
from HillGap.HGVerify import run_bundle, print_table

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

EXIT_OK: Final[int] = 0
EXIT_PRECONDITION: Final[int] = 1
EXIT_NUMERICAL: Final[int] = 2

COMMANDS: Final[Tuple[str, ...]] = ("discriminant", "bands", "floquet", "perturb-solve", "gap-eigs", "edge-test",
									"oracle", "verify")
SIDES: Final[Tuple[str, ...]] = ("half", "full")

BASE_KEYS: Final[Tuple[str, ...]] = ("omega", "shift", "gamma", "height", "fraction", "p_ratio", "domain_start")
PERT_KEYS: Final[Tuple[str, ...]] = ("depth", "width", "start", "amplitude", "rate", "power")

_SHORT_FLAGS: Final[List[str]] = ["h", "v", "q"]
_LONG_FLAGS: Final[List[str]] = ["help", "verbose", "quiet", "config=", "family=", "pert=", "coefficient=",
								 "moment-class=", "lambda=", "range=", "gap=", "alpha=", "n-max=", "L=", "N=",
								 "x-max=", "tol=", "tol-edge=", "resolution=", "scan-points=", "seed=", "side=",
								 "out=", "csv=", *(f"{k.replace('_', '-')}=" for k in BASE_KEYS + PERT_KEYS)]
_MULTI_VALUE: Final[Dict[str, int]] = {"range": 2, "gap": 2}

def _pair_of_reals(value: Any) -> Tuple[float, float]:
	values = value.split(",") if isinstance(value, str) else list(value)
	if len(values) != 2:
		raise ValueError(f"expected two values, but received {value!r}")
	return parse_real(values[0]), parse_real(values[1])

def _choice(*choices: str) -> Callable[[Any], str]:
	def convert(value: Any) -> str:
		if value not in choices:
			raise ValueError(f"expected one of {list(choices)}, but received {value!r}")
		return value

	return convert

def _string(value: Any) -> str:
	if not isinstance(value, str):
		raise ValueError(f"expected a string, but received {value!r}")
	return value

CONFIG_SCHEMA: Final[ConfigSchema] = {
	"base"        : {"family": _string, **{k: parse_real for k in BASE_KEYS}},
	"perturbation": {"family"      : _string,
					 "coefficient" : _choice("q", "r", "inv_p"),
					 "moment_class": int,
					 **{k: parse_real for k in PERT_KEYS}},
	"run"         : {"command"        : _choice(*COMMANDS),
					 "bundle"         : _string,
					 "lambda"         : parse_real,
					 "lambda_min"     : parse_real,
					 "lambda_max"     : parse_real,
					 "gap"            : _pair_of_reals,
					 "alpha"          : parse_real,
					 "n_max"          : int,
					 "L"              : parse_real,
					 "N"              : int,
					 "x_max"          : parse_real,
					 "tol"            : parse_real,
					 "tol_edge"       : parse_real,
					 "scan_resolution": int,
					 "scan_points"    : int,
					 "seed"           : int,
					 "side"           : _choice(*SIDES),
					 "out"            : _string,
					 "csv"            : _string},
}
""" Sections and keys accepted in ``--config`` files. """

USAGE: Final[str] = """usage: hillgap COMMAND [options]

commands:
  discriminant   Hill discriminant at --lambda, or a sweep over --range lo hi (CSV: lambda, D)
  bands          band edges in --range lo hi
  floquet        monodromy and Floquet solutions at --lambda
  perturb-solve  decaying (and second) perturbed solution at --lambda (CSV: x, u, pu)
  gap-eigs       gap eigenvalues in --gap lo hi, or in every gap of --range (CSV: lambda, m)
  edge-test      square-integrability test at the band edge --lambda, or at every edge in --range
  oracle         finite-difference eigenvalues in --gap lo hi
  verify         acceptance bundles: thm1 | thm2 | thm3 | all

problem:
  --family NAME[+PERT]   periodic family (free, const_shift, mathieu, kronig_penney), optionally with a
                         perturbation (well, exp, power, gauss), e.g. mathieu+well
  --pert NAME            perturbation family
  --coefficient C        perturbed coefficient: q, r or inv_p
  --moment-class K       declared moment class 0, 1 or 2
  --gamma --omega --shift --height --fraction --p-ratio --domain-start
  --depth --width --start --amplitude --rate --power

run:
  --lambda X  --range LO HI  --gap LO HI  --alpha A  --side half|full  --n-max N  --L L  --N N
  --x-max X  --tol T  --tol-edge T  --resolution R  --scan-points S  --seed S
  --config FILE  --out FILE  --csv FILE  -v/--verbose  -q/--quiet  -h/--help

Real values accept multiples of pi: pi, 2pi, pi/2, -3*pi/4.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class RunConfig(Immutable):
	"""
	The validated settings of one ``hillgap`` run: the problem (base family, optional perturbation, their
	parameters) and the run options. Build it with :py:meth:`from_sources`.
	"""

	def __init__(self,
				 command: str,
				 bundle: Optional[str] = None,
				 family: Optional[str] = None,
				 base_params: Optional[Mapping[str, float]] = None,
				 pert: Optional[str] = None,
				 pert_params: Optional[Mapping[str, Any]] = None,
				 moment_class: Optional[int] = None,
				 lam: Optional[float] = None,
				 lam_range: Optional[Tuple[float, float]] = None,
				 gap: Optional[Tuple[float, float]] = None,
				 alpha: float = 0.0,
				 n_max: int = 20,
				 L: Optional[float] = None,
				 N: Optional[int] = None,
				 x_max: Optional[float] = None,
				 tol: float = DEFAULT_TOL,
				 tol_edge: float = TOL_EDGE,
				 resolution: int = DEFAULT_RESOLUTION,
				 scan_points: int = SCAN_SAMPLES,
				 seed: int = 0,
				 side: str = "half",
				 out: Optional[str] = None,
				 csv: Optional[str] = None):
		if command not in COMMANDS:
			raise PreconditionError(f"unknown command {command!r}, expected one of {list(COMMANDS)}")
		if side not in SIDES:
			raise PreconditionError(f"unknown side {side!r}, expected one of {list(SIDES)}")
		for name, pair in (("range", lam_range), ("gap", gap)):
			if pair is not None and not pair[0] < pair[1]:
				raise PreconditionError(f"{name} needs lo < hi", lo=pair[0], hi=pair[1])
		if not tol > 0 or not tol_edge > 0:
			raise PreconditionError("tolerances must be positive", tol=tol, tol_edge=tol_edge)

		self._command = command
		self._bundle = bundle
		self._family = family
		self._base_params = dict(base_params or {})
		self._pert = pert
		self._pert_params = dict(pert_params or {})
		self._moment_class = moment_class
		self._lam = lam
		self._lam_range = lam_range
		self._gap = gap
		self._alpha = float(alpha)
		self._n_max = int(n_max)
		self._L = L
		self._N = N
		self._x_max = x_max
		self._tol = float(tol)
		self._tol_edge = float(tol_edge)
		self._resolution = int(resolution)
		self._scan_points = int(scan_points)
		self._seed = int(seed)
		self._side = side
		self._out = out
		self._csv = csv

	# ~~~~~~~~~~~~~~~ properties ~~~~~~~~~~~~~~~

	@property
	def command(self) -> str:
		return self._command

	@property
	def bundle(self) -> Optional[str]:
		return self._bundle

	@property
	def family(self) -> Optional[str]:
		return self._family

	@property
	def base_params(self) -> Dict[str, float]:
		return dict(self._base_params)

	@property
	def pert(self) -> Optional[str]:
		return self._pert

	@property
	def pert_params(self) -> Dict[str, Any]:
		return dict(self._pert_params)

	@property
	def moment_class(self) -> Optional[int]:
		return self._moment_class

	@property
	def lam(self) -> Optional[float]:
		return self._lam

	@property
	def lam_range(self) -> Optional[Tuple[float, float]]:
		return self._lam_range

	@property
	def gap(self) -> Optional[Tuple[float, float]]:
		return self._gap

	@property
	def alpha(self) -> float:
		return self._alpha

	@property
	def n_max(self) -> int:
		return self._n_max

	@property
	def L(self) -> Optional[float]:
		return self._L

	@property
	def N(self) -> Optional[int]:
		return self._N

	@property
	def x_max(self) -> Optional[float]:
		return self._x_max

	@property
	def tol(self) -> float:
		return self._tol

	@property
	def tol_edge(self) -> float:
		return self._tol_edge

	@property
	def resolution(self) -> int:
		return self._resolution

	@property
	def scan_points(self) -> int:
		return self._scan_points

	@property
	def seed(self) -> int:
		return self._seed

	@property
	def side(self) -> str:
		return self._side

	@property
	def out(self) -> Optional[str]:
		return self._out

	@property
	def csv(self) -> Optional[str]:
		return self._csv

	# ~~~~~~~~~~~~~~~ problem ~~~~~~~~~~~~~~~

	def base_model(self) -> CoefficientModel:
		"""
		:raise PreconditionError: if no family was given, or it is not periodic
		"""
		if self._family is None:
			raise PreconditionError("no problem given, use --family or a [base] section")
		if self._family not in PERIODIC_FAMILIES:
			raise PreconditionError(f"base family must be one of {list(PERIODIC_FAMILIES)}", family=self._family)
		return make_builtin(self._family, **self._base_params)

	def pair(self) -> PerturbedPair:
		""" :return: the perturbed pair, or the trivial pair of the base model if no perturbation is given """
		base = self.base_model()
		if self._pert is None:
			if len(self._pert_params) > 0:
				raise PreconditionError(f"perturbation parameters {sorted(self._pert_params)} given without "
										f"a perturbation family")
			return PerturbedPair(base, base, 2 if self._moment_class is None else self._moment_class, check=False)
		pert = make_builtin(self._pert, base=base, **self._pert_params)
		k = default_moment_class(pert) if self._moment_class is None else self._moment_class
		return PerturbedPair(base, pert, k)

	def require(self, *names: str) -> None:
		""" :raise PreconditionError: if one of the named options was not given """
		missing = [n for n in names if getattr(self, n) is None]
		if len(missing) > 0:
			flags = ", ".join("--" + {"lam": "lambda", "lam_range": "range"}.get(n, n) for n in missing)
			raise PreconditionError(f"command {self._command!r} needs {flags}")

	# ~~~~~~~~~~~~~~~ construction ~~~~~~~~~~~~~~~

	@classmethod
	def from_sources(cls, args: ConsoleArguments) -> RunConfig:
		"""
		Merges a ``--config`` file (if any) with the command line, the command line taking precedence.

		:raise ConfigError: for unreadable or invalid config files
		:raise PreconditionError: for invalid flag values or combinations
		"""
		config = load_config(args["config"], CONFIG_SCHEMA) if "config" in args else {}
		base = dict(config.get("base", {}))
		pert = dict(config.get("perturbation", {}))
		run = dict(config.get("run", {}))

		family = base.pop("family", None)
		pert_family = pert.pop("family", None)
		moment_class = pert.pop("moment_class", None)
		if "family" in args:
			family, _, shorthand = args["family"].partition("+")
			if shorthand != "":
				pert_family = shorthand
		if "pert" in args:
			pert_family = args["pert"]
		if pert_family is not None:
			pert_family = FAMILY_ALIASES.get(pert_family, pert_family)
			if pert_family not in PERTURBATION_FAMILIES:
				raise PreconditionError(f"unknown perturbation family {pert_family!r}, expected one of "
										f"{list(PERTURBATION_FAMILIES) + sorted(FAMILY_ALIASES)}")

		try:
			for key in BASE_KEYS:
				if key.replace("_", "-") in args:
					base[key] = parse_real(args[key.replace("_", "-")])
			for key in PERT_KEYS:
				if key in args:
					pert[key] = parse_real(args[key])
			if "coefficient" in args:
				pert["coefficient"] = _choice("q", "r", "inv_p")(args["coefficient"])
			if "moment-class" in args:
				moment_class = int(args["moment-class"])

			options = {"lam"        : ("lambda", parse_real),
					   "alpha"      : ("alpha", parse_real),
					   "n_max"      : ("n-max", int),
					   "L"          : ("L", parse_real),
					   "N"          : ("N", int),
					   "x_max"      : ("x-max", parse_real),
					   "tol"        : ("tol", parse_real),
					   "tol_edge"   : ("tol-edge", parse_real),
					   "resolution" : ("resolution", int),
					   "scan_points": ("scan-points", int),
					   "seed"       : ("seed", int),
					   "side"       : ("side", _choice(*SIDES)),
					   "out"        : ("out", str),
					   "csv"        : ("csv", str)}
			values: Dict[str, Any] = {"lam": run.pop("lambda", None), "resolution": run.pop("scan_resolution", None)}
			for key in ("alpha", "n_max", "L", "N", "x_max", "tol", "tol_edge", "scan_points", "seed", "side", "out",
						"csv"):
				values[key] = run.pop(key, None)
			for key, (flag, convert) in options.items():
				if flag in args:
					values[key] = convert(args[flag])
			lam_range = None
			if "lambda_min" in run or "lambda_max" in run:
				lam_range = (run.pop("lambda_min"), run.pop("lambda_max"))
			if "range" in args:
				lam_range = _pair_of_reals(args["range"])
			gap = run.pop("gap", None)
			if "gap" in args:
				gap = _pair_of_reals(args["gap"])
		except (ValueError, KeyError) as e:
			raise PreconditionError(f"invalid option: {e}") from e

		pars = list(args.pars)
		command = pars[0] if len(pars) > 0 else run.pop("command", None)
		bundle = pars[1] if len(pars) > 1 else run.pop("bundle", None)
		if command is None:
			raise PreconditionError(f"no command given, expected one of {list(COMMANDS)}")
		if len(pars) > (2 if command == "verify" else 1):
			raise PreconditionError(f"unexpected arguments {pars[1:]}")

		for name, params, allowed in (("base", base, BASE_KEYS), ("perturbation", pert, PERT_KEYS + ("coefficient",))):
			stray = sorted(set(params) - set(allowed))
			if len(stray) > 0:
				raise PreconditionError(f"unknown {name} parameters {stray}")
		return cls(command, bundle, family, base, pert_family, pert, moment_class, lam_range=lam_range, gap=gap,
				   **{k: v for k, v in values.items() if v is not None})

	def to_json_dict(self) -> Dict[str, Any]:
		return {"command": self._command, "bundle": self._bundle, "family": self._family,
				"base_params": self._base_params, "pert": self._pert, "pert_params": self._pert_params,
				"moment_class": self._moment_class, "lambda": self._lam, "range": self._lam_range, "gap": self._gap,
				"alpha": self._alpha, "n_max": self._n_max, "L": self._L, "N": self._N, "x_max": self._x_max,
				"tol": self._tol, "tol_edge": self._tol_edge, "resolution": self._resolution,
				"scan_points": self._scan_points, "seed": self._seed, "side": self._side}

	def __repr__(self) -> str:
		return repr_str(self, RunConfig.command, RunConfig.family, RunConfig.pert, RunConfig.lam, RunConfig.gap)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def default_moment_class(pert: CoefficientModel) -> int:
	"""
	:return: the largest moment class (at most 2) the built-in perturbation satisfies; power decay ``(1 + |x|)^{-s}``
		has finite moments of order ``k < s - 1``
	"""
	if pert.params.get("power") is not None:
		return max(0, min(2, int(math.ceil(pert.params["power"] - 1)) - 1))
	return 2

def _problem_dict(config: RunConfig) -> Dict[str, Any]:
	return {"family": config.family, "params": config.base_params, "pert": config.pert,
			"pert_params": config.pert_params}

def _gaps(config: RunConfig) -> List[Tuple[float, float]]:
	""" :return: ``--gap``, or every gap of the band structure in ``--range`` """
	if config.gap is not None:
		return [config.gap]
	config.require("lam_range")
	bands = band_structure(config.base_model(), *config.lam_range, scan_resolution=config.resolution,
						   tol_edge=config.tol_edge, tol=config.tol)
	return list(bands.gaps)

# ~~~~~~~~~~~~~~~ commands ~~~~~~~~~~~~~~~

CommandResult = Tuple[Any, Optional[Tuple[Sequence[str], List[Sequence[Any]]]]]
""" The JSON result of a command and an optional CSV trace ``(header, rows)``. """

@log_call("running command")
def cmd_discriminant(config: RunConfig) -> CommandResult:
	model = config.base_model()
	if config.lam is not None:
		return monodromy(model, config.lam, config.tol, config.tol_edge), None
	config.require("lam_range")
	lo, hi = config.lam_range
	grid = np.linspace(lo, hi, max(2, int(math.ceil((hi - lo) * config.resolution)) + 1))
	sweep = discriminant_sweep(model, grid, config.tol)
	return {"sweep": sweep}, (("lambda", "D"), sweep)

@log_call("running command")
def cmd_bands(config: RunConfig) -> CommandResult:
	config.require("lam_range")
	return band_structure(config.base_model(), *config.lam_range, scan_resolution=config.resolution,
						  tol_edge=config.tol_edge, tol=config.tol), None

@log_call("running command")
def cmd_floquet(config: RunConfig) -> CommandResult:
	config.require("lam")
	model = config.base_model()
	return {"monodromy": monodromy(model, config.lam, config.tol, config.tol_edge),
			"solutions": floquet_solutions(model, config.lam, config.tol, config.tol_edge)}, None

@log_call("running command")
def cmd_perturb_solve(config: RunConfig) -> CommandResult:
	config.require("lam")
	pair = config.pair()
	setup = volterra_setup(pair, config.lam, config.tol, config.x_max, tol_edge=config.tol_edge)
	decaying = build_decaying_solution(setup, config.tol, N_MAX, "auto")
	result = {"setup": setup, "decaying": decaying, "gronwall": gronwall_envelope(setup, decaying)}
	header, rows = ["x", "u_re", "u_im", "pu_re", "pu_im"], None
	try:
		second = build_second_solution(setup, config.tol, N_MAX, "auto", decaying=decaying)
		result["second"] = second
	except PreconditionError as e:
		second = None
		log(f"[perturb-solve] no second solution: {e}", level=WARNING)
	columns = [setup.grid, decaying.states[:, 0].real, decaying.states[:, 0].imag, decaying.states[:, 1].real,
			   decaying.states[:, 1].imag]
	if second is not None:
		header += ["v_re", "v_im", "pv_re", "pv_im"]
		columns += [second.states[:, 0].real, second.states[:, 0].imag, second.states[:, 1].real,
					second.states[:, 1].imag]
	rows = np.column_stack(columns).tolist()
	return result, (header, rows)

@log_call("running command")
def cmd_gap_eigs(config: RunConfig) -> CommandResult:
	pair = config.pair()
	reports, rows = list(), list()
	for gap in _gaps(config):
		if config.side == "full":
			report = gap_eigenvalues_fullline(None, pair, gap, config.tol, config.scan_points, config.L, config.N,
											  config.tol_edge)
		else:
			report = gap_report(pair, gap, BoundaryCondition(config.alpha), config.L, config.N, config.x_max,
								config.tol, config.scan_points, config.tol_edge)
		reports.append(report)
		rows.extend((gap[0], gap[1], lam, m) for lam, m in report.scan.rows())
	return {"problem": _problem_dict(config), "moment_class": pair.moment_class, "gaps": reports}, \
		(("gap_lo", "gap_hi", "lambda", "m"), rows)

@log_call("running command")
def cmd_edge_test(config: RunConfig) -> CommandResult:
	pair = config.pair()
	if config.lam is not None:
		edges = [config.lam]
	else:
		config.require("lam_range")
		bands = band_structure(pair.base, *config.lam_range, scan_resolution=config.resolution,
							   tol_edge=config.tol_edge, tol=config.tol)
		edges = [e for e in bands.edges if config.lam_range[0] < e < config.lam_range[1]]
	verdicts = [edge_eigenvalue_test(pair, edge, config.n_max, tol=config.tol, tol_edge=config.tol_edge)
				for edge in edges]
	return {"problem": _problem_dict(config), "edges": verdicts}, None

@log_call("running command")
def cmd_oracle(config: RunConfig) -> CommandResult:
	config.require("gap")
	pair = config.pair()
	L = 40 * pair.period if config.L is None else config.L
	N = int(round(L / 0.01)) if config.N is None else config.N
	if config.side == "full":
		N *= 2
	return oracle_gap_eigenvalues(pair, config.gap, L, N, config.side, config.alpha), None

@log_call("running command")
def cmd_verify(config: RunConfig) -> CommandResult:
	checks = run_bundle(config.bundle or "all", config)
	sys.stdout.write(print_table(checks) + "\n")
	return {"bundle": config.bundle or "all", "problem": _problem_dict(config), "checks": checks,
			"passed": all(c.passed for c in checks)}, None

_HANDLERS: Final[Dict[str, Callable[[RunConfig], CommandResult]]] = {
	"discriminant" : cmd_discriminant,
	"bands"        : cmd_bands,
	"floquet"      : cmd_floquet,
	"perturb-solve": cmd_perturb_solve,
	"gap-eigs"     : cmd_gap_eigs,
	"edge-test"    : cmd_edge_test,
	"oracle"       : cmd_oracle,
	"verify"       : cmd_verify,
}

# ~~~~~~~~~~~~~~~ entry points ~~~~~~~~~~~~~~~

def cmd_dispatch(argv: Sequence[str]) -> int:
	"""
	Parses ``argv``, runs the command and writes its outputs.

	:return: the exit code, see :py:data:`EXIT_OK`, :py:data:`EXIT_PRECONDITION` and :py:data:`EXIT_NUMERICAL`
	"""
	try:
		args = ConsoleArguments(_SHORT_FLAGS, _LONG_FLAGS, argv, multi_value=_MULTI_VALUE)
		if "h" in args or "help" in args or len(args) == 0:
			sys.stdout.write(USAGE)
			return EXIT_OK
		if "q" in args or "quiet" in args:
			set_verbosity(ERROR)
		else:
			set_verbosity(args.count("v", "verbose"))

		config = RunConfig.from_sources(args)
		result, trace = _HANDLERS[config.command](config)
		if config.command != "verify" or config.out is not None:
			write_json(result, config.out)
		if config.csv is not None:
			if trace is None:
				log(f"[hillgap] command {config.command!r} has no trace, --csv ignored", level=WARNING)
			else:
				write_csv(config.csv, *trace)
		if config.command == "verify" and not result["passed"]:
			return EXIT_NUMERICAL
		return EXIT_OK
	except ConfigError as e:
		log(f"{e.filename}:{e.lineno}: {e.msg}" if e.lineno is not None else f"{e.filename}: {e.msg}", level=ERROR)
		return EXIT_PRECONDITION
	except (ConsoleArgsError, PreconditionError) as e:
		log(str(e), level=ERROR)
		return EXIT_PRECONDITION
	except NumericalError as e:
		log(str(e), level=FATAL_ERROR)
		return EXIT_NUMERICAL
	except HillGapError as e:
		log(f"{e.__class__.__name__}: {e}", level=FATAL_ERROR)
		return EXIT_NUMERICAL

def main(argv: Optional[Sequence[str]] = None) -> int:
	""" Console entry point of ``hillgap``. """
	return cmd_dispatch(sys.argv[1:] if argv is None else argv)
