"""
:Date: 26.02.2026

..	versionadded:: v0.1.0
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

import contextlib
import io
import json
import math
import os
import tempfile
import unittest
from unittest import mock

from HillGap.HGCLI import EXIT_OK, EXIT_PRECONDITION, EXIT_NUMERICAL, RunConfig, cmd_dispatch, default_moment_class, \
	_SHORT_FLAGS, _LONG_FLAGS, _MULTI_VALUE
from HillGap.HGDecorators import timed_return
from HillGap.HGIO import ConsoleArguments
from HillGap.HGLogger import set_verbosity
from HillGap.HGUtils import HillGapError, PreconditionError, NumericalError, ConfigError
from HillGap.HGVerify import BUNDLES
from HillGap.spectral.HGCoefficients import make_builtin

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ TESTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _config(*argv: str) -> RunConfig:
	return RunConfig.from_sources(ConsoleArguments(_SHORT_FLAGS, _LONG_FLAGS, list(argv), multi_value=_MULTI_VALUE))

# noinspection PyTypeChecker
class CLITestBase:

	def setUp(self):
		self.directory = tempfile.TemporaryDirectory()
		self.out, self.err = io.StringIO(), io.StringIO()

	def tearDown(self):
		set_verbosity(0)
		self.directory.cleanup()
		del self.directory, self.out, self.err

	def path(self, name: str) -> str:
		return os.path.join(self.directory.name, name)

	def write(self, name: str, text: str) -> str:
		with open(self.path(name), "w", encoding="utf-8") as f:
			f.write(text)
		return self.path(name)

	def dispatch(self, *argv: str) -> int:
		with contextlib.redirect_stdout(self.out), contextlib.redirect_stderr(self.err):
			return cmd_dispatch(list(argv))

# noinspection PyTypeChecker
class TestRunConfig(CLITestBase, unittest.TestCase):

	def test_flags(self):
		config = _config("bands", "--family", "mathieu+well", "--gamma", "2", "--range", "-1", "5", "--depth", "-1")
		self.assertEqual("bands", config.command)
		self.assertEqual("mathieu", config.family)
		self.assertEqual("square_well_pert", config.pert)
		self.assertDictEqual({"gamma": 2.0}, config.base_params)
		self.assertDictEqual({"depth": -1.0}, config.pert_params)
		self.assertEqual((-1.0, 5.0), config.lam_range)
		self.assertEqual("half", config.side)

	def test_pi_values(self):
		config = _config("floquet", "--family", "free", "--omega", "pi/2", "--lambda=2pi")
		self.assertAlmostEqual(math.pi / 2, config.base_params["omega"])
		self.assertAlmostEqual(2 * math.pi, config.lam)
		self.assertAlmostEqual(math.pi / 2, config.base_model().period)

	def test_config_file(self):
		path = self.write("run.toml", '[base]\nfamily = "mathieu"\ngamma = 1.0\n\n'
									  '[perturbation]\nfamily = "gauss"\namplitude = -1.0\nmoment_class = 1\n\n'
									  '[run]\ncommand = "gap-eigs"\ngap = [-0.1, 1.8]\nscan_points = 50\n')
		config = _config("--config", path)
		self.assertEqual("gap-eigs", config.command)
		self.assertEqual("gauss_pert", config.pert)
		self.assertEqual(1, config.moment_class)
		self.assertEqual((-0.1, 1.8), config.gap)
		self.assertEqual(50, config.scan_points)

		with self.subTest(source="flags win"):
			config = _config("oracle", "--config", path, "--gamma", "2", "--scan-points", "10")
			self.assertEqual("oracle", config.command)
			self.assertEqual(2.0, config.base_params["gamma"])
			self.assertEqual(10, config.scan_points)
			self.assertEqual(1, config.pair().moment_class)

	def test_pair(self):
		with self.subTest(pert=None):
			pair = _config("floquet", "--family", "mathieu").pair()
			self.assertTrue(pair.is_trivial)

		with self.subTest(pert="power"):
			pair = _config("gap-eigs", "--family", "free+power", "--power", "2.5").pair()
			self.assertEqual(1, pair.moment_class)

		with self.subTest(pert="stray parameters"):
			with self.assertRaises(PreconditionError):
				_config("gap-eigs", "--family", "free", "--depth", "-1").pair()

		with self.subTest(family="perturbation as base"):
			with self.assertRaises(PreconditionError):
				_config("bands", "--family", "gauss").base_model()

	def test_default_moment_class(self):
		free = make_builtin("free")
		for power, expected in ((1.5, 0), (2.5, 1), (3.5, 2), (10.0, 2)):
			with self.subTest(power=power):
				self.assertEqual(expected, default_moment_class(make_builtin("power", base=free, power=power)))
		self.assertEqual(2, default_moment_class(make_builtin("well", base=free)))

	def test_require(self):
		config = _config("floquet", "--family", "free")
		with self.assertRaises(PreconditionError) as context:
			config.require("lam")
		self.assertIn("--lambda", str(context.exception))

	def test_errors(self):
		with self.subTest(error="command"):
			with self.assertRaises(PreconditionError):
				_config("--family", "free")

		with self.subTest(error="perturbation"):
			with self.assertRaises(PreconditionError):
				_config("bands", "--family", "free+bump")

		with self.subTest(error="value"):
			with self.assertRaises(PreconditionError):
				_config("floquet", "--family", "free", "--lambda", "many")

		with self.subTest(error="range"):
			with self.assertRaises(PreconditionError):
				_config("bands", "--family", "free", "--range", "5", "-1")

		with self.subTest(error="side"):
			with self.assertRaises(PreconditionError):
				_config("oracle", "--family", "free", "--side", "left")

		with self.subTest(error="arguments"):
			with self.assertRaises(PreconditionError):
				_config("bands", "extra", "--family", "free")

		with self.subTest(error="config"):
			path = self.write("bad.toml", '[run]\ncommand = "bands"\nbogus = 1\n')
			with self.assertRaises(ConfigError) as context:
				_config("--config", path)
			self.assertEqual(3, context.exception.lineno)

# noinspection PyTypeChecker
class TestDispatch(CLITestBase, unittest.TestCase):

	def test_help(self):
		for argv in ((), ("-h",), ("bands", "--help")):
			with self.subTest(argv=argv):
				self.assertEqual(EXIT_OK, self.dispatch(*argv))
				self.assertIn("usage: hillgap", self.out.getvalue())

	def test_discriminant(self):
		self.assertEqual(EXIT_OK, self.dispatch("discriminant", "--family", "free", "--lambda=-1"))
		result = json.loads(self.out.getvalue())
		self.assertAlmostEqual(2 * math.cosh(math.pi), result["D"], places=6)
		self.assertEqual("hyperbolic", result["structure"])

	def test_csv(self):
		path = self.path("sweep.csv")
		code = self.dispatch("discriminant", "--family", "free", "--range", "0", "1", "--resolution", "10",
							 "--csv", path, "--out", self.path("sweep.json"))
		self.assertEqual(EXIT_OK, code)
		with open(path, encoding="utf-8") as f:
			lines = f.read().splitlines()
		self.assertEqual("lambda,D", lines[0])
		self.assertEqual(12, len(lines))
		self.assertEqual("", self.out.getvalue())

	def test_bands(self):
		self.assertEqual(EXIT_OK, self.dispatch("bands", "--family", "mathieu", "--range", "-1", "5"))
		result = json.loads(self.out.getvalue())
		self.assertEqual(5, len(result["edges"]))
		self.assertAlmostEqual(-0.45514, result["edges"][0], places=4)

	def test_exit_codes(self):
		with self.subTest(error="missing option"):
			self.assertEqual(EXIT_PRECONDITION, self.dispatch("floquet", "--family", "free"))

		with self.subTest(error="unknown flag"):
			self.assertEqual(EXIT_PRECONDITION, self.dispatch("bands", "--bogus"))

		with self.subTest(error="unknown command"):
			self.assertEqual(EXIT_PRECONDITION, self.dispatch("spectrum", "--family", "free"))

		with self.subTest(error="unknown bundle"):
			self.assertEqual(EXIT_PRECONDITION, self.dispatch("verify", "thm9"))

		with self.subTest(error="config"):
			path = self.write("bad.toml", '[run]\ncommand = "bands"\n\n[base]\nfamily = 3\n')
			self.assertEqual(EXIT_PRECONDITION, self.dispatch("--config", path))
			self.assertIn("bad.toml:5:", self.err.getvalue())

	def test_oracle(self):
		code = self.dispatch("oracle", "--family", "free+well", "--gap", "-3", "0", "--side", "full", "--L", "10pi",
							 "--N", "1500")
		self.assertEqual(EXIT_OK, code)
		self.assertEqual(2, len(json.loads(self.out.getvalue())["eigenvalues"]))

	def test_floquet(self):
		self.assertEqual(EXIT_OK, self.dispatch("floquet", "--family", "free", "--lambda=-1"))
		result = json.loads(self.out.getvalue())
		self.assertEqual("hyperbolic", result["monodromy"]["structure"])
		self.assertEqual("hyperbolic", result["solutions"]["structure"])
		self.assertAlmostEqual(2 * math.cosh(math.pi), result["monodromy"]["D"], places=6)

	def test_perturb_solve(self):
		path = self.path("solution.csv")
		code = self.dispatch("perturb-solve", "--family", "free+well", "--depth", "-2", "--width", "2", "--lambda=-1",
							 "--csv", path)
		self.assertEqual(EXIT_OK, code)
		result = json.loads(self.out.getvalue())
		self.assertEqual("u1_decaying", result["decaying"]["kind"])
		self.assertEqual("forward", result["second"]["method"])
		self.assertLess(result["decaying"]["residual_sup"], 1e-6)
		self.assertTrue(result["gronwall"]["holds"])
		with open(path, encoding="utf-8") as f:
			lines = f.read().splitlines()
		self.assertEqual("x,u_re,u_im,pu_re,pu_im,v_re,v_im,pv_re,pv_im", lines[0])
		self.assertEqual(result["setup"]["grid_size"] + 1, len(lines))

	def test_gap_eigs(self):
		code = self.dispatch("gap-eigs", "--family", "free+well", "--depth", "-2", "--width", "2", "--gap", "-3", "0",
							 "--L", "20pi", "--scan-points", "40")
		self.assertEqual(EXIT_OK, code)
		result = json.loads(self.out.getvalue())
		self.assertEqual(2, result["moment_class"])
		self.assertEqual("square_well_pert", result["problem"]["pert"])
		report = result["gaps"][0]
		self.assertEqual(1, report["counts"]["shooting"])
		self.assertEqual(1, report["counts"]["oracle"])
		self.assertEqual(report["counts"]["shooting_matched"], report["counts"]["wronskian"])
		self.assertTrue(report["agreement"])

	def test_edge_test(self):
		self.assertEqual(EXIT_OK, self.dispatch("edge-test", "--family", "free", "--lambda", "0", "--n-max", "6"))
		verdict, = json.loads(self.out.getvalue())["edges"]
		self.assertEqual("no_L2_solution", verdict["verdict"])
		self.assertLessEqual(verdict["n0"], 6)

		with self.subTest(error="moment class"):
			code = self.dispatch("edge-test", "--family", "free+power", "--power", "2.5", "--lambda", "0")
			self.assertEqual(EXIT_PRECONDITION, code)

	def test_deterministic(self):
		argv = ("perturb-solve", "--family", "mathieu+exp", "--lambda", "0.8", "--seed", "3")
		for name in ("first.json", "second.json"):
			self.assertEqual(EXIT_OK, self.dispatch(*argv, "--out", self.path(name)))
		with open(self.path("first.json"), "rb") as first, open(self.path("second.json"), "rb") as second:
			self.assertEqual(first.read(), second.read())

		with self.subTest(output="stdout"):
			self.out = io.StringIO()
			self.dispatch("discriminant", "--family", "mathieu", "--range", "-1", "2", "--resolution", "5")
			once = self.out.getvalue()
			self.out = io.StringIO()
			self.dispatch("discriminant", "--family", "mathieu", "--range", "-1", "2", "--resolution", "5")
			self.assertEqual(once, self.out.getvalue())
			self.assertNotEqual("", once)

# noinspection PyTypeChecker
class TestFailures(CLITestBase, unittest.TestCase):

	def test_numerical_error(self):
		def diverging(config: RunConfig):
			raise NumericalError("Neumann iteration did not converge", lam=config.lam)

		with mock.patch.dict("HillGap.HGCLI._HANDLERS", {"floquet": diverging}):
			self.assertEqual(EXIT_NUMERICAL, self.dispatch("floquet", "--family", "free", "--lambda", "1"))
		self.assertIn("[Fatal Error]", self.err.getvalue())
		self.assertIn("did not converge", self.err.getvalue())
		self.assertEqual("", self.out.getvalue())

	def test_library_error(self):
		def failing(config: RunConfig):
			raise HillGapError("unexpected state")

		with mock.patch.dict("HillGap.HGCLI._HANDLERS", {"bands": failing}):
			self.assertEqual(EXIT_NUMERICAL, self.dispatch("bands", "--family", "free", "--range", "0", "1"))
		self.assertIn("HillGapError: unexpected state", self.err.getvalue())

	def test_failed_bundle(self):
		@timed_return
		def failing(seed: int, problem=None):
			raise NumericalError("step size underflow", seed=seed)

		with mock.patch.dict(BUNDLES, {"thm2": (("failing", failing),)}):
			code = self.dispatch("verify", "thm2", "--out", self.path("verify.json"))
		self.assertEqual(EXIT_NUMERICAL, code)
		self.assertIn("FAIL", self.out.getvalue())
		with open(self.path("verify.json"), encoding="utf-8") as f:
			result = json.load(f)
		self.assertFalse(result["passed"])
		self.assertIn("NumericalError", result["checks"][0]["detail"])

# noinspection PyTypeChecker
class TestVerifyProblem(CLITestBase, unittest.TestCase):

	def setUp(self):
		super().setUp()
		self.seen = list()

		@timed_return
		def record(seed: int, problem=None):
			self.seen.append((seed, problem))
			return True, "recorded"

		self.patch = mock.patch.dict(BUNDLES, {"thm2": (("record", record),), "thm3": (("record", record),)})
		self.patch.start()

	def tearDown(self):
		self.patch.stop()
		super().tearDown()
		del self.seen, self.patch

	def test_builtin(self):
		self.assertEqual(EXIT_OK, self.dispatch("verify", "thm2"))
		self.assertListEqual([(0, None)], self.seen)

	def test_given_problem(self):
		code = self.dispatch("verify", "thm2", "--family", "kronig_penney+gauss", "--range", "0", "20", "--seed", "5",
							 "--out", self.path("verify.json"))
		self.assertEqual(EXIT_OK, code)
		(seed, problem), = self.seen
		self.assertEqual(5, seed)
		self.assertEqual("kronig_penney+gauss_pert", problem.label)
		self.assertEqual((0.0, 20.0), problem.lam_range)
		with open(self.path("verify.json"), encoding="utf-8") as f:
			result = json.load(f)
		self.assertEqual("kronig_penney", result["problem"]["family"])
		self.assertEqual("gauss_pert", result["problem"]["pert"])

	def test_config_problem(self):
		path = self.write("verify.toml", '[base]\nfamily = "mathieu"\ngamma = 2.0\n\n'
										 '[perturbation]\nfamily = "well"\ndepth = -1.0\n\n'
										 '[run]\ncommand = "verify"\nbundle = "thm2"\n')
		self.assertEqual(EXIT_OK, self.dispatch("--config", path))
		(_, problem), = self.seen
		self.assertEqual("mathieu+square_well_pert", problem.label)
		self.assertEqual(2.0, problem.pair.base.params["gamma"])

	def test_edge_bundle_moment_class(self):
		code = self.dispatch("verify", "thm3", "--family", "mathieu+power", "--power", "2.5")
		self.assertEqual(EXIT_PRECONDITION, code)
		self.assertListEqual([], self.seen)
		self.assertIn("moment class 2", self.err.getvalue())

	def test_incomplete_problem(self):
		self.assertEqual(EXIT_PRECONDITION, self.dispatch("verify", "thm2", "--pert", "gauss"))
		self.assertListEqual([], self.seen)

if __name__ == "__main__":
	pass
