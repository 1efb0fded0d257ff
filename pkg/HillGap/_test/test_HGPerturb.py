"""
:Date: 24.02.2026

..	versionadded:: v0.1.0
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

import math
import unittest

import numpy as np

from HillGap.HGUtils import PreconditionError
from HillGap.spectral.HGCoefficients import PerturbedPair, make_builtin
from HillGap.spectral.HGPerturb import SolutionKind, MIN_CELLS, TAIL_FRACTION, interval_integrals, \
	choose_truncation, volterra_setup, volterra_apply, build_decaying_solution, build_second_solution, \
	march_solution, gronwall_envelope, neumann_terms, ode_residual, propagation_defect, solution_wronskian

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ TESTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

# noinspection PyTypeChecker
class PerturbTestBase:

	# free base with ω = π, a well of depth -2 on [0, 2) and λ = -1 in the gap below the spectrum
	def setUp(self):
		self.free = make_builtin("free")
		self.well = PerturbedPair(self.free, make_builtin("well", base=self.free, depth=-2.0, width=2.0), 2)
		self.trivial = PerturbedPair(self.free, self.free, 2)
		self.mathieu = make_builtin("mathieu", gamma=1.0)
		self.exp = PerturbedPair(self.mathieu, make_builtin("exp", base=self.mathieu, amplitude=-1.0, rate=1.0), 2)
		self.setup = volterra_setup(self.well, -1.0)

	def tearDown(self):
		del self.free, self.well, self.trivial, self.mathieu, self.exp, self.setup

# noinspection PyTypeChecker
class TestSetup(PerturbTestBase, unittest.TestCase):

	def test_interval_integrals(self):
		x = np.linspace(0.0, 2.0, 21)
		pieces = interval_integrals(x, x ** 3)
		np.testing.assert_allclose((x[1:] ** 4 - x[:-1] ** 4) / 4, pieces, atol=1e-13)
		self.assertAlmostEqual(4.0, float(np.sum(pieces)), places=12)

		with self.subTest(kind="complex"):
			pieces = interval_integrals(x, (1 + 2j) * x)
			self.assertAlmostEqual(2 + 4j, complex(np.sum(pieces)), places=12)

	def test_truncation(self):
		with self.subTest(pair="trivial"):
			x_max, tail, caveats = choose_truncation(self.trivial, -1.0)
			self.assertAlmostEqual(MIN_CELLS * math.pi, x_max)
			self.assertEqual(0.0, tail)

		with self.subTest(pair="exp"):
			x_max, tail, caveats = choose_truncation(self.exp, -0.8, tol=1e-10)
			self.assertLessEqual(tail, TAIL_FRACTION * 1e-10)
			self.assertAlmostEqual(0.0, math.remainder(x_max, math.pi), places=9)
			self.assertGreater(x_max, -math.log(TAIL_FRACTION * 1e-10) - 1)
			self.assertEqual((), caveats)

	def test_grid(self):
		grid = self.setup.grid
		self.assertEqual(0.0, grid[0])
		self.assertEqual(self.setup.x_max, grid[-1])
		self.assertTrue(np.all(np.diff(grid) > 0))
		self.assertLessEqual(float(np.max(np.diff(grid))), 0.01 + 1e-12)
		self.assertIn(2.0, grid)
		self.assertEqual(2, len(self.setup.segment_bounds))

	def test_estimate(self):
		# E = 2 for the free problem at λ = -1, ∫‖B‖ = 4
		self.assertAlmostEqual(2.0, self.setup.kernel_constant, places=6)
		self.assertAlmostEqual(4.0, self.setup.b_integral, places=6)
		self.assertAlmostEqual(8.0, self.setup.neumann_estimate, places=5)

	def test_apply_shape(self):
		with self.assertRaises(PreconditionError):
			volterra_apply(self.setup, np.zeros((3, 2)))
		zero = volterra_apply(self.setup, np.zeros((self.setup.size, 2)))
		np.testing.assert_array_equal(np.zeros((self.setup.size, 2)), zero)

# noinspection PyTypeChecker
class TestDecayingSolution(PerturbTestBase, unittest.TestCase):

	def test_trivial(self):
		setup = volterra_setup(self.trivial, -1.0)
		solution = build_decaying_solution(setup)
		np.testing.assert_allclose(setup.base_states(SolutionKind.U1_DECAYING), solution.states, atol=1e-14)
		self.assertEqual(1, solution.iterations)
		self.assertEqual(0.0, solution.pixel_tail)

	def test_well_beyond_support(self):
		solution = build_decaying_solution(self.setup, method="auto")
		x = self.setup.grid
		outside = x >= 2.0
		base = self.setup.base_states(SolutionKind.U1_DECAYING)
		deviation = np.exp(x[outside]) * np.linalg.norm(solution.states[outside] - base[outside], axis=-1)
		self.assertLess(float(np.max(deviation)), 1e-8)
		self.assertLess(solution.residual_sup, 1e-6)

	def test_methods_agree(self):
		neumann = build_decaying_solution(self.setup, method="neumann")
		march = march_solution(self.setup)
		self.assertEqual("neumann", neumann.method)
		self.assertEqual("march", march.method)
		weight = self.setup.weight(SolutionKind.U1_DECAYING)
		difference = weight * np.linalg.norm(neumann.states - march.states, axis=-1)
		self.assertLess(float(np.max(difference)), 1e-7)

	def test_diagnostics(self):
		solution = build_decaying_solution(self.setup, method="auto")
		self.assertLess(ode_residual(self.setup, solution.states), 1e-6)
		self.assertLess(propagation_defect(self.setup, solution), 1e-6)
		self.assertTrue(gronwall_envelope(self.setup, solution).holds)

		report = neumann_terms(self.setup, 6)
		self.assertEqual(7, len(report.norms))
		self.assertTrue(report.bound_holds)
		self.assertTrue(report.ratio_holds)

	def test_mathieu_gap(self):
		setup = volterra_setup(self.exp, 0.8)
		solution = build_decaying_solution(setup, method="auto")
		self.assertLess(solution.residual_sup, 1e-6)
		self.assertLess(solution.pixel_tail, 1e-6)
		self.assertTrue(neumann_terms(setup, 6).bound_holds)

	def test_deviation_shrinks_with_truncation(self):
		# the perturbation decays like e^{-x}, so the deviation left in the last quarter of [a, X] falls with X
		tails = list()
		for x_max in (2 * math.pi, 4 * math.pi, 6 * math.pi):
			with self.subTest(x_max=x_max):
				solution = build_decaying_solution(volterra_setup(self.exp, 0.8, x_max=x_max), method="auto")
				self.assertLess(solution.residual_sup, 1e-6)
				tails.append(solution.pixel_tail)
		self.assertGreater(tails[0], tails[1])
		self.assertGreater(tails[1], tails[2])

	def test_preconditions(self):
		with self.subTest(error="method"):
			with self.assertRaises(PreconditionError):
				build_decaying_solution(self.setup, method="euler")

		with self.subTest(error="Jordan edge with moment class 0"):
			pair = PerturbedPair(self.free, self.well.pert, 0)
			setup = volterra_setup(pair, 0.0)
			self.assertTrue(setup.jordan)
			with self.assertRaises(PreconditionError):
				build_decaying_solution(setup)
			with self.assertRaises(PreconditionError):
				build_second_solution(setup)

		with self.subTest(error="negative term count"):
			with self.assertRaises(PreconditionError):
				neumann_terms(self.setup, -1)

# noinspection PyTypeChecker
class TestSecondSolution(PerturbTestBase, unittest.TestCase):

	def test_gap_forward(self):
		decaying = build_decaying_solution(self.setup, method="auto")
		second = build_second_solution(self.setup, method="auto", decaying=decaying)
		self.assertEqual("forward", second.method)
		wronskian = solution_wronskian(decaying, second)
		self.assertGreater(abs(wronskian[0]), 0.0)
		np.testing.assert_allclose(wronskian[0], wronskian, rtol=1e-6)

	def test_band(self):
		setup = volterra_setup(self.exp, 0.5 * (-0.45514 - 0.11025))
		decaying = build_decaying_solution(setup, method="auto")
		second = build_second_solution(setup, method="auto", decaying=decaying)
		wronskian = solution_wronskian(decaying, second)
		np.testing.assert_allclose(wronskian[0], wronskian, rtol=1e-6, atol=1e-9)

	def test_trivial_band(self):
		setup = volterra_setup(self.trivial, 2.0)
		second = build_second_solution(setup)
		self.assertEqual(SolutionKind.V1_SECOND, second.kind)
		np.testing.assert_allclose(setup.base_states(SolutionKind.V1_SECOND), second.states, atol=1e-12)

	def test_band_edge(self):
		# λ = 0 is a Jordan edge of the free problem
		pair = PerturbedPair(self.free, make_builtin("gauss", base=self.free, amplitude=1.0, width=1.0), 2)
		setup = volterra_setup(pair, 0.0)
		self.assertTrue(setup.jordan)
		self.assertEqual(2, setup.k)
		decaying = build_decaying_solution(setup, method="auto")
		second = build_second_solution(setup, method="auto", decaying=decaying)
		wronskian = solution_wronskian(decaying, second)
		self.assertGreater(abs(wronskian[0]), 1e-3)
		np.testing.assert_allclose(wronskian[0], wronskian, rtol=1e-5, atol=1e-9)

		with self.subTest(moment_class=1):
			with self.assertRaises(PreconditionError):
				build_second_solution(volterra_setup(PerturbedPair(self.free, pair.pert, 1), 0.0))

	def test_grid_mismatch(self):
		other = volterra_setup(self.well, -1.0, x_max=20.0)
		with self.assertRaises(PreconditionError):
			solution_wronskian(build_decaying_solution(self.setup), build_decaying_solution(other))

if __name__ == "__main__":
	pass
