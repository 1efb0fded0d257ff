"""
:Date: 25.02.2026

..	versionadded:: v0.1.0
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

import math
import unittest

import numpy as np
from scipy import optimize

from HillGap.HGUtils import PreconditionError
from HillGap.spectral.HGCoefficients import PerturbedPair, make_builtin
from HillGap.spectral.HGFloquet import band_structure
from HillGap.spectral.HGSpectra import BoundaryCondition, WronskianCount, GapEigenvalueReport, Verdict, \
	gap_eigenvalues_halfline, gap_report, wronskian_certificate, wronskian_zero_count, gap_eigenvalues_fullline, \
	greens_apply, edge_eigenvalue_test, subordinacy_diagnostic

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ TESTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _dirichlet_well_eigenvalue() -> float:
	""" ``-u'' - 2u = λu`` on ``[0, 2)``, ``-u'' = λu`` beyond, ``u(0) = 0``: ``k cot 2k = -√(2 - k²)``. """
	k = optimize.brentq(lambda s: s / math.tan(2 * s) + math.sqrt(2 - s * s), 1.0, 1.2, xtol=1e-14)
	return k * k - 2

def _even_well_eigenvalue() -> float:
	""" The even bound state of the well of depth 2 on ``(-2, 2)`` on the whole line: ``k tan 2k = √(2 - k²)``. """
	k = optimize.brentq(lambda s: s * math.tan(2 * s) - math.sqrt(2 - s * s), 0.3, 0.78, xtol=1e-14)
	return k * k - 2

# noinspection PyTypeChecker
class SpectraTestBase:

	# the free problem with ω = π has the spectrum [0, ∞), so (-3, 0) is a gap with a Jordan edge at 0
	def setUp(self):
		self.free = make_builtin("free")
		self.trivial = PerturbedPair(self.free, self.free, 2)
		self.well = PerturbedPair(self.free, make_builtin("well", base=self.free, depth=-2.0, width=2.0), 2)
		self.gap = (-3.0, 0.0)

	def tearDown(self):
		del self.free, self.trivial, self.well, self.gap

class TestBoundaryCondition(unittest.TestCase):

	def test_normalization(self):
		self.assertEqual(0.0, BoundaryCondition(math.pi).alpha)
		self.assertAlmostEqual(math.pi / 4, BoundaryCondition(-3 * math.pi / 4).alpha)
		self.assertEqual(BoundaryCondition(0.0), BoundaryCondition.dirichlet())
		self.assertEqual(hash(BoundaryCondition(0.0)), hash(BoundaryCondition.dirichlet()))
		self.assertAlmostEqual(math.pi / 2, BoundaryCondition.neumann().alpha)

		with self.assertRaises(PreconditionError):
			BoundaryCondition(math.inf)

	def test_from_state(self):
		self.assertEqual(BoundaryCondition.dirichlet(), BoundaryCondition.from_state([0.0, 2.0]))
		self.assertAlmostEqual(math.pi / 2, BoundaryCondition.from_state([1.0, 0.0]).alpha)
		self.assertAlmostEqual(0.0, float(BoundaryCondition.from_state([0.3, -0.7]).residual([0.3, -0.7])))

		with self.subTest(state="zero"):
			with self.assertRaises(PreconditionError):
				BoundaryCondition.from_state([0.0, 0.0])

		with self.subTest(state="complex"):
			with self.assertRaises(PreconditionError):
				BoundaryCondition.from_state([1.0, 1j])

	def test_residual(self):
		states = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 3.0]])
		np.testing.assert_allclose([1.0, 0.0, 2.0], BoundaryCondition.dirichlet().residual(states), atol=1e-15)
		np.testing.assert_allclose([0.0, 1.0, 3.0], BoundaryCondition.neumann().residual(states), atol=1e-15)

class TestReports(unittest.TestCase):

	def test_wronskian_count(self):
		grid = np.linspace(0.0, 1.0, 5)
		count = WronskianCount(-1.0, -0.5, grid, [1.0, -1.0, 0.0, -2.0, 3.0], 0.5, 0.25, True,
							   BoundaryCondition.dirichlet())
		self.assertEqual(2, count.count)
		self.assertEqual(1.0, count.x_max)
		self.assertEqual((0.0, 1.0), count.rows()[0])
		self.assertEqual(2, count.to_json_dict()["count"])

	def test_agreement(self):
		with self.subTest(report="shooting only"):
			self.assertFalse(GapEigenvalueReport((0.0, 1.0), [], 0).agreement)

		with self.subTest(report="half"):
			report = GapEigenvalueReport((0.0, 1.0), [0.5], 1, count_wronskian=2, count_oracle=1,
										 count_shooting_matched=2)
			self.assertTrue(report.agreement)
			self.assertIsNone(report.coupling_holds)

		with self.subTest(report="mismatch"):
			report = GapEigenvalueReport((0.0, 1.0), [0.5], 1, count_wronskian=1, count_oracle=1,
										 count_shooting_matched=2)
			self.assertFalse(report.agreement)

		with self.subTest(report="full"):
			report = GapEigenvalueReport((0.0, 1.0), [0.2, 0.4, 0.6, 0.8], 4, count_oracle=4, count_left=1,
										 count_right=0, side="full")
			self.assertFalse(report.coupling_holds)
			self.assertFalse(report.agreement)
			self.assertEqual({"shooting": 4, "wronskian": None, "oracle": 4, "shooting_matched": None, "left": 1,
							  "right": 0}, report.to_json_dict()["counts"])

	def test_sorted_eigenvalues(self):
		self.assertEqual((0.2, 0.7), GapEigenvalueReport((0.0, 1.0), [0.7, 0.2], 2).eigenvalues)

# noinspection PyTypeChecker
class TestHalfline(SpectraTestBase, unittest.TestCase):

	def test_shooting(self):
		report = gap_eigenvalues_halfline(self.well, BoundaryCondition.dirichlet(), self.gap, samples=40)
		self.assertEqual(1, report.count_shooting)
		self.assertAlmostEqual(_dirichlet_well_eigenvalue(), report.eigenvalues[0], places=7)
		self.assertIsNone(report.count_oracle)

		with self.subTest(pair="trivial"):
			report = gap_eigenvalues_halfline(self.trivial, BoundaryCondition.dirichlet(), self.gap, samples=40)
			self.assertEqual(0, report.count_shooting)

	def test_report(self):
		report = gap_report(self.well, self.gap, BoundaryCondition.dirichlet(), L=20 * math.pi, samples=40)
		self.assertEqual(1, report.count_shooting)
		self.assertEqual(1, report.count_oracle)
		self.assertEqual(report.count_shooting_matched, report.count_wronskian)
		self.assertTrue(report.agreement)
		self.assertTrue(report.decay_verified)
		self.assertTrue(report.wronskian.reliable)
		self.assertAlmostEqual(report.eigenvalues[0], report.oracle.eigenvalues[0], places=3)

	def test_wronskian(self):
		certificate = wronskian_certificate(self.well, -3.0, -0.5)
		self.assertGreater(certificate.gamma, 0.0)
		self.assertTrue(certificate.reliable)
		self.assertLessEqual(certificate.cutoff, certificate.x_max)
		self.assertEqual(certificate.count, wronskian_zero_count(self.well, -3.0, -0.5))

		with self.subTest(ends="reversed"):
			with self.assertRaises(PreconditionError):
				wronskian_certificate(self.well, -0.5, -3.0)

		with self.subTest(ends="band"):
			with self.assertRaises(PreconditionError):
				wronskian_certificate(self.well, -1.0, 2.0)

	def test_preconditions(self):
		with self.subTest(gap="closed"):
			with self.assertRaises(PreconditionError):
				gap_eigenvalues_halfline(self.well, BoundaryCondition.dirichlet(), (-1.0, -1.0))

		with self.subTest(gap="band"):
			with self.assertRaises(PreconditionError):
				gap_eigenvalues_halfline(self.well, BoundaryCondition.dirichlet(), (-1.0, 2.0))

# noinspection PyTypeChecker
class TestFullline(SpectraTestBase, unittest.TestCase):

	def test_well(self):
		report = gap_eigenvalues_fullline(None, self.well, self.gap, samples=40, L=10 * math.pi, N=1000)
		self.assertEqual("full", report.side)
		# the well is even, so the Dirichlet state of each half-line is the odd state of the full line
		self.assertEqual(2, report.count_shooting)
		np.testing.assert_allclose([_even_well_eigenvalue(), _dirichlet_well_eigenvalue()], report.eigenvalues,
								   atol=1e-7)
		self.assertEqual(1, report.count_left)
		self.assertEqual(1, report.count_right)
		self.assertTrue(report.coupling_holds)
		self.assertEqual(2, report.count_oracle)

	def test_bases(self):
		mathieu = make_builtin("mathieu", gamma=1.0)
		with self.assertRaises(PreconditionError):
			gap_eigenvalues_fullline(PerturbedPair(mathieu, mathieu, 2), self.well, self.gap)

# noinspection PyTypeChecker
class TestGreens(SpectraTestBase, unittest.TestCase):

	def test_closed_form(self):
		# -s'' + s = e^{-2x}, s(0) = 0, s decaying
		result = greens_apply(self.trivial, -1.0, lambda x: np.exp(-2 * x), bc=BoundaryCondition.dirichlet())
		expected = (np.exp(-result.grid) - np.exp(-2 * result.grid)) / 3
		np.testing.assert_allclose(expected, result.values, atol=1e-7)
		self.assertLess(result.residual_sup, 1e-5)
		self.assertEqual(result.grid.shape, result.flux.shape)

	def test_default_solution(self):
		# without a boundary condition the growing solution adds a multiple of the decaying one
		result = greens_apply(self.trivial, -1.0, lambda x: np.exp(-2 * x))
		x = result.grid
		inner = x <= 5.0
		particular = -np.exp(-2 * x[inner]) / 3
		deviation = (result.values[inner] - particular) * np.exp(x[inner])
		self.assertLess(float(np.ptp(deviation)), 1e-6)
		self.assertLess(result.residual_sup, 1e-5)

	def test_preconditions(self):
		with self.subTest(lam="band"):
			with self.assertRaises(PreconditionError):
				greens_apply(self.trivial, 2.0, lambda x: np.exp(-x))

		with self.subTest(g="shape"):
			with self.assertRaises(PreconditionError):
				greens_apply(self.trivial, -1.0, np.ones(3))

# noinspection PyTypeChecker
class TestEdges(SpectraTestBase, unittest.TestCase):

	def test_trivial(self):
		verdict = edge_eigenvalue_test(self.trivial, 0.0, n_max=6, angles=4)
		self.assertEqual(Verdict.NO_L2_SOLUTION, verdict.verdict)
		self.assertEqual(0, verdict.n0)
		self.assertEqual((4, 7), verdict.cell_integrals.shape)
		self.assertEqual(4, verdict.base_bounds.size)

	def test_mathieu(self):
		mathieu = make_builtin("mathieu", gamma=1.0)
		pair = PerturbedPair(mathieu, make_builtin("gauss", base=mathieu, amplitude=1.0, width=1.0), 2)
		edge = band_structure(mathieu, -1.0, 1.0).edges[0]
		verdict = edge_eigenvalue_test(pair, edge)
		self.assertEqual(Verdict.NO_L2_SOLUTION, verdict.verdict)
		self.assertLessEqual(verdict.n0, 10)

	def test_preconditions(self):
		with self.subTest(lam="gap"):
			with self.assertRaises(PreconditionError):
				edge_eigenvalue_test(self.well, -1.0)

		with self.subTest(moment_class=1):
			with self.assertRaises(PreconditionError):
				edge_eigenvalue_test(PerturbedPair(self.free, self.well.pert, 1), 0.0)

		with self.subTest(n_max=-1):
			with self.assertRaises(PreconditionError):
				edge_eigenvalue_test(self.trivial, 0.0, n_max=-1)

# noinspection PyTypeChecker
class TestSubordinacy(SpectraTestBase, unittest.TestCase):

	def test_trivial(self):
		# cos and sin of √2 x carry the same mass asymptotically
		report = subordinacy_diagnostic(self.trivial, 2.0, [10 * math.pi, 20 * math.pi], n_cells=20)
		self.assertEqual((2, 20), report.cells.shape)
		for ratio in report.ratios:
			self.assertGreater(ratio, 0.8)
			self.assertLess(ratio, 1.25)
		self.assertTrue(report.cells_bounded)

	def test_well(self):
		report = subordinacy_diagnostic(self.well, 2.0, [10 * math.pi, 20 * math.pi], n_cells=20)
		self.assertTrue(np.all(np.isfinite(report.ratios)))
		self.assertTrue(np.all(report.ratios > 0))

	def test_preconditions(self):
		with self.subTest(lam="gap"):
			with self.assertRaises(PreconditionError):
				subordinacy_diagnostic(self.well, -1.0, [10 * math.pi])

		for x_list in ([], [0.0, 10 * math.pi], [-math.pi]):
			with self.subTest(x_list=x_list):
				with self.assertRaises(PreconditionError):
					subordinacy_diagnostic(self.trivial, 2.0, x_list, n_cells=4)

		with self.subTest(n_cells=0):
			with self.assertRaises(PreconditionError):
				subordinacy_diagnostic(self.trivial, 2.0, [10 * math.pi], n_cells=0)

if __name__ == "__main__":
	pass
