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

from HillGap.HGUtils import PreconditionError, ImmutableError
from HillGap.spectral.HGCoefficients import PerturbedPair, make_builtin
from HillGap.spectral.HGOracle import MIN_NODES, TridiagonalPencil, discretize, sturm_count, \
	oracle_gap_eigenvalues, counting_profile, richardson_ratio

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ TESTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

# noinspection PyTypeChecker
class OracleTestBase:

	def setUp(self):
		self.free = make_builtin("free")
		self.well = PerturbedPair(self.free, make_builtin("well", base=self.free, depth=-2.0, width=2.0), 2)
		self.gauss = PerturbedPair(self.free, make_builtin("gauss", base=self.free, amplitude=-2.0, width=1.0), 2)

	def tearDown(self):
		del self.free, self.well, self.gauss

# noinspection PyTypeChecker
class TestPencil(OracleTestBase, unittest.TestCase):

	def test_free_dirichlet(self):
		# constant coefficients reproduce the discrete sine spectrum exactly
		n = 99
		pencil = discretize(self.free, (0.0, math.pi), n)
		h = math.pi / (n + 1)
		expected = (2 - 2 * np.cos(np.arange(1, n + 1) * math.pi / (n + 1))) / h ** 2
		np.testing.assert_allclose(expected, pencil.eigenvalues(), rtol=1e-10)
		np.testing.assert_allclose([1.0, 4.0, 9.0], pencil.eigenvalues()[:3], rtol=1e-2)
		self.assertEqual(n, pencil.size)
		self.assertAlmostEqual(h, pencil.h)
		self.assertAlmostEqual(h, float(pencil.nodes[0]))

	def test_select_range(self):
		pencil = discretize(self.free, (0.0, math.pi), 99)
		values = pencil.eigenvalues((3.0, 10.0))
		self.assertEqual(2, values.size)

		values, vectors = pencil.eigenpairs((0.0, 5.0))
		self.assertEqual((99, 2), vectors.shape)
		np.testing.assert_allclose([1.0, 1.0], np.sum(pencil.weight[:, None] * vectors ** 2, axis=0), rtol=1e-10)

	def test_robin(self):
		# u'(0) = 0 and u(π) = 0 give the eigenvalues (n + 1/2)²
		pencil = discretize(self.free, (0.0, math.pi), 200, alpha=math.pi / 2)
		self.assertEqual(201, pencil.size)
		self.assertEqual(0.0, float(pencil.nodes[0]))
		np.testing.assert_allclose([0.25, 2.25, 6.25], pencil.eigenvalues()[:3], atol=1e-3)

	def test_jumps(self):
		# the well of depth -2 on (-2, 2) is integrated exactly over the dual cells
		n = 333
		pencil = discretize(self.well, (-5.0, 5.0), n)
		self.assertAlmostEqual(-8.0, float(np.sum(pencil.diag)) - 2 * n / pencil.h, places=8)
		self.assertAlmostEqual(10.0 - pencil.h, float(np.sum(pencil.weight)), places=10)

	def test_scaled(self):
		pencil = discretize(self.free, (0.0, math.pi), 99)
		np.testing.assert_allclose(pencil.eigenvalues() / 2, pencil.scaled(2.0).eigenvalues(), rtol=1e-12)

		with self.assertRaises(PreconditionError):
			pencil.scaled(0.0)

	def test_immutable(self):
		pencil = discretize(self.free, (0.0, math.pi), 99)
		with self.assertRaises(ValueError):
			pencil.diag[0] = 1.0
		with self.assertRaises(ImmutableError):
			pencil.h = 1.0

	def test_preconditions(self):
		with self.subTest(n=MIN_NODES - 1):
			with self.assertRaises(PreconditionError):
				discretize(self.free, (0.0, 1.0), MIN_NODES - 1)

		with self.subTest(interval="empty"):
			with self.assertRaises(PreconditionError):
				discretize(self.free, (1.0, 1.0), 100)

		with self.subTest(sizes="inconsistent"):
			with self.assertRaises(PreconditionError):
				TridiagonalPencil(np.ones(3), np.ones(3), np.ones(3), 0.1, (0.0, 1.0), np.ones(3))

		with self.subTest(weight="negative"):
			with self.assertRaises(PreconditionError):
				TridiagonalPencil(np.ones(3), np.ones(2), [1.0, -1.0, 1.0], 0.1, (0.0, 1.0), np.ones(3))

# noinspection PyTypeChecker
class TestSturm(OracleTestBase, unittest.TestCase):

	def test_count(self):
		pencil = discretize(self.free, (0.0, math.pi), 99)
		values = pencil.eigenvalues()
		for lam, expected in ((0.5, 0), (4.5, 2), (50.0, 7), (1e6, 99)):
			with self.subTest(lam=lam):
				self.assertEqual(expected, sturm_count(pencil, lam))
				self.assertEqual(int(np.sum(values < lam)), sturm_count(pencil, lam))

	def test_profile(self):
		# Dirichlet eigenvalues on [-π, π] are (n/2)²
		profile = counting_profile(self.free, math.pi, 200, [-1.0, 1.1, 4.5])
		np.testing.assert_array_equal([0, 2, 4], profile)

# noinspection PyTypeChecker
class TestGapEigenvalues(OracleTestBase, unittest.TestCase):

	def test_halfline_well(self):
		report = oracle_gap_eigenvalues(self.well, (-3.0, 0.0), 10 * math.pi, 3000, side="half", alpha=0.0)
		self.assertEqual(1, report.count)
		self.assertAlmostEqual(-0.7534, report.eigenvalues[0], places=2)
		self.assertEqual((), report.discarded_artifacts)
		self.assertEqual("half", report.side)
		self.assertEqual(0.0, report.to_json_dict()["alpha"])

	def test_fullline_well(self):
		report = oracle_gap_eigenvalues(self.well, (-3.0, 0.0), 10 * math.pi, 3000)
		self.assertEqual(2, report.count)
		self.assertIsNone(report.to_json_dict()["alpha"])

	def test_free(self):
		report = oracle_gap_eigenvalues(self.free, (-3.0, 0.0), 10 * math.pi, 1000)
		self.assertEqual(0, report.count)
		self.assertTrue(report.stable)

	def test_richardson(self):
		# smooth coefficients converge with second order
		ratio = richardson_ratio(self.gauss, (-3.0, 0.0), 10.0, 200)
		self.assertGreater(ratio, 3.0)
		self.assertLess(ratio, 5.0)

		with self.assertRaises(PreconditionError):
			richardson_ratio(self.free, (-3.0, 0.0), 10.0, 200)

	def test_preconditions(self):
		with self.subTest(gap="empty"):
			with self.assertRaises(PreconditionError):
				oracle_gap_eigenvalues(self.well, (0.0, -3.0), 10.0, 100)

		with self.subTest(side="unknown"):
			with self.assertRaises(PreconditionError):
				oracle_gap_eigenvalues(self.well, (-3.0, 0.0), 10.0, 100, side="left")

if __name__ == "__main__":
	pass
