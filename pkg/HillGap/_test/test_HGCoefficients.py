"""
:Date: 23.02.2026

..	versionadded:: v0.1.0
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

import math
import unittest

import numpy as np

from HillGap.HGUtils import PreconditionError, ImmutableError
from HillGap.spectral.HGCoefficients import PerturbedPair, PERIODIC_FAMILIES, PERTURBATION_FAMILIES, eval_triple, \
	make_builtin, moment_norm

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ TESTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

# noinspection PyTypeChecker
class CoefficientTestBase:

	def setUp(self):
		self.mathieu = make_builtin("mathieu", gamma=1.0)
		self.free = make_builtin("free")
		self.kp = make_builtin("kronig_penney", height=2.0, fraction=0.25, p_ratio=2.0)

	def tearDown(self):
		del self.mathieu, self.free, self.kp

# noinspection PyTypeChecker
class TestPeriodicFamilies(CoefficientTestBase, unittest.TestCase):

	def test_periodicity(self):
		for name in PERIODIC_FAMILIES:
			with self.subTest(family=name):
				model = make_builtin(name)
				self.assertTrue(model.is_periodic)
				self.assertTrue(model.is_periodic_to())

	def test_values(self):
		with self.subTest(family="mathieu"):
			self.assertTupleEqual((1.0, 2.0, 1.0), eval_triple(self.mathieu, 0.0))
			self.assertAlmostEqual(-2.0, eval_triple(self.mathieu, math.pi / 2)[1], places=14)
			self.assertAlmostEqual(math.pi, self.mathieu.period)

		with self.subTest(family="kronig_penney"):
			# barrier on [0, ω/4) with p = 2, right-continuous at the breakpoint
			self.assertTupleEqual((0.5, 2.0, 1.0), eval_triple(self.kp, 0.0))
			self.assertTupleEqual((1.0, 0.0, 1.0), eval_triple(self.kp, math.pi / 4))
			self.assertTupleEqual((0.5, 2.0, 1.0), eval_triple(self.kp, math.pi))

		with self.subTest(family="const_shift"):
			self.assertTupleEqual((1.0, 3.0, 1.0), eval_triple(make_builtin("const_shift", shift=3.0), 1.2))

	def test_breakpoints(self):
		points = self.kp.breakpoints_in(0.0, 2 * math.pi)
		np.testing.assert_allclose([math.pi / 4, math.pi, 5 * math.pi / 4], points)
		self.assertEqual(0, len(self.mathieu.breakpoints_in(0.0, 10.0)))

		nodes = self.kp.segments(2 * math.pi, 0.0)
		self.assertEqual(2 * math.pi, nodes[0])
		self.assertEqual(0.0, nodes[-1])
		self.assertTrue(np.all(np.diff(nodes) < 0))

	def test_evaluate_shape(self):
		x = np.linspace(0.0, 1.0, 12).reshape(3, 4)
		for values in self.mathieu.evaluate(x):
			self.assertTupleEqual((3, 4), values.shape)

	def test_immutable(self):
		with self.assertRaises(ImmutableError):
			self.mathieu._period = 1.0

	def test_invalid(self):
		for name, params in (("free", {"omega": -1.0}), ("kronig_penney", {"fraction": 1.5}),
							 ("kronig_penney", {"p_ratio": 0.0}), ("mathieu", {"height": 1.0}),
							 ("bessel", {})):
			with self.subTest(family=name, params=params):
				with self.assertRaises(PreconditionError):
					make_builtin(name, **params)

		with self.subTest(kind="base for periodic family"):
			with self.assertRaises(PreconditionError):
				make_builtin("mathieu", base=self.free)

# noinspection PyTypeChecker
class TestPerturbations(CoefficientTestBase, unittest.TestCase):

	def test_aliases(self):
		self.assertEqual("square_well_pert", make_builtin("well", base=self.mathieu).name)
		self.assertEqual("gauss_pert", make_builtin("gauss", base=self.mathieu).name)

	def test_difference(self):
		for name in PERTURBATION_FAMILIES:
			with self.subTest(family=name):
				pert = make_builtin(name, base=self.mathieu)
				pair = PerturbedPair(self.mathieu, pert, 1)
				x = np.linspace(0.0, 40.0, 400)
				d_inv_p, d_q, d_r = pair.delta(x)
				np.testing.assert_array_equal(np.zeros_like(x), d_inv_p)
				np.testing.assert_array_equal(np.zeros_like(x), d_r)
				self.assertLess(abs(d_q[-1]), 1e-2)
				self.assertEqual("q", pert.params["coefficient"])

	def test_square_well(self):
		pert = make_builtin("square_well_pert", base=self.free, depth=-2.0, width=2.0, start=1.0)
		self.assertEqual(0.0, eval_triple(pert, 0.5)[1])
		self.assertEqual(-2.0, eval_triple(pert, 1.0)[1])
		self.assertEqual(0.0, eval_triple(pert, 3.0)[1])
		self.assertEqual(-2.0, eval_triple(pert, -2.5)[1])

	def test_weight_perturbation(self):
		pert = make_builtin("gauss_pert", base=self.free, amplitude=0.5, coefficient="r")
		self.assertAlmostEqual(1.5, eval_triple(pert, 0.0)[2])
		with self.assertRaises(PreconditionError):
			make_builtin("gauss_pert", base=self.free, amplitude=-1.0, coefficient="r")
		with self.assertRaises(PreconditionError):
			make_builtin("gauss_pert", base=self.free, coefficient="p")

	def test_b_matrix(self):
		pert = make_builtin("gauss_pert", base=self.free, amplitude=0.5, coefficient="r")
		pair = PerturbedPair(self.free, pert, 2)
		b = pair.b_matrix(np.asarray([0.0]), 2.0)
		np.testing.assert_allclose([[[0.0, 0.0], [-1.0, 0.0]]], b)
		np.testing.assert_allclose([1.0], pair.b_norm(np.asarray([0.0]), 2.0))

	def test_pair_preconditions(self):
		with self.subTest(error="non-periodic base"):
			pert = make_builtin("well", base=self.mathieu)
			with self.assertRaises(PreconditionError):
				PerturbedPair(pert, pert)

		with self.subTest(error="moment class"):
			with self.assertRaises(PreconditionError):
				PerturbedPair(self.mathieu, self.mathieu, 3)

		with self.subTest(error="divergent moment"):
			slow = make_builtin("power_decay_pert", base=self.mathieu, power=1.5)
			PerturbedPair(self.mathieu, slow, 0)
			with self.assertRaises(PreconditionError):
				PerturbedPair(self.mathieu, slow, 1)

	def test_trivial_and_reflected(self):
		trivial = PerturbedPair(self.mathieu, self.mathieu, 2)
		self.assertTrue(trivial.is_trivial)
		self.assertEqual(0.0, trivial.b_tail(2, 0.0, 1.0))
		self.assertTrue(trivial.reflected().is_trivial)

		well = make_builtin("square_well_pert", base=self.mathieu, depth=-1.0, width=1.0, start=2.0)
		mirrored = PerturbedPair(self.mathieu, well, 2).reflected()
		# the well on [2, 3) moves to (-3, -2] and back onto [2, 3) of the mirrored half line
		self.assertAlmostEqual(-1.0 + 2.0 * math.cos(2 * 2.5), eval_triple(mirrored.pert, 2.5)[1], places=14)

# noinspection PyTypeChecker
class TestMomentNorm(CoefficientTestBase, unittest.TestCase):

	def test_exp_moments(self):
		pair = PerturbedPair(self.mathieu, make_builtin("exp", base=self.mathieu, amplitude=-1.0, rate=1.0), 2)
		for k in (0, 1, 2):
			with self.subTest(k=k):
				norm = moment_norm(pair, k)
				self.assertFalse(norm.divergent)
				self.assertTrue(norm.analytic_tail)
				# ∫_0^∞ t^k e^{-t} dt = k!
				self.assertAlmostEqual(math.factorial(k), norm.value, places=6)

	def test_well_moment(self):
		well = make_builtin("well", base=self.free, depth=-2.0, width=2.0, start=1.0)
		norm = moment_norm(PerturbedPair(self.free, well, 0), 1)
		# 2 ∫_1^3 t dt = 8
		self.assertAlmostEqual(8.0, norm.value, places=6)

	def test_trivial_and_errors(self):
		trivial = PerturbedPair(self.free, self.free, 2)
		self.assertEqual(0.0, moment_norm(trivial, 2).value)
		with self.assertRaises(PreconditionError):
			moment_norm(trivial, 3)
		with self.assertRaises(PreconditionError):
			moment_norm(trivial, 0, x_max=-1.0)

if __name__ == "__main__":
	pass
