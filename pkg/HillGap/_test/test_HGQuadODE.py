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

from HillGap.HGUtils import PreconditionError, NumericalError, ImmutableError
from HillGap.spectral.HGCoefficients import make_builtin
from HillGap.spectral.HGQuadODE import StateVector, TransferMatrix, max_step, transfer_matrix, propagate_state, \
	propagate_dense, wronskian, wronskian_trace

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ TESTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

# noinspection PyTypeChecker
class QuadODETestBase:

	def setUp(self):
		self.free = make_builtin("free")
		self.mathieu = make_builtin("mathieu", gamma=1.0)
		self.kp = make_builtin("kronig_penney", height=3.0, fraction=0.3, p_ratio=2.0)

	def tearDown(self):
		del self.free, self.mathieu, self.kp

# noinspection PyTypeChecker
class TestStateVector(unittest.TestCase):

	def test_properties(self):
		state = StateVector(1.0, -2.0, 0.5)
		self.assertEqual(1.0, state.u)
		self.assertEqual(-2.0, state.pu)
		self.assertEqual(0.5, state.x)
		np.testing.assert_array_equal([1.0, -2.0], state.as_array())
		with self.assertRaises(ImmutableError):
			state._u = 0.0

	def test_non_finite(self):
		with self.assertRaises(NumericalError):
			StateVector(math.nan, 0.0, 0.0)
		with self.assertRaises(NumericalError):
			StateVector(1.0, math.inf, 0.0)

	def test_wronskian(self):
		self.assertEqual(1.0, wronskian(StateVector(1.0, 0.0, 2.0), StateVector(0.0, 1.0, 2.0)))
		with self.assertRaises(PreconditionError):
			wronskian(StateVector(1.0, 0.0, 2.0), StateVector(0.0, 1.0, 3.0))
		np.testing.assert_allclose([1.0, -2.0], wronskian_trace([[1.0, 0.0], [1.0, 1.0]], [[0.0, 1.0], [1.0, -1.0]]))

# noinspection PyTypeChecker
class TestTransferMatrix(QuadODETestBase, unittest.TestCase):

	def test_free_closed_form(self):
		for lam in (4.0, 0.25, -1.0):
			with self.subTest(lam=lam):
				x = 1.3
				matrix = transfer_matrix(self.free, lam, 0.0, x).entries
				if lam > 0:
					k = math.sqrt(lam)
					exact = [[math.cos(k * x), math.sin(k * x) / k], [-k * math.sin(k * x), math.cos(k * x)]]
				else:
					k = math.sqrt(-lam)
					exact = [[math.cosh(k * x), math.sinh(k * x) / k], [k * math.sinh(k * x), math.cosh(k * x)]]
				np.testing.assert_allclose(exact, matrix, atol=1e-8)

	def test_determinant(self):
		for model in (self.mathieu, self.kp):
			for lam in (-0.5, 1.0, 7.0):
				with self.subTest(model=model.name, lam=lam):
					self.assertAlmostEqual(1.0, transfer_matrix(model, lam, 0.2, 4.1).det, places=8)

	def test_composition(self):
		first = transfer_matrix(self.kp, 2.0, 0.0, 1.1)
		second = transfer_matrix(self.kp, 2.0, 1.1, 2.9)
		whole = transfer_matrix(self.kp, 2.0, 0.0, 2.9)
		composed = second @ first
		self.assertEqual(0.0, composed.from_x)
		self.assertEqual(2.9, composed.to_x)
		np.testing.assert_allclose(whole.entries, composed.entries, atol=1e-8)

		with self.subTest(error="order"):
			with self.assertRaises(PreconditionError):
				first @ second

		with self.subTest(error="lambda"):
			with self.assertRaises(PreconditionError):
				transfer_matrix(self.kp, 3.0, 1.1, 2.9) @ first

	def test_backwards(self):
		forward = transfer_matrix(self.mathieu, 1.5, 0.0, 2.0)
		backward = transfer_matrix(self.mathieu, 1.5, 2.0, 0.0)
		np.testing.assert_allclose(np.eye(2), (backward @ forward).entries, atol=1e-8)

	def test_identity_and_errors(self):
		np.testing.assert_array_equal(np.eye(2), transfer_matrix(self.free, 1.0, 2.0, 2.0).entries)
		with self.assertRaises(PreconditionError):
			TransferMatrix(np.eye(3), 0.0, 1.0, 0.0)
		with self.assertRaises(PreconditionError):
			transfer_matrix(self.free, 1.0, 0.0, 1.0, tol=0.0)

	def test_max_step(self):
		self.assertAlmostEqual(math.pi / 8, max_step(self.mathieu))
		self.assertAlmostEqual(math.pi / 8, max_step(make_builtin("exp", base=self.mathieu)))

# noinspection PyTypeChecker
class TestPropagation(QuadODETestBase, unittest.TestCase):

	def test_propagate_state(self):
		state = propagate_state(self.free, 1.0, StateVector(0.0, 1.0, 0.0), math.pi / 2)
		self.assertAlmostEqual(1.0, state.u, places=8)
		self.assertAlmostEqual(0.0, state.pu, places=8)
		self.assertEqual(math.pi / 2, state.x)

		with self.subTest(kind="no-op"):
			start = StateVector(1.0, 2.0, 3.0)
			self.assertIs(start, propagate_state(self.free, 1.0, start, 3.0))

	def test_dense_trace(self):
		trace = propagate_dense(self.kp, 2.5, 0.0, 2 * math.pi)
		self.assertGreater(trace.segment_count, 3)
		end = transfer_matrix(self.kp, 2.5, 0.0, 2 * math.pi).entries
		np.testing.assert_allclose(end, trace.final, atol=1e-8)
		np.testing.assert_allclose(end, trace(2 * math.pi), atol=1e-7)

		x = np.linspace(0.0, 2 * math.pi, 7)
		states = trace.states(x, [1.0, 0.0])
		self.assertTupleEqual((7, 2), states.shape)
		mid = transfer_matrix(self.kp, 2.5, 0.0, x[3]).entries
		np.testing.assert_allclose(mid[:, 0], states[3], atol=1e-7)

		with self.assertRaises(PreconditionError):
			trace(7.0)
		with self.assertRaises(PreconditionError):
			propagate_dense(self.kp, 2.5, 1.0, 1.0)

if __name__ == "__main__":
	pass
