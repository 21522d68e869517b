#    Licensed under the Apache License, Version 2.0 (the "License"); you may
#    not use this file except in compliance with the License. You may obtain
#    a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
#    WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
#    License for the specific language governing permissions and limitations
#    under the License.

import numpy as np
from oslotest import base
import testscenarios

from diraclab import bloch
from diraclab.estimates import functions


load_tests = testscenarios.load_tests_apply_scenarios

POINTS = np.array([[0.1, 0.2], [-0.3, 0.05], [0.02, -0.04]])


class GradientTest(base.BaseTestCase):

    scenarios = [
        ('constant', {'function': functions.Constant(1.5)}),
        ('radial_log', {'function': functions.RadialLog((0.5, 0.5))}),
        ('trig', {'function': functions.random_function(3, 4, 1.0)}),
        ('trig_offset', {'function': functions.TrigPolynomial.random(
            (7, 1), 2, 0.25, origin=(0.1, -0.1))}),
    ]

    def test_gradient_matches_finite_differences(self):
        error = self.function.finite_difference_error(POINTS)
        if isinstance(self.function, functions.Constant):
            self.assertEqual(0.0, error)
        else:
            self.assertLess(error, 1e-6)

    def test_shapes(self):
        self.assertEqual((3,), self.function.value(POINTS).shape)
        self.assertEqual((3, 2), self.function.gradient(POINTS).shape)
        grid = POINTS.reshape(3, 1, 2)
        self.assertEqual((3, 1), self.function.value(grid).shape)


class TrigPolynomialTest(base.BaseTestCase):

    def test_periodic(self):
        f = functions.random_function(11, 3, 0.5)
        np.testing.assert_allclose(f.value(POINTS),
                                   f.value(POINTS + [0.5, -1.0]))

    def test_seeded(self):
        first = functions.random_function((5, 2), 3, 1.0)
        second = functions.random_function((5, 2), 3, 1.0)
        np.testing.assert_array_equal(first.coefficients,
                                      second.coefficients)
        self.assertEqual(3, first.max_frequency)

    def test_single_mode(self):
        coefficients = np.zeros((3, 3), dtype=complex)
        coefficients[2, 1] = 1.0
        f = functions.TrigPolynomial(coefficients, 2.0)
        x = np.array([[0.5, 0.7]])
        np.testing.assert_allclose(f.value(x), np.exp(1j * np.pi * 0.5))

    def test_rejects_even_size(self):
        self.assertRaises(ValueError, functions.TrigPolynomial,
                          np.zeros((2, 2)), 1.0)


class SpinorTest(base.BaseTestCase):

    def test_dirac_free_of_linear_spinor(self):
        # v = (x, i y): -i sigma.grad v = -i (sigma1 e1 + sigma2 i e2)
        jac = np.array([[1.0, 0.0], [0.0, 1j]])
        expected = -1j * (bloch.SIGMA_1 @ [1.0, 0.0] +
                          bloch.SIGMA_2 @ [0.0, 1j])
        np.testing.assert_allclose(functions.dirac_free(jac), expected)

    def test_sigma3(self):
        np.testing.assert_allclose(
            functions.apply_sigma3(np.array([[1.0, 2.0]])), [[1.0, -2.0]])

    def test_constant_spinor(self):
        v = functions.ConstantSpinor([1.0, 2j])
        np.testing.assert_allclose(v.value(POINTS)[1], [1.0, 2j])
        self.assertEqual((3, 2, 2), v.jacobian(POINTS).shape)
        self.assertIsNone(v.support())

    def test_bump_is_compactly_supported(self):
        v = functions.SpinorBump.random(1, (0.0, 0.0), 0.2, 3, 0.6)
        outside = np.array([[0.3, 0.0], [0.0, -0.2]])
        np.testing.assert_array_equal(v.value(outside), 0.0)
        np.testing.assert_array_equal(v.jacobian(outside), 0.0)
        self.assertEqual(0.2, v.support().radius)
        self.assertNotEqual(0.0, np.abs(v.value(np.zeros((1, 2)))).max())

    def test_bump_jacobian(self):
        v = functions.SpinorBump.random(4, (0.05, 0.0), 0.3, 2, 0.9)
        step = 1e-6
        x = np.array([[0.1, -0.05]])
        numeric = np.stack(
            [(v.value(x + step * e) - v.value(x - step * e)) / (2 * step)
             for e in np.eye(2)], axis=-1)
        np.testing.assert_allclose(v.jacobian(x), numeric, rtol=1e-6,
                                   atol=1e-8)
