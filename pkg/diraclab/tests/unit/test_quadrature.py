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

import math

import mock
import numpy as np
from oslotest import base

from diraclab.common import exceptions
from diraclab.estimates import functions
from diraclab.estimates import quadrature
from diraclab import shapes


class RuleTest(base.BaseTestCase):

    def test_disk_area_rule(self):
        rule = quadrature.area_rule(shapes.disk(0.5, center=(1.0, 0.0)), 8)
        self.assertAlmostEqual(math.pi / 4.0, rule.measure)
        # the mean of x over a disk is its center
        self.assertAlmostEqual(1.0, rule.mean(rule.nodes[:, 0]))

    def test_boundary_rule(self):
        rule = quadrature.boundary_rule(shapes.disk(2.0), 4)
        self.assertEqual(quadrature.BOUNDARY_FACTOR * 4, len(rule.weights))
        self.assertAlmostEqual(4.0 * math.pi, rule.measure)

    def test_annulus(self):
        ring = quadrature.Annulus((0.0, 0.0), 0.5, 1.0)
        rule = quadrature.area_rule(ring, 8)
        self.assertAlmostEqual(ring.area(), rule.measure)
        r2 = np.sum(rule.nodes ** 2, axis=1)
        self.assertAlmostEqual(math.pi * (1.0 - 0.0625) / 2.0,
                               rule.integrate(r2))
        self.assertTrue(np.all(ring.contains(rule.nodes)))

    def test_annulus_nesting(self):
        self.assertRaises(exceptions.GeometryNestingError,
                          quadrature.Annulus, (0.0, 0.0), 1.0, 1.0)


class ConvergedTest(base.BaseTestCase):

    def test_returns_first_agreeing_pair(self):
        evaluate = mock.Mock(side_effect=[np.array([1.0]),
                                          np.array([1.5]),
                                          np.array([1.5])])
        value, coarse, resolution = quadrature.converged(evaluate, 4)
        self.assertEqual(1.5, value[0])
        self.assertEqual(1.5, coarse[0])
        self.assertEqual(16, resolution)
        evaluate.assert_has_calls([mock.call(4), mock.call(8),
                                   mock.call(16)])

    def test_raises_without_agreement(self):
        values = iter(range(10))
        self.assertRaises(exceptions.QuadratureError, quadrature.converged,
                          lambda n: np.array([float(next(values))]), 4)


class MeanValueTest(base.BaseTestCase):

    def test_constant(self):
        f = functions.Constant(2.0 - 1.0j)
        value = quadrature.mean_value(f, shapes.disk(1.0))
        self.assertLess(abs(value - (2.0 - 1.0j)), 1e-12)

    def test_harmonic_mean_value_property(self):
        # ln|x - p| is harmonic away from p: its circle mean is ln|c - p|
        f = functions.RadialLog(pole=(3.0, 0.0))
        circle = shapes.disk(1.0)
        self.assertAlmostEqual(math.log(3.0),
                               quadrature.mean_value(f, circle,
                                                     boundary=True).real)
        self.assertAlmostEqual(math.log(3.0),
                               quadrature.mean_value(f, circle).real)

    def test_fixed_boundary_quadrature(self):
        quad = shapes.disk(1.0).boundary_quadrature(64)
        f = functions.Constant(3.0)
        self.assertAlmostEqual(3.0, quadrature.mean_value(f, quad).real)
