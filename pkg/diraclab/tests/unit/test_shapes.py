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
from scipy import integrate
import testscenarios

from diraclab.common import exceptions
from diraclab import shapes


load_tests = testscenarios.load_tests_apply_scenarios


class ShapeGeometryTest(base.BaseTestCase):

    scenarios = [
        ('disk', {'shape': shapes.disk(0.7, center=(0.1, -0.2))}),
        ('ellipse', {'shape': shapes.ellipse(1.0, 0.5)}),
        ('square', {'shape': shapes.unit_square(side=2.0)}),
        ('hexagon', {'shape': shapes.regular_polygon(6, 1.0)}),
        ('star', {'shape': shapes.star_radial(0.8, 0.2, 3)}),
    ]

    def test_area_quadrature_matches_area(self):
        _nodes, weights = self.shape.area_quadrature(24, 96)
        self.assertAlmostEqual(self.shape.area(), np.sum(weights), places=10)

    def test_normals_integrate_to_zero(self):
        quad = self.shape.boundary_quadrature(512)
        self.assertLess(np.max(np.abs(quad.normal_integral())), 1e-12)

    def test_normals_are_outward_unit_vectors(self):
        quad = self.shape.boundary_quadrature(128)
        np.testing.assert_allclose(np.hypot(*quad.normals.T), 1.0)
        outward = np.sum((quad.nodes - self.shape.center) * quad.normals,
                         axis=1)
        self.assertTrue(np.all(outward > 0.0))

    def test_divergence_theorem_gives_area(self):
        # int x.nu / 2 over the boundary equals the area
        quad = self.shape.boundary_quadrature(512)
        rel = quad.nodes - self.shape.center
        value = 0.5 * quad.integrate(np.sum(rel * quad.normals, axis=1))
        self.assertAlmostEqual(self.shape.area(), value, places=10)

    def test_contains_center_not_far_point(self):
        center = self.shape.center
        far = center + 2.0 * self.shape.outer_radius()
        self.assertTrue(self.shape.contains(center))
        self.assertFalse(self.shape.contains(far))

    def test_inner_radius_within_outer(self):
        self.assertLessEqual(self.shape.inner_radius(),
                             self.shape.outer_radius() + 1e-12)

    def test_upscaled_has_unit_outer_radius(self):
        self.assertAlmostEqual(1.0, self.shape.upscaled().outer_radius())

    def test_dict_round_trip(self):
        self.assertEqual(self.shape, shapes.from_dict(self.shape.to_dict()))

    def test_fourier_at_zero_is_area(self):
        value = self.shape.indicator_fourier(np.zeros((1, 2)))
        self.assertAlmostEqual(self.shape.area(), value[0].real, places=10)

    def test_fourier_matches_quadrature(self):
        q = np.array([[3.0, -1.0], [0.5, 7.0]])
        np.testing.assert_allclose(shapes.fourier_by_quadrature(self.shape, q),
                                   self.shape.indicator_fourier(q),
                                   atol=1e-10 * self.shape.area())


class ShapeTest(base.BaseTestCase):

    def test_disk_perimeter(self):
        quad = shapes.disk(2.0).boundary_quadrature(64)
        self.assertAlmostEqual(4.0 * np.pi, quad.perimeter, places=12)

    def test_star_boundary_weights_match_arclength(self):
        star = shapes.star_radial(0.7, 0.2, 5)
        quad = star.boundary_quadrature(256)
        length, _error = integrate.quad(star.arclength_integrand, 0.0,
                                        2.0 * np.pi, limit=200)
        self.assertAlmostEqual(length, np.sum(quad.weights), places=10)

    def test_unit_square_area(self):
        self.assertAlmostEqual(1.0, shapes.unit_square().area())

    def test_star_is_not_convex_with_deep_lobes(self):
        self.assertFalse(shapes.star_radial(0.6, 0.4, 5).is_convex())

    def test_hex_float_parameters(self):
        shape = shapes.from_dict({'kind': 'disk', 'radius': '0x1.8p-1'})
        self.assertEqual(0.75, shape.radius)

    def test_invalid_shapes(self):
        self.assertRaises(exceptions.InvalidShape, shapes.disk, 0.0)
        self.assertRaises(exceptions.InvalidShape, shapes.ellipse, 0.5, 1.0)
        self.assertRaises(exceptions.InvalidShape,
                          shapes.regular_polygon, 2, 1.0)
        self.assertRaises(exceptions.InvalidShape,
                          shapes.star_radial, 0.5, 0.5, 3)

    def test_from_dict_rejects_unknown_keys(self):
        self.assertRaises(exceptions.InvalidShape, shapes.from_dict,
                          {'kind': 'disk', 'radius': 1.0, 'colour': 'red'})
        self.assertRaises(exceptions.InvalidShape, shapes.from_dict,
                          {'kind': 'blob'})

    def test_too_few_boundary_nodes(self):
        self.assertRaises(exceptions.QuadratureError,
                          shapes.disk(1.0).boundary_quadrature, 4)
