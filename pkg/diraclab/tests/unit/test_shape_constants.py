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
from diraclab import shape_constants
from diraclab.shape_constants import assembly
from diraclab.shape_constants import bounds
from diraclab.shape_constants import eigen
from diraclab.shape_constants import mesh as shape_mesh
from diraclab import shapes


# first non-zero Neumann eigenvalue of the unit disk, j'_{1,1}^2
DISK_NEUMANN = 1.8411837813406593 ** 2


class MeshTest(base.BaseTestCase):

    def test_square_mesh_is_exact(self):
        mesh = shape_mesh.mesh_shape(shapes.unit_square(), 0.125)
        self.assertTrue(np.all(mesh.areas > 0.0))
        self.assertAlmostEqual(1.0, mesh.matrices.area)
        self.assertAlmostEqual(4.0, mesh.matrices.perimeter)
        self.assertLessEqual(mesh.max_edge(), 2.0 * mesh.h)

    def test_boundary_ring(self):
        mesh = shape_mesh.mesh_shape(shapes.disk(1.0), 0.25)
        self.assertEqual(6 * mesh.levels, len(mesh.boundary_edges))
        radii = np.hypot(*mesh.vertices[mesh.boundary_nodes()].T)
        np.testing.assert_allclose(radii, 1.0)

    def test_refined_doubles_levels(self):
        mesh = shape_mesh.mesh_shape(shapes.disk(1.0), 0.25)
        fine = mesh.refined()
        self.assertEqual(2 * mesh.levels, fine.levels)
        self.assertAlmostEqual(0.5 * mesh.h, fine.h)

    def test_mesh_size_out_of_range(self):
        self.assertRaises(exceptions.MeshError, shape_mesh.mesh_shape,
                          shapes.disk(1.0), 0.75)
        self.assertRaises(exceptions.MeshError, shape_mesh.mesh_shape,
                          shapes.disk(1.0), 0.0)


class EigenTest(base.BaseTestCase):

    def setUp(self):
        super(EigenTest, self).setUp()
        self.square = shape_mesh.mesh_shape(shapes.unit_square(), 0.1)
        self.disk = shape_mesh.mesh_shape(shapes.disk(1.0), 0.2)

    def test_square_neumann(self):
        value = eigen.neumann_lambda(self.square)
        self.assertGreaterEqual(value, math.pi ** 2)
        self.assertLess(value, 1.05 * math.pi ** 2)
        estimate = eigen.richardson(eigen.neumann_lambda, self.square)
        self.assertAlmostEqual(math.pi ** 2, estimate.value,
                               delta=0.005 * math.pi ** 2)

    def test_disk_neumann(self):
        estimate = eigen.richardson(eigen.neumann_lambda, self.disk)
        self.assertAlmostEqual(DISK_NEUMANN, estimate.value,
                               delta=0.02 * DISK_NEUMANN)
        self.assertGreater(estimate.error, 0.0)

    def test_robin(self):
        mats = self.disk.matrices
        self.assertEqual(0.0, eigen.robin_lambda(self.disk, 0.0))
        low = eigen.robin_lambda(self.disk, 0.5)
        high = eigen.robin_lambda(self.disk, 1.0)
        self.assertGreater(low, 0.0)
        self.assertGreater(high, low)
        # the constant function bounds the Rayleigh quotient
        self.assertLessEqual(high, mats.perimeter / mats.area)
        self.assertLess(eigen.robin_lambda(self.disk, -0.5), 0.0)

    def test_steklov_and_trace_relations(self):
        lam_n = eigen.neumann_lambda(self.disk)
        lam_s = eigen.steklov_lambda(self.disk)
        c_tr = eigen.trace_constant(self.disk)
        mats = self.disk.matrices
        self.assertLessEqual(bounds.steklov_lower_bound(lam_n, c_tr),
                             lam_s * (1.0 + 1e-9))
        self.assertLessEqual(mats.perimeter,
                             c_tr ** 2 * mats.area * (1.0 + 1e-9))

    def test_accepts_assembled_matrices(self):
        self.assertEqual(eigen.neumann_lambda(self.square),
                         eigen.neumann_lambda(self.square.matrices))

    def test_solver_failure(self):
        with mock.patch('scipy.linalg.eigh',
                        side_effect=np.linalg.LinAlgError('boom')):
            e = self.assertRaises(exceptions.EigenSolverError,
                                  eigen.neumann_lambda, self.square)
        self.assertIn(eigen.NEUMANN, str(e))

    def test_sparse_robin_matches_dense(self):
        dense = eigen.robin_lambda(self.disk, 1.0)
        with mock.patch.object(eigen, 'DENSE_LIMIT', 0):
            sparse = eigen.robin_lambda(self.disk, 1.0)
        self.assertAlmostEqual(dense, sparse, places=6)

    def test_unconverged_lobpcg_is_an_error(self):
        vectors = np.ones((self.disk.n_vertices, 1))
        stalled = (np.array([2.0]), vectors, [np.array([0.5])] * 3)
        with mock.patch.object(eigen, 'DENSE_LIMIT', 0):
            with mock.patch.object(eigen.sparse_linalg, 'lobpcg',
                                   return_value=stalled):
                e = self.assertRaises(exceptions.EigenSolverError,
                                      eigen.robin_lambda, self.disk, 1.0)
        self.assertIn(eigen.ROBIN, str(e))
        self.assertIn('not converged', str(e))


class RichardsonTest(base.BaseTestCase):

    def _meshes(self):
        mesh = mock.Mock(h=0.2)
        mesh.refined.return_value = mock.Mock(h=0.1)
        return mesh

    def test_extrapolates_quadratic_error(self):
        def solver(mesh):
            return 2.0 + mesh.h ** 2

        estimate = eigen.richardson(solver, self._meshes())
        self.assertAlmostEqual(2.0, estimate.value)
        self.assertAlmostEqual(0.01, estimate.error)
        self.assertAlmostEqual(2.04, estimate.coarse)

    def test_squared(self):
        def solver(mesh, offset):
            return math.sqrt(offset + mesh.h ** 2)

        estimate = eigen.richardson(solver, self._meshes(), 2.0,
                                    squared=True)
        self.assertAlmostEqual(math.sqrt(2.0), estimate.value)

    def test_reuses_fine_mesh(self):
        mesh = self._meshes()
        fine = mock.Mock(h=0.1)
        eigen.richardson(lambda m: m.h, mesh, fine=fine)
        self.assertFalse(mesh.refined.called)


class BoundsTest(base.BaseTestCase):

    def test_payne_weinberger(self):
        self.assertAlmostEqual(math.pi ** 2 / 4.0,
                               bounds.payne_weinberger_bound(shapes.disk(1.0)))
        self.assertRaises(exceptions.InvalidShape,
                          bounds.payne_weinberger_bound,
                          shapes.star_radial(0.6, 0.4, 5))

    def test_bramble_payne_disk(self):
        self.assertAlmostEqual(0.5,
                               bounds.bramble_payne_bound(shapes.disk(1.0)))

    def test_bramble_payne_needs_star_shape(self):
        self.assertRaises(exceptions.InvalidShape,
                          bounds.bramble_payne_bound, shapes.disk(1.0),
                          point=(2.0, 0.0))

    def test_robin_weak_bound_range(self):
        self.assertRaises(ValueError, bounds.robin_weak_bound, 0.5, 1.0,
                          2.0, 1.0)
        self.assertLess(bounds.robin_weak_bound(-0.5, 1.0, 2.0, 1.0), 0.0)

    def test_sample_gammas(self):
        gammas = bounds.sample_gammas(2.0, 4)
        self.assertEqual(4, len(gammas))
        self.assertTrue(all(-2.0 < g < 0.0 for g in gammas))

    def test_bound_suite_passes(self):
        rows = shape_constants.bound_suite(
            [shapes.unit_square(), shapes.star_radial(0.8, 0.2, 3)], 0.2,
            gammas=2)
        checks = set(row.check for row in rows)
        self.assertIn(bounds.PAYNE_WEINBERGER, checks)
        self.assertIn(bounds.ROBIN_WEAK, checks)
        failed = [row.to_dict() for row in rows if not row.passed]
        self.assertEqual([], failed)

    def test_scaled_inequalities_pass(self):
        for delta in (0.1, 2.0):
            rows = shape_constants.validate_scaled_inequalities(
                shapes.disk(1.0), delta, samples=3, h=0.25)
            self.assertEqual(9, len(rows))
            self.assertTrue(all(row.passed for row in rows))

    def test_shape_corpus(self):
        corpus = shape_constants.shape_corpus()
        self.assertEqual(6, len(corpus))
        for shape in corpus:
            self.assertAlmostEqual(1.0, shape.outer_radius())


class AssemblyTest(base.BaseTestCase):

    def test_compute_shape_constants(self):
        constants = shape_constants.compute_shape_constants(
            shapes.unit_square(), h=0.2, gammas=(1.0,), richardson=False)
        data = constants.to_dict()
        self.assertEqual(constants.lambda_n, data['raw']['lambda_n'])
        self.assertTrue(data['polygonal'])
        self.assertIn('1.0', data['lambda_r'])
        self.assertEqual({}, constants.refinement_error)

    def test_select_alpha(self):
        first = 0.25 / ((1.0 + 1.0 / 4.0) * 2.0 ** 2)
        second = 0.25 * 4.0 / 2.0 ** 2
        expected = 4.0 / (0.5 * min(first, second) - 0.004)
        self.assertAlmostEqual(expected,
                               assembly.select_alpha(4.0, 2.0, 0.001))
        self.assertIsNone(assembly.select_alpha(4.0, 2.0, 1.0))

    def test_missing_constant(self):
        base_constants = assembly.ShapeConstants(shapes.disk(1.0),
                                                 lambda_n=3.4, c_tr=1.5)
        e = self.assertRaises(exceptions.MissingConstant,
                              assembly.assemble_constants, base_constants,
                              None, None, 1.0, 1.0, 0.001)
        self.assertIn('ball', str(e))

    def test_pipeline(self):
        constants = shape_constants.constants_pipeline(
            shapes.disk(1.0), 1.0 / 256, 0.001, h=0.2, richardson=False)
        derived = constants.derived()
        for name in ('c1', 'c2', 'c3', 'c4', 'c_final', 'alpha'):
            self.assertGreater(derived[name], 0.0, name)
        self.assertEqual(1.0, constants.rho)
        self.assertIn('ball', constants.to_dict())

    def test_pipeline_without_alpha(self):
        constants = shape_constants.constants_pipeline(
            shapes.disk(1.0), 1.0, 100.0, h=0.2, richardson=False)
        self.assertIsNone(constants.alpha)
        self.assertIsNone(constants.c_final)
        self.assertIsNotNone(constants.c3)

    def test_template_must_be_normalised(self):
        self.assertRaises(exceptions.InvalidShape,
                          shape_constants.constants_pipeline,
                          shapes.disk(2.0), 1.0, 0.001)
