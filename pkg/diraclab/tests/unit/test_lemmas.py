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

import functools

import numpy as np
from oslotest import base

from diraclab.common import exceptions
from diraclab.estimates import functions
from diraclab.estimates import lemmas
from diraclab import lattice
from diraclab import shape_constants
from diraclab import shapes


M_STAR = 1.0 / 256


def _config(shape=None, center_offset=(0.0, 0.0)):
    return lattice.LatticeConfig(0.25, M_STAR, shape or shapes.disk(1.0),
                                 lattice.PowerRule(0.25, 1.0),
                                 center_offset=center_offset)


@functools.lru_cache(maxsize=4)
def _constants(shape):
    config = _config(shape)
    return shape_constants.constants_pipeline(
        config.template, M_STAR, lattice.md_product(config), h=0.25,
        richardson=False)


class GeometryTest(base.BaseTestCase):

    def test_nested_sets(self):
        geometry = lemmas.LemmaGeometry(_config()).check_nesting()
        self.assertAlmostEqual(np.log(4.0), geometry.log_ratio)
        self.assertEqual(0.0625, geometry.ball.radius)
        self.assertEqual(0.25, geometry.outer_disk.radius)
        self.assertAlmostEqual(0.75, geometry.function_period())

    def test_nesting_fails_off_center(self):
        geometry = lemmas.LemmaGeometry(_config(center_offset=(0.6, 0.0)))
        self.assertRaises(exceptions.GeometryNestingError,
                          geometry.check_nesting)


class LemmaCheckTest(base.BaseTestCase):

    def setUp(self):
        super(LemmaCheckTest, self).setUp()
        self.config = _config()
        self.constants = _constants(shapes.disk(1.0))
        self.geometry = lemmas.LemmaGeometry(self.config)

    def test_log_equality(self):
        row, equality = lemmas.log_equality(self.geometry)
        self.assertTrue(row.passed)
        self.assertTrue(equality.passed)
        self.assertAlmostEqual(np.log(4.0) ** 2, row.lhs, places=6)

    def test_mean_lemmas_hold(self):
        f = functions.random_function(1, 3, self.geometry.function_period(),
                                      origin=self.geometry.patch.center)
        rows = lemmas.validate_mean_lemmas(f, self.geometry, self.constants,
                                           seed=1)
        self.assertEqual(list(lemmas.MEAN_CHECKS), [r.check for r in rows])
        self.assertEqual([], [r for r in rows if not r.passed])

    def test_singular_function_marks_rows_not_applicable(self):
        f = functions.RadialLog(self.geometry.center)
        rows = lemmas.validate_mean_lemmas(f, self.geometry, self.constants)
        applicable = dict((r.check, r.applicable) for r in rows)
        self.assertFalse(applicable[lemmas.BALL_BOUNDARY_MEAN])
        self.assertTrue(applicable[lemmas.ANNULUS_BOUNDARY_MEANS])
        self.assertTrue(all(r.passed for r in rows if r.applicable))

    def test_l2_and_oscillation_bounds(self):
        period = self.geometry.function_period()
        f = functions.random_function(2, 3, period)
        g = functions.random_function(3, 3, period)
        rows = lemmas.validate_lemma6(f, self.geometry, self.constants)
        rows.extend(lemmas.validate_oscillation_bounds(
            f, g, self.geometry, self.constants))
        self.assertEqual([lemmas.INCLUSION_L2, lemmas.INCLUSION_OSCILLATION,
                          lemmas.CELL_OSCILLATION], [r.check for r in rows])
        self.assertTrue(all(r.passed for r in rows))

    def test_missing_constant(self):
        f = functions.random_function(2, 2, 0.75)
        constants = shape_constants.ShapeConstants(self.config.template)
        self.assertRaises(exceptions.MissingConstant,
                          lemmas.validate_lemma6, f, self.geometry, constants)

    def test_corpus(self):
        result = lemmas.run_lemma_corpus(self.config, self.constants, 2,
                                         max_frequency=2, seed=5)
        self.assertEqual(lemmas.ANNULUS_BOUNDARY_MEANS, result.rows[0].check)
        self.assertEqual(lemmas.LOG_EQUALITY, result.rows[1].check)
        # seven mean checks, one L2 check and two oscillation checks each
        self.assertEqual(2 + 2 * 10, len(result))
        self.assertEqual([], result.violations())

    def test_corpus_is_deterministic(self):
        first = lemmas.run_lemma_corpus(self.config, self.constants, 1,
                                        max_frequency=2, seed=9)
        second = lemmas.run_lemma_corpus(self.config, self.constants, 1,
                                         max_frequency=2, seed=9)
        self.assertEqual([r.to_row() for r in first],
                         [r.to_row() for r in second])
