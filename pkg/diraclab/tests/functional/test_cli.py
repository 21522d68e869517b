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

import os

from diraclab.common import exceptions
from diraclab.common import serializer
from diraclab import study
from diraclab.tests.functional import base

SMALL_RUN = {
    'seed': 11,
    'solver': {'cutoff': 4, 'theta_grid': 3, 'mesh_size': 0.2,
               'richardson': False},
    'study': {'epsilons': [0.5, 0.25, 0.125]},
    'validate': {'seeds': 5, 'spinors': 3, 'bcls_spinors': 3,
                 'matrix_pairs': 20, 'matrix_dimension': 6},
}


class CommandLineTest(base.FunctionalTestBase):

    def setUp(self):
        super(CommandLineTest, self).setUp()
        self.config = self.write_config(SMALL_RUN)

    def run_into(self, command, name, *args):
        out = os.path.join(self.tmp, name)
        code, stdout = self.diraclab(command, '--config', self.config,
                                     '--out', out, *args)
        return code, out

    def test_sweep_and_replay(self):
        code, out = self.run_into('sweep', 'sweep')
        self.assertEqual(0, code)
        manifest = study.load_manifest(out)
        self.assertEqual('sweep', manifest['command'])
        self.assertEqual(11, manifest['seed'])
        self.assertIn(study.RECORDS_FILE, manifest['artifacts'])
        self.assertEqual(3, len(serializer.read_csv(
            os.path.join(out, study.RECORDS_FILE))))

        code, _stdout = self.diraclab('replay', out, '--out',
                                      os.path.join(self.tmp, 'again'))
        self.assertEqual(0, code)

    def test_replay_detects_changed_artifact(self):
        code, out = self.run_into('sweep', 'sweep')
        self.assertEqual(0, code)
        manifest = os.path.join(out, study.MANIFEST_FILE)
        data = serializer.read_json(manifest)
        data['artifacts'][study.RECORDS_FILE] = '0' * 64
        serializer.write_json(manifest, data)
        code, _stdout = self.diraclab('replay', out)
        self.assertEqual(exceptions.EXIT_REPLAY, code)

    def test_validate_replay(self):
        code, out = self.run_into('validate', 'validate', '--corpus',
                                  'matrix', '--corpus', 'bcls')
        self.assertEqual(0, code)
        code, _stdout = self.diraclab('replay', out)
        self.assertEqual(0, code)

    def test_quadratic_rule_needs_exploratory(self):
        config = self.write_config(dict(SMALL_RUN, lattice={'kappa': 2.0,
                                                            'c': 1.0}),
                                   name='quadratic.yaml')
        out = os.path.join(self.tmp, 'quadratic')
        code, _stdout = self.diraclab('sweep', '--config', config,
                                      '--out', out)
        self.assertEqual(exceptions.EXIT_ASSUMPTION, code)
        code, _stdout = self.diraclab('sweep', '--config', config,
                                      '--out', out, '--exploratory')
        self.assertEqual(0, code)
        manifest = study.load_manifest(out)
        self.assertTrue(manifest['exploratory'])
        self.assertIsNone(manifest['assessment']['verdict'])

    def test_bands_and_constants(self):
        code, out = self.run_into('bands', 'bands')
        self.assertEqual(0, code)
        self.assertTrue(os.path.exists(os.path.join(out, 'bands.csv')))
        gap = study.load_manifest(out)['gap']
        self.assertGreater(gap['coverage'], 0.0)
        self.assertEqual(4.0, gap['window'])
        code, out = self.run_into('constants', 'constants')
        self.assertEqual(0, code)
        self.assertTrue(os.path.exists(os.path.join(out, 'constants.json')))
