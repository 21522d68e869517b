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

import io
import logging
import os
import sys

import fixtures
import mock
from oslotest import base
from testtools import matchers

from diraclab.commands import bands
from diraclab.commands import sweep
from diraclab.commands import validate
from diraclab.common import exceptions
from diraclab import shell


SUMMARY = {
    'rows': 2, 'violations': 0, 'passed': True,
    'checks': {'bcls': {'count': 2, 'violations': 0, 'not_applicable': 0,
                        'failed_preconditions': 0, 'min_slack': 0.5,
                        'max_quadrature_error': 1e-9}},
}


class ShellTest(base.BaseTestCase):

    def setUp(self):
        super(ShellTest, self).setUp()
        self.useFixture(fixtures.FakeLogger(level=logging.DEBUG))
        self.useFixture(fixtures.EnvironmentVariable('OUT_DIR', None))
        self.tmp = self.useFixture(fixtures.TempDir()).path

    def shell(self, argstr, expected_val=None):
        stdout = io.StringIO()
        stderr = io.StringIO()
        self.useFixture(fixtures.MonkeyPatch('sys.stdout', stdout))
        self.useFixture(fixtures.MonkeyPatch('sys.stderr', stderr))
        code = None
        try:
            code = shell.DiracLabShell().run(argstr.split())
        except SystemExit as e:
            code = e.code
        if expected_val is not None:
            self.assertEqual(expected_val, code)
        return code, stdout.getvalue(), stderr.getvalue()

    def test_help(self):
        code, stdout, stderr = self.shell('help', expected_val=0)
        self.assertThat(stdout, matchers.StartsWith('usage:'))
        for name in shell.COMMANDS:
            self.assertIn(name, stdout)
        self.assertIn('Exit codes:', stdout)
        self.assertNotIn('complete', stdout.split('Commands:')[1])

    def test_help_on_subcommand(self):
        code, stdout, stderr = self.shell('help validate', expected_val=0)
        self.assertIn('--strict', stdout)
        self.assertIn('--corpus', stdout)

    def test_no_command(self):
        code, stdout, stderr = self.shell('', expected_val=2)
        self.assertIn('usage:', stderr)

    def test_unknown_command(self):
        self.shell('fake', expected_val=2)

    def test_negative_seed(self):
        self.shell('sweep --seed=-1', expected_val=2)

    def test_seed_too_large(self):
        self.shell('sweep --seed=%d' % (2 ** 64), expected_val=2)

    def test_bad_worker_count(self):
        self.shell('sweep --workers 0', expected_val=2)

    def test_malformed_config(self):
        path = os.path.join(self.tmp, 'run.yaml')
        with open(path, 'w') as f:
            f.write('lattice: [epsilon: \n')
        self.shell('sweep --config %s' % path, expected_val=2)

    def test_unknown_config_key(self):
        path = os.path.join(self.tmp, 'run.yaml')
        with open(path, 'w') as f:
            f.write('lattice:\n  epsilom: 0.25\n')
        self.shell('bands --config %s' % path, expected_val=2)

    def test_missing_config(self):
        self.shell('bands --config %s' % os.path.join(self.tmp, 'absent'),
                   expected_val=2)


class CommandTest(base.BaseTestCase):

    def setUp(self):
        super(CommandTest, self).setUp()
        self.useFixture(fixtures.FakeLogger(level=logging.DEBUG))
        self.useFixture(fixtures.EnvironmentVariable('OUT_DIR', None))
        self.tmp = self.useFixture(fixtures.TempDir()).path
        self.useFixture(fixtures.MonkeyPatch('sys.stdout', io.StringIO()))
        self.useFixture(fixtures.MonkeyPatch('sys.stderr', io.StringIO()))

    def run_validate(self, argstr, **kwargs):
        with mock.patch.object(validate.Validate, 'produce',
                               **kwargs) as produce:
            code = shell.DiracLabShell().run(
                ['validate'] + argstr.split())
        return code, produce

    def test_canned_output(self):
        code, produce = self.run_validate('', return_value=SUMMARY)
        self.assertEqual(0, code)
        self.assertIn('bcls', sys.stdout.getvalue())
        self.assertEqual(1, produce.call_count)

    def test_options_passed_to_produce(self):
        code, produce = self.run_validate(
            '--exploratory --strict --corpus bcls --corpus form',
            return_value=SUMMARY)
        options = produce.call_args[0][2]
        self.assertEqual({'exploratory': True, 'strict': True,
                          'corpus': ['bcls', 'form']}, options)

    def test_seed_and_workers_override(self):
        code, produce = self.run_validate('--seed 0x10 --workers 3',
                                          return_value=SUMMARY)
        conf = produce.call_args[0][0]
        self.assertEqual(16, conf.seed)
        self.assertEqual(3, conf.workers)

    def test_out_dir_environment(self):
        out = os.path.join(self.tmp, 'env')
        self.useFixture(fixtures.EnvironmentVariable('OUT_DIR', out))
        code, produce = self.run_validate('', return_value=SUMMARY)
        self.assertEqual(out, produce.call_args[0][1])

    def test_out_option_wins(self):
        self.useFixture(fixtures.EnvironmentVariable(
            'OUT_DIR', os.path.join(self.tmp, 'env')))
        out = os.path.join(self.tmp, 'option')
        code, produce = self.run_validate('--out %s' % out,
                                          return_value=SUMMARY)
        self.assertEqual(out, produce.call_args[0][1])

    def _assert_exit(self, error, expected):
        code, produce = self.run_validate('', side_effect=error)
        self.assertEqual(expected, code)

    def test_solver_failure(self):
        self._assert_exit(exceptions.NoSpectralGap(lower=0.0, upper=0.0),
                          exceptions.EXIT_SOLVER)

    def test_library_error(self):
        self._assert_exit(exceptions.FiberTooLarge(dimension=10, cutoff=1,
                                                   cap=5),
                          exceptions.EXIT_SOLVER)

    def test_assumption_violation(self):
        self._assert_exit(exceptions.AssumptionViolation(
            assumption='rate_assumption', reason='kappa=2'),
            exceptions.EXIT_ASSUMPTION)

    def test_replay_mismatch(self):
        self._assert_exit(exceptions.ReplayMismatch(manifest='m.json',
                                                    artifacts='records.csv'),
                          exceptions.EXIT_REPLAY)

    def test_validation_failed(self):
        self._assert_exit(exceptions.ValidationFailed(violations=1,
                                                      path='v.csv'),
                          exceptions.EXIT_FAILURE)

    def test_unexpected_error(self):
        self._assert_exit(RuntimeError('boom'), exceptions.EXIT_FAILURE)

    def test_main_maps_codes(self):
        with mock.patch.object(sweep.Sweep, 'produce',
                               side_effect=exceptions.SweepAborted(
                                   epsilon=0.125, reason='no gap')):
            self.assertEqual(exceptions.EXIT_SOLVER,
                             shell.main(['sweep']))

    def test_command_logger(self):
        self.assertEqual('diraclab.commands.bands.ShowBands',
                         bands.ShowBands.log.name)
        self.assertEqual('diraclab.commands.sweep.Sweep',
                         sweep.Sweep.log.name)
