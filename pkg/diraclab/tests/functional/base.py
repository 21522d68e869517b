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

import fixtures
from oslotest import base
import yaml

from diraclab.common import config as run_config
from diraclab.commands import validate
from diraclab import lattice
from diraclab.shape_constants import assembly
from diraclab import shell


class FunctionalTestBase(base.BaseTestCase):
    """Acceptance-scale runs of the pipelines and of the command line."""

    def setUp(self):
        super(FunctionalTestBase, self).setUp()
        self.useFixture(fixtures.FakeLogger(level=logging.INFO))
        self.useFixture(fixtures.EnvironmentVariable('OUT_DIR', None))
        self.tmp = self.useFixture(fixtures.TempDir()).path

    def write_config(self, data, name='run.yaml'):
        path = os.path.join(self.tmp, name)
        with open(path, 'w') as f:
            yaml.safe_dump(data, f, default_flow_style=False)
        return path

    def diraclab(self, *args):
        """Run the shell and return its exit code and stdout."""
        stdout = io.StringIO()
        self.useFixture(fixtures.MonkeyPatch('sys.stdout', stdout))
        self.useFixture(fixtures.MonkeyPatch('sys.stderr', io.StringIO()))
        code = shell.main(list(args))
        return code, stdout.getvalue()

    def validation_setup(self, data=None):
        conf = run_config.RunConfig(data)
        config = validate.validation_lattice(conf)
        mass = lattice.calibrate_mass(config)
        constants = assembly.constants_pipeline(
            config.template, config.m_star, lattice.md_product(config),
            h=conf.solver['mesh_size'], richardson=conf.solver['richardson'])
        return conf, config, mass, constants
