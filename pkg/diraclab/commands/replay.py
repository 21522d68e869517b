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

from cliff import show

from diraclab._i18n import _
from diraclab import commands
from diraclab.commands import bands
from diraclab.commands import constants
from diraclab.commands import sweep
from diraclab.commands import validate
from diraclab.common import utils
from diraclab import study

REPLAY_DIRECTORY = 'replay'

RUNNERS = {
    'bands': bands.ShowBands.produce,
    'constants': constants.ShowConstants.produce,
    'sweep': sweep.Sweep.produce,
    'validate': validate.Validate.produce,
}


class Replay(commands.DiracLabCommand, show.ShowOne):
    """Rerun a recorded run and compare its artifacts byte for byte."""

    def get_parser(self, prog_name):
        # The configuration, seed and flags come from the manifest.
        parser = super(commands.DiracLabCommand, self).get_parser(prog_name)
        parser.add_argument(
            'manifest', metavar='MANIFEST',
            help=_('manifest.json of the run, or its directory.'))
        parser.add_argument(
            '--out', metavar='DIR',
            help=_('Output directory. Defaults to $%(env)s, then to '
                   '%(dir)s/ next to the manifest.') %
            {'env': commands.OUT_DIR_ENV, 'dir': REPLAY_DIRECTORY})
        return parser

    def take_action(self, parsed_args):
        manifest = parsed_args.manifest
        base = manifest if os.path.isdir(manifest) else \
            os.path.dirname(os.path.abspath(manifest))
        destination = (parsed_args.out or utils.env(commands.OUT_DIR_ENV) or
                       os.path.join(base, REPLAY_DIRECTORY))
        artifacts = study.replay(manifest, destination, RUNNERS)
        self.log.info(_('%d artifact(s) reproduced'), len(artifacts))
        data = [('manifest', manifest), ('destination', destination),
                ('artifacts', ', '.join(artifacts)), ('identical', True)]
        return zip(*data)
