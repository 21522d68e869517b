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
from diraclab.common import serializer
from diraclab.common import utils
from diraclab import lattice
from diraclab.shape_constants import assembly
from diraclab.shape_constants import bounds
from diraclab import study

CONSTANTS_FILE = 'constants.json'
BOUNDS_FILE = 'bounds.csv'


def _format(value):
    return utils.format_optional(value, digits=8)


class ShowConstants(commands.DiracLabCommand, show.ShowOne):
    """Compute the spectral and derived constants of the inclusion shape."""

    @classmethod
    def produce(cls, conf, destination, options):
        config = lattice.LatticeConfig.from_run_config(conf)
        solver = conf.solver
        constants = assembly.constants_pipeline(
            config.template, config.m_star,
            lattice.largest_md(config, conf.sweep_epsilons()),
            h=solver['mesh_size'], richardson=solver['richardson'],
            workers=conf.workers)
        ball, cell = assembly.reference_shapes()
        rows = bounds.bound_suite([ball, cell, config.template],
                                  solver['mesh_size'],
                                  gammas=conf.validate['gammas'])
        serializer.ensure_directory(destination)
        serializer.write_json(os.path.join(destination, CONSTANTS_FILE),
                              constants.to_dict())
        serializer.write_csv(os.path.join(destination, BOUNDS_FILE),
                             bounds.BOUND_HEADER, [r.to_row() for r in rows])
        study.write_manifest(destination, 'constants', conf,
                             [CONSTANTS_FILE, BOUNDS_FILE], options=options)
        return constants, rows

    def present(self, result, parsed_args):
        constants, rows = result
        violations = [r for r in rows if not r.passed]
        if violations:
            self.log.warning(_('%d bound check(s) violated'), len(violations))
        data = [
            ('shape', constants.shape.kind),
            ('lambda_n', _format(constants.lambda_n)),
            ('lambda_s', _format(constants.lambda_s)),
            ('c_tr', _format(constants.c_tr)),
            ('lambda_n(ball)', _format(constants.ball.lambda_n)),
            ('lambda_n(cell)', _format(constants.cell.lambda_n)),
            ('rho', _format(constants.rho)),
            ('C1', _format(constants.c1)),
            ('C2', _format(constants.c2)),
            ('C3', _format(constants.c3)),
            ('alpha', _format(constants.alpha)),
            ('C4', _format(constants.c4)),
            ('C', _format(constants.c_final)),
            ('bound_violations', len(violations)),
        ]
        return zip(*data)
