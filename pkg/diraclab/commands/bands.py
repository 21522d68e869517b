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

from diraclab import bloch
from diraclab import commands
from diraclab.common import serializer
from diraclab.common import utils
from diraclab import lattice
from diraclab import study

BANDS_FILE = 'bands.csv'


class ShowBands(commands.DiracLabCommand, show.ShowOne):
    """Compute the bands of D_eps over the theta grid and report the gap."""

    @classmethod
    def produce(cls, conf, destination, options):
        config = lattice.LatticeConfig.from_run_config(conf)
        exploratory = options.get('exploratory')
        assumptions = commands.check_lattice_assumptions(config, exploratory)
        mass = lattice.calibrate_mass(config, check_inclusion=not exploratory)
        solver = conf.solver
        structure = bloch.bands(
            config, mass, theta_grid_points=solver['theta_grid'],
            cutoff=solver['cutoff'], workers=conf.workers,
            max_dimension=solver['max_dimension'])
        window = bloch.band_window(solver['band_window'], config.m_star)
        coverage = structure.interior_coverage(window)
        serializer.ensure_directory(destination)
        serializer.write_csv(os.path.join(destination, BANDS_FILE),
                             bloch.CSV_HEADER, structure.rows(window))
        study.write_manifest(destination, 'bands', conf, [BANDS_FILE],
                             options=options,
                             assumptions=assumptions.to_dict(),
                             gap=dict(structure.to_dict(), window=window,
                                     coverage=coverage))
        return config, structure, coverage

    def present(self, result, parsed_args):
        config, structure, coverage = result
        hausdorff = None
        if structure.has_gap() and config.m_star > 0.0:
            hausdorff = bloch.hausdorff_gap_check(structure, config.m_star)
        data = [
            ('epsilon', config.epsilon),
            ('d', config.d),
            ('m_star', config.m_star),
            ('gap_lower', utils.format_optional(structure.gap_lower, 10)),
            ('gap_upper', utils.format_optional(structure.gap_upper, 10)),
            ('has_gap', structure.has_gap()),
            ('hausdorff', utils.format_optional(hausdorff)),
            ('coverage', utils.format_optional(coverage)),
            ('symmetry_residual',
             utils.format_optional(structure.symmetry_residual())),
        ]
        return zip(*data)
