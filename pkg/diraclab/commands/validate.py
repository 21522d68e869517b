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

from cliff import lister

from diraclab._i18n import _
from diraclab import commands
from diraclab.common import exceptions
from diraclab.common import serializer
from diraclab.common import utils
from diraclab import estimates
from diraclab.estimates import report as check_report
from diraclab import lattice
from diraclab.shape_constants import assembly
from diraclab.shape_constants import bounds
from diraclab import study

VALIDATION_FILE = 'validation.csv'
SUMMARY_FILE = 'validation_summary.json'

BOUNDS = 'bounds'
LEMMAS = 'lemmas'
BCLS = 'bcls'
FORM = 'form'
MATRIX = 'matrix'
CORPORA = (BOUNDS, LEMMAS, BCLS, FORM, MATRIX)
SCALING_FACTORS = (0.5, 2.0)


def validation_lattice(conf):
    """The single-epsilon lattice of the validate section, d fixed."""
    section = conf.validate
    eps = section['epsilon']
    return lattice.LatticeConfig(
        eps, section['m_star'], conf.shape(),
        lattice.PowerRule(section['d'] / eps, 1.0),
        center_offset=conf.lattice['center_offset'],
        epsilon0=max(conf.lattice['epsilon0'], eps))


def bound_rows(template, conf):
    h = conf.solver['mesh_size']
    rows = bounds.bound_suite(bounds.shape_corpus(), h,
                              gammas=conf.validate['gammas'])
    for delta in SCALING_FACTORS:
        rows.extend(bounds.validate_scaled_inequalities(
            template, delta, seed=conf.seed, h=h))
    return [check_report.CheckRow.from_bound(r) for r in rows]


def run_corpora(conf, config, mass, constants, corpora):
    section = conf.validate
    workers = conf.workers
    seed = conf.seed
    freq = section['max_frequency']
    result = check_report.Report()
    if BOUNDS in corpora:
        result.extend(bound_rows(config.template, conf))
    if LEMMAS in corpora:
        result.merge(estimates.run_lemma_corpus(
            config, constants, section['seeds'], max_frequency=freq,
            seed=seed, workers=workers))
    if BCLS in corpora:
        result.merge(estimates.run_bcls_corpus(
            config, mass, section['bcls_spinors'], max_frequency=freq,
            seed=seed, workers=workers))
    if FORM in corpora:
        result.merge(estimates.run_form_corpus(
            config, mass, constants, section['spinors'], max_frequency=freq,
            seed=seed, workers=workers))
    if MATRIX in corpora:
        result.merge(estimates.run_matrix_corpus(
            section['matrix_pairs'], section['matrix_dimension'], seed=seed,
            workers=workers))
    return result


class Validate(commands.DiracLabCommand, lister.Lister):
    """Check the functional inequalities on seeded corpora."""

    replay_options = ('exploratory', 'strict', 'corpus')

    def add_known_arguments(self, parser):
        parser.add_argument(
            '--strict', action='store_true', default=False,
            help=_('Exit with code 1 when any inequality is violated.'))
        parser.add_argument(
            '--corpus', action='append', choices=CORPORA,
            help=_('Corpus to run; repeat for several. Default: all of '
                   '%s.') % ', '.join(CORPORA))

    @classmethod
    def produce(cls, conf, destination, options):
        corpora = options.get('corpus') or CORPORA
        config = validation_lattice(conf)
        commands.check_lattice_assumptions(config,
                                           options.get('exploratory'))
        mass = lattice.calibrate_mass(
            config, check_inclusion=not options.get('exploratory'))
        constants = assembly.constants_pipeline(
            config.template, config.m_star, lattice.md_product(config),
            h=conf.solver['mesh_size'], richardson=conf.solver['richardson'],
            workers=conf.workers)
        result = run_corpora(conf, config, mass, constants, corpora)
        summary = result.summary()
        summary['constants'] = constants.derived()
        summary['lattice'] = config.to_dict()

        serializer.ensure_directory(destination)
        csv_path = os.path.join(destination, VALIDATION_FILE)
        serializer.write_csv(csv_path, check_report.HEADER, result.table())
        serializer.write_json(os.path.join(destination, SUMMARY_FILE),
                              summary)
        study.write_manifest(destination, 'validate', conf,
                             [VALIDATION_FILE, SUMMARY_FILE],
                             options=options)
        if options.get('strict') and summary['violations']:
            raise exceptions.ValidationFailed(
                violations=summary['violations'], path=csv_path)
        return summary

    def present(self, summary, parsed_args):
        columns = ('check', 'rows', 'violations', 'not_applicable',
                   'min_slack', 'max_quadrature_error')
        data = [(name, entry['count'], entry['violations'],
                 entry['not_applicable'],
                 utils.format_optional(entry['min_slack']),
                 utils.format_optional(entry['max_quadrature_error']))
                for name, entry in summary['checks'].items()]
        if summary['violations']:
            self.log.warning(_('%d violation(s) found'),
                             summary['violations'])
        return columns, data
