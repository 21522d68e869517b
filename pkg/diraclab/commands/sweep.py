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

from cliff import lister

from diraclab._i18n import _
from diraclab import commands
from diraclab.common import exceptions
from diraclab.common import utils
from diraclab import study


class Sweep(commands.DiracLabCommand, lister.Lister):
    """Run the epsilon sweep and fit the convergence rate."""

    @classmethod
    def produce(cls, conf, destination, options):
        exploratory = options.get('exploratory')
        try:
            records = study.run_sweep(conf, exploratory=exploratory)
        except exceptions.SweepAborted as e:
            study.persist(e.records, None, None, destination, conf,
                          options=options)
            raise
        flagged = any(r.exploratory for r in records)
        try:
            fit = study.fit_rate(records, conf.study['observable'])
        except exceptions.InsufficientRecords as e:
            cls.log.warning('%s', e)
            fit = None
        assessment = study.assess_sweep(records, fit, conf, flagged)
        study.persist(records, fit, None, destination, conf,
                      assessment=assessment, options=options)
        return records, fit, assessment

    def present(self, result, parsed_args):
        records, fit, assessment = result
        if fit is not None:
            self.log.info(_('slope %(slope).4f, ratio spread %(spread)s'),
                          {'slope': fit.slope,
                           'spread': utils.format_optional(fit.ratio_spread)})
        if assessment['verdict'] is False:
            self.log.warning(_('sweep checks failed: %s'),
                             ', '.join(k for k, v in
                                       sorted(assessment['checks'].items())
                                       if v is False))
        data = [tuple(utils.format_optional(v, 8) if isinstance(v, float)
                      else ('-' if v is None else v) for v in r.to_row())
                for r in records]
        return study.CSV_HEADER, data
