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

"""Rows of inequality checks and their summary."""

import collections
import logging


LOG = logging.getLogger(__name__)

BOUND = 'bound'
IDENTITY = 'identity'
PRECONDITION = 'precondition'

RELATIVE_SLACK = 1e-9

HEADER = ('check', 'seed', 'lhs', 'rhs', 'slack', 'pass', 'quadrature_error',
          'detail')


class CheckRow(object):
    """One evaluated inequality ``lhs <= rhs``.

    Identities are reported as ``residual <= tolerance``.  Rows that are
    not applicable carry no values and never count as violations, neither
    do failed preconditions.
    """

    def __init__(self, check, lhs, rhs, seed=None, quadrature_error=0.0,
                 applicable=True, kind=BOUND, detail=''):
        self.check = check
        self.seed = seed
        self.applicable = applicable
        self.kind = kind
        self.detail = detail
        self.quadrature_error = float(quadrature_error)
        if applicable:
            self.lhs = float(lhs)
            self.rhs = float(rhs)
        else:
            self.lhs = self.rhs = None

    @classmethod
    def not_applicable(cls, check, seed=None, detail=''):
        return cls(check, None, None, seed=seed, applicable=False,
                   detail=detail)

    @classmethod
    def from_bound(cls, row):
        detail = '%s %s' % (row.shape.kind, row.detail)
        return cls(row.check, row.lhs, row.rhs, detail=detail.strip())

    @property
    def slack(self):
        if not self.applicable:
            return None
        return self.rhs - self.lhs

    @property
    def passed(self):
        if not self.applicable:
            return None
        scale = max(abs(self.lhs), abs(self.rhs))
        return self.lhs <= (self.rhs + RELATIVE_SLACK * scale +
                            self.quadrature_error)

    @property
    def violation(self):
        return self.kind != PRECONDITION and self.passed is False

    def to_row(self):
        seed = self.seed
        if isinstance(seed, tuple):
            seed = '/'.join(str(s) for s in seed)
        return (self.check, seed, self.lhs, self.rhs, self.slack,
                self.passed, self.quadrature_error, self.detail)

    def __repr__(self):
        return 'CheckRow(%s, seed=%r, %r <= %r)' % (self.check, self.seed,
                                                     self.lhs, self.rhs)


class Report(object):
    """Rows of one or more corpora in a deterministic order."""

    def __init__(self, rows=()):
        self.rows = list(rows)

    def extend(self, rows):
        self.rows.extend(rows)
        return self

    def merge(self, other):
        return self.extend(other.rows)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def violations(self):
        return [row for row in self.rows if row.violation]

    def by_check(self, check):
        return [row for row in self.rows if row.check == check]

    def summary(self):
        checks = collections.OrderedDict()
        for row in self.rows:
            entry = checks.setdefault(row.check, {
                'count': 0, 'violations': 0, 'not_applicable': 0,
                'failed_preconditions': 0, 'min_slack': None,
                'max_quadrature_error': 0.0})
            entry['count'] += 1
            if not row.applicable:
                entry['not_applicable'] += 1
                continue
            if row.violation:
                entry['violations'] += 1
            if row.kind == PRECONDITION and not row.passed:
                entry['failed_preconditions'] += 1
            if entry['min_slack'] is None or row.slack < entry['min_slack']:
                entry['min_slack'] = row.slack
            entry['max_quadrature_error'] = max(
                entry['max_quadrature_error'], row.quadrature_error)
        violations = sum(e['violations'] for e in checks.values())
        return {'rows': len(self.rows), 'violations': violations,
                'passed': violations == 0, 'checks': dict(checks)}

    def log_violations(self):
        for row in self.violations():
            LOG.warning('%s violated (seed %s): %r > %r', row.check,
                        row.seed, row.lhs, row.rhs)

    def table(self):
        return [row.to_row() for row in self.rows]
