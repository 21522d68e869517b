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

"""Periodic lattice of inclusions and the calibrated mass.

The cell ``Y_k`` is the axis-aligned square of side epsilon centered at
``epsilon*k``.  Each cell holds one copy of the inclusion ``d*D + c_k``, where
``D`` is the template shape normalised to outer radius 1 and centered at the
origin, and ``c_k = epsilon*(k + center_offset)``.
"""

import logging
import math

import numpy as np

from diraclab._i18n import _
from diraclab.common import config as run_config
from diraclab.common import exceptions
from diraclab import shapes


LOG = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
INCLUSION_SAMPLES = 4096


class PowerRule(object):
    """d(eps) = c * eps**kappa."""

    kind = run_config.POWER

    def __init__(self, c, kappa):
        self.c = float(c)
        self.kappa = float(kappa)
        if not (self.c > 0.0 and self.kappa >= 1.0):
            raise exceptions.InvalidLattice(
                reason=_("power rule needs c > 0 and kappa >= 1"))

    def __call__(self, epsilon):
        return self.c * epsilon ** self.kappa

    def rate_assumption_holds(self):
        return self.kappa < 2.0

    def predicted_rate(self):
        if self.kappa == 1.0:
            return 'O(eps)'
        if self.kappa < 2.0:
            return 'O(eps^%r |ln eps|^(1/2))' % (2.0 - self.kappa)
        return None

    def to_dict(self):
        return {'d_rule': self.kind, 'c': self.c, 'kappa': self.kappa}


class LogCorrectedRule(object):
    """d(eps) = c * eps**2 * |ln eps|**omega with omega > 1/2.

    Here eta decays only like |ln eps|^(1/2 - omega).
    """

    kind = run_config.LOG_CORRECTED

    def __init__(self, c, omega):
        self.c = float(c)
        self.omega = float(omega)
        if not self.c > 0.0:
            raise exceptions.InvalidLattice(
                reason=_("log_corrected rule needs c > 0"))

    @property
    def kappa(self):
        return 2.0

    def __call__(self, epsilon):
        return self.c * epsilon ** 2 * abs(math.log(epsilon)) ** self.omega

    def rate_assumption_holds(self):
        return self.omega > 0.5

    def predicted_rate(self):
        if self.rate_assumption_holds():
            return 'O(|ln eps|^%r)' % (0.5 - self.omega)
        return None

    def to_dict(self):
        return {'d_rule': self.kind, 'c': self.c, 'omega': self.omega}


def d_rule_from_section(section):
    if section.get('d_rule', run_config.POWER) == run_config.LOG_CORRECTED:
        return LogCorrectedRule(section['c'], section['omega'])
    return PowerRule(section['c'], section['kappa'])


def predicted_rate(d_rule):
    """Human readable convergence rate, or None outside the rate regime."""
    return d_rule.predicted_rate()


class LatticeConfig(object):
    """One period epsilon of the inclusion lattice.

    ``full_cell`` selects the degenerate self-test geometry where the
    inclusion is the whole cell: the template is the square of outer
    radius 1 and d = eps/sqrt(2), so that the calibrated mass equals m_star
    everywhere.
    """

    def __init__(self, epsilon, m_star, shape, d_rule,
                 center_offset=(0.0, 0.0), epsilon0=0.5, full_cell=False):
        self.epsilon = float(epsilon)
        self.m_star = float(m_star)
        self.d_rule = d_rule
        self.epsilon0 = float(epsilon0)
        self.full_cell = bool(full_cell)
        if not 0.0 < self.epsilon <= self.epsilon0 < 1.0:
            raise exceptions.InvalidLattice(
                reason=_("epsilon must lie in (0, epsilon0] with "
                         "epsilon0 < 1"))
        if self.m_star < 0.0:
            raise exceptions.InvalidLattice(
                reason=_("m_star must be non-negative"))
        if self.full_cell:
            self.template = shapes.unit_square(side=SQRT2)
            self.center_offset = (0.0, 0.0)
        else:
            self.template = shape.placed((0.0, 0.0)).upscaled()
            self.center_offset = (float(center_offset[0]),
                                  float(center_offset[1]))

    @classmethod
    def from_run_config(cls, conf, epsilon=None):
        lat = conf.lattice
        return cls(lat['epsilon'] if epsilon is None else epsilon,
                   lat['m_star'], conf.shape(), d_rule_from_section(lat),
                   center_offset=lat['center_offset'],
                   epsilon0=lat['epsilon0'], full_cell=lat['full_cell'])

    def with_epsilon(self, epsilon):
        return LatticeConfig(epsilon, self.m_star, self.template,
                             self.d_rule, center_offset=self.center_offset,
                             epsilon0=self.epsilon0, full_cell=self.full_cell)

    @property
    def d(self):
        if self.full_cell:
            return self.epsilon / SQRT2
        return self.d_rule(self.epsilon)

    @property
    def rho(self):
        return self.template.inner_radius()

    def inclusion_center(self, k=(0, 0)):
        return self.epsilon * (np.asarray(k, dtype=float) +
                               np.asarray(self.center_offset))

    def to_dict(self):
        data = {'epsilon': self.epsilon, 'm_star': self.m_star,
                'd': self.d, 'epsilon0': self.epsilon0,
                'full_cell': self.full_cell,
                'center_offset': list(self.center_offset),
                'template': self.template.to_dict()}
        data.update(self.d_rule.to_dict())
        return data


def cell(config, k=(0, 0)):
    """Y_k, the square of side eps."""
    eps = config.epsilon
    return shapes.unit_square(side=eps,
                              center=eps * np.asarray(k, dtype=float))


def inclusion(config, k=(0, 0)):
    """D_k = d*D + c_k."""
    return config.template.scaled(config.d).placed(
        config.inclusion_center(k))


def ball(config, k=(0, 0)):
    """B_k, the smallest disk containing D_k."""
    return shapes.Disk(config.d, center=config.inclusion_center(k))


def outer_disk(config, k=(0, 0)):
    """R_k, the disk of radius eps concentric with B_k."""
    return shapes.Disk(config.epsilon, center=config.inclusion_center(k))


def patch(config, k=(0, 0)):
    """The 3x3 block of cells around Y_k."""
    eps = config.epsilon
    return shapes.unit_square(side=3.0 * eps,
                              center=eps * np.asarray(k, dtype=float))


def inclusion_strictly_inside(config):
    """True if D_0 lies in the open cell Y_0."""
    if config.full_cell:
        return True
    inc = inclusion(config)
    t = np.union1d(np.linspace(0.0, 2.0 * np.pi, INCLUSION_SAMPLES,
                               endpoint=False), inc.sectors()[:-1])
    points = inc.boundary_point(t) + inc.center
    return bool(np.max(np.abs(points)) < 0.5 * config.epsilon)


def _check_inclusion(config):
    if not inclusion_strictly_inside(config):
        raise exceptions.InvalidLattice(
            reason=_("inclusion %(shape)r is not strictly inside the cell of "
                     "side %(eps)r") % {'shape': inclusion(config),
                                        'eps': config.epsilon})


class ConstantMass(object):
    """Constant mass m everywhere; m = 0 is the massless operator."""

    periodic = True
    is_constant = True

    def __init__(self, m_value):
        self.m_value = float(m_value)

    def value_at(self, points):
        return np.full(np.shape(points)[:-1], self.m_value)

    def fourier_coefficient(self, g):
        g = np.asarray(g)
        zero = np.all(g == 0, axis=-1)
        return np.where(zero, self.m_value, 0.0) + 0j

    def to_dict(self):
        return {'kind': 'constant', 'm_value': self.m_value}


class MassField(object):
    """The calibrated periodic mass: m on every inclusion, 0 elsewhere."""

    periodic = True
    is_constant = False

    def __init__(self, config, m_value):
        self.config = config
        self.m_value = float(m_value)

    def inclusion(self, k=(0, 0)):
        return inclusion(self.config, k)

    def value_at(self, points):
        points = np.asarray(points, dtype=float)
        eps = self.config.epsilon
        k = np.round(points / eps)
        local = points - eps * k
        inside = self.inclusion().contains(local)
        return np.where(inside, self.m_value, 0.0)

    def fourier_coefficient(self, g):
        """Cell Fourier coefficient at integer vector(s) ``g``.

        (1/eps^2) * int_Y m(x) exp(-i G.x) dx with G = 2*pi*g/eps.
        """
        cfg = self.config
        g = np.asarray(g, dtype=float)
        wave = 2.0 * np.pi * g / cfg.epsilon
        d = cfg.d
        transform = d * d * cfg.template.indicator_fourier(d * wave)
        phase = np.exp(-1j * (wave @ cfg.inclusion_center()))
        return self.m_value * transform * phase / cfg.epsilon ** 2

    def mean(self):
        return self.m_value * self.config.d ** 2 * \
            self.config.template.area() / self.config.epsilon ** 2

    def to_dict(self):
        return {'kind': 'inclusions', 'm_value': self.m_value}


def calibrate_mass(config, check_inclusion=True):
    """Mass on the inclusions with m * |D_k| = m_star * eps^2."""
    if check_inclusion:
        _check_inclusion(config)
    d = config.d
    m_value = config.m_star * config.epsilon ** 2 / (
        d * d * config.template.area())
    LOG.debug('calibrated mass %r for eps=%r d=%r', m_value,
              config.epsilon, d)
    return MassField(config, m_value)


def md_product(config):
    """m_k * d_k = m_star * eps^2 / (d |D|)."""
    return config.m_star * config.epsilon ** 2 / (
        config.d * config.template.area())


def largest_md(config, epsilons):
    """The largest m*d over the lattices of ``epsilons``."""
    return max(md_product(config.with_epsilon(e)) for e in epsilons)


def eta(config):
    """The rate eta = (eps^2/d) * ln(eps/d)^(1/2)."""
    return eta_value(config.epsilon, config.d)


def eta_value(epsilon, d):
    if not 0.0 < d < epsilon:
        raise exceptions.InvalidLattice(
            reason=_("eta needs 0 < d < epsilon, got d=%(d)r "
                     "epsilon=%(eps)r") % {'d': d, 'eps': epsilon})
    return epsilon * epsilon / d * math.sqrt(math.log(epsilon / d))


def gap_threshold(m_star):
    """Largest eta for which the homogenised gap survives."""
    root = math.sqrt(1.0 + m_star * m_star)
    return (1.0 - 1.0 / root) / (1.0 + root)


def rate_assumption_holds(config):
    if config.full_cell:
        return True
    return config.d_rule.rate_assumption_holds()


POSITIVE_RADIUS = 'positive_radius'
CELL_FIT = 'cell_fit'
INNER_RADIUS = 'inner_radius'
TRACE_BOUNDED = 'trace_bounded'
NEUMANN_POSITIVE = 'neumann_positive'
STRICT_INCLUSION = 'strict_inclusion'
GAP_THRESHOLD = 'gap_threshold'
RATE_ASSUMPTION = 'rate_assumption'
# Failures of these checks stop a run unless it is exploratory.
BLOCKING = (POSITIVE_RADIUS, CELL_FIT, STRICT_INCLUSION, RATE_ASSUMPTION)


class AssumptionEntry(object):

    def __init__(self, name, passed, value=None, bound=None, detail=''):
        self.name = name
        self.passed = passed
        self.value = value
        self.bound = bound
        self.detail = detail

    def to_dict(self):
        return {'name': self.name, 'passed': self.passed,
                'value': self.value, 'bound': self.bound,
                'detail': self.detail}


class AssumptionReport(object):

    def __init__(self, entries):
        self.entries = list(entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, name):
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def failures(self):
        return [e for e in self.entries if e.passed is False]

    def blocking_failures(self):
        return [e for e in self.failures() if e.name in BLOCKING]

    @property
    def passed(self):
        return not self.failures()

    def to_dict(self):
        return [e.to_dict() for e in self.entries]


def check_assumptions(config, constants=None):
    """Evaluate the standing assumptions; failures are report entries.

    ``constants`` are the shape constants of the template; without them the
    spectral entries are reported as not evaluated (passed is None).
    """
    eps, d = config.epsilon, config.d
    entries = [
        AssumptionEntry(POSITIVE_RADIUS, d > 0.0, d, 0.0,
                        _("d must be positive")),
        AssumptionEntry(CELL_FIT, d <= eps / SQRT2 * (1.0 + 1e-15), d,
                        eps / SQRT2, _("d <= eps/sqrt(2)")),
    ]
    rho = config.rho
    entries.append(AssumptionEntry(INNER_RADIUS, 0.0 < rho <= 1.0 + 1e-12,
                                   rho, 1.0,
                                   _("template inner radius in (0, 1]")))
    if constants is None:
        entries.append(AssumptionEntry(TRACE_BOUNDED, None,
                                       detail=_("not evaluated")))
        entries.append(AssumptionEntry(NEUMANN_POSITIVE, None,
                                       detail=_("not evaluated")))
    else:
        c_tr = constants.c_tr
        entries.append(AssumptionEntry(
            TRACE_BOUNDED, bool(np.isfinite(c_tr) and c_tr > 0.0), c_tr,
            None, _("finite trace constant")))
        entries.append(AssumptionEntry(
            NEUMANN_POSITIVE, bool(constants.lambda_n > 0.0),
            constants.lambda_n, 0.0, _("positive Neumann eigenvalue")))
    entries.append(AssumptionEntry(STRICT_INCLUSION,
                                   inclusion_strictly_inside(config),
                                   detail=_("inclusion inside the open cell")))
    threshold = gap_threshold(config.m_star)
    if 0.0 < d < eps:
        eta_eps = eta(config)
        entries.append(AssumptionEntry(
            GAP_THRESHOLD, eta_eps <= threshold, eta_eps, threshold,
            _("eta below the gap threshold")))
    else:
        entries.append(AssumptionEntry(GAP_THRESHOLD, False, None, threshold,
                                       _("eta undefined for d >= eps")))
    entries.append(AssumptionEntry(
        RATE_ASSUMPTION, rate_assumption_holds(config),
        getattr(config.d_rule, 'kappa', None), 2.0,
        _("d must not decay like eps^2 or faster")))
    report = AssumptionReport(entries)
    for entry in report.failures():
        LOG.warning('assumption %s fails at eps=%r: %s', entry.name, eps,
                    entry.detail)
    return report
