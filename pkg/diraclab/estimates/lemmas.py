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

"""Mean-value, oscillation and L2 estimates around one inclusion.

All checks live on the nested sets D (inclusion) in B (smallest disk
containing D) in R (concentric disk of radius eps) in the 3x3 patch of
cells, and on the cell Y itself.  Constants are taken from an assembled
:class:`diraclab.shape_constants.ShapeConstants` and never adjusted.
"""

import collections
import logging
import math

import joblib
import numpy as np

from diraclab._i18n import _
from diraclab.common import exceptions
from diraclab.estimates import functions
from diraclab.estimates import quadrature
from diraclab.estimates import report
from diraclab import lattice


LOG = logging.getLogger(__name__)

NESTING_TOLERANCE = 1e-9
EQUALITY_TOLERANCE = 1e-8

BALL_BOUNDARY_MEAN = 'ball_boundary_mean'
DISK_BOUNDARY_MEAN = 'disk_boundary_mean'
INCLUSION_BALL_MEAN = 'inclusion_ball_mean'
ANNULUS_BOUNDARY_MEANS = 'annulus_boundary_means'
DISK_PATCH_MEAN = 'disk_patch_mean'
CELL_PATCH_MEAN = 'cell_patch_mean'
CELL_INCLUSION_MEAN = 'cell_inclusion_mean'
INCLUSION_L2 = 'inclusion_l2'
INCLUSION_OSCILLATION = 'inclusion_oscillation'
CELL_OSCILLATION = 'cell_oscillation'
LOG_EQUALITY = 'annulus_log_equality'

MEAN = 'mean'
BOUNDARY_MEAN = 'boundary_mean'
GRADIENT = 'gradient'
SQUARE = 'square'

# quantity -> (region attribute, kind)
QUANTITIES = {
    'mean_ball': ('ball', MEAN),
    'mean_ball_boundary': ('ball', BOUNDARY_MEAN),
    'mean_disk': ('outer_disk', MEAN),
    'mean_disk_boundary': ('outer_disk', BOUNDARY_MEAN),
    'mean_inclusion': ('inclusion', MEAN),
    'mean_cell': ('cell', MEAN),
    'mean_patch': ('patch', MEAN),
    'grad_ball': ('ball', GRADIENT),
    'grad_disk': ('outer_disk', GRADIENT),
    'grad_annulus': ('annulus', GRADIENT),
    'grad_patch': ('patch', GRADIENT),
    'l2_inclusion': ('inclusion', SQUARE),
    'l2_disk': ('outer_disk', SQUARE),
}


def _constant(owner, name, label):
    value = getattr(owner, name, None) if owner is not None else None
    if value is None:
        raise exceptions.MissingConstant(name='%s(%s)' % (name, label))
    return value


class LemmaGeometry(object):
    """The sets D, B, R, Y and the patch around the inclusion of cell k."""

    def __init__(self, config, k=(0, 0)):
        self.config = config
        self.k = tuple(k)
        self.epsilon = config.epsilon
        self.d = config.d
        self.inclusion = lattice.inclusion(config, k)
        self.ball = lattice.ball(config, k)
        self.outer_disk = lattice.outer_disk(config, k)
        self.cell = lattice.cell(config, k)
        self.patch = lattice.patch(config, k)
        self.center = config.inclusion_center(k)
        self.annulus = quadrature.Annulus(self.center, self.d, self.epsilon)

    @property
    def log_ratio(self):
        return math.log(self.epsilon / self.d)

    def check_nesting(self):
        """Verify D in B in R in patch.

        :raises GeometryNestingError: on the first broken inclusion
        """
        inc = self.inclusion
        t = np.linspace(0.0, 2.0 * np.pi, 1024, endpoint=False)
        points = inc.boundary_point(np.union1d(t, inc.sectors()[:-1]))
        reach = float(np.max(np.hypot(points[:, 0], points[:, 1])))
        if reach > self.d * (1.0 + NESTING_TOLERANCE):
            raise exceptions.GeometryNestingError(
                reason=_("inclusion reaches %(r)r beyond the ball of radius "
                         "%(d)r") % {'r': reach, 'd': self.d})
        if not self.d < self.epsilon:
            raise exceptions.GeometryNestingError(
                reason=_("ball radius %(d)r is not below eps=%(eps)r")
                % {'d': self.d, 'eps': self.epsilon})
        offset = float(np.max(np.abs(self.center - self.patch.center)))
        if offset + self.epsilon > 1.5 * self.epsilon * (
                1.0 + NESTING_TOLERANCE):
            raise exceptions.GeometryNestingError(
                reason=_("disk of radius eps around %(c)s leaves the patch")
                % {'c': self.center.tolist()})
        return self

    def region(self, name):
        return getattr(self, name)

    def function_period(self):
        return 3.0 * self.epsilon


def _quantity(f, geometry, name, resolution):
    region_name, kind = QUANTITIES[name]
    region = geometry.region(region_name)
    if kind == BOUNDARY_MEAN:
        rule = quadrature.boundary_rule(region, resolution)
        return rule.mean(f.value(rule.nodes))
    rule = quadrature.area_rule(region, resolution)
    if kind == MEAN:
        return rule.mean(f.value(rule.nodes))
    if kind == GRADIENT:
        grad = f.gradient(rule.nodes)
        return rule.integrate(np.sum(np.abs(grad) ** 2, axis=-1))
    return rule.integrate(np.abs(f.value(rule.nodes)) ** 2)


def _applicable(f, geometry, names):
    if f.pole is None:
        return True
    for name in names:
        region_name, kind = QUANTITIES[name]
        if kind != BOUNDARY_MEAN and \
                geometry.region(region_name).contains(f.pole):
            return False
    return True


def _ball_boundary(q, geo, consts):
    ball = consts.ball
    c = (_constant(ball, 'c_tr', 'ball') ** 2 *
         (1.0 / _constant(ball, 'lambda_n', 'ball') + 1.0) / (2.0 * np.pi))
    return (abs(q['mean_ball_boundary'] - q['mean_ball']) ** 2,
            c * q['grad_ball'].real)


def _disk_boundary(q, geo, consts):
    ball = consts.ball
    c = (_constant(ball, 'c_tr', 'ball') ** 2 *
         (1.0 / _constant(ball, 'lambda_n', 'ball') + 1.0) / (2.0 * np.pi))
    return (abs(q['mean_disk_boundary'] - q['mean_disk']) ** 2,
            c * q['grad_disk'].real)


def _inclusion_ball(q, geo, consts):
    lam_b = _constant(consts.ball, 'lambda_n', 'ball')
    rho = _constant(consts, 'rho', 'template')
    return (abs(q['mean_inclusion'] - q['mean_ball']) ** 2,
            q['grad_ball'].real / (lam_b * np.pi * rho ** 2))


def _annulus(q, geo, consts):
    return (abs(q['mean_disk_boundary'] - q['mean_ball_boundary']) ** 2,
            geo.log_ratio / (2.0 * np.pi) * q['grad_annulus'].real)


def _disk_patch(q, geo, consts):
    lam_y = _constant(consts.cell, 'lambda_n', 'cell')
    return (abs(q['mean_disk'] - q['mean_patch']) ** 2,
            9.0 / (lam_y * np.pi) * q['grad_patch'].real)


def _cell_patch(q, geo, consts):
    lam_y = _constant(consts.cell, 'lambda_n', 'cell')
    return (abs(q['mean_cell'] - q['mean_patch']) ** 2,
            9.0 / lam_y * q['grad_patch'].real)


def _cell_inclusion(q, geo, consts):
    c1 = _constant(consts, 'c1', 'template')
    return (abs(q['mean_cell'] - q['mean_inclusion']) ** 2,
            c1 * geo.log_ratio * q['grad_patch'].real)


def _inclusion_l2(q, geo, consts):
    c2 = _constant(consts, 'c2', 'template')
    eps, d = geo.epsilon, geo.d
    return (q['l2_inclusion'].real,
            c2 * ((d / eps) ** 2 * q['l2_disk'].real +
                  d * d * geo.log_ratio * q['grad_disk'].real))


# check -> (quantities, sides)
MEAN_CHECKS = collections.OrderedDict([
    (BALL_BOUNDARY_MEAN, (('mean_ball_boundary', 'mean_ball', 'grad_ball'),
                          _ball_boundary)),
    (DISK_BOUNDARY_MEAN, (('mean_disk_boundary', 'mean_disk', 'grad_disk'),
                          _disk_boundary)),
    (INCLUSION_BALL_MEAN, (('mean_inclusion', 'mean_ball', 'grad_ball'),
                           _inclusion_ball)),
    (ANNULUS_BOUNDARY_MEANS, (('mean_disk_boundary', 'mean_ball_boundary',
                               'grad_annulus'), _annulus)),
    (DISK_PATCH_MEAN, (('mean_disk', 'mean_patch', 'grad_patch'),
                       _disk_patch)),
    (CELL_PATCH_MEAN, (('mean_cell', 'mean_patch', 'grad_patch'),
                       _cell_patch)),
    (CELL_INCLUSION_MEAN, (('mean_cell', 'mean_inclusion', 'grad_patch'),
                           _cell_inclusion)),
])
L2_CHECKS = collections.OrderedDict([
    (INCLUSION_L2, (('l2_inclusion', 'l2_disk', 'grad_disk'),
                    _inclusion_l2)),
])


def _run_checks(f, geometry, constants, table, seed, resolution):
    geometry.check_nesting()
    active = [c for c in table if _applicable(f, geometry, table[c][0])]
    names = sorted(set(n for c in active for n in table[c][0]))
    rows = []
    if names:
        def evaluate(n):
            return np.array([_quantity(f, geometry, name, n)
                             for name in names])

        fine, coarse, _n = quadrature.converged(evaluate, resolution)
        q_fine = dict(zip(names, fine))
        q_coarse = dict(zip(names, coarse))
    for check in table:
        if check not in active:
            rows.append(report.CheckRow.not_applicable(
                check, seed=seed, detail=_("singular inside the region")))
            continue
        sides = table[check][1]
        lhs, rhs = sides(q_fine, geometry, constants)
        lhs_c, rhs_c = sides(q_coarse, geometry, constants)
        error = max(abs(lhs - lhs_c), abs(rhs - rhs_c))
        rows.append(report.CheckRow(check, lhs, rhs, seed=seed,
                                    quadrature_error=error,
                                    detail=f.kind))
    return rows


def validate_mean_lemmas(f, geometry, constants, seed=None,
                         resolution=quadrature.DEFAULT_RESOLUTION):
    """Mean-value differences between the nested sets.

    Checks whose regions contain the singularity of ``f`` are reported as
    not applicable.
    """
    return _run_checks(f, geometry, constants, MEAN_CHECKS, seed, resolution)


def validate_lemma6(f, geometry, constants, seed=None,
                    resolution=quadrature.DEFAULT_RESOLUTION):
    """|f|^2 on D against |f|^2 and |grad f|^2 on R with the constant C2."""
    return _run_checks(f, geometry, constants, L2_CHECKS, seed, resolution)


def _pair_quantities(f, g, region, resolution):
    rule = quadrature.area_rule(region, resolution)
    fv = f.value(rule.nodes)
    gv = g.value(rule.nodes)
    fg = np.sum(np.abs(f.gradient(rule.nodes)) ** 2, axis=-1)
    gg = np.sum(np.abs(g.gradient(rule.nodes)) ** 2, axis=-1)
    return np.array([rule.integrate(fv * np.conj(gv)), rule.mean(fv),
                     rule.mean(np.conj(gv)), rule.integrate(fg),
                     rule.integrate(gg), rule.measure])


def _oscillation_sides(q, constant, scale):
    integral, mean_f, mean_g, grad_f, grad_g, measure = q
    lhs = abs(integral - measure.real * mean_f * mean_g)
    rhs = constant * scale ** 2 * math.sqrt(grad_f.real * grad_g.real)
    return lhs, rhs


def validate_oscillation_bounds(f, g, geometry, constants, seed=None,
                                resolution=quadrature.DEFAULT_RESOLUTION):
    """|int f conj(g) - |O| <f><conj g>| against the Neumann bound on D, Y."""
    geometry.check_nesting()
    lam_n = _constant(constants, 'lambda_n', 'template')
    lam_y = _constant(constants.cell, 'lambda_n', 'cell')
    rows = []
    for check, region, constant, scale in (
            (INCLUSION_OSCILLATION, geometry.inclusion, 1.0 / lam_n,
             geometry.d),
            (CELL_OSCILLATION, geometry.cell, 1.0 / lam_y,
             geometry.epsilon)):
        fine, coarse, _n = quadrature.converged(
            lambda n: _pair_quantities(f, g, region, n), resolution)
        lhs, rhs = _oscillation_sides(fine, constant, scale)
        lhs_c, rhs_c = _oscillation_sides(coarse, constant, scale)
        rows.append(report.CheckRow(
            check, lhs, rhs, seed=seed,
            quadrature_error=max(abs(lhs - lhs_c), abs(rhs - rhs_c)),
            detail='%s/%s' % (f.kind, g.kind)))
    return rows


def log_equality(geometry, resolution=quadrature.DEFAULT_RESOLUTION):
    """f = ln r about the ball center turns the annulus bound into equality.

    Returns the annulus row and the relative deviation of lhs/rhs from 1.
    """
    f = functions.RadialLog(geometry.center)
    row = _run_checks(f, geometry, None,
                      {ANNULUS_BOUNDARY_MEANS:
                       MEAN_CHECKS[ANNULUS_BOUNDARY_MEANS]},
                      None, resolution)[0]
    deviation = abs(row.lhs / row.rhs - 1.0)
    return row, report.CheckRow(LOG_EQUALITY, deviation, EQUALITY_TOLERANCE,
                                kind=report.IDENTITY, detail=f.kind)


def _lemma_job(config, constants, base_seed, index, max_frequency,
               resolution):
    geometry = LemmaGeometry(config)
    period = geometry.function_period()
    f = functions.random_function((base_seed, index, 0), max_frequency,
                                  period, origin=geometry.patch.center)
    g = functions.random_function((base_seed, index, 1), max_frequency,
                                  period, origin=geometry.patch.center)
    rows = validate_mean_lemmas(f, geometry, constants, index, resolution)
    rows.extend(validate_lemma6(f, geometry, constants, index, resolution))
    rows.extend(validate_oscillation_bounds(f, g, geometry, constants, index,
                                            resolution))
    return rows


def run_lemma_corpus(config, constants, count, max_frequency=8, seed=0,
                     workers=1, resolution=quadrature.DEFAULT_RESOLUTION):
    """Every lemma check over ``count`` seeded trigonometric polynomials.

    The logarithmic equality case comes first, then the rows of each
    polynomial in seed order.
    """
    geometry = LemmaGeometry(config).check_nesting()
    LOG.info('Lemma corpus: %d functions, eps=%r d=%r', count,
             config.epsilon, config.d)
    result = report.Report(log_equality(geometry, resolution))
    jobs = joblib.Parallel(n_jobs=workers)(
        joblib.delayed(_lemma_job)(config, constants, seed, i,
                                   max_frequency, resolution)
        for i in range(count))
    for rows in jobs:
        result.extend(rows)
    result.log_violations()
    return result
