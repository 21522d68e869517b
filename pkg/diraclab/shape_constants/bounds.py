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

"""Analytic lower bounds and the inequality checks between constants.

Checks that relate computed eigenvalues to each other always use values
from one and the same mesh; the discrete Rayleigh quotients then satisfy
the inequalities exactly, up to round-off.
"""

import logging

import numpy as np

from diraclab._i18n import _
from diraclab.common import exceptions
from diraclab.shape_constants import eigen
from diraclab.shape_constants import mesh as shape_mesh
from diraclab import shapes


LOG = logging.getLogger(__name__)

BOUNDARY_NODES = 2048
RELATIVE_SLACK = 1e-9

PAYNE_WEINBERGER = 'payne_weinberger'
BRAMBLE_PAYNE = 'bramble_payne'
STEKLOV_LOWER = 'steklov_lower'
ROBIN_WEAK = 'robin_weak'
PERIMETER = 'perimeter'
SCALED_NEUMANN = 'scaled_neumann'
SCALED_ROBIN = 'scaled_robin'
SCALED_TRACE = 'scaled_trace'


def payne_weinberger_bound(shape):
    """pi^2/diam^2, a lower bound of the Neumann eigenvalue of a convex set."""
    if not shape.is_convex():
        raise exceptions.InvalidShape(
            kind=shape.kind,
            reason=_("Payne-Weinberger bound needs a convex shape"))
    return float(np.pi ** 2 / shape.diameter() ** 2)


def star_geometry(shape, point=None, n_nodes=BOUNDARY_NODES):
    """(R_min, R_max, h) of a shape seen from ``point``.

    R_min and R_max are the extreme boundary distances, h the least
    support value min <x - p, nu>.
    """
    if point is None:
        point = shape.center
    quad = shape.boundary_quadrature(n_nodes)
    rel = quad.nodes - np.asarray(point, dtype=float)
    dist = np.hypot(rel[:, 0], rel[:, 1])
    support = np.sum(rel * quad.normals, axis=1)
    return float(np.min(dist)), float(np.max(dist)), float(np.min(support))


def bramble_payne_bound(shape, point=None):
    """R_min h / (R_max^2 (R_max^2 + R_min h)) for strictly star-shaped sets."""
    r_min, r_max, h = star_geometry(shape, point)
    if not h > 0.0:
        raise exceptions.InvalidShape(
            kind=shape.kind,
            reason=_("shape is not strictly star-shaped with respect to "
                     "%s") % (point if point is not None else 'its center'))
    return r_min * h / (r_max ** 2 * (r_max ** 2 + r_min * h))


def steklov_lower_bound(lambda_n, c_tr):
    return 1.0 / (c_tr ** 2 * (1.0 + 1.0 / lambda_n))


def robin_weak_bound(gamma, lambda_s, perimeter, area):
    """Lower bound of the Robin eigenvalue for gamma in (-lambda_s, 0)."""
    if not -lambda_s < gamma < 0.0:
        raise ValueError(_("gamma must lie in (-lambda_s, 0)"))
    return gamma * perimeter / area * (
        1.0 - np.sqrt(-gamma / lambda_s)) ** -2


def sample_gammas(lambda_s, count):
    """``count`` values spread over (-lambda_s, 0)."""
    return [-lambda_s * (i + 0.5) / count for i in range(count)]


def _passes(lhs, rhs):
    return lhs <= rhs + RELATIVE_SLACK * max(abs(lhs), abs(rhs), 1e-300)


class BoundRow(object):

    def __init__(self, shape, check, lhs, rhs, detail=''):
        self.shape = shape
        self.check = check
        self.lhs = float(lhs)
        self.rhs = float(rhs)
        self.passed = _passes(self.lhs, self.rhs)
        self.detail = detail

    def to_row(self):
        return (self.shape.kind, self.check, self.lhs, self.rhs,
                self.rhs - self.lhs, self.passed, self.detail)

    def to_dict(self):
        return {'shape': self.shape.to_dict(), 'check': self.check,
                'lhs': self.lhs, 'rhs': self.rhs, 'pass': self.passed,
                'detail': self.detail}


BOUND_HEADER = ('shape', 'check', 'lhs', 'rhs', 'slack', 'pass', 'detail')


def bound_suite(shape_list, h, gammas=10):
    """Analytic bounds and constant inequalities for every shape.

    Rows have the form ``lhs <= rhs``.  Payne-Weinberger rows are skipped
    for non-convex shapes, Bramble-Payne rows for shapes that are not
    strictly star-shaped about their center.
    """
    rows = []
    for shape in shape_list:
        mesh = shape_mesh.mesh_shape(shape, h * shape.outer_radius())
        mats = mesh.matrices
        lam_n = eigen.neumann_lambda(mats)
        lam_s = eigen.steklov_lambda(mats)
        c_tr = eigen.trace_constant(mats)
        if shape.is_convex():
            rows.append(BoundRow(shape, PAYNE_WEINBERGER,
                                 payne_weinberger_bound(shape), lam_n))
        if shapes.support_minimum(shape) > 0.0:
            rows.append(BoundRow(shape, BRAMBLE_PAYNE,
                                 bramble_payne_bound(shape), lam_n))
        rows.append(BoundRow(shape, STEKLOV_LOWER,
                             steklov_lower_bound(lam_n, c_tr), lam_s))
        rows.append(BoundRow(shape, PERIMETER, mats.perimeter,
                             c_tr ** 2 * mats.area))
        for gamma in sample_gammas(lam_s, gammas):
            rows.append(BoundRow(
                shape, ROBIN_WEAK,
                robin_weak_bound(gamma, lam_s, mats.perimeter, mats.area),
                eigen.robin_lambda(mats, gamma),
                detail='gamma=%r' % gamma))
    for row in rows:
        if not row.passed:
            LOG.warning('bound %s violated on %r: %r > %r', row.check,
                        row.shape, row.lhs, row.rhs)
    return rows


def validate_scaled_inequalities(shape, delta, samples=20, seed=0, h=0.1,
                                 gamma=1.0):
    """Check the rescaled Neumann, Robin and trace inequalities.

    The constants of ``shape`` are computed on its mesh; random P1
    functions live on the image of that mesh under x -> delta*x.
    """
    base = shape_mesh.mesh_shape(shape, h * shape.outer_radius())
    lam_n = eigen.neumann_lambda(base)
    lam_r = eigen.robin_lambda(base, gamma)
    c_tr = eigen.trace_constant(base)

    scaled_shape = shape.scaled(delta)
    scaled = shape_mesh.sector_mesh(scaled_shape, base.levels,
                                    h=delta * base.h)
    mats = scaled.matrices
    rng = np.random.default_rng(seed)
    rows = []
    for _i in range(samples):
        u = rng.standard_normal(scaled.n_vertices)
        grad2 = float(u @ (mats.stiffness @ u))
        vol2 = float(u @ (mats.mass @ u))
        bnd2 = float(u @ (mats.boundary @ u))
        mean = float(mats.mean_weights @ u) / mats.area
        osc2 = vol2 - mats.area * mean ** 2
        rows.append(BoundRow(scaled_shape, SCALED_NEUMANN, osc2,
                             delta ** 2 / lam_n * grad2,
                             detail='delta=%r' % delta))
        rows.append(BoundRow(scaled_shape, SCALED_ROBIN,
                             lam_r / delta ** 2 * vol2,
                             grad2 + gamma / delta * bnd2,
                             detail='delta=%r' % delta))
        rows.append(BoundRow(scaled_shape, SCALED_TRACE, bnd2,
                             c_tr ** 2 * (delta * grad2 + vol2 / delta),
                             detail='delta=%r' % delta))
    return rows


def shape_corpus():
    """Disk, two ellipses, square, hexagon and a three-lobe star."""
    return [shapes.disk(1.0), shapes.ellipse(1.0, 0.6),
            shapes.ellipse(1.0, 0.35), shapes.unit_square(side=np.sqrt(2.0)),
            shapes.regular_polygon(6, 1.0), shapes.star_radial(0.8, 0.2, 3)]
