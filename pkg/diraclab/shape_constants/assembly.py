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

"""Spectral constants of a shape and the derived estimate constants."""

import functools
import logging
import math

import joblib

from diraclab._i18n import _
from diraclab.common import exceptions
from diraclab.shape_constants import eigen
from diraclab.shape_constants import mesh as shape_mesh
from diraclab import shapes


LOG = logging.getLogger(__name__)

LN2 = math.log(2.0)
ROBIN_REFERENCE_GAMMA = 1.0


class ShapeConstants(object):
    """Spectral constants of one shape plus the derived constants.

    The spectral values are Richardson extrapolated when available;
    ``raw`` keeps the values of the finest mesh together with the mesh
    area and perimeter.
    """

    def __init__(self, shape, lambda_n=None, lambda_s=None, lambda_r=None,
                 c_tr=None, h_used=None, refinement_error=None, raw=None):
        self.shape = shape
        self.lambda_n = lambda_n
        self.lambda_s = lambda_s
        self.lambda_r = dict(lambda_r or {})
        self.c_tr = c_tr
        self.h_used = h_used
        self.refinement_error = dict(refinement_error or {})
        self.raw = dict(raw or {})
        self.c1 = None
        self.c2 = None
        self.c3 = None
        self.c4 = None
        self.c_final = None
        self.alpha = None
        self.rho = None
        self.m_star = None
        self.md = None
        self.ball = None
        self.cell = None

    def robin(self, gamma):
        return self.lambda_r[gamma]

    def derived(self):
        return {'c1': self.c1, 'c2': self.c2, 'c3': self.c3, 'c4': self.c4,
                'c_final': self.c_final, 'alpha': self.alpha}

    def to_dict(self):
        data = {
            'shape': self.shape.to_dict(),
            'polygonal': not self.shape.smooth,
            'lambda_n': self.lambda_n,
            'lambda_s': self.lambda_s,
            'lambda_r': dict((repr(g), v) for g, v in
                             sorted(self.lambda_r.items())),
            'c_tr': self.c_tr,
            'h_used': self.h_used,
            'refinement_error': self.refinement_error,
            'raw': self.raw,
            'rho': self.rho,
            'm_star': self.m_star,
            'md': self.md,
        }
        data.update(self.derived())
        if self.ball is not None:
            data['ball'] = self.ball.to_dict()
        if self.cell is not None:
            data['cell'] = self.cell.to_dict()
        return data


@functools.lru_cache(maxsize=32)
def compute_shape_constants(shape, h=0.1, gammas=(ROBIN_REFERENCE_GAMMA,),
                            richardson=True):
    """Lambda_N, Lambda_S, Lambda_R^gamma and C_tr of ``shape``.

    ``h`` is relative to the outer radius of the shape.
    """
    mesh = shape_mesh.mesh_shape(shape, h * shape.outer_radius())
    LOG.info('Computing constants of %r on %d vertices%s', shape,
             mesh.n_vertices, ' (+ refinement)' if richardson else '')
    if richardson:
        fine = mesh.refined()
        lam_n = eigen.richardson(eigen.neumann_lambda, mesh, fine=fine)
        lam_s = eigen.richardson(eigen.steklov_lambda, mesh, fine=fine)
        c_tr = eigen.richardson(eigen.trace_constant, mesh, fine=fine,
                                squared=True)
        lam_r = dict((g, eigen.richardson(eigen.robin_lambda, mesh, g,
                                          fine=fine)) for g in gammas)
        finest = fine
        values = dict(lambda_n=lam_n.value, lambda_s=lam_s.value,
                      c_tr=c_tr.value)
        lambda_r = dict((g, est.value) for g, est in lam_r.items())
        errors = {'lambda_n': lam_n.error, 'lambda_s': lam_s.error,
                  'c_tr': c_tr.error}
        errors.update(('lambda_r(%r)' % g, est.error)
                      for g, est in lam_r.items())
        raw = {'lambda_n': lam_n.fine, 'lambda_s': lam_s.fine,
               'c_tr': c_tr.fine}
        raw_r = dict((g, est.fine) for g, est in lam_r.items())
    else:
        finest = mesh
        raw = {'lambda_n': eigen.neumann_lambda(mesh),
               'lambda_s': eigen.steklov_lambda(mesh),
               'c_tr': eigen.trace_constant(mesh)}
        raw_r = dict((g, eigen.robin_lambda(mesh, g)) for g in gammas)
        values = dict(raw)
        lambda_r = dict(raw_r)
        errors = {}
    mats = finest.matrices
    raw['lambda_r'] = dict((repr(g), v) for g, v in sorted(raw_r.items()))
    raw['area'] = mats.area
    raw['perimeter'] = mats.perimeter
    raw['vertices'] = finest.n_vertices
    return ShapeConstants(shape, lambda_r=lambda_r, h_used=finest.h,
                          refinement_error=errors, raw=raw, **values)


def _require(constants, name, label):
    value = getattr(constants, name, None) if constants is not None else None
    if value is None:
        raise exceptions.MissingConstant(name='%s(%s)' % (name, label))
    return value


def select_alpha(lambda_n, c_tr, md):
    """Least alpha with 4*md + 4/alpha <= half of both thresholds.

    Returns None when no alpha exists, that is when 4*md already exceeds
    half of the smaller threshold.
    """
    first = 0.25 / ((1.0 + 1.0 / lambda_n) * c_tr ** 2)
    second = 0.25 * lambda_n / c_tr ** 2
    room = 0.5 * min(first, second) - 4.0 * md
    if room <= 0.0:
        LOG.info('no admissible alpha: 4*m*d=%r, half threshold=%r',
                 4.0 * md, 0.5 * min(first, second))
        return None
    return 4.0 / room


def assemble_constants(base, ball, cell, rho, m_star, md):
    """Derive C1, C2, C3, alpha, C4 and C from the spectral constants.

    :param base: constants of the template shape (Lambda_N, C_tr)
    :param ball: constants of the unit disk
    :param cell: constants of the unit square
    :param md: the largest m*d the constants must cover
    """
    lam_b = _require(ball, 'lambda_n', 'ball')
    ctr_b = _require(ball, 'c_tr', 'ball')
    if ball.lambda_r.get(ROBIN_REFERENCE_GAMMA) is None:
        raise exceptions.MissingConstant(name='lambda_r(1)(ball)')
    robin_b = ball.lambda_r[ROBIN_REFERENCE_GAMMA]
    lam_y = _require(cell, 'lambda_n', 'cell')
    lam_n = _require(base, 'lambda_n', 'template')
    c_tr = _require(base, 'c_tr', 'template')
    if not rho > 0.0:
        raise exceptions.MissingConstant(name='rho')

    pr2 = math.pi * rho ** 2
    c1 = 12.0 / LN2 * (1.0 / (lam_b * pr2) +
                       ctr_b ** 2 * (1.0 / lam_b + 1.0) / math.pi +
                       9.0 / (lam_y * math.pi) + 9.0 / lam_y) + 3.0 / math.pi
    c2 = max(2.0 * ctr_b ** 2,
             2.0 + 2.0 / LN2 * (1.0 + 2.0 * ctr_b ** 2)) / robin_b
    c3 = (18.0 * m_star * math.sqrt(c1 * c2 / pr2) +
          6.0 * m_star * math.sqrt(c1) +
          2.0 / math.sqrt(0.5 * LN2) * m_star *
          (1.0 / (lam_n * pr2) + 1.0 / lam_y))
    alpha = select_alpha(lam_n, c_tr, md)

    result = ShapeConstants(base.shape, base.lambda_n, base.lambda_s,
                            base.lambda_r, base.c_tr, base.h_used,
                            base.refinement_error, base.raw)
    result.c1, result.c2, result.c3 = c1, c2, c3
    result.alpha = alpha
    if alpha is not None:
        result.c4 = 36.0 * (m_star * c_tr) ** 2 * alpha * c2 / pr2 ** 2
        result.c_final = 2.0 * c3 * math.sqrt(2.0 * result.c4 + 1.25)
    result.rho, result.m_star, result.md = rho, m_star, md
    result.ball, result.cell = ball, cell
    return result


def reference_shapes():
    """The unit disk and the unit square."""
    return shapes.Disk(1.0), shapes.unit_square()


def constants_pipeline(template, m_star, md, h=0.1, gammas=(),
                       richardson=True, workers=1):
    """Constants of ``template`` with its reference disk and square.

    ``template`` must already have outer radius 1.
    """
    ensure_unit_template(template)
    gammas = tuple(sorted(set((ROBIN_REFERENCE_GAMMA,) + tuple(gammas))))
    ball_shape, cell_shape = reference_shapes()
    jobs = [(ball_shape, (ROBIN_REFERENCE_GAMMA,)),
            (cell_shape, ()),
            (template, gammas)]
    results = joblib.Parallel(n_jobs=workers)(
        joblib.delayed(compute_shape_constants)(shape, h, g, richardson)
        for shape, g in jobs)
    ball, cell, base = results
    rho = template.inner_radius()
    constants = assemble_constants(base, ball, cell, rho, m_star, md)
    LOG.info('C1=%r C2=%r C3=%r alpha=%r C4=%r C=%r', constants.c1,
             constants.c2, constants.c3, constants.alpha, constants.c4,
             constants.c_final)
    return constants


def ensure_unit_template(shape):
    if abs(shape.outer_radius() - 1.0) > 1e-12:
        raise exceptions.InvalidShape(
            kind=shape.kind, reason=_("template must have outer radius 1"))
    return shape
