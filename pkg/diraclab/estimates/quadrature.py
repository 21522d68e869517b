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

"""Area and boundary quadrature with resolution doubling.

A resolution ``n`` means ``n`` Gauss-Legendre nodes in the radial direction,
``4n`` nodes along the boundary parameter for area rules and ``8n`` nodes
for boundary rules.
"""

import logging

import numpy as np

from diraclab._i18n import _
from diraclab.common import exceptions
from diraclab import shapes


LOG = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 32
ANGULAR_FACTOR = 4
BOUNDARY_FACTOR = 8
MAX_DOUBLINGS = 3
TOLERANCE = 1e-8


class Rule(object):
    """Nodes and weights of a quadrature rule."""

    def __init__(self, nodes, weights):
        self.nodes = np.asarray(nodes, dtype=float)
        self.weights = np.asarray(weights, dtype=float)

    @property
    def measure(self):
        return float(np.sum(self.weights))

    def integrate(self, values):
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def mean(self, values):
        return self.integrate(values) / self.measure


class Annulus(object):
    """The ring inner < |x - center| < outer."""

    def __init__(self, center, inner, outer):
        if not 0.0 <= inner < outer:
            raise exceptions.GeometryNestingError(
                reason=_("annulus needs 0 <= inner < outer, got %(i)r, "
                         "%(o)r") % {'i': inner, 'o': outer})
        self.center = np.asarray(center, dtype=float)
        self.inner = float(inner)
        self.outer = float(outer)

    def area(self):
        return np.pi * (self.outer ** 2 - self.inner ** 2)

    def contains(self, points, tolerance=1e-12):
        rel = np.asarray(points, dtype=float) - self.center
        r = np.hypot(rel[..., 0], rel[..., 1])
        return (r >= self.inner * (1.0 - tolerance)) & \
            (r <= self.outer * (1.0 + tolerance))

    def area_quadrature(self, n_radial, n_angular):
        x, w = np.polynomial.legendre.leggauss(n_radial)
        half = 0.5 * (self.outer - self.inner)
        r = self.inner + half * (x + 1.0)
        phi = 2.0 * np.pi * np.arange(n_angular) / n_angular
        ring = np.column_stack([np.cos(phi), np.sin(phi)])
        nodes = (r[:, None, None] * ring[None, :, :]).reshape(-1, 2)
        weights = np.repeat(half * w * r * 2.0 * np.pi / n_angular,
                            n_angular)
        return nodes + self.center, weights

    def __repr__(self):
        return 'Annulus(center=%r, inner=%r, outer=%r)' % (
            tuple(self.center), self.inner, self.outer)


def area_rule(region, resolution):
    nodes, weights = region.area_quadrature(resolution,
                                            ANGULAR_FACTOR * resolution)
    return Rule(nodes, weights)


def boundary_rule(region, resolution):
    quad = region.boundary_quadrature(BOUNDARY_FACTOR * resolution)
    return Rule(quad.nodes, quad.weights)


def converged(evaluate, resolution=DEFAULT_RESOLUTION, tolerance=TOLERANCE,
              max_doublings=MAX_DOUBLINGS):
    """Evaluate at doubling resolutions until two results agree.

    ``evaluate(resolution)`` returns an array of quantities.  Returns the
    finer and the coarser result of the first agreeing pair together with
    the finer resolution.

    :raises QuadratureError: if no pair agrees within ``max_doublings``
    """
    previous = np.asarray(evaluate(resolution))
    error = None
    for _i in range(max_doublings):
        resolution *= 2
        current = np.asarray(evaluate(resolution))
        error = float(np.max(np.abs(current - previous), initial=0.0))
        scale = float(np.max(np.abs(current), initial=0.0))
        LOG.debug('quadrature at resolution %d: change %r of %r',
                  resolution, error, scale)
        if error <= tolerance * scale:
            return current, previous, resolution
        previous = current
    raise exceptions.QuadratureError(
        reason=_("relative change %(err)r after %(n)d doublings exceeds "
                 "%(tol)r") % {'err': error / max(scale, 1e-300),
                               'n': max_doublings, 'tol': tolerance})


def mean_value(f, region, resolution=DEFAULT_RESOLUTION, boundary=False,
               tolerance=TOLERANCE):
    """Mean of ``f`` over an area or along a boundary.

    ``region`` is a shape, an :class:`Annulus` or a fixed
    :class:`diraclab.shapes.BoundaryQuadrature`; the last one is used as
    given, without doubling.
    """
    if isinstance(region, shapes.BoundaryQuadrature):
        return complex(region.integrate(f.value(region.nodes)) /
                       region.perimeter)

    def evaluate(n):
        if boundary:
            rule = boundary_rule(region, n)
        else:
            rule = area_rule(region, n)
        return rule.mean(f.value(rule.nodes))

    value, _coarse, _n = converged(evaluate, resolution, tolerance)
    return complex(value)
