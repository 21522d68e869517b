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

"""Parametric inclusion shapes.

Every shape is star-shaped with respect to its center and is described by a
boundary parametrisation ``t -> p(t)`` over ``[0, 2*pi)`` relative to that
center.  Smooth shapes use one analytic chart; regular polygons use one linear
chart per edge, with the vertices at the sector breakpoints.  Meshes, area
and boundary quadratures are all built on that parametrisation so that
boundary nodes sit exactly on the analytic boundary.
"""

import abc
import functools
import logging
import math

import numpy as np
from scipy import spatial
from scipy import special
from shapely import geometry as shapely_geometry
from shapely import ops as shapely_ops

from diraclab._i18n import _
from diraclab.common import exceptions
from diraclab.common import utils


LOG = logging.getLogger(__name__)

DISK = 'disk'
ELLIPSE = 'ellipse'
REGULAR_POLYGON = 'regular_polygon'
STAR_RADIAL = 'star_radial'
KINDS = (DISK, ELLIPSE, REGULAR_POLYGON, STAR_RADIAL)

MIN_BOUNDARY_NODES = 16
# Vertices of the polygonal approximation used for inscribed-disk and
# diameter estimates of shapes without closed forms.
RESOLUTION = 4096
INRADIUS_TOLERANCE = 1e-7
FOURIER_TOLERANCE = 1e-12
FOURIER_START_NODES = 64
FOURIER_MAX_NODES = 2 ** 16
# Below this |q|*R the indicator transform is the area to double precision.
FOURIER_LOW_FREQUENCY = 1e-8


def _kernel(alpha):
    """Return int_0^1 s*exp(-i*alpha*s) ds, elementwise."""
    alpha = np.asarray(alpha, dtype=float)
    out = np.empty(alpha.shape, dtype=complex)
    small = np.abs(alpha) < 1e-2
    big = ~small
    a = alpha[big]
    out[big] = (np.exp(-1j * a) * (1.0 + 1j * a) - 1.0) / (a * a)
    s = alpha[small]
    series = np.zeros(s.shape, dtype=complex)
    for n in range(8):
        series += (-1j * s) ** n / (math.factorial(n) * (n + 2))
    out[small] = series
    return out


def _as_wavevectors(q):
    q = np.asarray(q, dtype=float)
    if q.shape[-1] != 2:
        raise ValueError(_("wave-vectors must have a trailing axis of size 2"))
    return q


class BoundaryQuadrature(object):
    """Nodes, arclength weights and outward unit normals of a closed curve."""

    def __init__(self, nodes, weights, normals):
        self.nodes = np.asarray(nodes, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.normals = np.asarray(normals, dtype=float)

    def __len__(self):
        return len(self.weights)

    @property
    def perimeter(self):
        return float(np.sum(self.weights))

    def integrate(self, values):
        """Integrate nodal values (first axis runs over the nodes)."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def normal_integral(self):
        return self.integrate(self.normals)


class Shape(object, metaclass=abc.ABCMeta):
    """Base class of the parametric shapes.

    Shapes are immutable values; every transformation returns a new shape.
    """

    kind = None
    smooth = True

    def __init__(self, center=(0.0, 0.0)):
        cx, cy = center
        self._center = (float(cx), float(cy))

    @property
    def center(self):
        return np.array(self._center)

    @abc.abstractmethod
    def parameters(self):
        """Return the kind-specific numeric parameters as a dict."""

    @abc.abstractmethod
    def scaled(self, factor):
        """Return the shape scaled by ``factor`` about its center."""

    @abc.abstractmethod
    def area(self):
        pass

    @abc.abstractmethod
    def outer_radius(self):
        pass

    @abc.abstractmethod
    def inner_radius(self):
        pass

    @abc.abstractmethod
    def diameter(self):
        pass

    @abc.abstractmethod
    def is_convex(self):
        pass

    @abc.abstractmethod
    def boundary_point(self, t):
        """Boundary point(s) at parameter(s) ``t``, relative to the center."""

    @abc.abstractmethod
    def boundary_derivative(self, t):
        """Derivative of :meth:`boundary_point` with respect to ``t``."""

    @abc.abstractmethod
    def radial_function(self, phi):
        """Distance from the center to the boundary at polar angle ``phi``."""

    def sectors(self):
        """Parameter breakpoints of the boundary charts, closing at 2*pi."""
        return np.linspace(0.0, 2.0 * np.pi, 7)

    def indicator_fourier(self, q):
        return fourier_by_quadrature(self, q)

    def placed(self, center):
        params = self.parameters()
        return self.__class__(center=center, **params)

    def upscaled(self):
        """Copy scaled so that the smallest enclosing disk has radius 1."""
        return self.scaled(1.0 / self.outer_radius())

    def contains(self, points, tolerance=1e-12):
        points = np.asarray(points, dtype=float)
        rel = points - self.center
        rho = np.hypot(rel[..., 0], rel[..., 1])
        phi = np.arctan2(rel[..., 1], rel[..., 0])
        return rho <= self.radial_function(phi) * (1.0 + tolerance)

    def polygon(self, resolution=RESOLUTION):
        """Shapely polygon through ``resolution`` boundary points."""
        t = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
        if not self.smooth:
            t = np.union1d(t, self.sectors()[:-1])
        return shapely_geometry.Polygon(self.boundary_point(t) + self.center)

    def boundary_quadrature(self, n_nodes):
        if n_nodes < MIN_BOUNDARY_NODES:
            raise exceptions.QuadratureError(
                reason=_("boundary quadrature needs at least %(min)d nodes, "
                         "got %(n)d") % {'min': MIN_BOUNDARY_NODES,
                                         'n': n_nodes})
        t, wt = self.parameter_rule(n_nodes)
        tangent = self.boundary_derivative(t)
        speed = np.hypot(tangent[:, 0], tangent[:, 1])
        normals = np.column_stack([tangent[:, 1], -tangent[:, 0]])
        normals /= speed[:, None]
        return BoundaryQuadrature(self.boundary_point(t) + self.center,
                                  wt * speed, normals)

    def parameter_rule(self, n_nodes):
        """Quadrature rule in the boundary parameter.

        Smooth shapes use the periodic trapezoidal rule, which converges
        spectrally; piecewise charts use Gauss-Legendre on each sector.
        """
        if self.smooth:
            t = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
            return t, np.full(n_nodes, 2.0 * np.pi / n_nodes)
        breaks = self.sectors()
        per_sector = max(2, n_nodes // (len(breaks) - 1))
        x, w = np.polynomial.legendre.leggauss(per_sector)
        nodes, weights = [], []
        for lo, hi in zip(breaks[:-1], breaks[1:]):
            half = 0.5 * (hi - lo)
            nodes.append(lo + half * (x + 1.0))
            weights.append(half * w)
        return np.concatenate(nodes), np.concatenate(weights)

    def area_quadrature(self, n_radial, n_angular):
        """Nodes and weights of a polar rule covering the shape.

        The map ``(s, t) -> center + s*p(t)`` has Jacobian
        ``s*det(p(t), p'(t))``; Gauss-Legendre in ``s`` on ``[0, 1]``.
        """
        t, wt = self.parameter_rule(n_angular)
        x, w = np.polynomial.legendre.leggauss(n_radial)
        s = 0.5 * (x + 1.0)
        ws = 0.5 * w
        p = self.boundary_point(t)
        dp = self.boundary_derivative(t)
        jac = p[:, 0] * dp[:, 1] - p[:, 1] * dp[:, 0]
        nodes = (s[:, None, None] * p[None, :, :]).reshape(-1, 2)
        weights = (ws[:, None] * s[:, None] * (wt * jac)[None, :]).ravel()
        return nodes + self.center, weights

    def to_dict(self):
        data = {'kind': self.kind}
        data.update(self.parameters())
        data['center'] = [self._center[0], self._center[1]]
        return data

    def _key(self):
        return (self.kind, tuple(sorted(self.parameters().items())),
                self._center)

    def __eq__(self, other):
        return isinstance(other, Shape) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        params = ', '.join('%s=%r' % kv for kv in
                           sorted(self.parameters().items()))
        return '%s(%s, center=%r)' % (self.__class__.__name__, params,
                                      self._center)


class Disk(Shape):
    kind = DISK

    def __init__(self, radius, center=(0.0, 0.0)):
        super(Disk, self).__init__(center)
        self.radius = float(radius)
        if not self.radius > 0.0:
            raise exceptions.InvalidShape(kind=self.kind,
                                          reason=_("radius must be positive"))

    def parameters(self):
        return {'radius': self.radius}

    def scaled(self, factor):
        return Disk(self.radius * factor, center=self._center)

    def area(self):
        return np.pi * self.radius ** 2

    def outer_radius(self):
        return self.radius

    def inner_radius(self):
        return self.radius

    def diameter(self):
        return 2.0 * self.radius

    def is_convex(self):
        return True

    def boundary_point(self, t):
        t = np.asarray(t, dtype=float)
        return self.radius * np.stack([np.cos(t), np.sin(t)], axis=-1)

    def boundary_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self.radius * np.stack([-np.sin(t), np.cos(t)], axis=-1)

    def radial_function(self, phi):
        return np.full(np.shape(phi), self.radius)

    def indicator_fourier(self, q):
        q = _as_wavevectors(q)
        k = np.hypot(q[..., 0], q[..., 1]) * self.radius
        return _bessel_envelope(k) * self.area() + 0j


class Ellipse(Shape):
    """Axis-aligned ellipse with semi-axes a >= b (a along x)."""

    kind = ELLIPSE

    def __init__(self, a, b, center=(0.0, 0.0)):
        super(Ellipse, self).__init__(center)
        self.a = float(a)
        self.b = float(b)
        if not (self.b > 0.0 and self.a >= self.b):
            raise exceptions.InvalidShape(
                kind=self.kind, reason=_("semi-axes must satisfy a >= b > 0"))

    def parameters(self):
        return {'a': self.a, 'b': self.b}

    def scaled(self, factor):
        return Ellipse(self.a * factor, self.b * factor, center=self._center)

    def area(self):
        return np.pi * self.a * self.b

    def outer_radius(self):
        return self.a

    def inner_radius(self):
        return self.b

    def diameter(self):
        return 2.0 * self.a

    def is_convex(self):
        return True

    def perimeter(self):
        return 4.0 * self.a * special.ellipe(1.0 - (self.b / self.a) ** 2)

    def boundary_point(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([self.a * np.cos(t), self.b * np.sin(t)], axis=-1)

    def boundary_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([-self.a * np.sin(t), self.b * np.cos(t)], axis=-1)

    def radial_function(self, phi):
        phi = np.asarray(phi, dtype=float)
        return self.a * self.b / np.hypot(self.b * np.cos(phi),
                                          self.a * np.sin(phi))

    def indicator_fourier(self, q):
        q = _as_wavevectors(q)
        k = np.hypot(self.a * q[..., 0], self.b * q[..., 1])
        return _bessel_envelope(k) * self.area() + 0j


class RegularPolygon(Shape):
    """Regular polygon with one edge perpendicular to the x axis.

    Vertex ``k`` sits at polar angle ``pi/n + 2*pi*k/n``; the boundary
    parameter runs linearly along each edge between consecutive vertices.
    """

    kind = REGULAR_POLYGON
    smooth = False

    def __init__(self, n_sides, circumradius, center=(0.0, 0.0)):
        super(RegularPolygon, self).__init__(center)
        self.n_sides = int(n_sides)
        self.circumradius = float(circumradius)
        if self.n_sides != n_sides or self.n_sides < 3:
            raise exceptions.InvalidShape(
                kind=self.kind, reason=_("n_sides must be an integer >= 3"))
        if not self.circumradius > 0.0:
            raise exceptions.InvalidShape(
                kind=self.kind, reason=_("circumradius must be positive"))

    def parameters(self):
        return {'n_sides': self.n_sides, 'circumradius': self.circumradius}

    def scaled(self, factor):
        return RegularPolygon(self.n_sides, self.circumradius * factor,
                              center=self._center)

    @property
    def apothem(self):
        return self.circumradius * np.cos(np.pi / self.n_sides)

    def vertices(self):
        return self.boundary_point(self.sectors()[:-1])

    def sectors(self):
        n = self.n_sides
        return np.pi / n + 2.0 * np.pi * np.arange(n + 1) / n

    def area(self):
        n = self.n_sides
        return 0.5 * n * self.circumradius ** 2 * np.sin(2.0 * np.pi / n)

    def outer_radius(self):
        return self.circumradius

    def inner_radius(self):
        return self.apothem

    def diameter(self):
        n = self.n_sides
        return 2.0 * self.circumradius * np.sin(np.pi * (n // 2) / n)

    def is_convex(self):
        return True

    def _locate(self, t):
        n = self.n_sides
        step = 2.0 * np.pi / n
        u = np.mod(np.asarray(t, dtype=float) - np.pi / n, 2.0 * np.pi) / step
        k = np.minimum(np.floor(u), n - 1)
        return k, u - k, step

    def _vertex(self, k):
        angle = np.pi / self.n_sides + 2.0 * np.pi * k / self.n_sides
        return self.circumradius * np.stack([np.cos(angle), np.sin(angle)],
                                            axis=-1)

    def boundary_point(self, t):
        k, frac, _step = self._locate(t)
        v0 = self._vertex(k)
        v1 = self._vertex(k + 1)
        return v0 + frac[..., None] * (v1 - v0)

    def boundary_derivative(self, t):
        k, _frac, step = self._locate(t)
        return (self._vertex(k + 1) - self._vertex(k)) / step

    def radial_function(self, phi):
        n = self.n_sides
        step = 2.0 * np.pi / n
        delta = np.mod(np.asarray(phi, dtype=float) + np.pi / n, step)
        return self.apothem / np.cos(delta - np.pi / n)

    def indicator_fourier(self, q):
        """Closed form by edge summation.

        With outward edge normals N_j scaled by edge length, midpoints m_j
        and edge vectors e_j the divergence theorem gives
        F(q) = i/|q|^2 * sum_j (q.N_j) exp(-i q.m_j) sinc(q.e_j/2).
        """
        q = _as_wavevectors(q)
        verts = self.vertices()
        edges = np.roll(verts, -1, axis=0) - verts
        mids = verts + 0.5 * edges
        lengthed_normals = np.column_stack([edges[:, 1], -edges[:, 0]])
        flat = q.reshape(-1, 2)
        qn = flat @ lengthed_normals.T
        qm = flat @ mids.T
        qe = flat @ edges.T
        terms = qn * np.exp(-1j * qm) * np.sinc(0.5 * qe / np.pi)
        q2 = np.sum(flat * flat, axis=1)
        low = np.sqrt(q2) * self.circumradius < FOURIER_LOW_FREQUENCY
        out = np.empty(len(flat), dtype=complex)
        out[low] = self.area()
        out[~low] = 1j * np.sum(terms[~low], axis=1) / q2[~low]
        return out.reshape(q.shape[:-1])


class StarRadial(Shape):
    """Star shape with boundary r(phi) = r0 + amplitude*cos(lobes*phi)."""

    kind = STAR_RADIAL

    def __init__(self, r0, amplitude, lobes, center=(0.0, 0.0)):
        super(StarRadial, self).__init__(center)
        self.r0 = float(r0)
        self.amplitude = float(amplitude)
        self.lobes = int(lobes)
        if not self.r0 > 0.0:
            raise exceptions.InvalidShape(kind=self.kind,
                                          reason=_("r0 must be positive"))
        if not 0.0 <= self.amplitude < self.r0:
            raise exceptions.InvalidShape(
                kind=self.kind,
                reason=_("amplitude must satisfy 0 <= amplitude < r0"))
        # One lobe moves the smallest enclosing disk off the center.
        if self.lobes != lobes or self.lobes < 2:
            raise exceptions.InvalidShape(
                kind=self.kind, reason=_("lobes must be an integer >= 2"))

    def parameters(self):
        return {'r0': self.r0, 'amplitude': self.amplitude,
                'lobes': self.lobes}

    def scaled(self, factor):
        return StarRadial(self.r0 * factor, self.amplitude * factor,
                          self.lobes, center=self._center)

    def sectors(self):
        count = max(6, 2 * self.lobes)
        return np.linspace(0.0, 2.0 * np.pi, count + 1)

    def _r(self, t):
        return self.r0 + self.amplitude * np.cos(self.lobes * t)

    def _dr(self, t):
        return -self.amplitude * self.lobes * np.sin(self.lobes * t)

    def _ddr(self, t):
        return -self.amplitude * self.lobes ** 2 * np.cos(self.lobes * t)

    def area(self):
        return np.pi * (self.r0 ** 2 + 0.5 * self.amplitude ** 2)

    def outer_radius(self):
        # Rotational symmetry of order >= 2 pins the enclosing disk center.
        return self.r0 + self.amplitude

    @functools.cached_property
    def _inner_radius(self):
        poly = self.polygon()
        label = shapely_ops.polylabel(poly, tolerance=INRADIUS_TOLERANCE)
        estimate = poly.exterior.distance(label)
        return max(self.r0 - self.amplitude, estimate)

    def inner_radius(self):
        """Largest inscribed disk, polylabel on a RESOLUTION-gon.

        Never below r0 - amplitude, the radius of the disk centered at the
        star center.
        """
        return self._inner_radius

    @functools.cached_property
    def _diameter(self):
        t = np.linspace(0.0, 2.0 * np.pi, RESOLUTION, endpoint=False)
        points = self.boundary_point(t)
        hull = points[spatial.ConvexHull(points).vertices]
        return float(np.max(spatial.distance.pdist(hull)))

    def diameter(self):
        return self._diameter

    def is_convex(self):
        t = np.linspace(0.0, 2.0 * np.pi, RESOLUTION, endpoint=False)
        r, dr, ddr = self._r(t), self._dr(t), self._ddr(t)
        return bool(np.all(r * r + 2.0 * dr * dr - r * ddr >= 0.0))

    def boundary_point(self, t):
        t = np.asarray(t, dtype=float)
        r = self._r(t)
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

    def boundary_derivative(self, t):
        t = np.asarray(t, dtype=float)
        r, dr = self._r(t), self._dr(t)
        c, s = np.cos(t), np.sin(t)
        return np.stack([dr * c - r * s, dr * s + r * c], axis=-1)

    def radial_function(self, phi):
        return self._r(np.asarray(phi, dtype=float))

    def arclength_integrand(self, t):
        return np.hypot(self._r(t), self._dr(t))


def _bessel_envelope(k):
    """2*J1(k)/k, equal to 1 at k = 0."""
    k = np.asarray(k, dtype=float)
    out = np.ones(k.shape)
    nz = k > FOURIER_LOW_FREQUENCY
    out[nz] = 2.0 * special.j1(k[nz]) / k[nz]
    return out


def fourier_by_quadrature(shape, q, tolerance=FOURIER_TOLERANCE):
    """Indicator transform by quadrature in the boundary parameter.

    F(q) = int_0^{2pi} K(q.p(t)) det(p(t), p'(t)) dt with
    K(a) = int_0^1 s exp(-i a s) ds in closed form; the node count is
    doubled until successive values agree to ``tolerance * area``.
    """
    q = _as_wavevectors(q)
    flat = q.reshape(-1, 2)
    scale = tolerance * shape.area()
    previous = None
    n_nodes = FOURIER_START_NODES
    while n_nodes <= FOURIER_MAX_NODES:
        t, wt = shape.parameter_rule(n_nodes)
        p = shape.boundary_point(t)
        dp = shape.boundary_derivative(t)
        jac = (p[:, 0] * dp[:, 1] - p[:, 1] * dp[:, 0]) * wt
        value = _kernel(flat @ p.T) @ jac
        if previous is not None:
            change = np.max(np.abs(value - previous)) if len(flat) else 0.0
            if change <= scale:
                LOG.debug('indicator transform converged with %d nodes',
                          n_nodes)
                return value.reshape(q.shape[:-1])
        previous = value
        n_nodes *= 2
    raise exceptions.QuadratureError(
        reason=_("indicator transform of %(shape)r not converged with "
                 "%(nodes)d nodes") % {'shape': shape,
                                       'nodes': FOURIER_MAX_NODES})


def support_minimum(shape, point=None, n_nodes=1024):
    """min over the boundary of <x - p, nu>, the support constant h."""
    if point is None:
        point = shape.center
    quad = shape.boundary_quadrature(n_nodes)
    return float(np.min(np.sum((quad.nodes - point) * quad.normals, axis=1)))


def disk(radius, center=(0.0, 0.0)):
    return Disk(radius, center=center)


def ellipse(a, b, center=(0.0, 0.0)):
    return Ellipse(a, b, center=center)


def regular_polygon(n_sides, circumradius, center=(0.0, 0.0)):
    return RegularPolygon(n_sides, circumradius, center=center)


def star_radial(r0, amplitude, lobes, center=(0.0, 0.0)):
    return StarRadial(r0, amplitude, lobes, center=center)


def unit_square(side=1.0, center=(0.0, 0.0)):
    """Axis-aligned square, the cell shape."""
    return RegularPolygon(4, side / np.sqrt(2.0), center=center)


def area(shape):
    return shape.area()


def outer_radius(shape):
    return shape.outer_radius()


def inner_radius(shape):
    return shape.inner_radius()


def indicator_fourier(shape, q):
    return shape.indicator_fourier(q)


def boundary_quadrature(shape, n_nodes):
    return shape.boundary_quadrature(n_nodes)


_PARAMETERS = {
    DISK: (Disk, ('radius',), ()),
    ELLIPSE: (Ellipse, ('a', 'b'), ()),
    REGULAR_POLYGON: (RegularPolygon, ('circumradius',), ('n_sides',)),
    STAR_RADIAL: (StarRadial, ('r0', 'amplitude'), ('lobes',)),
}


def from_dict(data):
    """Build a shape from its config block.

    Floats may be given as numbers, decimal strings or hex-float strings.
    """
    if not isinstance(data, dict):
        raise exceptions.InvalidShape(kind='?',
                                      reason=_("shape block must be a mapping"))
    kind = data.get('kind')
    if kind not in _PARAMETERS:
        raise exceptions.InvalidShape(
            kind=kind, reason=_("kind must be one of: %s") % ', '.join(KINDS))
    cls, float_keys, int_keys = _PARAMETERS[kind]
    required = ('kind',) + float_keys + int_keys
    try:
        utils.check_keys(data, required_keys=required,
                         optional_keys=('center',))
        params = dict((k, utils.parse_float(data[k])) for k in float_keys)
        params.update((k, utils.parse_int(data[k])) for k in int_keys)
        center = data.get('center', (0.0, 0.0))
        if len(center) != 2:
            raise ValueError(_("center must have two coordinates"))
        center = tuple(utils.parse_float(c) for c in center)
    except (ValueError, TypeError) as e:
        raise exceptions.InvalidShape(kind=kind, reason=str(e))
    return cls(center=center, **params)


def to_dict(shape):
    return shape.to_dict()
