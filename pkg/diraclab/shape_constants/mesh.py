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

"""Sector meshes of star-shaped domains.

The shape is split into the sectors of its boundary charts.  Level ``i`` of
a mesh with ``M`` levels is the boundary curve shrunk by ``i/M`` towards the
center and carries ``i`` nodes per sector, so every sector is a triangle
subdivided ``M`` times.  Level ``M`` nodes lie exactly on the analytic
boundary.
"""

import functools
import logging
import math

import numpy as np

from diraclab._i18n import _
from diraclab.common import exceptions
from diraclab.shape_constants import eigen


LOG = logging.getLogger(__name__)

# Boundary samples per sector used to measure sector arc lengths.
ARC_SAMPLES = 256


class Mesh(object):
    """Conforming P1 triangulation of a shape."""

    def __init__(self, shape, levels, vertices, triangles, boundary_edges,
                 h):
        self.shape = shape
        self.levels = levels
        self.vertices = vertices
        self.triangles = triangles
        self.boundary_edges = boundary_edges
        self.h = h

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_triangles(self):
        return len(self.triangles)

    @functools.cached_property
    def areas(self):
        p = self.vertices[self.triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def edges(self):
        t = self.triangles
        pairs = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.unique(np.sort(pairs, axis=1), axis=0)

    def max_edge(self):
        e = self.edges()
        d = self.vertices[e[:, 1]] - self.vertices[e[:, 0]]
        return float(np.max(np.hypot(d[:, 0], d[:, 1])))

    def boundary_nodes(self):
        return self.boundary_edges[:, 0]

    @functools.cached_property
    def matrices(self):
        return eigen.assemble(self)

    def refined(self):
        """The mesh with twice as many levels."""
        return sector_mesh(self.shape, 2 * self.levels, h=0.5 * self.h)

    def __repr__(self):
        return '<Mesh %s levels=%d vertices=%d triangles=%d>' % (
            self.shape.kind, self.levels, self.n_vertices, self.n_triangles)


def _node_id(level, sector, j, n_sectors):
    if level == 0:
        return np.zeros_like(j)
    ring = n_sectors * level
    return 1 + n_sectors * level * (level - 1) // 2 + \
        np.mod(sector * level + j, ring)


def sector_lengths(shape):
    """Largest radial extent and largest sector arc length."""
    breaks = shape.sectors()
    arc = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        t = np.linspace(lo, hi, ARC_SAMPLES + 1)
        p = shape.boundary_point(t)
        arc = max(arc, float(np.sum(np.hypot(*np.diff(p, axis=0).T))))
    t = np.linspace(0.0, 2.0 * np.pi, ARC_SAMPLES * (len(breaks) - 1),
                    endpoint=False)
    p = shape.boundary_point(np.union1d(t, breaks[:-1]))
    radial = float(np.max(np.hypot(p[:, 0], p[:, 1])))
    return radial, arc


def sector_mesh(shape, levels, h=None):
    breaks = shape.sectors()
    n_sectors = len(breaks) - 1
    center = shape.center
    vertices = [center[None, :]]
    for i in range(1, levels + 1):
        t = np.concatenate([lo + (hi - lo) * np.arange(i) / i
                            for lo, hi in zip(breaks[:-1], breaks[1:])])
        vertices.append(center + (i / levels) * shape.boundary_point(t))
    vertices = np.concatenate(vertices)

    triangles = []
    for i in range(levels):
        for k in range(n_sectors):
            j = np.arange(i + 1)
            up = np.column_stack([_node_id(i, k, j, n_sectors),
                                  _node_id(i + 1, k, j, n_sectors),
                                  _node_id(i + 1, k, j + 1, n_sectors)])
            triangles.append(up)
            if i > 0:
                j = np.arange(i)
                down = np.column_stack([_node_id(i, k, j, n_sectors),
                                        _node_id(i + 1, k, j + 1, n_sectors),
                                        _node_id(i, k, j + 1, n_sectors)])
                triangles.append(down)
    triangles = np.concatenate(triangles).astype(np.intp)

    p = vertices[triangles]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    scale = float(np.max(np.abs(det)))
    if np.any(np.abs(det) <= 1e-12 * scale):
        raise exceptions.MeshError(
            reason=_("degenerate triangles in the mesh of %r") % shape)
    flip = det < 0.0
    triangles[flip] = triangles[flip][:, [0, 2, 1]]

    ring = n_sectors * levels
    first = 1 + n_sectors * levels * (levels - 1) // 2
    outer = first + np.arange(ring)
    boundary_edges = np.column_stack([outer, np.roll(outer, -1)])

    if h is None:
        radial, arc = sector_lengths(shape)
        h = max(radial, arc) / levels
    LOG.debug('meshed %s with %d levels: %d vertices, %d triangles',
              shape.kind, levels, len(vertices), len(triangles))
    return Mesh(shape, levels, vertices, triangles, boundary_edges, h)


def levels_for(shape, h):
    radial, arc = sector_lengths(shape)
    return max(2, int(math.ceil(max(radial, arc) / h - 1e-9)))


def mesh_shape(shape, h):
    """Mesh ``shape`` with target edge length ``h``.

    Requires 0 < h <= inner_radius/2.
    """
    if not 0.0 < h <= 0.5 * shape.inner_radius() * (1.0 + 1e-12):
        raise exceptions.MeshError(
            reason=_("mesh size %(h)r must lie in (0, %(max)r]") % {
                'h': h, 'max': 0.5 * shape.inner_radius()})
    return sector_mesh(shape, levels_for(shape, h), h=h)
