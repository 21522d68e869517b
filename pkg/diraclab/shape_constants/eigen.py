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

"""P1 finite element eigenvalue problems on a mesh.

Stiffness ``K``, consistent volume mass ``M`` and boundary mass ``B`` are
assembled once per mesh.  Below ``DENSE_LIMIT`` unknowns every problem is
solved as a dense generalized symmetric problem; above it by shift-invert
Lanczos or LOBPCG.  Constant modes are removed by restriction to the
volume-mean-zero subspace ``{v : 1'Mv = 0}``.
"""

import logging

import numpy as np
from scipy import linalg
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from diraclab._i18n import _
from diraclab.common import exceptions


LOG = logging.getLogger(__name__)

DENSE_LIMIT = 4000
LOBPCG_TOLERANCE = 1e-10
LOBPCG_MAXITER = 2000
# accepted lobpcg residual, relative to max(1, |eigenvalue|)
LOBPCG_RESIDUAL_LIMIT = 1e-6

NEUMANN = 'neumann'
STEKLOV = 'steklov'
ROBIN = 'robin'
TRACE = 'trace'


class Matrices(object):
    """Stiffness, volume mass and boundary mass of a mesh."""

    def __init__(self, stiffness, mass, boundary):
        self.stiffness = stiffness
        self.mass = mass
        self.boundary = boundary
        ones = np.ones(stiffness.shape[0])
        self.mean_weights = mass @ ones
        self.area = float(ones @ self.mean_weights)
        self.perimeter = float(ones @ (boundary @ ones))

    @property
    def size(self):
        return self.stiffness.shape[0]

    def dense(self):
        return (self.stiffness.toarray(), self.mass.toarray(),
                self.boundary.toarray())

    def mean_zero_basis(self):
        """Orthonormal basis of the volume-mean-zero subspace."""
        return linalg.null_space(self.mean_weights[None, :])


def assemble(mesh):
    n = mesh.n_vertices
    t = mesh.triangles
    p = mesh.vertices[t]
    det = ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1]) -
           (p[:, 1, 1] - p[:, 0, 1]) * (p[:, 2, 0] - p[:, 0, 0]))
    area = 0.5 * det
    # Gradients of the barycentric coordinates.
    grads = np.empty((len(t), 3, 2))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        grads[:, i, 0] = (p[:, j, 1] - p[:, k, 1]) / det
        grads[:, i, 1] = (p[:, k, 0] - p[:, j, 0]) / det
    local_k = area[:, None, None] * np.einsum('tid,tjd->tij', grads, grads)
    local_m = (area / 12.0)[:, None, None] * (np.ones((3, 3)) + np.eye(3))

    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    stiffness = sparse.coo_matrix((local_k.ravel(), (rows, cols)),
                                  shape=(n, n)).tocsr()
    mass = sparse.coo_matrix((local_m.ravel(), (rows, cols)),
                             shape=(n, n)).tocsr()

    e = mesh.boundary_edges
    d = mesh.vertices[e[:, 1]] - mesh.vertices[e[:, 0]]
    length = np.hypot(d[:, 0], d[:, 1])
    local_b = (length / 6.0)[:, None, None] * np.array([[2.0, 1.0],
                                                        [1.0, 2.0]])
    brows = np.repeat(e, 2, axis=1).ravel()
    bcols = np.tile(e, (1, 2)).ravel()
    boundary = sparse.coo_matrix((local_b.ravel(), (brows, bcols)),
                                 shape=(n, n)).tocsr()
    return Matrices(stiffness, mass, boundary)


def _matrices(mesh_or_matrices):
    if isinstance(mesh_or_matrices, Matrices):
        return mesh_or_matrices
    return mesh_or_matrices.matrices


def _failure(problem, error):
    LOG.debug('%s eigen-solve failed: %s', problem, error)
    return exceptions.EigenSolverError(problem=problem, reason=error)


def _lobpcg(problem, a, x0, **kwargs):
    """First lobpcg eigenvalue; EigenSolverError unless it converged."""
    vals, _vecs, history = sparse_linalg.lobpcg(
        a, x0, tol=LOBPCG_TOLERANCE, maxiter=LOBPCG_MAXITER,
        retResidualNormsHistory=True, **kwargs)
    value = float(vals[0])
    if len(history):
        residual = float(min(np.max(r) for r in history))
        if residual > LOBPCG_RESIDUAL_LIMIT * max(1.0, abs(value)):
            raise _failure(problem, _(
                "lobpcg not converged after %(iterations)d iterations, "
                "residual %(residual)r") % {'iterations': len(history),
                                            'residual': residual})
    return value


def neumann_lambda(mesh):
    """First non-zero Neumann eigenvalue of the mesh domain."""
    mats = _matrices(mesh)
    try:
        if mats.size <= DENSE_LIMIT:
            k, m, _b = mats.dense()
            z = mats.mean_zero_basis()
            value = linalg.eigh(z.T @ k @ z, z.T @ m @ z,
                                eigvals_only=True, subset_by_index=[0, 0])[0]
        else:
            vals, vecs = sparse_linalg.eigsh(
                mats.stiffness, k=3, M=mats.mass, sigma=-1.0, which='LM')
            # Drop the constant mode, the vector with non-zero mean.
            means = np.abs(mats.mean_weights @ vecs) / np.sqrt(mats.area)
            value = np.min(vals[means < 0.5])
    except (linalg.LinAlgError, sparse_linalg.ArpackError, ValueError) as e:
        raise _failure(NEUMANN, e)
    LOG.debug('Neumann eigenvalue %r on %d unknowns', value, mats.size)
    return float(value)


def steklov_lambda(mesh):
    """Smallest non-zero Steklov-type eigenvalue.

    1/max of |v|^2_boundary / |grad v|^2 over volume-mean-zero v.
    """
    mats = _matrices(mesh)
    try:
        if mats.size <= DENSE_LIMIT:
            k, _m, b = mats.dense()
            z = mats.mean_zero_basis()
            n = z.shape[1]
            mu = linalg.eigh(z.T @ b @ z, z.T @ k @ z, eigvals_only=True,
                             subset_by_index=[n - 1, n - 1])[0]
        else:
            w = mats.mean_weights
            # K + w w'/|D| equals K on mean-zero vectors and the
            # constraint 1'(K + w w'/|D|)v = 0 is exactly w'v = 0.
            shifted = sparse_linalg.LinearOperator(
                mats.stiffness.shape,
                matvec=lambda v: (mats.stiffness @ v +
                                  w * (w @ v) / mats.area),
                dtype=float)
            x0 = np.random.default_rng(0).standard_normal((mats.size, 1))
            mu = _lobpcg(STEKLOV, mats.boundary, x0, B=shifted,
                         Y=np.ones((mats.size, 1)), largest=True)
    except (linalg.LinAlgError, sparse_linalg.ArpackError, ValueError) as e:
        raise _failure(STEKLOV, e)
    if not mu > 0.0:
        raise _failure(STEKLOV, _("non-positive boundary eigenvalue"))
    return float(1.0 / mu)


def robin_lambda(mesh, gamma):
    """Principal eigenvalue of -Laplace with df/dnu + gamma f = 0."""
    mats = _matrices(mesh)
    if gamma == 0.0:
        return 0.0
    try:
        if mats.size <= DENSE_LIMIT:
            k, m, b = mats.dense()
            value = linalg.eigh(k + gamma * b, m, eigvals_only=True,
                                subset_by_index=[0, 0])[0]
        else:
            x0 = np.ones((mats.size, 1))
            value = _lobpcg(ROBIN, mats.stiffness + gamma * mats.boundary,
                            x0, B=mats.mass, largest=False)
    except (linalg.LinAlgError, sparse_linalg.ArpackError, ValueError) as e:
        raise _failure(ROBIN, e)
    return float(value)


def trace_constant(mesh):
    """Norm of the trace map H1(domain) -> L2(boundary)."""
    mats = _matrices(mesh)
    try:
        if mats.size <= DENSE_LIMIT:
            k, m, b = mats.dense()
            n = mats.size
            value = linalg.eigh(b, k + m, eigvals_only=True,
                                subset_by_index=[n - 1, n - 1])[0]
        else:
            vals = sparse_linalg.eigsh(
                mats.boundary, k=1, M=(mats.stiffness + mats.mass).tocsc(),
                which='LA', return_eigenvectors=False)
            value = vals[0]
    except (linalg.LinAlgError, sparse_linalg.ArpackError, ValueError) as e:
        raise _failure(TRACE, e)
    return float(np.sqrt(value))


class SpectralEstimate(object):
    """A value extrapolated from a mesh and its refinement."""

    def __init__(self, value, error, coarse, fine):
        self.value = value
        self.error = error
        self.coarse = coarse
        self.fine = fine

    def to_dict(self):
        return {'value': self.value, 'error': self.error,
                'coarse': self.coarse, 'fine': self.fine}

    def __repr__(self):
        return 'SpectralEstimate(%r +- %r)' % (self.value, self.error)


def richardson(solver, mesh, *args, **kwargs):
    """Extrapolate an O(h^2) quantity over one uniform refinement.

    Pass ``fine`` to reuse an already refined mesh; ``squared=True``
    extrapolates the square of the solver value (for norms).
    """
    fine_mesh = kwargs.pop('fine', None) or mesh.refined()
    squared = kwargs.pop('squared', False)
    coarse = solver(mesh, *args)
    fine = solver(fine_mesh, *args)
    if squared:
        value = np.sqrt(max((4.0 * fine ** 2 - coarse ** 2) / 3.0, 0.0))
    else:
        value = (4.0 * fine - coarse) / 3.0
    error = abs(value - fine)
    LOG.debug('%s: coarse=%r fine=%r extrapolated=%r', solver.__name__,
              coarse, fine, value)
    return SpectralEstimate(float(value), float(error), coarse, fine)
