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

"""Floquet-Bloch fibers of the periodic Dirac operator in plane waves.

A fiber at quasi-momentum theta acts on the modes exp(i(theta + 2 pi n/eps).x)
with |n|_inf <= N.  Basis vectors are ordered mode-major and spin-minor, so
the kinetic part is 2x2 block diagonal with blocks sigma.(theta + 2 pi n/eps)
and the mass couples mode n to mode n' through mhat(n - n') sigma_3.
"""

import logging

import joblib
import numpy as np
from oslo_utils import timeutils
from scipy import linalg

from diraclab._i18n import _
from diraclab.common import exceptions
from diraclab import lattice


LOG = logging.getLogger(__name__)

SIGMA_1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_2 = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
SIGMA_3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

DEFAULT_CUTOFF = 12
DEFAULT_GRID = 9
DEFAULT_MAX_DIMENSION = 20000
# band window in units of m_star when none is configured
DEFAULT_WINDOW_FACTOR = 4.0

CONSTANT = 'constant'
PERIODIC = 'periodic'

CSV_HEADER = ('eps', 'd_eps', 'theta1', 'theta2', 'N', 'value',
              'truncation_indicator')


def fiber_dimension(cutoff):
    return 2 * (2 * cutoff + 1) ** 2


def check_dimension(cutoff, max_dimension=DEFAULT_MAX_DIMENSION):
    dimension = fiber_dimension(cutoff)
    if dimension > max_dimension:
        raise exceptions.FiberTooLarge(dimension=dimension, cutoff=cutoff,
                                       cap=max_dimension)
    return dimension


def mode_indices(cutoff):
    """Integer modes n with |n|_inf <= cutoff, shape ((2N+1)^2, 2)."""
    span = np.arange(-cutoff, cutoff + 1)
    return np.stack(np.meshgrid(span, span, indexing='ij'),
                    axis=-1).reshape(-1, 2)


def theta_grid(epsilon, points):
    """Cell-centered ``points`` x ``points`` grid of the Brillouin zone.

    For odd ``points`` the grid contains theta = 0.
    """
    ticks = 2.0 * np.pi / epsilon * ((np.arange(points) + 0.5) / points -
                                     0.5)
    return np.stack(np.meshgrid(ticks, ticks, indexing='ij'),
                    axis=-1).reshape(-1, 2)


def mass_matrix(mass, cutoff):
    """mhat(n_i - n_j) for all pairs of modes."""
    modes = mode_indices(cutoff)
    if mass.is_constant:
        return mass.m_value * np.eye(len(modes), dtype=complex)
    span = np.arange(-2 * cutoff, 2 * cutoff + 1)
    g = np.stack(np.meshgrid(span, span, indexing='ij'), axis=-1)
    table = mass.fourier_coefficient(g)
    diff = modes[:, None, :] - modes[None, :, :] + 2 * cutoff
    return table[diff[..., 0], diff[..., 1]]


class FiberOperator(object):
    """Hermitian plane-wave matrix of one Bloch fiber."""

    def __init__(self, theta, cutoff, epsilon, matrix, mass_kind):
        self.theta = np.asarray(theta, dtype=float)
        self.cutoff = cutoff
        self.epsilon = epsilon
        self.matrix = matrix
        self.mass_kind = mass_kind
        self._eigh = None

    @property
    def dimension(self):
        return self.matrix.shape[0]

    def hermiticity_residual(self):
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def eigh(self):
        if self._eigh is None:
            try:
                self._eigh = linalg.eigh(self.matrix)
            except linalg.LinAlgError as e:
                raise exceptions.EigenSolverError(problem='fiber', reason=e)
        return self._eigh

    def eigenvalues(self):
        return self.eigh()[0]

    def resolvent(self, z=1j):
        """(A - z)^-1 through the eigendecomposition."""
        vals, vecs = self.eigh()
        return (vecs / (vals - z)) @ vecs.conj().T


class FiberFactory(object):
    """Builds fibers of one operator at any theta; cheap to ship to workers."""

    def __init__(self, epsilon, cutoff, mhat, mass_kind):
        self.epsilon = epsilon
        self.cutoff = cutoff
        self.mhat = mhat
        self.mass_kind = mass_kind
        self.modes = mode_indices(cutoff)

    @classmethod
    def for_mass(cls, config, mass, cutoff,
                 max_dimension=DEFAULT_MAX_DIMENSION):
        check_dimension(cutoff, max_dimension)
        kind = CONSTANT if mass.is_constant else PERIODIC
        return cls(config.epsilon, cutoff, mass_matrix(mass, cutoff), kind)

    def fiber(self, theta):
        theta = np.asarray(theta, dtype=float)
        k = theta + 2.0 * np.pi * self.modes / self.epsilon
        m = len(self.modes)
        h = np.zeros((m, 2, m, 2), dtype=complex)
        h[:, 0, :, 0] = self.mhat
        h[:, 1, :, 1] = -self.mhat
        idx = np.arange(m)
        h[idx, 0, idx, 1] += k[:, 0] - 1j * k[:, 1]
        h[idx, 1, idx, 0] += k[:, 0] + 1j * k[:, 1]
        return FiberOperator(theta, self.cutoff, self.epsilon,
                             h.reshape(2 * m, 2 * m), self.mass_kind)


def assemble_fiber(config, mass, theta, cutoff,
                   max_dimension=DEFAULT_MAX_DIMENSION):
    if cutoff < 2:
        raise exceptions.InvalidLattice(reason=_("cutoff N must be >= 2"))
    return FiberFactory.for_mass(config, mass, cutoff,
                                 max_dimension).fiber(theta)


def free_eigenvalues(theta, cutoff, epsilon, m_star):
    """Exact spectrum of the constant-mass fiber, sorted."""
    k = np.asarray(theta) + 2.0 * np.pi * mode_indices(cutoff) / epsilon
    energy = np.sqrt(np.sum(k * k, axis=1) + m_star ** 2)
    return np.sort(np.concatenate([-energy, energy]))


def fiber_resolvent_diff(fiber_eps, fiber_star):
    """Spectral norm of (A_eps - i)^-1 - (A_star - i)^-1."""
    if fiber_eps.dimension != fiber_star.dimension:
        raise exceptions.DimensionMismatch(left=fiber_eps.dimension,
                                           right=fiber_star.dimension)
    if not np.allclose(fiber_eps.theta, fiber_star.theta, rtol=0.0,
                       atol=1e-14):
        raise exceptions.DimensionMismatch(left=fiber_eps.theta.tolist(),
                                           right=fiber_star.theta.tolist())
    diff = fiber_eps.resolvent() - fiber_star.resolvent()
    return float(linalg.svdvals(diff)[0])


def _difference_at(eps_factory, star_factory, theta):
    fiber = eps_factory.fiber(theta)
    value = fiber_resolvent_diff(fiber, star_factory.fiber(theta))
    return value, fiber.eigenvalues()


def _spectrum_at(factory, theta):
    return factory.fiber(theta).eigenvalues()


class BandStructure(object):
    """Eigenvalues of the fibers over a theta grid."""

    def __init__(self, thetas, eigenvalues, epsilon=None, d=None,
                 cutoff=None):
        self.thetas = np.asarray(thetas, dtype=float).reshape(-1, 2)
        self.eigenvalues = [np.sort(np.asarray(v)) for v in eigenvalues]
        self.epsilon = epsilon
        self.d = d
        self.cutoff = cutoff

    @property
    def gap_lower(self):
        negatives = [v[v < 0.0] for v in self.eigenvalues]
        tops = [n[-1] for n in negatives if len(n)]
        return float(max(tops)) if tops else None

    @property
    def gap_upper(self):
        positives = [v[v >= 0.0] for v in self.eigenvalues]
        bottoms = [p[0] for p in positives if len(p)]
        return float(min(bottoms)) if bottoms else None

    def has_gap(self):
        lo, hi = self.gap_lower, self.gap_upper
        return lo is not None and hi is not None and lo < 0.0 < hi

    def symmetry_residual(self):
        return max(float(np.max(np.abs(v + v[::-1])))
                   for v in self.eigenvalues)

    def interior_coverage(self, window):
        """Half the largest gap of the inverted bands within the window.

        Bounds the distance from any point between the extreme inverted
        values to the computed inverse spectrum.
        """
        values = np.concatenate(self.eigenvalues)
        values = values[(values != 0.0) & (np.abs(values) <= window)]
        if len(values) < 2:
            return None
        inverse = np.sort(1.0 / values)
        return float(0.5 * np.max(np.diff(inverse)))

    def rows(self, window=None):
        for theta, vals in zip(self.thetas, self.eigenvalues):
            if window is not None:
                vals = vals[np.abs(vals) <= window]
            for value in vals:
                yield (self.epsilon, self.d, theta[0], theta[1],
                       self.cutoff, float(value), None)

    def to_dict(self):
        return {'gap_lower': self.gap_lower, 'gap_upper': self.gap_upper,
                'points': len(self.thetas), 'cutoff': self.cutoff}


def bands(config, mass, theta_grid_points=DEFAULT_GRID,
          cutoff=DEFAULT_CUTOFF, workers=1,
          max_dimension=DEFAULT_MAX_DIMENSION):
    factory = FiberFactory.for_mass(config, mass, cutoff, max_dimension)
    thetas = theta_grid(config.epsilon, theta_grid_points)
    LOG.info('Computing bands on %d fibers of dimension %d',
             len(thetas), fiber_dimension(cutoff))
    spectra = joblib.Parallel(n_jobs=workers)(
        joblib.delayed(_spectrum_at)(factory, theta) for theta in thetas)
    return BandStructure(thetas, spectra, epsilon=config.epsilon,
                         d=config.d, cutoff=cutoff)


def band_window(window, m_star):
    if window is None:
        return DEFAULT_WINDOW_FACTOR * max(m_star, 1.0)
    return window


def hausdorff_gap_check(bands_eps, m_star):
    """Endpoint distance of the inverted gap, divided by m_star^2."""
    lo, hi = bands_eps.gap_lower, bands_eps.gap_upper
    if not bands_eps.has_gap():
        raise exceptions.NoSpectralGap(lower=lo, upper=hi)
    return max(abs(lo + m_star), abs(hi - m_star)) / m_star ** 2


class NRCResult(object):
    """Grid maximum of the fiber resolvent difference with provenance.

    ``evaluations`` holds (theta, value, spectrum of the D_eps fiber) for
    every evaluated theta, grid points first.
    """

    def __init__(self, value, theta, cutoff, grid, evaluations,
                 grid_value=None, truncation_indicator=None,
                 doubled_value=None):
        self.value = value
        self.theta = theta
        self.cutoff = cutoff
        self.grid = grid
        self.evaluations = evaluations
        self.grid_value = value if grid_value is None else grid_value
        self.truncation_indicator = truncation_indicator
        self.doubled_value = doubled_value

    @property
    def refinement_gain(self):
        return self.value - self.grid_value

    def band_structure(self, epsilon=None, d=None):
        """Bands of D_eps over every evaluated theta."""
        return BandStructure([e[0] for e in self.evaluations],
                             [e[2] for e in self.evaluations],
                             epsilon=epsilon, d=d, cutoff=self.cutoff)

    def rows(self, epsilon, d):
        for theta, value, _spectrum in self.evaluations:
            indicator = None
            if np.array_equal(theta, self.theta):
                indicator = self.truncation_indicator
            yield (epsilon, d, theta[0], theta[1], self.cutoff, value,
                   indicator)

    def to_dict(self):
        return {'value': self.value, 'theta': list(self.theta),
                'cutoff': self.cutoff, 'grid': self.grid,
                'grid_value': self.grid_value,
                'truncation_indicator': self.truncation_indicator,
                'doubled_value': self.doubled_value}


def _evaluate(eps_factory, star_factory, thetas, workers):
    results = joblib.Parallel(n_jobs=workers)(
        joblib.delayed(_difference_at)(eps_factory, star_factory, theta)
        for theta in thetas)
    return [(np.asarray(theta, dtype=float), float(value), spectrum)
            for theta, (value, spectrum) in zip(thetas, results)]


def _argmax(evaluations):
    theta, value, _spectrum = max(evaluations, key=lambda e: e[1])
    return theta, value


def truncation_indicator(coarse, fine):
    if coarse > 0.0:
        return abs(fine - coarse) / coarse
    return abs(fine - coarse)


def nrc_estimate(config, mass, theta_grid_points=DEFAULT_GRID,
                 cutoff=DEFAULT_CUTOFF, refine=True, truncation_check=True,
                 workers=1, max_dimension=DEFAULT_MAX_DIMENSION):
    """Max over theta of the fiber resolvent difference of D_eps and D.

    The grid maximum is a lower bound of the supremum; a 3x3 pass at half
    spacing around the maximiser reports how much the grid missed.  The
    estimate is repeated with cutoff 2N at the maximiser.
    """
    if cutoff < 2:
        raise exceptions.InvalidLattice(reason=_("cutoff N must be >= 2"))
    watch = timeutils.StopWatch()
    watch.start()
    star = lattice.ConstantMass(config.m_star)
    eps_factory = FiberFactory.for_mass(config, mass, cutoff, max_dimension)
    star_factory = FiberFactory.for_mass(config, star, cutoff, max_dimension)
    thetas = theta_grid(config.epsilon, theta_grid_points)
    LOG.info('eps=%r: %d fibers of dimension %d', config.epsilon,
             len(thetas), fiber_dimension(cutoff))
    evaluations = _evaluate(eps_factory, star_factory, thetas, workers)
    best_theta, grid_value = _argmax(evaluations)
    best = grid_value
    if refine:
        step = np.pi / (config.epsilon * theta_grid_points)
        local = [best_theta + step * np.array([a, b])
                 for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)]
        extra = _evaluate(eps_factory, star_factory, local, workers)
        evaluations.extend(extra)
        theta, value = _argmax(extra)
        if value > best:
            best_theta, best = theta, value
    result = NRCResult(best, best_theta, cutoff, theta_grid_points,
                       evaluations, grid_value=grid_value)
    if truncation_check:
        doubled, _spectrum = _difference_at(
            FiberFactory.for_mass(config, mass, 2 * cutoff, max_dimension),
            FiberFactory.for_mass(config, star, 2 * cutoff, max_dimension),
            best_theta)
        result.doubled_value = doubled
        result.truncation_indicator = truncation_indicator(best, doubled)
    watch.stop()
    LOG.info('eps=%r: nrc=%r at theta=%s (grid %r, truncation %r) in %.1fs',
             config.epsilon, best, best_theta.tolist(), grid_value,
             result.truncation_indicator, watch.elapsed())
    return result
