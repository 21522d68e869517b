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

"""Test functions with analytic gradients, scalar and spinor valued."""

import abc

import numpy as np

from diraclab._i18n import _
from diraclab import bloch
from diraclab import shapes


FD_STEP = 1e-5


def _flat(points):
    points = np.asarray(points, dtype=float)
    return points.reshape(-1, 2), points.shape[:-1]


class TestFunction(object, metaclass=abc.ABCMeta):
    """Scalar function on the plane.

    ``pole`` is the point where the function is singular, if any.
    """

    kind = None
    pole = None

    @abc.abstractmethod
    def value(self, points):
        pass

    @abc.abstractmethod
    def gradient(self, points):
        """Gradient at ``points``, shape ``points.shape``."""

    def finite_difference_error(self, points, step=FD_STEP):
        """Relative deviation of the gradient from central differences."""
        points = np.asarray(points, dtype=float)
        numeric = np.empty(points.shape, dtype=complex)
        for j in range(2):
            shift = np.zeros(2)
            shift[j] = step
            numeric[..., j] = (self.value(points + shift) -
                               self.value(points - shift)) / (2.0 * step)
        exact = self.gradient(points)
        scale = max(float(np.max(np.abs(exact))), 1e-300)
        return float(np.max(np.abs(numeric - exact))) / scale

    def to_dict(self):
        return {'kind': self.kind}


class Constant(TestFunction):
    kind = 'constant'

    def __init__(self, value=1.0):
        self.constant = complex(value)

    def value(self, points):
        return np.full(np.shape(points)[:-1], self.constant)

    def gradient(self, points):
        return np.zeros(np.shape(points), dtype=complex)

    def to_dict(self):
        return {'kind': self.kind, 'value': repr(self.constant)}


class RadialLog(TestFunction):
    """f = ln |x - pole|."""

    kind = 'radial_log'

    def __init__(self, pole=(0.0, 0.0)):
        self.pole = np.asarray(pole, dtype=float)

    def value(self, points):
        rel = np.asarray(points, dtype=float) - self.pole
        return np.log(np.hypot(rel[..., 0], rel[..., 1])) + 0j

    def gradient(self, points):
        rel = np.asarray(points, dtype=float) - self.pole
        r2 = np.sum(rel * rel, axis=-1)
        return rel / r2[..., None] + 0j

    def to_dict(self):
        return {'kind': self.kind, 'pole': self.pole.tolist()}


class TrigPolynomial(TestFunction):
    """sum_n c_n exp(2 pi i n.(x - origin)/period) over |n|_inf <= K.

    The exponentials factorise over the two axes, so evaluation costs
    O(points * K^2) with O(points * K) memory.
    """

    kind = 'trig_polynomial'

    def __init__(self, coefficients, period, origin=(0.0, 0.0), seed=None):
        self.coefficients = np.asarray(coefficients, dtype=complex)
        rows, cols = self.coefficients.shape
        if rows != cols or rows % 2 != 1:
            raise ValueError(_("coefficients must be a square array of odd "
                               "size, got %s") % (self.coefficients.shape,))
        self.period = float(period)
        self.origin = np.asarray(origin, dtype=float)
        self.seed = seed

    @property
    def max_frequency(self):
        return (self.coefficients.shape[0] - 1) // 2

    @classmethod
    def random(cls, seed, max_frequency, period, origin=(0.0, 0.0)):
        """Seeded coefficients decaying like 1/(1 + |n|^2)."""
        rng = np.random.default_rng(seed)
        span = np.arange(-max_frequency, max_frequency + 1)
        decay = 1.0 / (1.0 + span[:, None] ** 2 + span[None, :] ** 2)
        size = (len(span), len(span))
        coefficients = (rng.standard_normal(size) +
                        1j * rng.standard_normal(size)) * decay
        return cls(coefficients, period, origin, seed=seed)

    def _factors(self, points):
        flat, lead = _flat(points)
        k = 2.0 * np.pi / self.period * np.arange(-self.max_frequency,
                                                  self.max_frequency + 1)
        rel = flat - self.origin
        ex = np.exp(1j * rel[:, 0:1] * k[None, :])
        ey = np.exp(1j * rel[:, 1:2] * k[None, :])
        return ex, ey, k, lead

    def value(self, points):
        ex, ey, _k, lead = self._factors(points)
        return np.sum((ex @ self.coefficients) * ey, axis=1).reshape(lead)

    def gradient(self, points):
        ex, ey, k, lead = self._factors(points)
        dx = np.sum(((ex * 1j * k) @ self.coefficients) * ey, axis=1)
        dy = np.sum((ex @ self.coefficients) * (ey * 1j * k), axis=1)
        return np.stack([dx, dy], axis=-1).reshape(lead + (2,))

    def to_dict(self):
        return {'kind': self.kind, 'seed': self.seed,
                'max_frequency': self.max_frequency, 'period': self.period}


def random_function(seed, max_frequency, period, origin=(0.0, 0.0)):
    return TrigPolynomial.random(seed, max_frequency, period, origin)


def dirac_free(jacobian):
    """-i sigma.grad v from the Jacobian ``[..., component, direction]``."""
    return -1j * (np.einsum('ab,...b->...a', bloch.SIGMA_1,
                            jacobian[..., 0]) +
                  np.einsum('ab,...b->...a', bloch.SIGMA_2,
                            jacobian[..., 1]))


def apply_sigma3(values):
    return np.einsum('ab,...b->...a', bloch.SIGMA_3, values)


class Spinor(object):
    """C^2-valued function built from two scalar test functions."""

    def __init__(self, first, second):
        self.components = (first, second)

    def value(self, points):
        return np.stack([c.value(points) for c in self.components], axis=-1)

    def jacobian(self, points):
        """Derivatives, shape ``points.shape[:-1] + (2, 2)``."""
        return np.stack([c.gradient(points) for c in self.components],
                        axis=-2)

    def support(self):
        return None


class ConstantSpinor(Spinor):

    def __init__(self, xi):
        xi = np.asarray(xi, dtype=complex)
        super(ConstantSpinor, self).__init__(Constant(xi[0]), Constant(xi[1]))
        self.xi = xi


class SpinorBump(Spinor):
    """Polynomial spinor times the smooth bump exp(1 - 1/(1 - |x-c|^2/R^2)).

    The product vanishes with every derivative outside the disk of radius
    R around c.
    """

    def __init__(self, center, radius, first, second, seed=None):
        super(SpinorBump, self).__init__(first, second)
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.seed = seed

    @classmethod
    def random(cls, seed, center, radius, max_frequency, period):
        first = TrigPolynomial.random((seed, 0), max_frequency, period,
                                      origin=center)
        second = TrigPolynomial.random((seed, 1), max_frequency, period,
                                       origin=center)
        return cls(center, radius, first, second, seed=seed)

    def support(self):
        return shapes.Disk(self.radius, center=tuple(self.center))

    def envelope(self, points):
        """Bump values and gradients."""
        rel = np.asarray(points, dtype=float) - self.center
        s = np.sum(rel * rel, axis=-1) / self.radius ** 2
        inside = s < 1.0
        gap = np.where(inside, 1.0 - s, 1.0)
        bump = np.where(inside, np.exp(1.0 - 1.0 / gap), 0.0)
        slope = np.where(inside, -bump / gap ** 2, 0.0)
        grad = slope[..., None] * 2.0 * rel / self.radius ** 2
        return bump, grad

    def value(self, points):
        bump, _grad = self.envelope(points)
        return bump[..., None] * super(SpinorBump, self).value(points)

    def jacobian(self, points):
        bump, grad = self.envelope(points)
        inner = super(SpinorBump, self).value(points)
        inner_jac = super(SpinorBump, self).jacobian(points)
        return (inner[..., :, None] * grad[..., None, :] +
                bump[..., None, None] * inner_jac)

    def to_dict(self):
        return {'kind': 'spinor_bump', 'seed': self.seed,
                'center': self.center.tolist(), 'radius': self.radius}
