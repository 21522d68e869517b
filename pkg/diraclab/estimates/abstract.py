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

"""Resolvent comparison of two self-adjoint operators on finite matrices.

If |(D u, v) - (u, Dt v)| <= c |u|_a |v|_b in the graph norms
|u|_a = (a|u|^2 + |D u|^2)^(1/2) and |v|_b = (b|v|^2 + |Dt v|^2)^(1/2), then
|(Dt - i)^-1 - (D - i)^-1| <= c ((a + 1)(b + 1))^(1/2).
"""

import logging
import math

import joblib
import numpy as np
from scipy import linalg

from diraclab.common import exceptions
from diraclab.estimates import report


LOG = logging.getLogger(__name__)

ABSTRACT_RESOLVENT = 'abstract_resolvent'
ABSTRACT_TIGHTNESS = 'abstract_tightness'
FORM_ASSUMPTION = 'form_assumption'

HERMITIAN_TOLERANCE = 1e-13
DEFAULT_TRIALS = 16
DEFAULT_MAX_DIMENSION = 20
# every third pair of a corpus is a rank-one perturbation
RANK_ONE_EVERY = 3


def _random_hermitian(rng, dimension):
    g = (rng.standard_normal((dimension, dimension)) +
         1j * rng.standard_normal((dimension, dimension)))
    return 0.5 * (g + g.conj().T)


def _hermitian_residual(matrix):
    scale = max(1.0, float(np.max(np.abs(matrix), initial=0.0)))
    return float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0)) / scale


def _inverse_graph_weight(matrix, shift):
    """(shift + matrix^2)^(-1/2) through the spectral decomposition."""
    values, vectors = linalg.eigh(matrix)
    weights = 1.0 / np.sqrt(shift + values ** 2)
    return (vectors * weights) @ vectors.conj().T


class MatrixPair(object):
    """Hermitian matrices D (``first``) and Dt (``second``)."""

    def __init__(self, first, second, a=1.0, b=1.0, seed=None):
        self.first = np.asarray(first, dtype=complex)
        self.second = np.asarray(second, dtype=complex)
        if self.first.shape != self.second.shape or \
                self.first.ndim != 2 or \
                self.first.shape[0] != self.first.shape[1]:
            raise exceptions.DimensionMismatch(left=self.first.shape,
                                               right=self.second.shape)
        for name, matrix in (('D', self.first), ('Dt', self.second)):
            residual = _hermitian_residual(matrix)
            if residual > HERMITIAN_TOLERANCE:
                raise exceptions.NotHermitian(name=name, residual=residual)
        self.a = float(a)
        self.b = float(b)
        self.seed = seed

    @classmethod
    def random(cls, seed, dimension=None,
               max_dimension=DEFAULT_MAX_DIMENSION):
        """Seeded pair with a perturbation of random strength."""
        rng = np.random.default_rng(seed)
        if dimension is None:
            dimension = int(rng.integers(2, max_dimension + 1))
        first = _random_hermitian(rng, dimension)
        strength = 10.0 ** rng.uniform(-3.0, 0.0)
        second = first + strength * _random_hermitian(rng, dimension)
        return cls(first, second, seed=seed)

    @classmethod
    def rank_one(cls, seed, dimension=None, delta=None,
                 max_dimension=DEFAULT_MAX_DIMENSION):
        """Dt = D + delta w w* with a random unit vector w."""
        rng = np.random.default_rng(seed)
        if dimension is None:
            dimension = int(rng.integers(2, max_dimension + 1))
        first = _random_hermitian(rng, dimension)
        w = rng.standard_normal(dimension) + 1j * rng.standard_normal(
            dimension)
        w /= np.linalg.norm(w)
        if delta is None:
            delta = rng.uniform(-1.0, 1.0)
        second = first + delta * np.outer(w, w.conj())
        second = 0.5 * (second + second.conj().T)
        return cls(first, second, seed=seed)

    @property
    def dimension(self):
        return self.first.shape[0]

    def form(self, u, v):
        """(D u, v) - (u, Dt v) = v* (D - Dt) u."""
        return complex(np.vdot(v, (self.first - self.second) @ u))

    def graph_norms(self, u, v):
        gu = math.sqrt(self.a * np.vdot(u, u).real +
                       np.vdot(self.first @ u, self.first @ u).real)
        gv = math.sqrt(self.b * np.vdot(v, v).real +
                       np.vdot(self.second @ v, self.second @ v).real)
        return gu, gv

    def form_norm(self):
        """Smallest c bounding the form difference in the graph norms."""
        left = _inverse_graph_weight(self.second, self.b)
        right = _inverse_graph_weight(self.first, self.a)
        whitened = left @ (self.first - self.second) @ right
        return float(linalg.svdvals(whitened)[0])

    def resolvent_difference(self):
        eye = np.eye(self.dimension)
        diff = (linalg.inv(self.second - 1j * eye) -
                linalg.inv(self.first - 1j * eye))
        return float(linalg.svdvals(diff)[0])

    def bound(self, c=None):
        if c is None:
            c = self.form_norm()
        return c * math.sqrt((self.a + 1.0) * (self.b + 1.0))

    def tightness_factor(self):
        """Largest possible ratio of the bound to the actual difference."""
        return math.sqrt((self.a + 1.0) * (self.b + 1.0)) / (
            min(1.0, math.sqrt(self.a)) * min(1.0, math.sqrt(self.b)))


def abstract_scheme_check(pair, trials=DEFAULT_TRIALS, seed=None):
    """Check the resolvent bound, its tightness and the form assumption.

    The form assumption is sampled on ``trials`` random vector pairs; the
    largest observed ratio must not exceed the computed c.
    """
    c = pair.form_norm()
    actual = pair.resolvent_difference()
    bound = pair.bound(c)
    rows = [
        report.CheckRow(ABSTRACT_RESOLVENT, actual, bound, seed=seed,
                        detail='dim=%d c=%r' % (pair.dimension, c)),
        report.CheckRow(ABSTRACT_TIGHTNESS, bound,
                        pair.tightness_factor() * actual, seed=seed),
    ]
    rng = np.random.default_rng((0 if seed is None else seed, trials))
    ratio = 0.0
    n = pair.dimension
    for _i in range(trials):
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        gu, gv = pair.graph_norms(u, v)
        ratio = max(ratio, abs(pair.form(u, v)) / (gu * gv))
    rows.append(report.CheckRow(FORM_ASSUMPTION, ratio, c, seed=seed))
    LOG.debug('pair %s: dim=%d c=%r actual=%r', seed, n, c, actual)
    return rows


def _matrix_job(base_seed, index, max_dimension, trials):
    if index % RANK_ONE_EVERY == RANK_ONE_EVERY - 1:
        pair = MatrixPair.rank_one((base_seed, index),
                                   max_dimension=max_dimension)
    else:
        pair = MatrixPair.random((base_seed, index),
                                 max_dimension=max_dimension)
    return abstract_scheme_check(pair, trials, seed=index)


def run_matrix_corpus(count, max_dimension=DEFAULT_MAX_DIMENSION, seed=0,
                      workers=1, trials=DEFAULT_TRIALS):
    LOG.info('Matrix corpus: %d pairs up to dimension %d', count,
             max_dimension)
    jobs = joblib.Parallel(n_jobs=workers)(
        joblib.delayed(_matrix_job)(seed, i, max_dimension, trials)
        for i in range(count))
    result = report.Report()
    for rows in jobs:
        result.extend(rows)
    result.log_violations()
    return result
