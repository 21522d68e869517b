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

"""Quadratic-form identities and bounds of the Dirac operators.

Spinors are compactly supported, so every integral over the plane reduces
to the support disk plus the inclusions and cells that meet it.  The
operator with mass m is ``-i sigma.grad + m sigma_3``.
"""

import itertools
import logging
import math

import joblib
import numpy as np

from diraclab import bloch
from diraclab.estimates import functions
from diraclab.estimates import quadrature
from diraclab.estimates import report
from diraclab import lattice


LOG = logging.getLogger(__name__)

BCLS_IDENTITY = 'bcls_identity'
NORMAL_CANCELLATION = 'normal_cancellation'
BOUNDARY_PROJECTORS = 'boundary_projectors'
FORM_DIFFERENCE = 'form_difference'
FREE_DIRAC_IDENTITY = 'free_dirac_identity'
FREE_GRAPH_NORM = 'free_graph_norm'
GRAPH_PRECONDITION = 'graph_precondition'
PERTURBED_GRAPH_NORM = 'perturbed_graph_norm'

BCLS_TOLERANCE = 1e-6
CANCELLATION_TOLERANCE = 1e-10
PROJECTOR_TOLERANCE = 1e-12
IDENTITY_TOLERANCE = 1e-8
PRECONDITION_BOUND = 0.25
CANCELLATION_NODES = 512


def boundary_involution(normals):
    """B = -i sigma_3 (sigma.nu) at every normal, shape (..., 2, 2)."""
    normals = np.asarray(normals, dtype=float)
    sigma_nu = (normals[..., 0, None, None] * bloch.SIGMA_1 +
                normals[..., 1, None, None] * bloch.SIGMA_2)
    return -1j * np.einsum('ab,...bc->...ac', bloch.SIGMA_3,
                           sigma_nu)


def projectors(normals):
    """The eigenprojections P+ and P- of B."""
    b = boundary_involution(normals)
    eye = np.eye(2)
    return 0.5 * (eye + b), 0.5 * (eye - b)


def projector_residual(normals):
    """Largest deviation of P+/P- from complementary orthogonal projections."""
    plus, minus = projectors(normals)
    eye = np.eye(2)
    residuals = [plus @ plus - plus, minus @ minus - minus,
                 plus + minus - eye, plus @ minus,
                 plus - np.conj(np.swapaxes(plus, -1, -2))]
    return float(max(np.max(np.abs(r)) for r in residuals))


def boundary_density(values, normals):
    """|P+ v|^2 - |P- v|^2 at every boundary node."""
    plus, minus = projectors(normals)
    vp = np.einsum('...ab,...b->...a', plus, values)
    vm = np.einsum('...ab,...b->...a', minus, values)
    return (np.sum(np.abs(vp) ** 2, axis=-1) -
            np.sum(np.abs(vm) ** 2, axis=-1))


def normal_cancellation(shape, xi, n_nodes=CANCELLATION_NODES):
    """Boundary term of a constant spinor; the normals integrate to zero."""
    quad = shape.boundary_quadrature(n_nodes)
    values = np.broadcast_to(np.asarray(xi, dtype=complex),
                             (len(quad), 2))
    return float(quad.integrate(boundary_density(values, quad.normals)))


def _sites(config, disk):
    """Lattice indices whose cell lies within one period of ``disk``."""
    eps = config.epsilon
    reach = int(math.ceil(disk.radius / eps)) + 1
    base = np.round(disk.center / eps).astype(int)
    for i, j in itertools.product(range(-reach, reach + 1), repeat=2):
        yield (int(base[0] + i), int(base[1] + j))


def inclusions_meeting(config, disk):
    """Inclusions D_k whose enclosing ball meets ``disk``."""
    found = []
    for k in _sites(config, disk):
        center = config.inclusion_center(k)
        if np.hypot(*(center - disk.center)) < disk.radius + config.d:
            found.append(lattice.inclusion(config, k))
    return found


def cells_meeting(config, disk):
    eps = config.epsilon
    found = []
    for k in _sites(config, disk):
        center = eps * np.asarray(k, dtype=float)
        gap = np.maximum(np.abs(disk.center - center) - 0.5 * eps, 0.0)
        if np.hypot(*gap) < disk.radius:
            found.append(lattice.cell(config, k))
    return found


def _dirac_density(v, nodes, m_value):
    """|(-i sigma.grad + m sigma_3) v|^2 and |sigma.grad v|^2."""
    values = v.value(nodes)
    free = functions.dirac_free(v.jacobian(nodes))
    full = free + m_value * functions.apply_sigma3(values)
    return (np.sum(np.abs(full) ** 2, axis=-1),
            np.sum(np.abs(free) ** 2, axis=-1),
            np.sum(np.abs(values) ** 2, axis=-1))


def dirac_norms(v, config, mass, resolution):
    """[|D v|^2, |grad v|^2, mass term, boundary term, |v|^2].

    For a constant mass m the mass term is m^2 |v|^2 and the boundary term
    vanishes; for inclusions they are the sums over every D_k met by the
    support of ``v``.
    """
    support = v.support()
    rule = quadrature.area_rule(support, resolution)
    jac = v.jacobian(rule.nodes)
    grad2 = float(rule.integrate(np.sum(np.abs(jac) ** 2, axis=(-2, -1))))
    m_value = mass.m_value
    if mass.is_constant:
        full, _free, square = _dirac_density(v, rule.nodes, m_value)
        l2 = float(rule.integrate(square))
        return np.array([float(rule.integrate(full)), grad2,
                         m_value ** 2 * l2, 0.0, l2])
    _full, free, square = _dirac_density(v, rule.nodes, 0.0)
    dirac2 = float(rule.integrate(free))
    l2 = float(rule.integrate(square))
    mass_term = boundary = 0.0
    for inc in inclusions_meeting(config, support):
        local = quadrature.area_rule(inc, resolution)
        full, free, square = _dirac_density(v, local.nodes, m_value)
        dirac2 += float(local.integrate(full - free))
        mass_term += m_value ** 2 * float(local.integrate(square))
        quad = inc.boundary_quadrature(quadrature.BOUNDARY_FACTOR *
                                       resolution)
        density = boundary_density(v.value(quad.nodes), quad.normals)
        boundary += m_value * float(quad.integrate(density))
    return np.array([dirac2, grad2, mass_term, boundary, l2])


def _relative(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def validate_bcls(v, config, mass, seed=None,
                  resolution=quadrature.DEFAULT_RESOLUTION):
    """|D_eps v|^2 against |grad v|^2 + mass and boundary projector terms.

    Also checks the boundary projectors and the cancellation of the
    boundary term for the constant spinor v(center of D_0).
    """
    fine, coarse, _n = quadrature.converged(
        lambda n: dirac_norms(v, config, mass, n), resolution)

    def residual(q):
        return _relative(q[0], q[1] + q[2] + q[3])

    res = residual(fine)
    rows = [report.CheckRow(
        BCLS_IDENTITY, res, BCLS_TOLERANCE, seed=seed,
        quadrature_error=abs(res - residual(coarse)),
        kind=report.IDENTITY)]

    inc = lattice.inclusion(config)
    quad = inc.boundary_quadrature(CANCELLATION_NODES)
    rows.append(report.CheckRow(
        BOUNDARY_PROJECTORS, projector_residual(quad.normals),
        PROJECTOR_TOLERANCE, seed=seed, kind=report.IDENTITY))
    xi = v.value(inc.center[None, :])[0]
    if not np.any(xi):
        xi = np.array([1.0, 1j])
    rows.append(report.CheckRow(
        NORMAL_CANCELLATION, abs(normal_cancellation(inc, xi)),
        CANCELLATION_TOLERANCE * max(1.0, float(np.vdot(xi, xi).real)),
        seed=seed, kind=report.IDENTITY))
    return rows


def form_difference(u, v, config, mass, resolution):
    """s[u, v] = (D u, v) - (u, D_eps v).

    Only the mass terms survive: m_star over every cell minus the
    inclusion mass over every inclusion.
    """
    support = u.support()
    m_star = config.m_star

    def pairing(region):
        rule = quadrature.area_rule(region, resolution)
        su = functions.apply_sigma3(u.value(rule.nodes))
        return rule.integrate(np.sum(su * np.conj(v.value(rule.nodes)),
                                     axis=-1))

    cells = cells_meeting(config, support)
    if mass.is_constant:
        return (m_star - mass.m_value) * sum(pairing(c) for c in cells)
    value = m_star * sum(pairing(c) for c in cells)
    for inc in inclusions_meeting(config, support):
        value -= mass.m_value * pairing(inc)
    return complex(value)


def h1_norm2(v, resolution):
    rule = quadrature.area_rule(v.support(), resolution)
    grad2 = np.sum(np.abs(v.jacobian(rule.nodes)) ** 2, axis=(-2, -1))
    square = np.sum(np.abs(v.value(rule.nodes)) ** 2, axis=-1)
    return float(rule.integrate(grad2 + square))


def _form_sides(q, rate):
    s, h1u, h1v = q
    return abs(s), rate * math.sqrt(h1u.real * h1v.real)


def validate_form_bound(u, v, config, mass, constants, seed=None,
                        resolution=quadrature.DEFAULT_RESOLUTION):
    """|s[u, v]| <= C3 eps ln(eps/d)^(1/2) |u|_H1 |v|_H1."""
    if constants.c3 is None:
        return [report.CheckRow.not_applicable(FORM_DIFFERENCE, seed,
                                               detail='C3 missing')]
    rate = constants.c3 * config.epsilon * math.sqrt(
        math.log(config.epsilon / config.d))

    def evaluate(n):
        return np.array([form_difference(u, v, config, mass, n),
                         h1_norm2(u, n), h1_norm2(v, n)])

    fine, coarse, _n = quadrature.converged(evaluate, resolution)
    lhs, rhs = _form_sides(fine, rate)
    lhs_c, rhs_c = _form_sides(coarse, rate)
    return [report.CheckRow(
        FORM_DIFFERENCE, lhs, rhs, seed=seed,
        quadrature_error=max(abs(lhs - lhs_c), abs(rhs - rhs_c)))]


def graph_precondition(constants, epsilon, d):
    """C4 eps^4 ln(eps/d) / d^2, or None without an admissible alpha."""
    if constants.c4 is None:
        return None
    return constants.c4 * epsilon ** 4 * math.log(epsilon / d) / d ** 2


def validate_graph_bounds(u, v, config, mass, constants, seed=None,
                          resolution=quadrature.DEFAULT_RESOLUTION):
    """Graph norms of D and D_eps against the H1 norm.

    ``u`` enters |D u|^2 + |u|^2 >= |u|^2_H1 together with the identity
    |D u|^2 = |grad u|^2 + m_star^2 |u|^2; ``v`` enters
    |D_eps v|^2 + (C4 eps^2/d^2 + 1/4)|v|^2 >= |v|^2_H1 / 4, which is only
    checked when its precondition C4 eps^4 ln(eps/d)/d^2 <= 1/4 holds.
    """
    free_mass = lattice.ConstantMass(config.m_star)
    uf, uc, _n = quadrature.converged(
        lambda n: dirac_norms(u, config, free_mass, n), resolution)

    def identity(q):
        return _relative(q[0], q[1] + q[2])

    res = identity(uf)
    rows = [report.CheckRow(
        FREE_DIRAC_IDENTITY, res, IDENTITY_TOLERANCE, seed=seed,
        quadrature_error=abs(res - identity(uc)), kind=report.IDENTITY)]
    lhs, rhs = uf[1] + uf[4], uf[0] + uf[4]
    rows.append(report.CheckRow(
        FREE_GRAPH_NORM, lhs, rhs, seed=seed,
        quadrature_error=max(abs(lhs - uc[1] - uc[4]),
                             abs(rhs - uc[0] - uc[4]))))

    eps, d = config.epsilon, config.d
    pre = graph_precondition(constants, eps, d)
    if pre is None:
        rows.append(report.CheckRow.not_applicable(
            GRAPH_PRECONDITION, seed, detail='no admissible alpha'))
        rows.append(report.CheckRow.not_applicable(
            PERTURBED_GRAPH_NORM, seed, detail='no admissible alpha'))
        return rows
    rows.append(report.CheckRow(GRAPH_PRECONDITION, pre, PRECONDITION_BOUND,
                                seed=seed, kind=report.PRECONDITION))
    if pre > PRECONDITION_BOUND:
        rows.append(report.CheckRow.not_applicable(
            PERTURBED_GRAPH_NORM, seed, detail='precondition fails'))
        return rows
    shift = constants.c4 * eps ** 2 / d ** 2 + 0.25
    vf, vc, _n = quadrature.converged(
        lambda n: dirac_norms(v, config, mass, n), resolution)

    def sides(q):
        return 0.25 * (q[1] + q[4]), q[0] + shift * q[4]

    lhs, rhs = sides(vf)
    lhs_c, rhs_c = sides(vc)
    rows.append(report.CheckRow(
        PERTURBED_GRAPH_NORM, lhs, rhs, seed=seed,
        quadrature_error=max(abs(lhs - lhs_c), abs(rhs - rhs_c))))
    return rows


def _bcls_job(config, mass, base_seed, index, max_frequency, resolution):
    rng = np.random.default_rng((base_seed, index, 2))
    center = config.inclusion_center() + rng.uniform(-config.d, config.d, 2)
    v = functions.SpinorBump.random((base_seed, index), center,
                                    0.5 * config.epsilon, max_frequency,
                                    3.0 * config.epsilon)
    return validate_bcls(v, config, mass, index, resolution)


def run_bcls_corpus(config, mass, count, max_frequency=8, seed=0, workers=1,
                    resolution=quadrature.DEFAULT_RESOLUTION):
    """BCLS checks for seeded bumps of radius eps/2 around the inclusion."""
    LOG.info('BCLS corpus: %d spinors', count)
    jobs = joblib.Parallel(n_jobs=workers)(
        joblib.delayed(_bcls_job)(config, mass, seed, i, max_frequency,
                                  resolution)
        for i in range(count))
    result = report.Report()
    for rows in jobs:
        result.extend(rows)
    result.log_violations()
    return result


def _form_job(config, mass, constants, base_seed, index, max_frequency,
              resolution):
    center = np.zeros(2)
    radius = 1.5 * config.epsilon
    period = 3.0 * config.epsilon
    u = functions.SpinorBump.random((base_seed, index, 0), center, radius,
                                    max_frequency, period)
    v = functions.SpinorBump.random((base_seed, index, 1), center, radius,
                                    max_frequency, period)
    rows = validate_form_bound(u, v, config, mass, constants, index,
                               resolution)
    rows.extend(validate_graph_bounds(u, v, config, mass, constants, index,
                                      resolution))
    return rows


def run_form_corpus(config, mass, constants, count, max_frequency=8, seed=0,
                    workers=1, resolution=quadrature.DEFAULT_RESOLUTION):
    """Form-difference and graph-norm checks on the 3x3 patch of cells."""
    LOG.info('Form corpus: %d spinor pairs, eps=%r d=%r', count,
             config.epsilon, config.d)
    jobs = joblib.Parallel(n_jobs=workers)(
        joblib.delayed(_form_job)(config, mass, constants, seed, i,
                                  max_frequency, resolution)
        for i in range(count))
    result = report.Report()
    for rows in jobs:
        result.extend(rows)
    result.log_violations()
    return result
