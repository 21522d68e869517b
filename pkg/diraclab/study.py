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

"""Epsilon sweeps, convergence-rate fits and run manifests."""

import logging
import math
import os
import platform

import joblib
import numpy as np
from oslo_utils import timeutils
import scipy

from diraclab._i18n import _
from diraclab import bloch
from diraclab.common import config as run_config
from diraclab.common import exceptions
from diraclab.common import serializer
from diraclab import lattice
from diraclab import version


LOG = logging.getLogger(__name__)

RECORDS_FILE = 'records.csv'
MANIFEST_FILE = 'manifest.json'
CSV_HEADER = ('eps', 'd_eps', 'eta', 'nrc', 'gap_lo', 'gap_hi', 'haus', 'N',
              'grid', 'trunc', 'wall_ms')

MIN_FIT_RECORDS = 3
RATIO_SPREAD = 3.0
MIN_SLOPE = 0.8
MONOTONE_SLACK = 1e-9


class ConvergenceRecord(object):
    """Observables of one epsilon of a sweep."""

    def __init__(self, epsilon, d_eps, eta, nrc, gap_lower=None,
                 gap_upper=None, hausdorff=None, cutoff=None, grid=None,
                 truncation=None, wall_ms=None, exploratory=False,
                 m_star=None, coverage=None):
        self.epsilon = float(epsilon)
        self.d_eps = float(d_eps)
        self.eta = float(eta)
        self.nrc = float(nrc)
        self.gap_lower = gap_lower
        self.gap_upper = gap_upper
        self.hausdorff = hausdorff
        self.cutoff = cutoff
        self.grid = grid
        self.truncation = truncation
        self.wall_ms = wall_ms
        self.exploratory = exploratory
        self.m_star = m_star
        self.coverage = coverage

    @property
    def gap_deviation(self):
        """|gap_upper - m_star| + |gap_lower + m_star|."""
        if self.gap_lower is None or self.gap_upper is None:
            return None
        return abs(self.gap_upper - self.m_star) + \
            abs(self.gap_lower + self.m_star)

    def observable(self, name):
        return {run_config.NRC: self.nrc,
                run_config.GAP: self.gap_deviation,
                run_config.HAUSDORFF: self.hausdorff}[name]

    def to_row(self):
        return (self.epsilon, self.d_eps, self.eta, self.nrc, self.gap_lower,
                self.gap_upper, self.hausdorff, self.cutoff, self.grid,
                self.truncation, self.wall_ms)

    def to_dict(self):
        data = dict(zip(CSV_HEADER, self.to_row()))
        data['exploratory'] = self.exploratory
        data['coverage'] = self.coverage
        return data


def _blocking(config):
    report = lattice.check_assumptions(config)
    return report, report.blocking_failures()


def check_sweep_assumptions(conf, epsilons, exploratory=False):
    """Evaluate the assumptions at every epsilon before any solve.

    :returns: the epsilons that violate a blocking assumption
    :raises AssumptionViolation: on such a violation unless exploratory
    """
    flagged = []
    for epsilon in epsilons:
        config = lattice.LatticeConfig.from_run_config(conf, epsilon)
        _report, failures = _blocking(config)
        if not failures:
            continue
        flagged.append(epsilon)
        if not exploratory:
            first = failures[0]
            raise exceptions.AssumptionViolation(
                assumption=first.name,
                reason='%s at epsilon=%r' % (first.detail, epsilon))
    return flagged


def sweep_record(conf, epsilon, exploratory=False, workers=1):
    """Run the NRC pipeline at one epsilon."""
    config = lattice.LatticeConfig.from_run_config(conf, epsilon)
    solver = conf.solver
    watch = timeutils.StopWatch()
    watch.start()
    mass = lattice.calibrate_mass(config, check_inclusion=not exploratory)
    result = bloch.nrc_estimate(
        config, mass, theta_grid_points=solver['theta_grid'],
        cutoff=solver['cutoff'], refine=solver['refine'],
        truncation_check=solver['truncation_check'], workers=workers,
        max_dimension=solver['max_dimension'])
    bands = result.band_structure(config.epsilon, config.d)
    hausdorff = None
    if bands.has_gap() and config.m_star > 0.0:
        hausdorff = bloch.hausdorff_gap_check(bands, config.m_star)
    coverage = bands.interior_coverage(
        bloch.band_window(solver['band_window'], config.m_star))
    watch.stop()
    wall_ms = None
    if conf.study['record_wall_time']:
        wall_ms = round(1000.0 * watch.elapsed())
    return ConvergenceRecord(
        config.epsilon, config.d, lattice.eta(config), result.value,
        gap_lower=bands.gap_lower, gap_upper=bands.gap_upper,
        hausdorff=hausdorff, cutoff=result.cutoff, grid=result.grid,
        truncation=result.truncation_indicator, wall_ms=wall_ms,
        exploratory=exploratory, m_star=config.m_star,
        coverage=coverage)


def _sweep_job(conf, epsilon, exploratory):
    try:
        return sweep_record(conf, epsilon, exploratory), None
    except exceptions.DiracLabError as e:
        return None, str(e)


def run_sweep(conf, epsilons=None, exploratory=False, workers=None):
    """One ConvergenceRecord per epsilon, largest epsilon first.

    Epsilons run in parallel; a failure at some epsilon raises
    :class:`SweepAborted` carrying the records of the larger epsilons.
    Only the records of epsilons that violate a blocking assumption are
    marked exploratory.
    """
    if epsilons is None:
        epsilons = conf.sweep_epsilons()
    epsilons = sorted(set(float(e) for e in epsilons), reverse=True)
    workers = conf.workers if workers is None else workers
    flagged = check_sweep_assumptions(conf, epsilons, exploratory)
    LOG.info('Sweeping %d epsilons with %d workers', len(epsilons), workers)
    outcomes = joblib.Parallel(n_jobs=workers)(
        joblib.delayed(_sweep_job)(conf, eps, eps in flagged)
        for eps in epsilons)
    records = []
    for epsilon, (record, error) in zip(epsilons, outcomes):
        if error is not None:
            raise exceptions.SweepAborted(records=records, epsilon=epsilon,
                                          reason=error)
        LOG.info('eps=%r d=%r nrc=%r eta=%r', record.epsilon, record.d_eps,
                 record.nrc, record.eta)
        records.append(record)
    return records


class RateFit(object):
    """Least-squares line through (ln eps, ln value)."""

    def __init__(self, observable, slope, intercept, residual, ratio_max,
                 ratio_min, count, excluded=0):
        self.observable = observable
        self.slope = slope
        self.intercept = intercept
        self.residual = residual
        self.ratio_max = ratio_max
        self.ratio_min = ratio_min
        self.count = count
        self.excluded = excluded

    @property
    def ratio_spread(self):
        if not self.ratio_min:
            return None
        return self.ratio_max / self.ratio_min

    def to_dict(self):
        return {'observable': self.observable, 'slope': self.slope,
                'intercept': self.intercept, 'residual': self.residual,
                'ratio_max': self.ratio_max, 'ratio_min': self.ratio_min,
                'ratio_spread': self.ratio_spread, 'count': self.count,
                'excluded': self.excluded}


def fit_rate(records, observable=run_config.NRC):
    """Fit ln(value) against ln(eps) and compare the values with eta.

    Records with a zero or missing value are left out of the fit and
    counted in ``excluded``.

    :raises InsufficientRecords: with fewer than three usable records
    """
    usable = [(r.epsilon, r.observable(observable), r.eta) for r in records
              if r.observable(observable)]
    excluded = len(records) - len(usable)
    if len(usable) < MIN_FIT_RECORDS:
        raise exceptions.InsufficientRecords(needed=MIN_FIT_RECORDS,
                                             got=len(usable))
    eps, values, etas = (np.array(col, dtype=float) for col in zip(*usable))
    x, y = np.log(eps), np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((slope * x + intercept - y) ** 2)))
    ratios = values / etas
    fit = RateFit(observable, float(slope), float(intercept), residual,
                  float(np.max(ratios)), float(np.min(ratios)), len(usable),
                  excluded)
    LOG.info('%s: slope %.4f, ratio to eta in [%.4g, %.4g], %d excluded',
             observable, fit.slope, fit.ratio_min, fit.ratio_max, excluded)
    return fit


def _nonincreasing(values):
    return all(b <= a * (1.0 + MONOTONE_SLACK) + 1e-12
               for a, b in zip(values, values[1:]))


def _gap_check(records):
    """Gap deviations bounded by eta times the largest-epsilon constant."""
    reference = records[0]
    if reference.gap_deviation is None:
        return None
    constant = reference.gap_deviation / reference.eta
    for record in records[1:]:
        if record.gap_deviation is None:
            return False
        if record.gap_deviation > constant * record.eta * \
                (1.0 + MONOTONE_SLACK):
            return False
    return True


def assess_sweep(records, fit, conf, exploratory=False):
    """Verdicts of a sweep; exploratory sweeps get no verdict."""
    checks = {}
    if records:
        checks['nrc_nonincreasing'] = _nonincreasing([r.nrc
                                                      for r in records])
        checks['gap_within_eta'] = _gap_check(records)
        tolerance = conf.solver['truncation_tolerance']
        truncations = [r.truncation for r in records
                       if r.truncation is not None]
        checks['truncation'] = (all(t <= tolerance for t in truncations)
                                if truncations else None)
    linear = conf.lattice['d_rule'] == run_config.POWER and \
        conf.lattice['kappa'] == 1.0
    if fit is not None:
        spread = fit.ratio_spread
        checks['ratio_spread'] = (spread is not None and
                                  spread <= RATIO_SPREAD)
        checks['slope'] = fit.slope >= MIN_SLOPE if linear else None
    verdicts = [v for v in checks.values() if v is not None]
    verdict = None
    if not exploratory:
        verdict = all(verdicts) if verdicts else None
    return {'checks': checks, 'verdict': verdict,
            'exploratory': exploratory,
            'predicted_rate': lattice.predicted_rate(
                lattice.d_rule_from_section(conf.lattice))}


def lattice_table(conf, epsilons):
    """Derived lattice quantities of every epsilon for the manifest."""
    table = []
    for epsilon in epsilons:
        config = lattice.LatticeConfig.from_run_config(conf, epsilon)
        entry = {'epsilon': config.epsilon, 'd': config.d,
                 'md': lattice.md_product(config),
                 'gap_threshold': lattice.gap_threshold(config.m_star)}
        if 0.0 < config.d < config.epsilon:
            entry['eta'] = lattice.eta(config)
        table.append(entry)
    return table


def versions():
    return {'diraclab': version.version_info.version_string(),
            'numpy': np.__version__, 'scipy': scipy.__version__,
            'python': platform.python_version()}


def write_manifest(destination, command, conf, artifacts, options=None,
                   **extra):
    """Write ``manifest.json`` describing one run and its artifacts.

    ``artifacts`` are file names inside ``destination``; their checksums
    are recorded for replay.
    """
    serializer.ensure_directory(destination)
    checksums = dict((name, serializer.checksum(
        os.path.join(destination, name))) for name in artifacts)
    manifest = {'command': command, 'config': conf.to_dict(),
                'seed': conf.seed, 'options': dict(options or {}),
                'artifacts': checksums, 'versions': versions()}
    manifest.update(extra)
    path = os.path.join(destination, MANIFEST_FILE)
    serializer.write_json(path, manifest)
    LOG.info('Wrote manifest %s', path)
    return path


def persist(records, fit, constants, destination, conf, assessment=None,
            options=None):
    """Write ``records.csv`` (only when there are records) and the manifest."""
    serializer.ensure_directory(destination)
    artifacts = []
    if records:
        serializer.write_csv(os.path.join(destination, RECORDS_FILE),
                             CSV_HEADER, [r.to_row() for r in records])
        artifacts.append(RECORDS_FILE)
    epsilons = [r.epsilon for r in records]
    return write_manifest(
        destination, 'sweep', conf, artifacts, options=options,
        constants=constants.to_dict() if constants is not None else None,
        lattice=lattice_table(conf, epsilons),
        fit=fit.to_dict() if fit is not None else None,
        assessment=assessment,
        coverage=dict((repr(r.epsilon), r.coverage) for r in records),
        exploratory=any(r.exploratory for r in records))


def load_manifest(path):
    """Read a manifest; ``path`` is the file or its directory."""
    if os.path.isdir(path):
        path = os.path.join(path, MANIFEST_FILE)
    manifest = serializer.read_json(path)
    for key in ('command', 'config', 'artifacts'):
        if key not in manifest:
            raise exceptions.ConfigError(
                path=path, reason=_("manifest has no '%s' entry") % key)
    return manifest


def replay(manifest_path, destination, runners):
    """Rerun the command of a manifest and compare artifact checksums.

    ``runners`` maps command names to ``runner(conf, destination,
    options)`` callables that write the artifacts into ``destination``.

    :returns: the names of the compared artifacts
    :raises ReplayMismatch: when a checksum differs or an artifact is
        missing
    """
    manifest = load_manifest(manifest_path)
    command = manifest['command']
    if command not in runners:
        raise exceptions.ConfigError(
            path=manifest_path,
            reason=_("cannot replay command '%s'") % command)
    conf = run_config.RunConfig(manifest['config'], path=manifest_path)
    conf.output['directory'] = destination
    LOG.info('Replaying %s into %s', command, destination)
    runners[command](conf, destination, manifest.get('options') or {})
    differing = []
    for name, expected in sorted(manifest['artifacts'].items()):
        path = os.path.join(destination, name)
        if not os.path.exists(path) or serializer.checksum(path) != expected:
            differing.append(name)
    if differing:
        raise exceptions.ReplayMismatch(manifest=manifest_path,
                                        artifacts=', '.join(differing))
    return sorted(manifest['artifacts'])


def eta_column(records):
    """Closed-form eta of every record, for comparison with the column."""
    return [r.epsilon ** 2 / r.d_eps * math.sqrt(math.log(r.epsilon /
                                                          r.d_eps))
            for r in records]
