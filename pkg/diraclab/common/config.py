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

"""Run configuration.

A run is described by one YAML document::

    seed: 0
    lattice:
      epsilon: 0.25
      m_star: 1.0
      kappa: 1.0
      c: 0.25
      shape: {kind: disk, radius: 1.0}
    solver: {cutoff: 12, theta_grid: 9}
    study: {epsilons: [0.5, 0.25, 0.125, 0.0625]}

Every section and key is optional; unknown keys are rejected.
"""

import copy
import logging

import yaml

from diraclab._i18n import _
from diraclab.common import exceptions
from diraclab.common import utils
from diraclab.common import validators
from diraclab import shapes


LOG = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1
DEFAULT_OUTPUT_DIRECTORY = './diraclab-output'
POWER = 'power'
LOG_CORRECTED = 'log_corrected'
D_RULES = (POWER, LOG_CORRECTED)
NRC = 'nrc'
GAP = 'gap'
HAUSDORFF = 'hausdorff'
OBSERVABLES = (NRC, GAP, HAUSDORFF)
SMALLEST_EPSILON = 1.0 / 32


def _float(upper=None, allow_zero=False):
    def parse(name, value):
        val = utils.parse_float(value)
        if allow_zero and val == 0.0:
            return val
        msg = validators.positive_float_error(name, val, upper)
        if msg:
            raise ValueError(msg)
        return val
    return parse


def _optional_float(name, value):
    if value is None:
        return None
    return _float()(name, value)


def _int(min_value=None, max_value=None):
    def parse(name, value):
        msg = validators.int_range_error(name, value, min_value, max_value)
        if msg:
            raise ValueError(msg)
        return utils.parse_int(value)
    return parse


def _bool(name, value):
    if not isinstance(value, bool):
        raise ValueError(_('%(attr_name)s "%(val)s" should be true or '
                           'false.') % {'attr_name': name, 'val': value})
    return value


def _choice(choices):
    def parse(name, value):
        msg = validators.validate_choice(name, value, choices)
        if msg:
            raise ValueError(msg)
        return value
    return parse


def _point(name, value):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ValueError(_('%s should be a pair of numbers.') % name)
    return [utils.parse_float(v) for v in value]


def _float_list(name, value):
    if not isinstance(value, (list, tuple)) or not value:
        raise ValueError(_('%s should be a non-empty list of numbers.') % name)
    return [_float(upper=1.0)(name, v) for v in value]


def _shape(name, value):
    try:
        return shapes.from_dict(value).to_dict()
    except exceptions.InvalidShape as e:
        raise ValueError(str(e))


def _string(name, value):
    if not isinstance(value, str) or not value:
        raise ValueError(_('%s should be a non-empty string.') % name)
    return value


# section -> key -> (parser, default)
SCHEMA = {
    'lattice': {
        'epsilon': (_float(upper=1.0), 0.25),
        'm_star': (_float(allow_zero=True), 1.0),
        'kappa': (_float(), 1.0),
        'c': (_float(), 0.25),
        'epsilon0': (_float(upper=1.0), 0.5),
        'center_offset': (_point, [0.0, 0.0]),
        'full_cell': (_bool, False),
        'd_rule': (_choice(D_RULES), POWER),
        'omega': (_optional_float, None),
        'shape': (_shape, {'kind': shapes.DISK, 'radius': 1.0,
                           'center': [0.0, 0.0]}),
    },
    'solver': {
        'cutoff': (_int(2, 64), 12),
        'theta_grid': (_int(1, 65), 9),
        'refine': (_bool, True),
        'truncation_check': (_bool, True),
        'truncation_tolerance': (_float(), 0.05),
        'max_dimension': (_int(8, 40000), 20000),
        'mesh_size': (_float(), 0.1),
        'richardson': (_bool, True),
        'band_window': (_optional_float, None),
        'workers': (_int(1, 1024), 1),
    },
    'study': {
        'epsilons': (_float_list, [0.5, 0.25, 0.125, 0.0625]),
        'observable': (_choice(OBSERVABLES), NRC),
        'include_smallest': (_bool, False),
        'record_wall_time': (_bool, False),
    },
    'validate': {
        'seeds': (_int(1, 100000), 200),
        'spinors': (_int(1, 100000), 100),
        'bcls_spinors': (_int(1, 100000), 20),
        'matrix_pairs': (_int(1, 1000000), 1000),
        'matrix_dimension': (_int(2, 200), 20),
        'max_frequency': (_int(1, 32), 8),
        'epsilon': (_float(upper=1.0), 0.25),
        'd': (_float(), 0.0625),
        'm_star': (_float(), 1.0 / 256),
        'gammas': (_int(1, 1000), 10),
    },
    'output': {
        'directory': (_string, DEFAULT_OUTPUT_DIRECTORY),
    },
}
TOP_LEVEL = ('seed',) + tuple(SCHEMA)


class RunConfig(object):
    """Validated run configuration with every default filled in."""

    def __init__(self, data=None, path='<defaults>'):
        self.path = path
        data = {} if data is None else data
        if not isinstance(data, dict):
            raise exceptions.ConfigError(
                path=path, reason=_("top level must be a mapping"))
        try:
            utils.check_keys(data, optional_keys=TOP_LEVEL)
        except ValueError as e:
            raise exceptions.ConfigError(path=path, reason=str(e))
        for section, keys in SCHEMA.items():
            setattr(self, section, self._load_section(
                section, keys, data.get(section) or {}))
        try:
            self.seed = _int(0, MAX_SEED)('seed', data.get('seed', 0))
        except ValueError as e:
            raise exceptions.ConfigError(path=path, reason=str(e))
        self._cross_check()

    def _load_section(self, section, keys, raw):
        if not isinstance(raw, dict):
            raise exceptions.ConfigError(
                path=self.path,
                reason=_("section '%s' must be a mapping") % section)
        try:
            utils.check_keys(raw, optional_keys=keys)
        except ValueError as e:
            raise exceptions.ConfigError(
                path=self.path, reason='%s: %s' % (section, e))
        result = {}
        for key, (parse, default) in keys.items():
            name = '%s.%s' % (section, key)
            if key not in raw:
                result[key] = copy.deepcopy(default)
                continue
            try:
                result[key] = parse(name, raw[key])
            except (ValueError, TypeError) as e:
                raise exceptions.ConfigError(path=self.path, reason=str(e))
        return result

    def _cross_check(self):
        lat = self.lattice
        if lat['d_rule'] == LOG_CORRECTED and lat['omega'] is None:
            raise exceptions.ConfigError(
                path=self.path,
                reason=_("lattice.omega is required by the log_corrected "
                         "rule"))
        if lat['epsilon'] > lat['epsilon0']:
            raise exceptions.ConfigError(
                path=self.path,
                reason=_("lattice.epsilon must not exceed lattice.epsilon0"))
        if self.validate['d'] >= self.validate['epsilon']:
            raise exceptions.ConfigError(
                path=self.path,
                reason=_("validate.d must be smaller than validate.epsilon"))

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as f:
                data = yaml.safe_load(f)
        except (OSError, IOError) as e:
            raise exceptions.ConfigError(path=path, reason=e.strerror or e)
        except yaml.YAMLError as e:
            raise exceptions.ConfigError(path=path, reason=e)
        LOG.debug('Loaded configuration from %s', path)
        return cls(data, path=path)

    def apply_overrides(self, seed=None, workers=None, output=None):
        if seed is not None:
            msg = validators.int_range_error('seed', seed, 0, MAX_SEED)
            if msg:
                raise exceptions.CommandError(msg)
            self.seed = seed
        if workers is not None:
            self.solver['workers'] = workers
        if output:
            self.output['directory'] = output
        return self

    @property
    def workers(self):
        return self.solver['workers']

    @property
    def output_directory(self):
        return self.output['directory']

    def shape(self):
        return shapes.from_dict(self.lattice['shape'])

    def sweep_epsilons(self):
        epsilons = list(self.study['epsilons'])
        if self.study['include_smallest'] and SMALLEST_EPSILON not in epsilons:
            epsilons.append(SMALLEST_EPSILON)
        return sorted(epsilons, reverse=True)

    def to_dict(self):
        """Full echo of the configuration, defaults included."""
        data = dict((section, copy.deepcopy(getattr(self, section)))
                    for section in SCHEMA)
        data['seed'] = self.seed
        return data
