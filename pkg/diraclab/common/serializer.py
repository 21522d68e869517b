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

"""Artifact serialization.

JSON documents are written with sorted keys so that equal content gives
equal bytes; CSV floats are written with ``repr`` for the same reason.
"""

import csv
import logging
import os

import numpy as np
from oslo_serialization import jsonutils
from oslo_utils import fileutils

from diraclab._i18n import _
from diraclab.common import exceptions
from diraclab.common import utils

LOG = logging.getLogger(__name__)

CHECKSUM_ALGORITHM = 'sha256'


def _sanitizer(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if hasattr(obj, 'to_dict'):
        return obj.to_dict()
    return str(obj)


class JSONDictSerializer(object):
    """Deterministic JSON serialization of report dictionaries."""

    def serialize(self, data):
        return jsonutils.dumps(data, default=_sanitizer, sort_keys=True,
                               indent=2) + '\n'


class JSONDeserializer(object):

    def deserialize(self, datastring, source='<string>'):
        try:
            return jsonutils.loads(datastring)
        except ValueError:
            raise exceptions.ConfigError(path=source,
                                         reason=_("Cannot understand JSON"))


def ensure_directory(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise exceptions.PersistenceError(path=path, reason=e.strerror)


def write_json(path, data):
    text = JSONDictSerializer().serialize(data)
    try:
        with open(path, 'w') as f:
            f.write(text)
    except (OSError, IOError) as e:
        raise exceptions.PersistenceError(path=path, reason=e.strerror)
    LOG.debug('Wrote %s', path)
    return path


def read_json(path):
    try:
        with open(path) as f:
            text = f.read()
    except (OSError, IOError) as e:
        raise exceptions.ConfigError(path=path, reason=e.strerror)
    return JSONDeserializer().deserialize(text, source=path)


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return utils.format_float(value)
    return value


def write_csv(path, header, rows):
    """Write rows (sequences aligned with ``header``) as CSV."""
    try:
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
    except (OSError, IOError) as e:
        raise exceptions.PersistenceError(path=path, reason=e.strerror)
    LOG.debug('Wrote %s', path)
    return path


def read_csv(path):
    try:
        with open(path, newline='') as f:
            return list(csv.DictReader(f))
    except (OSError, IOError) as e:
        raise exceptions.ConfigError(path=path, reason=e.strerror)


def checksum(path):
    return fileutils.compute_file_checksum(path,
                                           algorithm=CHECKSUM_ALGORITHM)
