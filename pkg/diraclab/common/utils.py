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

"""Utilities and helper functions."""

import math
import numbers
import os

from oslo_utils import encodeutils

from diraclab._i18n import _


def env(*vars, **kwargs):
    """Returns the first environment variable set.

    If none are non-empty, defaults to '' or keyword arg default.
    """
    for v in vars:
        value = os.environ.get(v)
        if value:
            return value
    return kwargs.get('default', '')


def check_keys(mapping, required_keys=None, optional_keys=None):
    """Check the keys of a config mapping.

    :param mapping: the mapping to check
    :param required_keys: list of required keys. All keys in this list must be
                       present. Otherwise ValueError will be raised.
    :param optional_keys: list of optional keys.
                       When at least one of required_keys and optional_keys
                       is given, a key must be a member of either of them.
                       Otherwise, ValueError will be raised.
    """
    valid_keys = set(required_keys or []) | set(optional_keys or [])
    if valid_keys:
        invalid_keys = [k for k in mapping if k not in valid_keys]
        if invalid_keys:
            msg = _("Invalid key(s) '%(invalid_keys)s' specified. "
                    "Valid key(s): '%(valid_keys)s'.")
            raise ValueError(
                msg % {'invalid_keys': ', '.join(sorted(map(str,
                                                            invalid_keys))),
                       'valid_keys': ', '.join(sorted(valid_keys))})
    if required_keys:
        not_found_keys = [k for k in required_keys if k not in mapping]
        if not_found_keys:
            msg = _("Required key(s) '%s' not specified.")
            raise ValueError(msg % ', '.join(not_found_keys))
    return mapping


def parse_float(value):
    """Parse a float given as a number, a decimal string or a hex string.

    ``0x1.8p-2`` style strings round-trip a double exactly.
    """
    if isinstance(value, bool):
        raise ValueError(_("expected a number, got %r") % value)
    if isinstance(value, numbers.Real):
        result = float(value)
    elif isinstance(value, (str, bytes)):
        text = encodeutils.safe_decode(value).strip()
        try:
            if text.lower().lstrip('+-').startswith('0x'):
                result = float.fromhex(text)
            else:
                result = float(text)
        except ValueError:
            raise ValueError(_("'%s' is not a valid number") % text)
    else:
        raise ValueError(_("expected a number, got %r") % (value,))
    if not math.isfinite(result):
        raise ValueError(_("%r is not finite") % (value,))
    return result


def parse_int(value):
    if isinstance(value, bool):
        raise ValueError(_("expected an integer, got %r") % value)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        try:
            return int(value, 0)
        except ValueError:
            pass
    raise ValueError(_("expected an integer, got %r") % (value,))


def format_float(value):
    """Shortest text that parses back to the same double."""
    if value is None:
        return ''
    return repr(float(value))


def format_optional(value, digits=6):
    if value is None:
        return '-'
    return '%.*g' % (digits, value)
