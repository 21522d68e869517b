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

from diraclab._i18n import _


def int_range_error(name, val, min_value=None, max_value=None):
    """Return an error message if ``val`` is not an integer in range.

    Strings are parsed with base prefixes, so "0x10" is 16.
    """
    try:
        if isinstance(val, bool):
            raise TypeError()
        number = val if isinstance(val, int) else int(val, 0)
    except (ValueError, TypeError):
        number = None
    if number is not None and (min_value is None or min_value <= number) \
            and (max_value is None or number <= max_value):
        return None

    params = {'attr_name': name, 'val': val, 'min': min_value,
              'max': max_value}
    if min_value is not None and max_value is not None:
        return _('%(attr_name)s "%(val)s" should be an integer '
                 '[%(min)i:%(max)i].') % params
    if min_value is not None:
        return _('%(attr_name)s "%(val)s" should be an integer '
                 'greater than or equal to %(min)i.') % params
    if max_value is not None:
        return _('%(attr_name)s "%(val)s" should be an integer '
                 'smaller than or equal to %(max)i.') % params
    return _('%(attr_name)s "%(val)s" should be an integer.') % params


def positive_float_error(name, val, upper=None):
    """Return an error message unless 0 < val (<= upper)."""
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        return _('%(attr_name)s "%(val)s" should be a number.') % {
            'attr_name': name, 'val': val}
    if not val > 0:
        return _('%(attr_name)s "%(val)s" should be positive.') % {
            'attr_name': name, 'val': val}
    if upper is not None and val > upper:
        return (_('%(attr_name)s "%(val)s" should not exceed %(max)s.') %
                {'attr_name': name, 'val': val, 'max': upper})
    return None


def validate_choice(name, val, choices):
    if val not in choices:
        return (_('%(attr_name)s "%(val)s" should be one of: %(choices)s.') %
                {'attr_name': name, 'val': val,
                 'choices': ', '.join(choices)})
    return None
