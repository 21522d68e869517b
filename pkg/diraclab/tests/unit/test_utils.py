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

from oslotest import base
import testscenarios

from diraclab.common import utils
from diraclab.common import validators


load_tests = testscenarios.load_tests_apply_scenarios


class ParseFloatTest(base.BaseTestCase):

    scenarios = [
        ('int', {'value': 2, 'expected': 2.0}),
        ('float', {'value': 0.125, 'expected': 0.125}),
        ('decimal', {'value': ' 1e-3 ', 'expected': 1e-3}),
        ('hex', {'value': '0x1.999999999999ap-4', 'expected': 0.1}),
        ('negative_hex', {'value': '-0x1p-1', 'expected': -0.5}),
    ]

    def test_parse(self):
        self.assertEqual(self.expected, utils.parse_float(self.value))

    def test_round_trip_through_format(self):
        value = utils.parse_float(self.value)
        self.assertEqual(value, utils.parse_float(utils.format_float(value)))


class UtilsTest(base.BaseTestCase):

    def test_parse_float_rejects(self):
        for value in (True, 'abc', float('nan'), float('inf'), None, [1.0]):
            self.assertRaises(ValueError, utils.parse_float, value)

    def test_parse_int(self):
        self.assertEqual(16, utils.parse_int('0x10'))
        self.assertEqual(3, utils.parse_int(3.0))
        self.assertRaises(ValueError, utils.parse_int, 3.5)
        self.assertRaises(ValueError, utils.parse_int, False)

    def test_check_keys(self):
        mapping = {'a': 1, 'b': 2}
        self.assertEqual(mapping, utils.check_keys(
            mapping, required_keys=['a'], optional_keys=['b']))
        self.assertRaises(ValueError, utils.check_keys, mapping,
                          optional_keys=['a'])
        self.assertRaises(ValueError, utils.check_keys, mapping,
                          required_keys=['a', 'b', 'c'])

    def test_format_optional(self):
        self.assertEqual('-', utils.format_optional(None))
        self.assertEqual('0.333333', utils.format_optional(1.0 / 3.0))
        self.assertEqual('', utils.format_float(None))


class ValidatorsTest(base.BaseTestCase):

    def test_int_range(self):
        self.assertIsNone(validators.int_range_error('seed', 0, 0, 10))
        self.assertIsNone(validators.int_range_error('seed', '0x0a', 0, 10))
        self.assertIn('[0:10]', validators.int_range_error('seed', 11, 0, 10))
        self.assertIsNotNone(validators.int_range_error('seed', True, 0))
        self.assertIsNotNone(validators.int_range_error('seed', 'x'))

    def test_positive_float(self):
        self.assertIsNone(validators.positive_float_error('x', 0.5, 1.0))
        self.assertIn('positive', validators.positive_float_error('x', 0.0))
        self.assertIn('exceed', validators.positive_float_error('x', 2.0, 1.0))
        self.assertIn('number', validators.positive_float_error('x', 'a'))

    def test_choice(self):
        self.assertIsNone(validators.validate_choice('k', 'a', ('a', 'b')))
        self.assertIn('a, b', validators.validate_choice('k', 'c', ('a', 'b')))
