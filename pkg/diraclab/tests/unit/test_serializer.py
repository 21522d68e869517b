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

import os

import fixtures
import numpy as np
from oslotest import base

from diraclab.common import exceptions
from diraclab.common import serializer


class JSONTest(base.BaseTestCase):

    def setUp(self):
        super(JSONTest, self).setUp()
        self.tmp = self.useFixture(fixtures.TempDir()).path

    def test_keys_are_sorted(self):
        text = serializer.JSONDictSerializer().serialize({'b': 1, 'a': 2})
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertTrue(text.endswith('\n'))

    def test_equal_content_gives_equal_bytes(self):
        first = os.path.join(self.tmp, 'first.json')
        second = os.path.join(self.tmp, 'second.json')
        serializer.write_json(first, {'x': 0.1, 'y': [1, 2]})
        serializer.write_json(second, {'y': [1, 2], 'x': 0.1})
        self.assertEqual(serializer.checksum(first),
                         serializer.checksum(second))

    def test_numpy_values(self):
        path = os.path.join(self.tmp, 'values.json')
        serializer.write_json(path, {'array': np.arange(3),
                                     'scalar': np.float64(0.5)})
        self.assertEqual({'array': [0, 1, 2], 'scalar': 0.5},
                         serializer.read_json(path))

    def test_bad_json(self):
        path = os.path.join(self.tmp, 'broken.json')
        with open(path, 'w') as f:
            f.write('{"a": ')
        self.assertRaises(exceptions.ConfigError, serializer.read_json, path)

    def test_missing_json(self):
        self.assertRaises(exceptions.ConfigError, serializer.read_json,
                          os.path.join(self.tmp, 'absent.json'))

    def test_unwritable_path(self):
        path = os.path.join(self.tmp, 'absent', 'out.json')
        self.assertRaises(exceptions.PersistenceError,
                          serializer.write_json, path, {})


class CSVTest(base.BaseTestCase):

    def setUp(self):
        super(CSVTest, self).setUp()
        self.tmp = self.useFixture(fixtures.TempDir()).path

    def test_cells(self):
        path = os.path.join(self.tmp, 'rows.csv')
        serializer.write_csv(path, ('name', 'value', 'flag', 'missing'),
                             [('a', 0.1, True, None),
                              ('b', np.float64(1.0 / 3.0), np.bool_(False),
                               None)])
        rows = serializer.read_csv(path)
        self.assertEqual('0.1', rows[0]['value'])
        self.assertEqual(1.0 / 3.0, float(rows[1]['value']))
        self.assertEqual('true', rows[0]['flag'])
        self.assertEqual('false', rows[1]['flag'])
        self.assertEqual('', rows[0]['missing'])

    def test_header_only(self):
        path = os.path.join(self.tmp, 'empty.csv')
        serializer.write_csv(path, ('a', 'b'), [])
        with open(path) as f:
            self.assertEqual('a,b\n', f.read())

    def test_ensure_directory(self):
        path = os.path.join(self.tmp, 'nested', 'dir')
        serializer.ensure_directory(path)
        serializer.ensure_directory(path)
        self.assertTrue(os.path.isdir(path))

    def test_ensure_directory_over_file(self):
        path = os.path.join(self.tmp, 'file')
        with open(path, 'w') as f:
            f.write('x')
        self.assertRaises(exceptions.PersistenceError,
                          serializer.ensure_directory,
                          os.path.join(path, 'dir'))
