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

"""Spectral constants of inclusion shapes by P1 finite elements."""

from diraclab.shape_constants.assembly import assemble_constants  # noqa
from diraclab.shape_constants.assembly import compute_shape_constants  # noqa
from diraclab.shape_constants.assembly import constants_pipeline  # noqa
from diraclab.shape_constants.assembly import ShapeConstants  # noqa
from diraclab.shape_constants.bounds import bound_suite  # noqa
from diraclab.shape_constants.bounds import bramble_payne_bound  # noqa
from diraclab.shape_constants.bounds import payne_weinberger_bound  # noqa
from diraclab.shape_constants.bounds import shape_corpus  # noqa
from diraclab.shape_constants.bounds import validate_scaled_inequalities  # noqa
from diraclab.shape_constants.eigen import neumann_lambda  # noqa
from diraclab.shape_constants.eigen import richardson  # noqa
from diraclab.shape_constants.eigen import robin_lambda  # noqa
from diraclab.shape_constants.eigen import steklov_lambda  # noqa
from diraclab.shape_constants.eigen import trace_constant  # noqa
from diraclab.shape_constants.mesh import mesh_shape  # noqa
