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

"""Numerical checks of the functional inequalities behind the rate bound."""

from diraclab.estimates.abstract import abstract_scheme_check  # noqa
from diraclab.estimates.abstract import MatrixPair  # noqa
from diraclab.estimates.abstract import run_matrix_corpus  # noqa
from diraclab.estimates.identities import run_bcls_corpus  # noqa
from diraclab.estimates.identities import run_form_corpus  # noqa
from diraclab.estimates.identities import validate_bcls  # noqa
from diraclab.estimates.identities import validate_form_bound  # noqa
from diraclab.estimates.identities import validate_graph_bounds  # noqa
from diraclab.estimates.lemmas import LemmaGeometry  # noqa
from diraclab.estimates.lemmas import run_lemma_corpus  # noqa
from diraclab.estimates.lemmas import validate_lemma6  # noqa
from diraclab.estimates.lemmas import validate_mean_lemmas  # noqa
from diraclab.estimates.lemmas import validate_oscillation_bounds  # noqa
from diraclab.estimates.quadrature import mean_value  # noqa
from diraclab.estimates.report import CheckRow  # noqa
from diraclab.estimates.report import Report  # noqa
