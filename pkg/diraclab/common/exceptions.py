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

"""
diraclab base exception handling.

Exceptions are classified into two categories:
* Exceptions from the numerical library:
  This type of exceptions should inherit DiracLabError.
* Exceptions from CLI code:
  This type of exceptions should inherit DiracLabCLIError.

Every exception carries the process exit code the shell reports for it.
"""

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_ASSUMPTION = 4
EXIT_REPLAY = 5


class DiracLabException(Exception):
    """Base diraclab Exception.

    To correctly use this class, inherit from it and define
    a 'message' property. That message will get printf'd
    with the keyword arguments provided to the constructor.
    """
    message = _("An unknown exception occurred.")
    exit_code = EXIT_FAILURE

    def __init__(self, message=None, **kwargs):
        if message:
            self.message = message
        self.kwargs = kwargs
        try:
            self._error_string = self.message % kwargs
        except Exception:
            # at least get the core message out if something happened
            self._error_string = self.message
        super(DiracLabException, self).__init__(self._error_string)

    def __str__(self):
        return self._error_string


# Exceptions from the numerical library

class DiracLabError(DiracLabException):
    """Base exception of the numerical modules.

    A library error surfacing in the CLI is a solver failure.
    """
    exit_code = EXIT_SOLVER


class InvalidShape(DiracLabError):
    message = _("Invalid %(kind)s shape: %(reason)s")


class MeshError(DiracLabError):
    message = _("Meshing failed: %(reason)s")


class EigenSolverError(DiracLabError):
    message = _("Eigen-solver failure (%(problem)s): %(reason)s")


class QuadratureError(DiracLabError):
    message = _("Quadrature did not converge: %(reason)s")


class InvalidLattice(DiracLabError):
    message = _("Invalid lattice configuration: %(reason)s")


class FiberTooLarge(DiracLabError):
    message = _("Fiber dimension %(dimension)d for cutoff N=%(cutoff)d exceeds "
                "the cap of %(cap)d.")


class DimensionMismatch(DiracLabError):
    message = _("Dimension mismatch: %(left)s vs %(right)s.")


class NotHermitian(DiracLabError):
    message = _("Matrix %(name)s is not Hermitian (residual %(residual)s).")


class GeometryNestingError(DiracLabError):
    message = _("Geometry nesting violated: %(reason)s")


class MissingConstant(DiracLabError):
    message = _("Constant %(name)s is required but was not computed.")


class NoSpectralGap(DiracLabError):
    message = _("No spectral gap around zero: lower=%(lower)s upper=%(upper)s")


class InsufficientRecords(DiracLabError):
    message = _("Rate fit needs at least %(needed)d usable records, "
                "got %(got)d.")


class PersistenceError(DiracLabError):
    message = _("Cannot write %(path)s: %(reason)s")


class SweepAborted(DiracLabError):
    """Raised when a sweep fails part way; carries the finished records."""
    message = _("Sweep aborted at epsilon=%(epsilon)s: %(reason)s")

    def __init__(self, message=None, records=None, **kwargs):
        self.records = list(records or [])
        super(SweepAborted, self).__init__(message, **kwargs)


# Command line exceptions

class DiracLabCLIError(DiracLabException):
    """Exception raised when command line handling fails."""
    pass


class CommandError(DiracLabCLIError):
    exit_code = EXIT_CONFIG


class ConfigError(DiracLabCLIError):
    message = _("Invalid configuration %(path)s: %(reason)s")
    exit_code = EXIT_CONFIG


class AssumptionViolation(DiracLabCLIError):
    message = _("Configuration violates %(assumption)s: %(reason)s. "
                "Re-run with --exploratory to compute it anyway.")
    exit_code = EXIT_ASSUMPTION


class SolverFailure(DiracLabCLIError):
    message = _("Solver failure: %(reason)s")
    exit_code = EXIT_SOLVER


class ReplayMismatch(DiracLabCLIError):
    message = _("Replay of %(manifest)s differs in %(artifacts)s.")
    exit_code = EXIT_REPLAY


class ValidationFailed(DiracLabCLIError):
    message = _("%(violations)d inequality check(s) violated, see "
                "%(path)s.")
    exit_code = EXIT_FAILURE
