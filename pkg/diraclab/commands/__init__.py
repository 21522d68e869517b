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

import abc
import argparse
import logging

from cliff import command

from diraclab._i18n import _
from diraclab.common import config as run_config
from diraclab.common import exceptions
from diraclab.common import utils
from diraclab.common import validators
from diraclab import lattice

OUT_DIR_ENV = 'OUT_DIR'


def check_positive_int(value):
    try:
        value = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(_("invalid int value: %r") % value)
    if value < 1:
        raise argparse.ArgumentTypeError(_("input value %d must be positive")
                                         % value)
    return value


def check_seed(value):
    msg = validators.int_range_error('seed', value, 0, run_config.MAX_SEED)
    if msg:
        raise argparse.ArgumentTypeError(msg)
    return int(value, 0) if isinstance(value, str) else int(value)


def output_directory(parsed_out, conf):
    """--out, then $OUT_DIR, then output.directory of the config."""
    return (parsed_out or utils.env(OUT_DIR_ENV) or
            conf.output_directory)


def check_lattice_assumptions(config, exploratory):
    """Raise AssumptionViolation for blocking failures unless exploratory."""
    report = lattice.check_assumptions(config)
    failures = report.blocking_failures()
    if failures and not exploratory:
        raise exceptions.AssumptionViolation(assumption=failures[0].name,
                                             reason=failures[0].detail)
    return report


# cliff.command.Command is abstract class so that metaclass of
# subclass must be subclass of metaclass of all its base.
# otherwise metaclass conflict exception is raised.
class DiracLabCommandMeta(abc.ABCMeta):
    def __new__(cls, name, bases, cls_dict):
        if 'log' not in cls_dict:
            cls_dict['log'] = logging.getLogger(
                cls_dict['__module__'] + '.' + name)
        return super(DiracLabCommandMeta, cls).__new__(cls,
                                                       name, bases, cls_dict)


class DiracLabCommand(command.Command, metaclass=DiracLabCommandMeta):
    """Base of every subcommand.

    Subclasses implement :meth:`produce`, which runs the pipeline for a
    loaded configuration and writes the artifacts; replay calls the same
    method with the options recorded in a manifest.
    """

    # options stored in the manifest and handed back to produce on replay
    replay_options = ('exploratory',)

    def get_parser(self, prog_name):
        parser = super(DiracLabCommand, self).get_parser(prog_name)
        parser.add_argument(
            '--config', metavar='PATH',
            help=_('YAML run configuration. Every key is optional.'))
        parser.add_argument(
            '--out', metavar='DIR',
            help=_('Output directory. Defaults to $%s, then to '
                   'output.directory of the configuration.') % OUT_DIR_ENV)
        parser.add_argument(
            '--seed', metavar='U64', type=check_seed,
            help=_('Seed overriding the configuration.'))
        parser.add_argument(
            '--workers', metavar='N', type=check_positive_int,
            help=_('Number of parallel workers.'))
        parser.add_argument(
            '--exploratory', action='store_true', default=False,
            help=_('Run configurations that violate the standing '
                   'assumptions; results carry no verdict.'))
        self.add_known_arguments(parser)
        return parser

    def add_known_arguments(self, parser):
        pass

    def load_config(self, parsed_args):
        if parsed_args.config:
            conf = run_config.RunConfig.from_file(parsed_args.config)
        else:
            conf = run_config.RunConfig()
        conf.apply_overrides(seed=parsed_args.seed,
                             workers=parsed_args.workers)
        conf.output['directory'] = output_directory(parsed_args.out, conf)
        return conf

    def options(self, parsed_args):
        return dict((name, getattr(parsed_args, name))
                    for name in self.replay_options)

    @classmethod
    def produce(cls, conf, destination, options):
        raise NotImplementedError()

    def take_action(self, parsed_args):
        conf = self.load_config(parsed_args)
        destination = conf.output_directory
        self.log.debug('writing artifacts to %s', destination)
        return self.present(self.produce(conf, destination,
                                         self.options(parsed_args)),
                            parsed_args)

    def present(self, result, parsed_args):
        return 0
