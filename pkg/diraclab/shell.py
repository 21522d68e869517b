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
#

"""
Numerical homogenization lab for the Dirac operator with inclusion masses
"""

import argparse
import logging
import sys

from cliff import app
from cliff import commandmanager
from oslo_utils import encodeutils

from diraclab._i18n import _
from diraclab.commands import bands
from diraclab.commands import constants
from diraclab.commands import replay
from diraclab.commands import sweep
from diraclab.commands import validate
from diraclab.common import exceptions as exc
from diraclab.version import __version__


COMMANDS = {
    'constants': constants.ShowConstants,
    'validate': validate.Validate,
    'bands': bands.ShowBands,
    'sweep': sweep.Sweep,
    'replay': replay.Replay,
}

EXIT_CODES = _("""Exit codes:
  0  success
  1  unexpected error, or violations with validate --strict
  2  configuration error
  3  solver failure
  4  assumption violated without --exploratory
  5  replay mismatch
""")

HELP_OPTIONS = ('-h', '--help')


class HelpAction(argparse.Action):
    """-h/--help: the global options, every command and the exit codes.

    The shell itself is passed in as the "default" of the action.
    """

    def __call__(self, parser, namespace, values, option_string=None):
        shell = self.default
        out = shell.stdout
        parser.print_help(out)
        out.write(_('\nCommands:\n'))
        entries = sorted(shell.command_manager, key=lambda item: item[0])
        width = max(len(name) for name, _entry in entries)
        for name, entry in entries:
            description = entry.load()(shell, None).get_description()
            out.write('  %s  %s\n' % (name.ljust(width),
                                      description.split('\n')[0]))
        out.write('\n' + EXIT_CODES)
        parser.exit()


class DiracLabShell(app.App):

    # verbose_level: -q gives 0, the default is 1, each -v adds one
    DEBUG_LEVEL = 3
    CONSOLE_LEVELS = {0: logging.WARNING, 1: logging.WARNING,
                      2: logging.INFO}
    CONSOLE_MESSAGE_FORMAT = '%(message)s'
    DEBUG_MESSAGE_FORMAT = '%(levelname)s: %(name)s %(message)s'
    log = logging.getLogger(__name__)

    def __init__(self):
        super(DiracLabShell, self).__init__(
            description=__doc__.strip(),
            version=__version__,
            command_manager=commandmanager.CommandManager('diraclab.cli'), )
        self.commands = COMMANDS
        for name, command_class in self.commands.items():
            self.command_manager.add_command(name, command_class)
        # cliff registers shell completion; this tool has no use for it
        self.command_manager.commands.pop('complete', None)

    def build_option_parser(self, description, version):
        parser = argparse.ArgumentParser(
            description=description,
            formatter_class=argparse.RawDescriptionHelpFormatter,
            add_help=False, )
        parser.add_argument(
            '--version',
            action='version',
            version=__version__, )
        parser.add_argument(
            '-v', '--verbose', '--debug',
            action='count',
            dest='verbose_level',
            default=self.DEFAULT_VERBOSE_LEVEL,
            help=_('Increase verbosity of output and show tracebacks on'
                   ' errors. You can repeat this option.'))
        parser.add_argument(
            '-q', '--quiet',
            action='store_const',
            dest='verbose_level',
            const=0,
            help=_('Suppress output except warnings and errors.'))
        parser.add_argument(
            *HELP_OPTIONS,
            action=HelpAction,
            nargs=0,
            default=self,
            help=_("Show this help message and exit."))
        return parser

    def help_argv(self, argv):
        """'CMD ... -h' becomes 'help CMD'; a bare 'help' becomes '--help'."""
        named = [i for i, arg in enumerate(argv) if arg in self.commands]
        if named:
            first = named[0]
            if any(arg in HELP_OPTIONS for arg in argv[first + 1:]):
                return ['help', argv[first]]
            return argv
        if 'help' in argv:
            argv = list(argv)
            argv[argv.index('help')] = '--help'
        return argv

    def run(self, argv):
        argv = self.help_argv(list(argv))
        try:
            self.options, remainder = self.parser.parse_known_args(argv)
            self.configure_logging()
            self.interactive_mode = False
            self.initialize_app(remainder)
        except Exception as err:
            self.log.error('%s', err)
            return exc.EXIT_FAILURE
        if not remainder:
            self.parser.print_usage(self.stderr)
            return exc.EXIT_CONFIG
        return self.run_subcommand(remainder)

    def report(self, error):
        if self.options.verbose_level >= self.DEBUG_LEVEL:
            self.log.exception('%s', error)
        else:
            self.log.error('%s', error)

    def run_subcommand(self, argv):
        try:
            factory, name, sub_argv = self.command_manager.find_command(argv)
        except ValueError as e:
            self.log.error('%s', e)
            return exc.EXIT_CONFIG
        cmd = factory(self, self.options)
        try:
            self.prepare_to_run_command(cmd)
            parser = cmd.get_parser(' '.join([self.NAME, name]))
            return cmd.run(parser.parse_args(sub_argv))
        except SystemExit as e:
            # argparse exits 2 on bad options and 0 after printing help
            if e.code:
                self.stderr.write(_("Try 'diraclab help %s' for more "
                                    "information.\n") % name)
                return exc.EXIT_CONFIG
            return exc.EXIT_OK
        except exc.DiracLabException as e:
            self.report(e)
            return e.exit_code
        except Exception as e:
            self.report(e)
            if self.options.verbose_level >= self.DEBUG_LEVEL:
                raise
            return exc.EXIT_FAILURE

    def configure_logging(self):
        """One console handler on stderr at the level chosen by -v/-q."""
        level = self.CONSOLE_LEVELS.get(self.options.verbose_level,
                                        logging.DEBUG)
        console = logging.StreamHandler(self.stderr)
        console.setLevel(level)
        console.setFormatter(logging.Formatter(
            self.DEBUG_MESSAGE_FORMAT if level == logging.DEBUG
            else self.CONSOLE_MESSAGE_FORMAT))
        root_logger = logging.getLogger('')
        root_logger.setLevel(logging.DEBUG)
        root_logger.addHandler(console)


def main(argv=sys.argv[1:]):
    try:
        return DiracLabShell().run(
            list(map(encodeutils.safe_decode, argv)))
    except KeyboardInterrupt:
        print("... terminating diraclab", file=sys.stderr)
        return 130
    except exc.DiracLabException as e:
        return e.exit_code
    except Exception as e:
        print(e)
        return exc.EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
