import logging
import sys

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import APIException, ValidationError

from numio.selftest import run_all
from numio.services import STYLES, NumioService

logger = logging.getLogger(__name__)

# Default output style per subcommand; None prints fraction and decimal.
DEFAULT_STYLES = {
    'reduce': 'binary',
    'value': None,
    'add': 'binary',
    'sub': 'binary',
    'accumulate': 'binary',
    'approx': 'binary',
    'trace-add': 'fraction',
}

# Subcommands each global flag applies to.
GLOBAL_FLAGS = {
    'style': set(DEFAULT_STYLES),
    'fermion': {'reduce', 'add', 'sub', 'fermionize'},
    'trace': {'reduce'},
    'seed': {'selftest'},
}


def _message(exc: APIException) -> str:
    detail = exc.detail
    if isinstance(detail, list):
        return '; '.join(str(item) for item in detail)
    if isinstance(detail, dict):
        return '; '.join(f"{key}: {value}" for key, value in detail.items())
    return str(detail)


class Command(BaseCommand):
    help = 'Reduce, evaluate and combine occupation-number states of complex dyadic rationals.'

    def add_arguments(self, parser):
        parser.add_argument('--style', dest='global_style', choices=STYLES, help='Output style.')
        parser.add_argument('--fermion', dest='global_fermion', action='store_true', help='Use fermionic strings.')
        parser.add_argument('--trace', dest='global_trace', action='store_true', help='List rewrite steps.')
        parser.add_argument('--seed', dest='global_seed', type=int, help='Seed for randomized checks.')
        subparsers = parser.add_subparsers(dest='subcommand', required=True)

        def styled(name, help_text):
            sub = subparsers.add_parser(name, help=help_text)
            sub.add_argument('--style', choices=STYLES)
            return sub

        reduce = styled('reduce', 'Reduce a state literal to its standard form.')
        reduce.add_argument('literal')
        reduce.add_argument('--trace', action='store_true', help='List every rewrite step with the value.')
        reduce.add_argument('--fermion', action='store_true', help='Reduce the fermionic string instead.')

        value = styled('value', 'Exact value of a literal.')
        value.add_argument('literal')
        value.add_argument('--reduce', action='store_true', help='Allow binary output for a nonstandard state.')

        for name, help_text in (('add', 'Add two literals.'), ('sub', 'Subtract the second literal from the first.')):
            sub = styled(name, help_text)
            sub.add_argument('x')
            sub.add_argument('y')
            sub.add_argument('--allow-nonstandard', action='store_true')
            sub.add_argument('--fermion', action='store_true', help='Fermionic concatenation with parity phase.')

        accumulate = styled('accumulate', 'Sum a file of literals, one per line.')
        accumulate.add_argument('path', help="File to read, or '-' for standard input.")
        accumulate.add_argument('--show-nonstandard', action='store_true', help='Print the per-site count table.')

        approx = styled('approx', 'Standard state within 2**-k of p/q.')
        approx.add_argument('p', type=int)
        approx.add_argument('q', type=int)
        approx.add_argument('k', type=int)

        fermionize = subparsers.add_parser('fermionize', help='Canonical fermion string with h labels and phase.')
        fermionize.add_argument('literal')

        trace_add = styled('trace-add', 'Add two superpositions and trace to a mixture.')
        trace_add.add_argument('psi')
        trace_add.add_argument('psi2')
        trace_add.add_argument('--merge', action='store_true', help='Merge N-equal mixture components.')

        selftest = subparsers.add_parser('selftest', help='Run the randomized property checks.')
        selftest.add_argument('--seed', type=int)
        selftest.add_argument('--samples', type=int, default=settings.NUMSTATES['SELFTEST_SAMPLES'])

    def _resolve_flags(self, subcommand, options):
        """
        Fold flags given before the subcommand into the subcommand's own.

        A flag given at both levels keeps the subcommand's value; a global
        flag that means nothing to the subcommand is a usage error.
        """
        for flag, subcommands in GLOBAL_FLAGS.items():
            given = options.get(f'global_{flag}')
            if given is None or given is False:
                continue
            if subcommand not in subcommands:
                raise CommandError(f"--{flag} does not apply to {subcommand}", returncode=2)
            if options.get(flag) is None or options.get(flag) is False:
                options[flag] = given
        if options.get('style') is None:
            options['style'] = DEFAULT_STYLES.get(subcommand)
        if subcommand == 'selftest' and options.get('seed') is None:
            options['seed'] = settings.NUMSTATES['DEFAULT_SEED']

    def handle(self, *args, **options):
        subcommand = options['subcommand']
        self._resolve_flags(subcommand, options)
        if subcommand == 'selftest':
            return self._selftest(options['seed'], options['samples'])
        try:
            report = self._dispatch(subcommand, options)
        except ValidationError as exc:
            logger.warning(f"numio {subcommand} rejected its input: {_message(exc)}")
            raise CommandError(_message(exc), returncode=2)
        except APIException as exc:
            logger.error(f"numio {subcommand} hit an internal error", exc_info=True)
            raise CommandError(_message(exc), returncode=1)
        for line in report.lines:
            self.stdout.write(line)

    def _dispatch(self, subcommand, options):
        style = options['style']
        if subcommand == 'reduce':
            return NumioService.reduce(options['literal'], style, options['fermion'], options['trace'])
        if subcommand == 'value':
            return NumioService.value(options['literal'], style, options['reduce'])
        if subcommand in ('add', 'sub'):
            return NumioService.combine(
                options['x'], options['y'], subtract=subcommand == 'sub', style=style,
                allow_nonstandard=options['allow_nonstandard'], fermion=options['fermion'],
            )
        if subcommand == 'accumulate':
            return self._accumulate(options['path'], style, options['show_nonstandard'])
        if subcommand == 'approx':
            return NumioService.approx(options['p'], options['q'], options['k'], style)
        if subcommand == 'fermionize':
            return NumioService.fermionize(options['literal'])
        return NumioService.trace_add(options['psi'], options['psi2'], options['merge'], style)

    def _accumulate(self, path, style, show_nonstandard):
        if path == '-':
            return NumioService.accumulate(sys.stdin.readlines(), style, show_nonstandard)
        try:
            with open(path, encoding='utf-8') as handle:
                lines = handle.readlines()
        except OSError as exc:
            raise CommandError(f"Cannot read {path}: {exc.strerror}", returncode=2)
        return NumioService.accumulate(lines, style, show_nonstandard)

    def _selftest(self, seed, samples):
        if samples < 1:
            raise CommandError('--samples must be positive', returncode=2)
        self.stdout.write(f"seed {seed}, {samples} samples")
        try:
            results = run_all(seed, samples, log=self.stdout.write)
        except APIException as exc:
            logger.error('Self-test stopped on an internal error', exc_info=True)
            raise CommandError(_message(exc), returncode=1)
        failed = [r.name for r in results if not r.passed]
        if failed:
            raise CommandError(f"Properties failed: {', '.join(failed)}", returncode=1)
        self.stdout.write(self.style.SUCCESS('All properties hold.'))
