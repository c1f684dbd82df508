import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from fracdisc.config import Mode, load_config
from fracdisc.exceptions import ConfigError, FracDiscError
from fracdisc.runner import parse_sweep, run, run_sweep

logger = logging.getLogger('fracdisc')


class Command(BaseCommand):
    """
    fracdisc <mode> --config <path> [--out <path>] [--sweep <field>=<v1,v2,...>]
    """

    help = 'Run a discrete fractional-calculus computation described by a config file'
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('mode', choices=[mode.value for mode in Mode])
        parser.add_argument('--config', required=True, help='INI run configuration')
        parser.add_argument('--out', help='CSV output path (default: stdout, required with --sweep)')
        parser.add_argument(
            '--sweep',
            help='run once per value of sample_period or memory_length, e.g. memory_length=1,2,5,10',
        )

    def handle(self, *args, **options):
        try:
            config = load_config(options['config'])
            if config.mode.value != options['mode']:
                raise ConfigError(
                    f"config mode '{config.mode.value}' does not match command mode '{options['mode']}'",
                    field='mode',
                )
            out = options['out'] or config.output
            if options['sweep']:
                field, values = parse_sweep(options['sweep'])
                if not out:
                    raise ConfigError('--out is required with --sweep', field='out')
                for path in run_sweep(config, field, values, out, settings.FRACDISC_THREADS):
                    logger.info('sweep output %s', path)
            elif out:
                run(config, out)
            else:
                self.stdout.write(run(config), ending='')
        except FracDiscError as exc:
            logger.debug('%s run failed: %s', options['mode'], exc)
            raise CommandError(str(exc)) from exc
        except OSError as exc:
            raise CommandError(f'{exc.strerror}: {exc.filename}') from exc
