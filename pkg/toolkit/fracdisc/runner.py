import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import Mode
from .exceptions import ConfigError, ExpectationError
from .frac_core import apply_operator, gl_coeffs, make_signal, operator_weights
from .loop import simulate_example_direct, simulate_loop, step_setpoint
from .systems import freq_response, simulate_system

logger = logging.getLogger(__name__)

# Columns written as integers; every other column uses FLOAT_FORMAT
INDEX_COLUMNS = ('k', 'j')
FLOAT_FORMAT = '{:.12g}'


@dataclass(frozen=True)
class Table:
    """
    Output of one run: ordered header plus one array per column
    """

    header: tuple
    columns: dict

    def __len__(self):
        return len(self.columns[self.header[0]])

    def rows(self):
        for index in range(len(self)):
            yield [format_value(name, self.columns[name][index]) for name in self.header]


def format_value(name, value):
    if name in INDEX_COLUMNS:
        return str(int(value))
    # + 0.0 turns -0.0 into 0.0
    return FLOAT_FORMAT.format(float(value) + 0.0)


def _time_table(header, sample_period, columns):
    n = len(next(iter(columns.values())))
    k = np.arange(n)
    return Table(header=header, columns={'k': k, 't': k * sample_period, **columns})


def _signal_for(config):
    signal = config.signal
    return make_signal(
        signal['kind'],
        config.n_steps,
        config.discretization.sample_period,
        amplitude=signal['amplitude'],
        onset=signal['onset'],
        frequency=signal['frequency'],
    )


def compute(config):
    """
    Dispatch a RunConfig to its computation and return the output table
    """
    mode = config.mode
    header = config.columns
    if mode is Mode.COEFFS:
        table = gl_coeffs(config.order, config.n_terms)
        return Table(header=header, columns={'j': np.arange(len(table)), 'c_j': table.coeffs})

    disc = config.discretization
    if mode is Mode.OPERATOR:
        u = _signal_for(config)
        y = apply_operator(operator_weights(config.order, disc, u.size), u)
        return _time_table(header, disc.sample_period, {'u': u, 'y': y})
    if mode is Mode.SIMULATE_SYSTEM:
        result = simulate_system(config.system, _signal_for(config), disc)
        return _time_table(header, disc.sample_period, {'u': result.u, 'y': result.y})
    if mode is Mode.SIMULATE_LOOP:
        setpoint = step_setpoint(config.n_steps, **config.setpoint)
        result = simulate_loop(config.system, config.controller, setpoint, disc)
        return _time_table(header, disc.sample_period, _loop_columns(result))
    if mode is Mode.EXAMPLE:
        result = simulate_example_direct(config.example)
        return _time_table(header, disc.sample_period, _loop_columns(result))
    if mode is Mode.FREQ_RESP:
        omegas = np.asarray(config.omegas)
        response = freq_response(config.system, disc, omegas)
        magnitude = np.abs(response)
        with np.errstate(divide='ignore'):
            mag_db = 20.0 * np.log10(magnitude)
        return Table(
            header=header,
            columns={
                'omega': omegas,
                're': response.real,
                'im': response.imag,
                'mag_db': mag_db,
                'phase_deg': np.degrees(np.angle(response)),
            },
        )
    raise ConfigError(f'unsupported mode {mode}', field='mode')


def _loop_columns(result):
    return {'w': result.w, 'e': result.e, 'u': result.u, 'y': result.y}


def check_expectations(table, checks, tolerance):
    """
    Evaluate the [expect] checks of a config against a computed table

    Raises:
        ExpectationError: on the first check that misses by more than tolerance
    """
    reducers = {'final': lambda values: values[-1], 'max': np.max, 'min': np.min}
    for (column, statistic), expected in sorted(checks.items()):
        actual = float(reducers[statistic](np.asarray(table.columns[column], dtype=float)))
        if not abs(actual - expected) <= tolerance:
            raise ExpectationError(
                f'expected {column}_{statistic} = {expected:.12g} within {tolerance:g}, got {actual:.12g}'
            )


def write_csv(table, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(table.header)
    writer.writerows(table.rows())


def render_csv(table):
    buffer = io.StringIO()
    write_csv(table, buffer)
    return buffer.getvalue()


def run(config, out=None):
    """
    Compute a run, check its embedded expectations and write the CSV

    Args:
        config: validated RunConfig
        out: output path; None returns the CSV text without writing

    Returns:
        the CSV text
    """
    logger.info('running %s', config.mode.value)
    table = compute(config)
    check_expectations(table, config.checks, config.tolerance)
    text = render_csv(table)
    if out is not None:
        path = Path(out)
        with path.open('w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        logger.info('wrote %d rows to %s', len(table), path)
    return text


def parse_sweep(text):
    """
    'field=v1,v2,...' -> (field, ['v1', 'v2', ...])
    """
    field, sep, raw = text.partition('=')
    values = [value.strip() for value in raw.split(',') if value.strip()]
    if not sep or not field.strip() or not values:
        raise ConfigError(f"sweep must look like field=v1,v2,..., got '{text}'", field='sweep')
    for value in values:
        try:
            float(value)
        except ValueError:
            raise ConfigError(f"sweep value '{value}' is not a number", field='sweep') from None
    return field.strip(), values


def sweep_path(out, field, value):
    path = Path(out)
    return path.with_name(f'{path.stem}_{field}-{value}{path.suffix}')


def run_sweep(config, field, values, out, max_workers=1):
    """
    Run one config per swept value concurrently, one CSV file per value

    Each worker owns its output file; results come back in input order.

    Raises:
        ConfigError: a value is repeated, so two runs would share one file
    """
    paths = [sweep_path(out, field, value) for value in values]
    repeated = sorted({value for value, path in zip(values, paths) if paths.count(path) > 1})
    if repeated:
        raise ConfigError(f"sweep value '{repeated[0]}' is repeated", field='sweep')
    configs = [config.with_value(field, value) for value in values]
    workers = max(1, min(int(max_workers), len(configs)))
    logger.info('sweeping %s over %d values with %d workers', field, len(values), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        list(executor.map(run, configs, paths))
    return paths
