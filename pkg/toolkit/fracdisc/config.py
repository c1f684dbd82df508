"""
Run configuration: an INI document with one [section] per concern

    [run]
    mode = example

    [discretization]
    sample_period = 0.05

    [horizon]
    n_steps = 2000

Every mode names the sections it needs; anything else is rejected.
"""
import configparser
import dataclasses
import enum
import logging
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .controllers import FracPid
from .exceptions import ConfigError, FracDiscError
from .frac_core import Discretization, Rule, check_omegas
from .loop import ExampleParams
from .serializers import (
    CoeffsSerializer,
    ControllerSerializer,
    DiscretizationSerializer,
    ExampleSerializer,
    ExpectSerializer,
    FrequencySerializer,
    HorizonSerializer,
    OperatorSerializer,
    RunSerializer,
    SetpointSerializer,
    SignalSerializer,
    SystemSerializer,
)
from .systems import FracSystem

logger = logging.getLogger(__name__)


class Mode(enum.Enum):
    COEFFS = 'coeffs'
    OPERATOR = 'operator'
    SIMULATE_SYSTEM = 'simulate-system'
    SIMULATE_LOOP = 'simulate-loop'
    EXAMPLE = 'example'
    FREQ_RESP = 'freq-resp'


SECTION_SERIALIZERS = {
    'run': RunSerializer,
    'discretization': DiscretizationSerializer,
    'horizon': HorizonSerializer,
    'coeffs': CoeffsSerializer,
    'operator': OperatorSerializer,
    'signal': SignalSerializer,
    'system': SystemSerializer,
    'controller': ControllerSerializer,
    'setpoint': SetpointSerializer,
    'frequency': FrequencySerializer,
    'example': ExampleSerializer,
}

# mode -> (required sections, optional sections)
MODE_SECTIONS = {
    Mode.COEFFS: ({'run', 'coeffs'}, {'expect'}),
    Mode.OPERATOR: ({'run', 'discretization', 'horizon', 'operator', 'signal'}, {'expect'}),
    Mode.SIMULATE_SYSTEM: ({'run', 'discretization', 'horizon', 'system', 'signal'}, {'expect'}),
    Mode.SIMULATE_LOOP: (
        {'run', 'discretization', 'horizon', 'system', 'controller'},
        {'setpoint', 'expect'},
    ),
    Mode.EXAMPLE: ({'run', 'discretization', 'horizon'}, {'example', 'expect'}),
    Mode.FREQ_RESP: ({'run', 'discretization', 'system', 'frequency'}, {'expect'}),
}

# CSV header per mode
MODE_COLUMNS = {
    Mode.COEFFS: ('j', 'c_j'),
    Mode.OPERATOR: ('k', 't', 'u', 'y'),
    Mode.SIMULATE_SYSTEM: ('k', 't', 'u', 'y'),
    Mode.SIMULATE_LOOP: ('k', 't', 'w', 'e', 'u', 'y'),
    Mode.EXAMPLE: ('k', 't', 'w', 'e', 'u', 'y'),
    Mode.FREQ_RESP: ('omega', 're', 'im', 'mag_db', 'phase_deg'),
}

SWEEP_FIELDS = ('sample_period', 'memory_length')


@dataclass(frozen=True)
class RunConfig:
    """
    Validated run description; only the fields its mode uses are set
    """

    mode: Mode
    discretization: Discretization | None = None
    n_steps: int | None = None
    order: float | None = None
    n_terms: int | None = None
    signal: dict | None = None
    system: FracSystem | None = None
    controller: FracPid | None = None
    setpoint: dict | None = None
    omegas: tuple | None = None
    example: ExampleParams | None = None
    checks: dict = dataclasses.field(default_factory=dict)
    tolerance: float = 1e-6
    output: str | None = None

    @property
    def columns(self):
        return MODE_COLUMNS[self.mode]

    def with_value(self, field, value):
        """
        Copy with sample_period or memory_length replaced, for sweeps
        """
        if field not in SWEEP_FIELDS:
            raise ConfigError(f"cannot sweep '{field}', expected one of {', '.join(SWEEP_FIELDS)}", field=field)
        if self.discretization is None:
            raise ConfigError(f"mode {self.mode.value} has no discretization to sweep", field=field)
        if field == 'memory_length' and self.mode is Mode.EXAMPLE:
            raise ConfigError('example mode always runs with full memory', field=field)
        discretization = dataclasses.replace(self.discretization, **{field: float(value)})
        changes = {'discretization': discretization}
        if self.example is not None:
            changes['example'] = dataclasses.replace(self.example, T=discretization.sample_period)
        if self.omegas is not None:
            _checked_omegas(self.omegas, discretization.sample_period)
        return dataclasses.replace(self, **changes)


def locate(text, section, key=None):
    """
    1-based line of [section] or of key inside it, None if absent
    """
    current = None
    key_pattern = re.compile(rf'^\s*{re.escape(key)}\s*[=:]') if key else None
    for number, line in enumerate(text.splitlines(), start=1):
        header = re.match(r'^\s*\[([^\]]+)\]', line)
        if header:
            current = header.group(1).strip()
            if key is None and current == section:
                return number
            continue
        if key_pattern and current == section and key_pattern.match(line):
            return number
    return None


def _first_error(errors):
    """
    (field, message, code) of the first entry of a DRF error dict
    """
    field, messages = next(iter(errors.items()))
    while isinstance(messages, dict):
        field, messages = next(iter(messages.items()))
    detail = messages[0] if isinstance(messages, list) else messages
    return field, str(detail), getattr(detail, 'code', None)


def _validate_section(parser, text, section, serializer_class, **kwargs):
    data = dict(parser[section]) if parser.has_section(section) else {}
    serializer = serializer_class(data=data, **kwargs)
    if serializer.is_valid():
        return serializer.validated_data
    field, message, code = _first_error(serializer.errors)
    if field == 'non_field_errors':
        raise ConfigError(message, field=section, line=locate(text, section))
    if code == 'required':
        raise ConfigError(f'missing field: {field}', field=field, line=locate(text, section))
    raise ConfigError(message, field=f'{section}.{field}', line=locate(text, section, field))


def _checked_omegas(omegas, sample_period):
    try:
        return tuple(check_omegas(omegas, sample_period))
    except FracDiscError as exc:
        raise ConfigError(str(exc), field='frequency.omegas') from exc


def _read_document(text, source):
    parser = configparser.ConfigParser(interpolation=None, default_section='__defaults__')
    parser.optionxform = str
    try:
        parser.read_string(text, source=source or '<config>')
    except configparser.Error as exc:
        message = str(exc).splitlines()[0]
        raise ConfigError(f'malformed document: {message}', line=getattr(exc, 'lineno', None)) from exc
    return parser


def parse_config(text, source=None):
    """
    Parse and validate a run configuration document

    Args:
        text: the INI document
        source: file name used in diagnostics

    Raises:
        ConfigError: malformed document, missing field or out-of-range value,
            naming the field and its line
    """
    parser = _read_document(text, source)
    if not parser.has_option('run', 'mode'):
        raise ConfigError('missing field: mode', field='mode')
    run = _validate_section(parser, text, 'run', RunSerializer)
    try:
        mode = Mode(run['mode'])
    except ValueError:
        choices = ', '.join(item.value for item in Mode)
        raise ConfigError(
            f"unknown mode '{run['mode']}', expected one of {choices}",
            field='mode',
            line=locate(text, 'run', 'mode'),
        ) from None

    required, optional = MODE_SECTIONS[mode]
    present = set(parser.sections())
    extra = sorted(present - required - optional)
    if extra:
        raise ConfigError(
            f'section [{extra[0]}] is not used by mode {mode.value}',
            field=extra[0],
            line=locate(text, extra[0]),
        )
    missing = sorted(required - present)
    if missing:
        raise ConfigError(f'missing section: [{missing[0]}]', field=missing[0])

    values = {section: _validate_section(parser, text, section, SECTION_SERIALIZERS[section])
              for section in sorted(present & set(SECTION_SERIALIZERS))}
    expect = _validate_section(parser, text, 'expect', ExpectSerializer, columns=MODE_COLUMNS[mode])

    fields = {
        'mode': mode,
        'checks': dict(expect['checks']),
        'tolerance': expect['tolerance'],
        'output': run.get('output'),
    }
    if 'discretization' in values:
        fields['discretization'] = _build_discretization(text, mode, values['discretization'])
    if 'horizon' in values:
        fields['n_steps'] = values['horizon']['n_steps']
    if mode is Mode.COEFFS:
        fields.update(order=values['coeffs']['order'], n_terms=values['coeffs']['n_terms'])
    if mode is Mode.OPERATOR:
        fields['order'] = values['operator']['order']
    if 'signal' in values:
        fields['signal'] = dict(values['signal'])
    if 'system' in values:
        fields['system'] = values['system']['system']
    if 'controller' in values:
        controller = values['controller']
        fields['controller'] = FracPid(
            K=controller['K'],
            Ti=controller['Ti'],
            Td=controller['Td'],
            lam=controller['lambda'],
            delta=controller['delta'],
        )
    if mode is Mode.SIMULATE_LOOP:
        fields['setpoint'] = dict(_validate_section(parser, text, 'setpoint', SetpointSerializer))
    if mode is Mode.FREQ_RESP:
        fields['omegas'] = _build_omegas(values['frequency'], fields['discretization'])
    if mode is Mode.EXAMPLE:
        overrides = dict(values.get('example', {}))
        fields['example'] = ExampleParams(
            T=fields['discretization'].sample_period, n_steps=fields['n_steps'], **overrides
        )
        if fields['n_steps'] < 2:
            raise ConfigError(
                'example mode needs n_steps >= 2',
                field='horizon.n_steps',
                line=locate(text, 'horizon', 'n_steps'),
            )
    logger.debug('parsed %s config from %s', mode.value, source or '<text>')
    return RunConfig(**fields)


def _build_discretization(text, mode, data):
    rule = Rule(data['rule'])
    memory_length = data.get('memory_length')
    time_domain = mode in (Mode.SIMULATE_SYSTEM, Mode.SIMULATE_LOOP, Mode.EXAMPLE)
    if time_domain and rule is not Rule.BACKWARD_EULER:
        raise ConfigError(
            f'mode {mode.value} requires rule = {Rule.BACKWARD_EULER.value}',
            field='discretization.rule',
            line=locate(text, 'discretization', 'rule'),
        )
    if mode is Mode.EXAMPLE and memory_length is not None:
        raise ConfigError(
            'example mode always runs with full memory',
            field='discretization.memory_length',
            line=locate(text, 'discretization', 'memory_length'),
        )
    return Discretization(sample_period=data['sample_period'], rule=rule, memory_length=memory_length)


def _build_omegas(data, disc):
    if 'omegas' in data:
        omegas = data['omegas']
    else:
        omegas = np.geomspace(data['omega_min'], data['omega_max'], data['n_points'])
    return _checked_omegas(omegas, disc.sample_period)


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise ConfigError(f'cannot read config: {exc.strerror}', field=str(path)) from exc
    return parse_config(text, source=str(path))
