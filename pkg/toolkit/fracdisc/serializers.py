from rest_framework import serializers

from .exceptions import FracDiscError
from .frac_core import Rule
from .systems import FracSystem

SIGNAL_KINDS = ('step', 'ramp', 'impulse', 'sine', 'constant')


class PairListField(serializers.Field):
    """
    'coef:order, coef:order, ...' <-> list of (coef, order) float pairs
    """

    def to_internal_value(self, data):
        pairs = []
        for item in str(data).split(','):
            item = item.strip()
            if not item:
                continue
            try:
                coef, order = item.split(':')
                pairs.append((float(coef), float(order)))
            except ValueError:
                raise serializers.ValidationError(f"expected coefficient:order pairs, got '{item}'")
        return pairs

    def to_representation(self, value):
        return ', '.join(f'{coef:g}:{order:g}' for coef, order in value)


class FloatListField(serializers.Field):
    """
    Comma-separated list of floats
    """

    def to_internal_value(self, data):
        try:
            values = [float(item) for item in str(data).split(',') if item.strip()]
        except ValueError:
            raise serializers.ValidationError('expected a comma-separated list of numbers')
        if not values:
            raise serializers.ValidationError('expected at least one value')
        return values

    def to_representation(self, value):
        return ', '.join(f'{item:g}' for item in value)


class SectionSerializer(serializers.Serializer):
    """
    Base for one [section] of a run configuration; rejects unknown keys
    """

    def validate(self, attrs):
        unknown = sorted(set(self.initial_data) - set(self.fields))
        if unknown:
            raise serializers.ValidationError({name: 'unknown field' for name in unknown})
        return attrs


class RunSerializer(SectionSerializer):
    mode = serializers.CharField()
    output = serializers.CharField(required=False)


class DiscretizationSerializer(SectionSerializer):
    rule = serializers.ChoiceField(
        choices=[rule.value for rule in Rule], default=Rule.BACKWARD_EULER.value
    )
    sample_period = serializers.FloatField()
    memory_length = serializers.FloatField(required=False)

    def validate_sample_period(self, value):
        if not value > 0:
            raise serializers.ValidationError('sample_period must be positive')
        return value

    def validate(self, attrs):
        attrs = super().validate(attrs)
        memory_length = attrs.get('memory_length')
        if memory_length is not None and not memory_length >= attrs['sample_period']:
            raise serializers.ValidationError(
                {'memory_length': 'memory_length must be at least sample_period'}
            )
        return attrs


class HorizonSerializer(SectionSerializer):
    n_steps = serializers.IntegerField(min_value=1)


class CoeffsSerializer(SectionSerializer):
    order = serializers.FloatField()
    n_terms = serializers.IntegerField(min_value=1)


class OperatorSerializer(SectionSerializer):
    order = serializers.FloatField()


class SignalSerializer(SectionSerializer):
    kind = serializers.ChoiceField(choices=SIGNAL_KINDS, default='step')
    amplitude = serializers.FloatField(default=1.0)
    onset = serializers.IntegerField(min_value=0, default=0)
    frequency = serializers.FloatField(default=1.0)


class SystemSerializer(SectionSerializer):
    denominator = PairListField()
    numerator = PairListField(default=list)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        try:
            attrs['system'] = FracSystem.from_pairs(attrs['denominator'], attrs['numerator'])
        except FracDiscError as exc:
            field = 'numerator' if str(exc).startswith('numerator') else 'denominator'
            raise serializers.ValidationError({field: str(exc)})
        return attrs


class ControllerSerializer(SectionSerializer):
    K = serializers.FloatField()
    Ti = serializers.FloatField(default=0.0)
    Td = serializers.FloatField(default=0.0)
    delta = serializers.FloatField(min_value=0.0, default=1.0)

    def get_fields(self):
        # 'lambda' is a keyword, so it cannot be declared as a class attribute
        fields = super().get_fields()
        fields['lambda'] = serializers.FloatField(min_value=0.0, default=1.0)
        return fields


class SetpointSerializer(SectionSerializer):
    onset = serializers.IntegerField(min_value=0, default=2)
    amplitude = serializers.FloatField(default=1.0)


class FrequencySerializer(SectionSerializer):
    omegas = FloatListField(required=False)
    omega_min = serializers.FloatField(required=False)
    omega_max = serializers.FloatField(required=False)
    n_points = serializers.IntegerField(min_value=1, required=False)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        grid = ('omega_min', 'omega_max', 'n_points')
        if 'omegas' in attrs:
            extra = [name for name in grid if name in attrs]
            if extra:
                raise serializers.ValidationError({extra[0]: 'give either omegas or a grid, not both'})
            return attrs
        for name in grid:
            if name not in attrs:
                raise serializers.ValidationError({name: 'This field is required.'}, code='required')
        if not 0 < attrs['omega_min'] <= attrs['omega_max']:
            raise serializers.ValidationError({'omega_max': 'need 0 < omega_min <= omega_max'})
        return attrs


class ExampleSerializer(SectionSerializer):
    a2 = serializers.FloatField(required=False)
    a1 = serializers.FloatField(required=False)
    a0 = serializers.FloatField(required=False)
    beta2 = serializers.FloatField(min_value=0.0, required=False)
    beta1 = serializers.FloatField(min_value=0.0, required=False)
    Td = serializers.FloatField(required=False)
    K = serializers.FloatField(required=False)
    delta = serializers.FloatField(min_value=0.0, required=False)


class ExpectSerializer(serializers.Serializer):
    """
    [expect] holds '<column>_<final|max|min> = value' checks plus a tolerance
    """

    STATISTICS = ('final', 'max', 'min')

    tolerance = serializers.FloatField(min_value=0.0, default=1e-6)

    def __init__(self, *args, columns=(), **kwargs):
        self.columns = tuple(columns)
        super().__init__(*args, **kwargs)

    def validate(self, attrs):
        checks = {}
        errors = {}
        for key, raw in self.initial_data.items():
            if key == 'tolerance':
                continue
            column, _, statistic = key.rpartition('_')
            if column not in self.columns or statistic not in self.STATISTICS:
                errors[key] = f'unknown check, expected <column>_<final|max|min> over {", ".join(self.columns)}'
                continue
            try:
                checks[(column, statistic)] = float(raw)
            except ValueError:
                errors[key] = 'A valid number is required.'
        if errors:
            raise serializers.ValidationError(errors)
        attrs['checks'] = checks
        return attrs
