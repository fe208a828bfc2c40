from django.conf import settings
from django.utils.translation import gettext_lazy as _
from rest_framework import serializers

from .services import STYLES


class LiteralSerializer(serializers.Serializer):
    """A single state or binary literal."""
    literal = serializers.CharField(trim_whitespace=True)

    def validate_literal(self, value):
        if not value:
            raise serializers.ValidationError(_("Literal cannot be empty."))
        return value


class ReduceSerializer(LiteralSerializer):
    style = serializers.ChoiceField(choices=STYLES, default='binary')
    trace = serializers.BooleanField(default=False)
    fermion = serializers.BooleanField(default=False)


class ValueSerializer(LiteralSerializer):
    style = serializers.ChoiceField(choices=STYLES, required=False, allow_null=True, default=None)
    reduce = serializers.BooleanField(default=False)


class CombineSerializer(serializers.Serializer):
    x = serializers.CharField()
    y = serializers.CharField()
    style = serializers.ChoiceField(choices=STYLES, default='binary')
    allow_nonstandard = serializers.BooleanField(default=False)
    fermion = serializers.BooleanField(default=False)


class AccumulateSerializer(serializers.Serializer):
    lines = serializers.ListField(child=serializers.CharField(allow_blank=True, trim_whitespace=False), allow_empty=True)
    style = serializers.ChoiceField(choices=STYLES, default='binary')
    show_nonstandard = serializers.BooleanField(default=False)


class ApproxSerializer(serializers.Serializer):
    p = serializers.IntegerField()
    q = serializers.IntegerField()
    k = serializers.IntegerField(min_value=0)
    style = serializers.ChoiceField(choices=STYLES, default='binary')

    def validate_q(self, value):
        """Reject a zero denominator."""
        if value == 0:
            raise serializers.ValidationError(_("The denominator q must be nonzero."))
        return value


class TraceAddSerializer(serializers.Serializer):
    psi = serializers.CharField()
    psi2 = serializers.CharField()
    merge = serializers.BooleanField(default=False)
    style = serializers.ChoiceField(choices=STYLES, default='fraction')


class SelftestSerializer(serializers.Serializer):
    seed = serializers.IntegerField(default=settings.NUMSTATES['DEFAULT_SEED'])
    samples = serializers.IntegerField(min_value=1, max_value=1000, default=100)


class ReportSerializer(serializers.Serializer):
    """Printed lines plus the structured results behind them."""
    lines = serializers.ListField(child=serializers.CharField())
    data = serializers.DictField()
