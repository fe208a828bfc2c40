import logging

from drf_spectacular.utils import OpenApiResponse, extend_schema
from rest_framework import status, viewsets
from rest_framework.decorators import action
from rest_framework.permissions import AllowAny
from rest_framework.response import Response

from bosons.exceptions import InvariantBreach

from .selftest import run_all
from .serializers import (
    AccumulateSerializer,
    ApproxSerializer,
    CombineSerializer,
    LiteralSerializer,
    ReduceSerializer,
    ReportSerializer,
    SelftestSerializer,
    TraceAddSerializer,
    ValueSerializer,
)
from .services import NumioService, Report

logger = logging.getLogger(__name__)

REPORT_RESPONSES = {
    200: OpenApiResponse(response=ReportSerializer),
    400: OpenApiResponse(description='Malformed literal or invalid input.'),
}


class NumioViewSet(viewsets.ViewSet):
    """HTTP mirror of the numio subcommands; every action answers with a report."""
    permission_classes = [AllowAny]

    # ---------------------------
    # Helper: validate, run, serialize
    # ---------------------------
    def _run(self, request, serializer_class, service):
        serializer = serializer_class(data=request.data)
        serializer.is_valid(raise_exception=True)
        try:
            report = service(**serializer.validated_data)
        except InvariantBreach:
            logger.error(f"Internal invariant failed in {self.action}", exc_info=True)
            raise
        return Response(ReportSerializer(report).data, status=status.HTTP_200_OK)

    @extend_schema(request=ReduceSerializer, responses=REPORT_RESPONSES)
    @action(detail=False, methods=['post'], url_path='reduce')
    def reduce(self, request):
        return self._run(request, ReduceSerializer, lambda literal, style, fermion, trace: NumioService.reduce(
            literal, style, fermion, trace,
        ))

    @extend_schema(request=ValueSerializer, responses=REPORT_RESPONSES)
    @action(detail=False, methods=['post'], url_path='value')
    def value(self, request):
        return self._run(request, ValueSerializer, lambda literal, style, reduce: NumioService.value(literal, style, reduce))

    @extend_schema(request=CombineSerializer, responses=REPORT_RESPONSES)
    @action(detail=False, methods=['post'], url_path='add')
    def add(self, request):
        return self._run(request, CombineSerializer, lambda x, y, **flags: NumioService.combine(x, y, subtract=False, **flags))

    @extend_schema(request=CombineSerializer, responses=REPORT_RESPONSES)
    @action(detail=False, methods=['post'], url_path='sub')
    def sub(self, request):
        return self._run(request, CombineSerializer, lambda x, y, **flags: NumioService.combine(x, y, subtract=True, **flags))

    @extend_schema(request=AccumulateSerializer, responses=REPORT_RESPONSES)
    @action(detail=False, methods=['post'], url_path='accumulate')
    def accumulate(self, request):
        return self._run(request, AccumulateSerializer, NumioService.accumulate)

    @extend_schema(request=ApproxSerializer, responses=REPORT_RESPONSES)
    @action(detail=False, methods=['post'], url_path='approx')
    def approx(self, request):
        return self._run(request, ApproxSerializer, NumioService.approx)

    @extend_schema(request=LiteralSerializer, responses=REPORT_RESPONSES)
    @action(detail=False, methods=['post'], url_path='fermionize')
    def fermionize(self, request):
        return self._run(request, LiteralSerializer, lambda literal: NumioService.fermionize(literal))

    @extend_schema(request=TraceAddSerializer, responses=REPORT_RESPONSES)
    @action(detail=False, methods=['post'], url_path='trace-add')
    def trace_add(self, request):
        return self._run(request, TraceAddSerializer, lambda psi, psi2, merge, style: NumioService.trace_add(
            psi, psi2, merge, style,
        ))

    @extend_schema(request=SelftestSerializer, responses={200: OpenApiResponse(response=ReportSerializer)})
    @action(detail=False, methods=['post'], url_path='selftest')
    def selftest(self, request):
        def service(seed, samples):
            results = run_all(seed, samples)
            return Report(
                lines=[r.summary() for r in results],
                data={'seed': seed, 'passed': all(r.passed for r in results)},
            )
        return self._run(request, SelftestSerializer, service)
