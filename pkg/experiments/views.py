from rest_framework import generics, status
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from rest_framework.views import APIView
from drf_yasg.utils import swagger_auto_schema
from drf_yasg import openapi

from analysis.bounds import prop1_log_tv_bound, theorem1_bound
from core.exceptions import DetectionLabError
from core.permissions import IsAdminOrReadOnly
from experiments.models import ExperimentRun
from experiments.serializers import (
    CostBoundInputSerializer, ExperimentRunSerializer,
    SpectralRequestSerializer, TVBoundInputSerializer
)
from experiments.services import spectral_report


# --- Run history ---

class ExperimentRunListView(generics.ListAPIView):
    """List recorded runs, newest first. Supports filtering by command, status and scenario."""
    serializer_class = ExperimentRunSerializer
    permission_classes = [IsAdminOrReadOnly]

    def get_queryset(self):
        queryset = ExperimentRun.objects.all()
        for field in ('command', 'status'):
            value = self.request.query_params.get(field)
            if value:
                queryset = queryset.filter(**{field: value})

        scenario = self.request.query_params.get('scenario')
        if scenario:
            queryset = queryset.filter(scenario_name__icontains=scenario)

        return queryset

    @swagger_auto_schema(
        operation_summary="List recorded runs",
        manual_parameters=[
            openapi.Parameter('command', openapi.IN_QUERY, description="simulate, verify or spectral", type=openapi.TYPE_STRING),
            openapi.Parameter('status', openapi.IN_QUERY, description="success, pass or fail", type=openapi.TYPE_STRING),
            openapi.Parameter('scenario', openapi.IN_QUERY, description="Search by scenario name", type=openapi.TYPE_STRING),
        ]
    )
    def get(self, request, *args, **kwargs):
        return super().get(request, *args, **kwargs)


class ExperimentRunDetailView(generics.RetrieveDestroyAPIView):
    """Get one recorded run with its full summary; staff may delete it."""
    queryset = ExperimentRun.objects.all()
    serializer_class = ExperimentRunSerializer
    permission_classes = [IsAdminOrReadOnly]

    @swagger_auto_schema(operation_summary="Get a recorded run")
    def get(self, request, *args, **kwargs):
        return super().get(request, *args, **kwargs)

    @swagger_auto_schema(operation_summary="Delete a recorded run (staff only)")
    def delete(self, request, *args, **kwargs):
        return super().delete(request, *args, **kwargs)


# --- Calculators ---

class BoundView(APIView):
    """Evaluate a closed-form bound from explicit inputs."""
    permission_classes = [AllowAny]
    input_serializer = None

    def evaluate(self, data):
        raise NotImplementedError

    def post(self, request, *args, **kwargs):
        serializer = self.input_serializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        try:
            report = self.evaluate(serializer.validated_data)
        except DetectionLabError as exc:
            return Response({"error": str(exc)}, status=status.HTTP_400_BAD_REQUEST)
        return Response(report.to_dict(), status=status.HTTP_200_OK)


class CostBoundView(BoundView):
    input_serializer = CostBoundInputSerializer

    def evaluate(self, data):
        return theorem1_bound(data['B'], data['I'], data['m'], data['n'], data['delta'], data['sigma2'])

    @swagger_auto_schema(
        operation_summary="High-probability bound on the decentralization cost",
        request_body=CostBoundInputSerializer,
    )
    def post(self, request, *args, **kwargs):
        return super().post(request, *args, **kwargs)


class TVBoundView(BoundView):
    input_serializer = TVBoundInputSerializer

    def evaluate(self, data):
        return prop1_log_tv_bound(
            data['B'], data['I'], data['m'], data['n'], data['delta'], data['sigma2'], data['t']
        )

    @swagger_auto_schema(
        operation_summary="High-probability bound on the log TV error at time t",
        request_body=TVBoundInputSerializer,
    )
    def post(self, request, *args, **kwargs):
        return super().post(request, *args, **kwargs)


class SpectralView(APIView):
    """Spectral report of a network section; networks disconnected in expectation are reported, not rejected."""
    permission_classes = [AllowAny]

    @swagger_auto_schema(
        operation_summary="Expected matrix, sigma2, spectral gap and mixing-deviation sums",
        request_body=SpectralRequestSerializer,
    )
    def post(self, request, *args, **kwargs):
        serializer = SpectralRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        report = spectral_report(
            serializer.validated_data['network']['process'],
            serializer.validated_data['mixing_times'],
        )
        return Response(report, status=status.HTTP_200_OK)
