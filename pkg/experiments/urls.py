from django.urls import path
from .views import (
    ExperimentRunListView, ExperimentRunDetailView,
    CostBoundView, TVBoundView, SpectralView
)

urlpatterns = [
    # Run history
    path('runs/', ExperimentRunListView.as_view(), name='run-list'),
    path('runs/<int:pk>/', ExperimentRunDetailView.as_view(), name='run-detail'),

    # Calculators
    path('bounds/theorem1/', CostBoundView.as_view(), name='bound-theorem1'),
    path('bounds/prop1/', TVBoundView.as_view(), name='bound-prop1'),
    path('spectral/', SpectralView.as_view(), name='spectral'),
]
