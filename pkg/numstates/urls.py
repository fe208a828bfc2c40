"""
URL configuration for the numstates project.

The numio API mirrors the management command; the schema and its
Swagger view come from drf-spectacular.
"""
from django.urls import include, path
from drf_spectacular.views import (
    SpectacularAPIView,
    SpectacularSwaggerView,
)

urlpatterns = [
    path('api/schema/', SpectacularAPIView.as_view(), name='schema'),
    path('api/docs/', SpectacularSwaggerView.as_view(url_name='schema')),

    path('api/numio/', include('numio.urls')),
]
