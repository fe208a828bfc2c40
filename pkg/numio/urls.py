from django.urls import include, path
from rest_framework.routers import DefaultRouter

from .views import NumioViewSet

router = DefaultRouter()
router.register(r'', NumioViewSet, basename='numio')

urlpatterns = [
    path('', include(router.urls)),
]
