"""
URL configuration for planner_platform project.

Solo se expone el admin para consultar las corridas de benchmark guardadas.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
