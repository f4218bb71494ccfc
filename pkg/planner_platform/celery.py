"""
Celery configuration for planner_platform project.

Las corridas de benchmark pueden despacharse al worker con
``manage.py bench <config> --backend celery``.
"""
import os
from celery import Celery

# Set the default Django settings module for the 'celery' program.
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'planner_platform.settings')

app = Celery('planner_platform')

# Using a string here means the worker doesn't have to serialize
# the configuration object to child processes.
app.config_from_object('django.conf:settings', namespace='CELERY')

# Load task modules from all registered Django apps.
app.autodiscover_tasks()

# Una corrida de planificación ocupa un núcleo durante todo su presupuesto
app.conf.worker_prefetch_multiplier = 1
app.conf.task_acks_late = True
