from django.apps import AppConfig


class TaskplanConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.taskplan'
    verbose_name = 'Órdenes candidatos de metas'
