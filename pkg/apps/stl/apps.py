from django.apps import AppConfig


class StlConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.stl'
    verbose_name = 'Lógica temporal de señales'
