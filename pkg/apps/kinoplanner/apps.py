from django.apps import AppConfig


class KinoplannerConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.kinoplanner'
    verbose_name = 'Planificador cinodinámico'
