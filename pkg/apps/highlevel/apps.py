from django.apps import AppConfig


class HighlevelConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.highlevel'
    verbose_name = 'Orquestación de alto nivel'
