from django.apps import AppConfig


class GeoleadConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.geolead'
    verbose_name = 'Camino guía geométrico'
