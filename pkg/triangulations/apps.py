from django.apps import AppConfig


class TriangulationsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'triangulations'
    verbose_name = 'Triangulations'
