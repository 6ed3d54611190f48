from django.apps import AppConfig


class SeminormsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'seminorms'
    verbose_name = 'Mean-interpolated semi-norms'
