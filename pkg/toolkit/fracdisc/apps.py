from django.apps import AppConfig


class FracdiscConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'fracdisc'
    verbose_name = 'Discrete fractional calculus'
