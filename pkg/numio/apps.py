from django.apps import AppConfig


class NumioConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'numio'
    verbose_name = 'Number state I/O'
