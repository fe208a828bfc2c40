from django.apps import AppConfig


class BosonsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'bosons'
