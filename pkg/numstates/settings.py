"""
Django settings for the numstates project.

Occupation-number states of complex dyadic rationals: the library apps,
the `numio` management command and its HTTP mirror share these settings.
"""

from pathlib import Path

from decouple import config

# ============================================================
# BASE DIRECTORY
# ============================================================

BASE_DIR = Path(__file__).resolve().parent.parent


# ============================================================
# SECURITY
# ============================================================

SECRET_KEY = config('NUMSTATES_SECRET_KEY', default='django-insecure-numstates-local-only')

DEBUG = config('NUMSTATES_DEBUG', default=False, cast=bool)

ALLOWED_HOSTS: list[str] = config(
    'NUMSTATES_ALLOWED_HOSTS',
    default='localhost,127.0.0.1',
    cast=lambda v: [host.strip() for host in v.split(',') if host.strip()],
)


# ============================================================
# APPLICATIONS
# ============================================================

DJANGO_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.staticfiles',
]

THIRD_PARTY_APPS = [
    'rest_framework',
    'drf_spectacular',
]

LOCAL_APPS = [
    'dyadic',
    'bosons',
    'fermions',
    'superposition',
    'numio',
]

INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS


# ============================================================
# MIDDLEWARE
# ============================================================

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
]


# ============================================================
# URLS
# ============================================================

ROOT_URLCONF = 'numstates.urls'


# ============================================================
# TEMPLATES
# ============================================================

# Only the Swagger UI page is rendered from a template.
TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
            ],
        },
    },
]


# ============================================================
# DATABASE
# ============================================================

# Nothing is persisted; the engine is only here for the test runner.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# ============================================================
# INTERNATIONALIZATION
# ============================================================

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'

USE_I18N = True
USE_TZ = True


# ============================================================
# STATIC FILES
# ============================================================

STATIC_URL = 'static/'


# ============================================================
# DEFAULT PRIMARY KEY
# ============================================================

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# ============================================================
# DJANGO REST FRAMEWORK
# ============================================================

REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'UNAUTHENTICATED_USER': None,
    'DEFAULT_SCHEMA_CLASS': 'drf_spectacular.openapi.AutoSchema',
}


# ============================================================
# DRF SPECTACULAR (SWAGGER / OPENAPI)
# ============================================================

SPECTACULAR_SETTINGS = {
    'TITLE': 'numstates API',
    'DESCRIPTION': 'Complex dyadic rationals as boson and fermion occupation-number states',
    'VERSION': '1.0.0',
    'SERVE_INCLUDE_SCHEMA': False,
    'SERVERS': [
        {
            'url': 'http://localhost:8000',
            'description': 'Local development server',
        },
    ],
}


# ============================================================
# NUMBER STATES
# ============================================================

NUMSTATES = {
    # amplitudes below this magnitude are dropped from superpositions
    'PRUNE_THRESHOLD': 1e-15,
    'NORMALIZATION_TOLERANCE': 1e-12,
    'EXPECTATION_TOLERANCE': 1e-9,
    # largest |site| or |exponent| accepted; beyond it is an overflow error
    'SITE_LIMIT': 2**63 - 1,
    'DEFAULT_SEED': config('NUMSTATES_SEED', default=20240101, cast=int),
    'SELFTEST_SAMPLES': config('NUMSTATES_SELFTEST_SAMPLES', default=10_000, cast=int),
}


# ============================================================
# LOGGING
# ============================================================

NUMSTATES_LOG_LEVEL = config('NUMSTATES_LOG_LEVEL', default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': NUMSTATES_LOG_LEVEL,
            'propagate': False,
        }
        for app in LOCAL_APPS
    },
}
