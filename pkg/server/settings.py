"""
Django settings for the seminorm-lab project.

All runtime knobs come from environment variables (or a .env file) through
python-decouple. The project has no database and serves no HTTP; Django
provides the app layout, management commands, logging and the test runner.
"""

from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = config('DJANGO_SECRET_KEY', default='seminorm-lab-local-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'seminorms',
]

DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# REST Framework: only the parser and serializers are used, for matrix files
REST_FRAMEWORK = {
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'STRICT_JSON': True,
}


# Logging: stderr only, standard output carries the JSON report

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'seminorms': {
            'handlers': ['console'],
            'level': config('SEMINORM_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
    },
}


# Semi-norm engine and verification suite

SEMINORMS = {
    # Concurrent optimizer starts / suite trials; 0 runs serially
    'THREADS': config('SEMINORM_THREADS', default=0, cast=int),
    'OPTIMIZER': {
        'STARTS': config('SEMINORM_STARTS', default=32, cast=int),
        'MAX_ITERATIONS': config('SEMINORM_MAX_ITERATIONS', default=500, cast=int),
        'GRADIENT_TOLERANCE': config('SEMINORM_GRADIENT_TOLERANCE', default=1e-10, cast=float),
        'OBJECTIVE_TOLERANCE': config('SEMINORM_OBJECTIVE_TOLERANCE', default=1e-12, cast=float),
        'FD_STEP': config('SEMINORM_FD_STEP', default=1e-6, cast=float),
    },
    'SUITE_OPTIMIZER': {
        'STARTS': config('SEMINORM_SUITE_STARTS', default=8, cast=int),
        'MAX_ITERATIONS': config('SEMINORM_SUITE_MAX_ITERATIONS', default=300, cast=int),
    },
    'DEFAULT_STATE_CLASS': config('SEMINORM_STATE_CLASS', default='mixed'),
    'SUITE_STATE_CLASS': config('SEMINORM_SUITE_STATE_CLASS', default='pure'),
    'RELATIVE_TOLERANCE': config('SEMINORM_RELATIVE_TOLERANCE', default=1e-7, cast=float),
    'ORACLE_GRID': config('SEMINORM_ORACLE_GRID', default=2048, cast=int),
}
