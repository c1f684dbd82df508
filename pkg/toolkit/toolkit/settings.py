import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file
from dotenv import load_dotenv
load_dotenv(os.path.join(BASE_DIR, '.env.development'))

# No sessions, cookies or signing are used; the key only satisfies Django
SECRET_KEY = os.environ.get('SECRET_KEY', 'fracdisc-local-key')

DEBUG = os.environ.get('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third-party apps
    'rest_framework',

    # Local apps
    'fracdisc',
]

# The toolkit keeps no state between runs
DATABASES = {}

# REST framework is used for its serializers only
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}


# Simulation Configuration


def thread_count(raw, default):
    """
    Parse FRACDISC_THREADS; unset or non-integer values give default, the rest are clamped to >= 1
    """
    try:
        return max(1, int(raw))
    except (TypeError, ValueError):
        return default


# Upper bound on concurrent runs in --sweep mode
FRACDISC_THREADS = thread_count(os.environ.get('FRACDISC_THREADS'), os.cpu_count() or 1)


# Logging Configuration
LOG_LEVEL = os.environ.get('LOG_LEVEL', 'WARNING')
LOG_FILE = os.environ.get('FRACDISC_LOG_FILE')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
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
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': True,
        },
        'fracdisc': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}

if LOG_FILE:
    os.makedirs(os.path.dirname(os.path.abspath(LOG_FILE)), exist_ok=True)
    LOGGING['handlers']['file'] = {
        'level': LOG_LEVEL,
        'class': 'logging.FileHandler',
        'filename': LOG_FILE,
        'formatter': 'verbose',
    }
    LOGGING['loggers']['fracdisc']['handlers'].append('file')

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
