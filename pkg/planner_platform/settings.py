"""
Django settings for planner_platform project.
"""

import os
from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-change-me-in-production')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1', cast=lambda v: [s.strip() for s in v.split(',')])

# Application definition
DJANGO_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
]

LOCAL_APPS = [
    'apps.core',
    'apps.stl',
    'apps.monitor',
    'apps.world',
    'apps.dynamics',
    'apps.taskplan',
    'apps.geolead',
    'apps.kinoplanner',
    'apps.highlevel',
    'apps.bench',
]

INSTALLED_APPS = DJANGO_APPS + LOCAL_APPS

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'planner_platform.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'planner_platform.wsgi.application'

# Database
# sqlite por defecto; postgres cuando DB_ENGINE=django.db.backends.postgresql
DB_ENGINE = config('DB_ENGINE', default='django.db.backends.sqlite3')

if DB_ENGINE.endswith('sqlite3'):
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'NAME': config('DB_NAME', default=str(BASE_DIR / 'db.sqlite3')),
        }
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'NAME': config('DB_NAME', default='planner_db'),
            'USER': config('DB_USER', default='postgres'),
            'PASSWORD': config('DB_PASSWORD', default='postgres'),
            'HOST': config('DB_HOST', default='localhost'),
            'PORT': config('DB_PORT', default='5432'),
        }
    }

# Internationalization
LANGUAGE_CODE = 'es-es'
TIME_ZONE = 'America/Bogota'
USE_I18N = True
USE_TZ = True

# Static files (CSS, JavaScript, Images)
STATIC_URL = '/static/'
STATIC_ROOT = BASE_DIR / 'staticfiles'

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Redis Configuration
REDIS_URL = config('REDIS_URL', default='redis://localhost:6379/0')

# Celery Configuration
CELERY_BROKER_URL = REDIS_URL
CELERY_RESULT_BACKEND = REDIS_URL
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE

# Planificador: salidas y reloj determinista
PLANNER_OUTPUT_DIR = Path(config('PLANNER_OUTPUT_DIR', default=str(BASE_DIR / 'results')))
PLANNER_ITERATION_CLOCK_HZ = config('PLANNER_ITERATION_CLOCK_HZ', default=2000.0, cast=float)
PLANNER_TASKPLAN_MAX_GOALS = config('PLANNER_TASKPLAN_MAX_GOALS', default=8, cast=int)
PLANNER_RUN_ACCEPTANCE = config('PLANNER_RUN_ACCEPTANCE', default=False, cast=bool)

# Valores por defecto; cada escenario puede sobrescribirlos campo a campo
DYNAMICS_DEFAULTS = {
    'wheelbase': 0.3,
    'v_min': 0.0,
    'v_max': 2.0,
    'delta_max': 0.5,
}

PLANNER_DEFAULTS = {
    's_r': 1.0,
    'r_prop': 1.5,
    't_max': 1.0,
    'n_max': 1_000_000,
    'time_budget': 60.0,
    'dt': 0.05,
    'delta_v': 0.5,
    'delta_s': 0.25,
    'goal_epsilon': 0.3,
    'theta_weight': 0.3,
    'time_weight': 0.0,
    'metric_period': 1000,
    'layer_restricted_selection': True,
    'anytime': True,
}

LEAD_DEFAULTS = {
    'iterations': 5000,
    'goal_bias': 0.05,
    'step': 0.5,
    'sampler_attempts': 1000,
}

BENCHMARK_DEFAULTS = {
    'runs': 20,
    'time_budget': 60.0,
    'full_runs': 60,
    'full_time_budget': 300.0,
    'sample_period': 1.0,
    'base_seed': 0,
    'workers': 1,
}

LOG_LEVEL = config('LOG_LEVEL', default='INFO')

# Logging Configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': 'INFO',
            'class': 'logging.FileHandler',
            'filename': BASE_DIR / 'logs' / 'planner.log',
            'formatter': 'verbose',
        },
        'console': {
            'level': 'INFO',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['console', 'file'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
    'root': {
        'handlers': ['console', 'file'],
        'level': 'WARNING',
    },
}

# Create logs directory if it doesn't exist
os.makedirs(BASE_DIR / 'logs', exist_ok=True)
